"""Covariance-level simulation of quantum teamwork teleportation.

Each input mode is sent through its own unit-gain Braunstein-Kimble
channel, which at covariance level adds ``2 e^{-2 r_j}`` to both
quadrature variances of mode ``j``.  The fidelity with the (pure) input
is then the Gaussian overlap from :func:`symplectic.gaussian_fidelity_pure`.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import symplectic as sp
from .circuits import psi4, tmss_cm
from .graphs import AdjacencyMatrix, graph_state_cm
from .mmes import NU_TOL, Bipartition, ChannelSpec, effective_squeezings

CSV_HEADER = ("r", "F_14", "F_12", "F_13")

# 2|2 splits of psi4 in the column order of the curve table (0-based modes)
PSI4_SPLITS = {"F_14": (0, 3), "F_12": (0, 1), "F_13": (0, 2)}


def bk_teleport_cm(cov_in: np.ndarray, channels: ChannelSpec | Sequence[float]) -> np.ndarray:
    """Output covariance after mode-wise unit-gain teleportation."""
    squeezings = channels.squeezings if isinstance(channels, ChannelSpec) else tuple(channels)
    k = sp.n_modes(cov_in)
    if len(squeezings) != k:
        raise ValueError(f"{len(squeezings)} channels for a {k}-mode input")
    noise = 2.0 * np.exp(-2.0 * np.asarray(squeezings, dtype=float))
    return np.asarray(cov_in, dtype=float) + np.diag(np.concatenate([noise, noise]))


def eq1_fidelity(r_a: float, z: float) -> float:
    """Two-mode squeezed input ``z`` through two channels of squeezing ``r_a``."""
    if r_a < 0:
        raise ValueError("r_a must be non-negative")
    return float(np.exp(2 * r_a) / (2 * (np.cosh(2 * r_a) + np.cosh(2 * z))))


def f1(r: float) -> float:
    """Vacuum teleported through a single TMSS channel of squeezing ``r``."""
    if r < 0:
        raise ValueError("r must be non-negative")
    return float((1 + np.tanh(r)) / 2)


def fk_bounds(k: int, r: float, z: float) -> tuple[float, float]:
    """``((F_1 / cosh z)^K, F_1^K)`` for a K-mode symmetric input of squeezing ``z``."""
    if k < 1:
        raise ValueError("K must be at least 1")
    one = f1(r)
    return float((one / np.cosh(z)) ** k), float(one**k)


@dataclass
class FidelityReport:
    fidelity: float
    channels: ChannelSpec
    assignment: tuple[int, ...]
    bipartition: Optional[Bipartition] = None
    input: str = ""

    def to_dict(self) -> dict:
        out = {
            "fidelity": self.fidelity,
            "channels": list(self.channels.squeezings),
            "assignment": [j + 1 for j in self.assignment],
            "input": self.input,
        }
        if self.bipartition is not None:
            out["block_a"] = self.bipartition.labels()
            out["block_b"] = [m + 1 for m in self.bipartition.block_b]
        return out


def teleport_fidelity(
    cov_in: np.ndarray, channels: ChannelSpec, assignment: Optional[Sequence[int]] = None
) -> tuple[float, tuple[int, ...]]:
    """Fidelity of teleporting ``cov_in`` with channel ``assignment[j]`` serving input mode ``j``."""
    k = len(channels)
    if assignment is None:
        assignment = tuple(range(k))
    assignment = tuple(int(j) for j in assignment)
    if sorted(assignment) != list(range(k)):
        raise ValueError("assignment must be a permutation of the channels")
    routed = [channels.squeezings[j] for j in assignment]
    out = bk_teleport_cm(cov_in, routed)
    return sp.gaussian_fidelity_pure(cov_in, out), assignment


def teamwork_fidelity(
    resource: Union[AdjacencyMatrix, np.ndarray],
    p: Bipartition,
    cov_in: np.ndarray,
    r: Optional[float] = None,
    assignment: Optional[Sequence[int]] = None,
    label: str = "",
    tol: float = NU_TOL,
) -> FidelityReport:
    """Teleport a pure K-mode input from team A to team B of a shared resource.

    ``resource`` is a pure covariance matrix, or an adjacency matrix
    together with the squeezing ``r`` of its graph state.  Channels are
    the effective squeezings across ``p`` in descending order; by default
    input mode ``j`` uses channel ``j``.
    """
    if isinstance(resource, AdjacencyMatrix):
        if r is None:
            raise ValueError("a graph resource needs its squeezing r")
        resource = graph_state_cm(resource, r)
    k = sp.n_modes(cov_in)
    if k != p.k:
        raise ValueError(f"input has {k} modes but team A has {p.k}")
    if not sp.is_pure(cov_in, tol):
        raise sp.NotPhysicalError("input state must be pure")
    channels = effective_squeezings(resource, p, tol)
    fidelity, assignment = teleport_fidelity(cov_in, channels, assignment)
    return FidelityReport(fidelity, channels, assignment, p, label)


def fidelity_curve(t: float, z: float, r_grid: Iterable[float]) -> list[tuple[float, float, float, float]]:
    """Rows ``(r, F_14, F_12, F_13)`` for a two-mode squeezed input sent over :func:`psi4`."""
    if not 0 < t < 1:
        raise ValueError("transmittivity must lie in (0, 1)")
    if z < 0:
        raise ValueError("z must be non-negative")
    grid = [float(r) for r in r_grid]
    if not grid:
        raise ValueError("empty squeezing grid")
    cov_in = tmss_cm(z)
    rows = []
    for r in grid:
        resource = psi4(r, t)
        fs = [
            teamwork_fidelity(resource, Bipartition(PSI4_SPLITS[col], 4), cov_in).fidelity
            for col in CSV_HEADER[1:]
        ]
        rows.append((r, *fs))
    return rows


def format_curve_csv(rows: Iterable[Sequence[float]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def write_curve_csv(rows: Iterable[Sequence[float]], path: str | os.PathLike) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(format_curve_csv(rows))
