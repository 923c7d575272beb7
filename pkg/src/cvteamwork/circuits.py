"""Gaussian circuit primitives and the explicit four-mode teamwork resource."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import symplectic as sp
from .mmes import Bipartition

OP_TOL = 1e-12


@dataclass(frozen=True)
class SymplecticOp:
    """A Gaussian unitary acting on second moments as ``cov -> S cov S^T``."""

    matrix: np.ndarray
    description: str = ""

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        scale = max(1.0, float(np.max(np.abs(m)))) ** 2
        res = sp.symplectic_residual(m)
        if res > OP_TOL * scale:
            raise ValueError(f"{self.description or 'operation'} is not symplectic (residual {res:.3e})")

    @property
    def n_modes(self) -> int:
        return sp.n_modes(self.matrix)

    def __matmul__(self, other: "SymplecticOp") -> "SymplecticOp":
        label = " . ".join(d for d in (self.description, other.description) if d)
        return SymplecticOp(self.matrix @ other.matrix, label)

    def inverse(self) -> "SymplecticOp":
        J = sp.symplectic_form(self.n_modes)
        return SymplecticOp(-J @ self.matrix.T @ J, f"inv({self.description})")

    def apply(self, cov: np.ndarray) -> np.ndarray:
        return sp.apply_symplectic(self.matrix, cov)

    def acts_only_on(self, modes: Sequence[int]) -> bool:
        """True if the operation is the identity outside ``modes``."""
        n = self.n_modes
        idx = sp.quadrature_indices(n, modes)
        rest = [i for i in range(2 * n) if i not in idx]
        m = self.matrix
        return (
            np.array_equal(m[np.ix_(rest, rest)], np.eye(len(rest)))
            and not m[np.ix_(rest, idx)].any()
            and not m[np.ix_(idx, rest)].any()
        )


def identity(n: int) -> SymplecticOp:
    return SymplecticOp(np.eye(2 * n), "I")


def _passive(rotation: np.ndarray) -> np.ndarray:
    n = rotation.shape[0]
    S = np.zeros((2 * n, 2 * n))
    S[:n, :n] = rotation
    S[n:, n:] = rotation
    return S


def _check_modes(n: int, *modes: int) -> None:
    for m in modes:
        if not 0 <= m < n:
            raise IndexError(f"mode {m} out of range for {n} modes")


def beam_splitter(i: int, j: int, t: float, n: int) -> SymplecticOp:
    """Beam splitter of transmittivity ``t`` between modes ``i`` and ``j``.

    ``x_i -> sqrt(t) x_i + sqrt(1-t) x_j`` and
    ``x_j -> -sqrt(1-t) x_i + sqrt(t) x_j``, identically for momenta.
    """
    if i == j:
        raise ValueError("beam splitter needs two distinct modes")
    _check_modes(n, i, j)
    if not 0 < t < 1:
        raise ValueError("transmittivity must lie in (0, 1)")
    a, b = np.sqrt(t), np.sqrt(1 - t)
    rot = np.eye(n)
    rot[i, i], rot[i, j], rot[j, i], rot[j, j] = a, b, -b, a
    return SymplecticOp(_passive(rot), f"BS({i},{j};t={t:.6g})")


def cz_gate(i: int, j: int, w: float, n: int) -> SymplecticOp:
    """``exp(i w x_i x_j)``: ``p_i -> p_i + w x_j`` and ``p_j -> p_j + w x_i``."""
    if i == j:
        raise ValueError("C_Z needs two distinct modes")
    _check_modes(n, i, j)
    S = np.eye(2 * n)
    S[n + i, j] += w
    S[n + j, i] += w
    return SymplecticOp(S, f"CZ({i},{j};{w:.6g})")


def single_mode_squeezer(i: int, s: float, n: int) -> SymplecticOp:
    """``x_i -> s x_i``, ``p_i -> p_i / s``."""
    _check_modes(n, i)
    if not s > 0:
        raise ValueError("squeezing factor must be positive")
    S = np.eye(2 * n)
    S[i, i] = s
    S[n + i, n + i] = 1.0 / s
    return SymplecticOp(S, f"Sq({i};{s:.6g})")


def phase_flip(i: int, n: int) -> SymplecticOp:
    """Rotation by pi: ``(x_i, p_i) -> (-x_i, -p_i)``."""
    _check_modes(n, i)
    S = np.eye(2 * n)
    S[i, i] = S[n + i, n + i] = -1.0
    return SymplecticOp(S, f"R({i};pi)")


def vacuum(n: int) -> np.ndarray:
    return np.eye(2 * n)


def squeezed_vacuum(r: float, n: int = 1, quadrature: str = "p") -> np.ndarray:
    """``n`` identical vacua squeezed in ``quadrature`` (``Var = e^{-2r}``)."""
    lo, hi = np.exp(-2 * r), np.exp(2 * r)
    if quadrature == "p":
        diag = [hi] * n + [lo] * n
    elif quadrature == "x":
        diag = [lo] * n + [hi] * n
    else:
        raise ValueError("quadrature must be 'x' or 'p'")
    return np.diag(diag)


def tmss_cm(r: float) -> np.ndarray:
    """Two-mode squeezed vacuum; ``r = 0`` is the vacuum."""
    if r < 0:
        raise ValueError("squeezing must be non-negative")
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    z = np.zeros((2, 2))
    return np.block([[np.array([[c, s], [s, c]]), z], [z, np.array([[c, -s], [-s, c]])]])


def graph_state_circuit(omega, r: float, order: Optional[Sequence[tuple[int, int]]] = None) -> np.ndarray:
    """Graph state built gate by gate: p-squeezed vacua, then one C_Z per edge."""
    n = omega.n
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if omega[a, b] != 0]
    if order is not None:
        if sorted(tuple(sorted(e)) for e in order) != edges:
            raise ValueError("order must list every edge exactly once")
        edges = [tuple(e) for e in order]
    cov = squeezed_vacuum(r, n, "p")
    for a, b in edges:
        cov = cz_gate(a, b, float(omega[a, b]), n).apply(cov)
    return cov


def psi4(r: float, t: float) -> np.ndarray:
    """Two TMSS pairs (modes 0-1 and 2-3) mixed on a beam splitter between modes 1 and 2.

    ``r = 0`` gives the four-mode vacuum.
    """
    if r < 0:
        raise ValueError("squeezing must be non-negative")
    return beam_splitter(1, 2, t, 4).apply(sp.direct_sum(tmss_cm(r), tmss_cm(r)))


def psi4_effective_squeezing(r: float, t: float, block_a: Sequence[int]) -> float:
    """Closed-form squeezing of the two equivalent pairs of :func:`psi4` across ``block_a``.

    ``block_a`` holds 0-based modes and must contain mode 0.
    """
    a = tuple(sorted(block_a))
    c2, s2 = np.cosh(2 * r) ** 2, np.sinh(2 * r) ** 2
    if a == (0, 3):
        return float(r)
    if a == (0, 1):
        return float(0.5 * np.arccosh(np.sqrt(c2 - t * s2)))
    if a == (0, 2):
        return float(0.5 * np.arccosh(np.sqrt(c2 - (1 - t) * s2)))
    raise ValueError(f"not a 2|2 split with mode 0 in block A: {block_a}")


def ghz_input_cm(k: int, z: float) -> np.ndarray:
    """Permutation-symmetric pure K-mode state with local squeezing ``z``."""
    if k < 1:
        raise ValueError("K must be at least 1")
    if z < 0:
        raise ValueError("z must be non-negative")
    up, dn = np.exp(2 * z), np.exp(-2 * z)
    ones = np.ones((k, k))
    eye = np.eye(k)
    xx = (up - dn) / k * ones + dn * eye
    pp = (dn - up) / k * ones + up * eye
    zero = np.zeros((k, k))
    return np.block([[xx, zero], [zero, pp]])


# -- local reduction of psi4 --------------------------------------------------------


@dataclass
class LocalReduction:
    """Local operations bringing :func:`psi4` into two TMSS pairs across a 2|2 split.

    ``op_a`` acts only on ``block_a`` and ``op_b`` only on ``block_b``.
    ``pairs`` lists the ``(a, b)`` modes forming each TMSS in the result,
    ``squeezers`` the solved single-mode factors by mode, and ``residual``
    the max deviation of the transformed state from the TMSS normal form
    with squeezing ``r_eff``.
    """

    bipartition: Bipartition
    op_a: SymplecticOp
    op_b: SymplecticOp
    pairs: list[tuple[int, int]]
    r_eff: float
    nus: tuple[float, ...]
    squeezers: dict[int, float] = field(default_factory=dict)
    residual: float = float("nan")
    normal_form: Optional[np.ndarray] = None


def _psi4_parameters(cov: np.ndarray) -> tuple[float, float]:
    c = cov[0, 0]
    r = 0.5 * np.arccosh(c)
    a, b = cov[0, 1], cov[0, 2]
    if a * a + b * b == 0:
        return float(r), float("nan")
    t = a * a / (a * a + b * b)
    return float(r), float(t)


def _tmss_pairs_cm(n: int, pairs: Sequence[tuple[int, int]], r: float) -> np.ndarray:
    cov = np.eye(2 * n)
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    for a, b in pairs:
        cov[a, a] = cov[b, b] = cov[n + a, n + a] = cov[n + b, n + b] = c
        cov[a, b] = cov[b, a] = s
        cov[n + a, n + b] = cov[n + b, n + a] = -s
    return cov


def psi4_local_reduction(cov: np.ndarray, p: Bipartition, tol: float = 1e-8) -> LocalReduction:
    """Local operations mapping :func:`psi4` to two TMSS pairs across ``p``.

    For ``A = {0, 3}`` only the inverse beam splitter on ``B`` is needed.
    For ``A = {0, 1}`` and ``A = {0, 2}`` each team mixes its modes on a
    50:50 beam splitter and then squeezes every mode by the factor that
    equalises its ``x`` and ``p`` variances, read from the state itself.
    Any leftover sign on a pair is removed by a phase flip on the ``B`` side.

    Raises:
        ValueError: if ``cov`` is not a four-mode :func:`psi4` state or the
            transformed state misses the normal form by more than ``tol``.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (8, 8) or p.n != 4 or p.k != 2:
        raise ValueError("expected a four-mode state and a 2|2 bipartition")
    r, t = _psi4_parameters(cov)
    if not 0 < t < 1 or not r > 0:
        raise ValueError("state does not look like psi4")
    ref = psi4(r, t)
    if np.max(np.abs(cov - ref)) > 1e-9 * max(1.0, np.max(np.abs(ref))):
        raise ValueError("state is not psi4(r, t) for any r, t")

    a_modes, b_modes = p.block_a, p.block_b
    if a_modes == (0, 3):
        op_a = identity(4)
        op_b = beam_splitter(1, 2, t, 4).inverse()
        squeezers: dict[int, float] = {}
    elif a_modes in ((0, 1), (0, 2)):
        bs = beam_splitter(a_modes[0], a_modes[1], 0.5, 4), beam_splitter(b_modes[0], b_modes[1], 0.5, 4)
        mixed = (bs[0] @ bs[1]).apply(cov)
        squeezers = {m: float((mixed[4 + m, 4 + m] / mixed[m, m]) ** 0.25) for m in range(4)}
        op_a = bs[0]
        op_b = bs[1]
        for m in a_modes:
            op_a = single_mode_squeezer(m, squeezers[m], 4) @ op_a
        for m in b_modes:
            op_b = single_mode_squeezer(m, squeezers[m], 4) @ op_b
    else:
        raise ValueError(f"unsupported bipartition {p}")

    out = (op_a @ op_b).apply(cov)
    pairs = []
    for a in a_modes:
        b = max(b_modes, key=lambda m: abs(out[a, m]))
        if out[a, b] < 0:
            op_b = phase_flip(b, 4) @ op_b
        pairs.append((a, b))
    out = (op_a @ op_b).apply(cov)

    nus = tuple(float(v) for v in sp.symplectic_eigenvalues(sp.reduce(out, a_modes))[::-1])
    r_eff = float(0.5 * np.arccosh(np.mean(nus)))
    target = _tmss_pairs_cm(4, pairs, r_eff)
    residual = float(np.max(np.abs(out - target)))
    if residual > tol * max(1.0, np.cosh(2 * r_eff)):
        raise ValueError(f"normal-form match failed (residual {residual:.3e})")
    return LocalReduction(p, op_a, op_b, pairs, r_eff, nus, squeezers, residual, out)
