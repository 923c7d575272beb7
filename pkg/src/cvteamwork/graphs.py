"""Gaussian weighted-graph states and the adjacency matrices that define them."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import lcm
from typing import Iterable, Sequence, Union

import numpy as np

Number = Union[int, Fraction, str]


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Symmetric, zero-diagonal matrix of exact rational edge weights.

    Entries are stored as :class:`fractions.Fraction`; integer inputs stay
    exact and strings such as ``"3/4"`` are parsed.  Indices are 0-based.
    """

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(_to_fraction(v) for v in row) for row in self.entries)
        n = len(rows)
        if n < 1:
            raise ValueError("adjacency matrix must have at least one vertex")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
        for i in range(n):
            if rows[i][i] != 0:
                raise ValueError(f"diagonal entry ({i}, {i}) is {rows[i][i]}, must be zero")
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i}, {j})")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Number]]) -> "AdjacencyMatrix":
        return cls(tuple(tuple(row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        return self.entries[i][j]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.entries])

    def is_integer(self) -> bool:
        return all(v.denominator == 1 for row in self.entries for v in row)

    def integer_rows(self) -> list[list[int]]:
        """Entries scaled by the lcm of all denominators (rank-preserving)."""
        scale = lcm(*(v.denominator for row in self.entries for v in row))
        return [[int(v * scale) for v in row] for row in self.entries]

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> list[list[Fraction]]:
        return [[self.entries[i][j] for j in cols] for i in rows]


def _to_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (bool, np.bool_)):
        raise TypeError("boolean is not a valid weight")
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, str):
        return Fraction(v.strip())
    if isinstance(v, (float, np.floating)):
        if not float(v).is_integer():
            raise TypeError(f"non-integer float weight {v!r}; pass a Fraction or 'p/q' string")
        return Fraction(int(v))
    raise TypeError(f"unsupported weight type {type(v).__name__}")


def graph_state_cm(omega: AdjacencyMatrix, r: float) -> np.ndarray:
    """Covariance matrix of the weighted graph state with squeezing ``r``.

    Blocks in ``xxpp`` order::

        XX = e^{2r} I,   XP = e^{2r} W,   PP = e^{-2r} I + e^{2r} W^2

    This is the inverse of the quadratic form in the Wigner exponent
    ``e^{2r} sum_a (p_a - sum_b W_ab x_b)^2 + e^{-2r} sum_a x_a^2``.
    """
    if not r > 0:
        raise ValueError("squeezing r must be positive")
    if not isinstance(omega, AdjacencyMatrix):
        omega = AdjacencyMatrix.from_rows(omega)
    w = omega.to_numpy()
    n = omega.n
    g = np.exp(2 * r)
    eye = np.eye(n)
    return np.block([[g * eye, g * w], [g * w, eye / g + g * (w @ w)]])


def graph_state_precision(omega: AdjacencyMatrix, r: float) -> np.ndarray:
    """Inverse covariance read directly off the Wigner exponent."""
    w = omega.to_numpy()
    n = omega.n
    g = np.exp(2 * r)
    eye = np.eye(n)
    return np.block([[eye / g + g * (w @ w), -g * w], [-g * w, g * eye]])


def nullifier(omega: AdjacencyMatrix, a: int) -> np.ndarray:
    """Coefficients of ``p_a - sum_b W_ab x_b`` over ``(x_1..x_N, p_1..p_N)``."""
    n = omega.n
    u = np.zeros(2 * n)
    u[:n] = -omega.to_numpy()[a]
    u[n + a] = 1.0
    return u


def toeplitz_family(n: int) -> AdjacencyMatrix:
    """Toeplitz adjacency with ``a_j = 0`` for odd ``j`` and ``(-1)^{j/2+1} j^2/4`` for even ``j``.

    Entry ``(a, b)`` carries ``a_{|a-b|+1}``, so offsets 1, 3, 5, ... hold
    1, -4, 9, -16, ... and even offsets are zero.
    """
    if n < 2:
        raise ValueError("need at least 2 vertices")
    coeff = [0] * (n + 1)
    for j in range(2, n + 1, 2):
        coeff[j] = (-1) ** (j // 2 + 1) * (j * j // 4)
    return AdjacencyMatrix.from_rows([[coeff[abs(a - b) + 1] for b in range(n)] for a in range(n)])


def complete_unweighted(n: int) -> AdjacencyMatrix:
    if n < 2:
        raise ValueError("need at least 2 vertices")
    return AdjacencyMatrix.from_rows([[int(a != b) for b in range(n)] for a in range(n)])


def random_graph(n: int, weight_bound: int | None = None, seed: int = 0) -> AdjacencyMatrix:
    """Random symmetric integer weights drawn uniformly from ``[-bound, bound]``.

    ``weight_bound`` defaults to ``n``.  Zero weights are allowed.  The
    result is a deterministic function of ``(n, weight_bound, seed)``.
    """
    if n < 2:
        raise ValueError("need at least 2 vertices")
    if weight_bound is None:
        weight_bound = n
    if int(weight_bound) != weight_bound or weight_bound < 1:
        raise ValueError("weight_bound must be a positive integer")
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, k=1)
    draws = rng.integers(-weight_bound, weight_bound + 1, size=len(iu[0]))
    w = np.zeros((n, n), dtype=np.int64)
    w[iu] = draws
    w = w + w.T
    return AdjacencyMatrix.from_rows(w.tolist())


def twenty_mode_fixture() -> AdjacencyMatrix:
    """The 20-vertex random integer graph shipped as ``data/twenty_mode.txt``."""
    text = resources.files("cvteamwork").joinpath("data/twenty_mode.txt").read_text()
    return parse_adjacency(text)


# -- file format ---------------------------------------------------------------


class AdjacencyFormatError(ValueError):
    """Malformed adjacency file; ``line`` and ``column`` are 1-based."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


def parse_adjacency(text: str) -> AdjacencyMatrix:
    """Parse the plain-text or JSON adjacency format.

    Plain text: first line ``N``, then ``N`` rows of ``N`` whitespace
    separated integers or ``p/q`` rationals.  JSON: ``{"n": N, "weights": [[...]]}``.
    """
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    lines = [(k + 1, ln) for k, ln in enumerate(text.splitlines()) if ln.strip()]
    if not lines:
        raise AdjacencyFormatError("empty file", 1)
    lineno, head = lines[0]
    try:
        n = int(head.strip())
    except ValueError:
        raise AdjacencyFormatError(f"expected vertex count, got {head.strip()!r}", lineno, 1) from None
    if n < 1:
        raise AdjacencyFormatError("vertex count must be positive", lineno, 1)
    body = lines[1:]
    if len(body) < n:
        last = body[-1][0] if body else lineno
        raise AdjacencyFormatError(f"expected {n} rows, found {len(body)}", last + 1)
    if len(body) > n:
        raise AdjacencyFormatError(f"unexpected extra row (expected {n})", body[n][0])
    rows = []
    for lineno, ln in body:
        tokens = ln.split()
        if len(tokens) != n:
            raise AdjacencyFormatError(f"expected {n} entries, found {len(tokens)}", lineno, len(tokens) + 1)
        row = []
        for col, tok in enumerate(tokens, start=1):
            try:
                row.append(Fraction(tok))
            except (ValueError, ZeroDivisionError):
                raise AdjacencyFormatError(f"bad entry {tok!r}", lineno, col) from None
        rows.append(row)
    try:
        return AdjacencyMatrix.from_rows(rows)
    except ValueError as exc:
        raise AdjacencyFormatError(str(exc)) from None


def _parse_json(text: str) -> AdjacencyMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AdjacencyFormatError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict) or "weights" not in doc:
        raise AdjacencyFormatError('JSON adjacency must be an object with a "weights" field')
    weights = doc["weights"]
    if not isinstance(weights, list) or not all(isinstance(row, list) for row in weights):
        raise AdjacencyFormatError('"weights" must be a list of rows')
    if "n" in doc and doc["n"] != len(weights):
        raise AdjacencyFormatError(f'"n" is {doc["n"]} but {len(weights)} rows were given')
    try:
        return AdjacencyMatrix.from_rows([[_json_entry(v) for v in row] for row in weights])
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise AdjacencyFormatError(str(exc)) from None


def _json_entry(v) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise TypeError(f"JSON weight must be an integer or 'p/q' string, got {v!r}")
    return Fraction(v)


def _format_entry(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def format_adjacency(omega: AdjacencyMatrix, fmt: str = "text") -> str:
    if fmt == "json":
        weights = [[int(v) if v.denominator == 1 else _format_entry(v) for v in row] for row in omega.entries]
        return json.dumps({"n": omega.n, "weights": weights}) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    cells = [[_format_entry(v) for v in row] for row in omega.entries]
    width = max(len(c) for row in cells for c in row)
    lines = [str(omega.n)] + [" ".join(c.rjust(width) for c in row) for row in cells]
    return "\n".join(lines) + "\n"


def read_adjacency(path: str | os.PathLike) -> AdjacencyMatrix:
    with open(path) as fh:
        return parse_adjacency(fh.read())


def write_adjacency(omega: AdjacencyMatrix, path: str | os.PathLike, fmt: str = "text") -> None:
    with open(path, "w") as fh:
        fh.write(format_adjacency(omega, fmt))


__all__ = [
    "AdjacencyFormatError",
    "AdjacencyMatrix",
    "complete_unweighted",
    "format_adjacency",
    "graph_state_cm",
    "graph_state_precision",
    "nullifier",
    "parse_adjacency",
    "random_graph",
    "read_adjacency",
    "toeplitz_family",
    "twenty_mode_fixture",
    "write_adjacency",
]
