"""Exact matrix rank over the rationals.

Two kernels:

* :func:`bareiss_rank` -- fraction-free Gaussian elimination on Python
  integers; exact for any input and used for single blocks and for
  witnesses.
* :func:`batched_rank_mod_p` -- vectorised elimination modulo a prime over
  a stack of equally shaped integer blocks.  For an integer matrix the rank
  modulo ``p`` never exceeds the rational rank, so a full-rank result mod
  ``p`` is an exact certificate.  Blocks that come out rank deficient mod
  ``p`` are re-checked with :func:`bareiss_rank`.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

# Mersenne prime 2^31 - 1: products of two residues fit in int64.
PRIME = 2_147_483_647


def to_integer_rows(rows: Sequence[Sequence[int | Fraction]]) -> list[list[int]]:
    """Clear denominators row by row; the rank is unchanged."""
    out = []
    for row in rows:
        row = [Fraction(v) for v in row]
        scale = lcm(*(v.denominator for v in row)) if row else 1
        out.append([int(v * scale) for v in row])
    return out


def bareiss_rank(rows: Sequence[Sequence[int | Fraction]]) -> int:
    """Rank of a rational matrix by fraction-free (Bareiss) elimination."""
    a = to_integer_rows(rows)
    m = len(a)
    if m == 0:
        return 0
    n = len(a[0])
    rank = 0
    prev = 1
    for col in range(n):
        if rank == m:
            break
        pivot = next((i for i in range(rank, m) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        piv_row = a[rank]
        p = piv_row[col]
        for i in range(rank + 1, m):
            row = a[i]
            f = row[col]
            # Sylvester identity: the division by the previous pivot is exact.
            for j in range(col + 1, n):
                row[j] = (p * row[j] - f * piv_row[j]) // prev
            row[col] = 0
        prev = p
        rank += 1
    return rank


def batched_rank_mod_p(blocks: np.ndarray, prime: int = PRIME, chunk: int = 4096) -> np.ndarray:
    """Rank modulo ``prime`` of each matrix in a ``(B, m, n)`` integer stack."""
    blocks = np.asarray(blocks)
    out = np.empty(blocks.shape[0], dtype=np.int64)
    for start in range(0, blocks.shape[0], chunk):
        out[start:start + chunk] = _rank_mod_p(blocks[start:start + chunk], prime)
    return out


def _rank_mod_p(blocks: np.ndarray, prime: int) -> np.ndarray:
    a = np.mod(blocks.astype(np.int64), prime)
    b, m, n = a.shape
    rank = np.zeros(b, dtype=np.int64)
    if b == 0 or m == 0:
        return rank
    batch = np.arange(b)
    rows = np.arange(m)
    for col in range(n):
        eligible = rows[None, :] >= rank[:, None]
        candidates = (a[:, :, col] != 0) & eligible
        has_pivot = candidates.any(axis=1)
        if not has_pivot.any():
            continue
        piv_idx = np.argmax(candidates, axis=1)
        # items without a pivot swap a row with itself
        dest = np.where(has_pivot, np.minimum(rank, m - 1), piv_idx)
        piv_rows = a[batch, piv_idx].copy()
        a[batch, piv_idx] = a[batch, dest]
        a[batch, dest] = piv_rows
        pivot_val = piv_rows[:, col]
        below = (rows[None, :] > dest[:, None]) & has_pivot[:, None]
        factor = np.where(below, a[:, :, col], 0)
        # row <- pivot * row - factor * pivot_row  (mod p); each product < 2^62
        scale = np.where(below, pivot_val[:, None], 1)
        a = np.mod((scale[:, :, None] * a) % prime - (factor[:, :, None] * piv_rows[:, None, :]) % prime, prime)
        rank += has_pivot
        if np.all(rank >= m):
            break
    return rank
