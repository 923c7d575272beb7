"""Phase-space linear algebra for zero-mean Gaussian states.

Conventions used throughout the package:

* quadratures are ordered ``xxpp``: ``(x_1, ..., x_N, p_1, ..., p_N)``;
* the vacuum covariance matrix is the identity (``hbar = 1``, second
  moments scaled by 2), so ``Var(x) = u^T cov u`` for a quadrature
  combination ``u``.

Covariance matrices are plain ``numpy`` float arrays of shape ``(2N, 2N)``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

PURITY_TOL = 1e-7
PAIRING_TOL = 1e-8
SYMPLECTIC_TOL = 1e-10


class NotPhysicalError(ValueError):
    """Raised when a matrix is not a valid (or not a pure) covariance matrix."""


def n_modes(cov: np.ndarray) -> int:
    cov = np.asarray(cov)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
        raise ValueError(f"expected a square matrix of even size, got shape {cov.shape}")
    return cov.shape[0] // 2


def symplectic_form(n: int) -> np.ndarray:
    """Return ``J = [[0, I], [-I, 0]]`` for ``n`` modes."""
    if n < 1:
        raise ValueError("number of modes must be at least 1")
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def symplectic_residual(S: np.ndarray) -> float:
    """Max-norm of ``S J S^T - J``."""
    n = n_modes(S)
    J = symplectic_form(n)
    return float(np.max(np.abs(S @ J @ S.T - J)))


def is_symplectic(S: np.ndarray, tol: float = SYMPLECTIC_TOL) -> bool:
    return symplectic_residual(S) <= tol * max(1.0, float(np.max(np.abs(S))) ** 2)


def _cholesky(cov: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise NotPhysicalError("covariance matrix is not positive definite") from None


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a covariance matrix, sorted ascending.

    The values are the moduli of the eigenvalues of ``J cov``.  With
    ``cov = L L^T`` the antisymmetric matrix ``L^T J L`` is similar to
    ``J cov``, so its singular values are the symplectic eigenvalues, each
    repeated twice.  Working from the Cholesky factor keeps the error close
    to the conditioning floor of the input; diagonalising ``-(J cov)^2``
    squares the condition number.

    Raises:
        NotPhysicalError: if ``cov`` is not positive definite or the
            singular values do not pair up.
    """
    cov = np.asarray(cov, dtype=float)
    n = n_modes(cov)
    cov = 0.5 * (cov + cov.T)
    L = _cholesky(cov)
    m = L.T @ symplectic_form(n) @ L
    m = 0.5 * (m - m.T)
    sv = np.sort(np.linalg.svd(m, compute_uv=False))
    lo, hi = sv[0::2], sv[1::2]
    floor = 1e-12 * float(sv[-1])
    if np.any(hi - lo > PAIRING_TOL * np.maximum(hi, 1.0) + floor):
        raise NotPhysicalError("symplectic eigenvalues failed to pair; malformed covariance matrix")
    return 0.5 * (lo + hi)


def is_physical(cov: np.ndarray, tol: float = PURITY_TOL) -> bool:
    try:
        return bool(symplectic_eigenvalues(cov)[0] >= 1.0 - tol)
    except NotPhysicalError:
        return False


def purity_residual(cov: np.ndarray) -> float:
    """Scaled deviation from the pure-state identity ``cov J cov = J``.

    A Gaussian state is pure iff every symplectic eigenvalue equals one,
    which is equivalent to ``cov J cov = J``.  The residual is normalised
    by ``max(1, ||cov||^2)`` so that it stays meaningful for heavily
    squeezed states.
    """
    cov = np.asarray(cov, dtype=float)
    J = symplectic_form(n_modes(cov))
    scale = max(1.0, float(np.max(np.abs(cov)))) ** 2
    return float(np.max(np.abs(cov @ J @ cov - J))) / scale


def is_pure(cov: np.ndarray, tol: float = PURITY_TOL) -> bool:
    """Pure-state test that tolerates extreme squeezing.

    Above roughly 17 dB per mode pair the smallest eigenvalue of a pure
    covariance drops below float64 resolution relative to the largest, so
    Cholesky may fail on a perfectly valid state.  Positivity is therefore
    only required up to rounding before the ``cov J cov = J`` test.
    """
    cov = np.asarray(cov, dtype=float)
    try:
        _cholesky(cov)
    except NotPhysicalError:
        sym = 0.5 * (cov + cov.T)
        eig = np.linalg.eigvalsh(sym)
        if eig[0] < -len(cov) * np.finfo(float).eps * eig[-1]:
            return False
    return purity_residual(cov) <= tol


def _mode_indices(n: int, modes: Iterable[int]) -> list[int]:
    modes = list(modes)
    if not modes:
        raise ValueError("mode subset must be non-empty")
    for m in modes:
        if not 0 <= m < n:
            raise IndexError(f"mode index {m} out of range for {n} modes")
    if len(set(modes)) != len(modes):
        raise ValueError("duplicate mode index")
    return modes


def quadrature_indices(n: int, modes: Iterable[int]) -> list[int]:
    """Row indices of ``modes`` in an ``xxpp`` ordered matrix."""
    modes = _mode_indices(n, modes)
    return modes + [m + n for m in modes]


def reduce(cov: np.ndarray, modes: Iterable[int]) -> np.ndarray:
    """Reduced covariance matrix of a subset of modes (0-based), ``xxpp`` ordered."""
    cov = np.asarray(cov, dtype=float)
    idx = quadrature_indices(n_modes(cov), modes)
    return cov[np.ix_(idx, idx)]


def direct_sum(*covs: np.ndarray) -> np.ndarray:
    """Block-diagonal combination of ``xxpp`` matrices (covariances or symplectics)."""
    sizes = [n_modes(c) for c in covs]
    n = sum(sizes)
    out = np.zeros((2 * n, 2 * n))
    start = 0
    for c, k in zip(covs, sizes):
        idx = list(range(start, start + k))
        idx = idx + [i + n for i in idx]
        out[np.ix_(idx, idx)] = c
        start += k
    return out


def embed(S_local: np.ndarray, modes: Sequence[int], n: int) -> np.ndarray:
    """Embed an operation on ``modes`` into the ``n``-mode identity."""
    idx = quadrature_indices(n, modes)
    if S_local.shape != (len(idx), len(idx)):
        raise ValueError("local matrix does not match the number of modes")
    S = np.eye(2 * n)
    S[np.ix_(idx, idx)] = S_local
    return S


def permute_modes(cov: np.ndarray, order: Sequence[int]) -> np.ndarray:
    """Reorder modes so that new mode ``k`` is old mode ``order[k]``."""
    n = n_modes(cov)
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of all modes")
    idx = quadrature_indices(n, order)
    return np.asarray(cov)[np.ix_(idx, idx)]


def apply_symplectic(S: np.ndarray, cov: np.ndarray, tol: float = SYMPLECTIC_TOL) -> np.ndarray:
    """Return ``S cov S^T`` after checking that ``S`` is symplectic."""
    S = np.asarray(S, dtype=float)
    cov = np.asarray(cov, dtype=float)
    if S.shape != cov.shape:
        raise ValueError(f"shape mismatch: {S.shape} vs {cov.shape}")
    if not is_symplectic(S, tol):
        raise ValueError(f"matrix is not symplectic (residual {symplectic_residual(S):.3e})")
    out = S @ cov @ S.T
    return 0.5 * (out + out.T)


def gaussian_fidelity_pure(pure: np.ndarray, other: np.ndarray, tol: float = PURITY_TOL) -> float:
    """Overlap ``<psi|rho|psi>`` of a pure zero-mean Gaussian with another state.

    In the vacuum-equals-identity convention the Wigner overlap integral
    evaluates to ``2^N / sqrt(det(cov_1 + cov_2))``.
    """
    pure = np.asarray(pure, dtype=float)
    other = np.asarray(other, dtype=float)
    if pure.shape != other.shape:
        raise ValueError(f"dimension mismatch: {pure.shape} vs {other.shape}")
    if not is_pure(pure, tol):
        raise NotPhysicalError("first argument must be a pure state")
    n = n_modes(pure)
    sign, logdet = np.linalg.slogdet(pure + other)
    if sign <= 0:
        raise NotPhysicalError("cov_1 + cov_2 is not positive definite")
    return float(np.exp(n * np.log(2.0) - 0.5 * logdet))


def variance_of_linear_combination(cov: np.ndarray, u: Sequence[float]) -> float:
    """Variance of ``sum_k u_k R_k`` with ``R = (x_1..x_N, p_1..p_N)``."""
    cov = np.asarray(cov, dtype=float)
    u = np.asarray(u, dtype=float)
    if u.shape != (cov.shape[0],):
        raise ValueError(f"coefficient vector must have length {cov.shape[0]}")
    return float(u @ cov @ u)
