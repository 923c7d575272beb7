"""Certification of perfect continuous-variable MMES resources.

A weighted graph state with adjacency ``W`` is a perfect MMES family iff
every off-diagonal block ``W_AB`` (``|A| = K <= N - K``) has rank ``K``.
Ranks are computed exactly; floating point only enters the
covariance-level cross checks (:func:`symplectic_rank`,
:func:`effective_squeezings`, :func:`scaling_fit`).
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import comb
from typing import Iterator, Optional, Sequence

import numpy as np

from . import symplectic as sp
from .graphs import AdjacencyMatrix, graph_state_cm, random_graph
from .rank import PRIME, bareiss_rank, batched_rank_mod_p

EXHAUSTIVE_CAP = 22
NU_TOL = 1e-7


@dataclass(frozen=True, order=True)
class Bipartition:
    """Split of ``n`` modes into ``block_a`` (the smaller side) and its complement.

    Mode indices are 0-based.  Ordering compares ``(K, block_a)``, which is
    the enumeration order of :func:`enumerate_bipartitions`.
    """

    k: int = field(init=False, repr=False)
    block_a: tuple[int, ...]
    n: int
    block_b: tuple[int, ...] = field(init=False, compare=False)

    def __post_init__(self):
        a = tuple(sorted(int(m) for m in self.block_a))
        if len(set(a)) != len(a):
            raise ValueError("duplicate mode in block_a")
        if not a or any(not 0 <= m < self.n for m in a):
            raise ValueError(f"block_a must be a non-empty subset of range({self.n})")
        if 2 * len(a) > self.n:
            raise ValueError("block_a must be the smaller side (K <= N - K)")
        if 2 * len(a) == self.n and a[0] != 0:
            raise ValueError("for K = N/2 mode 0 must belong to block_a")
        object.__setattr__(self, "block_a", a)
        object.__setattr__(self, "k", len(a))
        object.__setattr__(self, "block_b", tuple(m for m in range(self.n) if m not in a))

    @classmethod
    def canonical(cls, subset: Sequence[int], n: int) -> "Bipartition":
        """Canonical bipartition for either side of a split."""
        a = sorted(set(int(m) for m in subset))
        b = [m for m in range(n) if m not in a]
        if not a or not b:
            raise ValueError("both sides of a bipartition must be non-empty")
        if len(a) > len(b) or (len(a) == len(b) and 0 not in a):
            a = b
        return cls(tuple(a), n)

    def labels(self) -> list[int]:
        """1-based labels of ``block_a``."""
        return [m + 1 for m in self.block_a]


def bipartition_count(n: int) -> int:
    return 2 ** (n - 1) - 1


def _level_subsets(n: int, k: int) -> Iterator[tuple[int, ...]]:
    if 2 * k == n:
        for rest in itertools.combinations(range(1, n), k - 1):
            yield (0,) + rest
    else:
        yield from itertools.combinations(range(n), k)


def _level_size(n: int, k: int) -> int:
    return comb(n - 1, k - 1) if 2 * k == n else comb(n, k)


def enumerate_bipartitions(n: int) -> Iterator[Bipartition]:
    """Every unordered split of ``n`` modes exactly once, by ``K`` then lexicographically."""
    if n < 2:
        raise ValueError("need at least 2 modes")
    for k in range(1, n // 2 + 1):
        for a in _level_subsets(n, k):
            yield Bipartition(a, n)


def block_rank(omega: AdjacencyMatrix, p: Bipartition) -> int:
    """Exact rank of ``W_AB`` by fraction-free elimination."""
    if p.n != omega.n:
        raise ValueError(f"bipartition of {p.n} modes does not match a {omega.n}-vertex graph")
    return bareiss_rank(omega.block(p.block_a, p.block_b))


# -- perfect-MMES check ----------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    block_a: tuple[int, ...]
    rank: int


@dataclass
class MmesReport:
    verdict: bool
    n: int
    mode: str
    checked: int
    witness: Optional[Witness] = None
    elapsed_ms: float = 0.0
    sample_count: Optional[int] = None
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        out = {
            "verdict": self.verdict,
            "n": self.n,
            "mode": self.mode,
            "checked": self.checked,
            "witness": None,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }
        if self.witness is not None:
            out["witness"] = {"block_a": [m + 1 for m in self.witness.block_a], "rank": self.witness.rank}
        if self.mode == "sampled":
            out["sample_count"] = self.sample_count
            out["seed"] = self.seed
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _modular_matrix(omega: AdjacencyMatrix) -> np.ndarray:
    return np.array([[v % PRIME for v in row] for row in omega.integer_rows()], dtype=np.int64)


def _first_failure(wmod: np.ndarray, exact_rows, subsets: np.ndarray) -> tuple[int, int] | None:
    """Index and rank of the first deficient block among equally sized subsets."""
    n = wmod.shape[0]
    k = subsets.shape[1]
    mask = np.ones((len(subsets), n), dtype=bool)
    mask[np.arange(len(subsets))[:, None], subsets] = False
    complements = np.nonzero(mask)[1].reshape(len(subsets), n - k)
    blocks = wmod[subsets[:, :, None], complements[:, None, :]]
    ranks = batched_rank_mod_p(blocks)
    for idx in np.flatnonzero(ranks < k):
        a, b = subsets[idx], complements[idx]
        exact = bareiss_rank([[exact_rows[i][j] for j in b] for i in a])
        if exact < k:
            return int(idx), exact
    return None


def _scan_chunk(args) -> tuple[int, int] | None:
    wmod, exact_rows, subsets = args
    return _first_failure(wmod, exact_rows, subsets)


def _exhaustive_chunks(n: int, chunk: int) -> Iterator[np.ndarray]:
    for k in range(1, n // 2 + 1):
        it = _level_subsets(n, k)
        while True:
            block = list(itertools.islice(it, chunk))
            if not block:
                break
            yield np.array(block, dtype=np.intp)


def is_perfect_mmes(
    omega: AdjacencyMatrix,
    mode: str = "exhaustive",
    count: Optional[int] = None,
    seed: int = 0,
    workers: int = 1,
    chunk: int = 32768,
    n_cap: int = EXHAUSTIVE_CAP,
) -> MmesReport:
    """Check the rank-``K`` condition on every (or on ``count`` random) bipartitions.

    The scan stops at the first deficient block.  In exhaustive mode that
    is the smallest failing bipartition in enumeration order, whatever the
    number of ``workers``; in sampled mode it is the first failing draw.
    ``checked`` counts bipartitions up to and including the witness.
    """
    t0 = time.perf_counter()
    n = omega.n
    if n < 2:
        raise ValueError("need at least 2 modes")
    wmod = _modular_matrix(omega)
    exact_rows = omega.integer_rows()

    if mode == "exhaustive":
        if n > n_cap:
            raise ValueError(f"exhaustive scan refused for N = {n} > {n_cap}; use mode='sampled'")
        total = bipartition_count(n)
        offset = 0
        failure = None
        chunks = _exhaustive_chunks(n, chunk)
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                while failure is None:
                    wave = list(itertools.islice(chunks, workers))
                    if not wave:
                        break
                    results = pool.map(_scan_chunk, [(wmod, exact_rows, s) for s in wave])
                    for subsets, res in zip(wave, results):
                        if res is not None:
                            failure = (subsets[res[0]], offset + res[0], res[1])
                            break
                        offset += len(subsets)
        else:
            for subsets in chunks:
                res = _first_failure(wmod, exact_rows, subsets)
                if res is not None:
                    failure = (subsets[res[0]], offset + res[0], res[1])
                    break
                offset += len(subsets)
        elapsed = 1e3 * (time.perf_counter() - t0)
        if failure is None:
            return MmesReport(True, n, "exhaustive", total, None, elapsed)
        a, idx, rank = failure
        return MmesReport(False, n, "exhaustive", idx + 1, Witness(tuple(int(m) for m in a), rank), elapsed)

    if mode != "sampled":
        raise ValueError(f"unknown mode {mode!r}")
    if count is None or count < 1:
        raise ValueError("sampled mode needs a positive sample count")
    draws = sample_bipartitions(n, count, seed)
    first = None
    by_k: dict[int, list[int]] = {}
    for i, p in enumerate(draws):
        by_k.setdefault(p.k, []).append(i)
    for k, idxs in by_k.items():
        subsets = np.array([draws[i].block_a for i in idxs], dtype=np.intp)
        res = _first_failure(wmod, exact_rows, subsets)
        if res is not None:
            i = idxs[res[0]]
            if first is None or i < first[0]:
                first = (i, res[1])
    elapsed = 1e3 * (time.perf_counter() - t0)
    if first is None:
        return MmesReport(True, n, "sampled", count, None, elapsed, count, seed)
    i, rank = first
    return MmesReport(False, n, "sampled", i + 1, Witness(draws[i].block_a, rank), elapsed, count, seed)


def sample_bipartitions(n: int, count: int, seed: int) -> list[Bipartition]:
    """``count`` uniform draws (with replacement) from the ``2^{N-1} - 1`` splits."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        bits = rng.integers(0, 2, size=n).astype(bool)
        if bits.all() or not bits.any():
            continue
        out.append(Bipartition.canonical(np.flatnonzero(bits), n))
    return out


# -- covariance-level cross checks -------------------------------------------------


@dataclass(frozen=True)
class ChannelSpec:
    """Effective two-mode squeezings of the entangled pairs, one per teleported mode."""

    squeezings: tuple[float, ...]

    def __post_init__(self):
        sq = tuple(float(r) for r in self.squeezings)
        if any(r < 0 or not np.isfinite(r) for r in sq):
            raise ValueError("squeezings must be finite and non-negative")
        object.__setattr__(self, "squeezings", sq)

    def __len__(self) -> int:
        return len(self.squeezings)


def symplectic_rank(cov_a: np.ndarray, tol: float = NU_TOL) -> int:
    """Number of symplectic eigenvalues above ``1 + tol``."""
    nu = sp.symplectic_eigenvalues(cov_a)
    if nu[0] < 1 - tol:
        raise sp.NotPhysicalError(f"symplectic eigenvalue {nu[0]:.6g} < 1: not a physical state")
    return int(np.sum(nu > 1 + tol))


def effective_squeezings(cov: np.ndarray, p: Bipartition, tol: float = NU_TOL) -> ChannelSpec:
    """Squeezings ``r_j = arccosh(nu_j) / 2`` of the normal-form pairs across ``p``, descending."""
    if sp.n_modes(cov) != p.n:
        raise ValueError("bipartition does not match the number of modes")
    if not sp.is_pure(cov, tol):
        raise sp.NotPhysicalError("resource state must be pure")
    nu = sp.symplectic_eigenvalues(sp.reduce(cov, p.block_a))[::-1]
    r = np.where(nu > 1 + tol, 0.5 * np.arccosh(np.maximum(nu, 1.0)), 0.0)
    return ChannelSpec(tuple(r))


@dataclass(frozen=True)
class ScalingFit:
    """Fit of ``nu_j(r)^2 = 1 + alpha_j e^{4r}`` per channel (channels sorted descending)."""

    alphas: tuple[float, ...]
    residual: float

    def predict_nu(self, r: float) -> np.ndarray:
        return np.sqrt(1.0 + np.asarray(self.alphas) * np.exp(4 * r))

    def predict_squeezings(self, r: float) -> np.ndarray:
        return 0.5 * np.arccosh(self.predict_nu(r))


def fit_scaling(r_samples: Sequence[float], nu_samples: Sequence[Sequence[float]], tol: float = NU_TOL) -> ScalingFit:
    """Least-squares ``alpha_j`` from spectra ``nu_samples[i]`` measured at ``r_samples[i]``.

    ``residual`` is the largest relative misfit of ``nu^2 - 1`` over all
    samples and entangled channels; channel crossings show up here.
    """
    r = np.asarray(r_samples, dtype=float)
    if len(r) < 2 or len(np.unique(r)) != len(r):
        raise ValueError("need at least two distinct squeezing samples")
    nu = np.sort(np.asarray(nu_samples, dtype=float), axis=1)[:, ::-1]
    y = nu**2 - 1.0
    basis = np.exp(4 * r)
    alphas = (basis @ y) / (basis @ basis)
    dead = np.all(nu <= 1 + tol, axis=0)
    alphas = np.where(dead, 0.0, alphas)
    live = ~dead
    residual = 0.0
    if live.any():
        model = np.outer(basis, alphas[live])
        residual = float(np.max(np.abs(model - y[:, live]) / np.abs(y[:, live])))
    return ScalingFit(tuple(float(a) for a in alphas), residual)


def scaling_fit(
    omega: AdjacencyMatrix, p: Bipartition, r_samples: Sequence[float] = (1.0, 1.5), tol: float = NU_TOL
) -> ScalingFit:
    if any(not r > 0 for r in r_samples):
        raise ValueError("squeezing samples must be positive")
    spectra = [sp.symplectic_eigenvalues(sp.reduce(graph_state_cm(omega, r), p.block_a)) for r in r_samples]
    return fit_scaling(r_samples, spectra, tol)


# -- typicality ------------------------------------------------------------------


@dataclass
class TypicalityResult:
    n: int
    trials: int
    seed: int
    mode: str
    passes: int
    witnesses: list = field(default_factory=list)
    elapsed_ms: float = 0.0
    sample_count: Optional[int] = None

    @property
    def pass_fraction(self) -> float:
        return self.passes / self.trials

    def to_dict(self) -> dict:
        out = asdict(self)
        out["pass_fraction"] = self.pass_fraction
        out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


def trial_seed(seed: int, trial: int) -> int:
    """Per-trial 64-bit seed; independent of scheduling order."""
    return int(np.random.SeedSequence([seed, trial]).generate_state(1, np.uint64)[0])


def typicality_scan(
    n: int,
    trials: int,
    seed: int = 0,
    mode: str = "exhaustive",
    sample_count: Optional[int] = None,
    weight_bound: Optional[int] = None,
    n_cap: int = EXHAUSTIVE_CAP,
    workers: int = 1,
) -> TypicalityResult:
    """Fraction of random integer-weight graphs that pass :func:`is_perfect_mmes`."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if mode == "exhaustive" and n > n_cap:
        raise ValueError(f"exhaustive scan refused for N = {n} > {n_cap}; use mode='sampled'")
    t0 = time.perf_counter()
    passes = 0
    witnesses = []
    for t in range(trials):
        s = trial_seed(seed, t)
        omega = random_graph(n, weight_bound, s)
        report = is_perfect_mmes(omega, mode, count=sample_count, seed=s, workers=workers, n_cap=n_cap)
        if report.verdict:
            passes += 1
        else:
            witnesses.append(
                {"trial": t, "seed": s, "block_a": [m + 1 for m in report.witness.block_a], "rank": report.witness.rank}
            )
    elapsed = 1e3 * (time.perf_counter() - t0)
    return TypicalityResult(n, trials, seed, mode, passes, witnesses, elapsed, sample_count)
