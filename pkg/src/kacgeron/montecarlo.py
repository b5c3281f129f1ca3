"""Empirical real-zero counts for random combinations of the basis.

A trial draws eta_0..eta_n i.i.d. standard normal and counts the real
zeros of P(x) = sum eta_i phi_i(x; alpha).  The mean over many trials
estimates the same quantity the quadrature module integrates, which
makes the two routes mutual checks: quadrature has no sampling error,
the simulation has no modeling error.

Root counting runs on the balanced companion matrix of the monomial
form while that form is faithful.  The monomial coefficients of phi_m
grow like rho^(-m), and once their span passes ~1e4 the rounding of
the converted coefficients displaces roots further than the realness
tolerance (at alpha = -0.9, n = 30 the displacement reaches ~0.05,
enough to change the true count, and an exact Sturm count of the
rounded polynomial confirms the damage is in the coefficients, not in
the eigensolver).  Past that span, or past degree 300, the zeros come
from a colleague-style multiplication matrix assembled directly in
the phi basis:

    x phi_k = rho phi_{k+1} + alpha rho^k phi_0
              - alpha^2 sum_{j=1..k} rho^(k-j) phi_j,

with phi_n eliminated through P = 0 in the last row.  Counts from an
exact integer Sturm chain audit the eigenvalue tolerance at small
degree (see sturm.py).

Trials are reproducible and schedule-independent: trial i draws from a
generator seeded by (seed, spawn_key=(i,)), so any worker split yields
the same counts in the same order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .core import GeronimusParams
from .errors import RootCountDiagnosticError
from .sturm import count_real_roots_exact

__all__ = [
    "RootCountConfig",
    "SimulationReport",
    "sample_polynomial",
    "count_real_roots",
    "colleague_matrix",
    "run_simulation",
]

_WORKERS_ENV = "KACGERON_WORKERS"
_MONOMIAL_LIMIT = 300
_SPAN_LIMIT = 1e4   # largest rho^(-n) whose conversion rounding stays inside imag_tol
_FAILURE_QUOTA = 1e-3


@dataclass(frozen=True)
class RootCountConfig:
    """Policy knobs for classifying eigenvalues as real roots.

    method selects the default counter; "sturm" is exact but limited to
    sturm_max_degree.  A companion eigenvalue lambda counts as real
    when |Im lambda| <= imag_tol * (1 + |lambda|).  cross_check runs
    both counters and raises when they disagree with no eigenvalue
    inside the ambiguity band around imag_tol.  Both knobs act on
    monomial coefficient vectors, so simulation trials that route
    through the colleague matrix are outside their reach.
    """

    method: str = "companion"
    imag_tol: float = 1e-8
    sturm_max_degree: int = 30
    cross_check: bool = False

    def __post_init__(self):
        if self.method not in ("companion", "sturm"):
            raise ValueError("method must be 'companion' or 'sturm'")
        if not 0.0 < self.imag_tol < 1.0:
            raise ValueError("imag_tol must be in (0, 1)")
        if self.sturm_max_degree < 1:
            raise ValueError("sturm_max_degree must be positive")


@dataclass(frozen=True)
class SimulationReport:
    """Aggregate of one simulation run.

    mean_real_zeros and std_error are over the successful trials;
    failed_trials counts draws whose eigenvalue solve did not converge
    or whose odd-degree count came back even, both excluded from the
    histogram rather than guessed at.
    """

    alpha: float
    n: int
    trials: int
    mean_real_zeros: float
    std_error: float
    histogram: dict = field(default_factory=dict)
    seed: int = 0
    root_method: str = "companion"
    failed_trials: int = 0

    def __post_init__(self):
        done = sum(self.histogram.values())
        if done + self.failed_trials != self.trials:
            raise ValueError("histogram total and failures must add up to trials")
        if done:
            mean = math.fsum(k * v for k, v in self.histogram.items()) / done
            if mean != self.mean_real_zeros:
                raise ValueError("mean_real_zeros inconsistent with histogram")


@lru_cache(maxsize=64)
def _basis_matrix(alpha: float, n: int):
    """Rows are ascending monomial coefficients of phi_0..phi_n."""
    rho = math.sqrt((1.0 - alpha) * (1.0 + alpha))
    mat = np.zeros((n + 1, n + 1))
    phi = np.zeros(n + 1)
    phis = np.zeros(n + 1)
    phi[0] = phis[0] = 1.0
    mat[0, 0] = 1.0
    for m in range(n):
        shifted = np.zeros(n + 1)
        shifted[1:m + 2] = phi[:m + 1]
        phi, phis = ((shifted - alpha * phis) / rho,
                     (phis - alpha * shifted) / rho)
        mat[m + 1] = phi
    return mat


def sample_polynomial(params: GeronimusParams, n: int, rng) -> np.ndarray:
    """Monomial coefficients (ascending) of a random basis combination.

    Draws n+1 standard normal weights from rng and combines the cached
    monomial forms of phi_0..phi_n.  For alpha = 0 the basis matrix is
    the identity and the weights come back unchanged.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    eta = rng.standard_normal(n + 1)
    return eta @ _basis_matrix(params.alpha, n)


def colleague_matrix(params: GeronimusParams, weights) -> np.ndarray:
    """Multiplication-by-x matrix modulo sum w_i phi_i in the phi basis.

    weights are the basis coefficients w_0..w_n with w_n != 0; the
    matrix acts on (phi_0, ..., phi_{n-1}) and its eigenvalues are the
    n zeros of the combination.  Assembled from the recurrence quoted
    in the module docstring, with phi_n replaced by
    -(1/w_n) sum_{i<n} w_i phi_i in the last row.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise ValueError("need at least a degree-1 combination")
    if w[-1] == 0.0:
        raise ValueError("leading basis weight must be nonzero")
    n = w.size - 1
    alpha, rho = params.alpha, params.rho
    mat = np.zeros((n, n))
    powers = rho ** np.arange(n, dtype=float)
    for k in range(n):
        mat[k, 0] = alpha * powers[k]
        if k >= 1:
            mat[k, 1:k + 1] = -alpha * alpha * powers[k - 1::-1][: k]
        if k + 1 < n:
            mat[k, k + 1] += rho
    mat[n - 1] += rho * (-w[:n] / w[n])
    return mat


def _eig_real_count(eigvals: np.ndarray, imag_tol: float) -> int:
    return int(np.count_nonzero(
        np.abs(eigvals.imag) <= imag_tol * (1.0 + np.abs(eigvals))))


def _in_ambiguity_band(eigvals: np.ndarray, imag_tol: float) -> bool:
    rel = np.abs(eigvals.imag) / (1.0 + np.abs(eigvals))
    return bool(np.any((rel > imag_tol * 0.1) & (rel < imag_tol * 10.0)))


def count_real_roots(coeffs, config: RootCountConfig | None = None) -> int:
    """Real-zero count of a polynomial given ascending coefficients.

    Exact trailing zeros are trimmed so degenerate draws are handled at
    their numerical degree instead of rejected.  Almost surely all
    roots are simple, so counting distinct roots (the Sturm semantics)
    and counting with multiplicity agree.
    """
    cfg = config or RootCountConfig()
    arr = np.asarray(coeffs, dtype=float)
    if arr.ndim != 1:
        raise ValueError("coefficients must be one-dimensional")
    nz = np.nonzero(arr)[0]
    if nz.size == 0:
        return 0
    arr = arr[: nz[-1] + 1]
    deg = arr.size - 1
    if deg == 0:
        return 0
    if cfg.method == "sturm" or (cfg.cross_check and deg <= cfg.sturm_max_degree):
        if deg > cfg.sturm_max_degree:
            raise ValueError(
                f"sturm route limited to degree {cfg.sturm_max_degree}")
        exact = count_real_roots_exact(list(arr))
        if cfg.method == "sturm" and not cfg.cross_check:
            return exact
    eigvals = np.roots(arr[::-1])
    count = _eig_real_count(eigvals, cfg.imag_tol)
    if cfg.method == "sturm":
        # cross_check from the exact side: eigenvalues audit the chain
        if count != exact and not _in_ambiguity_band(eigvals, cfg.imag_tol):
            raise RootCountDiagnosticError(
                f"sturm count {exact} vs companion {count} with no "
                f"eigenvalue near the tolerance band")
        return exact
    if cfg.cross_check and deg <= cfg.sturm_max_degree and count != exact:
        if not _in_ambiguity_band(eigvals, cfg.imag_tol):
            raise RootCountDiagnosticError(
                f"companion count {count} vs sturm {exact} with no "
                f"eigenvalue near the tolerance band")
        return exact
    return count


def _trial_count(params, n, seed, index, cfg):
    """Count for one trial; None flags a failed or implausible solve."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed,
                                                       spawn_key=(index,)))
    eta = rng.standard_normal(n + 1)
    use_colleague = n > _MONOMIAL_LIMIT or (
        cfg.method == "companion"
        and -n * math.log(params.rho) > math.log(_SPAN_LIMIT)
    )
    try:
        if use_colleague:
            nz = np.nonzero(eta)[0]
            if nz.size == 0:
                return 0
            w = eta[: nz[-1] + 1]
            if w.size < 2:
                return 0
            eigvals = np.linalg.eigvals(colleague_matrix(params, w))
            count = _eig_real_count(eigvals, cfg.imag_tol)
            deg = w.size - 1
        else:
            coeffs = eta @ _basis_matrix(params.alpha, n)
            count = count_real_roots(coeffs, cfg)
            nz = np.nonzero(coeffs)[0]
            deg = int(nz[-1]) if nz.size else 0
    except np.linalg.LinAlgError:
        return None
    if deg % 2 == 1 and count == 0:
        # an odd-degree polynomial has a real zero; a zero count can
        # only be a tolerance misclassification
        return None
    return count


def _simulate_chunk(args):
    alpha, n, seed, lo, hi, cfg = args
    params = GeronimusParams(alpha)
    return [_trial_count(params, n, seed, i, cfg) for i in range(lo, hi)]


def _resolve_workers(workers: int | None) -> int:
    if workers is not None:
        value = workers
    else:
        env = os.environ.get(_WORKERS_ENV, "").strip()
        if env:
            value = int(env)
        else:
            value = os.cpu_count() or 1
    if value < 1:
        raise ValueError("worker count must be positive")
    return value


def run_simulation(params: GeronimusParams, n: int, trials: int, seed: int,
                   config: RootCountConfig | None = None,
                   workers: int | None = None) -> SimulationReport:
    """Mean real-zero count over independent trials.

    Deterministic for a fixed seed no matter how the trials are split
    across processes.  Raises RootCountDiagnosticError when more than
    0.1% of trials fail, which points at a systematic tolerance or
    conditioning problem rather than bad luck.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if trials < 100:
        raise ValueError("need at least 100 trials for the error bars")
    cfg = config or RootCountConfig()
    if cfg.method == "sturm" and n > cfg.sturm_max_degree:
        raise ValueError(
            f"sturm method caps out at degree {cfg.sturm_max_degree}")
    nworkers = _resolve_workers(workers)

    if nworkers == 1 or trials < 4 * nworkers:
        counts = _simulate_chunk((params.alpha, n, seed, 0, trials, cfg))
    else:
        step = -(-trials // nworkers)
        chunks = [(params.alpha, n, seed, lo, min(lo + step, trials), cfg)
                  for lo in range(0, trials, step)]
        counts = []
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            for part in pool.map(_simulate_chunk, chunks):
                counts.extend(part)

    good = [c for c in counts if c is not None]
    failed = trials - len(good)
    if failed > _FAILURE_QUOTA * trials:
        raise RootCountDiagnosticError(
            f"{failed} of {trials} trials failed root counting")
    histogram: dict[int, int] = {}
    for c in good:
        histogram[c] = histogram.get(c, 0) + 1
    mean = math.fsum(k * v for k, v in histogram.items()) / len(good)
    if len(good) > 1:
        var = math.fsum((c - mean) ** 2 for c in good) / (len(good) - 1)
        stderr = math.sqrt(var / len(good))
    else:
        stderr = 0.0
    return SimulationReport(alpha=params.alpha, n=n, trials=trials,
                            mean_real_zeros=mean, std_error=stderr,
                            histogram=dict(sorted(histogram.items())),
                            seed=seed, root_method=cfg.method,
                            failed_trials=failed)
