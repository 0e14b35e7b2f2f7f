"""The Kubilius model: independent prime-exponent variables approximating
the exponent vector of a uniform random integer n <= x.

For each prime p the model exponent X_p has P(X_p = k) = p^(-k) * (1 - 1/p).
The number of primes of a set T that "divide" the model integer is then a sum
of independent Bernoulli(1/p) indicators, and the total exponent count over T
is a sum of the X_p themselves.  Both laws are computed exactly by sequential
convolution; the model-vs-truth total variation over exponent vectors is
computed exactly through smooth parts.
"""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np

from .dist import Pmf, TvResult
from .errors import DomainError
from .factorstats import CountMode, smooth_part_distribution
from .primesets import PrimeSet, sieve_primes

DEFAULT_TAIL_EPS = 1e-12

# Exponent pmfs are truncated deep enough that the stored coefficients double
# as the factor's power series on the disc |z| <= SERIES_RADIUS, which is what
# the generating-function identities need checked at their domain edge.
SERIES_RADIUS = 1.9


def _exponent_cutoff(p: int, n_sets: int, tail_eps: float, series_radius: float) -> int:
    """Truncation depth for the factor at p: smallest k with
    (series_radius/p)^k below tail_eps / n_sets.  At series_radius=1 this is
    the plain geometric-mass rule."""
    return max(1, math.ceil(math.log(tail_eps / n_sets) / math.log(series_radius / p)))


def model_exact_pmf(
    primes: PrimeSet,
    mode: CountMode,
    tail_eps: float = DEFAULT_TAIL_EPS,
    *,
    series_radius: float = SERIES_RADIUS,
) -> Pmf:
    """Exact model law of the factor count over a prime set.

    Distinct mode convolves the Bernoulli(1/p) indicator laws (exact support
    0..|T|, tail_bound 0).  Multiplicity mode convolves the geometric-type
    exponent laws, each truncated at a certified depth; tail_bound aggregates
    the exact per-factor dropped mass sum(p^-(cutoff+1)).
    """
    if not 0.0 < tail_eps < 1.0:
        raise DomainError(f"tail_eps must be in (0, 1), got {tail_eps}")
    ps = tuple(primes.primes)
    if not ps:
        return Pmf((1.0,), 0.0)

    if mode is CountMode.DISTINCT:
        acc = np.array([1.0])
        for p in ps:
            acc = np.convolve(acc, [1.0 - 1.0 / p, 1.0 / p])
        return Pmf(tuple(acc.tolist()), 0.0)

    if not 1.0 <= series_radius < ps[0]:
        raise DomainError(
            f"series_radius must be in [1, smallest prime), got {series_radius}"
        )
    acc = np.array([1.0])
    dropped = []
    for p in ps:
        cutoff = _exponent_cutoff(p, len(ps), tail_eps, series_radius)
        factor = (1.0 - 1.0 / p) * np.power(1.0 / p, np.arange(cutoff + 1))
        acc = np.convolve(acc, factor)
        dropped.append(float(p) ** (-(cutoff + 1)))
    return Pmf(tuple(acc.tolist()), math.fsum(dropped))


_SAMPLE_BLOCK = 4096


def _block_uniforms(seed: int, block_index: int, shape: tuple[int, int]) -> np.ndarray:
    """Deterministic uniforms for one sample block from a counter-based
    generator keyed by (seed, block index); draw (i, j) within the block is
    the fixed stream position i * n_primes + j, so results do not depend on
    how blocks are scheduled."""
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, block_index], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key))
    return gen.random(shape)


def sample_exponent_matrix(y: int, seed: int, n_samples: int) -> tuple[tuple[int, ...], np.ndarray]:
    """Sample model exponent vectors for all primes p <= y, vectorized.

    Returns (primes, matrix) with matrix[i, j] the exponent of primes[j] in
    sample i.  Deterministic for fixed (y, seed, n_samples), independent of
    platform and of any parallel scheduling of the underlying blocks.
    """
    if seed < 0:
        raise DomainError(f"seed must be >= 0, got {seed}")
    if n_samples < 0:
        raise DomainError(f"n_samples must be >= 0, got {n_samples}")
    primes = sieve_primes(y).primes
    n_p = len(primes)
    log_p = np.log(np.asarray(primes, dtype=float))
    out = np.empty((n_samples, n_p), dtype=np.int64)
    for block_start in range(0, n_samples, _SAMPLE_BLOCK):
        block_len = min(_SAMPLE_BLOCK, n_samples - block_start)
        u = _block_uniforms(seed, block_start // _SAMPLE_BLOCK, (_SAMPLE_BLOCK, n_p))
        u = u[:block_len]
        # P(X_p >= j) = p^-j: invert the survival function of 1-u in (0, 1].
        v = -np.log1p(-u)
        out[block_start : block_start + block_len] = np.floor(v / log_p).astype(np.int64)
    return primes, out


def model_sample_vector(y: int, seed: int, n_samples: int) -> Iterator[dict[int, int]]:
    """Stream sampled exponent assignments {p: X_p} for all primes p <= y."""
    primes, matrix = sample_exponent_matrix(y, seed, n_samples)
    for row in matrix:
        yield {p: int(k) for p, k in zip(primes, row)}


def model_tv_exact(x: int, y: int) -> TvResult:
    """Exact total variation between the true exponent vector of a uniform
    n <= x (restricted to primes <= y) and the model vector.

    Exponent vectors over primes <= y correspond bijectively to y-smooth
    parts s, with model probability (1/s) * prod_{p <= y} (1 - 1/p).  Summing
    max(0, P_true(s) - P_model(s)) over observed smooth parts is exact: every
    unobserved pattern has P_true = 0 and contributes nothing to this side of
    the difference, so the uncertainty is genuinely zero.
    """
    smooth = smooth_part_distribution(x, y)
    primes = sieve_primes(y).primes
    log_c = math.fsum(math.log1p(-1.0 / p) for p in primes)
    n = float(x)
    parts = np.array(sorted(smooth.keys()), dtype=float)
    cnts = np.array([smooth[int(s)] for s in parts.tolist()], dtype=float)
    p_true = cnts / n
    p_model = np.exp(log_c - np.log(parts))
    gap = p_true - p_model
    value = float(np.sum(gap[gap > 0.0]))
    return TvResult(value=min(value, 1.0), uncertainty=0.0)
