"""Exact joint distributions of prime-factor counts for uniform n in [1, x].

For disjoint prime sets T_1..T_m and a counting mode per set (distinct prime
divisors, or prime-power divisors counted with multiplicity), these routines
tally the exact number of integers n <= x realizing each count vector.  The
main path is a segmented multiplicity sieve; a trial-division oracle provides
an independent slow route for cross-checking at small x.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Iterator

import numpy as np

from .dist import JointPmf
from .errors import CapError, DomainError
from .primesets import PrimeSet

MAX_SETS = 8
MAX_X = 1 << 40
ORACLE_MAX_X = 10**6
DEFAULT_SEGMENT_SIZE = 1 << 20

# Counters are one byte per (set, n); counts within the caps never reach the
# saturation value (Omega(n) <= 40 for n <= 2^40), so hitting it means a bug.
_SATURATION = 255


class CountMode(Enum):
    """How prime factors from a set are counted for one integer."""

    DISTINCT = "distinct"
    WITH_MULTIPLICITY = "multiplicity"


@dataclass(frozen=True)
class SetSpec:
    """One prime set plus the mode used to count its factors."""

    primes: PrimeSet
    mode: CountMode


@dataclass(frozen=True)
class JointCounts:
    """Exact tally of count vectors over n in [1, x]; values sum to x."""

    x: int
    specs: tuple[SetSpec, ...]
    counts: dict[tuple[int, ...], int]

    def total(self) -> int:
        return sum(self.counts.values())

    def marginal(self, i: int) -> dict[int, int]:
        out: dict[int, int] = {}
        for key, c in self.counts.items():
            out[key[i]] = out.get(key[i], 0) + c
        return out

    def write_csv(self, path: str | Path) -> None:
        """One row per count vector: k_1,...,k_m,count (sorted by vector)."""
        m = len(self.specs)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([f"k_{i+1}" for i in range(m)] + ["count"])
            for key in sorted(self.counts):
                w.writerow(list(key) + [self.counts[key]])

    def as_json(self) -> dict:
        return {
            "x": self.x,
            "modes": [s.mode.value for s in self.specs],
            "set_sizes": [len(s.primes) for s in self.specs],
            "counts": [[list(k), c] for k, c in sorted(self.counts.items())],
        }


def _validate_request(x: int, specs: list[SetSpec] | tuple[SetSpec, ...]) -> tuple[SetSpec, ...]:
    specs = tuple(specs)
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x}")
    if x > MAX_X:
        raise CapError(f"x={x} exceeds the cap of 2^40")
    if not specs:
        raise DomainError("at least one set spec is required")
    if len(specs) > MAX_SETS:
        raise CapError(f"{len(specs)} sets exceed the cap of {MAX_SETS}")
    seen: set[int] = set()
    for spec in specs:
        for p in spec.primes:
            # x=1 is exempt: n=1 has no prime factors, so any spec is answerable
            if p > x > 1:
                raise DomainError(f"prime {p} exceeds x={x}")
            if p in seen:
                raise DomainError(f"sets must be pairwise disjoint; {p} repeats")
            seen.add(p)
    return specs


def _prime_powers(spec: SetSpec, x: int) -> list[int]:
    """The sieving moduli for one spec: primes, or all prime powers <= x."""
    if spec.mode is CountMode.DISTINCT:
        return [p for p in spec.primes]
    out = []
    for p in spec.primes:
        q = p
        while q <= x:
            out.append(q)
            q *= p
    return out


def iter_segment_counts(
    x: int,
    specs: list[SetSpec] | tuple[SetSpec, ...],
    *,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> Iterator[tuple[int, int, dict[tuple[int, ...], int]]]:
    """Stream per-segment tallies (seg_lo, seg_hi, partial counts).

    Segments partition [1, x] in ascending order; merging the partial dicts
    gives exactly the result of joint_factor_counts.
    """
    specs = _validate_request(x, specs)
    m = len(specs)
    moduli = [_prime_powers(spec, x) for spec in specs]
    for seg_lo in range(1, x + 1, segment_size):
        seg_hi = min(seg_lo + segment_size - 1, x)
        n_seg = seg_hi - seg_lo + 1
        counters = np.zeros((m, n_seg), dtype=np.uint8)
        for i in range(m):
            row = counters[i]
            for q in moduli[i]:
                start = ((seg_lo + q - 1) // q) * q
                if start <= seg_hi:
                    row[start - seg_lo :: q] += 1
        if counters.max(initial=0) >= _SATURATION:
            raise RuntimeError("counter saturation: count exceeded one byte")
        packed = counters[0].astype(np.uint64)
        for i in range(1, m):
            packed |= counters[i].astype(np.uint64) << np.uint64(8 * i)
        values, tallies = np.unique(packed, return_counts=True)
        partial: dict[tuple[int, ...], int] = {}
        for v, c in zip(values.tolist(), tallies.tolist()):
            key = tuple((v >> (8 * i)) & 0xFF for i in range(m))
            partial[key] = int(c)
        yield seg_lo, seg_hi, partial


def joint_factor_counts(
    x: int,
    specs: list[SetSpec] | tuple[SetSpec, ...],
    *,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> JointCounts:
    """Exact joint counts of factor-count vectors via the segmented sieve."""
    merged: dict[tuple[int, ...], int] = {}
    out_specs: tuple[SetSpec, ...] = tuple(specs)
    for _, _, partial in iter_segment_counts(x, out_specs, segment_size=segment_size):
        for key, c in partial.items():
            merged[key] = merged.get(key, 0) + c
    result = JointCounts(x=int(x), specs=out_specs, counts=merged)
    if result.total() != x:
        raise RuntimeError(f"count total {result.total()} != x={x}")
    return result


def _trial_factorization(n: int) -> dict[int, int]:
    """Factor n by trial division (2, then odd candidates); independent of
    any sieve machinery so it can serve as an oracle."""
    fac: dict[int, int] = {}
    while n % 2 == 0:
        fac[2] = fac.get(2, 0) + 1
        n //= 2
    d = 3
    while d * d <= n:
        while n % d == 0:
            fac[d] = fac.get(d, 0) + 1
            n //= d
        d += 2
    if n > 1:
        fac[n] = fac.get(n, 0) + 1
    return fac


def oracle_factor_counts(x: int, specs: list[SetSpec] | tuple[SetSpec, ...]) -> JointCounts:
    """Slow reference tally that factors every n independently.

    Refuses x above 10^6: the point of this route is verification at small
    scale, not performance.
    """
    if x > ORACLE_MAX_X:
        raise CapError(f"oracle route refuses x={x} > {ORACLE_MAX_X}")
    specs = _validate_request(x, specs)
    sets = [frozenset(spec.primes) for spec in specs]
    modes = [spec.mode for spec in specs]
    m = len(specs)
    counts: dict[tuple[int, ...], int] = {}
    for n in range(1, x + 1):
        fac = _trial_factorization(n)
        key = tuple(
            sum(
                (a if modes[i] is CountMode.WITH_MULTIPLICITY else 1)
                for p, a in fac.items()
                if p in sets[i]
            )
            for i in range(m)
        )
        counts[key] = counts.get(key, 0) + 1
    return JointCounts(x=int(x), specs=specs, counts=counts)


def joint_pmf_of(counts: JointCounts) -> JointPmf:
    """Empirical joint pmf: counts / x, exact support, tail_bound 0."""
    x = counts.x
    entries = {key: c / x for key, c in counts.counts.items()}
    return JointPmf(dims=len(counts.specs), entries=entries, tail_bound=0.0)


def smooth_part_distribution(
    x: int,
    y: int,
    *,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> dict[int, int]:
    """Counts of the y-smooth part of n over n in [1, x].

    The y-smooth part of n is the largest divisor composed only of primes
    <= y.  Built segment by segment: each prime power q = p^a <= x multiplies
    the accumulator of its multiples by p, which yields p^{v_p(n)} in total.
    """
    if y < 2:
        raise DomainError(f"smoothness bound must be >= 2, got {y}")
    if x < y:
        raise DomainError(f"x must be >= y, got x={x} < y={y}")
    if x > MAX_X:
        raise CapError(f"x={x} exceeds the cap of 2^40")
    from .primesets import sieve_primes

    primes = sieve_primes(y).primes
    out: dict[int, int] = {}
    for seg_lo in range(1, x + 1, segment_size):
        seg_hi = min(seg_lo + segment_size - 1, x)
        smooth = np.ones(seg_hi - seg_lo + 1, dtype=np.uint64)
        for p in primes:
            q = p
            while q <= seg_hi:
                start = ((seg_lo + q - 1) // q) * q
                if start <= seg_hi:
                    smooth[start - seg_lo :: q] *= np.uint64(p)
                q *= p
        values, tallies = np.unique(smooth, return_counts=True)
        for s, c in zip(values.tolist(), tallies.tolist()):
            out[int(s)] = out.get(int(s), 0) + int(c)
    return out
