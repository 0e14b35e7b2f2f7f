"""Prime enumeration, validated prime-set containers, and harmonic sums over primes.

Primes are generated by a segmented sieve of Eratosthenes so memory stays
bounded by the segment size regardless of the interval endpoints.  Harmonic
sums use exact compensated summation (math.fsum) over ascending primes.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import mpmath
import numpy as np

from .errors import DomainError

DEFAULT_SEGMENT_SIZE = 1 << 20

# Primality lookups below this bound go through a cached byte table; above it,
# a deterministic Miller-Rabin witness set certified for all n < 3.3e24.
_TABLE_LIMIT = 1 << 21
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=1)
def _prime_table() -> bytes:
    return _simple_sieve(_TABLE_LIMIT).tobytes()


def _simple_sieve(limit: int) -> np.ndarray:
    """Boolean array of length limit+1 marking primes up to limit."""
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return flags


def is_prime(n: int) -> bool:
    """Deterministic primality check (table lookup, then Miller-Rabin)."""
    if n < _TABLE_LIMIT:
        return n >= 0 and _prime_table()[n] == 1
    if n % 2 == 0:
        return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeSet:
    """A strictly increasing tuple of primes with an optional label.

    Every element is checked for primality on construction, so a PrimeSet in
    hand is always a valid finite set of primes.
    """

    primes: tuple[int, ...]
    label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        prev = 1
        for p in self.primes:
            if p <= prev:
                raise DomainError(f"primes must be strictly increasing, got {p} after {prev}")
            prev = p
        table = _prime_table()
        for p in self.primes:
            ok = table[p] == 1 if p < _TABLE_LIMIT else is_prime(p)
            if not ok:
                raise DomainError(f"{p} is not prime")

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)

    def __contains__(self, p: int) -> bool:
        i = bisect_left(self.primes, p)
        return i < len(self.primes) and self.primes[i] == p

    def difference(self, other: "PrimeSet", label: str | None = None) -> "PrimeSet":
        drop = set(other.primes)
        return PrimeSet(tuple(p for p in self.primes if p not in drop), label=label)

    def intersects(self, other: "PrimeSet") -> bool:
        small, big = (self, other) if len(self) <= len(other) else (other, self)
        return any(p in big for p in small.primes)


@dataclass(frozen=True)
class HarmonicSums:
    """The three prime harmonic sums of a set T.

    h  = sum of 1/p, h1 = sum of 1/(p-1), h2 = sum of 1/p^2.
    Always 0 <= h <= h1 and h1 <= h + 2*h2 (h1 - h = sum 1/(p(p-1)) <= 2*h2).
    """

    h: float
    h1: float
    h2: float


def sieve_primes(limit: int, *, label: str | None = None,
                 segment_size: int = DEFAULT_SEGMENT_SIZE) -> PrimeSet:
    """All primes p <= limit, ascending.  limit < 2 is a domain error."""
    if limit < 2:
        raise DomainError(f"sieve limit must be >= 2, got {limit}")
    return PrimeSet(_primes_in_range(1, int(limit), segment_size), label=label)


def primes_in_interval(lo: int, hi: int, *, label: str | None = None,
                       segment_size: int = DEFAULT_SEGMENT_SIZE) -> PrimeSet:
    """Primes in the half-open interval (lo, hi].  Requires 2 <= lo <= hi."""
    if hi < lo:
        raise DomainError(f"empty interval: hi={hi} < lo={lo}")
    if lo < 2:
        raise DomainError(f"interval lower endpoint must be >= 2, got {lo}")
    return PrimeSet(_primes_in_range(int(lo), int(hi), segment_size), label=label)


def _primes_in_range(lo: int, hi: int, segment_size: int) -> tuple[int, ...]:
    """Primes in (lo, hi] via a segmented sieve; memory ~ segment_size."""
    if hi <= lo:
        return ()
    root = math.isqrt(hi)
    base = np.flatnonzero(_simple_sieve(max(root, 2)))
    chunks = []
    for seg_lo in range(lo + 1, hi + 1, segment_size):
        seg_hi = min(seg_lo + segment_size - 1, hi)
        flags = np.ones(seg_hi - seg_lo + 1, dtype=bool)
        if seg_lo == 1:
            flags[0] = False
        for p in base:
            p = int(p)
            start = max(p * p, ((seg_lo + p - 1) // p) * p)
            if start <= seg_hi:
                flags[start - seg_lo :: p] = False
        chunks.append(np.flatnonzero(flags) + seg_lo)
    return tuple(int(p) for p in np.concatenate(chunks)) if chunks else ()


def count_primes(limit: int, *, segment_size: int = DEFAULT_SEGMENT_SIZE) -> int:
    """pi(limit): the number of primes <= limit."""
    if limit < 2:
        return 0
    root = math.isqrt(limit)
    base = np.flatnonzero(_simple_sieve(max(root, 2)))
    total = 0
    for seg_lo in range(2, limit + 1, segment_size):
        seg_hi = min(seg_lo + segment_size - 1, limit)
        flags = np.ones(seg_hi - seg_lo + 1, dtype=bool)
        for p in base:
            p = int(p)
            start = max(p * p, ((seg_lo + p - 1) // p) * p)
            if start <= seg_hi:
                flags[start - seg_lo :: p] = False
        total += int(flags.sum())
    return total


def harmonic_sums(ps: PrimeSet) -> HarmonicSums:
    """Compensated harmonic sums over a prime set, ascending order.

    Uses exact float summation, so the result is deterministic and does not
    depend on how the set might be partitioned.
    """
    h = math.fsum(1.0 / p for p in ps.primes)
    h1 = math.fsum(1.0 / (p - 1) for p in ps.primes)
    h2 = math.fsum(1.0 / (p * p) for p in ps.primes)
    return HarmonicSums(h=h, h1=h1, h2=h2)


_EXPEXP_MAX_K = 10


@lru_cache(maxsize=None)
def expexp_cutoff(k: int) -> int:
    """floor(exp(exp(k))), evaluated in extended precision.

    The doubly exponential growth makes float64 useless beyond k=3, so the
    value is computed with mpmath at a working precision sized to the result
    and re-checked at double that precision to certify the floor.
    """
    if not 0 <= k <= _EXPEXP_MAX_K:
        raise DomainError(f"cutoff index must be in [0, {_EXPEXP_MAX_K}], got {k}")
    prec = 64 + int(1.5 * math.exp(k))
    with mpmath.workprec(prec):
        val = int(mpmath.floor(mpmath.exp(mpmath.exp(k))))
    with mpmath.workprec(2 * prec):
        check = int(mpmath.floor(mpmath.exp(mpmath.exp(k))))
    if val != check:
        raise RuntimeError(f"cutoff for k={k} unstable under precision doubling")
    return val


def expexp_block(k: int, *, label: str | None = None) -> PrimeSet:
    """Primes in the doubly exponential block (t_k, t_{k+1}], t_k = floor(exp(exp(k)))."""
    lo, hi = expexp_cutoff(k), expexp_cutoff(k + 1)
    return primes_in_interval(lo, hi, label=label or f"expexp:{k}")


def save_prime_set(ps: PrimeSet, path: str | Path) -> None:
    """Write one decimal prime per line."""
    Path(path).write_text("".join(f"{p}\n" for p in ps.primes))


def load_prime_set(path: str | Path, *, label: str | None = None) -> PrimeSet:
    """Read a newline-delimited decimal prime file written by save_prime_set."""
    text = Path(path).read_text()
    primes = tuple(int(line) for line in text.split())
    return PrimeSet(primes, label=label)
