"""Discrete distributions on the nonnegative integers with certified tail mass.

A Pmf stores probabilities from index 0 up to a truncation point together
with a tail_bound that certifies how much mass the stored vector can miss.
Total-variation distances report that missing mass as an explicit
uncertainty instead of silently ignoring it.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError

MASS_SLACK = 1e-12


@dataclass(frozen=True)
class Pmf:
    """Probability mass function on {0, 1, 2, ...}, truncated with a certificate.

    probs[k] approximates P(X = k); the mass not represented by the vector is
    at most tail_bound.  Invariant: 1 - tail_bound <= sum(probs) <= 1 (up to
    float slack).
    """

    probs: tuple[float, ...]
    tail_bound: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(float(v) for v in self.probs))
        if not self.probs:
            raise DomainError("a pmf needs at least one entry")
        if self.tail_bound < 0.0:
            raise DomainError(f"tail_bound must be >= 0, got {self.tail_bound}")
        if any(v < 0.0 for v in self.probs):
            raise DomainError("pmf entries must be nonnegative")
        s = math.fsum(self.probs)
        if s > 1.0 + MASS_SLACK or s < 1.0 - self.tail_bound - MASS_SLACK:
            raise DomainError(
                f"pmf mass {s} outside [1 - tail_bound, 1] window (tail_bound={self.tail_bound})"
            )

    def __len__(self) -> int:
        return len(self.probs)

    def prob(self, k: int) -> float:
        """P(X = k), zero beyond the stored support."""
        if 0 <= k < len(self.probs):
            return self.probs[k]
        return 0.0

    def mean(self) -> float:
        return math.fsum(k * v for k, v in enumerate(self.probs))

    def series(self, z: complex) -> complex:
        """Evaluate sum of probs[k] * z^k (Horner)."""
        acc: complex = 0.0
        for v in reversed(self.probs):
            acc = acc * z + v
        return acc

    def as_json(self) -> dict:
        return {"probs": list(self.probs), "tail_bound": self.tail_bound}

    @classmethod
    def from_json(cls, obj: dict) -> "Pmf":
        return cls(tuple(obj["probs"]), float(obj["tail_bound"]))

    def write_csv(self, path: str | Path) -> None:
        """Two columns: index, probability."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["index", "probability"])
            for k, v in enumerate(self.probs):
                w.writerow([k, repr(v)])


@dataclass(frozen=True)
class JointPmf:
    """Sparse joint pmf on m-tuples of nonnegative integers."""

    dims: int
    entries: dict[tuple[int, ...], float]
    tail_bound: float = 0.0

    def __post_init__(self):
        if self.dims < 1:
            raise DomainError(f"dims must be >= 1, got {self.dims}")
        if self.tail_bound < 0.0:
            raise DomainError(f"tail_bound must be >= 0, got {self.tail_bound}")
        for key, v in self.entries.items():
            if len(key) != self.dims:
                raise DomainError(f"key {key} has length {len(key)}, expected {self.dims}")
            if any(k < 0 for k in key):
                raise DomainError(f"key {key} has a negative coordinate")
            if v < 0.0:
                raise DomainError(f"entry {key} has negative mass {v}")
        s = math.fsum(self.entries.values())
        if s > 1.0 + MASS_SLACK or s < 1.0 - self.tail_bound - MASS_SLACK:
            raise DomainError(
                f"joint mass {s} outside [1 - tail_bound, 1] window (tail_bound={self.tail_bound})"
            )

    def prob(self, key: tuple[int, ...]) -> float:
        return self.entries.get(tuple(key), 0.0)

    def as_json(self) -> dict:
        items = sorted(self.entries.items())
        return {
            "dims": self.dims,
            "entries": [[list(k), v] for k, v in items],
            "tail_bound": self.tail_bound,
        }


@dataclass(frozen=True)
class TvResult:
    """A total-variation distance with a rigorous uncertainty radius."""

    value: float
    uncertainty: float

    def __post_init__(self):
        if not 0.0 <= self.value <= 1.0:
            raise DomainError(f"tv value must be in [0, 1], got {self.value}")
        if self.uncertainty < 0.0:
            raise DomainError(f"uncertainty must be >= 0, got {self.uncertainty}")
        if self.value + self.uncertainty > 1.0 + MASS_SLACK:
            raise DomainError("value + uncertainty exceeds 1")

    def as_json(self) -> dict:
        return {"value": self.value, "uncertainty": self.uncertainty}


def poisson_pmf(lam: float, tail_eps: float = 1e-12) -> Pmf:
    """Poisson(lam) truncated so the certified missing mass is below tail_eps.

    The truncation point K is the smallest integer above lam whose Chernoff
    tail certificate exp(-lam) * (e*lam/K)^K drops below tail_eps; that
    certificate (an upper bound for P(X >= K)) becomes the pmf's tail_bound.
    Entries are evaluated by the multiplicative recurrence for small lam and
    k, and in log space otherwise, to dodge overflow of lam^k / k!.
    """
    if lam < 0.0:
        raise DomainError(f"poisson rate must be >= 0, got {lam}")
    if not 0.0 < tail_eps < 1.0:
        raise DomainError(f"tail_eps must be in (0, 1), got {tail_eps}")
    if lam == 0.0:
        return Pmf((1.0,), 0.0)

    log_lam = math.log(lam)

    def log_cert(k: int) -> float:
        # log of exp(-lam) * (e*lam/k)^k, valid upper bound for k > lam
        return -lam + k * (1.0 + log_lam - math.log(k))

    k_cut = max(1, math.floor(lam) + 1)
    log_eps = math.log(tail_eps)
    while log_cert(k_cut) >= log_eps:
        k_cut += 1
    tail_bound = math.exp(log_cert(k_cut))

    probs = []
    if lam <= 30.0:
        v = math.exp(-lam)
        for k in range(min(k_cut, 31)):
            probs.append(v)
            v *= lam / (k + 1)
    for k in range(len(probs), k_cut):
        probs.append(math.exp(-lam + k * log_lam - math.lgamma(k + 1)))
    return Pmf(tuple(probs), tail_bound)


def tv_distance(p: Pmf, q: Pmf) -> TvResult:
    """Total variation between two 1-D pmfs over the union of stored supports.

    The halved sum of absolute differences covers the stored mass; whatever
    either pmf truncated away is folded into the uncertainty.
    """
    n = max(len(p), len(q))
    total = math.fsum(abs(p.prob(k) - q.prob(k)) for k in range(n))
    value = min(1.0, 0.5 * total)
    return TvResult(value=value, uncertainty=min(1.0 - value, 0.5 * (p.tail_bound + q.tail_bound)))


def tv_distance_joint(p: JointPmf, q: JointPmf) -> TvResult:
    """Total variation between two sparse joint pmfs of equal dimension."""
    if p.dims != q.dims:
        raise DomainError(f"dimension mismatch: {p.dims} vs {q.dims}")
    keys = p.entries.keys() | q.entries.keys()
    total = math.fsum(abs(p.prob(k) - q.prob(k)) for k in sorted(keys))
    value = min(1.0, 0.5 * total)
    return TvResult(value=value, uncertainty=min(1.0 - value, 0.5 * (p.tail_bound + q.tail_bound)))


def product_joint(components: Sequence[Pmf]) -> JointPmf:
    """Joint law of independent coordinates, one Pmf per dimension.

    Entries are products over the truncated grid of the component supports.
    The grid drops exactly the mass the components dropped, so the joint
    tail_bound is the union bound (sum) of the component tail bounds plus the
    product mass lost to float rounding.
    """
    comps = list(components)
    if not comps:
        raise DomainError("product_joint needs at least one component")
    grid = 1
    for c in comps:
        grid *= len(c)
    if grid > 20_000_000:
        raise DomainError(f"product grid of {grid} entries is too large")

    arrays = [np.asarray(c.probs) for c in comps]
    out = arrays[0]
    for a in arrays[1:]:
        out = np.multiply.outer(out, a)
    flat = out.reshape(-1)
    ranges = [range(len(c)) for c in comps]
    entries: dict[tuple[int, ...], float] = {
        key: float(v) for key, v in zip(itertools.product(*ranges), flat)
    }

    kept = math.fsum(flat.tolist())
    exact_product = math.prod(math.fsum(c.probs) for c in comps)
    rounding_loss = max(0.0, exact_product - kept)
    tail = math.fsum(c.tail_bound for c in comps) + rounding_loss
    return JointPmf(dims=len(comps), entries=entries, tail_bound=min(tail, 1.0))


def binomial_pmf(k: int, alpha: float) -> Pmf:
    """Binomial(k, alpha) pmf, exact support [0, k], tail_bound 0."""
    if k < 0:
        raise DomainError(f"trial count must be >= 0, got {k}")
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"success probability must be in [0, 1], got {alpha}")
    if alpha == 0.0:
        return Pmf((1.0,) + (0.0,) * k, 0.0)
    if alpha == 1.0:
        return Pmf((0.0,) * k + (1.0,), 0.0)
    if k <= 1000:
        pa = [1.0]
        pb = [1.0]
        for _ in range(k):
            pa.append(pa[-1] * alpha)
            pb.append(pb[-1] * (1.0 - alpha))
        probs = tuple(math.comb(k, m) * pa[m] * pb[k - m] for m in range(k + 1))
    else:
        la, lb = math.log(alpha), math.log1p(-alpha)
        probs = tuple(
            math.exp(math.lgamma(k + 1) - math.lgamma(m + 1) - math.lgamma(k - m + 1)
                     + m * la + (k - m) * lb)
            for m in range(k + 1)
        )
    return Pmf(probs, 0.0)


class BinomialTailBounds(NamedTuple):
    """Closed-form binomial tail bounds: the relative-entropy form and the
    weaker quadratic exponential form derived from it."""

    kullback: float
    exponential: float


def binomial_tail_bound(k: int, alpha: float, beta: float) -> BinomialTailBounds:
    """Chernoff bounds for a Binomial(k, alpha) tail at threshold beta*k.

    For beta <= alpha the bounds apply to P(X <= beta*k); for beta >= alpha
    they apply to P(X >= beta*k).  Both formulas are symmetric under
    (alpha, beta) -> (1-alpha, 1-beta), so one function covers either tail:

      kullback    = exp(-k * (beta*log(beta/alpha) + (1-beta)*log((1-beta)/(1-alpha))))
      exponential = exp(-(alpha-beta)^2 * k / (3*alpha*(1-alpha)))

    Degenerate corners: beta == alpha returns (1, 1) (empty exponent);
    alpha in {0, 1} with beta != alpha returns (0, 0), the limit of the
    kullback form as the divergence blows up.
    """
    if k < 0:
        raise DomainError(f"trial count must be >= 0, got {k}")
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must be in [0, 1], got {alpha}")
    if not 0.0 <= beta <= 1.0:
        raise DomainError(f"beta must be in [0, 1], got {beta}")
    if beta == alpha:
        return BinomialTailBounds(1.0, 1.0)
    if alpha == 0.0 or alpha == 1.0:
        return BinomialTailBounds(0.0, 0.0)
    div = 0.0
    if beta > 0.0:
        div += beta * math.log(beta / alpha)
    if beta < 1.0:
        div += (1.0 - beta) * math.log((1.0 - beta) / (1.0 - alpha))
    kullback = math.exp(-k * div)
    exponential = math.exp(-((alpha - beta) ** 2) * k / (3.0 * alpha * (1.0 - alpha)))
    return BinomialTailBounds(kullback, exponential)
