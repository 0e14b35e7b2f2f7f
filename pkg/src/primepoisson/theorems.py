"""Numerical checks of Poisson-approximation bounds for prime-factor counts.

Each check_* routine assembles an exact left-hand side (from the counting
sieve or the independent-factor model) and the corresponding closed-form
right-hand side, and returns a TheoremReport carrying both plus the ratio.
The asymptotic bounds carry unknown absolute constants, so ratios are
recorded and regression-tested against frozen bands rather than asserted
against any particular constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .dist import (
    Pmf,
    TvResult,
    poisson_pmf,
    product_joint,
    tv_distance,
    tv_distance_joint,
)
from .errors import DomainError, EmptyConditionError
from .factorstats import (
    CountMode,
    SetSpec,
    joint_factor_counts,
    joint_pmf_of,
)
from .kubilius import model_exact_pmf, model_tv_exact
from .primesets import (
    PrimeSet,
    count_primes,
    expexp_block,
    expexp_cutoff,
    harmonic_sums,
    sieve_primes,
)

DEFAULT_TAIL_EPS = 1e-12


@dataclass(frozen=True)
class TheoremReport:
    """Outcome of one numerical check.

    ratio is lhs/rhs, or None when rhs is zero (reported as undefined rather
    than synthesizing an infinity).  params carries the configuration echo
    and any secondary quantities; uncertainty bounds the numerical slack in
    lhs (truncation tails and the like).
    """

    name: str
    lhs: float
    rhs: float
    ratio: float | None
    params: dict
    uncertainty: float = 0.0

    def as_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "params": self.params,
            "uncertainty": self.uncertainty,
        }


def _ratio(lhs: float, rhs: float) -> float | None:
    return None if rhs == 0.0 else lhs / rhs


def _set_summary(spec: SetSpec) -> dict:
    hs = harmonic_sums(spec.primes)
    return {
        "size": len(spec.primes),
        "mode": spec.mode.value,
        "h": hs.h,
        "h1": hs.h1,
        "h2": hs.h2,
    }


@dataclass(frozen=True)
class Thm1Config:
    """Joint Poisson comparison: x, smoothness bound y, and per-set specs.

    Every prime in every set must be <= y; sets must be pairwise disjoint.
    """

    x: int
    y: int
    specs: tuple[SetSpec, ...]
    tail_eps: float = DEFAULT_TAIL_EPS
    include_decomposition: bool = True


def check_thm1(cfg: Thm1Config) -> TheoremReport:
    """Compare the exact joint law of factor counts against a product of
    Poisson laws (rate h per distinct-mode set, h1 per multiplicity-mode
    set).  rhs is the closed-form bound sum(h2/(1+h)) + u^-u with
    u = log x / log y.

    When include_decomposition is set, the report also carries the two legs
    of the triangle decomposition: the exact model-vs-truth vector distance
    and the model-vs-Poisson distance, whose sum must dominate lhs.
    """
    if cfg.y < 2 or cfg.y > cfg.x:
        raise DomainError(f"need 2 <= y <= x, got y={cfg.y}, x={cfg.x}")
    for spec in cfg.specs:
        for p in spec.primes:
            if p > cfg.y:
                raise DomainError(f"prime {p} exceeds the smoothness bound y={cfg.y}")

    u = math.log(cfg.x) / math.log(cfg.y)
    counts = joint_factor_counts(cfg.x, cfg.specs)
    empirical = joint_pmf_of(counts)

    summaries = [_set_summary(s) for s in cfg.specs]
    rates = [
        s["h"] if spec.mode is CountMode.DISTINCT else s["h1"]
        for s, spec in zip(summaries, cfg.specs)
    ]
    poisson_joint = product_joint([poisson_pmf(lam, cfg.tail_eps) for lam in rates])
    tv = tv_distance_joint(empirical, poisson_joint)

    rhs = math.fsum(s["h2"] / (1.0 + s["h"]) for s in summaries) + u ** (-u)
    params: dict = {
        "x": cfg.x,
        "y": cfg.y,
        "u": u,
        "u_term": u ** (-u),
        "sets": summaries,
        "poisson_rates": rates,
    }

    if cfg.include_decomposition:
        model_joint = product_joint(
            [model_exact_pmf(s.primes, s.mode, cfg.tail_eps) for s in cfg.specs]
        )
        model_vs_poisson = tv_distance_joint(model_joint, poisson_joint)
        vector_tv = model_tv_exact(cfg.x, cfg.y)
        slack = (
            model_vs_poisson.value
            + vector_tv.value
            + model_vs_poisson.uncertainty
            + tv.uncertainty
            - tv.value
        )
        params["decomposition"] = {
            "model_vs_poisson": model_vs_poisson.value,
            "model_vs_poisson_uncertainty": model_vs_poisson.uncertainty,
            "exact_vector_tv": vector_tv.value,
            "triangle_slack": slack,
        }

    return TheoremReport(
        name=f"thm1[x={cfg.x},y={cfg.y},m={len(cfg.specs)}]",
        lhs=tv.value,
        rhs=rhs,
        ratio=_ratio(tv.value, rhs),
        params=params,
        uncertainty=tv.uncertainty,
    )


def check_corollary1(
    x: int,
    xi_lo: int,
    xi_hi: int,
    tail_eps: float = DEFAULT_TAIL_EPS,
) -> TheoremReport:
    """Joint Poisson(1) comparison over doubly exponential prime blocks
    (t_k, t_{k+1}], t_k = floor(exp(exp(k))).

    A requested block k is usable when t_k^3 <= x (its lower cutoff sits
    below the cube root, keeping u away from 1) and t_{k+1} <= x; unusable
    blocks are dropped and recorded.  rhs is exp(-e^(xi/2)) at the effective
    smallest block index — an order-of-magnitude reference whose absolute
    constant is unknown.
    """
    if xi_hi < xi_lo:
        raise DomainError(f"empty block range [{xi_lo}, {xi_hi}]")
    if xi_lo < 0:
        raise DomainError(f"block index must be >= 0, got {xi_lo}")

    used, skipped = [], []
    for k in range(xi_lo, xi_hi + 1):
        t_k, t_k1 = expexp_cutoff(k), expexp_cutoff(k + 1)
        if t_k**3 <= x and t_k1 <= x:
            used.append(k)
        else:
            skipped.append(k)
    if not used:
        raise DomainError(
            f"infeasible cutoffs: no block in [{xi_lo}, {xi_hi}] fits below x^(1/3) for x={x}"
        )

    blocks = [expexp_block(k) for k in used]
    specs = tuple(SetSpec(b, CountMode.DISTINCT) for b in blocks)
    counts = joint_factor_counts(x, specs)
    empirical = joint_pmf_of(counts)
    unit = poisson_pmf(1.0, tail_eps)
    poisson_joint = product_joint([unit] * len(specs))
    tv = tv_distance_joint(empirical, poisson_joint)

    xi_eff = min(used)
    rhs = math.exp(-math.exp(xi_eff / 2.0))
    block_stats = []
    for k, b in zip(used, blocks):
        hs = harmonic_sums(b)
        block_stats.append(
            {
                "k": k,
                "lo": expexp_cutoff(k),
                "hi": expexp_cutoff(k + 1),
                "size": len(b),
                "h": hs.h,
                "h_minus_1": hs.h - 1.0,
            }
        )
    y_eff = expexp_cutoff(max(used) + 1)
    params = {
        "x": x,
        "requested": [xi_lo, xi_hi],
        "used_blocks": used,
        "skipped_blocks": skipped,
        "xi_effective": xi_eff,
        "blocks": block_stats,
        "y_effective": y_eff,
        "u_effective": math.log(x) / math.log(y_eff),
    }
    return TheoremReport(
        name=f"cor1[x={x},xi={xi_lo}..{xi_hi}]",
        lhs=tv.value,
        rhs=rhs,
        ratio=_ratio(tv.value, rhs),
        params=params,
        uncertainty=tv.uncertainty,
    )


@dataclass(frozen=True)
class Thm2Config:
    """Uniform upper-bound check: disjoint sets, target count vector, and the
    covering flags.  eta is 0 exactly when the sets jointly cover every prime
    <= x (1 otherwise); xi is 1 exactly when eta is 0 and every k_j is 0.
    """

    x: int
    sets: tuple[PrimeSet, ...]
    ks: tuple[int, ...]
    eta: int
    xi: int

    @classmethod
    def infer(cls, x: int, sets: Sequence[PrimeSet], ks: Sequence[int]) -> "Thm2Config":
        """Build a config with eta and xi computed from the sets."""
        sets = tuple(sets)
        ks = tuple(int(k) for k in ks)
        covered = sum(len(s) for s in sets)
        eta = 0 if covered == count_primes(x) else 1
        xi = 1 if eta == 0 and all(k == 0 for k in ks) else 0
        return cls(x=x, sets=sets, ks=ks, eta=eta, xi=xi)


def check_thm2(cfg: Thm2Config) -> TheoremReport:
    """Exact point probability of a joint count vector against the uniform
    upper bound.

    rhs_first = prod_j e^{-h_j} h1_j^{k_j} / k_j! * (eta + sum k_j/h1_j) + xi;
    rhs_second = prod_j e^{-h_j} (h_j+2)^{k_j} / k_j!.  Both ratios are
    reported; the headline ratio uses rhs_first.
    """
    r = len(cfg.sets)
    if r == 0 or len(cfg.ks) != r:
        raise DomainError(f"need matching sets and counts, got {r} sets, {len(cfg.ks)} counts")
    if any(k < 0 for k in cfg.ks):
        raise DomainError("target counts must be >= 0")
    if cfg.eta not in (0, 1) or cfg.xi not in (0, 1):
        raise DomainError("eta and xi must be 0 or 1")

    covered = sum(len(s) for s in cfg.sets)
    eta_true = 0 if covered == count_primes(cfg.x) else 1
    if cfg.eta != eta_true:
        raise DomainError(
            f"declared eta={cfg.eta} but the sets {'do' if eta_true == 0 else 'do not'} "
            f"cover all primes <= x"
        )
    xi_true = 1 if cfg.eta == 0 and all(k == 0 for k in cfg.ks) else 0
    if cfg.xi != xi_true:
        raise DomainError(f"declared xi={cfg.xi} inconsistent with eta and the counts")

    specs = tuple(SetSpec(s, CountMode.DISTINCT) for s in cfg.sets)
    counts = joint_factor_counts(cfg.x, specs)
    lhs = counts.counts.get(cfg.ks, 0) / cfg.x

    summaries = [_set_summary(s) for s in specs]
    log_first = []
    correction = 0.0
    log_second = []
    for s, k in zip(summaries, cfg.ks):
        log_first.append(-s["h"] + k * math.log(s["h1"]) - math.lgamma(k + 1))
        log_second.append(-s["h"] + k * math.log(s["h"] + 2.0) - math.lgamma(k + 1))
        correction += k / s["h1"]
    rhs_first = math.exp(math.fsum(log_first)) * (cfg.eta + correction) + cfg.xi
    rhs_second = math.exp(math.fsum(log_second))

    params = {
        "x": cfg.x,
        "ks": list(cfg.ks),
        "eta": cfg.eta,
        "xi": cfg.xi,
        "sets": summaries,
        "rhs_second": rhs_second,
        "ratio_second": _ratio(lhs, rhs_second),
        "h1_le_h_plus_1": [s["h1"] <= s["h"] + 1.0 + 1e-12 for s in summaries],
    }
    return TheoremReport(
        name=f"thm2[x={cfg.x},r={r},k={','.join(map(str, cfg.ks))}]",
        lhs=lhs,
        rhs=rhs_first,
        ratio=_ratio(lhs, rhs_first),
        params=params,
        uncertainty=0.0,
    )


@dataclass(frozen=True)
class Thm3Config:
    """Conditional concentration check: given omega(n) = k, the count over T
    should concentrate around alpha*k, alpha = h(T)/h(all primes <= x).

    Requires 1 <= k <= a_param * loglog(x), a_param > 1, and
    0 <= psi <= sqrt(alpha*k).
    """

    x: int
    tset: PrimeSet
    k: int
    a_param: float
    psi: float


def check_thm3(cfg: Thm3Config) -> TheoremReport:
    """Exact conditional deviation probability against exp(-psi^2/3).

    lhs = P(|omega(n, T) - alpha*k| >= psi*sqrt(alpha*(1-alpha)*k) given
    omega(n) = k), computed from the exact two-set joint counts of (T,
    complement) restricted to total count k.
    """
    if cfg.a_param <= 1.0:
        raise DomainError(f"a_param must be > 1, got {cfg.a_param}")
    if len(cfg.tset) == 0:
        raise DomainError("T must be nonempty")
    loglog = math.log(math.log(cfg.x))
    if not 1 <= cfg.k <= cfg.a_param * loglog:
        raise DomainError(
            f"need 1 <= k <= a_param*loglog(x) = {cfg.a_param * loglog:.6f}, got k={cfg.k}"
        )

    full = sieve_primes(cfg.x)
    complement = full.difference(cfg.tset)
    if len(complement) == 0:
        raise DomainError("T must be a proper subset of the primes <= x")
    h_t = harmonic_sums(cfg.tset).h
    h_s = harmonic_sums(full).h
    alpha = h_t / h_s
    if not 0.0 <= cfg.psi <= math.sqrt(alpha * cfg.k):
        raise DomainError(
            f"need 0 <= psi <= sqrt(alpha*k) = {math.sqrt(alpha * cfg.k):.6f}, got {cfg.psi}"
        )

    specs = (
        SetSpec(cfg.tset, CountMode.DISTINCT),
        SetSpec(complement, CountMode.DISTINCT),
    )
    counts = joint_factor_counts(cfg.x, specs)
    threshold = cfg.psi * math.sqrt(alpha * (1.0 - alpha) * cfg.k)
    conditioned = 0
    deviating = 0
    for (a, b), c in counts.counts.items():
        if a + b != cfg.k:
            continue
        conditioned += c
        if abs(a - alpha * cfg.k) >= threshold:
            deviating += c
    if conditioned == 0:
        raise EmptyConditionError(f"no n <= {cfg.x} has exactly {cfg.k} distinct prime factors")

    lhs = deviating / conditioned
    rhs = math.exp(-cfg.psi**2 / 3.0)
    params = {
        "x": cfg.x,
        "k": cfg.k,
        "psi": cfg.psi,
        "a_param": cfg.a_param,
        "alpha": alpha,
        "threshold": threshold,
        "t_size": len(cfg.tset),
        "complement_size": len(complement),
        "conditioned_count": conditioned,
        "deviating_count": deviating,
    }
    return TheoremReport(
        name=f"thm3[x={cfg.x},k={cfg.k},psi={cfg.psi}]",
        lhs=lhs,
        rhs=rhs,
        ratio=_ratio(lhs, rhs),
        params=params,
        uncertainty=0.0,
    )


def check_halasz(x: int, tset: PrimeSet, k_range: Sequence[int]) -> list[TheoremReport]:
    """Pointwise Poisson comparison for the multiplicity count over T.

    For each k, lhs is the exact P(count = k) and rhs the Poisson(h) mass at
    k.  params carries the alternative Poisson(h1) ratio and the error shape
    |k-h|/h + 1/sqrt(h) for context; nothing is asserted here.
    """
    ks = [int(k) for k in k_range]
    if not ks:
        raise DomainError("k_range must be nonempty")
    if any(k < 0 for k in ks):
        raise DomainError("k values must be >= 0")
    counts = joint_factor_counts(x, (SetSpec(tset, CountMode.WITH_MULTIPLICITY),))
    marginal = counts.marginal(0)
    hs = harmonic_sums(tset)

    def pois_mass(rate: float, k: int) -> float:
        return math.exp(-rate + k * math.log(rate) - math.lgamma(k + 1))

    reports = []
    for k in ks:
        lhs = marginal.get(k, 0) / x
        rhs = pois_mass(hs.h, k)
        params = {
            "x": x,
            "k": k,
            "h": hs.h,
            "h1": hs.h1,
            "t_size": len(tset),
            "ratio_h1": _ratio(lhs, pois_mass(hs.h1, k)),
            "error_shape": abs(k - hs.h) / hs.h + 1.0 / math.sqrt(hs.h),
        }
        reports.append(
            TheoremReport(
                name=f"halasz[x={x},k={k}]",
                lhs=lhs,
                rhs=rhs,
                ratio=_ratio(lhs, rhs),
                params=params,
                uncertainty=0.0,
            )
        )
    return reports


def check_thm4_local(
    tset: PrimeSet,
    mode: CountMode,
    tail_eps: float = DEFAULT_TAIL_EPS,
    k_max: int | None = None,
) -> list[TheoremReport]:
    """Pointwise model-vs-Poisson gaps against the local bound.

    With rate H (h for distinct mode, h1 for multiplicity mode):
      k <= 1.9*H: rhs = h2 * Pois(H){k} * (1/(k+1) + ((k-H)/H)^2)
      k >  1.9*H: rhs = h2 * e^(0.9*H) / 1.9^k
    """
    if len(tset) == 0:
        raise DomainError("T must be nonempty")
    hs = harmonic_sums(tset)
    rate = hs.h if mode is CountMode.DISTINCT else hs.h1
    model = model_exact_pmf(tset, mode, tail_eps)
    pois = poisson_pmf(rate, tail_eps)
    if k_max is None:
        k_max = math.ceil(3.0 * rate) + 10

    reports = []
    for k in range(k_max + 1):
        lhs = abs(model.prob(k) - pois.prob(k))
        if k <= 1.9 * rate:
            mass = math.exp(-rate + k * math.log(rate) - math.lgamma(k + 1))
            rhs = hs.h2 * mass * (1.0 / (k + 1) + ((k - rate) / rate) ** 2)
            regime = "bulk"
        else:
            rhs = hs.h2 * math.exp(0.9 * rate) / 1.9**k
            regime = "upper"
        params = {
            "k": k,
            "mode": mode.value,
            "h": hs.h,
            "h1": hs.h1,
            "h2": hs.h2,
            "rate": rate,
            "regime": regime,
        }
        reports.append(
            TheoremReport(
                name=f"thm4[{mode.value},k={k}]",
                lhs=lhs,
                rhs=rhs,
                ratio=_ratio(lhs, rhs),
                params=params,
                uncertainty=model.tail_bound + pois.tail_bound,
            )
        )
    return reports


def check_cor32(
    tset: PrimeSet,
    mode: CountMode = CountMode.DISTINCT,
    tail_eps: float = DEFAULT_TAIL_EPS,
) -> TheoremReport:
    """Total variation between the model count law and its Poisson limit
    against the closed-form rate h2/(1+h)."""
    if len(tset) == 0:
        raise DomainError("T must be nonempty")
    hs = harmonic_sums(tset)
    rate = hs.h if mode is CountMode.DISTINCT else hs.h1
    tv = tv_distance(model_exact_pmf(tset, mode, tail_eps), poisson_pmf(rate, tail_eps))
    rhs = hs.h2 / (1.0 + hs.h)
    params = {
        "mode": mode.value,
        "t_size": len(tset),
        "h": hs.h,
        "h1": hs.h1,
        "h2": hs.h2,
        "rate": rate,
    }
    return TheoremReport(
        name=f"cor32[{mode.value},m={len(tset)}]",
        lhs=tv.value,
        rhs=rhs,
        ratio=_ratio(tv.value, rhs),
        params=params,
        uncertainty=tv.uncertainty,
    )
