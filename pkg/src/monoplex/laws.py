"""Limit laws as finite-support distributions.

All laws are truncated to finite support with the discarded probability
reported as tail_mass, so distances computed from them are honest upper
bounds. Probabilities are floats except where a caller builds a law from
exact rational masses (the enumeration oracle does); the utilities preserve
Fraction arithmetic when they receive it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import fsum
from typing import Iterable, Mapping, Sequence, Union

from monoplex.core import ValidationError

Real = Union[float, Fraction]

DEFAULT_TAIL_TOL = 1e-10

MAX_JOINT_DIMENSION = 4

_NORMALIZATION_SLACK = 1e-12


@dataclass(frozen=True)
class DiscreteLaw:
    """Finite-support distribution on d-tuples of non-negative integers."""

    dimension: int
    support: tuple[tuple[int, ...], ...]
    pmf: Mapping[tuple[int, ...], Real]
    tail_mass: Real


@dataclass(frozen=True)
class SharedComponentSpec:
    """Rates for T_i = sum over subsets S containing i of Z_S, with the Z_S
    independent Poisson variables. Keys are frozensets over {1..d}."""

    dimension: int
    rates: Mapping[frozenset[int], float]


@dataclass(frozen=True)
class LawMoments:
    means: tuple[Real, ...]
    covariance: tuple[tuple[Real, ...], ...]


def _make_law(d: int, pmf: dict[tuple[int, ...], Real], tail_mass: Real) -> DiscreteLaw:
    pmf = {x: p for x, p in pmf.items() if p != 0}
    for x, p in pmf.items():
        if p < 0:
            raise AssertionError(f"negative mass {p} at {x}")
    total = sum(pmf.values()) + tail_mass
    if abs(total - 1) > _NORMALIZATION_SLACK:
        raise AssertionError(f"law mass {total} deviates from 1")
    return DiscreteLaw(d, tuple(sorted(pmf)), pmf, tail_mass)


def law_from_pmf(d: int, pmf: Mapping[tuple[int, ...], Real], tail_mass: Real = 0) -> DiscreteLaw:
    """Wrap an explicit pmf (e.g. exact enumeration output) as a DiscreteLaw."""
    return _make_law(d, dict(pmf), tail_mass)


def _poisson_terms(lam: float, tol: float) -> tuple[list[float], float]:
    """Truncated Pois(lam) pmf as a list over k = 0..k_max, plus tail mass:
    the smallest k_max with remaining mass < tol."""
    if lam < 0:
        raise ValidationError(f"rate: must be >= 0, got {lam}")
    if lam == 0:
        return [1.0], 0.0
    terms = []
    p = math.exp(-lam)
    cum = 0.0
    k = 0
    while True:
        terms.append(p)
        cum += p
        if 1.0 - cum < tol:
            break
        k += 1
        p *= lam / k
        if k > 100_000:
            raise ResourceWarning(f"poisson truncation did not converge for rate {lam}")
    return terms, max(0.0, 1.0 - cum)


def poisson_law(lam: float, tail_tol: float = DEFAULT_TAIL_TOL) -> DiscreteLaw:
    """Pois(lam), truncated at the smallest k_max with tail below tail_tol."""
    terms, tail = _poisson_terms(lam, tail_tol)
    return _make_law(1, {(k,): p for k, p in enumerate(terms)}, tail)


def new_shared_component_spec(
    d: int, rates: Mapping[Iterable[int], float]
) -> SharedComponentSpec:
    if d < 1:
        raise ValidationError(f"dimension: must be >= 1, got {d}")
    canon: dict[frozenset[int], float] = {}
    for key, lam in rates.items():
        s = frozenset(key)
        if not s:
            raise ValidationError("rates: empty subset key")
        if not all(isinstance(i, int) and 1 <= i <= d for i in s):
            raise ValidationError(f"rates: subset {sorted(s)} not within [1, {d}]")
        if s in canon:
            raise ValidationError(f"rates: duplicate subset {sorted(s)}")
        if not math.isfinite(lam) or lam < 0:
            raise ValidationError(f"rates[{sorted(s)}]: rate must be finite >= 0, got {lam}")
        canon[s] = float(lam)
    return SharedComponentSpec(d, canon)


def shared_component_law(
    spec: SharedComponentSpec, tail_tol: float = DEFAULT_TAIL_TOL
) -> DiscreteLaw:
    """Joint law of (T_1..T_d) with T_i = sum of Z_S over subsets S containing
    i, for independent Z_S ~ Pois(rate_S), by exact truncated convolution."""
    d = spec.dimension
    if d > MAX_JOINT_DIMENSION:
        raise ValidationError(
            f"dimension {d} exceeds joint-law bound {MAX_JOINT_DIMENSION}"
        )
    active = [(s, lam) for s, lam in spec.rates.items() if lam > 0]
    per_comp_tol = tail_tol / max(1, len(active))
    dist: dict[tuple[int, ...], float] = {(0,) * d: 1.0}
    tail = 0.0
    for s, lam in active:
        step = tuple(1 if i + 1 in s else 0 for i in range(d))
        terms, comp_tail = _poisson_terms(lam, per_comp_tol)
        tail += comp_tail
        nxt: dict[tuple[int, ...], float] = {}
        for x, px in dist.items():
            for k, pk in enumerate(terms):
                y = tuple(a + k * b for a, b in zip(x, step))
                nxt[y] = nxt.get(y, 0.0) + px * pk
        dist = nxt
    # Component tails compound multiplicatively; the union bound keeps the
    # reported tail an upper bound on the truncated mass.
    realized_tail = 1.0 - fsum(dist.values())
    return _make_law(d, dist, max(realized_tail, 0.0))


def compound_weighted_law(
    rates: Sequence[float], tail_tol: float = DEFAULT_TAIL_TOL
) -> DiscreteLaw:
    """Law of sum over i of i*Z_i, i = 1..K, independent Z_i ~ Pois(rates[i-1])."""
    if len(rates) < 1:
        raise ValidationError("rates: at least one rate required")
    active = [(i + 1, lam) for i, lam in enumerate(rates) if lam > 0]
    for i, lam in enumerate(rates):
        if lam < 0:
            raise ValidationError(f"rates[{i}]: must be >= 0, got {lam}")
    per_comp_tol = tail_tol / max(1, len(active))
    dist: dict[int, float] = {0: 1.0}
    for i, lam in active:
        terms, _ = _poisson_terms(lam, per_comp_tol)
        nxt: dict[int, float] = {}
        for x, px in dist.items():
            for k, pk in enumerate(terms):
                nxt[x + i * k] = nxt.get(x + i * k, 0.0) + px * pk
        dist = nxt
    realized_tail = 1.0 - fsum(dist.values())
    return _make_law(1, {(x,): p for x, p in dist.items()}, max(realized_tail, 0.0))


def binom2_poisson_law(mu: float, tail_tol: float = DEFAULT_TAIL_TOL) -> DiscreteLaw:
    """Pushforward of Pois(mu) under k -> k(k-1)/2; support {0, 1, 3, 6, ...}."""
    terms, tail = _poisson_terms(mu, tail_tol)
    pmf: dict[tuple[int, ...], float] = {}
    for k, p in enumerate(terms):
        x = (k * (k - 1) // 2,)
        pmf[x] = pmf.get(x, 0.0) + p
    return _make_law(1, pmf, tail)


def tv_distance(P: DiscreteLaw, Q: DiscreteLaw) -> Real:
    """Half the l1 gap over the union support, plus half of both tail masses
    (an upper bound on the true total-variation distance)."""
    if P.dimension != Q.dimension:
        raise ValidationError(f"dimension mismatch: {P.dimension} != {Q.dimension}")
    keys = set(P.pmf) | set(Q.pmf)
    gaps = [abs(P.pmf.get(x, 0) - Q.pmf.get(x, 0)) for x in keys]
    if any(isinstance(g, Fraction) for g in gaps) and not any(
        isinstance(g, float) for g in gaps
    ):
        core = sum(gaps, Fraction(0)) / 2
        return core + Fraction(P.tail_mass) / 2 + Fraction(Q.tail_mass) / 2
    return fsum(gaps) / 2.0 + (P.tail_mass + Q.tail_mass) / 2.0


def law_moments(P: DiscreteLaw) -> LawMoments:
    """Mean vector and covariance matrix of the truncated pmf, exact when the
    masses are rational."""
    d = P.dimension
    items = list(P.pmf.items())
    rational = all(isinstance(p, Fraction) for _, p in items) and items
    def acc(values):
        return sum(values, Fraction(0)) if rational else fsum(values)

    total = acc([p for _, p in items])
    if total == 0:
        zero = Fraction(0) if rational else 0.0
        return LawMoments((zero,) * d, tuple((zero,) * d for _ in range(d)))
    means = tuple(acc([x[i] * p for x, p in items]) / total for i in range(d))
    cov = []
    for i in range(d):
        row = []
        for j in range(d):
            second = acc([x[i] * x[j] * p for x, p in items]) / total
            row.append(second - means[i] * means[j])
        cov.append(tuple(row))
    return LawMoments(means, tuple(cov))
