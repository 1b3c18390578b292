"""Exact first and second moments of monochromatic-edge counts.

Each report carries its full decomposition (the single-edge term plus one
term per intersection size) so callers can inspect the pieces. Every
operation takes rational=True to switch from float arithmetic (with fsum
accumulation) to exact Fraction arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import fsum
from typing import Mapping, Union

from monoplex.core import (
    Multiplex,
    UniformHypergraph,
    ValidationError,
    WeightedUniformHypergraph,
    k_cross_all,
    k_exact_all,
    weighted_pair_sums_all,
)

Real = Union[float, Fraction]


@dataclass(frozen=True)
class MomentReport:
    """Variance decomposition: variance = r1_term + sum of r2_terms.

    r1_term covers single edges; r2_terms[t] covers ordered pairs of distinct
    edges overlapping in exactly t vertices, t in [2, r-1].
    """

    mean: Real
    variance: Real
    r1_term: Real
    r2_terms: Mapping[int, Real]


@dataclass(frozen=True)
class CovarianceReport:
    """Covariance decomposition: covariance = q1_term + sum of q2_terms.

    q1_term covers identical edge pairs (shared edges; zero when the two
    uniformities differ); q2_terms[t] covers non-identical ordered cross
    pairs overlapping in exactly t vertices, t in [2, min(r1, r2)].
    """

    covariance: Real
    q1_term: Real
    q2_terms: Mapping[int, Real]


@dataclass(frozen=True)
class ConditionReport:
    """ratios[t] = (ordered distinct pairs sharing exactly t vertices) / c^(2r-t-1).

    All entries vanishing as the family grows is the second-moment condition
    for the Poisson limit; a non-vanishing entry flags a violating family.
    """

    ratios: Mapping[int, Real]


@dataclass(frozen=True)
class MomentMatrixReport:
    """Joint mean vector and covariance matrix with per-entry decompositions."""

    means: tuple[Real, ...]
    covariance: tuple[tuple[Real, ...], ...]
    variance_reports: tuple[MomentReport, ...]
    covariance_reports: Mapping[tuple[int, int], CovarianceReport]


@dataclass(frozen=True)
class WeightedMomentReport:
    """Weighted-count analogue: variance = u1_term + sum of u2_terms."""

    mean: Real
    variance: Real
    u1_term: Real
    u2_terms: Mapping[int, Real]


def _inv_pow(c: int, k: int, rational: bool) -> Real:
    return Fraction(1, c**k) if rational else 1.0 / c**k


def _one(rational: bool) -> Real:
    return Fraction(1) if rational else 1.0

def _total(head: Real, tail, rational: bool) -> Real:
    if rational:
        return head + sum(tail, Fraction(0))
    return fsum([head, *tail])


def _check_c(c: int) -> None:
    if not isinstance(c, int) or c < 1:
        raise ValidationError(f"c: must be an integer >= 1, got {c!r}")


def mean_T(H: UniformHypergraph, c: int, rational: bool = False) -> Real:
    """E T = |E| / c^(r-1) under a uniform random c-coloring."""
    _check_c(c)
    return H.num_edges * _inv_pow(c, H.uniformity - 1, rational)


def variance_T(H: UniformHypergraph, c: int, rational: bool = False) -> MomentReport:
    """Var T = (1/c^(r-1))(1 - 1/c^(r-1))|E|
    + sum over t in [2, r-1] of (1/c^(2r-t-1))(1 - 1/c^(t-1)) k_exact(t)."""
    _check_c(c)
    r = H.uniformity
    one = _one(rational)
    inv1 = _inv_pow(c, r - 1, rational)
    r1 = H.num_edges * inv1 * (one - inv1)
    kex = k_exact_all(H)
    r2: dict[int, Real] = {}
    for t in range(2, r):
        coef = _inv_pow(c, 2 * r - t - 1, rational) * (one - _inv_pow(c, t - 1, rational))
        r2[t] = kex[t] * coef
    variance = _total(r1, r2.values(), rational)
    return MomentReport(mean_T(H, c, rational), variance, r1, r2)


def covariance_T(
    H1: UniformHypergraph, H2: UniformHypergraph, c: int, rational: bool = False
) -> CovarianceReport:
    """Cov(T1, T2) for two layers colored by one shared uniform coloring.

    Identical-edge pairs contribute q1_term; ordered non-identical cross
    pairs with overlap t contribute (1/c^(r1+r2-t-1))(1 - 1/c^(t-1)) each.
    Pairs overlapping in 0 or 1 vertices contribute exactly zero, so the
    total is exact.
    """
    _check_c(c)
    if H1.num_vertices != H2.num_vertices:
        raise ValidationError(
            f"num_vertices mismatch: {H1.num_vertices} != {H2.num_vertices}"
        )
    r1_, r2_ = H1.uniformity, H2.uniformity
    rmin = min(r1_, r2_)
    one = _one(rational)
    if r1_ == r2_:
        shared = len(H1.edge_set() & H2.edge_set())
        inv1 = _inv_pow(c, r1_ - 1, rational)
        q1 = shared * inv1 * (one - inv1)
    else:
        shared = 0
        q1 = Fraction(0) if rational else 0.0
    kc = k_cross_all(H1, H2)
    q2: dict[int, Real] = {}
    for t in range(2, rmin + 1):
        cnt = kc[t] - (shared if t == rmin and r1_ == r2_ else 0)
        coef = _inv_pow(c, r1_ + r2_ - t - 1, rational) * (
            one - _inv_pow(c, t - 1, rational)
        )
        q2[t] = cnt * coef
    covariance = _total(q1, q2.values(), rational)
    return CovarianceReport(covariance, q1, q2)


def moment_matrix(M: Multiplex, c: int, rational: bool = False) -> MomentMatrixReport:
    """Joint mean vector and covariance matrix over all layers; symmetric by
    construction, diagonal from variance_T, off-diagonal from covariance_T."""
    _check_c(c)
    d = M.num_layers
    var_reports = tuple(variance_T(layer, c, rational) for layer in M.layers)
    cov_reports: dict[tuple[int, int], CovarianceReport] = {}
    zero = Fraction(0) if rational else 0.0
    matrix = [[zero] * d for _ in range(d)]
    for i in range(d):
        matrix[i][i] = var_reports[i].variance
        for j in range(i + 1, d):
            rep = covariance_T(M.layers[i], M.layers[j], c, rational)
            cov_reports[(i, j)] = rep
            matrix[i][j] = rep.covariance
            matrix[j][i] = rep.covariance
    means = tuple(rep.mean for rep in var_reports)
    return MomentMatrixReport(means, tuple(tuple(row) for row in matrix), var_reports, cov_reports)


def mean_W(WH: WeightedUniformHypergraph, c: int, rational: bool = False) -> Real:
    """E W = (sum of edge weights) / c^(r-1)."""
    _check_c(c)
    return sum(WH.weights) * _inv_pow(c, WH.base.uniformity - 1, rational)


def variance_W(
    WH: WeightedUniformHypergraph, c: int, rational: bool = False
) -> WeightedMomentReport:
    """Var W = sum_e w_e^2 (1/c^(r-1))(1 - 1/c^(r-1))
    + sum over t in [2, r-1] of (1/c^(2r-t-1))(1 - 1/c^(t-1))
      * (sum of w_e1 w_e2 over ordered distinct pairs sharing exactly t)."""
    _check_c(c)
    r = WH.base.uniformity
    one = _one(rational)
    inv1 = _inv_pow(c, r - 1, rational)
    u1 = sum(w * w for w in WH.weights) * inv1 * (one - inv1)
    pair_sums = weighted_pair_sums_all(WH)
    u2: dict[int, Real] = {}
    for t in range(2, r):
        coef = _inv_pow(c, 2 * r - t - 1, rational) * (one - _inv_pow(c, t - 1, rational))
        u2[t] = pair_sums[t] * coef
    variance = _total(u1, u2.values(), rational)
    return WeightedMomentReport(mean_W(WH, c, rational), variance, u1, u2)


def condition_ratios(H: UniformHypergraph, c: int, rational: bool = False) -> ConditionReport:
    """ratios[t] = k_exact(t, H) / c^(2r-t-1) for t in [2, r-1]; empty for r = 2."""
    _check_c(c)
    r = H.uniformity
    kex = k_exact_all(H)
    ratios = {
        t: kex[t] * _inv_pow(c, 2 * r - t - 1, rational) for t in range(2, r)
    }
    return ConditionReport(ratios)
