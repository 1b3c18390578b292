"""Seeded Monte Carlo over colorings and the exact enumeration oracle.

Replicates are processed in fixed-size blocks of 4096; block b draws from a
Philox substream derived from (seed, b). Shards own whole blocks, so the
merged counts are bit-identical for every shard count, and every backend
consumes the block's color matrix identically, so backend choice never
changes results either.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Sequence

import numpy as np

from monoplex.core import (
    Coloring,
    Multiplex,
    ResourceBoundError,
    UniformHypergraph,
    ValidationError,
    WeightedUniformHypergraph,
)
from monoplex.families import CorrelatedErParams, ap_count_closed_form
from monoplex.laws import DiscreteLaw, law_from_pmf

BLOCK_SIZE = 4096

PAIR_BUDGET = 200_000_000


@dataclass(frozen=True)
class SimulationConfig:
    """c colors, total replicates, RNG seed, and shard count (shards change
    scheduling only, never results)."""

    c: int
    replicates: int
    seed: int
    shards: int = 1


@dataclass(frozen=True)
class EmpiricalLaw:
    """Empirical distribution with exact rational masses count/replicates."""

    law: DiscreteLaw
    replicates: int
    seed: int
    shards: int


def new_simulation_config(c: int, replicates: int, seed: int, shards: int = 1) -> SimulationConfig:
    if not isinstance(c, int) or c < 1:
        raise ValidationError(f"c: must be an integer >= 1, got {c!r}")
    if not isinstance(replicates, int) or replicates < 1:
        raise ValidationError(f"replicates: must be >= 1, got {replicates!r}")
    if not isinstance(seed, int) or not 0 <= seed < 2**64:
        raise ValidationError(f"seed: must be a 64-bit integer, got {seed!r}")
    if not isinstance(shards, int) or shards < 1:
        raise ValidationError(f"shards: must be >= 1, got {shards!r}")
    return SimulationConfig(c, replicates, seed, shards)


def _block_rng(seed: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(block,))
    return np.random.Generator(np.random.Philox(ss))


def sample_coloring(n: int, c: int, rng: np.random.Generator) -> Coloring:
    """One uniform coloring: i.i.d. colors in [1, c]."""
    if c < 1:
        raise ValidationError(f"c: must be >= 1, got {c}")
    colors = rng.integers(1, c + 1, size=n, dtype=np.int32)
    return Coloring(tuple(int(a) for a in colors), c)


def _edges_array(H: UniformHypergraph) -> np.ndarray:
    if H.num_edges == 0:
        return np.empty((0, H.uniformity), dtype=np.int32)
    return np.asarray(H.edges, dtype=np.int32)


def _dense_T(colors: np.ndarray, edges: np.ndarray, weights: np.ndarray | None) -> np.ndarray:
    """Per-replicate monochromatic totals by direct edge evaluation."""
    B = colors.shape[0]
    E, r = edges.shape
    out = np.zeros(B, dtype=np.int64)
    if E == 0:
        return out
    chunk = max(1, 8_000_000 // max(1, B * r))
    for lo in range(0, E, chunk):
        sub = edges[lo : lo + chunk]
        cols = colors[:, sub]
        mono = (cols == cols[:, :, :1]).all(axis=2)
        if weights is None:
            out += mono.sum(axis=1)
        else:
            out += mono.astype(np.int64) @ weights[lo : lo + chunk]
    return out


def _leading_pair_tables(edges: np.ndarray):
    """Group edges by their first two vertices for two-stage evaluation."""
    pairs = edges[:, :2]
    uniq, inv = np.unique(pairs, axis=0, return_inverse=True)
    order = np.argsort(inv, kind="stable").astype(np.int64)
    sorted_pid = inv[order]
    bucket_start = np.searchsorted(sorted_pid, np.arange(len(uniq)))
    bucket_len = np.diff(np.append(bucket_start, len(inv)))
    return uniq, order, bucket_start.astype(np.int64), bucket_len.astype(np.int64)


def _leading_pair_T(
    colors: np.ndarray, edges: np.ndarray, tables, weights: np.ndarray | None
) -> np.ndarray:
    """Stage 1 tests the shared leading pair per bucket; stage 2 expands only
    surviving (replicate, bucket) cells to their full edges."""
    B = colors.shape[0]
    out = np.zeros(B, dtype=np.int64)
    if edges.shape[0] == 0:
        return out
    uniq, order, bstart, blen = tables
    eq = colors[:, uniq[:, 0]] == colors[:, uniq[:, 1]]
    rows, pids = np.nonzero(eq)
    if len(rows) == 0:
        return out
    cnt = blen[pids]
    tot = int(cnt.sum())
    if tot == 0:
        return out
    rows_exp = np.repeat(rows, cnt)
    starts = np.repeat(bstart[pids], cnt)
    csum = np.cumsum(cnt) - cnt
    offs = np.arange(tot, dtype=np.int64) - np.repeat(csum, cnt)
    eids = order[starts + offs]
    ref = colors[rows_exp, edges[eids, 0]]
    ok = np.ones(tot, dtype=bool)
    for k in range(2, edges.shape[1]):
        ok &= colors[rows_exp, edges[eids, k]] == ref
    hits = rows_exp[ok]
    if weights is None:
        return np.bincount(hits, minlength=B).astype(np.int64)
    acc = np.bincount(hits, weights=weights[eids[ok]].astype(np.float64), minlength=B)
    return np.rint(acc).astype(np.int64)


def _same_color_pairs(colors: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All unordered same-color vertex pairs of every replicate row.

    Returns (rows, u, v) with u < v. Stable argsort keeps vertex ids
    ascending inside each color class.
    """
    B, n = colors.shape
    order = np.argsort(colors, axis=1, kind="stable")
    sc = np.take_along_axis(colors, order, axis=1)
    eq = np.concatenate([sc[:, 1:] == sc[:, :-1], np.zeros((B, 1), dtype=bool)], axis=1)
    d = np.diff(eq.ravel().astype(np.int8), prepend=0, append=0)
    starts = np.nonzero(d == 1)[0]
    ends = np.nonzero(d == -1)[0]
    lens = ends - starts
    if len(starts) == 0:
        z = np.empty(0, dtype=np.int64)
        return z, z.copy(), z.copy()
    sizes = lens + 1
    total_pairs = int((sizes * (sizes - 1) // 2).sum())
    if total_pairs > PAIR_BUDGET:
        raise ResourceBoundError(
            f"same-color pair enumeration needs {total_pairs} pairs; "
            "use the dense backend for this instance"
        )
    order_flat = order.ravel()
    rows_parts = []
    u_parts = []
    v_parts = []
    for m in np.unique(sizes):
        idx = starts[sizes == m]
        offs = np.array(list(itertools.combinations(range(int(m)), 2)), dtype=np.int64)
        a = (idx[:, None] + offs[None, :, 0]).ravel()
        b = (idx[:, None] + offs[None, :, 1]).ravel()
        rows_parts.append(a // n)
        u_parts.append(order_flat[a])
        v_parts.append(order_flat[b])
    rows = np.concatenate(rows_parts)
    u = np.concatenate(u_parts).astype(np.int64)
    v = np.concatenate(v_parts).astype(np.int64)
    return rows, u, v


def _pair_class_tables(edges: np.ndarray, n: int, weights: np.ndarray | None):
    keys = edges[:, 0].astype(np.int64) * n + edges[:, 1].astype(np.int64)
    ksort = np.argsort(keys)
    sorted_keys = keys[ksort]
    sorted_weights = None if weights is None else weights[ksort]
    return sorted_keys, sorted_weights


def _pair_class_T(
    pairs: tuple[np.ndarray, np.ndarray, np.ndarray],
    tables,
    n: int,
    B: int,
) -> np.ndarray:
    """Count which same-color pairs are edges, per replicate row."""
    sorted_keys, sorted_weights = tables
    out = np.zeros(B, dtype=np.int64)
    if len(sorted_keys) == 0:
        return out
    rows, u, v = pairs
    if len(rows) == 0:
        return out
    pk = u * n + v
    pos = np.searchsorted(sorted_keys, pk)
    pos_safe = np.minimum(pos, len(sorted_keys) - 1)
    ok = sorted_keys[pos_safe] == pk
    hits = rows[ok]
    if sorted_weights is None:
        return np.bincount(hits, minlength=B).astype(np.int64)
    acc = np.bincount(hits, weights=sorted_weights[pos_safe[ok]].astype(np.float64), minlength=B)
    return np.rint(acc).astype(np.int64)


def _choose_backend(H: UniformHypergraph, c: int, requested: str) -> str:
    r, E, n = H.uniformity, H.num_edges, H.num_vertices
    if requested != "auto":
        if requested == "pair-class" and r != 2:
            raise ValidationError("pair-class backend requires 2-uniform layers")
        if requested == "leading-pair" and r < 3:
            raise ValidationError("leading-pair backend requires uniformity >= 3")
        if requested not in ("dense", "leading-pair", "pair-class"):
            raise ValidationError(f"backend: unknown choice {requested!r}")
        return requested
    if r == 2:
        expected_pairs = n * (n - 1) / (2 * max(1, c))
        if E > 20_000 and expected_pairs < E / 8:
            return "pair-class"
        return "dense"
    uniq_pairs = len(set(e[:2] for e in H.edges))
    if E >= 32 and uniq_pairs <= E // 2:
        return "leading-pair"
    return "dense"


def _block_plan(cfg: SimulationConfig) -> list[tuple[int, int]]:
    """(block index, rows in block) covering all replicates; shards take
    whole blocks round-robin, which leaves the merged counts unchanged."""
    total_blocks = -(-cfg.replicates // BLOCK_SIZE)
    plan = []
    for shard in range(cfg.shards):
        for block in range(shard, total_blocks, cfg.shards):
            lo = block * BLOCK_SIZE
            plan.append((block, min(BLOCK_SIZE, cfg.replicates - lo)))
    return plan


def _accumulate(cfg: SimulationConfig, n_vertices: int, d: int, compute) -> Counter:
    """Run compute(rng, colors) -> (B, d) int array over all blocks."""
    counts: Counter = Counter()
    for block, B in _block_plan(cfg):
        rng = _block_rng(cfg.seed, block)
        colors = rng.integers(1, cfg.c + 1, size=(B, n_vertices), dtype=np.int32)
        out = compute(rng, colors)
        uniq, cnt = np.unique(out, axis=0, return_counts=True)
        for key, k in zip(uniq, cnt):
            counts[tuple(int(x) for x in key)] += int(k)
    return counts


def _empirical(counts: Counter, d: int, cfg: SimulationConfig) -> EmpiricalLaw:
    pmf = {key: Fraction(k, cfg.replicates) for key, k in counts.items()}
    law = law_from_pmf(d, pmf, 0)
    return EmpiricalLaw(law, cfg.replicates, cfg.seed, cfg.shards)


def simulate_T(M: Multiplex, cfg: SimulationConfig, backend: str = "auto") -> EmpiricalLaw:
    """Empirical joint law of per-layer monochromatic counts over
    cfg.replicates colorings. Output depends only on (c, replicates, seed);
    shards and backend never change it."""
    d = M.num_layers
    n = M.num_vertices
    if cfg.c == 1:
        key = tuple(layer.num_edges for layer in M.layers)
        return _empirical(Counter({key: cfg.replicates}), d, cfg)
    plans = []
    any_pairs = False
    for layer in M.layers:
        kind = _choose_backend(layer, cfg.c, backend)
        edges = _edges_array(layer)
        if kind == "leading-pair":
            plans.append((kind, edges, _leading_pair_tables(edges) if layer.num_edges else None))
        elif kind == "pair-class":
            plans.append((kind, edges, _pair_class_tables(edges, n, None)))
            any_pairs = True
        else:
            plans.append((kind, edges, None))

    def compute(rng, colors):
        B = colors.shape[0]
        pairs = _same_color_pairs(colors) if any_pairs else None
        cols = []
        for kind, edges, tables in plans:
            if kind == "dense" or edges.shape[0] == 0:
                cols.append(_dense_T(colors, edges, None))
            elif kind == "leading-pair":
                cols.append(_leading_pair_T(colors, edges, tables, None))
            else:
                cols.append(_pair_class_T(pairs, tables, n, B))
        return np.stack(cols, axis=1)

    return _empirical(_accumulate(cfg, n, d, compute), d, cfg)


def simulate_W(
    WH: WeightedUniformHypergraph, cfg: SimulationConfig, backend: str = "auto"
) -> EmpiricalLaw:
    """Empirical law of the weighted monochromatic total (dimension 1)."""
    H = WH.base
    n = H.num_vertices
    if cfg.c == 1:
        return _empirical(Counter({(sum(WH.weights),): cfg.replicates}), 1, cfg)
    weights = np.asarray(WH.weights, dtype=np.int64)
    kind = _choose_backend(H, cfg.c, backend)
    edges = _edges_array(H)
    if kind == "leading-pair":
        tables = _leading_pair_tables(edges) if H.num_edges else None
    elif kind == "pair-class":
        tables = _pair_class_tables(edges, n, weights)
    else:
        tables = None

    def compute(rng, colors):
        B = colors.shape[0]
        if kind == "dense" or edges.shape[0] == 0:
            out = _dense_T(colors, edges, weights)
        elif kind == "leading-pair":
            out = _leading_pair_T(colors, edges, tables, weights)
        else:
            out = _pair_class_T(_same_color_pairs(colors), tables, n, B)
        return out[:, None]

    return _empirical(_accumulate(cfg, n, 1, compute), 1, cfg)


def simulate_ap_T(n: int, r: int, cfg: SimulationConfig) -> EmpiricalLaw:
    """Empirical law of the count of monochromatic r-term APs in [1, n].

    Walks each same-color pair (u, v) as the first two AP terms and checks
    the remaining terms; every monochromatic AP is generated exactly once by
    its smallest two elements. Bit-identical to simulate_T on
    ap_hypergraph(range(1, n+1), r) under the same config.
    """
    if r < 3:
        raise ValidationError(f"r: must be >= 3, got {r}")
    if cfg.c == 1:
        return _empirical(Counter({(ap_count_closed_form(n, r),): cfg.replicates}), 1, cfg)

    def compute(rng, colors):
        B = colors.shape[0]
        rows, u, v = _same_color_pairs(colors)
        if len(rows) == 0:
            return np.zeros((B, 1), dtype=np.int64)
        step = v - u
        ok = np.ones(len(rows), dtype=bool)
        nxt = v.copy()
        ref = colors[rows, u]
        for _ in range(r - 2):
            nxt = nxt + step
            in_range = nxt < n
            ok &= in_range
            safe = np.where(in_range, nxt, 0)
            ok &= colors[rows, safe] == ref
        return np.bincount(rows[ok], minlength=B)[:, None]

    return _empirical(_accumulate(cfg, n, 1, compute), 1, cfg)


def _binomial_array(m: np.ndarray, r: int) -> np.ndarray:
    """C(m, r) per entry, exact in int64."""
    out = np.ones_like(m, dtype=np.int64)
    for k in range(r):
        out = out * np.maximum(m - k, 0) // (k + 1)
    return out


def simulate_correlated_er_T(params: CorrelatedErParams, cfg: SimulationConfig) -> EmpiricalLaw:
    """Joint empirical law of the two layer counts when each replicate draws a
    fresh correlated multiplex and a fresh coloring.

    Given the coloring, every monochromatic r-subset lands independently in
    one of the four cells, so the conditional law of (T1, T2) is a multinomial
    over the monochromatic subsets; sampling that multinomial directly is
    exact and avoids materializing the multiplex.
    """
    n, r = params.n, params.r
    p, p12 = params.p, params.p12
    pvals = [p12, p - p12, p - p12, 1.0 - 2.0 * p + p12]

    def compute(rng, colors):
        B = colors.shape[0]
        offsets = np.arange(B, dtype=np.int64)[:, None] * cfg.c
        flat = (colors.astype(np.int64) - 1) + offsets
        class_sizes = np.bincount(flat.ravel(), minlength=B * cfg.c).reshape(B, cfg.c)
        mono = _binomial_array(class_sizes, r).sum(axis=1)
        draws = rng.multinomial(mono, pvals)
        t1 = draws[:, 0] + draws[:, 1]
        t2 = draws[:, 0] + draws[:, 2]
        return np.stack([t1, t2], axis=1)

    return _empirical(_accumulate(cfg, n, 2, compute), 2, cfg)


def _enumerate_joint(
    edge_lists: Sequence[Sequence[tuple[int, ...]]],
    weight_lists: Sequence[Sequence[int]],
    n: int,
    c: int,
    max_states: int,
) -> tuple[dict, int]:
    """Exact joint counts over all c^n colorings via a mixed-radix odometer;
    only edges touching the changed vertex are re-evaluated per step."""
    states = c**n
    if states > max_states:
        raise ResourceBoundError(f"c^n = {states} exceeds enumeration bound {max_states}")
    d = len(edge_lists)
    colors = [1] * n
    mono: list[list[bool]] = [[True] * len(E) for E in edge_lists]
    totals = [sum(W) for W in weight_lists]
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for li, E in enumerate(edge_lists):
        for ei, e in enumerate(E):
            for v in e:
                adj[v].append((li, ei))

    def apply_change(v: int) -> None:
        for li, ei in adj[v]:
            e = edge_lists[li][ei]
            a = colors[e[0]]
            is_mono = True
            for u in e[1:]:
                if colors[u] != a:
                    is_mono = False
                    break
            if is_mono != mono[li][ei]:
                if is_mono:
                    totals[li] += weight_lists[li][ei]
                else:
                    totals[li] -= weight_lists[li][ei]
                mono[li][ei] = is_mono

    counts: dict = {}
    remaining = states
    single = d == 1
    while True:
        key = totals[0] if single else tuple(totals)
        counts[key] = counts.get(key, 0) + 1
        remaining -= 1
        if remaining == 0:
            break
        v = 0
        while colors[v] == c:
            colors[v] = 1
            apply_change(v)
            v += 1
        colors[v] += 1
        apply_change(v)
    if single:
        counts = {(k,): v for k, v in counts.items()}
    return counts, states


def exact_law(M: Multiplex, c: int, max_states: int = 10_000_000) -> DiscreteLaw:
    """Exact joint pmf of the layer counts, masses integer/c^n, tail 0."""
    if c < 1:
        raise ValidationError(f"c: must be >= 1, got {c}")
    edge_lists = [layer.edges for layer in M.layers]
    weight_lists = [[1] * layer.num_edges for layer in M.layers]
    counts, states = _enumerate_joint(edge_lists, weight_lists, M.num_vertices, c, max_states)
    pmf = {key: Fraction(k, states) for key, k in counts.items()}
    return law_from_pmf(M.num_layers, pmf, 0)


def exact_law_weighted(
    WH: WeightedUniformHypergraph, c: int, max_states: int = 10_000_000
) -> DiscreteLaw:
    """Exact pmf of the weighted monochromatic total."""
    if c < 1:
        raise ValidationError(f"c: must be >= 1, got {c}")
    counts, states = _enumerate_joint(
        [WH.base.edges], [list(WH.weights)], WH.base.num_vertices, c, max_states
    )
    pmf = {key: Fraction(k, states) for key, k in counts.items()}
    return law_from_pmf(1, pmf, 0)
