"""Builders for the hypergraph families under study.

Clique and subgraph-copy hypergraphs of a host graph, arithmetic-progression
hypergraphs, weighted vertex-subset hypergraphs, two hand-crafted multiplex
families with prescribed overlap structure, and a correlated two-layer
Erdos-Renyi sampler.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

import numpy as np

from monoplex.core import (
    Multiplex,
    ResourceBoundError,
    UniformHypergraph,
    ValidationError,
    WeightedUniformHypergraph,
    new_hypergraph,
    new_weighted_hypergraph,
)

PATTERN_MAX_VERTICES = 8


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph; edges are sorted pairs in lexicographic order."""

    num_vertices: int
    edges: tuple[tuple[int, int], ...]

    @property
    def num_edges(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class PatternGraph:
    """Small graph used as a subgraph pattern; at most 8 vertices."""

    graph: SimpleGraph

    @property
    def num_vertices(self) -> int:
        return self.graph.num_vertices

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self.graph.edges


@dataclass(frozen=True)
class CorrelatedErParams:
    """Two-layer correlated Erdos-Renyi model: each r-subset falls in one of
    four cells (both layers, layer 1 only, layer 2 only, neither) with
    probabilities (p12, p - p12, p - p12, 1 - 2p + p12), p12 = rho + p^2."""

    n: int
    r: int
    p: float
    rho: float
    p12: float


@dataclass(frozen=True)
class CopiesResult:
    """copies_hypergraph output: the hypergraph on E(G) plus the label of each
    re-indexed vertex (position i holds the G-edge that vertex i stands for)."""

    hypergraph: UniformHypergraph
    edge_labels: tuple[tuple[int, int], ...]


def new_simple_graph(n: int, edges: Iterable[Sequence[int]]) -> SimpleGraph:
    if not isinstance(n, int) or n < 0:
        raise ValidationError(f"num_vertices: must be an integer >= 0, got {n!r}")
    canon: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for i, raw in enumerate(edges):
        if len(raw) != 2:
            raise ValidationError(f"edges[{i}]: expected 2 endpoints, got {len(raw)}")
        u, v = raw
        for j, w in enumerate((u, v)):
            if not isinstance(w, int) or isinstance(w, bool) or w < 0 or w >= n:
                raise ValidationError(f"edges[{i}][{j}]: vertex {w!r} out of range [0, {n})")
        if u == v:
            raise ValidationError(f"edges[{i}]: loop at vertex {u}")
        e = (min(u, v), max(u, v))
        if e in seen:
            raise ValidationError(f"edges[{i}]: duplicate edge {list(e)}")
        seen.add(e)
        canon.append(e)
    canon.sort()
    return SimpleGraph(n, tuple(canon))


def new_pattern_graph(n: int, edges: Iterable[Sequence[int]]) -> PatternGraph:
    if n > PATTERN_MAX_VERTICES:
        raise ValidationError(
            f"pattern graph has {n} vertices, policy bound is {PATTERN_MAX_VERTICES}"
        )
    return PatternGraph(new_simple_graph(n, edges))


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, tuple(itertools.combinations(range(n), 2)))


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> SimpleGraph:
    if n < 3:
        raise ValidationError(f"cycle needs >= 3 vertices, got {n}")
    edges = sorted([(i, i + 1) for i in range(n - 1)] + [(0, n - 1)])
    return SimpleGraph(n, tuple(edges))


def sample_er_graph(n: int, p: float, rng: np.random.Generator) -> SimpleGraph:
    """G(n, p): each pair kept independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValidationError(f"p: must be in [0, 1], got {p}")
    pairs = list(itertools.combinations(range(n), 2))
    u = rng.random(len(pairs))
    return SimpleGraph(n, tuple(e for e, ui in zip(pairs, u) if ui < p))


def _adjacency(G: SimpleGraph) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(G.num_vertices)]
    for u, v in G.edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def clique_hypergraph(G: SimpleGraph, r: int) -> UniformHypergraph:
    """r-uniform hypergraph on V(G) whose edges are the r-cliques of G."""
    if r < 2:
        raise ValidationError(f"r: must be >= 2, got {r}")
    adj = _adjacency(G)
    out: list[tuple[int, ...]] = []

    def extend(clique: list[int], cands: set[int]) -> None:
        if len(clique) == r:
            out.append(tuple(clique))
            return
        for v in sorted(cands):
            extend(clique + [v], {u for u in cands if u > v} & adj[v])

    for v in range(G.num_vertices):
        extend([v], {u for u in adj[v] if u > v})
    return UniformHypergraph(r, G.num_vertices, tuple(out))


def _copy_maps(G: SimpleGraph, F: PatternGraph) -> Iterable[dict[int, int]]:
    """All injective maps V(F) -> V(G) sending F-edges to G-edges."""
    k = F.num_vertices
    adj_g = _adjacency(G)
    adj_f = _adjacency(F.graph)
    # Map high-degree pattern vertices first, preferring those with already
    # mapped neighbors, so adjacency constraints prune early.
    order: list[int] = []
    placed: set[int] = set()
    remaining = set(range(k))
    while remaining:
        best = max(
            remaining,
            key=lambda u: (len(adj_f[u] & placed), len(adj_f[u]), -u),
        )
        order.append(best)
        placed.add(best)
        remaining.remove(best)
    mapped: dict[int, int] = {}
    used: set[int] = set()

    def rec(i: int):
        if i == k:
            yield dict(mapped)
            return
        u = order[i]
        anchors = [w for w in adj_f[u] if w in mapped]
        if anchors:
            cands = set.intersection(*(adj_g[mapped[w]] for w in anchors))
        else:
            cands = set(range(G.num_vertices))
        for g in sorted(cands - used):
            mapped[u] = g
            used.add(g)
            yield from rec(i + 1)
            del mapped[u]
            used.remove(g)

    yield from rec(0)


def copies_hypergraph(G: SimpleGraph, F: PatternGraph) -> CopiesResult:
    """Hypergraph on the edge set of G whose hyperedges are the edge sets of
    copies of F in G, deduplicated as sets (uniformity |E(F)|).

    Vertex i of the result stands for edge_labels[i] in G.
    """
    if F.graph.num_edges < 1:
        raise ValidationError("pattern must have at least one edge")
    edge_index = {e: i for i, e in enumerate(G.edges)}
    copies: set[tuple[int, ...]] = set()
    for phi in _copy_maps(G, F):
        ids = {edge_index[tuple(sorted((phi[u], phi[v])))] for u, v in F.edges}
        copies.add(tuple(sorted(ids)))
    H = UniformHypergraph(F.graph.num_edges, G.num_edges, tuple(sorted(copies)))
    return CopiesResult(H, G.edges)


def ap_hypergraph(A: Sequence[int], r: int) -> UniformHypergraph:
    """Hypergraph on the re-indexed elements of A whose edges are the r-term
    arithmetic progressions inside A (common difference d >= 1, unordered)."""
    if r < 3:
        raise ValidationError(f"r: must be >= 3, got {r}")
    elems = list(A)
    if any(
        not isinstance(a, int) or isinstance(a, bool) or a < 1 for a in elems
    ):
        raise ValidationError("A: elements must be integers >= 1")
    if any(b <= a for a, b in zip(elems, elems[1:])):
        raise ValidationError("A: must be strictly increasing")
    index = {a: i for i, a in enumerate(elems)}
    n = len(elems)
    edges: list[tuple[int, ...]] = []
    if n >= r:
        hi = elems[-1]
        members = set(elems)
        for a in elems:
            for d in range(1, (hi - a) // (r - 1) + 1):
                if all(a + i * d in members for i in range(1, r)):
                    edges.append(tuple(index[a + i * d] for i in range(r)))
    edges.sort()
    return UniformHypergraph(r, n, tuple(edges))


def ap_count_closed_form(n: int, r: int) -> int:
    """Number of r-term APs in [1, n]: sum over d >= 1 of (n - (r-1)d)."""
    dmax = (n - 1) // (r - 1)
    return dmax * n - (r - 1) * dmax * (dmax + 1) // 2


def automorphism_count(F: PatternGraph) -> int:
    """Order of the automorphism group, by exhaustive permutation check."""
    n = F.num_vertices
    if n > PATTERN_MAX_VERTICES:
        raise ValidationError(
            f"pattern graph has {n} vertices, policy bound is {PATTERN_MAX_VERTICES}"
        )
    edge_set = set(F.edges)
    pairs = list(itertools.combinations(range(n), 2))
    count = 0
    for perm in itertools.permutations(range(n)):
        ok = True
        for u, v in pairs:
            pu, pv = perm[u], perm[v]
            if ((u, v) in edge_set) != ((min(pu, pv), max(pu, pv)) in edge_set):
                ok = False
                break
        if ok:
            count += 1
    return count


def vertex_copy_weighted_hypergraph(
    G: SimpleGraph, F: PatternGraph, weight_bound: int | None = None
) -> WeightedUniformHypergraph:
    """|V(F)|-uniform weighted hypergraph on V(G): hyperedges are the
    |V(F)|-subsets s spanning at least one copy of F, with weight the number
    of copies of F in the induced subgraph G[s]."""
    k = F.num_vertices
    if k < 2:
        raise ValidationError(f"pattern must have >= 2 vertices, got {k}")
    aut = automorphism_count(F)
    image_counts: Counter[tuple[int, ...]] = Counter()
    for phi in _copy_maps(G, F):
        image_counts[tuple(sorted(phi.values()))] += 1
    edges = sorted(image_counts)
    weights = []
    for s in edges:
        maps = image_counts[s]
        if maps % aut != 0:
            raise AssertionError(f"map count {maps} not divisible by |Aut| = {aut}")
        weights.append(maps // aut)
    return new_weighted_hypergraph(k, G.num_vertices, [list(e) for e in edges], weights, weight_bound)


def appendix_star_hypergraph(n: int) -> UniformHypergraph:
    """3-uniform hypergraph on n vertices whose edges are all triples through
    vertex 0; C(n-1, 2) edges."""
    if n < 3:
        raise ValidationError(f"n: must be >= 3, got {n}")
    edges = tuple((0, a, b) for a, b in itertools.combinations(range(1, n), 2))
    return UniformHypergraph(3, n, edges)


def appendix_three_multiplex(n: int, lam: float, variant: str) -> Multiplex:
    """Three complete-graph layers on blocks of size n in one shared universe.

    nested: all three blocks share one common sub-block of size floor(lam*n);
    universe [0, 3n - 2*overlap). Block i = [0, overlap) plus the i-th private
    range, consecutive after the common block.

    pairwise: each pair of blocks shares its own sub-block of size
    floor(lam*n), the triple intersection is empty; universe
    [0, 3n - 3*overlap) laid out as the three shared sub-blocks [0, overlap),
    [overlap, 2*overlap), [2*overlap, 3*overlap) (shared by blocks 1&2, 1&3,
    2&3) followed by three private ranges.
    """
    if not 0.0 < lam < 0.25:
        raise ValidationError(f"lambda: must be in (0, 1/4), got {lam}")
    if n < 2:
        raise ValidationError(f"n: must be >= 2, got {n}")
    if variant not in ("nested", "pairwise"):
        raise ValidationError(f"variant: must be 'nested' or 'pairwise', got {variant!r}")
    m = math.floor(lam * n)
    if variant == "nested":
        universe = 3 * n - 2 * m
        common = list(range(m))
        blocks = [
            common + list(range(m + i * (n - m), m + (i + 1) * (n - m)))
            for i in range(3)
        ]
    else:
        universe = 3 * n - 3 * m
        b12 = list(range(m))
        b13 = list(range(m, 2 * m))
        b23 = list(range(2 * m, 3 * m))
        priv = n - 2 * m
        start = 3 * m
        p1 = list(range(start, start + priv))
        p2 = list(range(start + priv, start + 2 * priv))
        p3 = list(range(start + 2 * priv, start + 3 * priv))
        blocks = [b12 + b13 + p1, b12 + b23 + p2, b13 + b23 + p3]
    layers = tuple(
        UniformHypergraph(2, universe, tuple(itertools.combinations(sorted(b), 2)))
        for b in blocks
    )
    return Multiplex(universe, layers)


def new_correlated_er_params(n: int, r: int, p: float, rho: float) -> CorrelatedErParams:
    if r < 2:
        raise ValidationError(f"r: must be >= 2, got {r}")
    if n < r:
        raise ValidationError(f"n: must be >= r = {r}, got {n}")
    if not 0.0 < p < 1.0:
        raise ValidationError(f"p: must be in (0, 1), got {p}")
    if not 0.0 <= rho < p * (1.0 - p):
        raise ValidationError(f"rho: must be in [0, p(1-p)) = [0, {p * (1 - p)}), got {rho}")
    p12 = rho + p * p
    if p12 > p or 1.0 - 2.0 * p + p12 < 0.0:
        raise ValidationError(f"cell probabilities invalid for p={p}, rho={rho}")
    return CorrelatedErParams(n, r, p, rho, p12)


def _unrank_pairs(positions: np.ndarray, n: int) -> list[tuple[int, int]]:
    """Map lexicographic pair indices to (i, j) with i < j."""
    i_range = np.arange(n, dtype=np.int64)
    row_start = i_range * (n - 1) - i_range * (i_range - 1) // 2
    i = np.searchsorted(row_start, positions, side="right") - 1
    j = positions - row_start[i] + i + 1
    return list(zip(i.tolist(), j.tolist()))


def _sparse_positions(M: int, q: float, rng: np.random.Generator) -> np.ndarray:
    """Indices of an iid Bernoulli(q) process over M slots via geometric gaps."""
    if q <= 0.0:
        return np.empty(0, dtype=np.int64)
    chunks = []
    pos = -1
    batch = max(1024, int(M * q * 1.2) + 16)
    while pos < M:
        gaps = rng.geometric(q, size=batch).astype(np.int64)
        idx = pos + np.cumsum(gaps)
        chunks.append(idx)
        pos = int(idx[-1])
    all_idx = np.concatenate(chunks)
    return all_idx[all_idx < M]


def sample_correlated_er(
    params: CorrelatedErParams,
    rng: np.random.Generator,
    max_subsets: int = 2_000_000,
    method: str = "auto",
) -> Multiplex:
    """Draw one two-layer multiplex: independently for each r-subset of [n],
    place it in both layers w.p. p12, layer 1 only w.p. p - p12, layer 2 only
    w.p. p - p12, neither otherwise.

    Dense mode enumerates all C(n, r) subsets; sparse mode (r = 2 only) skips
    between present pairs with geometric jumps and assigns cells only to
    those, which yields the same law.
    """
    n, r, p, p12 = params.n, params.r, params.p, params.p12
    M = comb(n, r)
    if method == "auto":
        if M <= max_subsets:
            method = "dense"
        elif r == 2:
            method = "sparse"
        else:
            raise ResourceBoundError(
                f"C({n},{r}) = {M} exceeds enumeration bound {max_subsets}"
            )
    if method == "sparse" and r != 2:
        raise ValidationError("sparse mode supports r = 2 only")
    if method == "dense" and M > max_subsets:
        raise ResourceBoundError(f"C({n},{r}) = {M} exceeds enumeration bound {max_subsets}")

    if method == "dense":
        u = rng.random(M)
        e1: list[tuple[int, ...]] = []
        e2: list[tuple[int, ...]] = []
        hi2 = 2.0 * p - p12
        for s, x in zip(itertools.combinations(range(n), r), u):
            if x < p12:
                e1.append(s)
                e2.append(s)
            elif x < p:
                e1.append(s)
            elif x < hi2:
                e2.append(s)
    elif method == "sparse":
        q_any = 2.0 * p - p12
        positions = _sparse_positions(M, q_any, rng)
        v = rng.random(len(positions))
        pairs = _unrank_pairs(positions, n)
        both_hi = p12 / q_any
        one_hi = p / q_any
        e1 = [s for s, x in zip(pairs, v) if x < one_hi]
        e2 = [s for s, x in zip(pairs, v) if x < both_hi or x >= one_hi]
    else:
        raise ValidationError(f"method: unknown mode {method!r}")
    L1 = UniformHypergraph(r, n, tuple(e1))
    L2 = UniformHypergraph(r, n, tuple(e2))
    return Multiplex(n, (L1, L2))
