"""Chip-firing on spanning subgraphs: twisters, Jacobians, reduced divisors.

A multidegree (divisor) is a tuple of ints aligned with ``graph.vertex_ids``.
Subgraphs are given as ``(graph, kept_edges)``; loops are ignored throughout
since firing a vertex moves no chips along a loop.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .graphs import (Graph, GraphError, SpanningSubgraph, Vertex, connected_components, cut_partition,
                     induced_connected, is_connected)
from .intlin import determinant, smith_normal_form

Multidegree = tuple


def _kept(G) -> tuple[Graph, frozenset]:
    if isinstance(G, SpanningSubgraph):
        return G.parent, G.kept_edges
    if isinstance(G, Graph):
        return G, frozenset(G.edge_ids)
    graph, kept = G
    return graph, frozenset(kept)


def as_dict(graph: Graph, d: Sequence[int]) -> dict:
    return dict(zip(graph.vertex_ids, d))


def from_dict(graph: Graph, values: dict) -> Multidegree:
    if set(values) != set(graph.vertex_ids):
        raise GraphError("multidegree keys must be exactly the vertex ids")
    return tuple(int(values[v]) for v in graph.vertex_ids)


def unit(graph: Graph, v: str) -> Multidegree:
    out = [0] * len(graph.vertices)
    out[graph.position(v)] = 1
    return tuple(out)


def add(a: Sequence[int], b: Sequence[int]) -> Multidegree:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> Multidegree:
    return tuple(x - y for x, y in zip(a, b))


@lru_cache(maxsize=4096)
def _laplacian(graph: Graph, kept: frozenset) -> tuple:
    n = len(graph.vertices)
    lap = [[0] * n for _ in range(n)]
    for e in graph.edges:
        if e.id not in kept or e.is_loop:
            continue
        i, j = graph.position(e.u), graph.position(e.v)
        lap[i][i] += 1
        lap[j][j] += 1
        lap[i][j] -= 1
        lap[j][i] -= 1
    return tuple(tuple(r) for r in lap)


def laplacian(G) -> list[list[int]]:
    """Loop-free Laplacian; column ``v`` is minus the twister at ``v``."""
    graph, kept = _kept(G)
    return [list(r) for r in _laplacian(graph, kept)]


def twister_vector(G, v: str) -> Multidegree:
    graph, kept = _kept(G)
    if not graph.has_vertex(v):
        raise GraphError(f"unknown vertex {v!r}")
    j = graph.position(v)
    return tuple(-row[j] for row in _laplacian(graph, kept))


def complexity_matrix_tree(G) -> int:
    graph, kept = _kept(G)
    if not is_connected(graph, kept):
        return 0
    lap = _laplacian(graph, kept)
    return determinant([list(r[1:]) for r in lap[1:]])


def complexity_brute_force(G) -> int:
    """Count (|V|-1)-subsets of non-loop edges that connect every vertex."""
    graph, kept = _kept(G)
    edges = [e for e in graph.edges if e.id in kept and not e.is_loop]
    pos = {v: i for i, v in enumerate(graph.vertex_ids)}
    n = len(pos)
    count = 0
    for combo in itertools.combinations(edges, n - 1):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        ok = True
        for e in combo:
            a, b = find(pos[e.u]), find(pos[e.v])
            if a == b:
                ok = False
                break
            parent[a] = b
        count += ok
    return count


def complexity(G, method: str = "matrix_tree") -> int:
    """Number of spanning trees; zero for a disconnected subgraph."""
    if method == "matrix_tree":
        return complexity_matrix_tree(G)
    if method == "brute_force":
        return complexity_brute_force(G)
    if method == "both":
        a, b = complexity_matrix_tree(G), complexity_brute_force(G)
        if a != b:
            raise AssertionError(f"complexity mismatch: matrix-tree {a}, brute force {b}")
        return a
    raise ValueError(method)


@dataclass(frozen=True)
class JacobianGroup:
    """Degree-0 multidegrees modulo twisters, in Smith coordinates.

    ``invariant_factors`` are the Smith diagonal entries larger than 1 of the
    reduced Laplacian (base row and column removed); ``projection`` holds the
    matching rows of the left transform, indexed by the non-base vertices.
    """
    invariant_factors: tuple
    base_vertex: str
    base_position: int
    projection: tuple

    @property
    def order(self) -> int:
        out = 1
        for f in self.invariant_factors:
            out *= f
        return out

    def _reduced(self, d: Sequence[int]) -> list[int]:
        return [x for i, x in enumerate(d) if i != self.base_position]

    def coordinates(self, d: Sequence[int]) -> tuple:
        """Class of ``d`` relative to ``deg(d)`` chips on the base vertex."""
        x = self._reduced(d)
        return tuple(sum(a * b for a, b in zip(row, x)) % f
                     for row, f in zip(self.projection, self.invariant_factors))

    def coordinates_many(self, ds: Sequence[Sequence[int]]) -> list[tuple]:
        """Vectorised :meth:`coordinates`; falls back to Python ints on overflow risk."""
        if not ds:
            return []
        if not self.invariant_factors:
            return [()] * len(ds)
        arr = np.delete(np.asarray(ds, dtype=object), self.base_position, axis=1)
        proj = np.asarray(self.projection, dtype=object)
        bound = int(np.abs(proj).max()) * int(np.abs(arr).max() if arr.size else 0) * max(arr.shape[1], 1)
        dtype = np.int64 if bound < 2 ** 62 else object
        y = arr.astype(dtype) @ proj.T.astype(dtype)
        y = y % np.asarray(self.invariant_factors, dtype=dtype)
        return [tuple(int(v) for v in row) for row in y]


@lru_cache(maxsize=4096)
def _jacobian(graph: Graph, kept: frozenset) -> JacobianGroup:
    if not is_connected(graph, kept):
        raise GraphError("the Jacobian is only defined for connected subgraphs")
    base = graph.vertex_ids[0]
    lap = _laplacian(graph, kept)
    reduced = [list(r[1:]) for r in lap[1:]]
    if not reduced:
        return JacobianGroup((), base, 0, ())
    diag, u, _ = smith_normal_form(reduced)
    factors, rows = [], []
    for i, f in enumerate(diag):
        if f > 1:
            factors.append(f)
            rows.append(tuple(u[i]))
    return JacobianGroup(tuple(factors), base, 0, tuple(rows))


def jacobian_group(G) -> JacobianGroup:
    graph, kept = _kept(G)
    return _jacobian(graph, kept)


def class_key(G, d: Sequence[int]) -> tuple:
    """Hashable key; equal keys and equal totals iff twister-equivalent."""
    return (sum(d), jacobian_group(G).coordinates(d))


def equivalent_smith(G, d1, d2) -> bool:
    if sum(d1) != sum(d2):
        return False
    jac = jacobian_group(G)
    return not any(jac.coordinates(sub(d1, d2)))


def equivalent_reduced(G, d1, d2) -> bool:
    if sum(d1) != sum(d2):
        return False
    graph, _ = _kept(G)
    base = graph.vertex_ids[0]
    return reduce(G, d1, base) == reduce(G, d2, base)


def equivalent(G, d1, d2, method: str = "smith") -> bool:
    """Whether ``d1 - d2`` lies in the twister group of ``G``.

    Multidegrees of different totals are never equivalent. ``method="both"``
    runs the Smith-coordinate test and the reduced-divisor test and raises if
    they disagree.
    """
    graph, kept = _kept(G)
    if not is_connected(graph, kept):
        # twisters act componentwise
        return _equivalent_disconnected(graph, kept, d1, d2)
    if method == "smith":
        return equivalent_smith(G, d1, d2)
    if method == "reduce":
        return equivalent_reduced(G, d1, d2)
    if method == "both":
        a, b = equivalent_smith(G, d1, d2), equivalent_reduced(G, d1, d2)
        if a != b:
            raise AssertionError(f"equivalence mismatch on {d1} vs {d2}")
        return a
    raise ValueError(method)


def _equivalent_disconnected(graph, kept, d1, d2) -> bool:
    for comp in connected_components(graph, kept):
        sub_graph = Graph(tuple(Vertex(v, graph.genus_of(v)) for v in sorted(comp)),
                          tuple(e for e in graph.edges if e.id in kept and e.u in comp))
        a = tuple(d1[graph.position(v)] for v in sub_graph.vertex_ids)
        b = tuple(d2[graph.position(v)] for v in sub_graph.vertex_ids)
        if not equivalent_smith(sub_graph, a, b):
            return False
    return True


# -- reduced divisors ---------------------------------------------------------

def _adjacency(graph: Graph, kept: frozenset) -> list[dict]:
    adj = [dict() for _ in graph.vertices]
    for e in graph.edges:
        if e.id not in kept or e.is_loop:
            continue
        i, j = graph.position(e.u), graph.position(e.v)
        adj[i][j] = adj[i].get(j, 0) + 1
        adj[j][i] = adj[j].get(i, 0) + 1
    return adj


def _borrow(d: list[int], adj: list[dict], s: set, times: int = 1):
    """Reverse-fire the vertex set ``s``: it pulls one chip along each cut edge."""
    for i in s:
        for j, k in adj[i].items():
            if j not in s:
                d[i] += k * times
                d[j] -= k * times


def reduce(G, d: Sequence[int], base: str | None = None) -> Multidegree:
    """The unique ``base``-reduced divisor equivalent to ``d`` (Dhar's burning).

    First all debt is pushed to the base by borrowing along distance layers,
    then the unburnt set from Dhar's burning algorithm is fired until the fire
    started at the base burns every vertex.
    """
    graph, kept = _kept(G)
    if not is_connected(graph, kept):
        raise GraphError("reduced divisors need a connected subgraph")
    base = graph.vertex_ids[0] if base is None else base
    q = graph.position(base)
    n = len(graph.vertices)
    adj = _adjacency(graph, kept)
    d = list(d)

    dist = {q: 0}
    frontier = [q]
    while frontier:
        nxt = []
        for i in frontier:
            for j in adj[i]:
                if j not in dist:
                    dist[j] = dist[i] + 1
                    nxt.append(j)
        frontier = nxt
    depth = max(dist.values())
    for k in range(depth, 0, -1):
        layer = [i for i in range(n) if dist[i] == k]
        outer = {i for i in range(n) if dist[i] >= k}
        while True:
            # each borrow raises every layer vertex by its edges towards layer k-1
            need = 0
            for i in layer:
                if d[i] < 0:
                    gain = sum(c for j, c in adj[i].items() if j not in outer)
                    need = max(need, (-d[i] + gain - 1) // gain)
            if need == 0:
                break
            _borrow(d, adj, outer, need)

    while True:
        burnt = {q}
        changed = True
        while changed:
            changed = False
            for i in range(n):
                if i in burnt:
                    continue
                fire = sum(c for j, c in adj[i].items() if j in burnt)
                if fire > d[i]:
                    burnt.add(i)
                    changed = True
        if len(burnt) == n:
            return tuple(d)
        unburnt = set(range(n)) - burnt
        # fire the unburnt set as many times as stays legal
        times = min(d[i] // sum(c for j, c in adj[i].items() if j not in unburnt)
                    for i in unburnt if any(j not in unburnt for j in adj[i]))
        times = max(times, 1)
        _borrow(d, adj, unburnt, -times)


def is_reduced(G, d: Sequence[int], base: str | None = None) -> bool:
    return reduce(G, d, base) == tuple(d)


# -- orbit separation ----------------------------------------------------------

def separation_certificate(graph: Graph, d1: Sequence[int], d2: Sequence[int]) -> bool:
    """True when every two-sided connected cut is wider than the degree gap.

    Checks ``|sum_W (d1 - d2)| < |E(W, W^c)|`` for every proper non-empty ``W``
    with both induced subgraphs connected. A true answer for ``d1 != d2``
    proves the two multidegrees lie in different twister orbits.
    """
    if sum(d1) != sum(d2):
        raise GraphError("separation certificate needs equal total degrees")
    vids = graph.vertex_ids
    diff = dict(zip(vids, sub(d1, d2)))
    for r in range(1, len(vids)):
        for w in itertools.combinations(vids, r):
            rest = [v for v in vids if v not in w]
            if not (induced_connected(graph, w) and induced_connected(graph, rest)):
                continue
            _, _, cross = cut_partition(graph, w)
            if abs(sum(diff[v] for v in w)) >= len(cross):
                return False
    return True


def class_count_in_box(G, total: int, bound: int) -> int:
    """Number of twister classes met by multidegrees of given total in a box."""
    graph, _ = _kept(G)
    n = len(graph.vertices)
    keys = set()
    for head in itertools.product(range(-bound, bound + 1), repeat=n - 1):
        last = total - sum(head)
        if -bound <= last <= bound:
            keys.add(class_key(G, head + (last,)))
    return len(keys)
