"""Stability assignments on a graph and the operations that build or check them.

An assignment of degree ``d`` is a finite set of pairs ``(G, md)`` where ``G``
is a connected spanning subgraph (stored as its frozenset of kept edge ids)
and ``md`` a multidegree of total ``d - n(G)``, ``n(G)`` the number of edges
missing from ``G``. It is a stability assignment when

1. it is closed under chip-adding: if ``(G, md)`` is in it and ``e`` is an
   edge missing from ``G`` with ends ``u, v``, then ``(G + e, md + e_u)`` and
   ``(G + e, md + e_v)`` are in it too, and
2. each fiber ``sigma(G)`` is a minimal complete set of representatives of
   the twister-group orbits of multidegrees of that total.
"""

from __future__ import annotations

import itertools
import os
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import chipfiring as cf
from .graphs import (Graph, GraphError, GraphMorphism, SpanningSubgraph, SubdividedGraph,
                     image_edges, is_connected, spanning_subgraphs, spanning_trees)
from .reports import Report


def _edges(kept) -> list:
    return sorted(kept)


@dataclass(frozen=True)
class StabilityAssignment:
    graph: Graph
    degree: int
    entries: frozenset  # of (frozenset kept edges, multidegree tuple)

    def __post_init__(self):
        entries = frozenset((frozenset(k), tuple(int(x) for x in md)) for k, md in self.entries)
        object.__setattr__(self, "entries", entries)
        n_edges = len(self.graph.edges)
        for kept, md in entries:
            if len(md) != len(self.graph.vertices):
                raise GraphError("multidegree length does not match the vertex count")
            if not kept <= set(self.graph.edge_ids):
                raise GraphError(f"unknown edges in {sorted(kept)}")
            if sum(md) != self.degree - (n_edges - len(kept)):
                raise GraphError(
                    f"entry on {sorted(kept)} has total {sum(md)}, expected "
                    f"{self.degree - (n_edges - len(kept))}")
            if not is_connected(self.graph, kept):
                raise GraphError(f"subgraph {sorted(kept)} is not connected")

    def fiber(self, kept) -> list:
        kept = frozenset(kept)
        return sorted(md for k, md in self.entries if k == kept)

    def fibers(self) -> dict:
        out = defaultdict(list)
        for k, md in self.entries:
            out[k].append(md)
        return {k: sorted(v) for k, v in out.items()}

    def sorted_entries(self) -> list:
        return sorted(((_edges(k), md) for k, md in self.entries))

    def key(self) -> tuple:
        """Canonical form used for deduplication."""
        return (self.degree, tuple((tuple(k), md) for k, md in self.sorted_entries()))

    def __len__(self):
        return len(self.entries)

    def __contains__(self, item):
        kept, md = item
        return (frozenset(kept), tuple(md)) in self.entries


def chip_additions(graph: Graph, kept: frozenset, md: tuple):
    """Entries forced by one application of the chip-adding rule."""
    for e in graph.edges:
        if e.id in kept:
            continue
        bigger = kept | {e.id}
        ends = (e.u,) if e.is_loop else (e.u, e.v)
        for v in ends:
            yield e.id, v, (bigger, cf.add(md, cf.unit(graph, v)))


# -- verification ------------------------------------------------------------

def verify_condition_one(a: StabilityAssignment) -> Report:
    report = Report()
    for kept, md in a.sorted_entries():
        kept = frozenset(kept)
        for eid, v, target in chip_additions(a.graph, kept, md):
            if target not in a.entries:
                report.fail("chip_adding", subgraph=_edges(kept), multidegree=list(md),
                            edge=eid, vertex=v, missing=list(target[1]))
    return report


def verify_condition_two(a: StabilityAssignment, method: str = "smith") -> Report:
    """Each connected spanning fiber must hold exactly c(G) pairwise inequivalent degrees."""
    report = Report()
    fibers = a.fibers()
    for sub in spanning_subgraphs(a.graph, connected_only=True):
        kept = sub.kept_edges
        elems = fibers.get(kept, [])
        c = cf.complexity((a.graph, kept))
        if len(elems) != c:
            report.fail("fiber_size", subgraph=_edges(kept), size=len(elems), complexity=c)
        if method == "smith":
            seen = {}
            for md in elems:
                key = cf.class_key((a.graph, kept), md)
                if key in seen:
                    report.fail("equivalent_pair", subgraph=_edges(kept),
                                first=list(seen[key]), second=list(md))
                else:
                    seen[key] = md
        else:
            for x, y in itertools.combinations(elems, 2):
                if cf.equivalent((a.graph, kept), x, y, method=method):
                    report.fail("equivalent_pair", subgraph=_edges(kept), first=list(x), second=list(y))
    return report


def is_stability_assignment(a: StabilityAssignment) -> bool:
    return verify_condition_one(a).passed and verify_condition_two(a).passed


# -- closures and trees --------------------------------------------------------

def chip_adding_closure(seed: StabilityAssignment) -> StabilityAssignment:
    """Smallest assignment containing ``seed`` and closed under chip-adding."""
    entries = set(seed.entries)
    queue = deque(sorted(entries, key=lambda x: (_edges(x[0]), x[1])))
    while queue:
        kept, md = queue.popleft()
        for _, _, target in chip_additions(seed.graph, kept, md):
            if target not in entries:
                entries.add(target)
                queue.append(target)
    return StabilityAssignment(seed.graph, seed.degree, frozenset(entries))


def _check_tree_values(g: Graph, d: int, tree_values: Mapping) -> dict:
    out = {}
    for tree, md in tree_values.items():
        tree = frozenset(tree)
        md = tuple(md)
        expected = d - (len(g.edges) - len(tree))
        if sum(md) != expected:
            raise GraphError(f"tree {sorted(tree)} value has total {sum(md)}, expected {expected}")
        out[tree] = md
    return out


def extend_from_trees(g: Graph, d: int, tree_values: Mapping) -> StabilityAssignment | None:
    """The unique stability assignment with the given tree values, if any."""
    values = _check_tree_values(g, d, tree_values)
    seed = StabilityAssignment(g, d, frozenset(values.items()))
    closed = chip_adding_closure(seed)
    return closed if is_stability_assignment(closed) else None


def tree_values(a: StabilityAssignment) -> dict:
    return {t: a.fiber(t)[0] for t in spanning_trees(a.graph) if a.fiber(t)}


def barmak_check(a: StabilityAssignment) -> Report:
    """Fiber sizes bound the complexity from above, with equality propagating down."""
    report = Report()
    c1 = verify_condition_one(a)
    if not c1.passed:
        report.fail("precondition", reason="condition (1) fails", violations=len(c1.findings))
    for t in spanning_trees(a.graph):
        if not a.fiber(t):
            report.fail("precondition", reason="empty tree fiber", subgraph=_edges(t))
    if not report.passed:
        return report
    full = frozenset(a.graph.edge_ids)
    equal_at_top = len(a.fiber(full)) == cf.complexity(a.graph)
    for sub in spanning_subgraphs(a.graph):
        size = len(a.fiber(sub.kept_edges))
        c = cf.complexity((a.graph, sub.kept_edges))
        if size < c:
            report.fail("lower_bound", subgraph=_edges(sub.kept_edges), size=size, complexity=c)
        elif equal_at_top and size != c:
            report.fail("equality", subgraph=_edges(sub.kept_edges), size=size, complexity=c)
    return report


# -- perturbations and lifts -------------------------------------------------

def perturbations(g: Graph, G) -> set:
    """Orientation sums of the edges missing from ``G``."""
    kept = G.kept_edges if isinstance(G, SpanningSubgraph) else frozenset(G)
    missing = [e for e in g.edges if e.id not in kept]
    out = set()
    for heads in itertools.product(*[(e.u, e.v) for e in missing]):
        md = [0] * len(g.vertices)
        for v in heads:
            md[g.position(v)] += 1
        out.add(tuple(md))
    return out


@dataclass(frozen=True)
class LiftedAssignment:
    graph: Graph
    degree: int
    multidegrees: tuple  # sorted, duplicates kept so that counts stay honest

    def __len__(self):
        return len(self.multidegrees)


def lift_assignment(a: StabilityAssignment, sub: SubdividedGraph) -> LiftedAssignment:
    """Lift every entry to the subdivided graph.

    The base part is copied, exceptional vertices start at zero, and each
    missing edge puts one chip on an interior vertex of its chain, over all
    choices. An entry missing an edge that was not subdivided has no lift.
    """
    if sub.base != a.graph:
        raise GraphError("subdivision base differs from the assignment graph")
    res = sub.result
    base_pos = [res.position(v) for v in a.graph.vertex_ids]
    out = []
    for kept, md in a.sorted_entries():
        missing = [e for e in a.graph.edge_ids if e not in kept]
        chains = [sub.chain(e) for e in missing]
        start = [0] * len(res.vertices)
        for i, x in zip(base_pos, md):
            start[i] = x
        for choice in itertools.product(*chains):
            lifted = list(start)
            for v in choice:
                lifted[res.position(v)] += 1
            out.append(tuple(lifted))
    out.sort()
    return LiftedAssignment(res, a.degree, tuple(out))


def expected_lift_size(a: StabilityAssignment, sub: SubdividedGraph) -> int:
    """Sum over fibers of |sigma(G)| times the product of m over missing edges."""
    total = 0
    for kept, elems in a.fibers().items():
        factor = 1
        for e in a.graph.edge_ids:
            if e not in kept:
                factor *= sub.m_of(e)
        total += factor * len(elems)
    return total


def verify_lift_theorem(a: StabilityAssignment, sub: SubdividedGraph) -> Report:
    report = Report()
    lifted = lift_assignment(a, sub)
    c = cf.complexity(sub.result)
    if len(lifted) != c:
        report.fail("lift_size", size=len(lifted), complexity=c)
    jac = cf.jacobian_group(sub.result)
    seen = {}
    for md, key in zip(lifted.multidegrees, jac.coordinates_many(lifted.multidegrees)):
        if key in seen:
            report.fail("equivalent_lifts", first=list(seen[key]), second=list(md))
        else:
            seen[key] = md
    return report


# -- morphisms ---------------------------------------------------------------

def pushforward(f: GraphMorphism, kept: frozenset, md: Sequence[int]) -> tuple:
    """Image of an entry under a contraction: ``(f(G), d')``.

    ``d'(w)`` adds up ``md`` over the preimage of ``w`` plus one chip for each
    edge missing from ``G`` that ``f`` contracts onto ``w``.
    """
    src, tgt = f.source, f.target
    vmap = f.vmap
    out = [0] * len(tgt.vertices)
    for v, x in zip(src.vertex_ids, md):
        out[tgt.position(vmap[v])] += x
    for e in f.contracted_edges:
        if e not in kept:
            out[tgt.position(vmap[src.edge(e).u])] += 1
    return image_edges(f, kept), tuple(out)


def pushforward_compatible(src: StabilityAssignment, tgt: StabilityAssignment,
                           f: GraphMorphism) -> Report:
    if src.degree != tgt.degree:
        raise GraphError("assignments of different degrees are never compatible")
    report = Report()
    for kept, md in src.sorted_entries():
        image = pushforward(f, frozenset(kept), md)
        if image not in tgt.entries:
            report.fail("pushforward_missing", subgraph=kept, multidegree=list(md),
                        image_subgraph=_edges(image[0]), image_multidegree=list(image[1]))
    return report


# -- exhaustive search ---------------------------------------------------------

def window_vectors(n: int, total: int, window: int) -> list[tuple]:
    """Integer vectors in ``[-window, window]^n`` with the given total."""
    out = []
    for head in itertools.product(range(-window, window + 1), repeat=n - 1):
        last = total - sum(head)
        if -window <= last <= window:
            out.append(head + (last,))
    return out


class _PartialClosure:
    """Incremental chip-adding closure that detects Condition (2) conflicts early.

    Elements of a fiber must lie in distinct twister classes, and closure only
    grows as seeds are added, so a clash can never be repaired later.
    """

    def __init__(self, graph: Graph):
        self.graph = graph
        self.entries: set = set()
        self.classes: dict = {}
        self.log: list = []

    def add_seed(self, entry) -> bool:
        mark = len(self.log)
        queue = deque([entry])
        ok = True
        while queue and ok:
            item = queue.popleft()
            if item in self.entries:
                continue
            key = (item[0], cf.class_key((self.graph, item[0]), item[1]))
            if key in self.classes:
                ok = False
                break
            self.entries.add(item)
            self.classes[key] = item
            self.log.append((item, key))
            for _, _, target in chip_additions(self.graph, item[0], item[1]):
                if target not in self.entries:
                    queue.append(target)
        return ok, mark

    def undo(self, mark: int):
        while len(self.log) > mark:
            item, key = self.log.pop()
            self.entries.discard(item)
            del self.classes[key]


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("JACSTAB_THREADS", "1")))
    except ValueError:
        return 1


def _search(g: Graph, d: int, trees: list, candidates: list, prefix: tuple) -> list:
    state = _PartialClosure(g)
    for tree, md in zip(trees, prefix):
        ok, _ = state.add_seed((tree, md))
        if not ok:
            return []
    found = []

    def rec(i):
        if i == len(trees):
            a = StabilityAssignment(g, d, frozenset(state.entries))
            if is_stability_assignment(a):
                found.append(a)
            return
        for md in candidates[i]:
            ok, mark = state.add_seed((trees[i], md))
            if ok:
                rec(i + 1)
            state.undo(mark)

    rec(len(prefix))
    return found


def enumerate_assignments(g: Graph, d: int, window: int) -> list[StabilityAssignment]:
    """All degree-``d`` stability assignments whose tree values lie in the window.

    Backtracks over spanning trees, seeding each with every candidate in
    ``[-window, window]^V`` and pruning as soon as the partial closure puts
    two equivalent multidegrees in one fiber. Completeness holds relative to
    the window only.
    """
    if window < 0:
        raise ValueError("window must be non-negative")
    trees = spanning_trees(g)
    trees.sort(key=_edges)
    n = len(g.vertices)
    candidates = [window_vectors(n, d - (len(g.edges) - len(t)), window) for t in trees]
    workers = _workers()
    if workers > 1 and trees and len(candidates[0]) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_search, *zip(*[(g, d, trees, candidates, (md,)) for md in candidates[0]]))
            found = [a for part in parts for a in part]
    else:
        found = _search(g, d, trees, candidates, ())
    unique = {a.key(): a for a in found}
    return [unique[k] for k in sorted(unique)]
