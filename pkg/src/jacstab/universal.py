"""Stable-graph categories and universal stability assignments.

The category of stable graphs of type ``(g, n)`` is generated by repeatedly
degenerating the one-vertex graph (adding a loop, or splitting a vertex in
two joined by a new edge) and deduplicating up to isomorphism. Morphisms are
edge contractions followed by isomorphisms onto the chosen representatives.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import chipfiring as cf
from .assignments import (StabilityAssignment, enumerate_assignments, extend_from_trees,
                          pushforward, pushforward_compatible)
from .families import gsym as _gsym
from .graphs import (Edge, Graph, GraphError, GraphMorphism, Leg, Vertex, automorphisms, compose,
                     connected_components, contract, find_isomorphism, graph_genus, invariant,
                     is_connected, is_stable, isomorphisms, make_graph, relabel, spanning_trees,
                     vertex_isomorphisms)
from .polarizations import (Polarization, assignment_from_polarization, canonical_polarization,
                            is_nondegenerate)
from .reports import Report


class NoIntegerSolution(ValueError):
    pass


# -- generation ---------------------------------------------------------------

def _degenerations(g: Graph):
    """All stable graphs with one more edge that contract back onto ``g``."""
    new_edge = f"e{len(g.edges) + 1}"
    for v in g.vertices:
        if v.genus >= 1:
            verts = [x if x.id != v.id else Vertex(v.id, v.genus - 1) for x in g.vertices]
            yield Graph(tuple(verts), g.edges + (Edge(new_edge, v.id, v.id),), g.legs)
        # half-edges at v: (kind, id, slot)
        halves = []
        for e in g.edges:
            if e.u == v.id:
                halves.append(("e", e.id, 0))
            if e.v == v.id:
                halves.append(("e", e.id, 1))
        halves += [("l", leg.id, 0) for leg in g.legs if leg.vertex == v.id]
        new_v = v.id + "'"
        for mask in itertools.product((0, 1), repeat=len(halves)):
            moved = {h for h, m in zip(halves, mask) if m}
            for g1 in range(v.genus + 1):
                verts = [x for x in g.vertices if x.id != v.id]
                verts += [Vertex(v.id, g1), Vertex(new_v, v.genus - g1)]
                edges = []
                for e in g.edges:
                    u = new_v if ("e", e.id, 0) in moved else e.u
                    w = new_v if ("e", e.id, 1) in moved else e.v
                    edges.append(Edge(e.id, u, w))
                edges.append(Edge(new_edge, v.id, new_v))
                legs = [Leg(l.id, new_v if ("l", l.id, 0) in moved else l.vertex, l.label) for l in g.legs]
                h = Graph(tuple(verts), tuple(edges), tuple(legs))
                if is_stable(h):
                    yield h


@dataclass
class StableGraphCategory:
    genus: int
    markings: int
    objects: list
    _morphisms: dict = field(default_factory=dict, repr=False)
    _buckets: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        for i, obj in enumerate(self.objects):
            self._buckets.setdefault(invariant(obj), []).append(i)

    def index_of(self, g: Graph) -> tuple[int, GraphMorphism]:
        """Representative index of ``g`` and one isomorphism onto it."""
        for i in self._buckets.get(invariant(g), []):
            iso = find_isomorphism(g, self.objects[i])
            if iso is not None:
                return i, iso
        raise GraphError("graph is not isomorphic to any object of the category")

    def _from(self, i: int) -> dict:
        if i not in self._morphisms:
            src = self.objects[i]
            out: dict = {}
            for r in range(len(src.edges) + 1):
                for subset in itertools.combinations(src.edge_ids, r):
                    contracted, c = contract(src, subset)
                    j, _ = self.index_of(contracted)
                    for iso in isomorphisms(contracted, self.objects[j]):
                        out.setdefault(j, []).append(compose(c, iso))
            self._morphisms[i] = out
        return self._morphisms[i]

    def morphisms(self, i: int, j: int) -> list[GraphMorphism]:
        """All contractions composed with isomorphisms from object ``i`` to ``j``."""
        return self._from(i).get(j, [])

    def morphism_pairs(self):
        for i in range(len(self.objects)):
            for j in sorted(self._from(i)):
                yield i, j

    def automorphisms(self, i: int) -> list[GraphMorphism]:
        return self.morphisms(i, i)


def enumerate_stable_graphs(g: int, n: int) -> StableGraphCategory:
    if 2 * g - 2 + n <= 0:
        raise GraphError("need 2g - 2 + n > 0")
    if g > 4 or n > 4 or g < 0 or n < 0:
        raise GraphError("supported range is 0 <= g <= 4, 0 <= n <= 4")
    start = make_graph({"v": g}, (), {i: "v" for i in range(1, n + 1)})
    objects = [relabel(start)]
    level = [objects[0]]
    while level:
        buckets: dict = {}
        nxt = []
        for h in level:
            for cand in _degenerations(h):
                key = invariant(cand)
                if any(find_isomorphism(cand, o) is not None for o in buckets.get(key, [])):
                    continue
                cand = relabel(cand)
                buckets.setdefault(key, []).append(cand)
                nxt.append(cand)
        nxt.sort(key=lambda x: (len(x.vertices), invariant(x)))
        objects.extend(nxt)
        level = nxt
    return StableGraphCategory(g, n, objects)


# -- vine curves ----------------------------------------------------------------

def _swaps_vertices(obj: Graph) -> bool:
    return any(vmap[obj.vertex_ids[0]] != obj.vertex_ids[0] for vmap in vertex_isomorphisms(obj, obj))


def vine_subsets(cat: StableGraphCategory) -> tuple[list, list, list]:
    """Indices of (loopless 2-vertex graphs, those with no vertex swap, those with one edge)."""
    t_all = [i for i, o in enumerate(cat.objects)
             if len(o.vertices) == 2 and not any(e.is_loop for e in o.edges)]
    t_prime = [i for i in t_all if not _swaps_vertices(cat.objects[i])]
    c_set = [i for i in t_all if len(cat.objects[i].edges) == 1]
    return t_all, t_prime, c_set


def first_vertex(obj: Graph) -> str:
    """Fixed ordering on a 2-vertex graph: lower genus first, then smaller id."""
    return min(obj.vertices, key=lambda v: (v.genus, v.id)).id


def gsym(g: int) -> tuple[Graph, frozenset]:
    return _gsym(g)


# -- tree systems ---------------------------------------------------------------

def _tree_sides(graph: Graph, tree: frozenset, eid: str) -> tuple[set, set]:
    comps = connected_components(graph, tree - {eid})
    e = graph.edge(eid)
    side1 = next(c for c in comps if e.u in c)
    return side1, set(graph.vertex_ids) - side1


def tree_edge_target(cat: StableGraphCategory, graph: Graph, tree: frozenset, eid: str):
    """Contract everything except the cut of tree edge ``eid``; returns
    ``(object index, side mapped to the first vertex, the other side, morphism)``."""
    side_a, side_b = _tree_sides(graph, tree, eid)
    inner = [e.id for e in graph.edges if (e.u in side_a) == (e.v in side_a)]
    contracted, c = contract(graph, inner)
    j, iso = cat.index_of(contracted)
    f = compose(c, iso)
    v1 = first_vertex(cat.objects[j])
    vmap = f.vmap
    side1 = {v for v in graph.vertex_ids if vmap[v] == v1}
    return j, side1, set(graph.vertex_ids) - side1, f


def tree_system(cat: StableGraphCategory, graph: Graph, tree: frozenset, alpha: Mapping[int, int],
                d: int) -> tuple[list, list]:
    """Affine system ``A x = b`` for the tree multidegree ``x``.

    One row per tree edge (a compatibility equation for an ordered vine, or a
    balance equation for a vine with a vertex swap), plus the total degree.
    """
    _, t_prime, _ = vine_subsets(cat)
    vids = graph.vertex_ids
    missing = set(graph.edge_ids) - set(tree)
    rows, rhs = [], []
    for eid in sorted(tree):
        j, side1, side2, _ = tree_edge_target(cat, graph, tree, eid)
        inner1 = sum(1 for e in missing if graph.edge(e).u in side1 and graph.edge(e).v in side1)
        inner2 = sum(1 for e in missing if graph.edge(e).u in side2 and graph.edge(e).v in side2)
        if j in t_prime:
            rows.append([int(v in side1) for v in vids])
            rhs.append(alpha[j] - inner1)
        else:
            rows.append([int(v in side1) - int(v in side2) for v in vids])
            rhs.append(inner2 - inner1)
    rows.append([1] * len(vids))
    rhs.append(d - len(missing))
    return rows, rhs


def solve_tree_system(cat: StableGraphCategory, graph: Graph, tree: frozenset,
                      alpha: Mapping[int, int], d: int) -> tuple:
    """Unique integer tree multidegree compatible with the vine values ``alpha``.

    Raises :class:`NoIntegerSolution` when the rational solution is not integral
    (a parity obstruction from a symmetric vine).
    """
    rows, rhs = tree_system(cat, graph, tree, alpha, d)
    sol = _solve_exact(rows, rhs)
    if any(x.denominator != 1 for x in sol):
        raise NoIntegerSolution(f"tree {sorted(tree)}: solution {sol} is not integral")
    return tuple(int(x) for x in sol)


def _solve_exact(rows, rhs) -> list[Fraction]:
    n = len(rows)
    m = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise GraphError("tree system is singular")
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                q = m[r][col] / m[col][col]
                m[r] = [a - q * b for a, b in zip(m[r], m[col])]
    return [m[i][n] / m[i][i] for i in range(n)]


def assignment_from_vines(cat: StableGraphCategory, i: int, alpha: Mapping[int, int],
                          d: int) -> StabilityAssignment | None:
    """Solve every tree system of object ``i`` and close; ``None`` if that fails."""
    obj = cat.objects[i]
    values = {}
    try:
        for tree in spanning_trees(obj):
            values[tree] = solve_tree_system(cat, obj, tree, alpha, d)
    except NoIntegerSolution:
        return None
    return extend_from_trees(obj, d, values)


# -- universal assignments --------------------------------------------------------

@dataclass(frozen=True)
class UniversalAssignment:
    genus: int
    markings: int
    degree: int
    assignments: tuple  # one StabilityAssignment per category object

    def key(self):
        return tuple(a.key() for a in self.assignments)


def is_aut_invariant(cat: StableGraphCategory, i: int, a: StabilityAssignment) -> bool:
    return all(pushforward_compatible(a, a, f).passed for f in cat.automorphisms(i))


def compatibility_report(cat: StableGraphCategory, assignments: Sequence) -> Report:
    report = Report()
    for i, j in cat.morphism_pairs():
        for f in cat.morphisms(i, j):
            sub = pushforward_compatible(assignments[i], assignments[j], f)
            if not sub.passed:
                report.fail("morphism", source=i, target=j, vertex_map=dict(f.vertex_map),
                            contracted=sorted(f.contracted_edges), misses=len(sub.findings))
                break
    return report


def universal_search(g: int, n: int, d: int, window: int,
                     cat: StableGraphCategory | None = None) -> list[UniversalAssignment]:
    """Every universal assignment whose per-object tree values lie in the window.

    Candidates per object come from :func:`enumerate_assignments` and must be
    invariant under automorphisms; tuples are then built object by object,
    checking every morphism between objects already chosen.
    """
    cat = cat or enumerate_stable_graphs(g, n)
    k = len(cat.objects)
    candidates = []
    for i, obj in enumerate(cat.objects):
        cands = [a for a in enumerate_assignments(obj, d, window) if is_aut_invariant(cat, i, a)]
        if not cands:
            return []
        candidates.append(cands)
    links = {i: [] for i in range(k)}
    for i, j in cat.morphism_pairs():
        if i != j:
            later = max(i, j)
            links[later].append((i, j))
    found = []
    chosen: list = [None] * k

    def compatible(i):
        for s, t in links[i]:
            for f in cat.morphisms(s, t):
                if not pushforward_compatible(chosen[s], chosen[t], f).passed:
                    return False
        return True

    def rec(i):
        if i == k:
            found.append(UniversalAssignment(g, n, d, tuple(chosen)))
            return
        for a in candidates[i]:
            chosen[i] = a
            if compatible(i):
                rec(i + 1)
        chosen[i] = None

    rec(0)
    return sorted(found, key=UniversalAssignment.key)


def gcd_obstruction(g: int, d: int) -> bool:
    """True when ``gcd(d - g + 1, 2g - 2) != 1`` (no universal assignment exists).

    For ``g`` in {2, 3} the answer is cross-checked against nondegeneracy of
    the uniform polarization forced on the cycle of the symmetric trivalent graph.
    """
    if g < 2:
        raise GraphError("the obstruction is stated for g >= 2")
    obstructed = math.gcd(d - g + 1, 2 * g - 2) != 1
    if g in (2, 3):
        nondeg = bool(is_nondegenerate(*_forced_cycle_polarization(g, d)))
        if nondeg == obstructed:
            raise AssertionError(f"gcd criterion and cycle polarization disagree at g={g}, d={d}")
    return obstructed


def _forced_cycle_polarization(g: int, d: int) -> tuple[Graph, Polarization]:
    graph, cycle_edges = _gsym(g)
    cycle = Graph(graph.vertices, tuple(e for e in graph.edges if e.id in cycle_edges))
    value = Fraction(d - g + 1, 2 * g - 2)
    return cycle, Polarization(cycle, (value,) * len(cycle.vertices))


def has_separating_edge(graph: Graph) -> bool:
    return any(not e.is_loop and not is_connected(graph, set(graph.edge_ids) - {e.id})
               for e in graph.edges)


def canonical_universal(cat: StableGraphCategory, d: int) -> list[StabilityAssignment]:
    return [assignment_from_polarization(o, canonical_polarization(o, d)) for o in cat.objects]


def weak_vs_strong_compatibility(phis: Sequence[Polarization], cat: StableGraphCategory) -> Report:
    """Strong: polarizations add up under every morphism. Weak: induced assignments are compatible."""
    report = Report()
    for i, phi in enumerate(phis):
        nd = is_nondegenerate(cat.objects[i], phi)
        if not nd:
            raise GraphError(f"polarization on object {i} is degenerate: {nd.witness}")
    induced = [assignment_from_polarization(o, p, check=False) for o, p in zip(cat.objects, phis)]
    strong = weak = True
    for i, j in cat.morphism_pairs():
        src, tgt = phis[i], phis[j]
        for f in cat.morphisms(i, j):
            pushed = {w: Fraction(0) for w in tgt.graph.vertex_ids}
            for v, x in zip(src.graph.vertex_ids, src.values):
                pushed[f.vmap[v]] += x
            if tuple(pushed[w] for w in tgt.graph.vertex_ids) != tgt.values:
                if strong:
                    report.note("not_strong", source=i, target=j, vertex_map=dict(f.vertex_map))
                strong = False
            if not pushforward_compatible(induced[i], induced[j], f).passed:
                report.note("not_weak", source=i, target=j, vertex_map=dict(f.vertex_map),
                            contracted=sorted(f.contracted_edges))
                weak = False
    report.note("summary", strong=strong, weak=weak)
    if strong and not weak:
        report.fail("strong_without_weak")
    return report


def compatibility_flags(report: Report) -> tuple[bool, bool]:
    summary = next(f for f in report.findings if f["kind"] == "summary")
    return summary["strong"], summary["weak"]
