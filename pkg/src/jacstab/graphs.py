"""Genus-labelled multigraphs with loops and legs.

Graphs are immutable. Vertices, edges and legs carry string ids and are kept
sorted by id, so every operation below has a deterministic output order.
Edges are unoriented; parallel edges are distinguished by id.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping


class GraphError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Vertex:
    id: str
    genus: int = 0


@dataclass(frozen=True, order=True)
class Edge:
    id: str
    u: str
    v: str

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def other(self, x: str) -> str:
        return self.v if x == self.u else self.u


@dataclass(frozen=True, order=True)
class Leg:
    id: str
    vertex: str
    label: int


@dataclass(frozen=True)
class Graph:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()
    legs: tuple[Leg, ...] = ()
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))
        object.__setattr__(self, "legs", tuple(sorted(self.legs)))
        vids = [v.id for v in self.vertices]
        if len(set(vids)) != len(vids):
            raise GraphError("duplicate vertex id")
        if any(v.genus < 0 for v in self.vertices):
            raise GraphError("negative vertex genus")
        eids = [e.id for e in self.edges]
        if len(set(eids)) != len(eids):
            raise GraphError("duplicate edge id")
        known = set(vids)
        for e in self.edges:
            if e.u not in known or e.v not in known:
                raise GraphError(f"edge {e.id} has an endpoint that is not a vertex")
        lids = [leg.id for leg in self.legs]
        if len(set(lids)) != len(lids):
            raise GraphError("duplicate leg id")
        for leg in self.legs:
            if leg.vertex not in known:
                raise GraphError(f"leg {leg.id} is attached to an unknown vertex")
        if sorted(leg.label for leg in self.legs) != list(range(1, len(self.legs) + 1)):
            raise GraphError("leg labels must be a permutation of 1..n")
        object.__setattr__(
            self,
            "_index",
            {
                "vpos": {v: i for i, v in enumerate(vids)},
                "genus": {v.id: v.genus for v in self.vertices},
                "edge": {e.id: e for e in self.edges},
            },
        )

    # -- basic accessors ---------------------------------------------------

    @property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def genus_of(self, v: str) -> int:
        return self._index["genus"][v]

    def edge(self, eid: str) -> Edge:
        return self._index["edge"][eid]

    def position(self, v: str) -> int:
        """Index of vertex ``v`` in the sorted vertex order."""
        return self._index["vpos"][v]

    def has_vertex(self, v: str) -> bool:
        return v in self._index["vpos"]

    def valence(self, v: str) -> int:
        """Number of half-edges at ``v``; a loop counts twice, legs are excluded."""
        return sum((e.u == v) + (e.v == v) for e in self.edges)

    def legs_at(self, v: str) -> int:
        return sum(1 for leg in self.legs if leg.vertex == v)

    def loops_at(self, v: str) -> int:
        return sum(1 for e in self.edges if e.u == v and e.v == v)

    def __repr__(self):
        vs = ",".join(f"{v.id}:{v.genus}" for v in self.vertices)
        es = ",".join(f"{e.id}={e.u}-{e.v}" for e in self.edges)
        out = f"Graph([{vs}] [{es}]"
        if self.legs:
            out += " [" + ",".join(f"{l.id}@{l.vertex}#{l.label}" for l in self.legs) + "]"
        return out + ")"


def make_graph(genera: Mapping[str, int] | Iterable[str],
               edges: Iterable[tuple[str, str, str]] | Iterable[tuple[str, str]] = (),
               legs: Mapping[str, str] | None = None) -> Graph:
    """Convenience constructor.

    ``edges`` holds ``(id, u, v)`` triples, or bare ``(u, v)`` pairs that get
    ids ``e1, e2, ...`` in the order given. ``legs`` maps leg label (as int or
    str) to the vertex it is attached to.
    """
    if not isinstance(genera, Mapping):
        genera = {v: 0 for v in genera}
    es = []
    for i, e in enumerate(edges, start=1):
        if len(e) == 2:
            es.append(Edge(f"e{i}", e[0], e[1]))
        else:
            es.append(Edge(*e))
    ls = [Leg(f"l{int(lab)}", v, int(lab)) for lab, v in (legs or {}).items()]
    return Graph(tuple(Vertex(v, g) for v, g in genera.items()), tuple(es), tuple(ls))


# -- spanning subgraphs ------------------------------------------------------

@dataclass(frozen=True)
class SpanningSubgraph:
    parent: Graph
    kept_edges: frozenset

    def __post_init__(self):
        object.__setattr__(self, "kept_edges", frozenset(self.kept_edges))
        if not self.kept_edges <= set(self.parent.edge_ids):
            raise GraphError("kept edges must be edges of the parent graph")

    @property
    def missing_edges(self) -> tuple[str, ...]:
        return tuple(e for e in self.parent.edge_ids if e not in self.kept_edges)

    @property
    def n_missing(self) -> int:
        return len(self.parent.edges) - len(self.kept_edges)

    def as_graph(self) -> Graph:
        g = self.parent
        return Graph(g.vertices, tuple(e for e in g.edges if e.id in self.kept_edges), g.legs)

    def is_connected(self) -> bool:
        return is_connected(self.parent, self.kept_edges)

    def sort_key(self):
        return tuple(sorted(self.kept_edges))


def full_subgraph(g: Graph) -> SpanningSubgraph:
    return SpanningSubgraph(g, frozenset(g.edge_ids))


def _components(g: Graph, kept: Iterable[str] | None = None) -> list[set[str]]:
    kept = set(g.edge_ids) if kept is None else set(kept)
    parent = {v: v for v in g.vertex_ids}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in g.edges:
        if e.id in kept:
            a, b = find(e.u), find(e.v)
            if a != b:
                parent[max(a, b)] = min(a, b)
    comps = defaultdict(set)
    for v in g.vertex_ids:
        comps[find(v)].add(v)
    return [comps[k] for k in sorted(comps)]


def connected_components(g: Graph, kept: Iterable[str] | None = None) -> list[set[str]]:
    return _components(g, kept)


def is_connected(g: Graph, kept: Iterable[str] | None = None) -> bool:
    return len(_components(g, kept)) <= 1


def first_betti(g: Graph) -> int:
    return len(g.edges) - len(g.vertices) + len(_components(g))


def graph_genus(g: Graph) -> int:
    if not is_connected(g):
        raise GraphError("graph genus is only defined for connected graphs")
    return first_betti(g) + sum(v.genus for v in g.vertices)


def spanning_subgraphs(g: Graph, connected_only: bool = False) -> list[SpanningSubgraph]:
    """All spanning subgraphs, ordered lexicographically by sorted kept-edge ids."""
    eids = g.edge_ids
    out = []
    for r in range(len(eids) + 1):
        for kept in itertools.combinations(eids, r):
            if connected_only and not is_connected(g, kept):
                continue
            out.append(SpanningSubgraph(g, frozenset(kept)))
    out.sort(key=SpanningSubgraph.sort_key)
    return out


def connected_spanning_edge_sets(g: Graph) -> list[frozenset]:
    return [s.kept_edges for s in spanning_subgraphs(g, connected_only=True)]


def spanning_trees(g: Graph, kept: Iterable[str] | None = None) -> list[frozenset]:
    """Edge sets of all spanning trees of the subgraph with edges ``kept``.

    Brute force over (|V|-1)-subsets of the non-loop edges.
    """
    kept = g.edge_ids if kept is None else sorted(kept)
    candidates = [e for e in kept if not g.edge(e).is_loop]
    k = len(g.vertices) - 1
    trees = []
    for combo in itertools.combinations(candidates, k):
        if is_connected(g, combo):
            trees.append(frozenset(combo))
    return trees


def cut_partition(g: Graph, vs: Iterable[str]) -> tuple[frozenset, frozenset, frozenset]:
    """Split the edges into (inside ``vs``, inside the complement, crossing)."""
    vs = set(vs)
    if not vs or not vs < set(g.vertex_ids):
        raise GraphError("vertex subset must be non-empty and proper")
    inside, outside, cross = set(), set(), set()
    for e in g.edges:
        a, b = e.u in vs, e.v in vs
        if a and b:
            inside.add(e.id)
        elif not a and not b:
            outside.add(e.id)
        else:
            cross.add(e.id)
    return frozenset(inside), frozenset(outside), frozenset(cross)


def induced_connected(g: Graph, vs: Iterable[str]) -> bool:
    vs = set(vs)
    if not vs:
        return False
    sub = Graph(tuple(v for v in g.vertices if v.id in vs),
                tuple(e for e in g.edges if e.u in vs and e.v in vs))
    return is_connected(sub)


# -- subdivision -------------------------------------------------------------

@dataclass(frozen=True)
class SubdividedGraph:
    base: Graph
    m: tuple  # sorted (edge id, count) pairs
    result: Graph
    vertex_origin: tuple  # (result vertex id, base vertex id | (edge id, position))
    edge_origin: tuple  # (result edge id, base edge id)

    def m_of(self, eid: str) -> int:
        return dict(self.m)[eid]

    def chain(self, eid: str) -> tuple[str, ...]:
        """Interior exceptional vertices of the chain replacing base edge ``eid``."""
        k = self.m_of(eid)
        return tuple(exceptional_vertex_id(eid, i) for i in range(1, k + 1))

    def is_exceptional(self, v: str) -> bool:
        return isinstance(dict(self.vertex_origin)[v], tuple)


def exceptional_vertex_id(eid: str, i: int) -> str:
    return f"{eid}~{i}"


def subdivide(g: Graph, m: Mapping[str, int]) -> SubdividedGraph:
    missing = set(g.edge_ids) - set(m)
    if missing:
        raise GraphError(f"subdivision counts missing for edges {sorted(missing)}")
    if any(m[e] < 0 for e in g.edge_ids):
        raise GraphError("subdivision counts must be non-negative")
    vertices = list(g.vertices)
    edges = []
    vorigin = [(v.id, v.id) for v in g.vertices]
    eorigin = []
    for e in g.edges:
        k = m[e.id]
        if k == 0:
            edges.append(e)
            eorigin.append((e.id, e.id))
            continue
        chain = [e.u] + [exceptional_vertex_id(e.id, i) for i in range(1, k + 1)] + [e.v]
        for i in range(1, k + 1):
            vertices.append(Vertex(chain[i], 0))
            vorigin.append((chain[i], (e.id, i)))
        for j in range(k + 1):
            eid = f"{e.id}~{j}"
            edges.append(Edge(eid, chain[j], chain[j + 1]))
            eorigin.append((eid, e.id))
    result = Graph(tuple(vertices), tuple(edges), g.legs)
    return SubdividedGraph(g, tuple(sorted((e, int(m[e])) for e in g.edge_ids)), result,
                           tuple(sorted(vorigin)), tuple(sorted(eorigin)))


# -- morphisms and contraction -------------------------------------------------

@dataclass(frozen=True)
class GraphMorphism:
    source: Graph
    target: Graph
    vertex_map: tuple  # sorted (source vertex, target vertex)
    contracted_edges: frozenset
    edge_map: tuple  # sorted (source edge, target edge), non-contracted edges only
    leg_map: tuple = ()

    @property
    def vmap(self) -> dict:
        return dict(self.vertex_map)

    @property
    def emap(self) -> dict:
        return dict(self.edge_map)

    def is_isomorphism(self) -> bool:
        return not self.contracted_edges and len(self.source.vertices) == len(self.target.vertices)


def _morphism(source, target, vmap, contracted, emap, lmap) -> GraphMorphism:
    return GraphMorphism(source, target, tuple(sorted(vmap.items())), frozenset(contracted),
                         tuple(sorted(emap.items())), tuple(sorted(lmap.items())))


def identity(g: Graph) -> GraphMorphism:
    return _morphism(g, g, {v: v for v in g.vertex_ids}, (), {e: e for e in g.edge_ids},
                     {l.id: l.id for l in g.legs})


def contract(g: Graph, edges: Iterable[str]) -> tuple[Graph, GraphMorphism]:
    """Contract ``edges``; merged vertices keep the smallest id of their class.

    A contracted loop raises the genus of its vertex by one; in general the new
    genus is the first Betti number of the contracted piece plus the genera of
    the vertices in it.
    """
    edges = frozenset(edges)
    if not edges <= set(g.edge_ids):
        raise GraphError("can only contract edges of the graph")
    comps = _components(g, edges)
    rep = {}
    genus = {}
    for comp in comps:
        r = min(comp)
        n_inner = sum(1 for e in g.edges if e.id in edges and e.u in comp)
        b1 = n_inner - len(comp) + 1
        genus[r] = b1 + sum(g.genus_of(v) for v in comp)
        for v in comp:
            rep[v] = r
    target = Graph(tuple(Vertex(r, genus[r]) for r in genus),
                   tuple(Edge(e.id, rep[e.u], rep[e.v]) for e in g.edges if e.id not in edges),
                   tuple(Leg(l.id, rep[l.vertex], l.label) for l in g.legs))
    f = _morphism(g, target, rep, edges, {e: e for e in g.edge_ids if e not in edges},
                  {l.id: l.id for l in g.legs})
    return target, f


def compose(f: GraphMorphism, h: GraphMorphism) -> GraphMorphism:
    """The morphism ``h o f`` (apply ``f`` first)."""
    fv, fe = f.vmap, f.emap
    hv, he = h.vmap, h.emap
    vmap = {v: hv[w] for v, w in fv.items()}
    contracted = set(f.contracted_edges) | {e for e, w in fe.items() if w in h.contracted_edges}
    emap = {e: he[w] for e, w in fe.items() if w not in h.contracted_edges}
    hl = dict(h.leg_map)
    lmap = {l: hl[w] for l, w in f.leg_map}
    return _morphism(f.source, h.target, vmap, contracted, emap, lmap)


def image_edges(f: GraphMorphism, kept: Iterable[str]) -> frozenset:
    emap = f.emap
    return frozenset(emap[e] for e in kept if e in emap)


# -- isomorphism -------------------------------------------------------------

def _vertex_signature(g: Graph, v: str) -> tuple:
    nbrs = Counter()
    for e in g.edges:
        if e.is_loop:
            continue
        if e.u == v:
            nbrs[e.v] += 1
        elif e.v == v:
            nbrs[e.u] += 1
    labels = tuple(sorted(l.label for l in g.legs if l.vertex == v))
    return (g.genus_of(v), g.loops_at(v), labels, tuple(sorted(nbrs.values())))


def invariant(g: Graph) -> tuple:
    """Isomorphism invariant used to bucket graphs before backtracking."""
    return (len(g.vertices), len(g.edges),
            tuple(sorted(_vertex_signature(g, v) for v in g.vertex_ids)))


def _multiplicities(g: Graph) -> dict:
    mult = defaultdict(list)
    for e in g.edges:
        mult[frozenset((e.u, e.v))].append(e.id)
    return mult


def vertex_isomorphisms(g1: Graph, g2: Graph) -> Iterator[dict]:
    """Vertex bijections preserving genus, legs, loops and edge multiplicities."""
    if invariant(g1) != invariant(g2):
        return
    m1, m2 = _multiplicities(g1), _multiplicities(g2)
    sig1 = {v: _vertex_signature(g1, v) for v in g1.vertex_ids}
    sig2 = {v: _vertex_signature(g2, v) for v in g2.vertex_ids}
    order = list(g1.vertex_ids)
    # place highly constrained vertices first
    order.sort(key=lambda v: -sum(len(m1[k]) for k in m1 if v in k))
    assignment: dict = {}
    used: set = set()

    def consistent(v, w):
        for u, x in assignment.items():
            if len(m1.get(frozenset((v, u)), ())) != len(m2.get(frozenset((w, x)), ())):
                return False
        return True

    def extend(i):
        if i == len(order):
            yield dict(assignment)
            return
        v = order[i]
        for w in g2.vertex_ids:
            if w in used or sig1[v] != sig2[w] or not consistent(v, w):
                continue
            assignment[v] = w
            used.add(w)
            yield from extend(i + 1)
            del assignment[v]
            used.discard(w)

    yield from extend(0)


def _leg_map(g1: Graph, g2: Graph) -> dict:
    by_label = {l.label: l.id for l in g2.legs}
    return {l.id: by_label[l.label] for l in g1.legs}


def isomorphisms(g1: Graph, g2: Graph) -> list[GraphMorphism]:
    """All genus- and leg-label-preserving isomorphisms ``g1 -> g2``.

    Every vertex bijection is combined with every matching of the parallel
    edge classes, so the list length is (#vertex maps) x prod(k!).
    """
    m1, m2 = _multiplicities(g1), _multiplicities(g2)
    lmap = _leg_map(g1, g2) if len(g1.legs) == len(g2.legs) else None
    if lmap is None:
        return []
    out = []
    for vmap in vertex_isomorphisms(g1, g2):
        classes = sorted(m1)
        choices = []
        for key in classes:
            src = sorted(m1[key])
            dst = sorted(m2[frozenset(vmap[x] for x in key)])
            choices.append([dict(zip(src, p)) for p in itertools.permutations(dst)])
        for combo in itertools.product(*choices):
            emap = {}
            for part in combo:
                emap.update(part)
            out.append(_morphism(g1, g2, vmap, (), emap, lmap))
    out.sort(key=lambda f: (f.vertex_map, f.edge_map))
    return out


def find_isomorphism(g1: Graph, g2: Graph) -> GraphMorphism | None:
    """One isomorphism, or ``None``; cheaper than :func:`isomorphisms`."""
    if len(g1.legs) != len(g2.legs):
        return None
    for vmap in vertex_isomorphisms(g1, g2):
        m1, m2 = _multiplicities(g1), _multiplicities(g2)
        emap = {}
        for key, src in m1.items():
            emap.update(zip(sorted(src), sorted(m2[frozenset(vmap[x] for x in key)])))
        return _morphism(g1, g2, vmap, (), emap, _leg_map(g1, g2))
    return None


def automorphisms(g: Graph) -> list[GraphMorphism]:
    return isomorphisms(g, g)


def relabel(g: Graph) -> Graph:
    """Copy of ``g`` with ids ``v1..``, ``e1..`` and ``l<label>``, in sorted order."""
    vnew = {v: f"v{i}" for i, v in enumerate(g.vertex_ids, start=1)}
    return Graph(tuple(Vertex(vnew[v.id], v.genus) for v in g.vertices),
                 tuple(Edge(f"e{i}", *sorted((vnew[e.u], vnew[e.v])))
                       for i, e in enumerate(g.edges, start=1)),
                 tuple(Leg(f"l{l.label}", vnew[l.vertex], l.label) for l in g.legs))


def is_stable(g: Graph) -> bool:
    return all(2 * v.genus - 2 + g.valence(v.id) + g.legs_at(v.id) > 0 for v in g.vertices)
