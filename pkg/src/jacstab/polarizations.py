"""Numerical (Oda-Seshadri) polarizations and the assignments they induce.

A polarization is a vector of exact rationals on the vertices. A multidegree
``md`` on a spanning subgraph ``G`` is semistable when, for every proper
non-empty vertex set ``V``,

    |sum_V (md - phi) + #missing edges inside V + #missing cut edges / 2|
        <= #kept cut edges / 2,

and stable when every inequality is strict. Loops at a vertex of ``V`` count
as edges inside ``V``. All comparisons are done on integers after clearing
denominators, so wall cases are detected exactly.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .assignments import StabilityAssignment
from .graphs import Graph, GraphError, SpanningSubgraph, graph_genus, is_connected, spanning_subgraphs, spanning_trees

STABLE = "stable"
STRICTLY_SEMISTABLE = "strictly_semistable"
UNSTABLE = "unstable"


@dataclass(frozen=True)
class Polarization:
    graph: Graph
    values: tuple  # Fractions aligned with graph.vertex_ids

    def __post_init__(self):
        if len(self.values) != len(self.graph.vertices):
            raise GraphError("polarization length does not match the vertex count")
        object.__setattr__(self, "values", tuple(Fraction(x) for x in self.values))

    @property
    def total(self) -> Fraction:
        return sum(self.values, Fraction(0))

    def as_dict(self) -> dict:
        return dict(zip(self.graph.vertex_ids, self.values))

    @classmethod
    def from_dict(cls, graph: Graph, values: dict) -> "Polarization":
        if set(values) != set(graph.vertex_ids):
            raise GraphError("polarization keys must be exactly the vertex ids")
        return cls(graph, tuple(Fraction(values[v]) for v in graph.vertex_ids))


class StabilityVerdict(NamedTuple):
    verdict: str
    witness: tuple | None = None  # vertex ids of the violating / tight set


class Nondegeneracy(NamedTuple):
    nondegenerate: bool
    witness: tuple | None = None  # (kept edges, multidegree, vertex set)

    def __bool__(self):
        return self.nondegenerate


def _integral_total(phi: Polarization) -> int:
    if phi.total.denominator != 1:
        raise GraphError(f"polarization total {phi.total} is not an integer")
    return int(phi.total)


@lru_cache(maxsize=4096)
def _cut_data(graph: Graph, kept: frozenset) -> tuple:
    """For each proper vertex subset: (mask, missing inside, missing cut, kept cut)."""
    vids = graph.vertex_ids
    out = []
    for r in range(1, len(vids)):
        for vs in itertools.combinations(range(len(vids)), r):
            mask = [0] * len(vids)
            for i in vs:
                mask[i] = 1
            inside_missing = cut_missing = cut_kept = 0
            for e in graph.edges:
                a, b = mask[graph.position(e.u)], mask[graph.position(e.v)]
                if a and b:
                    inside_missing += e.id not in kept
                elif a != b:
                    if e.id in kept:
                        cut_kept += 1
                    else:
                        cut_missing += 1
            out.append((tuple(mask), inside_missing, cut_missing, cut_kept))
    return tuple(out)


def _kept_of(G) -> frozenset:
    return G.kept_edges if isinstance(G, SpanningSubgraph) else frozenset(G)


def classify(g: Graph, phi: Polarization, G, md: Sequence[int]) -> StabilityVerdict:
    """Evaluate the stability inequality over every proper vertex subset."""
    kept = _kept_of(G)
    expected = phi.total - (len(g.edges) - len(kept))
    if sum(md) != expected:
        raise GraphError(f"multidegree total {sum(md)} differs from {expected}")
    tight = None
    for mask, inside, cut_missing, cut_kept in _cut_data(g, kept):
        s = sum((Fraction(x) - p) for x, p, m in zip(md, phi.values, mask) if m)
        lhs = abs(s + inside + Fraction(cut_missing, 2))
        rhs = Fraction(cut_kept, 2)
        if lhs > rhs:
            return StabilityVerdict(UNSTABLE, _witness(g, mask))
        if lhs == rhs and tight is None:
            tight = mask
    if tight is not None:
        return StabilityVerdict(STRICTLY_SEMISTABLE, _witness(g, tight))
    return StabilityVerdict(STABLE)


def _witness(g: Graph, mask) -> tuple:
    return tuple(v for v, m in zip(g.vertex_ids, mask) if m)


def enumeration_box(g: Graph, phi: Polarization, margin: int = 1) -> list[tuple[int, int]]:
    """Per-vertex bounds containing every semistable multidegree.

    The singleton inequality at ``v`` bounds ``|md(v) - phi(v)|`` by the
    valence of ``v``; ``margin`` widens the box further.
    """
    out = []
    for v, p in zip(g.vertex_ids, phi.values):
        val = g.valence(v)
        out.append((math.ceil(p) - val - margin, math.floor(p) + val + margin))
    return out


def _box_candidates(box, total) -> np.ndarray:
    n = len(box)
    if n == 1:
        lo, hi = box[0]
        return np.array([[total]] if lo <= total <= hi else np.zeros((0, 1)), dtype=np.int64)
    heads = np.array(list(itertools.product(*[range(lo, hi + 1) for lo, hi in box[:-1]])),
                     dtype=np.int64).reshape(-1, n - 1)
    last = total - heads.sum(axis=1)
    lo, hi = box[-1]
    keep = (last >= lo) & (last <= hi)
    return np.column_stack([heads[keep], last[keep]])


def _scan(g: Graph, phi: Polarization, kept: frozenset, margin: int = 1):
    """Candidates in the box with their semistable / stable flags (integer arithmetic)."""
    total = _integral_total(phi) - (len(g.edges) - len(kept))
    if len(g.vertices) == 1:
        cand = np.array([[total]], dtype=np.int64)
        return cand, np.array([True]), np.array([True]), None
    cand = _box_candidates(enumeration_box(g, phi, margin), total)
    data = _cut_data(g, kept)
    scale = math.lcm(*[p.denominator for p in phi.values])
    masks = np.array([m for m, *_ in data], dtype=np.int64).T
    phi_int = [int(p * scale) for p in phi.values]
    offset = np.array([2 * scale * inside + scale * cm - 2 * sum(x for x, m in zip(phi_int, mask) if m)
                       for mask, inside, cm, _ in data], dtype=np.int64)
    rhs = np.array([scale * ck for *_, ck in data], dtype=np.int64)
    lhs = np.abs(2 * scale * (cand @ masks) + offset)
    semistable = (lhs <= rhs).all(axis=1)
    stable = (lhs < rhs).all(axis=1)
    return cand, semistable, stable, (lhs, rhs, masks)


def semistable_set(g: Graph, phi: Polarization, G, margin: int = 1) -> list[tuple]:
    kept = _kept_of(G)
    cand, semistable, _, _ = _scan(g, phi, kept, margin)
    return sorted(tuple(int(x) for x in row) for row in cand[semistable])


def is_nondegenerate(g: Graph, phi: Polarization) -> Nondegeneracy:
    """Check that no spanning subgraph, connected or not, has a strictly semistable degree."""
    _integral_total(phi)
    # largest subgraphs first so witnesses land on the most informative fiber
    for sub in sorted(spanning_subgraphs(g), key=lambda s: (-len(s.kept_edges), s.sort_key())):
        cand, semistable, stable, extra = _scan(g, phi, sub.kept_edges)
        bad = semistable & ~stable
        if bad.any():
            i = int(np.flatnonzero(bad)[-1])
            md = tuple(int(x) for x in cand[i])
            lhs, rhs, masks = extra
            j = int(np.flatnonzero(lhs[i] == rhs)[0])
            witness_set = tuple(v for v, m in zip(g.vertex_ids, masks[:, j]) if m)
            return Nondegeneracy(False, (tuple(sorted(sub.kept_edges)), md, witness_set))
    return Nondegeneracy(True)


def assignment_from_polarization(g: Graph, phi: Polarization, check: bool = True) -> StabilityAssignment:
    """Semistable multidegrees on every connected spanning subgraph.

    With ``check`` the polarization must be nondegenerate.
    """
    if check:
        nd = is_nondegenerate(g, phi)
        if not nd:
            raise GraphError(f"polarization is degenerate: {nd.witness}")
    entries = []
    for sub in spanning_subgraphs(g, connected_only=True):
        for md in semistable_set(g, phi, sub.kept_edges):
            entries.append((sub.kept_edges, md))
    return StabilityAssignment(g, _integral_total(phi), frozenset(entries))


def canonical_polarization(g: Graph, d: int) -> Polarization:
    """``d / (2g - 2)`` times the canonical multidegree ``2 g(v) - 2 + val(v)``."""
    genus = graph_genus(g)
    if 2 * genus - 2 == 0:
        raise GraphError("canonical polarization needs 2g - 2 != 0")
    factor = Fraction(d, 2 * genus - 2)
    return Polarization(g, tuple(factor * (2 * v.genus - 2 + g.valence(v.id)) for v in g.vertices))


def ibd_polarization(g: Graph) -> Polarization:
    """Polarization of total ``g(Gamma)`` whose assignment is the break-divisor one."""
    genus = graph_genus(g)
    k = genus + len(g.vertices)
    if 2 * k - 2 == 0:
        return Polarization(g, (Fraction(genus),))
    factor = Fraction(k, 2 * k - 2)
    return Polarization(g, tuple(factor * (2 * v.genus + g.valence(v.id)) - 1 for v in g.vertices))


def vine_polarization(t: int, d: int, lam: int, graph: Graph | None = None) -> Polarization:
    """Polarization on a ``t``-edge vine inducing the assignment with tree value
    ``(lam, d + 1 - lam - t)``: the first coordinate is centred on the run
    ``lam, ..., lam + t - 1`` of first-vertex degrees."""
    from .families import banana
    graph = graph or banana(t)
    shift = Fraction(t - 1, 2)
    return Polarization(graph, (lam + shift, d - lam - shift))


def break_divisors(g: Graph, G) -> list[tuple]:
    """Genus labels plus one chip per surplus edge, over all trees and orientations."""
    kept = _kept_of(G)
    if not is_connected(g, kept):
        raise GraphError("break divisors need a connected subgraph")
    base = [v.genus for v in g.vertices]
    out = set()
    for tree in spanning_trees(g, kept):
        surplus = [g.edge(e) for e in sorted(kept - tree)]
        for heads in itertools.product(*[(e.u,) if e.is_loop else (e.u, e.v) for e in surplus]):
            md = list(base)
            for v in heads:
                md[g.position(v)] += 1
            out.add(tuple(md))
    return sorted(out)


def ibd_assignment(g: Graph) -> StabilityAssignment:
    entries = []
    for sub in spanning_subgraphs(g, connected_only=True):
        entries.extend((sub.kept_edges, md) for md in break_divisors(g, sub.kept_edges))
    return StabilityAssignment(g, graph_genus(g), frozenset(entries))


_PRIMES = (101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191)


def random_nondegenerate(g: Graph, d: int, seed: int, max_tries: int = 50,
                         denominator: int | None = None) -> Polarization:
    """Seeded random nondegenerate polarization of total ``d``.

    Values have denominator ``2 |E| p`` for a prime ``p`` drawn from the seed;
    the last coordinate absorbs the total. Raises after ``max_tries`` misses.
    """
    rng = random.Random(seed)
    n = len(g.vertices)
    for _ in range(max_tries):
        den = denominator or 2 * max(len(g.edges), 1) * rng.choice(_PRIMES)
        spread = max(len(g.edges), 1) * den
        centre = Fraction(d, n)
        vals = [centre + Fraction(rng.randint(-spread, spread), den) for _ in range(n - 1)]
        vals.append(Fraction(d) - sum(vals, Fraction(0)))
        phi = Polarization(g, tuple(vals))
        if is_nondegenerate(g, phi):
            return phi
    raise RuntimeError(f"no nondegenerate polarization found in {max_tries} tries")
