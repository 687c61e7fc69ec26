import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacstab import chipfiring as cf
from jacstab.acceptance import vine_family_member
from jacstab.assignments import is_stability_assignment, verify_condition_one
from jacstab.families import banana, complete, dumbbell, gsym, path, rose, theta
from jacstab.graphs import GraphError, graph_genus, make_graph, spanning_subgraphs
from jacstab.polarizations import (STABLE, STRICTLY_SEMISTABLE, UNSTABLE, Polarization,
                                   assignment_from_polarization, break_divisors,
                                   canonical_polarization, classify, enumeration_box,
                                   ibd_assignment, ibd_polarization, is_nondegenerate,
                                   random_nondegenerate, semistable_set, vine_polarization)

from strategies import multigraphs

B2 = banana(2)
FULL, T1 = frozenset({"e1", "e2"}), frozenset({"e1"})
HALF = Polarization(B2, (F(1, 2), F(-1, 2)))
ZERO = Polarization(B2, (0, 0))


def classify_literal(g, phi, kept, md):
    """Direct transcription of the inequality over vertex subsets, with loops inside V."""
    import itertools
    verdict = STABLE
    vids = g.vertex_ids
    for r in range(1, len(vids)):
        for vs in itertools.combinations(vids, r):
            s = sum(F(md[g.position(v)]) - phi.values[g.position(v)] for v in vs)
            inner = sum(1 for e in g.edges if e.id not in kept and e.u in vs and e.v in vs)
            cut_missing = sum(1 for e in g.edges if e.id not in kept and (e.u in vs) != (e.v in vs))
            cut_kept = sum(1 for e in g.edges if e.id in kept and (e.u in vs) != (e.v in vs))
            lhs, rhs = abs(s + inner + F(cut_missing, 2)), F(cut_kept, 2)
            if lhs > rhs:
                return UNSTABLE
            if lhs == rhs:
                verdict = STRICTLY_SEMISTABLE
    return verdict


# -- classify ----------------------------------------------------------------------

def test_classify_examples():
    assert classify(B2, HALF, FULL, (0, 0)).verdict == STABLE
    assert classify(B2, HALF, T1, (0, -1)).verdict == STABLE
    v = classify(B2, ZERO, FULL, (1, -1))
    assert v.verdict == STRICTLY_SEMISTABLE and v.witness == ("v1",)
    assert classify(B2, ZERO, FULL, (3, -3)).verdict == UNSTABLE
    with pytest.raises(GraphError):
        classify(B2, HALF, FULL, (1, 0))


@st.composite
def graph_and_phi(draw):
    g = draw(multigraphs(max_vertices=3, max_edges=4))
    den = draw(st.integers(1, 6))
    vals = [F(draw(st.integers(-12, 12)), den) for _ in g.vertices]
    vals[-1] += draw(st.integers(-2, 2)) - sum(vals)
    return g, Polarization(g, tuple(vals))


@given(graph_and_phi(), st.data())
def test_semistable_set_matches_literal_inequality(gp, data):
    g, phi = gp
    sub = data.draw(st.sampled_from(spanning_subgraphs(g)))
    found = semistable_set(g, phi, sub.kept_edges)
    for md in found:
        assert classify(g, phi, sub.kept_edges, md).verdict != UNSTABLE
        assert classify_literal(g, phi, sub.kept_edges, md) != UNSTABLE
    # box soundness: widening the box finds nothing new
    assert semistable_set(g, phi, sub.kept_edges, margin=3) == found
    for md in found:
        for (lo, hi), x in zip(enumeration_box(g, phi), md):
            assert lo <= x <= hi


@given(graph_and_phi(), st.data())
def test_classify_matches_literal(gp, data):
    g, phi = gp
    sub = data.draw(st.sampled_from(spanning_subgraphs(g)))
    total = int(phi.total) - (len(g.edges) - len(sub.kept_edges))
    head = data.draw(st.lists(st.integers(-4, 4), min_size=len(g.vertices) - 1, max_size=len(g.vertices) - 1))
    md = tuple(head) + (total - sum(head),)
    assert classify(g, phi, sub.kept_edges, md).verdict == classify_literal(g, phi, sub.kept_edges, md)


# -- semistable sets and nondegeneracy -------------------------------------------------

def test_semistable_examples():
    assert semistable_set(B2, HALF, FULL) == [(0, -0), (1, -1)]
    assert semistable_set(B2, HALF, T1) == [(0, -1)]
    assert semistable_set(B2, HALF, frozenset()) == []


def test_nondegeneracy_examples():
    assert is_nondegenerate(B2, HALF)
    nd = is_nondegenerate(B2, ZERO)
    assert not nd and nd.witness == (("e1", "e2"), (1, -1), ("v1",))
    assert is_nondegenerate(theta(), canonical_polarization(theta(), 2))
    with pytest.raises(GraphError):
        is_nondegenerate(B2, Polarization(B2, (F(1, 2), 0)))


@given(graph_and_phi())
def test_nondegenerate_gives_stability_assignment(gp):
    g, phi = gp
    if is_nondegenerate(g, phi):
        a = assignment_from_polarization(g, phi)
        assert is_stability_assignment(a)
        for sub in spanning_subgraphs(g, connected_only=False):
            if not sub.is_connected:
                assert semistable_set(g, phi, sub.kept_edges) == []


# -- induced assignments --------------------------------------------------------------

def test_assignment_examples():
    a = assignment_from_polarization(B2, HALF)
    assert a.key() == vine_family_member(2, 0, 0).key()
    for t in range(1, 6):
        for d in (0, 1, 2):
            for lam in (-2, 0, 3):
                phi = vine_polarization(t, d, lam)
                assert assignment_from_polarization(banana(t), phi).key() == vine_family_member(t, d, lam).key()
    r = rose(3)
    a = assignment_from_polarization(r, Polarization(r, (2,)))
    assert is_stability_assignment(a) and len(a) == 8
    with pytest.raises(GraphError):
        assignment_from_polarization(B2, ZERO)


def test_literal_vine_formula_is_off_by_t_minus_one():
    # the mirrored formula lam - (t-1)/2 yields the family indexed by lam - t + 1
    for t in range(2, 6):
        lam = 1
        phi = Polarization(banana(t), (lam - F(t - 1, 2), -lam + F(t - 1, 2)))
        a = assignment_from_polarization(banana(t), phi)
        assert a.key() == vine_family_member(t, 0, lam - t + 1).key()


# -- special polarizations ------------------------------------------------------------

def test_canonical_examples():
    assert canonical_polarization(theta(), 2).values == (1, 1)
    assert canonical_polarization(dumbbell(), 2).values == (1, 1)
    assert canonical_polarization(complete(4), 0).values == (0, 0, 0, 0)
    with pytest.raises(GraphError):
        canonical_polarization(rose(1), 1)


@pytest.mark.parametrize("name,g,degrees", [
    ("gsym2", gsym(2)[0], range(6)), ("gsym3", gsym(3)[0], range(6)), ("theta", theta(), range(6)),
    ("dumbbell", dumbbell(), range(6)), ("gsym4", gsym(4)[0], (2, 3))])
def test_canonical_gcd_criterion(name, g, degrees):
    genus = graph_genus(g)
    for d in degrees:
        phi = canonical_polarization(g, d)
        assert phi.total == d
        assert bool(is_nondegenerate(g, phi)) == (math.gcd(d - genus + 1, 2 * genus - 2) == 1)


def test_ibd_examples():
    assert ibd_polarization(theta()).values == (1, 1)
    assert ibd_polarization(make_graph({"v": 3})).values == (3,)
    phi = ibd_polarization(banana(2, genera=(1, 0)))
    assert phi.total == 2 and phi.values == (F(5, 3), F(1, 3))


def test_break_divisor_examples():
    assert break_divisors(theta(), theta().edge_ids) == [(0, 2), (1, 1), (2, 0)]
    t = path(3, genera=(1, 0, 2))
    assert break_divisors(t, t.edge_ids) == [(1, 0, 2)]
    with pytest.raises(GraphError):
        break_divisors(theta(), ())


@given(multigraphs(genera=True))
def test_break_divisors_count_and_ibd_agreement(g):
    for sub in spanning_subgraphs(g, connected_only=True):
        assert len(break_divisors(g, sub.kept_edges)) == cf.complexity(sub)
    a = ibd_assignment(g)
    assert verify_condition_one(a).passed and is_stability_assignment(a)
    assert assignment_from_polarization(g, ibd_polarization(g)).key() == a.key()


# -- random generator ----------------------------------------------------------------

def test_random_nondegenerate_behaviour():
    phi = random_nondegenerate(B2, 0, 1)
    assert is_nondegenerate(B2, phi) and phi.total == 0
    assert random_nondegenerate(B2, 0, 1) == phi
    with pytest.raises(RuntimeError):
        random_nondegenerate(B2, 0, 1, max_tries=5, denominator=1)
