import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacstab import chipfiring as cf
from jacstab.acceptance import random_tree_seed, vine_family_member
from jacstab.assignments import (StabilityAssignment, barmak_check, chip_adding_closure,
                                 enumerate_assignments, expected_lift_size, extend_from_trees,
                                 is_stability_assignment, lift_assignment, perturbations,
                                 pushforward, pushforward_compatible, tree_values,
                                 verify_condition_one, verify_condition_two, verify_lift_theorem)
from jacstab.families import banana, complete, cycle, path, rose, theta
from jacstab.graphs import GraphError, contract, identity, spanning_subgraphs, spanning_trees, subdivide
from jacstab.polarizations import assignment_from_polarization, ibd_assignment, random_nondegenerate

FULL = frozenset({"e1", "e2"})
T1, T2 = frozenset({"e1"}), frozenset({"e2"})


def vine0():
    return StabilityAssignment(banana(2), 0, frozenset(
        {(FULL, (0, 0)), (FULL, (1, -1)), (T1, (0, -1)), (T2, (0, -1))}))


# -- construction ----------------------------------------------------------------

def test_entry_totals_are_checked():
    with pytest.raises(GraphError):
        StabilityAssignment(banana(2), 0, frozenset({(T1, (0, 0))}))
    with pytest.raises(GraphError):
        StabilityAssignment(banana(2), 0, frozenset({(frozenset(), (0, -2))}))


# -- condition (1) ---------------------------------------------------------------

def test_condition_one_examples():
    assert verify_condition_one(vine0()).passed
    broken = StabilityAssignment(banana(2), 0, vine0().entries - {(FULL, (1, -1))})
    report = verify_condition_one(broken)
    assert not report.passed
    assert {(tuple(f["subgraph"]), f["vertex"]) for f in report.findings} == {(("e1",), "v1"), (("e2",), "v1")}
    only_top = StabilityAssignment(banana(2), 0, frozenset({(FULL, (0, 0))}))
    assert verify_condition_one(only_top).passed


def test_loop_needs_a_single_successor():
    g = rose(1)
    a = StabilityAssignment(g, 0, frozenset({(frozenset(), (-1,)), (frozenset({"e1"}), (0,))}))
    assert verify_condition_one(a).passed


# -- condition (2) ---------------------------------------------------------------

def test_condition_two_examples():
    assert verify_condition_two(vine0()).passed
    bad = StabilityAssignment(banana(2), 0, frozenset(
        {(FULL, (0, 0)), (FULL, (2, -2)), (T1, (0, -1)), (T2, (0, -1))}))
    report = verify_condition_two(bad)
    assert [f["kind"] for f in report.findings] == ["equivalent_pair"]
    assert cf.equivalent(banana(2), (0, 0), (2, -2))


def test_condition_two_methods_agree():
    a = vine0()
    assert verify_condition_two(a, method="reduce").passed == verify_condition_two(a).passed


def test_is_stability_assignment_examples():
    assert is_stability_assignment(vine0())
    assert not is_stability_assignment(StabilityAssignment(banana(2), 0, frozenset()))
    for t in range(1, 4):
        g = rose(t)
        entries = [(sub.kept_edges, (-(t - len(sub.kept_edges)),)) for sub in spanning_subgraphs(g)]
        assert is_stability_assignment(StabilityAssignment(g, 0, frozenset(entries)))


# -- closures and trees ------------------------------------------------------------

def test_closure_examples():
    seed = StabilityAssignment(banana(2), 0, frozenset({(T1, (0, -1)), (T2, (0, -1))}))
    assert chip_adding_closure(seed).key() == vine0().key()
    assert chip_adding_closure(vine0()).key() == vine0().key()
    single = StabilityAssignment(theta(), 0, frozenset({(frozenset({"e1"}), (0, -2))}))
    closed = chip_adding_closure(single)
    assert len(closed.fiber({"e1"})) == 1
    assert len(closed.fiber({"e1", "e2"})) == len(closed.fiber({"e1", "e3"})) == 2
    assert closed.fiber(theta().edge_ids) == [(0, 0), (1, -1), (2, -2)]
    assert barmak_check(closed).findings[0]["kind"] == "precondition"


@given(st.integers(0, 10 ** 6))
def test_closure_is_monotone_and_idempotent(seed):
    g = theta()
    rng = random.Random(seed)
    a = random_tree_seed(g, 0, rng)
    smaller = StabilityAssignment(g, 0, frozenset(list(a.entries)[: max(1, len(a.entries) // 2)]))
    ca, cs = chip_adding_closure(a), chip_adding_closure(smaller)
    assert cs.entries <= ca.entries
    assert chip_adding_closure(ca).key() == ca.key()
    assert verify_condition_one(ca).passed


def test_extend_from_trees_examples():
    assert extend_from_trees(banana(2), 0, {T1: (0, -1), T2: (0, -1)}).key() == vine0().key()
    assert extend_from_trees(banana(2), 0, {T1: (0, -1), T2: (5, -6)}) is None
    with pytest.raises(GraphError):
        extend_from_trees(banana(2), 0, {T1: (0, 0), T2: (0, -1)})
    tree = path(3)
    single = extend_from_trees(tree, 2, {frozenset(tree.edge_ids): (1, 0, 1)})
    assert len(single) == 1 and is_stability_assignment(single)


def test_tree_values_round_trip():
    a = ibd_assignment(complete(4))
    assert extend_from_trees(a.graph, a.degree, tree_values(a)).key() == a.key()


# -- Barmak bounds ---------------------------------------------------------------

def test_barmak_examples():
    a = vine_family_member(3, 0, 0)
    assert barmak_check(a).passed
    sizes = {len(s.kept_edges): len(a.fiber(s.kept_edges)) for s in spanning_subgraphs(banana(3), True)}
    assert sizes == {3: 3, 1: 1, 2: 2}
    tree = path(2)
    assert barmak_check(StabilityAssignment(tree, 0, frozenset({(frozenset({"e1"}), (0, 0))}))).passed


@given(st.integers(0, 10 ** 6))
def test_barmak_lower_bound_on_random_closures(seed):
    g = [theta(), banana(3), cycle(3)][seed % 3]
    a = chip_adding_closure(random_tree_seed(g, seed % 2, random.Random(seed)))
    assert barmak_check(a).passed


# -- perturbations ---------------------------------------------------------------

def test_perturbation_examples():
    assert perturbations(banana(2), FULL) == {(0, 0)}
    assert perturbations(banana(2), T1) == {(1, 0), (0, 1)}
    assert perturbations(theta(), {"e1"}) == {(2, 0), (1, 1), (0, 2)}


# -- lifts -----------------------------------------------------------------------

def test_lift_examples():
    sub = subdivide(banana(2), {"e1": 1, "e2": 1})
    lifted = lift_assignment(vine0(), sub)
    pos = {v: i for i, v in enumerate(sub.result.vertex_ids)}

    def vec(**kw):
        out = [0] * 4
        for k, x in kw.items():
            out[pos[k.replace("_", "~")]] = x
        return tuple(out)
    expected = {vec(v1=0, v2=0), vec(v1=1, v2=-1), vec(v1=0, v2=-1, e1_1=1), vec(v1=0, v2=-1, e2_1=1)}
    assert set(lifted.multidegrees) == expected and len(lifted) == 4
    assert verify_lift_theorem(vine0(), sub).passed
    assert cf.complexity(sub.result) == 4


def test_lift_with_zero_map_drops_proper_entries():
    sub = subdivide(banana(2), {"e1": 0, "e2": 0})
    assert len(lift_assignment(vine0(), sub)) == 2


def test_theta_lift_count():
    g = theta()
    a = assignment_from_polarization(g, random_nondegenerate(g, 0, 3))
    sub = subdivide(g, {e: 1 for e in g.edge_ids})
    assert expected_lift_size(a, sub) == 12 == cf.complexity(sub.result)
    assert verify_lift_theorem(a, sub).passed


@given(st.lists(st.integers(0, 2), min_size=3, max_size=3))
def test_lift_size_matches_blowup_formula(ms):
    g = theta()
    a = ibd_assignment(g)
    sub = subdivide(g, dict(zip(g.edge_ids, ms)))
    assert len(lift_assignment(a, sub)) == expected_lift_size(a, sub)
    formula = 0
    for s in spanning_subgraphs(g, connected_only=True):
        factor = 1
        for e in g.edge_ids:
            if e not in s.kept_edges:
                factor *= sub.m_of(e)
        formula += factor * cf.complexity(s)
    assert cf.complexity(sub.result) == formula


# -- pushforward ---------------------------------------------------------------------

def test_pushforward_example():
    loop, f = contract(banana(2), {"e1"})
    target = StabilityAssignment(loop, 0, frozenset({(frozenset(), (-1,)), (frozenset(loop.edge_ids), (0,))}))
    assert pushforward(f, FULL, (0, 0)) == (frozenset(loop.edge_ids), (0,))
    assert pushforward(f, T1, (0, -1)) == (frozenset(), (-1,))
    assert pushforward(f, T2, (0, -1)) == (frozenset(loop.edge_ids), (0,))
    assert pushforward_compatible(vine0(), target, f).passed
    shifted = StabilityAssignment(loop, 1, frozenset({(frozenset(), (0,)), (frozenset(loop.edge_ids), (1,))}))
    with pytest.raises(GraphError):
        pushforward_compatible(vine0(), shifted, f)
    wrong = StabilityAssignment(loop, 0, frozenset({(frozenset(), (-1,))}))
    assert not pushforward_compatible(vine0(), wrong, f).passed


def test_identity_compatibility_is_inclusion():
    a = vine0()
    smaller = StabilityAssignment(a.graph, 0, a.entries - {(FULL, (0, 0))})
    f = identity(a.graph)
    assert pushforward_compatible(a, a, f).passed
    assert pushforward_compatible(smaller, a, f).passed
    assert not pushforward_compatible(a, smaller, f).passed


# -- enumeration -----------------------------------------------------------------

def test_enumeration_examples():
    found = enumerate_assignments(banana(2), 0, 3)
    assert [a.fiber(T1)[0][0] for a in found] == list(range(-3, 3))
    for t in range(1, 4):
        # the empty tree carries total -t, so the window must reach it
        assert len(enumerate_assignments(rose(t), 0, t)) == 1
    for a in enumerate_assignments(cycle(3), 0, 1):
        for s in spanning_subgraphs(a.graph, connected_only=True):
            assert len(a.fiber(s.kept_edges)) == cf.complexity(s)


def test_enumeration_contains_polarization_assignments():
    g = theta()
    found = {a.key() for a in enumerate_assignments(g, 0, 4)}
    for seed in range(5):
        a = assignment_from_polarization(g, random_nondegenerate(g, 0, seed))
        if all(abs(x) <= 4 for t in spanning_trees(g) for x in a.fiber(t)[0]):
            assert a.key() in found


def test_enumeration_parallel_matches_serial(monkeypatch):
    serial = [a.key() for a in enumerate_assignments(banana(3), 1, 4)]
    monkeypatch.setenv("JACSTAB_THREADS", "2")
    assert [a.key() for a in enumerate_assignments(banana(3), 1, 4)] == serial
