"""Desk-scale acceptance suite.

Each ``criterion_*`` function runs one check end to end and returns a
:class:`CriterionResult`. A criterion passes only when its checks pass and
it finishes inside its time budget.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field

from . import chipfiring as cf
from .assignments import (StabilityAssignment, barmak_check, chip_adding_closure,
                          enumerate_assignments, expected_lift_size, is_stability_assignment,
                          verify_condition_one, verify_condition_two, verify_lift_theorem)
from .corpus import load_graphs
from .families import banana, dumbbell, gsym, theta
from .graphs import (Edge, Graph, Vertex, graph_genus, is_connected, spanning_subgraphs,
                     spanning_trees, subdivide)
from .polarizations import (assignment_from_polarization, break_divisors, canonical_polarization,
                            ibd_assignment, ibd_polarization, is_nondegenerate, random_nondegenerate)
from .universal import (canonical_universal, enumerate_stable_graphs, gcd_obstruction,
                        has_separating_edge, universal_search)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    budget: float | None
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        budget = f" (budget {self.budget:.0f} s)" if self.budget else ""
        return f"[{status}] {self.number}. {self.name}: {self.seconds:.2f} s{budget} {self.detail}"

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "pass": self.passed,
                "budget_seconds": self.budget, "detail": self.detail}


def _timed(number, name, budget, fn) -> CriterionResult:
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    if budget is not None and elapsed >= budget:
        ok = False
        detail = {**detail, "over_budget": True}
    return CriterionResult(number, name, ok, elapsed, budget, detail)


def _corpus_graphs() -> dict:
    return load_graphs()


# 1 ---------------------------------------------------------------------------

def small_multigraphs(max_vertices: int = 4, max_edges: int = 6):
    """Every connected multigraph (loops allowed) on labelled vertices, up to the caps."""
    for n in range(1, max_vertices + 1):
        vids = [f"v{i}" for i in range(1, n + 1)]
        slots = [(a, b) for i, a in enumerate(vids) for b in vids[i:]]
        for k in range(0, max_edges + 1):
            for combo in itertools.combinations_with_replacement(slots, k):
                edges = tuple(Edge(f"e{j + 1}", a, b) for j, (a, b) in enumerate(combo))
                g = Graph(tuple(Vertex(v, 0) for v in vids), edges)
                if is_connected(g):
                    yield g


def criterion_kirchhoff() -> CriterionResult:
    def run():
        count = 0
        for g in small_multigraphs():
            snf = cf.jacobian_group(g).order
            mt = cf.complexity_matrix_tree(g)
            bf = cf.complexity_brute_force(g)
            if not snf == mt == bf:
                return False, {"graph": repr(g), "smith": snf, "matrix_tree": mt, "brute_force": bf}
            count += 1
        return True, {"graphs": count}
    return _timed(1, "Kirchhoff cross-check", 60, run)


# 2 ---------------------------------------------------------------------------

def criterion_oda_seshadri(per_graph: int = 6) -> CriterionResult:
    def run():
        count = 0
        for name, g in _corpus_graphs().items():
            for k in range(per_graph):
                seed = 1000 * count + k
                d = k % 4
                phi = random_nondegenerate(g, d, seed)
                a = assignment_from_polarization(g, phi, check=False)
                c1, c2 = verify_condition_one(a), verify_condition_two(a)
                if not (c1.passed and c2.passed):
                    return False, {"graph": name, "seed": seed, "findings": (c1.findings + c2.findings)[:3]}
                for sub in spanning_subgraphs(g, connected_only=True):
                    if len(a.fiber(sub.kept_edges)) != cf.complexity((g, sub.kept_edges)):
                        return False, {"graph": name, "seed": seed, "subgraph": sorted(sub.kept_edges)}
                count += 1
        return count >= 100, {"polarizations": count}
    return _timed(2, "Oda-Seshadri soundness", 120, run)


# 3 ---------------------------------------------------------------------------

def vine_family_member(t: int, d: int, lam: int) -> StabilityAssignment:
    """Closed form: on a subgraph keeping k of the t edges, the first-vertex
    degrees run over ``lam, ..., lam + k - 1``."""
    g = banana(t)
    entries = []
    for sub in spanning_subgraphs(g, connected_only=True):
        k = len(sub.kept_edges)
        total = d - (t - k)
        entries.extend((sub.kept_edges, (lam + i, total - lam - i)) for i in range(k))
    return StabilityAssignment(g, d, frozenset(entries))


def criterion_vines(window: int = 10) -> CriterionResult:
    def run():
        detail = {}
        for t in range(1, 6):
            for d in (0, 1):
                found = enumerate_assignments(banana(t), d, window)
                lams = [lam for lam in range(-window, window + 1)
                        if abs(d + 1 - lam - t) <= window]
                expected = {vine_family_member(t, d, lam).key() for lam in lams}
                got = {a.key() for a in found}
                shape_ok = all(_vine_shape(a, t) for a in found)
                if got != expected or not shape_ok:
                    return False, {"t": t, "d": d, "found": len(got), "expected": len(expected)}
                detail[f"t={t},d={d}"] = len(got)
        return True, detail
    return _timed(3, "Vine classification", None, run)


def _vine_shape(a: StabilityAssignment, t: int) -> bool:
    top = [md[0] for md in a.fiber(a.graph.edge_ids)]
    consecutive = len(top) == t and top == list(range(top[0], top[0] + t))
    tree_vals = {tuple(a.fiber(tr)) for tr in spanning_trees(a.graph)}
    return consecutive and len(tree_vals) == 1


# 4 ---------------------------------------------------------------------------

def criterion_break_divisors() -> CriterionResult:
    def run():
        for name, g in _corpus_graphs().items():
            for sub in spanning_subgraphs(g, connected_only=True):
                if len(break_divisors(g, sub.kept_edges)) != cf.complexity((g, sub.kept_edges)):
                    return False, {"graph": name, "subgraph": sorted(sub.kept_edges)}
            a = ibd_assignment(g)
            if not is_stability_assignment(a):
                return False, {"graph": name, "reason": "break-divisor assignment fails a condition"}
            phi = ibd_polarization(g)
            if assignment_from_polarization(g, phi).key() != a.key():
                return False, {"graph": name, "reason": "differs from the polarization assignment"}
        return True, {"graphs": len(_corpus_graphs())}
    return _timed(4, "Break divisors", None, run)


# 5 ---------------------------------------------------------------------------

def criterion_lifts() -> CriterionResult:
    def run():
        checked = 0
        for name, g in _corpus_graphs().items():
            a = ibd_assignment(g)
            for values in itertools.product((0, 1, 2), repeat=len(g.edges)):
                sub = subdivide(g, dict(zip(g.edge_ids, values)))
                report = verify_lift_theorem(a, sub)
                if not report.passed or expected_lift_size(a, sub) != cf.complexity(sub.result):
                    return False, {"graph": name, "m": list(values), "findings": report.findings[:3]}
                checked += 1
        return True, {"subdivisions": checked}
    return _timed(5, "Lift theorem", 300, run)


# 6 ---------------------------------------------------------------------------

def criterion_genus_two(window: int = 6) -> CriterionResult:
    def run():
        cat = enumerate_stable_graphs(2, 0)
        detail = {"objects": len(cat.objects)}
        ok = len(cat.objects) == 7
        for d in range(4):
            results = universal_search(2, 0, d, window, cat=cat)
            unobstructed = math.gcd(d - 1, 2) == 1
            ok &= (len(results) > 0) == unobstructed
            ok &= gcd_obstruction(2, d) == (not unobstructed)
            if results:
                can = canonical_universal(cat, d)
                for r in results:
                    for i, obj in enumerate(cat.objects):
                        if not has_separating_edge(obj):
                            ok &= r.assignments[i].key() == can[i].key()
            detail[f"d={d}"] = len(results)
        return bool(ok), detail
    return _timed(6, "Genus-2 universal classification", 600, run)


# 7 ---------------------------------------------------------------------------

def criterion_gcd() -> CriterionResult:
    def run():
        graphs = {"gsym2": gsym(2)[0], "gsym3": gsym(3)[0], "theta": theta(), "dumbbell": dumbbell()}
        mismatches = []
        for name, g in graphs.items():
            genus = graph_genus(g)
            for d in range(6):
                nd = bool(is_nondegenerate(g, canonical_polarization(g, d)))
                if nd != (math.gcd(d - genus + 1, 2 * genus - 2) == 1):
                    mismatches.append((name, d))
        return not mismatches, {"mismatches": mismatches, "cases": 6 * len(graphs)}
    return _timed(7, "Nondegeneracy vs gcd", None, run)


# 8 ---------------------------------------------------------------------------

def random_tree_seed(g: Graph, d: int, rng: random.Random, spread: int = 2) -> StabilityAssignment:
    """One or two random multidegrees on every spanning tree."""
    entries = []
    n = len(g.vertices)
    for tree in spanning_trees(g):
        total = d - (len(g.edges) - len(tree))
        for _ in range(rng.choice((1, 1, 2))):
            md = [rng.randint(-spread, spread) for _ in range(n - 1)]
            md.append(total - sum(md))
            entries.append((tree, tuple(md)))
    return StabilityAssignment(g, d, frozenset(entries))


def genuine_tree_seed(g: Graph, d: int, seed: int) -> StabilityAssignment:
    a = assignment_from_polarization(g, random_nondegenerate(g, d, seed), check=False)
    trees = spanning_trees(g)
    return StabilityAssignment(g, d, frozenset((t, a.fiber(t)[0]) for t in trees))


def criterion_barmak(per_graph: int = 50) -> CriterionResult:
    def run():
        equal_cases = 0
        total = 0
        for name, g in _corpus_graphs().items():
            rng = random.Random(name)
            for k in range(per_graph):
                d = k % 3
                seed = genuine_tree_seed(g, d, k) if k % 2 else random_tree_seed(g, d, rng)
                a = chip_adding_closure(seed)
                report = barmak_check(a)
                if not report.passed:
                    return False, {"graph": name, "seed": k, "findings": report.findings[:3]}
                full = frozenset(g.edge_ids)
                equal_cases += len(a.fiber(full)) == cf.complexity(g)
                total += 1
        return True, {"closures": total, "equality_at_top": equal_cases}
    return _timed(8, "Barmak bounds", None, run)


CRITERIA = (criterion_kirchhoff, criterion_oda_seshadri, criterion_vines, criterion_break_divisors,
            criterion_lifts, criterion_genus_two, criterion_gcd, criterion_barmak)


def run_all() -> list[CriterionResult]:
    return [c() for c in CRITERIA]
