"""Named graphs used throughout the tests, demos and corpus."""

from __future__ import annotations

from .graphs import Edge, Graph, GraphError, Vertex, make_graph


def banana(t: int, genera: tuple[int, int] = (0, 0)) -> Graph:
    """Two vertices joined by ``t`` parallel edges (dual graph of a vine curve)."""
    return make_graph({"v1": genera[0], "v2": genera[1]},
                      [(f"e{i}", "v1", "v2") for i in range(1, t + 1)])


def theta() -> Graph:
    return banana(3)


def dumbbell(genera: tuple[int, int] = (0, 0)) -> Graph:
    return make_graph({"v1": genera[0], "v2": genera[1]},
                      [("e1", "v1", "v1"), ("e2", "v1", "v2"), ("e3", "v2", "v2")])


def rose(t: int, genus: int = 0) -> Graph:
    """One vertex with ``t`` loops (dual graph of an irreducible curve)."""
    return make_graph({"v1": genus}, [(f"e{i}", "v1", "v1") for i in range(1, t + 1)])


def cycle(n: int) -> Graph:
    vs = [f"v{i}" for i in range(1, n + 1)]
    if n == 1:
        return rose(1)
    return make_graph(vs, [(f"e{i}", vs[i - 1], vs[i % n]) for i in range(1, n + 1)])


def path(n: int, genera: tuple[int, ...] | None = None) -> Graph:
    vs = [f"v{i}" for i in range(1, n + 1)]
    genera = genera or (0,) * n
    return make_graph(dict(zip(vs, genera)),
                      [(f"e{i}", vs[i - 1], vs[i]) for i in range(1, n)])


def complete(n: int) -> Graph:
    vs = [f"v{i}" for i in range(1, n + 1)]
    pairs = [(vs[i], vs[j]) for i in range(n) for j in range(i + 1, n)]
    return make_graph(vs, [(f"e{k}", a, b) for k, (a, b) in enumerate(pairs, start=1)])


def gsym(g: int) -> tuple[Graph, frozenset]:
    """The trivalent graph on 2g-2 genus-0 vertices with its cyclic symmetry.

    Vertex ``v_i`` is joined to ``v_{i+1}`` by ``e_i`` (indices mod 2g-2) and
    ``v_j`` to ``v_{j+g-1}`` by the chord ``f_j`` for ``j = 1..g-1``. Returns
    the graph and the edge set of the cycle formed by the ``e_i``.
    """
    if g < 2:
        raise GraphError("gsym needs g >= 2")
    n = 2 * g - 2
    vs = [f"v{i}" for i in range(1, n + 1)]
    edges = [Edge(f"e{i}", vs[i - 1], vs[i % n]) for i in range(1, n + 1)]
    chords = [Edge(f"f{j}", vs[j - 1], vs[(j + g - 2) % n]) for j in range(1, g)]
    graph = Graph(tuple(Vertex(v, 0) for v in vs), tuple(edges + chords))
    return graph, frozenset(e.id for e in edges)
