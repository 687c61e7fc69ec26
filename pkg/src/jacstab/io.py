"""JSON documents for graphs, assignments, polarizations and categories.

Every document carries ``"version": "1"``. Rationals are written as
``"p/q"`` strings in lowest terms (integers as ``"p"``), never as floats.
Parse errors are :class:`DocumentError` with the JSON path of the offending
value.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Any

from .assignments import StabilityAssignment
from .graphs import Edge, Graph, GraphError, Leg, Vertex
from .polarizations import Polarization

VERSION = "1"


class DocumentError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


def _require(doc: Any, key: str, path: str, kind=None):
    if not isinstance(doc, dict) or key not in doc:
        raise DocumentError(path, f"missing field '{key}'")
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise DocumentError(f"{path}.{key}", f"expected {getattr(kind, '__name__', kind)}")
    return value


def _int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError(path, "expected an integer")
    return value


def _check_version(doc, path="$"):
    if not isinstance(doc, dict):
        raise DocumentError(path, "expected an object")
    if doc.get("version") != VERSION:
        raise DocumentError(f"{path}.version", f"unsupported version {doc.get('version')!r}")


def dumps(doc) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def digest(*docs) -> str:
    h = hashlib.sha256()
    for d in docs:
        h.update(json.dumps(d, sort_keys=True, separators=(",", ":")).encode())
    return h.hexdigest()[:16]


# -- rationals --------------------------------------------------------------------

def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(text, path: str) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise DocumentError(path, "rationals must be 'p/q' strings")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise DocumentError(path, f"not a rational: {text!r}") from None


# -- graphs --------------------------------------------------------------------

def graph_to_doc(g: Graph) -> dict:
    return {
        "version": VERSION,
        "vertices": [{"id": v.id, "genus": v.genus} for v in g.vertices],
        "edges": [{"id": e.id, "ends": [e.u, e.v]} for e in g.edges],
        "legs": [{"id": l.id, "vertex": l.vertex, "label": l.label} for l in g.legs],
    }


def parse_graph(doc, path: str = "$") -> Graph:
    _check_version(doc, path)
    verts = []
    for i, v in enumerate(_require(doc, "vertices", path, list)):
        p = f"{path}.vertices[{i}]"
        vid = _require(v, "id", p, str)
        verts.append(Vertex(vid, _int(_require(v, "genus", p), f"{p}.genus")))
    ids = [v.id for v in verts]
    dup = next((x for x in ids if ids.count(x) > 1), None)
    if dup is not None:
        raise DocumentError(f"{path}.vertices", f"duplicate vertex id {dup!r}")
    known = set(ids)
    edges, seen = [], set()
    for i, e in enumerate(doc.get("edges", [])):
        p = f"{path}.edges[{i}]"
        eid = _require(e, "id", p, str)
        ends = _require(e, "ends", p, list)
        if len(ends) != 2:
            raise DocumentError(f"{p}.ends", "an edge has exactly two ends")
        for end in ends:
            if end not in known:
                raise DocumentError(f"{p}.ends", f"edge {eid!r} references unknown vertex {end!r}")
        if eid in seen:
            raise DocumentError(f"{p}.id", f"duplicate edge id {eid!r}")
        seen.add(eid)
        edges.append(Edge(eid, ends[0], ends[1]))
    legs = []
    for i, l in enumerate(doc.get("legs", [])):
        p = f"{path}.legs[{i}]"
        vertex = _require(l, "vertex", p, str)
        if vertex not in known:
            raise DocumentError(f"{p}.vertex", f"leg references unknown vertex {vertex!r}")
        legs.append(Leg(_require(l, "id", p, str), vertex, _int(_require(l, "label", p), f"{p}.label")))
    try:
        return Graph(tuple(verts), tuple(edges), tuple(legs))
    except GraphError as exc:
        raise DocumentError(path, str(exc)) from None


# -- assignments -----------------------------------------------------------------

def assignment_to_doc(a: StabilityAssignment) -> dict:
    return {
        "version": VERSION,
        "graph": graph_to_doc(a.graph),
        "degree": a.degree,
        "entries": [{"kept": kept, "multidegree": dict(zip(a.graph.vertex_ids, md))}
                    for kept, md in a.sorted_entries()],
    }


def parse_assignment(doc, path: str = "$") -> tuple[StabilityAssignment, list]:
    """Returns the assignment and the list of entries that appeared more than once."""
    _check_version(doc, path)
    g = parse_graph(_require(doc, "graph", path), f"{path}.graph")
    degree = _int(_require(doc, "degree", path), f"{path}.degree")
    entries, duplicates = [], []
    seen = set()
    for i, ent in enumerate(_require(doc, "entries", path, list)):
        p = f"{path}.entries[{i}]"
        kept = _require(ent, "kept", p, list)
        for j, e in enumerate(kept):
            if e not in g.edge_ids:
                raise DocumentError(f"{p}.kept[{j}]", f"unknown edge {e!r}")
        md_doc = _require(ent, "multidegree", p, dict)
        if set(md_doc) != set(g.vertex_ids):
            raise DocumentError(f"{p}.multidegree", "keys must be exactly the vertex ids")
        md = tuple(_int(md_doc[v], f"{p}.multidegree.{v}") for v in g.vertex_ids)
        item = (frozenset(kept), md)
        if item in seen:
            duplicates.append({"path": p, "kept": sorted(kept), "multidegree": list(md)})
        seen.add(item)
        entries.append(item)
    try:
        return StabilityAssignment(g, degree, frozenset(entries)), duplicates
    except GraphError as exc:
        raise DocumentError(f"{path}.entries", str(exc)) from None


# -- polarizations and m-maps ------------------------------------------------------

def polarization_to_doc(phi: Polarization, include_graph: bool = True) -> dict:
    doc = {"version": VERSION, "values": {v: format_rational(x) for v, x in phi.as_dict().items()}}
    if include_graph:
        doc["graph"] = graph_to_doc(phi.graph)
    return doc


def parse_polarization(doc, graph: Graph | None = None, path: str = "$") -> Polarization:
    """The graph comes from the document, or from ``graph`` when given."""
    _check_version(doc, path)
    if graph is None:
        graph = parse_graph(_require(doc, "graph", path), f"{path}.graph")
    values = _require(doc, "values", path, dict)
    if set(values) != set(graph.vertex_ids):
        raise DocumentError(f"{path}.values", "keys must be exactly the vertex ids")
    return Polarization(graph, tuple(parse_rational(values[v], f"{path}.values.{v}")
                                     for v in graph.vertex_ids))


def parse_m_map(doc, graph: Graph, path: str = "$") -> dict:
    _check_version(doc, path)
    m = _require(doc, "m", path, dict)
    out = {}
    for e in graph.edge_ids:
        if e not in m:
            raise DocumentError(f"{path}.m", f"missing edge {e!r}")
        val = _int(m[e], f"{path}.m.{e}")
        if val < 0:
            raise DocumentError(f"{path}.m.{e}", "subdivision counts are non-negative")
        out[e] = val
    extra = set(m) - set(graph.edge_ids)
    if extra:
        raise DocumentError(f"{path}.m", f"unknown edges {sorted(extra)}")
    return out


def m_map_to_doc(m: dict) -> dict:
    return {"version": VERSION, "m": dict(sorted(m.items()))}


# -- categories --------------------------------------------------------------------

def morphism_to_doc(f) -> dict:
    return {"vertex_map": dict(f.vertex_map), "contracted_edges": sorted(f.contracted_edges)}


def category_to_doc(cat, with_morphisms: bool = True) -> dict:
    doc = {"version": VERSION, "genus": cat.genus, "markings": cat.markings,
           "objects": [graph_to_doc(o) for o in cat.objects]}
    if with_morphisms:
        doc["morphisms"] = [{"source": i, "target": j, **morphism_to_doc(f)}
                            for i, j in cat.morphism_pairs() for f in cat.morphisms(i, j)]
    return doc


def universal_to_doc(results, window: int) -> dict:
    out = []
    for u in results:
        out.append([{"degree": a.degree,
                     "entries": [{"kept": k, "multidegree": dict(zip(a.graph.vertex_ids, md))}
                                 for k, md in a.sorted_entries()]}
                    for a in u.assignments])
    return {"version": VERSION, "window": window, "results": out}
