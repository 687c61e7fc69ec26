"""Fixture corpus shipped with the package.

Layout under ``jacstab/corpus_data``::

    graphs/<name>.json          graph documents
    assignments/<name>.json     assignment documents
    polarizations/<name>.json   polarization documents
    mmaps/<name>.json           subdivision maps

``write_fixtures`` regenerates the directory from the builders; the test
suite checks that the shipped files match it byte for byte.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from . import io
from .families import banana, complete, dumbbell, gsym, path, theta
from .graphs import Graph


def _builders() -> dict:
    graphs = {"theta": theta(), "dumbbell": dumbbell(), "k4": complete(4), "path3": path(3),
              "gsym2": gsym(2)[0], "gsym3": gsym(3)[0]}
    for t in range(1, 6):
        graphs[f"banana{t}"] = banana(t)
    from .universal import enumerate_stable_graphs
    for i, obj in enumerate(enumerate_stable_graphs(2, 0).objects):
        graphs[f"g2_{i}"] = obj
    return dict(sorted(graphs.items()))


def _assignments() -> dict:
    from .assignments import StabilityAssignment
    from .polarizations import assignment_from_polarization, vine_polarization
    vine = assignment_from_polarization(banana(3), vine_polarization(3, 0, 0))
    doc = io.assignment_to_doc(vine)
    dup = io.assignment_to_doc(vine)
    dup["entries"].append(dict(dup["entries"][0]))
    broken = StabilityAssignment(banana(2), 0, frozenset(
        (k, md) for k, md in vine_entries_without_one(banana(2))))
    return {"vine_t3_d0_lambda0": doc, "vine_duplicated_entry": dup,
            "banana2_missing_entry": io.assignment_to_doc(broken)}


def vine_entries_without_one(g: Graph) -> list:
    from .polarizations import assignment_from_polarization, vine_polarization
    a = assignment_from_polarization(g, vine_polarization(len(g.edges), 0, 0))
    full = frozenset(g.edge_ids)
    drop = a.fiber(full)[0]
    return [(k, md) for k, md in a.entries if not (k == full and md == drop)]


def _polarizations() -> dict:
    from .polarizations import canonical_polarization, ibd_polarization
    return {"theta_canonical_d0": io.polarization_to_doc(canonical_polarization(theta(), 0)),
            "theta_canonical_d1": io.polarization_to_doc(canonical_polarization(theta(), 1)),
            "dumbbell_ibd": io.polarization_to_doc(ibd_polarization(dumbbell()))}


def _mmaps() -> dict:
    k4 = complete(4)
    return {"k4_all2": io.m_map_to_doc({e: 2 for e in k4.edge_ids}),
            "theta_210": io.m_map_to_doc(dict(zip(theta().edge_ids, (2, 1, 0))))}


def fixture_documents() -> dict:
    """``{relative path: document}`` for every fixture."""
    out = {}
    for name, g in _builders().items():
        out[f"graphs/{name}.json"] = io.graph_to_doc(g)
    for name, doc in _assignments().items():
        out[f"assignments/{name}.json"] = doc
    for name, doc in _polarizations().items():
        out[f"polarizations/{name}.json"] = doc
    for name, doc in _mmaps().items():
        out[f"mmaps/{name}.json"] = doc
    return out


def write_fixtures(root: Path) -> list[Path]:
    written = []
    for rel, doc in fixture_documents().items():
        p = Path(root) / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(io.dumps(doc))
        written.append(p)
    return written


def data_root():
    return resources.files("jacstab") / "corpus_data"


def load_document(rel: str) -> dict:
    return json.loads((data_root() / rel).read_text())


def fixture_names(kind: str) -> list[str]:
    folder = data_root() / kind
    return sorted(p.name[:-5] for p in folder.iterdir() if p.name.endswith(".json"))


def load_graphs() -> dict[str, Graph]:
    return {name: io.parse_graph(load_document(f"graphs/{name}.json")) for name in fixture_names("graphs")}
