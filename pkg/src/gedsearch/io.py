"""Reading and writing graphs, datasets and search reports.

Two graph formats are supported: a small native JSON format, and the GXL
subset used by the molecule and protein collections.  GXL attribute names
differ per collection, so the label mapping is a parameter
(:class:`AttrMap`); presets cover ``aids``, ``muta`` and ``protein``.
"""
from __future__ import annotations

import csv
import io as _io
import json
import os
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .graph import GraphError, LabeledGraph, _label_key, build_graph

__all__ = [
    "XmlMalformed",
    "MissingLabelAttr",
    "DirectedUnsupported",
    "SchemaViolation",
    "AttrMap",
    "ATTR_PRESETS",
    "parse_gxl",
    "parse_native",
    "write_native",
    "read_graph",
    "DatasetManifest",
    "load_manifest",
    "load_dataset",
    "write_dataset",
    "resolve_data_dir",
    "write_report",
    "REPORT_COLUMNS",
    "load_schema",
]

DATA_DIR_ENV = "GEDSEARCH_DATA_DIR"
REPORT_COLUMNS = ("graph_id", "stage_reached", "ls", "bm", "forilp", "verdict", "elapsed_ms")


class XmlMalformed(ValueError):
    pass


class MissingLabelAttr(ValueError):
    pass


class DirectedUnsupported(ValueError):
    pass


class SchemaViolation(ValueError):
    pass


# ---------------------------------------------------------------------------
# GXL


@dataclass(frozen=True)
class AttrMap:
    """Which GXL attributes make up node and edge labels.

    A single name gives a scalar label, several names a tuple label.  When
    ``edge_count`` is set, it names an integer attribute saying how many of
    the ``edge`` slots are present; the rest become ``None`` (protein edges
    carry one or two bond types).  An empty ``edge`` tuple labels every
    edge with ``default_edge``.
    """

    node: tuple = ("label",)
    edge: tuple = ()
    edge_count: str | None = None
    default_edge: object = "-"

    @classmethod
    def coerce(cls, value) -> "AttrMap":
        if value is None or isinstance(value, AttrMap):
            return value
        if isinstance(value, str):
            try:
                return ATTR_PRESETS[value]
            except KeyError:
                raise ValueError(f"unknown attribute preset {value!r}") from None
        return cls(node=tuple(value.get("node", ("label",))), edge=tuple(value.get("edge", ())),
                   edge_count=value.get("edge_count"), default_edge=value.get("default_edge", "-"))


ATTR_PRESETS = {
    "aids": AttrMap(node=("symbol",), edge=("valence",)),
    "muta": AttrMap(node=("chem",), edge=("valence",)),
    "protein": AttrMap(node=("type", "sequence"), edge=("type0", "type1"), edge_count="frequency"),
}

_AUTO_NODE = ("label", "chem", "symbol")
_AUTO_EDGE = ("label", "valence")


def _attr_value(attr: ET.Element):
    if len(attr) == 0:
        return (attr.text or "").strip()
    child = attr[0]
    text = (child.text or "").strip()
    if child.tag == "int":
        return int(text)
    if child.tag in ("float", "double"):
        return float(text)
    if child.tag == "bool":
        return text.lower() == "true"
    return text


def _attrs(elem: ET.Element) -> dict:
    return {a.get("name"): _attr_value(a) for a in elem.findall("attr")}


def _label_from(attrs: dict, names: tuple, what: str, count_attr=None):
    if count_attr is not None:
        count = int(attrs.get(count_attr, len(names)))
        vals = []
        for pos, name in enumerate(names):
            if pos < count:
                if name not in attrs:
                    raise MissingLabelAttr(f"{what} lacks attribute {name!r}")
                vals.append(attrs[name])
            else:
                vals.append(None)
        return tuple(vals)
    missing = [n for n in names if n not in attrs]
    if missing:
        raise MissingLabelAttr(f"{what} lacks attribute {missing[0]!r}")
    return attrs[names[0]] if len(names) == 1 else tuple(attrs[n] for n in names)


def parse_gxl(data: bytes | str, attr_map=None, name: str = "") -> LabeledGraph:
    """Parse one undirected GXL graph.

    Without ``attr_map`` the node label is the first of ``label``, ``chem``
    or ``symbol`` found on the nodes and the edge label the first of
    ``label`` or ``valence`` (else a constant).  Attributes that do not form
    the label are kept in ``node_attrs`` / ``edge_attrs``.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as err:
        raise XmlMalformed(str(err)) from None
    graph = root if root.tag == "graph" else root.find("graph")
    if graph is None:
        raise XmlMalformed("no <graph> element")
    if graph.get("edgemode", "undirected") == "directed":
        raise DirectedUnsupported("directed graphs are not supported")
    name = name or graph.get("id", "")

    node_elems = graph.findall("node")
    edge_elems = graph.findall("edge")
    node_attrs = [_attrs(e) for e in node_elems]
    edge_attrs = [_attrs(e) for e in edge_elems]

    amap = AttrMap.coerce(attr_map)
    if amap is None:
        present = set().union(*node_attrs) if node_attrs else set()
        node_key = next((k for k in _AUTO_NODE if k in present), _AUTO_NODE[0])
        epresent = set().union(*edge_attrs) if edge_attrs else set()
        edge_key = next((k for k in _AUTO_EDGE if k in epresent), None)
        amap = AttrMap(node=(node_key,), edge=(edge_key,) if edge_key else ())

    ids, labels, payloads = [], [], []
    for elem, attrs in zip(node_elems, node_attrs):
        nid = elem.get("id")
        if nid is None:
            raise XmlMalformed("<node> without id")
        ids.append(nid)
        labels.append(_label_from(attrs, amap.node, f"node {nid!r}"))
        payloads.append({k: v for k, v in attrs.items() if k not in amap.node})

    edges, elabels, epayloads = [], [], []
    used = set(amap.edge) | ({amap.edge_count} if amap.edge_count else set())
    for elem, attrs in zip(edge_elems, edge_attrs):
        if elem.get("isdirected", "false") == "true":
            raise DirectedUnsupported("directed edge found")
        u, v = elem.get("from"), elem.get("to")
        if u is None or v is None:
            raise XmlMalformed("<edge> without from/to")
        edges.append((u, v))
        if amap.edge:
            elabels.append(_label_from(attrs, amap.edge, f"edge ({u}, {v})", amap.edge_count))
        else:
            elabels.append(amap.default_edge)
        epayloads.append({k: v for k, v in attrs.items() if k not in used})

    return build_graph(ids, labels, edges, elabels, name=name,
                       node_attrs=payloads, edge_attrs=epayloads)


# ---------------------------------------------------------------------------
# native JSON


def _from_json(value):
    if isinstance(value, list):
        return tuple(_from_json(v) for v in value)
    return value


def _to_json(value):
    if isinstance(value, tuple):
        return [_to_json(v) for v in value]
    return value


_SCALAR = (str, int, float, bool, type(None))


def _check_label(value, where):
    if isinstance(value, list):
        for v in value:
            _check_label(v, where)
    elif not isinstance(value, _SCALAR):
        raise SchemaViolation(f"{where}: label must be a scalar or list, got {type(value).__name__}")


def parse_native(data: bytes | str | dict) -> LabeledGraph:
    """Parse the native JSON form.

    ``{"name"?, "nodes": [{"id", "label", "payload"?}], "edges": [{"u", "v",
    "label", "payload"?}], "alphabets"?: {"node", "edge"}}``.  JSON lists in
    labels become tuples.
    """
    if isinstance(data, dict):
        doc = data
    else:
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as err:
            raise SchemaViolation(f"invalid JSON: {err}") from None
    if not isinstance(doc, dict):
        raise SchemaViolation("top level must be an object")
    nodes, edges = doc.get("nodes"), doc.get("edges", [])
    if not isinstance(nodes, list) or not isinstance(edges, list):
        raise SchemaViolation("'nodes' and 'edges' must be arrays")
    ids, labels, payloads = [], [], []
    for pos, nd in enumerate(nodes):
        if not isinstance(nd, dict) or "id" not in nd or "label" not in nd:
            raise SchemaViolation(f"nodes[{pos}] needs 'id' and 'label'")
        if not isinstance(nd["id"], (str, int)) or isinstance(nd["id"], bool):
            raise SchemaViolation(f"nodes[{pos}].id must be a string or integer")
        _check_label(nd["label"], f"nodes[{pos}]")
        ids.append(nd["id"])
        labels.append(_from_json(nd["label"]))
        payloads.append(dict(nd.get("payload") or {}))
    pairs, elabels, epayloads = [], [], []
    for pos, ed in enumerate(edges):
        if not isinstance(ed, dict) or not {"u", "v", "label"} <= ed.keys():
            raise SchemaViolation(f"edges[{pos}] needs 'u', 'v' and 'label'")
        _check_label(ed["label"], f"edges[{pos}]")
        pairs.append((ed["u"], ed["v"]))
        elabels.append(_from_json(ed["label"]))
        epayloads.append(dict(ed.get("payload") or {}))
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise SchemaViolation("'name' must be a string")
    alpha = doc.get("alphabets")
    if alpha is not None:
        try:
            alpha = ([_from_json(a) for a in alpha["node"]], [_from_json(a) for a in alpha["edge"]])
        except (KeyError, TypeError):
            raise SchemaViolation("'alphabets' needs 'node' and 'edge' arrays") from None
    return build_graph(ids, labels, pairs, elabels, alpha, name=name,
                       node_attrs=payloads, edge_attrs=epayloads)


def graph_to_dict(g: LabeledGraph) -> dict:
    nodes = []
    for v in g.nodes:
        nd = {"id": g.original_ids[v], "label": _to_json(g.node_labels[v])}
        if g.node_attrs and g.node_attrs[v]:
            nd["payload"] = g.node_attrs[v]
        nodes.append(nd)
    edges = []
    for e, (i, j) in enumerate(g.edges):
        ed = {"u": g.original_ids[i], "v": g.original_ids[j], "label": _to_json(g.edge_labels[e])}
        if g.edge_attrs and g.edge_attrs[e]:
            ed["payload"] = g.edge_attrs[e]
        edges.append(ed)
    doc = {"nodes": nodes, "edges": edges}
    if g.alphabet_v != frozenset(g.node_labels) or g.alphabet_e != frozenset(g.edge_labels):
        doc["alphabets"] = {"node": [_to_json(a) for a in sorted_labels(g.alphabet_v)],
                            "edge": [_to_json(a) for a in sorted_labels(g.alphabet_e)]}
    if g.name:
        doc["name"] = g.name
    return doc


def write_native(g: LabeledGraph) -> bytes:
    """Canonical native JSON (sorted keys, edges in canonical order)."""
    return (json.dumps(graph_to_dict(g), sort_keys=True, indent=1) + "\n").encode()


def read_graph(path: str | Path, attr_map=None) -> LabeledGraph:
    """Read a ``.json`` or ``.gxl`` file; the file stem becomes the name if
    the file does not carry one."""
    path = Path(path)
    data = path.read_bytes()
    if path.suffix.lower() == ".gxl":
        g = parse_gxl(data, attr_map)
    else:
        g = parse_native(data)
    if not g.name:
        object.__setattr__(g, "name", path.stem)
    return g


# ---------------------------------------------------------------------------
# datasets


@dataclass
class DatasetManifest:
    """Graph files of a dataset.

    Read from ``manifest.json`` when present (``{"graphs": [{"id", "path"}],
    "cost_model"?, "attr_map"?}``), else every ``*.json`` / ``*.gxl`` file in
    the directory, sorted by name, with the file stem as id.
    """

    root: Path
    graphs: list = field(default_factory=list)
    cost_model: str | None = None
    attr_map: object = None
    alphabet_v: frozenset = frozenset()
    alphabet_e: frozenset = frozenset()


MANIFEST_NAME = "manifest.json"


def resolve_data_dir(path: str | Path | None) -> Path:
    """Relative paths that do not exist are tried under ``$GEDSEARCH_DATA_DIR``."""
    base = os.environ.get(DATA_DIR_ENV)
    if path is None:
        if not base:
            raise FileNotFoundError(f"no dataset given and {DATA_DIR_ENV} is not set")
        return Path(base)
    path = Path(path)
    if not path.exists() and base and not path.is_absolute():
        alt = Path(base) / path
        if alt.exists():
            return alt
    return path


def load_manifest(root: str | Path) -> DatasetManifest:
    root = resolve_data_dir(root)
    if not root.is_dir():
        raise FileNotFoundError(f"dataset directory {root} not found")
    mpath = root / MANIFEST_NAME
    if mpath.exists():
        try:
            doc = json.loads(mpath.read_text())
            graphs = [(str(e["id"]), root / e["path"]) for e in doc["graphs"]]
        except (json.JSONDecodeError, KeyError, TypeError) as err:
            raise SchemaViolation(f"bad manifest {mpath}: {err}") from None
        man = DatasetManifest(root, graphs, doc.get("cost_model"), doc.get("attr_map"))
    else:
        files = sorted(p for p in root.iterdir()
                       if p.suffix.lower() in (".json", ".gxl") and p.name != MANIFEST_NAME)
        man = DatasetManifest(root, [(p.stem, p) for p in files])
    ids = [gid for gid, _ in man.graphs]
    if len(ids) != len(set(ids)):
        raise SchemaViolation("dataset graph ids are not unique")
    return man


def load_dataset(root: str | Path | DatasetManifest) -> tuple[DatasetManifest, list[tuple[str, LabeledGraph]]]:
    """Parse every graph of a dataset; fills the manifest's label alphabets."""
    man = root if isinstance(root, DatasetManifest) else load_manifest(root)
    out = []
    av, ae = set(), set()
    for gid, path in man.graphs:
        try:
            g = read_graph(path, man.attr_map)
        except (GraphError, SchemaViolation, XmlMalformed, MissingLabelAttr, DirectedUnsupported) as err:
            raise type(err)(f"{path}: {err}") from None
        av.update(g.node_labels)
        ae.update(g.edge_labels)
        out.append((gid, g))
    man.alphabet_v, man.alphabet_e = frozenset(av), frozenset(ae)
    return man, out


def write_dataset(root: str | Path, graphs, cost_model: str | None = None) -> DatasetManifest:
    """Write ``(id, graph)`` pairs as native JSON files plus a manifest."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    entries = []
    for gid, g in graphs:
        fname = f"{gid}.json"
        (root / fname).write_bytes(write_native(g))
        entries.append({"id": str(gid), "path": fname})
    doc = {"graphs": entries}
    if cost_model:
        doc["cost_model"] = cost_model
    (root / MANIFEST_NAME).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    return load_manifest(root)


# ---------------------------------------------------------------------------
# reports


def load_schema(name: str) -> dict:
    """Shipped JSON schema: ``"report"`` or ``"graph"``."""
    text = resources.files("gedsearch").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def _fmt(v) -> str:
    if v is None:
        return ""
    return f"{float(v):.6f}"


def write_report(report, fmt: str = "json") -> bytes:
    """Serialize a search report as JSON or CSV.

    CSV has one row per dataset graph with columns
    ``graph_id,stage_reached,ls,bm,forilp,verdict,elapsed_ms``; bounds not
    computed for a graph are left empty.
    """
    if fmt == "json":
        return (json.dumps(report.as_dict(), sort_keys=True, indent=1) + "\n").encode()
    if fmt != "csv":
        raise ValueError(f"unknown report format {fmt!r}")
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for rec in report.records:
        b = rec.bounds
        w.writerow([rec.graph_id, rec.stage_reached, _fmt(b.get("LS")), _fmt(b.get("BM")),
                    _fmt(b.get("FORILP")), rec.verdict,
                    "" if rec.elapsed_ms is None else f"{rec.elapsed_ms:.3f}"])
    return buf.getvalue().encode()


def sorted_labels(labels) -> list:
    return sorted(labels, key=_label_key)
