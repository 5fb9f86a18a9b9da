import json

import jsonschema
import numpy as np
import pytest

from gedsearch.graph import SelfLoop, random_graph
from gedsearch.instances import synthetic_dataset, worked_example_pair
from gedsearch.io import (REPORT_COLUMNS, DirectedUnsupported, MissingLabelAttr, SchemaViolation,
                          XmlMalformed, load_dataset, load_manifest, load_schema, parse_gxl,
                          parse_native, read_graph, write_dataset, write_native, write_report)
from gedsearch.search import SearchConfig, SearchReport, fori_sim

ONE_NODE = b"""<?xml version="1.0"?>
<gxl><graph id="m1" edgeids="false" edgemode="undirected">
<node id="_1"><attr name="chem"><string>C</string></attr></node>
</graph></gxl>"""

AIDS_STYLE = b"""<?xml version="1.0"?>
<gxl><graph id="aids1" edgeids="false" edgemode="undirected">
<node id="_1"><attr name="symbol"><string>C  </string></attr><attr name="charge"><int>0</int></attr><attr name="x"><float>1.5</float></attr></node>
<node id="_2"><attr name="symbol"><string>O</string></attr><attr name="charge"><int>0</int></attr><attr name="x"><float>2.0</float></attr></node>
<node id="_3"><attr name="symbol"><string>C</string></attr><attr name="charge"><int>0</int></attr><attr name="x"><float>0.5</float></attr></node>
<node id="_4"><attr name="symbol"><string>N</string></attr><attr name="charge"><int>1</int></attr><attr name="x"><float>3.0</float></attr></node>
<node id="_5"><attr name="symbol"><string>C</string></attr><attr name="charge"><int>0</int></attr><attr name="x"><float>4.0</float></attr></node>
<edge from="_1" to="_2"><attr name="valence"><int>2</int></attr></edge>
<edge from="_1" to="_3"><attr name="valence"><int>1</int></attr></edge>
<edge from="_3" to="_4"><attr name="valence"><int>1</int></attr></edge>
<edge from="_4" to="_5"><attr name="valence"><int>1</int></attr></edge>
</graph></gxl>"""

PROTEIN = b"""<gxl><graph id="p" edgemode="undirected">
<node id="1"><attr name="type"><int>0</int></attr><attr name="sequence"><string>KITTEN</string></attr></node>
<node id="2"><attr name="type"><int>1</int></attr><attr name="sequence"><string>SIT</string></attr></node>
<node id="3"><attr name="type"><int>2</int></attr><attr name="sequence"><string>ABC</string></attr></node>
<edge from="1" to="2"><attr name="frequency"><int>1</int></attr><attr name="type0"><int>1</int></attr><attr name="distance0"><double>3.2</double></attr></edge>
<edge from="2" to="3"><attr name="frequency"><int>2</int></attr><attr name="type0"><int>1</int></attr><attr name="type1"><int>0</int></attr></edge>
</graph></gxl>"""


def test_one_node_gxl():
    g = parse_gxl(ONE_NODE)
    assert g.n == 1 and g.node_labels == ("C",)
    assert g.original_ids == ("_1",)
    assert g.name == "m1"


def test_self_loop():
    data = ONE_NODE.replace(b"</graph>", b'<edge from="_1" to="_1"/></graph>')
    with pytest.raises(SelfLoop):
        parse_gxl(data)


def test_aids_sample_round_trip():
    g = parse_gxl(AIDS_STYLE, "aids")
    assert (g.n, g.m) == (5, 4)
    assert g.node_labels[0] == "C"
    assert sorted(g.edge_labels) == [1, 1, 1, 2]
    assert g.node_attrs[0] == {"charge": 0, "x": 1.5}
    back = parse_native(write_native(g))
    assert back == g
    assert back.node_attrs == g.node_attrs
    assert back.original_ids == g.original_ids
    # auto-detection picks the same attributes
    assert parse_gxl(AIDS_STYLE).same_structure(g)


def test_gxl_attribute_order_independent():
    swapped = AIDS_STYLE.replace(
        b'<attr name="symbol"><string>O</string></attr><attr name="charge"><int>0</int></attr>',
        b'<attr name="charge"><int>0</int></attr><attr name="symbol"><string>O</string></attr>')
    swapped = swapped.replace(b'<edge from="_1" to="_2">', b'<edge to="_2" from="_1">')
    assert swapped != AIDS_STYLE
    assert parse_gxl(swapped, "aids") == parse_gxl(AIDS_STYLE, "aids")


def test_gxl_errors():
    with pytest.raises(XmlMalformed):
        parse_gxl(b"<gxl><graph><node id='1'>")
    with pytest.raises(DirectedUnsupported):
        parse_gxl(ONE_NODE.replace(b'edgemode="undirected"', b'edgemode="directed"'))
    with pytest.raises(MissingLabelAttr):
        parse_gxl(ONE_NODE, "aids")


def test_protein_preset():
    g = parse_gxl(PROTEIN, "protein")
    assert g.node_labels == ((0, "KITTEN"), (1, "SIT"), (2, "ABC"))
    assert g.edge_labels == ((1, None), (1, 0))
    assert g.edge_attrs[0] == {"distance0": 3.2}
    assert parse_native(write_native(g)) == g


def test_native_examples():
    g = parse_native(b'{"nodes":[{"id":0,"label":"A"}],"edges":[]}')
    assert g.n == 1 and g.node_labels == ("A",)
    with pytest.raises(SchemaViolation):
        parse_native(b'{"nodes":[{"id":0}],"edges":[]}')
    with pytest.raises(SchemaViolation):
        parse_native(b'{"nodes":[{"id":0,"label":"A"}],"edges":[{"u":0,"label":"-"}]}')
    with pytest.raises(SchemaViolation):
        parse_native(b"[1, 2]")
    with pytest.raises(SchemaViolation):
        parse_native(b"{not json")


def test_native_byte_stable():
    for g in worked_example_pair():
        once = write_native(g)
        assert write_native(parse_native(once)) == once
        assert parse_native(once) == g


def test_native_validates_against_schema():
    schema = load_schema("graph")
    for g in worked_example_pair():
        jsonschema.validate(json.loads(write_native(g)), schema)


def test_random_round_trips():
    rng = np.random.default_rng(17)
    for t in range(100):
        n = int(rng.integers(0, 8))
        g = random_graph(rng, n, name=f"r{t}")
        back = parse_native(write_native(g))
        assert back.same_structure(g)
        assert back == g


def test_report_csv():
    empty = SearchReport("q", 1.0, "unit", ("LS",))
    text = write_report(empty, "csv").decode()
    assert text == "graph_id,stage_reached,ls,bm,forilp,verdict,elapsed_ms\n"
    assert text.strip().split(",") == list(REPORT_COLUMNS)
    dataset, queries = synthetic_dataset(seed=1, size=6, n_queries=1)
    rep = fori_sim(queries[0], dataset, SearchConfig(3, timings=False))
    lines = write_report(rep, "csv").decode().splitlines()
    assert len(lines) == 7
    assert all(line.endswith(",") for line in lines[1:])
    with pytest.raises(ValueError):
        write_report(rep, "xml")


def test_report_json_schema():
    dataset, queries = synthetic_dataset(seed=2, size=6, n_queries=1)
    schema = load_schema("report")
    for timings in (True, False):
        rep = fori_sim(queries[0], dataset, SearchConfig(4, timings=timings))
        jsonschema.validate(json.loads(write_report(rep, "json")), schema)
    jsonschema.validate(json.loads(write_report(SearchReport("q", 0, "unit", ("BM",)))), schema)


def test_dataset_round_trip(tmp_path, monkeypatch):
    dataset, _ = synthetic_dataset(seed=3, size=5, n_queries=1)
    man = write_dataset(tmp_path / "d", dataset, "unit")
    assert man.cost_model == "unit"
    man, loaded = load_dataset(tmp_path / "d")
    assert [gid for gid, _ in loaded] == [gid for gid, _ in dataset]
    assert all(a == b for (_, a), (_, b) in zip(loaded, dataset))
    assert man.alphabet_v
    monkeypatch.setenv("GEDSEARCH_DATA_DIR", str(tmp_path))
    assert len(load_manifest("d").graphs) == 5


def test_dataset_without_manifest(tmp_path):
    (tmp_path / "b.gxl").write_bytes(ONE_NODE)
    g, _ = worked_example_pair()
    (tmp_path / "a.json").write_bytes(write_native(g))
    man, loaded = load_dataset(tmp_path)
    assert [gid for gid, _ in loaded] == ["a", "b"]
    assert read_graph(tmp_path / "b.gxl").name == "m1"


def test_bad_manifest(tmp_path):
    (tmp_path / "manifest.json").write_text('{"graphs": [{"id": "x"}]}')
    with pytest.raises(SchemaViolation):
        load_manifest(tmp_path)
    with pytest.raises(FileNotFoundError):
        load_manifest(tmp_path / "missing")
