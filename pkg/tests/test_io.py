import json

import numpy as np
import pytest

from graphlaws import io
from graphlaws.dag import dagoid_of
from graphlaws.dagoid_law import ExponentialDagoidLaw, class_size_law
from graphlaws.errors import InvalidInput
from graphlaws.gaussian import GaussHyper
from graphlaws.laws import ExponentialLaw, armstrong_law
from graphlaws.mcmc import run_chain
from graphlaws.subsets import SubsetVector
from graphlaws.ugraph import UGraph

from conftest import S, dag, graph, vec


def round_trip(obj):
    return json.loads(io.dumps(obj))


def test_graph_round_trip():
    g = graph(4, (0, 1), (1, 2))
    assert io.graph_to_json(g) == {"n": 4, "edges": [[0, 1], [1, 2]]}
    assert io.graph_from_json(round_trip(io.graph_to_json(g))) == g
    sub = UGraph.from_edges(4, [(1, 3)], S(1, 3))
    doc = io.graph_to_json(sub)
    assert doc["vertices"] == [1, 3]
    assert io.graph_from_json(round_trip(doc)) == sub


def test_dag_and_dagoid_round_trip():
    d = dag(3, (0, 2), (1, 2))
    assert io.dag_from_json(round_trip(io.dag_to_json(d))) == d
    dg = dagoid_of(d)
    doc = io.dagoid_to_json(dg)
    assert doc["immoralities"] == [[0, 2, 1]]
    assert io.dagoid_from_json(round_trip(doc)) == dg
    # endpoint order inside a triple does not matter on input
    doc["immoralities"] = [[1, 2, 0]]
    assert io.dagoid_from_json(doc) == dg


def test_subset_vector_format():
    v = vec(3, {(0, 1): 1, (1, 2): 1, (1,): -1})
    doc = io.subset_vector_to_json(v)
    assert doc == {"n": 3, "entries": [{"set": [1], "value": -1}, {"set": [0, 1], "value": 1},
                                       {"set": [1, 2], "value": 1}]}
    assert io.subset_vector_from_json(round_trip(doc)) == v
    real = SubsetVector(2, {1: 0.25, 3: -1.5})
    assert io.subset_vector_from_json(round_trip(io.subset_vector_to_json(real))) == real


def test_law_round_trip(rng):
    omega = SubsetVector.from_dense(rng.normal(size=8), 3)
    law = io.law_from_json(round_trip(io.law_to_json(ExponentialLaw(omega))))
    assert isinstance(law, ExponentialLaw) and law.omega == omega
    table = armstrong_law(3)
    back = io.law_from_json(round_trip(io.law_to_json(table)))
    assert back.entries.keys() == table.entries.keys()
    assert all(back.entries[g] == pytest.approx(lp, abs=1e-15) for g, lp in table.entries.items())
    dl = io.law_from_json(round_trip(io.law_to_json(ExponentialDagoidLaw(omega))), dagoid=True)
    assert isinstance(dl, ExponentialDagoidLaw)
    cs = io.law_from_json(round_trip(io.law_to_json(class_size_law(3))))
    assert len(cs.entries) == 11


def test_hyper_and_data_round_trip(tmp_path, rng):
    h = GaussHyper(4.0, np.array([[2.0, 0.5], [0.5, 1.0]]))
    back = io.hyper_from_json(round_trip(io.hyper_to_json(h)))
    assert back.delta == h.delta and np.array_equal(back.phi, h.phi)
    x = rng.normal(size=(5, 3))
    path = tmp_path / "x.csv"
    io.write_data_csv(path, x, header=True)
    assert np.array_equal(io.read_data_csv(path, header=True), x)
    io.write_data_csv(path, x)
    assert np.array_equal(io.read_data_csv(path, n=3), x)


def test_report_json():
    report = run_chain(SubsetVector.zeros(3), steps=500, seed=0)
    doc = round_trip(io.report_to_json(report, top=3))
    assert doc["steps"] == 500 and len(doc["top_graphs"]) == 3
    assert len(doc["edge_freq"]) == 3
    for item in doc["top_graphs"]:
        io.graph_from_json(item["graph"])


def test_malformed_input(tmp_path):
    with pytest.raises(InvalidInput):
        io.graph_from_json({"n": 3})
    with pytest.raises(InvalidInput):
        io.graph_from_json({"n": 3, "edges": [[0, 5]]})
    with pytest.raises(InvalidInput):
        io.subset_vector_from_json({"n": 2, "entries": [{"set": [0], "value": "x"}]})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InvalidInput):
        io.load_json(bad)
    with pytest.raises(InvalidInput):
        io.load_json(tmp_path / "missing.json")


def test_dumps_is_compact_and_stable():
    obj = {"n": 3, "edges": [[0, 1], [1, 2]]}
    assert io.dumps(obj) == '{"n": 3, "edges": [[0, 1], [1, 2]]}\n'
    long = {"items": [obj] * 10}
    text = io.dumps(long)
    assert text.count("\n") > 2 and json.loads(text) == long
