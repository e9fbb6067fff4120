import json

import numpy as np
import pytest

from spikeflow.errors import DomainError
from spikeflow.graph import (
    ChargeFlowGraph,
    KernelKind,
    LeakSemantics,
    expected_adjacency,
    kernel_kind_for,
)
from spikeflow.oracle import exact_edge_probability


def build(n=6, events=((3, 1), (3, 1), (5, 2), (2, 2))):
    src = [e[0] for e in events]
    dst = [e[1] for e in events]
    return ChargeFlowGraph.from_events(n, 4, "remove", src, dst, alpha=1.0, seed=7)


def test_semantics_parse():
    assert LeakSemantics.parse("remove") is LeakSemantics.REMOVE
    assert LeakSemantics.parse(LeakSemantics.STAY) is LeakSemantics.STAY
    assert LeakSemantics.REMOVE.records_diagonal
    assert LeakSemantics.FREEZE.records_diagonal
    assert not LeakSemantics.STAY.records_diagonal
    with pytest.raises(DomainError):
        LeakSemantics.parse("evaporate")


def test_from_events_accumulates():
    g = build()
    assert g.multiplicity(3, 1) == 2
    assert g.multiplicity(1, 3) == 2  # symmetric lookup
    assert g.multiplicity(5, 2) == 1
    assert g.multiplicity(2, 2) == 1
    assert g.multiplicity(4, 4) == 0
    assert g.trace() == 1
    assert g.offdiagonal_mass() == 3


def test_dense_and_sparse_agree():
    g = build()
    dense = g.to_dense()
    assert np.array_equal(dense, dense.T)
    assert np.array_equal(dense, g.to_sparse().toarray())
    assert dense[2, 0] == 2


def test_truncate_drops_elite_rows():
    g = build()
    t = g.truncate(0.25)  # r = ceil(0.25 * 6) = 2: kill ranks 1 and 2
    assert t.n == g.n
    assert t.multiplicity(3, 1) == 0
    assert t.multiplicity(5, 2) == 0
    assert t.multiplicity(2, 2) == 0
    # nothing with both endpoints above rank 2 existed, so empty
    assert not t.entries
    with pytest.raises(DomainError):
        g.truncate(0.0)
    with pytest.raises(DomainError):
        g.truncate(1.0)


def test_degrees_count_both_endpoints():
    g = build()
    d = g.degrees()
    assert d.out_degree[2] == 2  # vertex 3 sends twice
    assert d.in_degree[0] == 2  # vertex 1 receives twice
    assert d.total_degree[1] == 3  # vertex 2: one leak (x2) + one receive
    assert d.total_degree.sum() == 2 * (g.trace() + g.offdiagonal_mass())


def test_save_load_roundtrip(tmp_path):
    g = build()
    p = tmp_path / "graph.csv"
    g.save(p)
    back = ChargeFlowGraph.load(p)
    assert back.entries == g.entries
    assert back.n == g.n and back.m == g.m
    assert back.semantics is g.semantics
    assert back.alpha == g.alpha and back.seed == g.seed
    meta = json.loads((tmp_path / "graph.json").read_text())
    assert meta["n"] == 6 and meta["semantics"] == "remove"


def test_save_is_byte_deterministic(tmp_path):
    g = build()
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    g.save(a)
    g.save(b)
    assert a.read_bytes() == b.read_bytes()
    text = a.read_text()
    assert "\r" not in text
    assert text.splitlines()[0] == "i,j,multiplicity"


def test_load_rejects_upper_triangle(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("i,j,multiplicity\n1,3,2\n")
    (tmp_path / "bad.json").write_text(
        json.dumps({"n": 6, "m": 4, "alpha": 1.0, "semantics": "remove", "seed": 7})
    )
    with pytest.raises(DomainError):
        ChargeFlowGraph.load(p)


def test_expected_adjacency_paper_kernel():
    a = expected_adjacency(5, 10, KernelKind.PAPER)
    assert a[0, 0] == pytest.approx(10.0)
    assert a[4, 2] == pytest.approx(10 / 25)
    assert np.array_equal(a, a.T)


@pytest.mark.parametrize("kind,semantics", [("exact_remove", "remove"), ("exact_stay", "stay")])
def test_expected_adjacency_exact_kernels(kind, semantics):
    n, m = 40, 80
    a = expected_adjacency(n, m, kind)
    probs, _ = exact_edge_probability(n, semantics)
    assert np.allclose(a, m * probs)


def test_kernel_kind_for():
    assert kernel_kind_for("remove") is KernelKind.EXACT_REMOVE
    assert kernel_kind_for("freeze") is KernelKind.EXACT_REMOVE
    assert kernel_kind_for("stay") is KernelKind.EXACT_STAY


def test_graph_validation():
    with pytest.raises(DomainError):
        ChargeFlowGraph(n=0, m=1, semantics=LeakSemantics.REMOVE, entries={})
