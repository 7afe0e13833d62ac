import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import factories
from coenroll.projection import (
    StudentGraph,
    binary_view,
    build_graph,
    build_incidence,
    nonzero_density,
    project,
    write_edge_list,
)


def test_two_students_one_section():
    d = factories.dataset([("a", "X"), ("b", "X")])
    dm = build_incidence(d)
    assert len(dm.rows) == 2 and set(dm.cols.tolist()) == {0}
    g = project(dm)
    assert g.m == 1 and g.shared.tolist() == [1]


def test_contact_sum_and_weight():
    d = factories.dataset(
        [("x", "s1"), ("y", "s1"), ("x", "s2"), ("y", "s2")], codes={"s1": "CS3301", "s2": "CS3101"}
    )
    g = build_graph(d)
    assert g.shared.tolist() == [2]
    assert g.contact.tolist() == [4]
    assert g.edge_weights().tolist() == [0.25]


def test_disjoint_enrollments_have_no_edge():
    g = build_graph(factories.dataset([("a", "X"), ("b", "Y")]))
    assert g.n == 2 and g.m == 0


def test_zero_contact_weight():
    g = StudentGraph.from_edges(2, [(0, 1, 1, 0)])
    assert g.edge_weights().tolist() == [1e6]


def test_binary_view_unit_diagonal():
    g = StudentGraph.from_edges(3, [(0, 1, 5, 15)])
    a = binary_view(g).toarray()
    assert a.tolist() == [[1, 1, 0], [1, 1, 0], [0, 0, 1]]
    assert nonzero_density(a) == 5 / 9


def test_entries_equal_enrollments(pinned):
    dm = build_incidence(pinned)
    assert len(dm.rows) == pinned.n_enrollments == int(dm.to_dense().sum())


def test_fifty_students_ten_sections_triple_loop():
    rng = np.random.default_rng(50)
    D = (rng.random((50, 10)) < 0.2).astype(int)
    D[np.arange(50), rng.integers(0, 10, 50)] = 1
    pairs = [(f"S{i:02d}", f"X{j}") for i, j in zip(*np.nonzero(D))]
    g = build_graph(factories.dataset(pairs))
    want = {}
    for i in range(50):
        for j in range(i + 1, 50):
            c = sum(D[i, k] * D[j, k] for k in range(10))
            if c:
                want[(i, j)] = c
    assert dict(zip(zip(g.src.tolist(), g.dst.tolist()), g.shared.tolist())) == want


def test_edge_list_dump():
    g = build_graph(factories.dataset([("a", "X"), ("b", "X"), ("c", "X")]))
    buf = io.StringIO()
    write_edge_list(g, buf)
    assert buf.getvalue().splitlines() == [
        "src_id,dst_id,shared_sections,contact_hours",
        "a,b,1,3",
        "a,c,1,3",
        "b,c,1,3",
    ]


def test_graph_validation():
    with pytest.raises(ValueError):
        StudentGraph.from_edges(2, [(0, 0)])
    with pytest.raises(ValueError):
        StudentGraph.from_edges(2, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        StudentGraph.from_edges(2, [(0, 2)])


def test_induced_subgraph():
    g = StudentGraph.from_edges(4, [(0, 1, 1, 3), (1, 2, 2, 5), (2, 3, 1, 1)])
    h = g.induced([1, 2, 3])
    assert h.node_ids == ("1", "2", "3")
    assert list(zip(h.src.tolist(), h.dst.tolist(), h.contact.tolist())) == [(0, 1, 5), (1, 2, 1)]


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 11), st.integers(0, 7)), min_size=1, max_size=60))
def test_projection_properties(pairs):
    d = factories.dataset([(f"S{s:02d}", f"X{c}") for s, c in pairs])
    dm = build_incidence(d)
    g = project(dm)
    D = dm.to_dense()
    A = D @ D.T
    # symmetric, non-negative, shared count equals the dense product, contact is hour-weighted
    assert np.all(g.src < g.dst)
    assert np.array_equal(A[g.src, g.dst], g.shared)
    assert np.count_nonzero(np.triu(A, 1)) == g.m
    H = D * dm.section_hours[None, :]
    assert np.array_equal((H @ D.T)[g.src, g.dst], g.contact)
    assert np.array_equal(np.diag(A), dm.node_attrs["own_sections"])
    # adjacency is symmetric
    adj = np.zeros((g.n, g.n), dtype=int)
    for v in range(g.n):
        adj[v, g.neighbors(v)] = 1
    assert np.array_equal(adj, adj.T)
