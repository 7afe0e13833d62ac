import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coenroll.layout import fruchterman_reingold, layout_fr
from coenroll.projection import StudentGraph


def test_single_node_centered():
    lay = layout_fr(StudentGraph.from_edges(1, []), iterations=10)
    assert (lay.x[0], lay.y[0]) == (0.5, 0.5)


def test_two_nodes_settle_at_spring_length():
    pos = fruchterman_reingold(StudentGraph.from_edges(2, [(0, 1)]), iterations=500, seed=4)
    k = math.sqrt(1 / 2)
    assert np.linalg.norm(pos[0] - pos[1]) == pytest.approx(k, rel=0.10)


def test_same_seed_same_coordinates():
    g = StudentGraph.from_edges(30, [(i, i + 1) for i in range(29)] + [(0, 15)])
    a = layout_fr(g, 40, seed=9)
    b = layout_fr(g, 40, seed=9)
    assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)
    assert not np.array_equal(a.x, layout_fr(g, 40, seed=10).x)


def test_attributes_carried():
    g = StudentGraph.from_edges(3, [(0, 1)])
    lay = layout_fr(g, 5, b_norm=np.array([0.0, 0.5, 0.0]))
    rows = list(lay.records())
    assert [r[0] for r in rows] == ["0", "1", "2"]
    assert rows[1][4] == 0.5 and rows[0][3] == "unspecified"


def test_negative_iterations():
    with pytest.raises(ValueError):
        fruchterman_reingold(StudentGraph.from_edges(2, []), iterations=-1)


@settings(max_examples=40, deadline=None)
@given(
    st.integers(1, 40).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] < e[1]), max_size=80),
            st.integers(0, 60),
            st.integers(0, 2**31),
        )
    )
)
def test_coordinates_finite_and_bounded(case):
    n, edges, iters, seed = case
    pos = fruchterman_reingold(StudentGraph.from_edges(n, sorted(edges)), iters, seed)
    assert pos.shape == (n, 2)
    assert np.all(np.isfinite(pos)) and np.all((pos >= 0) & (pos <= 1))
