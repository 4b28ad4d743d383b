"""Hypothesis strategies for matroids and graphs with roots."""

from __future__ import annotations

from hypothesis import strategies as st

from rootedtrees import GraphWithRoots, Matroid


@st.composite
def matroids(draw, max_size: int = 6, kinds=("free", "uniform", "graphic", "linear", "colored")):
    n = draw(st.integers(0, max_size))
    rids = [f"r{i}" for i in range(n)]
    kind = draw(st.sampled_from(kinds))
    if kind == "free":
        return Matroid.free(rids)
    if kind == "uniform":
        return Matroid.uniform(rids, draw(st.integers(0, n)))
    if kind == "graphic":
        ends = st.tuples(st.integers(0, 3), st.integers(0, 3))
        return Matroid.graphic({r: draw(ends) for r in rids})
    if kind == "linear":
        dim = draw(st.integers(1, 3))
        vec = st.tuples(*[st.integers(-2, 2)] * dim)
        return Matroid.linear({r: draw(vec) for r in rids})
    colors = {r: draw(st.sampled_from("abc")) for r in rids}
    return Matroid.colored(colors, draw(st.integers(0, 3)))


@st.composite
def rooted_graphs(draw, max_vertices: int = 4, max_edges: int = 6, max_roots: int = 3,
                  kinds=("free", "uniform", "graphic", "linear")):
    """A graph with roots together with a matroid on its roots."""
    n = draw(st.integers(1, max_vertices))
    V = list(range(n))
    if n > 1:
        pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
        E = draw(st.lists(pair, max_size=max_edges))
    else:
        E = []
    m = draw(matroids(max_size=max_roots, kinds=kinds))
    roots = [(r, draw(st.integers(0, n - 1))) for r in m.ground]
    return GraphWithRoots(V, E, roots), m
