from itertools import chain, combinations

import networkx as nx
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from rootedtrees import InputError, Matroid
from rootedtrees.oracles import brute_rank
from strategies import matroids


def powerset(xs):
    xs = list(xs)
    return chain.from_iterable(combinations(xs, k) for k in range(len(xs) + 1))


# -- examples ---------------------------------------------------------------


def test_free_everything_independent():
    m = Matroid.free("abcd")
    assert all(m.is_independent(S) for S in powerset("abcd"))


def test_uniform_rank_two_rejects_three():
    assert not Matroid.uniform("abc", 2).is_independent("abc")


def test_linear_three_plane_vectors():
    m = Matroid.linear({"a": (1, 0), "b": (0, 1), "c": (1, 1)})
    assert not m.is_independent("abc")
    assert m.rank("abc") == 2
    assert sympy.Matrix([[1, 0], [0, 1], [1, 1]]).rank() == 2


def test_graphic_triangle_rank():
    m = Matroid.graphic({"x": (0, 1), "y": (1, 2), "z": (0, 2)})
    assert m.rank() == 2
    assert m.rank([]) == 0


def test_span_of_spanning_set_is_ground():
    m = Matroid.uniform("abcd", 2)
    assert m.span("ab") == frozenset("abcd")


def test_span_free_is_identity():
    m = Matroid.free("abcd")
    assert m.span("ac") == frozenset("ac")


def test_colored_span():
    m = Matroid.colored({"r1": "red", "r2": "red", "r3": "blue"}, 3)
    assert m.span(["r1"]) == frozenset({"r1", "r2"})


def test_add_parallel_pair_has_rank_one():
    m = Matroid.free("ab").add_parallel("a", "a2")
    assert m.rank(["a", "a2"]) == 1
    assert m.rank(["a2", "b"]) == 2


def test_truncate_free_rank_three():
    assert Matroid.free("abc").truncate().rank() == 2


def test_derivations_leave_original_unchanged():
    m = Matroid.free("abc")
    m.add_parallel("a", "z")
    m.truncate()
    m.add_coloops(["q"])
    assert m.ground == tuple("abc")
    assert m.rank() == 3


def test_unknown_element_rejected():
    with pytest.raises(InputError):
        Matroid.free("ab").is_independent(["c"])


def test_id_collisions_rejected():
    m = Matroid.free("ab")
    with pytest.raises(InputError):
        m.add_parallel("a", "b")
    with pytest.raises(InputError):
        m.add_coloops(["a"])
    with pytest.raises(InputError):
        m.add_parallel("zz", "new")


def test_restrict_then_delete_matches_recomputation():
    m = Matroid.linear({"a": (1, 0, 0), "b": (0, 1, 0), "c": (1, 1, 0), "d": (0, 0, 1), "e": (1, 0, 1)})
    sub = m.restrict("abcd").delete("b")
    assert sub.ground == tuple("acd")
    for S in powerset("acd"):
        assert sub.rank(S) == m.rank(S)


# -- properties -------------------------------------------------------------


@given(matroids())
def test_matroid_axioms(m):
    ground = m.ground
    indep = {frozenset(S) for S in powerset(ground) if m.is_independent(S)}
    assert frozenset() in indep
    for I in indep:
        for x in I:
            assert I - {x} in indep
    for I in indep:
        for J in indep:
            if len(I) < len(J):
                assert any(I | {x} in indep for x in J - I)


@given(matroids())
def test_rank_is_largest_independent_subset(m):
    for S in powerset(m.ground):
        assert m.rank(S) == brute_rank(m, S)


@given(matroids(max_size=5))
def test_rank_submodular(m):
    sets = [frozenset(S) for S in powerset(m.ground)]
    for X in sets:
        for Y in sets:
            assert m.rank(X) + m.rank(Y) >= m.rank(X | Y) + m.rank(X & Y)


@given(matroids())
def test_span_idempotent_and_monotone(m):
    for S in powerset(m.ground):
        sp = m.span(S)
        assert m.span(sp) == sp
        assert set(S) <= sp
        assert all(m.rank(list(S) + [x]) == m.rank(S) for x in sp - set(S))


@given(matroids(max_size=5), st.data())
def test_add_parallel_rank_dedupes(m, data):
    if not m.ground:
        return
    base = data.draw(st.sampled_from(m.ground))
    m2 = m.add_parallel(base, "new")
    for S in powerset(m2.ground):
        T = {base if x == "new" else x for x in S}
        assert m2.rank(S) == m.rank(T)


@given(matroids(max_size=5), st.integers(1, 2))
def test_add_coloops_raise_rank_by_one_each(m, count):
    ids = [f"c{i}" for i in range(count)]
    m2 = m.add_coloops(ids)
    for S in powerset(m2.ground):
        old = [x for x in S if x not in ids]
        assert m2.rank(S) == m.rank(old) + sum(1 for x in S if x in ids)


@given(matroids())
def test_truncation_rank(m):
    t = m.truncate()
    top = m.rank()
    for S in powerset(m.ground):
        assert t.rank(S) == min(m.rank(S), max(top - 1, 0))


@given(matroids(max_size=5), st.data())
def test_modifier_stack_matches_direct_evaluation(m, data):
    keep = data.draw(st.lists(st.sampled_from(m.ground), unique=True)) if m.ground else []
    m2 = m.restrict(keep)
    if keep:
        m2 = m2.add_parallel(keep[0], "p")
    m2 = m2.add_coloops(["c"]).truncate()
    top = m2.rank()
    for S in powerset(m2.ground):
        base = [keep[0] if x == "p" else x for x in S if x != "c"]
        direct = min(m.rank(set(base)) + ("c" in S), top)
        assert m2.rank(S) == direct


@given(st.dictionaries(st.sampled_from("abcdef"), st.tuples(st.integers(0, 4), st.integers(0, 4)),
                       max_size=6))
def test_graphic_rank_counts_components(edges):
    m = Matroid.graphic(edges)
    for S in powerset(m.ground):
        G = nx.MultiGraph()
        for x in S:
            G.add_edge(*edges[x])
        assert m.rank(S) == G.number_of_nodes() - nx.number_connected_components(G)
