import random
from fractions import Fraction
from itertools import chain, combinations

import pytest

from rootedtrees import GeneralPositionError, GraphWithRoots, InputError, Matroid, PreconditionError
from rootedtrees import exterior as ext
from rootedtrees import linalg
from rootedtrees import oracles as O
from rootedtrees import rigidity as rg
from rootedtrees.rigidity import FrameworkModel, certify
from gen import (c1_holds, planted_body_bar, rand_bar_joint_bar, rand_extensor, rand_slider,
                 rand_vector)

BIG = O.OracleBudget(8, 14, 8, 16)


def line(p, q):
    return ext.wedge2(ext.lift(p), ext.lift(q))


def nonempty_subsets(xs):
    xs = list(xs)
    return chain.from_iterable(combinations(xs, k) for k in range(1, len(xs) + 1))


def two_bodies(boundary, at):
    g = GraphWithRoots(["a", "b"], [("a", "b")] * 3, list(at.items()))
    return FrameworkModel("body_bar_bar", 2, g, boundary=boundary)


UNIT3 = {"r1": (1, 0, 0), "r2": (0, 1, 0), "r3": (0, 0, 1)}


# -- model validation -------------------------------------------------------


def test_model_rejects_wrong_extensor_length():
    g = GraphWithRoots(["a"], [], [("r", "a")])
    with pytest.raises(InputError):
        FrameworkModel("body_bar_bar", 2, g, boundary={"r": (1, 0)})


def test_bar_joint_models_are_planar():
    g = GraphWithRoots(["a"], [])
    with pytest.raises(InputError):
        FrameworkModel("bar_joint_pin", 3, g)


def test_boundary_must_cover_roots():
    g = GraphWithRoots(["a"], [], [("r", "a"), ("s", "a")])
    with pytest.raises(InputError):
        FrameworkModel("body_bar_bar", 2, g, boundary={"r": (1, 0, 0)})


# -- rigidity matrix --------------------------------------------------------


def test_single_body_independent_bars():
    g = GraphWithRoots(["a"], [], [(r, "a") for r in UNIT3])
    fm = FrameworkModel("body_bar_bar", 2, g, boundary=UNIT3)
    M = rg.rigidity_matrix(fm)
    assert len(M) == 3 and len(M[0]) == 3 and linalg.rank(M) == 3
    assert certify(fm).rigid


def test_single_body_parallel_bars():
    g = GraphWithRoots(["a"], [], [("r1", "a"), ("r2", "a")])
    fm = FrameworkModel("body_bar_bar", 2, g,
                        boundary={"r1": line((0, 0), (1, 0)), "r2": line((0, 1), (1, 1))})
    cert = certify(fm)
    assert cert.rank <= 2 and cert.kernel_dim >= 1


def test_one_bar_between_two_bodies():
    g = GraphWithRoots(["u", "v"], [("u", "v")])
    x = line((0, 0), (1, 2))
    fm = FrameworkModel("body_bar_bar", 2, g, bars={0: x})
    M = rg.rigidity_matrix(fm)
    assert linalg.rank(M) == 1
    assert certify(fm).kernel_dim == 5
    for s in ([1, 0, 0], [0, 1, 0], [0, 0, 1], [2, -1, 3]):
        assert linalg.mat_vec(M, s + s) == [0]


def test_missing_configuration_is_an_error():
    g = GraphWithRoots(["u", "v"], [("u", "v")])
    with pytest.raises(PreconditionError):
        rg.rigidity_matrix(FrameworkModel("body_bar_bar", 2, g))


# -- body-bar with bar boundary ---------------------------------------------


def test_body_bar_single_body_passes():
    g = GraphWithRoots(["a"], [], [(r, "a") for r in UNIT3])
    fm = FrameworkModel("body_bar_bar", 2, g, boundary=UNIT3)
    assert rg.check_body_bar_bar(fm).ok
    real = rg.realize_body_bar(fm)
    assert real.bars == {} and certify(real).rank == 3


def test_body_bar_two_bodies():
    fm = two_bodies(UNIT3, {"r1": "a", "r2": "a", "r3": "b"})
    rep = rg.check_body_bar_bar(fm)
    assert rep.ok
    assert O.count_holds(fm.graph, rg.boundary_matroid(fm), 3, 3)
    real = rg.realize_body_bar(fm)
    M = rg.rigidity_matrix(real)
    assert linalg.rank(M) == 6
    for i in range(len(M)):
        assert linalg.rank(M[:i] + M[i + 1:]) <= 5


def test_body_bar_parallel_boundary_fails():
    par = {"r1": line((0, 0), (1, 0)), "r2": line((0, 1), (1, 1)), "r3": line((0, 2), (1, 2))}
    split = two_bodies(par, {"r1": "a", "r2": "a", "r3": "b"})
    m = rg.boundary_matroid(split)
    assert m.rank() == 2
    rep = rg.check_body_bar_bar(split)
    assert not rep.ok and rep.c2_witness == [0, 1, 2]
    assert O.enumerate_violators(split.graph, m, 3, 3)
    rep = rg.check_body_bar_bar(two_bodies(par, {"r1": "a", "r2": "a", "r3": "a"}))
    assert not rep.ok and rep.c1_vertex == "a"


def test_body_bar_d3_two_bodies():
    rng = random.Random(4)
    while True:
        bars = {f"r{i}": rand_extensor(rng, 3) for i in range(6)}
        if Matroid.linear(bars).rank() == 6:
            break
    g = GraphWithRoots(["a", "b"], [("a", "b")] * 6, [(r, "a") for r in bars])
    fm = FrameworkModel("body_bar_bar", 3, g, boundary=bars)
    cert = certify(rg.realize_body_bar(fm))
    assert cert.rank == 12 and cert.minimal


@pytest.mark.parametrize("seed", range(10))
def test_planted_body_bar_realizations_are_minimal(seed):
    rng = random.Random(seed)
    fm = planted_body_bar(rng, 2 + seed % 2)
    assert rg.check_body_bar_bar(fm).ok
    cert = certify(rg.realize_body_bar(fm))
    assert cert.minimal and cert.rank == fm.D * len(fm.graph.vertices)


def random_counted_body_bar(rng, n, d=2):
    """Random body-bar instance with C1 and the total count."""
    D = ext.screw_dim(d)
    while True:
        nroots = rng.randint(D, D + 2)
        bars = {f"r{i}": rand_extensor(rng, d) for i in range(nroots)}
        m = Matroid.linear(bars)
        if m.rank() < D:
            continue
        V = list(range(n))
        g = GraphWithRoots(V, [tuple(rng.sample(V, 2)) for _ in range(D * n - nroots)] if n > 1 else [],
                           [(r, rng.choice(V)) for r in bars])
        if n == 1 and nroots != D:
            continue
        if c1_holds(g, m):
            return FrameworkModel("body_bar_bar", d, g, boundary=bars)


@pytest.mark.parametrize("seed", range(40))
def test_partition_form_agrees_with_counts(seed):
    rng = random.Random(seed)
    fm = random_counted_body_bar(rng, rng.randint(1, 5))
    m = rg.boundary_matroid(fm)
    partition_ok = O.dual_violating_partition(fm.graph, m, BIG) is None
    assert rg.check_body_bar_bar(fm).ok == partition_ok
    if partition_ok:
        assert certify(rg.realize_body_bar(fm)).minimal


# -- body-bar with pins -----------------------------------------------------


def single_body_pins(d, pts):
    g = GraphWithRoots(["a"], [], [(f"p{i}", "a") for i in range(len(pts))])
    return FrameworkModel("body_bar_pin", d, g, pins={f"p{i}": p for i, p in enumerate(pts)})


@pytest.mark.parametrize("d,pts,allowed,kernel", [
    (2, [(0, 0), (1, 2)], 3, 0),
    (2, [(0, 0)], 2, 1),
    (3, [(0, 0, 0), (1, 1, 1), (2, 2, 2)], 5, 1),
])
def test_single_body_pins(d, pts, allowed, kernel):
    fm = single_body_pins(d, pts)
    assert rg.pin_constraint_dimension(pts, d) == allowed
    cert = certify(rg.reduce_pins_to_bars(fm))
    assert cert.kernel_dim == kernel
    assert rg.check_body_bar_pin(fm).ok == (kernel == 0)
    assert rg.pin_partition_verdict(fm).ok == (kernel == 0)


def test_one_pin_kernel_is_rotation_about_pin():
    fm = single_body_pins(2, [(3, -1)])
    (s,) = certify(rg.reduce_pins_to_bars(fm)).kernel_basis
    assert s[0] != 0
    # the pin itself does not move: velocity p + A q vanishes at q = pin
    A01 = -s[0]
    assert s[1] + A01 * (-1) == 0 and s[2] - A01 * 3 == 0


def test_duplicate_pins_are_allowed():
    fm = single_body_pins(2, [(1, 1), (1, 1)])
    assert rg.affine_dimension([(1, 1), (1, 1)]) == 0
    assert not rg.check_body_bar_pin(fm).ok


def test_pin_reduction_uses_axis_offsets():
    assert rg.pin_bars((2, 5), 2) == [line((2, 5), (3, 5)), line((2, 5), (2, 6))]


@pytest.mark.parametrize("seed", range(30))
def test_pin_checker_matches_partition_enumeration(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    d = rng.choice([2, 3])
    V = list(range(n))
    npins = rng.randint(0, 4)
    g = GraphWithRoots(V, [tuple(rng.sample(V, 2)) for _ in range(rng.randint(0, 8))] if n > 1 else [],
                       [(f"p{i}", rng.choice(V)) for i in range(npins)])
    fm = FrameworkModel("body_bar_pin", d, g,
                        pins={f"p{i}": rand_vector(rng, d, -1, 1) for i in range(npins)})
    rep = rg.check_body_bar_pin(fm)
    assert rep.ok == rg.pin_partition_verdict(fm).ok
    if rep.ok:
        assert certify(rg.realize_body_bar(fm)).rigid


# -- bar-joint with bar boundary --------------------------------------------


TRI = [("a", "b"), ("b", "c"), ("a", "c")]


def test_bar_joint_triangle_matches_brute_force():
    g = GraphWithRoots("abc", TRI, [("r1", "a"), ("r2", "a"), ("r3", "b")])
    fm = FrameworkModel("bar_joint_bar", 2, g,
                        boundary={"r1": (1, 0, 0), "r2": (0, 1, 0), "r3": (1, 2, 5)})
    rep = rg.check_bar_joint_bar(fm)
    m = rg.boundary_matroid(fm)
    assert rep.ok == O.count_holds(g, m, 2, 3)
    assert rep.ok
    real = rg.realize_bar_joint_bar(fm)
    cert = certify(real)
    assert cert.rigid and cert.rank == 6
    assert len({ext.normalize(p) for p in real.placement.values()}) == 3


def test_single_joint_on_two_lines_is_rigid():
    # 0 edges + 2 roots = 2|V|, so the total count holds
    g = GraphWithRoots(["v"], [], [("r1", "v"), ("r2", "v")])
    fm = FrameworkModel("bar_joint_bar", 2, g, boundary={"r1": (1, 0, 0), "r2": (0, 1, 0)})
    assert rg.check_bar_joint_bar(fm).ok
    cert = certify(rg.realize_bar_joint_bar(fm))
    assert cert.rigid and cert.rank == 2


def test_single_joint_on_one_line_fails_total_count():
    g = GraphWithRoots(["v"], [], [("r1", "v")])
    fm = FrameworkModel("bar_joint_bar", 2, g, boundary={"r1": (1, 0, 0)})
    rep = rg.check_bar_joint_bar(fm)
    assert not rep.ok and not rep.c3_ok


def test_concurrent_lines_rejected():
    g = GraphWithRoots(["a"], [], [("r1", "a"), ("r2", "a"), ("r3", "a")])
    fm = FrameworkModel("bar_joint_bar", 2, g,
                        boundary={"r1": (1, 0, 0), "r2": (0, 1, 0), "r3": (1, 1, 0)})
    with pytest.raises(GeneralPositionError) as err:
        rg.check_bar_joint_bar(fm)
    assert err.value.triple == ("r1", "r2", "r3")


@pytest.mark.parametrize("seed", range(25))
def test_bar_joint_checker_and_realizer(seed):
    rng = random.Random(100 + seed)
    fm = rand_bar_joint_bar(rng, 5)
    rep = rg.check_bar_joint_bar(fm)
    g = fm.graph
    m = rg.boundary_matroid(fm)
    brute = (all(len(g.roots_at(v)) <= 2 and m.is_independent(g.roots_at(v)) for v in g.vertices)
             and len(g.edges) + len(g.roots) == 2 * len(g.vertices)
             and O.count_holds(g, m, 2, 3, BIG))
    assert rep.ok == brute
    if rep.ok:
        for strategy in ("tight_first", "edge_first"):
            real = rg.realize_bar_joint_bar(fm, strategy=strategy)
            cert = certify(real)
            assert cert.rigid and cert.rank == 2 * len(g.vertices)
            assert len({ext.normalize(p) for p in real.placement.values()}) == len(g.vertices)


# -- pinned bar-joint -------------------------------------------------------


def test_joint_between_two_pins():
    g = GraphWithRoots(["v", "x", "y"], [("v", "x"), ("v", "y")])
    assert rg.check_pinned_bar_joint(g, ["x", "y"]).ok
    fm = FrameworkModel("bar_joint_pin", 2, g, pinned=("x", "y"),
                        placement={"x": (0, 0, 1), "y": (1, 0, 1)})
    cert = certify(rg.realize(fm))
    assert cert.rank == 2 and cert.rigid


def test_joint_with_one_pin_fails_total():
    g = GraphWithRoots(["v", "x"], [("v", "x")])
    rep = rg.check_pinned_bar_joint(g, ["x"])
    assert not rep.ok and not rep.c3_ok


def test_laman_graph_without_pins_fails():
    g = GraphWithRoots("abc", TRI)
    rep = rg.check_pinned_bar_joint(g, [])
    assert not rep.ok and not rep.c3_ok


def test_f_x_values():
    g = GraphWithRoots(["v", "x", "y"], [("v", "x"), ("v", "y")])
    assert rg.f_X(g, {"x", "y"}, [0, 1]) == 3
    assert rg.f_X(g, {"x", "y"}, [0]) == 2
    assert rg.f_X(g, set(), [0]) == 0


@pytest.mark.parametrize("seed", range(30))
def test_pinned_checker_matches_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    V = list(range(n))
    X = rng.sample(V, rng.randint(0, n))
    E = [tuple(rng.sample(V, 2)) for _ in range(max(0, 2 * (n - len(X)) + rng.choice([0, 0, -1])))]
    g = GraphWithRoots(V, E)
    brute = (len(E) == 2 * (n - len(X)) and not O.bound_violators(
        g, lambda F: 2 * len(set(g.vertices_of(F)) - set(X)) - 3 + rg.f_X(g, X, F), BIG))
    assert rg.check_pinned_bar_joint(g, X).ok == brute


# -- sliders ----------------------------------------------------------------


def slider_triangle(dirs):
    g = GraphWithRoots("abc", TRI, [(f"s{i}", v) for i, v in enumerate("abc")])
    return FrameworkModel("bar_joint_slider", 2, g,
                          sliders={f"s{i}": d for i, d in enumerate(dirs)})


def test_equal_direction_sliders_fail_on_everything():
    rep = rg.check_bar_slider(slider_triangle([(1, 0)] * 3))
    assert not rep.ok and rep.c2_witness == [0, 1, 2]


def test_two_direction_sliders_pass_and_certify():
    fm = slider_triangle([(1, 0), (2, 0), (0, 1)])
    assert rg.check_bar_slider(fm).ok
    cert = certify(rg.realize(fm))
    assert cert.rigid and cert.rank == 6


def test_single_joint_two_sliders():
    g = GraphWithRoots(["v"], [], [("s1", "v"), ("s2", "v")])
    fm = FrameworkModel("bar_joint_slider", 2, g, sliders={"s1": (1, 0), "s2": (1, 1)})
    assert rg.check_bar_slider(fm).ok
    fm_same = fm.with_(sliders={"s1": (1, 0), "s2": (3, 0)})
    rep = rg.check_bar_slider(fm_same)
    assert not rep.ok and rep.c1_vertex == "v"


def test_zero_slider_direction_rejected():
    g = GraphWithRoots(["v"], [], [("s1", "v")])
    with pytest.raises(InputError):
        FrameworkModel("bar_joint_slider", 2, g, sliders={"s1": (0, 0)})


def test_slider_conversion_pins_at_infinity():
    fm = slider_triangle([(1, 0), (2, 0), (0, 1)])
    pf = rg.slider_to_pinned(fm)
    assert pf.model == "bar_joint_pin"
    inf = [pf.placement[x] for x in pf.pinned]
    assert all(p[2] == 0 for p in inf) and len(inf) == 2


@pytest.mark.parametrize("seed", range(40))
def test_slider_conversion_preserves_verdict(seed):
    fm = rand_slider(random.Random(seed))
    pf = rg.slider_to_pinned(fm)
    assert rg.check_bar_slider(fm).ok == rg.check(pf).ok


# -- submodularity of the slider bound --------------------------------------


@pytest.mark.parametrize("seed", range(15))
def test_hat_f_is_submodular_on_intersecting_pairs(seed):
    fm = rand_slider(random.Random(seed), 4)
    g = fm.graph
    colors = {r: rg.direction_key(fm.sliders[r]) for r in g.roots}
    m = Matroid.colored(colors, 2)
    if not c1_holds(g, m):
        return

    def hat_f(F):
        n = len(g.vertices_of(F))
        R = g.roots_of_edges(F)
        return min(2 * (n - 1) - len(R) + m.rank(R), 2 * n - 3)

    sets = [frozenset(S) for S in nonempty_subsets(list(g.edges)[:6])]
    for A in sets:
        for B in sets:
            if A & B:
                assert hat_f(A) + hat_f(B) >= hat_f(A | B) + hat_f(A & B)


# -- classical versus derived matrices --------------------------------------


@pytest.mark.parametrize("seed", range(25))
def test_classical_kernel_matches_derived_kernel(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    V = list(range(n))
    place = {}
    while len(place) < n:
        p = (rng.randint(-4, 4), rng.randint(-4, 4))
        if p not in place.values():
            place[len(place)] = p
    E = list({tuple(sorted(rng.sample(V, 2))) for _ in range(rng.randint(1, 2 * n))})
    roots, boundary = [], {}
    for i in range(rng.randint(0, 3)):
        v = rng.choice(V)
        q = place[v]
        direction = rand_vector(rng, 2)
        roots.append((f"r{i}", v))
        boundary[f"r{i}"] = line(q, (q[0] + direction[0], q[1] + direction[1]))
    g = GraphWithRoots(V, E, roots)
    fm = FrameworkModel("bar_joint_bar", 2, g, boundary=boundary,
                        placement={v: ext.lift(p) for v, p in place.items()})
    derived = certify(fm)
    classical = rg.classical_matrix(fm)
    classical_kernel = 2 * n - (linalg.rank(classical) if classical else 0)
    assert derived.incidence_ok
    assert classical_kernel == derived.kernel_dim - n
    for v in V:
        m_v = [Fraction(0)] * (3 * n)
        m_v[3 * v:3 * v + 3] = ext.dangling(ext.lift(place[v]))
        assert not any(linalg.mat_vec(rg.rigidity_matrix(fm), m_v))
