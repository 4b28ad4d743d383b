"""Instance files under tests/data, with the exit code each command should give.

Run ``python3 tests/corpus.py`` to rewrite the files after a format change.
"""

from __future__ import annotations

import pathlib
import sys

from rootedtrees import GraphWithRoots, Matroid
from rootedtrees import exterior as ext
from rootedtrees.io import Instance, emit_instance
from rootedtrees.rigidity import FrameworkModel

DATA = pathlib.Path(__file__).parent / "data"


def _k(n, roots=()):
    E = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return GraphWithRoots(range(n), E, roots)


def _line(p, q):
    return ext.wedge2(ext.lift(p), ext.lift(q))


def build() -> dict[str, Instance]:
    out = {}
    roots3 = [("r1", 0), ("r2", 0), ("r3", 0)]
    out["k6_three_roots"] = Instance(_k(6, roots3), Matroid.free(["r1", "r2", "r3"]))
    k6 = _k(6)
    E = list(k6.edges.values())[1:]
    out["k6_minus_edge"] = Instance(GraphWithRoots(range(6), E, roots3), Matroid.free(["r1", "r2", "r3"]))
    k4 = list(_k(4).edges.values())
    out["k4_parallel_edge"] = Instance(GraphWithRoots(range(4), k4 + [(0, 1)], [("r1", 0), ("r2", 0)]),
                                       Matroid.free(["r1", "r2"]))
    out["k4_extra_edge"] = Instance(GraphWithRoots(range(4), k4 + [(0, 2)], [("r1", 0), ("r2", 0)]),
                                    Matroid.free(["r1", "r2"]))
    out["star_two_roots"] = Instance(GraphWithRoots(range(4), [(0, 1), (0, 2), (0, 3)],
                                                    [("r1", 0), ("r2", 0)]), Matroid.free(["r1", "r2"]))
    out["path_uniform"] = Instance(
        GraphWithRoots("abc", [("a", "b"), ("b", "c"), ("a", "b")], [("r1", "a"), ("r2", "a"), ("r3", "c")]),
        Matroid.uniform(["r1", "r2", "r3"], 2))
    out["triangle_linear"] = Instance(
        GraphWithRoots("abc", [("a", "b"), ("b", "c"), ("a", "c")], [("x", "a"), ("y", "b")]),
        Matroid.linear({"x": ("1/2", 0), "y": (0, 3)}))
    out["graphic_roots"] = Instance(
        GraphWithRoots("uv", [("u", "v"), ("u", "v")], [("p", "u"), ("q", "u"), ("s", "v")]),
        Matroid.graphic({"p": (0, 1), "q": (1, 2), "s": (0, 2)}))
    out["colored_roots"] = Instance(
        GraphWithRoots("uv", [("u", "v")] * 3, [("p", "u"), ("q", "v"), ("s", "v")]),
        Matroid.colored({"p": "red", "q": "red", "s": "blue"}, 3))

    unit = {"r1": (1, 0, 0), "r2": (0, 1, 0), "r3": (0, 0, 1)}
    g2 = GraphWithRoots(["a", "b"], [("a", "b")] * 3, [("r1", "a"), ("r2", "a"), ("r3", "b")])
    out["body_bar_two_bodies"] = Instance(g2, framework=FrameworkModel("body_bar_bar", 2, g2, boundary=unit))
    par = {"r1": _line((0, 0), (1, 0)), "r2": _line((0, 1), (1, 1)), "r3": _line((0, 2), (1, 2))}
    out["body_bar_parallel"] = Instance(g2, framework=FrameworkModel("body_bar_bar", 2, g2, boundary=par))

    tri = [("a", "b"), ("b", "c"), ("a", "c")]
    gt = GraphWithRoots("abc", tri, [("r1", "a"), ("r2", "a"), ("r3", "b")])
    out["bar_joint_triangle"] = Instance(gt, framework=FrameworkModel(
        "bar_joint_bar", 2, gt, boundary={"r1": (1, 0, 0), "r2": (0, 1, 0), "r3": (1, 2, 5)}))
    out["bar_joint_concurrent"] = Instance(gt, framework=FrameworkModel(
        "bar_joint_bar", 2, gt, boundary={"r1": (1, 0, 0), "r2": (0, 1, 0), "r3": (1, 1, 0)}))

    gp = GraphWithRoots(["v", "x", "y"], [("v", "x"), ("v", "y")])
    out["pinned_joint"] = Instance(gp, framework=FrameworkModel(
        "bar_joint_pin", 2, gp, pinned=("x", "y"), placement={"x": (0, 0, 1), "y": (1, 0, 1)}))

    gs = GraphWithRoots("abc", tri, [("s0", "a"), ("s1", "b"), ("s2", "c")])
    out["slider_parallel"] = Instance(gs, framework=FrameworkModel(
        "bar_joint_slider", 2, gs, sliders={"s0": (1, 0), "s1": (1, 0), "s2": (1, 0)}))
    out["slider_two_directions"] = Instance(gs, framework=FrameworkModel(
        "bar_joint_slider", 2, gs, sliders={"s0": (1, 0), "s1": (2, 0), "s2": (0, 1)}))

    gpin = GraphWithRoots(["a"], [], [("p0", "a"), ("p1", "a")])
    out["body_pins"] = Instance(gpin, framework=FrameworkModel(
        "body_bar_pin", 2, gpin, pins={"p0": (0, 0), "p1": ("1/3", 2)}))
    gpin1 = GraphWithRoots(["a"], [], [("p0", "a")])
    out["body_one_pin"] = Instance(gpin1, framework=FrameworkModel(
        "body_bar_pin", 2, gpin1, pins={"p0": (0, 0)}))
    return out


# command, file, extra flags, exit code
EXPECTED = [
    ("check", "k6_three_roots", [], 0),
    ("check", "k6_minus_edge", [], 1),
    ("check", "k4_parallel_edge", [], 1),
    ("check", "path_uniform", [], 0),
    ("check", "triangle_linear", [], 1),
    ("check", "graphic_roots", [], 1),
    ("check", "colored_roots", [], 1),
    ("decompose", "k6_three_roots", [], 0),
    ("decompose", "k6_three_roots", ["--strategy", "edge_first"], 0),
    ("decompose", "k4_parallel_edge", [], 1),
    ("decompose", "path_uniform", [], 0),
    ("decompose", "k4_extra_edge", ["--dual"], 0),
    ("decompose", "star_two_roots", ["--dual"], 1),
    ("rigidity", "body_bar_two_bodies", ["--realize", "--certify"], 0),
    ("rigidity", "body_bar_parallel", [], 1),
    ("rigidity", "bar_joint_triangle", ["--certify"], 0),
    ("rigidity", "bar_joint_concurrent", [], 3),
    ("rigidity", "pinned_joint", ["--certify"], 0),
    ("rigidity", "slider_parallel", [], 1),
    ("rigidity", "slider_two_directions", ["--certify", "--pinned-form"], 0),
    ("rigidity", "body_pins", ["--certify"], 0),
    ("rigidity", "body_one_pin", [], 1),
]


def write() -> None:
    DATA.mkdir(exist_ok=True)
    for name, inst in build().items():
        (DATA / f"{name}.json").write_text(emit_instance(inst), encoding="utf-8")


if __name__ == "__main__":
    sys.path.insert(0, str(pathlib.Path(__file__).parent))
    write()
