"""Boundary frameworks: models, constraint matrices, checkers, realizers.

Five models share one representation, :class:`FrameworkModel`:

``body_bar_bar``
    bodies in R^d linked by bars; each root is a bar to the environment
    given by its extensor ``boundary[r]``.
``body_bar_pin``
    as above but each root pins its body at the point ``pins[r]``.
``bar_joint_bar``
    joints in the plane; each root is a boundary bar ``boundary[r]``
    through its joint.
``bar_joint_pin``
    joints in the plane, those in ``pinned`` held fixed; no roots.
``bar_joint_slider``
    joints in the plane; each root is a slider with direction
    ``sliders[r]``.

Every rigidity question is answered on the body-bar form: a vertex is a
body with a screw block of ``D`` columns, and each bar contributes one row
built from the pairing in :mod:`rootedtrees.exterior`.  Joints are bodies
whose own dangling screws always move freely, so a bar-joint framework is
rigid when the rank reaches ``2|V|`` (free joints only, when pinned).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from . import exterior as ext
from . import linalg
from .count import ConditionReport, check_counts, sparsity_violation
from .decompose import PartitionWitness, basic_decomposition, rooted_component_packing
from .errors import (CertificationError, GeneralPositionError, InfeasibleError, InputError,
                     PreconditionError)
from .graph import GraphWithRoots
from .matroid import Matroid

MODELS = ("body_bar_bar", "body_bar_pin", "bar_joint_bar", "bar_joint_pin", "bar_joint_slider")
BAR_JOINT = ("bar_joint_bar", "bar_joint_pin", "bar_joint_slider")


def _vec(v) -> tuple:
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class FrameworkModel:
    """A graph with roots plus the geometric data of one model.

    ``placement`` maps vertices to homogeneous triples (bar-joint models);
    ``bars`` maps edges to extensors once a configuration is known.
    """

    model: str
    d: int
    graph: GraphWithRoots
    boundary: dict = field(default_factory=dict)
    pins: dict = field(default_factory=dict)
    pinned: tuple = ()
    sliders: dict = field(default_factory=dict)
    placement: dict | None = None
    bars: dict | None = None

    def __post_init__(self):
        g = self.graph
        if self.model not in MODELS:
            raise InputError(f"unknown model {self.model!r}")
        if self.d < 1:
            raise InputError("dimension must be at least 1")
        if self.model in BAR_JOINT and self.d != 2:
            raise InputError("bar-joint models live in the plane (d = 2)")
        D = ext.screw_dim(self.d)
        object.__setattr__(self, "boundary", {r: _vec(x) for r, x in self.boundary.items()})
        object.__setattr__(self, "pins", {r: _vec(p) for r, p in self.pins.items()})
        object.__setattr__(self, "sliders", {r: _vec(x) for r, x in self.sliders.items()})
        object.__setattr__(self, "pinned", tuple(self.pinned))
        roots = set(g.roots)
        if self.model in ("body_bar_bar", "bar_joint_bar"):
            _same_keys(self.boundary, roots, "boundary")
            for r, x in self.boundary.items():
                if len(x) != D:
                    raise InputError(f"boundary extensor of {r!r} has length {len(x)}, expected {D}")
                if not any(x):
                    raise InputError(f"boundary extensor of {r!r} is zero")
        if self.model == "body_bar_pin":
            _same_keys(self.pins, roots, "pins")
            for r, p in self.pins.items():
                if len(p) != self.d:
                    raise InputError(f"pin of {r!r} has length {len(p)}, expected {self.d}")
        if self.model == "bar_joint_pin":
            if roots:
                raise InputError("pinned bar-joint frameworks carry no roots")
            for x in self.pinned:
                if x not in g._vindex:
                    raise InputError(f"pinned vertex {x!r} is not a vertex")
            if len(set(self.pinned)) != len(self.pinned):
                raise InputError("repeated pinned vertex")
        if self.model == "bar_joint_slider":
            _same_keys(self.sliders, roots, "sliders")
            for r, x in self.sliders.items():
                if len(x) != 2 or not any(x):
                    raise InputError(f"slider direction of {r!r} must be a nonzero pair")
        if self.placement is not None:
            pl = {}
            for v, p in self.placement.items():
                if v not in g._vindex:
                    raise InputError(f"placement for unknown vertex {v!r}")
                p = _vec(p)
                if len(p) != 3 or not any(p):
                    raise InputError(f"placement of {v!r} must be a nonzero homogeneous triple")
                pl[v] = p
            object.__setattr__(self, "placement", pl)
        if self.bars is not None:
            bars = {}
            for e, x in self.bars.items():
                if e not in g.edges:
                    raise InputError(f"bar for unknown edge {e!r}")
                x = _vec(x)
                if len(x) != D:
                    raise InputError(f"bar of edge {e!r} has length {len(x)}, expected {D}")
                bars[e] = x
            object.__setattr__(self, "bars", bars)

    @property
    def D(self) -> int:
        return ext.screw_dim(self.d)

    def free_vertices(self) -> list:
        X = set(self.pinned)
        return [v for v in self.graph.vertices if v not in X]

    def with_(self, **changes) -> "FrameworkModel":
        return replace(self, **changes)


def _same_keys(data: dict, roots: set, what: str) -> None:
    if set(data) != roots:
        missing = sorted(map(repr, roots - set(data)))
        extra = sorted(map(repr, set(data) - roots))
        raise InputError(f"{what} must cover exactly the roots (missing {missing}, extra {extra})")


# ---------------------------------------------------------------------------
# constraint matrices


@dataclass
class ConstraintSystem:
    rows: list
    labels: list          # ("edge", e) or ("root", r)
    columns: list         # vertices with a screw block
    block: int            # D


def _system(fm: FrameworkModel, row_defs: list) -> ConstraintSystem:
    """``row_defs`` holds ``(label, u, v or None, extensor)``; v's block gets the minus sign."""
    cols = fm.free_vertices() if fm.model == "bar_joint_pin" else list(fm.graph.vertices)
    pos = {v: i for i, v in enumerate(cols)}
    D = fm.D
    rows, labels = [], []
    for label, u, v, x in row_defs:
        row = [Fraction(0)] * (D * len(cols))
        coeff = ext.screw_row(x)
        for w, sign in ((u, 1), (v, -1)):
            if w is None or w not in pos:
                continue
            base = D * pos[w]
            for k in range(D):
                row[base + k] += sign * coeff[k]
        rows.append(row)
        labels.append(label)
    return ConstraintSystem(rows, labels, cols, D)


def constraint_system(fm: FrameworkModel) -> ConstraintSystem:
    """Rows and labels of the rigidity matrix of a configured framework."""
    g = fm.graph
    if fm.model == "body_bar_pin":
        return constraint_system(reduce_pins_to_bars(fm))
    if fm.model == "bar_joint_slider":
        return constraint_system(slider_to_pinned(fm))
    bars = fm.bars
    if bars is None and not g.edges:
        bars = {}
    if fm.model in BAR_JOINT and bars is None:
        bars = joint_bars(fm)
    if bars is None or set(bars) != set(g.edges):
        raise PreconditionError("the framework has no bar configuration for every edge")
    defs = [(("edge", e), u, v, bars[e]) for e, (u, v) in g.edges.items()]
    defs += [(("root", r), v, None, fm.boundary[r]) for r, v in g.roots.items()]
    return _system(fm, defs)


def rigidity_matrix(fm: FrameworkModel) -> list[list[Fraction]]:
    """One row per bar, ``D`` columns per body (per free joint when pinned)."""
    return constraint_system(fm).rows


def joint_bars(fm: FrameworkModel) -> dict:
    """Bars through the placed endpoints of each edge."""
    pl = fm.placement
    if pl is None or any(v not in pl for v in fm.graph.vertices):
        raise PreconditionError("a placement of every joint is required")
    out = {}
    for e, (u, v) in fm.graph.edges.items():
        if ext.same_point(pl[u], pl[v]):
            raise PreconditionError(f"edge {e!r} joins coincident joints; give its bar explicitly")
        out[e] = ext.line_through(pl[u], pl[v])
    return out


def classical_matrix(fm: FrameworkModel) -> list[list[Fraction]]:
    """Velocity-form matrix of a bar-joint framework at affine placements.

    Two columns per free joint; rows ``<p(u) - p(v), m(u) - m(v)> = 0``
    for edges and one boundary row per root.
    """
    if fm.model not in BAR_JOINT:
        raise PreconditionError("the velocity form applies to bar-joint models")
    pl = fm.placement
    if pl is None:
        raise PreconditionError("a placement of every joint is required")
    aff = {}
    for v, p in pl.items():
        if p[2] == 0:
            raise PreconditionError(f"joint {v!r} lies at infinity")
        aff[v] = (p[0] / p[2], p[1] / p[2])
    cols = fm.free_vertices()
    pos = {v: i for i, v in enumerate(cols)}
    rows = []
    for e, (u, v) in fm.graph.edges.items():
        row = [Fraction(0)] * (2 * len(cols))
        for a, b in ((u, v), (v, u)):
            if a in pos:
                for k in range(2):
                    row[2 * pos[a] + k] += aff[a][k] - aff[b][k]
        rows.append(row)
    for r, v in fm.graph.roots.items():
        if fm.model == "bar_joint_bar":
            x = fm.boundary[r]
            coeff = (x[2], x[1])
        else:
            a, b = fm.sliders[r]
            coeff = (-b, a)
        row = [Fraction(0)] * (2 * len(cols))
        row[2 * pos[v]], row[2 * pos[v] + 1] = coeff
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# certificates


@dataclass
class RigidityCertificate:
    model: str
    rank: int
    rows: int
    columns: int
    expected_rank: int
    kernel_basis: list
    incidence_ok: bool

    @property
    def kernel_dim(self) -> int:
        return self.columns - self.rank

    @property
    def rigid(self) -> bool:
        return self.rank == self.expected_rank and self.incidence_ok

    @property
    def minimal(self) -> bool:
        """Rigid with independent rows, so deleting any row drops the rank."""
        return self.rigid and self.rows == self.rank

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "rank": self.rank,
            "rows": self.rows,
            "columns": self.columns,
            "expected_rank": self.expected_rank,
            "kernel_dim": self.kernel_dim,
            "kernel_basis": self.kernel_basis,
            "incidence_ok": self.incidence_ok,
            "rigid": self.rigid,
            "minimal": self.minimal,
        }


def incidence_holds(fm: FrameworkModel) -> bool:
    """Every bar and boundary bar passes through the joints it touches."""
    if fm.model not in BAR_JOINT:
        return True
    if fm.model == "bar_joint_slider":
        return incidence_holds(slider_to_pinned(fm))
    pl = fm.placement or {}
    bars = fm.bars if fm.bars is not None else joint_bars(fm)
    for e, (u, v) in fm.graph.edges.items():
        for w in (u, v):
            if w in pl and ext.incidence(pl[w], bars[e]) != 0:
                return False
    for r, v in fm.graph.roots.items():
        if v in pl and ext.incidence(pl[v], fm.boundary[r]) != 0:
            return False
    return True


def certify(fm: FrameworkModel, with_kernel: bool = True) -> RigidityCertificate:
    """Exact rank of the rigidity matrix against the rank rigidity requires."""
    sysm = constraint_system(fm)
    ncols = sysm.block * len(sysm.columns)
    r = linalg.rank(sysm.rows) if sysm.rows else 0
    if fm.model in BAR_JOINT:
        expected = 2 * len(sysm.columns)
        inc = incidence_holds(fm)
    else:
        expected = ncols
        inc = True
    kernel = linalg.nullspace(sysm.rows, ncols) if with_kernel else []
    return RigidityCertificate(fm.model, r, len(sysm.rows), ncols, expected, kernel, inc)


# ---------------------------------------------------------------------------
# body-bar with bar boundary


def boundary_matroid(fm: FrameworkModel) -> Matroid:
    """Linear matroid of the boundary extensors."""
    return Matroid.linear({r: fm.boundary[r] for r in fm.graph.roots})


def check_body_bar_bar(fm: FrameworkModel, jobs: int = 1) -> ConditionReport:
    """Counts for minimal rigidity with offset ``D`` and total ``D|V|``."""
    if fm.model != "body_bar_bar":
        raise PreconditionError("expected a body_bar_bar model")
    D = fm.D
    return check_counts(fm.graph, boundary_matroid(fm), D, D, D * len(fm.graph.vertices), jobs=jobs)


def realize_body_bar(fm: FrameworkModel, strategy: str = "tight_first") -> FrameworkModel:
    """Bars copied from the boundary bar of the tree (or component) holding each edge.

    For ``body_bar_bar`` the trees come from a basic decomposition and the
    result is minimally rigid.  For ``body_bar_pin`` the pins are first
    replaced by bars and rooted components are used; the result is rigid.
    """
    if fm.model == "body_bar_pin":
        red = reduce_pins_to_bars(fm)
        m = boundary_matroid(red)
        if m.rank() < red.D:
            raise InfeasibleError("the pins do not span the screw space",
                                  PartitionWitness([list(fm.graph.vertices)], 0, red.D - m.rank()))
        dec = rooted_component_packing(red.graph, m, strategy=strategy)
        bars = {e: red.boundary[r] for r, T in dec.parts for e in T}
        return red.with_(bars=bars)
    report = check_body_bar_bar(fm)
    if not report.ok:
        raise InfeasibleError("the counts fail", report)
    dec = basic_decomposition(fm.graph, boundary_matroid(fm), strategy=strategy, check=False)
    bars = {e: fm.boundary[r] for r, T in dec.parts for e in T}
    return fm.with_(bars=bars)


# ---------------------------------------------------------------------------
# body-bar with pins


def pin_bars(p, d: int) -> list[tuple]:
    """Extensors of the ``d`` bars from ``p`` along the coordinate axes."""
    base = ext.lift(p)
    out = []
    for i in range(d):
        q = list(p)
        q[i] = Fraction(q[i]) + 1
        out.append(ext.wedge2(base, ext.lift(q)))
    return out


def reduce_pins_to_bars(fm: FrameworkModel) -> FrameworkModel:
    """Replace every pin ``r`` by boundary bars with ids ``(r, 0), ..., (r, d-1)``."""
    if fm.model != "body_bar_pin":
        raise PreconditionError("expected a body_bar_pin model")
    g = fm.graph
    roots, boundary = [], {}
    for r, v in g.roots.items():
        for i, x in enumerate(pin_bars(fm.pins[r], fm.d)):
            rid = (r, i)
            if rid in g.roots:
                raise InputError(f"derived bar id {rid!r} collides with a root id")
            roots.append((rid, v))
            boundary[rid] = x
    g2 = GraphWithRoots(g.vertices, dict(g.edges), roots)
    return FrameworkModel("body_bar_bar", fm.d, g2, boundary=boundary, bars=fm.bars)


def affine_dimension(points: Iterable) -> int:
    """Dimension of the affine span; -1 for no points."""
    pts = [_vec(p) for p in points]
    if not pts:
        return -1
    base = pts[0]
    return linalg.rank([[a - b for a, b in zip(p, base)] for p in pts[1:]]) if len(pts) > 1 else 0


def pin_constraint_dimension(points: Iterable, d: int) -> int:
    """``sum_{i=1}^{a+1} (d - i + 1)`` where ``a`` is the affine dimension of the pins."""
    a = affine_dimension(points)
    return sum(d - i + 1 for i in range(1, a + 2))


@dataclass
class PinReport:
    ok: bool
    partition: list | None
    cut: int | None
    bound: int | None

    def to_dict(self) -> dict:
        return {"ok": self.ok, "partition": self.partition, "cut": self.cut, "bound": self.bound}


def check_body_bar_pin(fm: FrameworkModel) -> PinReport:
    """Rigidity of a pinned body-bar framework by the partition condition.

    Decided by packing rooted components against the bars the pins stand
    for; a failure carries a violating partition of the bodies.
    """
    red = reduce_pins_to_bars(fm)
    m = boundary_matroid(red)
    D = red.D
    if m.rank() < D:
        return PinReport(False, [list(fm.graph.vertices)], 0, D - m.rank())
    try:
        rooted_component_packing(red.graph, m, strategy="edge_first")
    except InfeasibleError as exc:
        w = exc.report
        return PinReport(False, w.partition, w.cut, w.bound)
    return PinReport(True, None, None, None)


def pin_partition_verdict(fm: FrameworkModel, max_vertices: int = 6) -> PinReport:
    """Direct enumeration of ``|delta(P)| >= D|P| - sum_X dim(pins on X)`` over all partitions."""
    from .oracles import set_partitions

    g = fm.graph
    if len(g.vertices) > max_vertices:
        from .errors import BudgetExceeded

        raise BudgetExceeded(f"{len(g.vertices)} bodies exceed the enumeration budget")
    D = fm.D
    for P in set_partitions(g.vertices):
        cut = len(g.delta(P))
        bound = D * len(P) - sum(
            pin_constraint_dimension([fm.pins[r] for r in g.roots_on(X)], fm.d) for X in P)
        if cut < bound:
            return PinReport(False, P, cut, bound)
    return PinReport(True, None, None, None)


# ---------------------------------------------------------------------------
# bar-joint with bar boundary


def general_position_violation(lines: dict):
    """Three root ids whose lines are concurrent, or None."""
    ids = list(lines)
    for a, b, c in combinations(ids, 3):
        if ext.concurrent(lines[a], lines[b], lines[c]):
            return (a, b, c)
    return None


def check_bar_joint_bar(fm: FrameworkModel, jobs: int = 1) -> ConditionReport:
    """Counts ``|F| + |R_F| <= 2|V(F)| - 3 + dim b(R_F)`` with total ``2|V|``.

    Raises :class:`GeneralPositionError` when three boundary lines meet.
    """
    if fm.model != "bar_joint_bar":
        raise PreconditionError("expected a bar_joint_bar model")
    triple = general_position_violation(fm.boundary)
    if triple is not None:
        raise GeneralPositionError(f"boundary lines of {list(triple)!r} are concurrent", triple)
    return check_counts(fm.graph, boundary_matroid(fm), 2, 3, 2 * len(fm.graph.vertices), jobs=jobs)


def _forest_components(X: list, adj_edges: list) -> list[list]:
    parent = {v: v for v in X}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for a, b in adj_edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    comps: dict = {}
    for v in X:
        comps.setdefault(find(v), []).append(v)
    return list(comps.values())


def proper_violation(g: GraphWithRoots, parts: dict):
    """A vertex set of size >= 2 on which two trees both restrict to spanning trees.

    For each pair of trees the common vertex set is refined by the
    components of each tree until stable; any block of two or more
    vertices is connected in both.
    """
    verts = {r: ({g.roots[r]} | {x for e in T for x in g.edges[e]}) for r, T in parts.items()}
    order = g._vindex
    for a, b in combinations(list(parts), 2):
        common = verts[a] & verts[b]
        blocks = [sorted(common, key=order.__getitem__)]
        changed = True
        while changed:
            changed = False
            nxt = []
            for B in blocks:
                Bs = set(B)
                pieces = [B]
                for r in (a, b):
                    inner = [g.edges[e] for e in parts[r]
                             if g.edges[e][0] in Bs and g.edges[e][1] in Bs]
                    comps = _forest_components(B, inner)
                    if len(comps) > 1:
                        pieces = comps
                        changed = True
                        break
                nxt.extend(p for p in pieces if len(p) >= 2)
            blocks = nxt
        if blocks:
            return (a, b, blocks[0])
    return None


def _tree_spans(g: GraphWithRoots, parts: dict) -> dict:
    spans: dict = {v: [] for v in g.vertices}
    for r, T in parts.items():
        vs = {g.roots[r]} | {x for e in T for x in g.edges[e]}
        for v in vs:
            spans[v].append(r)
    return spans


class _JointLayout:
    """Placements plus the rule that turns them into bars along the trees."""

    def __init__(self, fm: FrameworkModel, parts: dict, place: dict):
        self.fm = fm
        self.g = fm.graph
        self.lines = fm.boundary
        self.tree_of = {e: r for r, T in parts.items() for e in T}
        # one fixed point per line, away from every starting joint position,
        # so bars through it vary continuously while joints slide
        self.refs = {r: self._reference(x, place.values()) for r, x in self.lines.items()}

    @staticmethod
    def _reference(line, avoid):
        a, b = ext.points_on_line(line)
        avoid = list(avoid)
        k = 0
        while True:
            q = ext.normalize([x + k * y for x, y in zip(a, b)])
            if not any(ext.same_point(q, p) for p in avoid):
                return q
            k += 1

    def is_reference(self, p) -> bool:
        return any(ext.same_point(p, q) for q in self.refs.values())

    def bar(self, e, place: dict):
        u, v = self.g.edges[e]
        r = self.tree_of[e]
        line = self.lines[r]
        pu, pv = place[u], place[v]
        if ext.incidence(pu, line) == 0 and ext.incidence(pv, line) == 0:
            return line
        if not ext.same_point(pu, pv):
            return ext.normalize(ext.line_through(pu, pv))
        return ext.normalize(ext.line_through(pu, self.refs[r]))

    def model(self, place: dict) -> FrameworkModel:
        bars = {e: self.bar(e, place) for e in self.g.edges}
        return self.fm.with_(placement=dict(place), bars=bars)

    def rigid(self, place: dict) -> bool:
        fm = self.model(place)
        sysm = constraint_system(fm)
        return linalg.rank(sysm.rows) == 2 * len(self.g.vertices) and incidence_holds(fm)


def realize_bar_joint_bar(fm: FrameworkModel, strategy: str = "tight_first",
                          max_halvings: int = 64) -> FrameworkModel:
    """Injective joint placement and bars for a framework passing the counts.

    Each joint starts at the meet of the boundary lines of the two trees
    spanning it.  While several joints share a point, one side of the
    tree that does not span the coincident class is slid along a line
    through the point by ``1/2^t``, each candidate certified by rank.
    """
    report = check_bar_joint_bar(fm)
    if not report.ok:
        raise InfeasibleError("the counts fail", report)
    g = fm.graph
    m = boundary_matroid(fm)
    if m.rank() > 2:
        m = m.truncate()
    dec = basic_decomposition(g, m, strategy=strategy, check=False)
    parts = dec.as_dict()
    bad = proper_violation(g, parts)
    if bad is not None:
        raise CertificationError(f"trees {bad[0]!r} and {bad[1]!r} both span {bad[2]!r}")
    spans = _tree_spans(g, parts)
    for v, rs in spans.items():
        if len(rs) != 2:
            raise AssertionError(f"joint {v!r} is spanned by {len(rs)} trees")
    place = {v: ext.meet(fm.boundary[a], fm.boundary[b]) for v, (a, b) in spans.items()}
    lay = _JointLayout(fm, parts, place)
    if not lay.rigid(place):
        raise CertificationError("the initial placement is not rigid")
    while True:
        X = _first_coincident_class(g, place)
        if X is None:
            break
        place = _slide(lay, parts, spans, place, X, max_halvings)
    return lay.model(place)


def _first_coincident_class(g: GraphWithRoots, place: dict):
    seen: dict = {}
    for v in g.vertices:
        seen.setdefault(ext.normalize(place[v]), []).append(v)
    for X in seen.values():
        if len(X) >= 2:
            return X
    return None


def _slide(lay: _JointLayout, parts: dict, spans: dict, place: dict, X: list,
           max_halvings: int) -> dict:
    g = lay.g
    pair = spans[X[0]]
    if any(spans[v] != pair for v in X):
        raise CertificationError(f"coincident joints {X!r} are spanned by different trees")
    Xs = set(X)

    def comps(r):
        inner = [g.edges[e] for e in parts[r] if g.edges[e][0] in Xs and g.edges[e][1] in Xs]
        return _forest_components(X, inner)

    a, b = pair
    if len(comps(a)) == 1:
        keep, split = a, b
    else:
        keep, split = b, a
    pieces = comps(split)
    if len(pieces) < 2:
        raise CertificationError(f"both trees span the coincident joints {X!r}")
    root_v = g.roots[split]
    moved = next(p for p in pieces if root_v not in p)
    P = ext.normalize(place[X[0]])
    line = lay.lines[keep]
    if ext.incidence(P, line) != 0:
        line = ext.line_through(P, lay.refs[keep])
    Q = next(q for q in ext.points_on_line(line) if not ext.same_point(q, P))
    others = [place[v] for v in g.vertices if v not in set(moved)]
    for h in range(1, max_halvings + 1):
        t = Fraction(1, 2 ** h)
        P2 = ext.normalize([p + t * q for p, q in zip(P, Q)])
        if any(ext.same_point(P2, o) for o in others) or lay.is_reference(P2):
            continue
        trial = dict(place)
        for v in moved:
            trial[v] = P2
        if lay.rigid(trial):
            return trial
    raise CertificationError(f"no certified step separates the joints {X!r}")


# ---------------------------------------------------------------------------
# pinned bar-joint and sliders


def pinned_root_form(g: GraphWithRoots, X: Iterable) -> tuple[GraphWithRoots, Matroid]:
    """Each pinned joint carries two roots; all roots get distinct colors, at most 3 per set."""
    X = list(X)
    if g.roots:
        raise InputError("pinned bar-joint frameworks carry no roots")
    roots = [((x, i), x) for x in X for i in (0, 1)]
    g2 = GraphWithRoots(g.vertices, dict(g.edges), roots)
    m = Matroid.colored({r: r for r, _ in roots}, 3)
    return g2, m


def check_pinned_bar_joint(g: GraphWithRoots, X: Iterable, jobs: int = 1) -> ConditionReport:
    """``|E| = 2|V - X|`` and ``|F| <= 2|V(F) - X| - 3 + f_X(F)``.

    ``f_X(F)`` is 0, 2 or 3 as ``V(F)`` meets none, one, or at least two
    pinned joints.  Two roots on each pinned joint turn the count into
    ``|F| + |R_F| <= 2|V(F)| - 3 + min(3, |R_F|)``.
    """
    X = list(X)
    g2, m = pinned_root_form(g, X)
    rep = check_counts(g2, m, 2, 3, 2 * len(g.vertices), jobs=jobs)
    rep.counts = (len(g.edges), 0, 2 * (len(g.vertices) - len(set(X))))
    return rep


def f_X(g: GraphWithRoots, X: Iterable, F: Iterable) -> int:
    hits = len(set(g.vertices_of(F)) & set(X))
    return 0 if hits == 0 else (2 if hits == 1 else 3)


def direction_key(direction) -> tuple:
    return ext.normalize(direction)


def check_bar_slider(fm: FrameworkModel, jobs: int = 1) -> ConditionReport:
    """Slider counts.

    C1: at most two sliders per joint, pairwise non-parallel.  C2: both
    ``|F| + |R_F| <= 2|V(F)| - 2 + min(2, c(R_F))`` with ``c`` the number
    of slider directions, and ``|F| <= 2|V(F)| - 3``.  C3: ``|E| + |R| = 2|V|``.
    """
    if fm.model != "bar_joint_slider":
        raise PreconditionError("expected a bar_joint_slider model")
    g = fm.graph
    m = Matroid.colored({r: direction_key(fm.sliders[r]) for r in g.roots}, 2)
    rep = check_counts(g, m, 2, 2, 2 * len(g.vertices), jobs=jobs)
    bare = GraphWithRoots(g.vertices, dict(g.edges), [])
    laman = sparsity_violation(bare, Matroid.free([]), 2, 3, jobs=jobs)
    rep.extra = {"laman_ok": laman is None}
    if laman is not None:
        rep.extra["laman_witness"] = laman
        if rep.c2_ok:
            rep.c2_ok = False
            rep.c2_witness = laman
    return rep


def slider_to_pinned(fm: FrameworkModel) -> FrameworkModel:
    """Pinned framework with one joint at infinity per slider direction.

    Slider ``r`` at ``v`` becomes edge ``("slider", r)`` from ``v`` to
    joint ``("direction", i)`` placed at ``[d_r_perp, 0]``; parallel
    sliders share that joint.
    """
    if fm.model != "bar_joint_slider":
        raise PreconditionError("expected a bar_joint_slider model")
    g = fm.graph
    keys: dict = {}
    for r in g.roots:
        keys.setdefault(direction_key(fm.sliders[r]), len(keys))
    pins = {i: ("direction", i) for i in keys.values()}
    for p in pins.values():
        if p in g._vindex:
            raise InputError(f"vertex id {p!r} is reserved for slider directions")
    verts = list(g.vertices) + [pins[i] for i in sorted(pins)]
    edges = dict(g.edges)
    for r, v in g.roots.items():
        eid = ("slider", r)
        if eid in edges:
            raise InputError(f"edge id {eid!r} is reserved for sliders")
        edges[eid] = (v, pins[keys[direction_key(fm.sliders[r])]])
    g2 = GraphWithRoots(verts, edges, [])
    place = dict(fm.placement) if fm.placement else {}
    for key, i in keys.items():
        a, b = key
        place[pins[i]] = ext.normalize((-b, a, 0))
    bars = None
    if fm.bars is not None:
        bars = dict(fm.bars)
    return FrameworkModel("bar_joint_pin", 2, g2, pinned=tuple(pins[i] for i in sorted(pins)),
                          placement=place, bars=bars if bars and len(bars) == len(edges) else None)


def realize_pinned(fm: FrameworkModel, attempts: int = 64, seed: int = 0) -> FrameworkModel:
    """Place the free joints so the framework certifies rigid.

    Given placements are kept; missing ones are drawn from a seeded
    generator of small integer points and the first certified draw wins.
    """
    import random

    if fm.model == "bar_joint_slider":
        out = realize_pinned(slider_to_pinned(fm), attempts, seed)
        return fm.with_(placement={v: out.placement[v] for v in fm.graph.vertices})
    if fm.model != "bar_joint_pin":
        raise PreconditionError("expected a pinned or slider model")
    rep = check_pinned_bar_joint(fm.graph, fm.pinned)
    if not rep.ok:
        raise InfeasibleError("the counts fail", rep)
    given = dict(fm.placement or {})
    for x in fm.pinned:
        if x not in given:
            raise PreconditionError(f"pinned joint {x!r} needs a placement")
    rng = random.Random(seed)
    missing = [v for v in fm.graph.vertices if v not in given]
    span = 4 * len(fm.graph.vertices) + 8
    for _ in range(attempts):
        place = dict(given)
        for v in missing:
            place[v] = (Fraction(rng.randint(-span, span)), Fraction(rng.randint(-span, span)),
                        Fraction(1))
        pts = [ext.normalize(p) for p in place.values()]
        if len(set(pts)) != len(pts):
            continue
        cand = fm.with_(placement=place, bars=None)
        if certify(cand, with_kernel=False).rigid:
            return cand
        if not missing:
            break
    raise CertificationError("no certified placement found")


# ---------------------------------------------------------------------------
# dispatch


def check(fm: FrameworkModel, jobs: int = 1):
    """The counting verdict for the framework's model."""
    if fm.model == "body_bar_bar":
        return check_body_bar_bar(fm, jobs)
    if fm.model == "body_bar_pin":
        return check_body_bar_pin(fm)
    if fm.model == "bar_joint_bar":
        return check_bar_joint_bar(fm, jobs)
    if fm.model == "bar_joint_pin":
        return check_pinned_bar_joint(fm.graph, fm.pinned, jobs)
    return check_bar_slider(fm, jobs)


def realize(fm: FrameworkModel, strategy: str = "tight_first") -> FrameworkModel:
    if fm.model in ("body_bar_bar", "body_bar_pin"):
        return realize_body_bar(fm, strategy)
    if fm.model == "bar_joint_bar":
        return realize_bar_joint_bar(fm, strategy)
    return realize_pinned(fm)
