"""Basic rooted-tree decompositions and rooted-component packings.

The construction follows the inductive sufficiency argument:

1. a disconnected instance is solved per connected component;
2. an instance without edges gets empty trees;
3. an unbalanced proper tight set ``F`` is solved on its own with
   ``k - r(R_F)`` extra coloop roots; the coloop trees ``F'`` stay in the
   graph, ``F \\ F'`` is removed and every root of ``F`` is replaced by
   parallel copies at the vertices its tree spans;
4. otherwise a good edge ``uv`` is removed and a new root parallel to a
   suitable root of ``v`` is placed at ``u``.

Every step strictly shrinks the edge set.  The recursion runs on an
explicit stack of generator frames, and the good-edge step mutates the
current instance in place, so long reduction chains cost no stack depth.

Two search strategies are offered.  ``"tight_first"`` looks for an
unbalanced proper tight set before every good-edge step.
``"edge_first"`` takes a good edge straight away and only falls back to
the tight branch when the reduced instance fails the count; the failing
set is then an unbalanced proper tight set of the current instance.  The
second strategy keeps one matching alive across steps and is the one to
use on large instances.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable

from .count import (LPRIME, MatchingState, check_conditions, count_basis, is_tight,
                    locality_order, test_edge)
from .errors import InfeasibleError, InputError, PreconditionError
from .graph import GraphWithRoots
from .matroid import Matroid


class AuxRoot:
    """Root created during the construction; compared by identity."""

    __slots__ = ("n", "role")

    def __init__(self, n: int, role: str):
        self.n = n
        self.role = role

    def __repr__(self) -> str:
        return f"<{self.role}{self.n}>"


class _ColoopToken:
    __slots__ = ()


class _View:
    """Independence oracle for every root that appears during one run.

    Each construction root is parallel to an original element or to an
    added coloop, so a single token map over the input matroid answers
    all queries and no derived matroid handles are built.
    """

    def __init__(self, m: Matroid):
        self.base = m
        self.tok: dict = {x: x for x in m.ground}

    def add_parallel(self, base, new) -> None:
        self.tok[new] = self.tok[base]

    def add_coloop(self, new) -> None:
        self.tok[new] = _ColoopToken()

    def _independent_unchecked(self, subset) -> bool:
        toks = [self.tok[x] for x in subset]
        if len(set(toks)) != len(toks):
            return False
        return self.base._independent_unchecked(
            [t for t in toks if not isinstance(t, _ColoopToken)])

    is_independent = _independent_unchecked

    def parallel_class(self, x):
        return self.tok[x]

    def rank(self, subset) -> int:
        chosen: list = []
        for x in subset:
            if self._independent_unchecked(chosen + [x]):
                chosen.append(x)
        return len(chosen)

    def restrict(self, subset) -> "_View":
        return self


@dataclass
class Decomposition:
    """Parts ``(root_id, edge list)`` in root order; empty parts are kept."""

    parts: list
    kind: str = "rooted_tree"

    def as_dict(self) -> dict:
        return {r: list(T) for r, T in self.parts}

    def part(self, rid) -> list:
        for r, T in self.parts:
            if r == rid:
                return list(T)
        raise KeyError(rid)


# ---------------------------------------------------------------------------
# validation


def _part_vertices(g: GraphWithRoots, T) -> set:
    out = set()
    for e in T:
        out.update(g.edges[e])
    return out


def validate(g: GraphWithRoots, m: Matroid, dec: Decomposition) -> tuple[bool, str]:
    """Check partition, per-part shape and the per-vertex base property.

    Returns ``(ok, message)``; the message names the first failure.
    """
    spanning = dec.kind == "rooted_component"
    seen_roots = set()
    owner: dict = {}
    for i, (rid, T) in enumerate(dec.parts, start=1):
        if rid not in g.roots:
            return False, f"part {i} uses unknown root {rid!r}"
        if rid in seen_roots:
            return False, f"root {rid!r} has two parts"
        seen_roots.add(rid)
        for e in T:
            if e not in g.edges:
                return False, f"part {i} uses unknown edge {e!r}"
            if e in owner:
                return False, f"edge {e!r} in parts {owner[e]} and {i}"
            owner[e] = i
    if len(seen_roots) != len(g.roots):
        missing = next(r for r in g.roots if r not in seen_roots)
        return False, f"root {missing!r} has no part"
    for e in g.edges:
        if e not in owner:
            return False, f"edge {e!r} not covered"
    for i, (rid, T) in enumerate(dec.parts, start=1):
        if not T:
            continue
        X = _part_vertices(g, T)
        if not spanning and len(T) != len(X) - 1:
            return False, f"part {i} cyclic"
        adj: dict = {v: [] for v in X}
        for e in T:
            a, b = g.edges[e]
            adj[a].append(b)
            adj[b].append(a)
        start = next(iter(X))
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != X:
            return False, f"part {i} disconnected"
        if g.roots[rid] not in X:
            return False, f"part {i} does not contain its root"
    k = m.rank()
    spans: dict = {v: [] for v in g.vertices}
    for rid, T in dec.parts:
        for v in _part_vertices(g, T) | {g.roots[rid]}:
            spans[v].append(rid)
    for v in g.vertices:
        S = spans[v]
        if spanning:
            if m.rank(S) != k:
                return False, f"vertex {v!r} not spanned by spanning set"
        elif len(S) != k or not m.is_independent(S):
            return False, f"vertex {v!r} not spanned by base"
    return True, "ok"


# ---------------------------------------------------------------------------
# searches on a plain instance


def is_unbalanced(g: GraphWithRoots, m: Matroid, F: Iterable) -> bool:
    """Some v in V(F) has sp(R_v) != sp(R_F), i.e. r(R_v) < r(R_F)."""
    verts = g.vertices_of(F)
    full = m.rank(g.roots_on(verts))
    return any(m.rank(g.roots_at(v)) < full for v in verts)


def _maximal_tight_sets(g: GraphWithRoots, m: Matroid, k: int, order=None):
    """Yield the maximal tight sets of an instance that satisfies the count."""
    st = MatchingState.for_instance(g, m, slots=k)
    if not st.augment_all():
        raise PreconditionError("the count fails on a sub-instance")
    done: set = set()
    for e in (order if order is not None else locality_order(g)):
        if e in done:
            continue
        ok, Z = test_edge(st, ("e", e), k, extract=True)
        if not ok:
            raise PreconditionError("the count fails on a sub-instance")
        Zs = {x[1] for x in Z if x[0] == "e"}
        if e not in Zs:
            continue
        F = _component(g, Zs, e)
        done.update(F)
        yield F


def _component(g: GraphWithRoots, F: set, e) -> list:
    by_v: dict = {}
    for f in F:
        for v in g.edges[f]:
            by_v.setdefault(v, []).append(f)
    comp = {e}
    stack = [e]
    while stack:
        f = stack.pop()
        for v in g.edges[f]:
            for h in by_v[v]:
                if h not in comp:
                    comp.add(h)
                    stack.append(h)
    return [f for f in g.edges if f in comp]


def find_unbalanced_proper_tight_set(g: GraphWithRoots, m: Matroid, k: int | None = None):
    """An unbalanced proper tight set, or None.

    Every proper tight set avoids some vertex ``w`` and lies inside a
    maximal tight set of ``G - w``; a superset of an unbalanced tight set
    is again unbalanced, so it suffices to inspect the maximal tight sets
    of the instances ``G - w`` (vertex order, then edge order).
    Precondition: the instance satisfies the count.
    """
    if not g.edges:
        return None
    k = m.rank() if k is None else k
    for w in g.vertices:
        sub = GraphWithRoots([v for v in g.vertices if v != w],
                             {e: uv for e, uv in g.edges.items() if w not in uv},
                             [(r, v) for r, v in g.roots.items() if v != w])
        if not sub.edges:
            continue
        msub = m.restrict(list(sub.roots))
        for F in _maximal_tight_sets(sub, msub, k, order=list(sub.edges)):
            if is_tight(g, m, F, k) and is_unbalanced(g, m, F):
                return F
    return None


# ---------------------------------------------------------------------------
# mutable working instance


class _Context:
    def __init__(self, g: GraphWithRoots, m: Matroid):
        self.view = _View(m)
        self.vindex = {v: i for i, v in enumerate(g.vertices)}
        self.eorder = {e: i for i, e in enumerate(g.edges)}
        self.rorder = {r: i for i, r in enumerate(g.roots)}
        self.counter = 0
        self.base_order = len(self.rorder)

    def fresh(self, role: str) -> AuxRoot:
        self.counter += 1
        r = AuxRoot(self.counter, role)
        self.rorder[r] = self.base_order + self.counter
        return r


class _Work:
    """A sub-instance that the solver is allowed to modify in place."""

    def __init__(self, ctx: _Context, vertices, edges: dict, roots: dict, k: int):
        self.ctx = ctx
        self.vertices = dict.fromkeys(sorted(vertices, key=ctx.vindex.__getitem__))
        self.edges = dict(edges)
        self.inc = {v: {} for v in self.vertices}
        for e, (a, b) in self.edges.items():
            self.inc[a][e] = None
            self.inc[b][e] = None
        self.roots = dict(roots)
        self.roots_at = {v: [] for v in self.vertices}
        for r, v in self.roots.items():
            self.roots_at[v].append(r)
        self.m = ctx.view
        self.k = k
        self.state: MatchingState | None = None
        self.heap: list | None = None
        self.last_u = None

    # -- edits ----------------------------------------------------------------

    def remove_edge(self, e) -> None:
        a, b = self.edges.pop(e)
        del self.inc[a][e]
        del self.inc[b][e]

    def add_edge(self, e, a, b) -> None:
        self.edges[e] = (a, b)
        self.inc[a][e] = None
        self.inc[b][e] = None

    def add_root(self, r, v) -> None:
        self.roots[r] = v
        self.roots_at[v].append(r)

    def remove_root(self, r) -> None:
        v = self.roots.pop(r)
        self.roots_at[v].remove(r)

    # -- views ------------------------------------------------------------------

    def sorted_edges(self, F=None) -> list:
        F = self.edges if F is None else F
        return sorted(F, key=self.ctx.eorder.__getitem__)

    def graph(self) -> GraphWithRoots:
        return GraphWithRoots(list(self.vertices),
                              {e: self.edges[e] for e in self.sorted_edges()},
                              sorted(self.roots.items(), key=lambda rv: self.ctx.rorder[rv[0]]))

    def vertices_of(self, F) -> list:
        out = set()
        for e in F:
            out.update(self.edges[e])
        return sorted(out, key=self.ctx.vindex.__getitem__)

    def components(self) -> list[list]:
        seen: set = set()
        comps = []
        for s in self.vertices:
            if s in seen:
                continue
            seen.add(s)
            comp = [s]
            stack = [s]
            while stack:
                x = stack.pop()
                for e in self.inc[x]:
                    a, b = self.edges[e]
                    y = b if a == x else a
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        stack.append(y)
            comps.append(comp)
        return comps

    def detached_side(self, u, v):
        """After removing an edge uv: the side of the cut if it split, else None.

        Searches from both ends alternately so the cost is bounded by the
        smaller side when the graph splits.
        """
        if u == v:
            return None
        seen = [{u}, {v}]
        queues = [deque([u]), deque([v])]
        while queues[0] and queues[1]:
            for side in (0, 1):
                q = queues[side]
                if not q:
                    break
                x = q.popleft()
                for e in self.inc[x]:
                    a, b = self.edges[e]
                    y = b if a == x else a
                    if y in seen[1 - side]:
                        return None
                    if y not in seen[side]:
                        seen[side].add(y)
                        q.append(y)
        side = 0 if not queues[0] else 1
        return list(seen[side])

    def extract(self, verts) -> "_Work":
        """Remove the given component from this instance and return it."""
        edges = {}
        for x in verts:
            for e in self.inc[x]:
                edges[e] = self.edges[e]
        roots = {r: self.roots[r] for x in verts for r in self.roots_at[x]}
        roots = dict(sorted(roots.items(), key=lambda rv: self.ctx.rorder[rv[0]]))
        for e in edges:
            self.remove_edge(e)
            if self.state is not None:
                self.state.remove(("e", e))
        for r in roots:
            self.remove_root(r)
            if self.state is not None:
                self.state.remove(("r", r))
        for x in verts:
            del self.vertices[x]
            del self.inc[x]
            del self.roots_at[x]
            if self.state is not None:
                del self.state.at[x]
        return _Work(self.ctx, verts, edges, roots, self.k)

    def drop_isolated(self, x) -> dict:
        """Remove a vertex without edges; its roots get empty trees."""
        roots = list(self.roots_at[x])
        for r in roots:
            self.remove_root(r)
            if self.state is not None:
                self.state.remove(("r", r))
        del self.vertices[x]
        del self.inc[x]
        del self.roots_at[x]
        if self.state is not None:
            del self.state.at[x]
        return {r: [] for r in roots}

    # -- matroid predicates -----------------------------------------------------

    def _free_of(self, base: list, r) -> bool:
        return self.m.is_independent(base + [r])

    def good_orientation(self, e):
        """(u, v, r_j) if e is good, else None.

        ``u`` receives the new root; ``r_j`` is the first root of ``v``
        outside the span of R_u.  Roots at a vertex are independent.
        """
        a, b = self.edges[e]
        Ra, Rb = self.roots_at[a], self.roots_at[b]
        b_in_a = all(not self._free_of(Ra, r) for r in Rb)
        if b_in_a:
            a_in_b = all(not self._free_of(Rb, r) for r in Ra)
            if a_in_b:
                return None
            # sp(R_b) inside sp(R_a): the roles swap
            a, b, Ra, Rb = b, a, Rb, Ra
        u, v = a, b
        rj = next(r for r in sorted(Rb, key=self.ctx.rorder.__getitem__)
                  if self._free_of(Ra, r))
        return u, v, rj


# ---------------------------------------------------------------------------
# solver


def _solve(W: _Work, strategy: str):
    """Generator frame: yields sub-instances, returns ``{root: edges}``."""
    ctx, k = W.ctx, W.k
    records: list = []
    others: list = []
    need_split = True
    while True:
        if need_split and W.edges:
            comps = W.components()
            if len(comps) > 1:
                comps.sort(key=lambda c: -sum(len(W.inc[x]) for x in c))
                for comp in comps[1:]:
                    if len(comp) == 1 and not W.inc[comp[0]]:
                        others.append(W.drop_isolated(comp[0]))
                        continue
                    sub = W.extract(comp)
                    others.append((yield sub))
                if W.heap is not None:
                    W.heap = None
            need_split = False
        if not W.edges:
            break
        F = None
        if strategy == "tight_first":
            F = find_unbalanced_proper_tight_set(W.graph(), W.m, k)
            if F is None:
                e = _first_good_edge(W)
                _edge_step(W, e, records)
                need_split = True
                continue
        else:
            _ensure_state(W)
            e = _pick_good_edge(W)
            F = _edge_step_checked(W, e, records)
            if F is None:
                side = W.detached_side(*_last_removed(records))
                if side is not None:
                    others.append((yield W.extract(side)))
                continue
        # tight branch on F
        yield from _tight_branch(W, F, records, others)
        need_split = True
    parts = {r: [] for r in W.roots}
    for res in others:
        parts.update(res)
    for rec in reversed(records):
        if rec[0] == "edge":
            _, rj, r, e, _ends = rec
            parts[rj] = parts[rj] + parts.pop(r) + [e]
        else:
            _, Fi, smap = rec
            for ri, T in Fi.items():
                merged = list(T)
                for s in smap[ri]:
                    merged.extend(parts.pop(s))
                parts[ri] = merged
    return parts


def _last_removed(records):
    return records[-1][4]


def _first_good_edge(W: _Work):
    for e in W.sorted_edges():
        if W.good_orientation(e) is not None:
            return e
    raise AssertionError("no good edge although no unbalanced proper tight set exists")


def _push_incident(W: _Work, x) -> None:
    for e in W.inc[x]:
        heapq.heappush(W.heap, (W.ctx.eorder[e], e))


def _pick_good_edge(W: _Work):
    """Prefer good edges at the vertex that just received a root, then the smallest id."""
    if W.heap is None:
        W.heap = [(W.ctx.eorder[e], e) for e in W.edges if W.good_orientation(e) is not None]
        heapq.heapify(W.heap)
    if W.last_u is not None and W.last_u in W.inc:
        for e in sorted(W.inc[W.last_u], key=W.ctx.eorder.__getitem__):
            if W.good_orientation(e) is not None:
                return e
    while W.heap:
        _, e = heapq.heappop(W.heap)
        if e in W.edges and W.good_orientation(e) is not None:
            return e
    raise AssertionError("no good edge in a connected feasible instance")


def _edge_step(W: _Work, e, records) -> None:
    """Remove the good edge e and place a new parallel root (no checks)."""
    u, v, rj = W.good_orientation(e)
    r = W.ctx.fresh("r")
    n_before = len(W.edges)
    W.remove_edge(e)
    W.add_root(r, u)
    W.m.add_parallel(rj, r)
    assert len(W.edges) < n_before
    records.append(("edge", rj, r, e, (u, v)))


def _ensure_state(W: _Work) -> None:
    if W.state is None:
        W.state = MatchingState.for_instance(W.graph(), W.m, slots=W.k)
        if not W.state.augment_all():
            raise AssertionError("instance handed to the solver fails the count")


def _edge_step_checked(W: _Work, e, records):
    """Good-edge step verified with the matching; returns a tight set on failure."""
    st = W.state
    u, v, rj = W.good_orientation(e)
    ends = W.edges[e]
    r = W.ctx.fresh("r")
    W.remove_edge(e)
    W.add_root(r, u)
    W.m.add_parallel(rj, r)
    st.remove(("e", e))
    key = st.add_loop(r, u)
    ok = st.augment(key)
    Z = None
    if ok:
        ok, Z = test_edge(st, key, W.k)
    else:
        Z = st.non_exit_set()
    if ok:
        records.append(("edge", rj, r, e, (u, v)))
        W.last_u = u
        if W.heap is not None:
            _push_incident(W, u)
        return None
    # undo and hand back the violating set, which is tight in the current instance
    st.remove(key)
    W.remove_root(r)
    W.add_edge(e, *ends)
    st.add_edge(e, *ends)
    if not st.augment(("e", e)):
        raise AssertionError("restoring an edge broke the covering matching")
    C = [x[1] for x in Z if x[0] == "e" and x[1] in W.edges]
    g = W.graph()
    C = _component(g, set(C), _first_at(g, C, u))
    if not (is_tight(g, W.m, C, W.k) and len(g.vertices_of(C)) < len(W.vertices)
            and is_unbalanced(g, W.m, C)):
        raise AssertionError("failed reduction did not expose an unbalanced proper tight set")
    return C


def _first_at(g: GraphWithRoots, C, u):
    for e in C:
        if u in g.edges[e]:
            return e
    raise AssertionError("violating set misses the reduced vertex")


def _tight_branch(W: _Work, F, records, others):
    ctx, k = W.ctx, W.k
    F = W.sorted_edges(F)
    VF = W.vertices_of(F)
    RF = sorted((r for x in VF for r in W.roots_at[x]), key=ctx.rorder.__getitem__)
    s = W.m.rank(RF)
    vprime = VF[0]
    coloops = [ctx.fresh("c") for _ in range(k - s)]
    for c in coloops:
        W.m.add_coloop(c)
    rootsA = {r: W.roots[r] for r in RF}
    for c in coloops:
        rootsA[c] = vprime
    if len(F) >= len(W.edges):
        raise AssertionError("tight set is not proper")
    A = _Work(ctx, VF, {e: W.edges[e] for e in F}, rootsA, k)
    if W.state is not None:
        # the parent's matching restricted to F and R_F is valid for A
        A.state = W.state.sub_state(VF, [("e", e) for e in F] + [("r", r) for r in RF])
        for c in coloops:
            if not A.state.augment(A.state.add_loop(c, vprime)):
                raise AssertionError("coloop root could not be matched")
    partsA = yield A
    Fi = {r: partsA[r] for r in RF}
    Fprime = set()
    for c in coloops:
        Fprime.update(partsA[c])
    drop = [e for e in F if e not in Fprime]
    if not drop:
        raise AssertionError("tight branch made no progress")
    smap: dict = {}
    pairs = []
    for ri in RF:
        span = set(W.vertices_of(Fi[ri])) | {W.roots[ri]}
        smap[ri] = []
        for x in sorted(span, key=ctx.vindex.__getitem__):
            sx = ctx.fresh("s")
            smap[ri].append(sx)
            pairs.append((ri, sx, x))
    st = W.state
    for e in drop:
        W.remove_edge(e)
        if st is not None:
            st.remove(("e", e))
    for ri in RF:
        W.remove_root(ri)
        if st is not None:
            st.remove(("r", ri))
    for _, sx, x in pairs:
        W.add_root(sx, x)
    for ri, sx, _ in pairs:
        W.m.add_parallel(ri, sx)
    if st is not None:
        for _, sx, x in pairs:
            key = st.add_loop(sx, x)
            if not st.augment(key):
                raise AssertionError("reduced instance fails the count")
    W.heap = None
    W.last_u = None
    records.append(("tight", Fi, smap))


def _run(W: _Work, strategy: str) -> dict:
    stack = [_solve(W, strategy)]
    value = None
    while stack:
        try:
            sub = stack[-1].send(value)
        except StopIteration as stop:
            stack.pop()
            value = stop.value
            continue
        stack.append(_solve(sub, strategy))
        value = None
    return value


STRATEGIES = ("tight_first", "edge_first")


def basic_decomposition(g: GraphWithRoots, m: Matroid, strategy: str = "tight_first",
                        check: bool = True, jobs: int = 1) -> Decomposition:
    """Basic rooted-tree decomposition of ``(g, roots)`` with respect to ``m``.

    Raises :class:`InfeasibleError` (carrying the condition report) when
    the conditions fail.  The result is validated before it is returned.
    """
    if strategy not in STRATEGIES:
        raise InputError(f"unknown strategy {strategy!r}")
    if set(m.ground) != set(g.roots):
        raise InputError("matroid ground set must equal the set of root ids")
    if check:
        rep = check_conditions(g, m, jobs=jobs)
        if not rep.ok:
            raise InfeasibleError("the instance violates the decomposition conditions", rep)
    k = m.rank()
    ctx = _Context(g, m)
    W = _Work(ctx, g.vertices, g.edges, g.roots, k)
    parts = _run(W, strategy)
    order = ctx.eorder
    dec = Decomposition([(r, sorted(parts[r], key=order.__getitem__)) for r in g.roots])
    ok, msg = validate(g, m, dec)
    if not ok:
        raise AssertionError(f"construction produced an invalid decomposition: {msg}")
    return dec


# ---------------------------------------------------------------------------
# rooted components


@dataclass
class PartitionWitness:
    """Vertex partition violating |delta(P)| >= k|P| - sum r(R_X)."""

    partition: list
    cut: int
    bound: int


def c1_subset(g: GraphWithRoots, m: Matroid) -> list:
    """Greedy maximal sub-multiset of roots independent at every vertex."""
    keep = []
    at: dict = {v: [] for v in g.vertices}
    for r, v in g.roots.items():
        if m.is_independent(at[v] + [r]):
            at[v].append(r)
            keep.append(r)
    return keep


def dual_condition_value(g: GraphWithRoots, m: Matroid, partition) -> tuple[int, int]:
    """(|delta(P)|, k|P| - sum r(R_X)) for a vertex partition."""
    k = m.rank()
    cut = len(g.delta(partition))
    bound = k * len(partition) - sum(m.rank(g.roots_on(X)) for X in partition)
    return cut, bound


def rooted_component_packing(g: GraphWithRoots, m: Matroid,
                             strategy: str = "tight_first") -> Decomposition:
    """Rooted components whose roots span the matroid at every vertex.

    Raises :class:`InfeasibleError` with a :class:`PartitionWitness` when
    the partition condition fails.
    """
    if set(m.ground) != set(g.roots):
        raise InputError("matroid ground set must equal the set of root ids")
    k = m.rank()
    keep = c1_subset(g, m)
    mk = m.restrict(keep)
    gk = GraphWithRoots(g.vertices, g.edges, [(r, g.roots[r]) for r in keep])
    basis = count_basis(gk, mk)
    target = k * len(g.vertices) - len(keep)
    if len(basis) != target:
        P = _violating_partition(gk, mk, basis, k)
        cut, bound = dual_condition_value(g, m, P)
        if cut >= bound:
            raise AssertionError("extracted partition does not violate the condition")
        raise InfeasibleError("the partition condition fails", PartitionWitness(P, cut, bound))
    if k == 0 and g.edges:
        raise PreconditionError("a rank-zero matroid leaves no root to carry edges")
    sub = GraphWithRoots(g.vertices, {e: g.edges[e] for e in basis}, list(gk.roots.items()))
    dec = basic_decomposition(sub, mk, strategy=strategy, check=False)
    parts = dec.as_dict()
    spans = {r: _part_vertices(g, T) | {g.roots[r]} for r, T in parts.items()}
    chosen = set(basis)
    for e in g.edges:
        if e in chosen:
            continue
        a, b = g.edges[e]
        target_root = next(r for r in keep if a in spans[r] or b in spans[r])
        parts[target_root].append(e)
    order = {e: i for i, e in enumerate(g.edges)}
    out = Decomposition([(r, sorted(parts.get(r, []), key=order.__getitem__)) for r in g.roots],
                        kind="rooted_component")
    ok, msg = validate(g, m, out)
    if not ok:
        raise AssertionError(f"construction produced an invalid packing: {msg}")
    return out


def _violating_partition(g: GraphWithRoots, m: Matroid, basis: list, k: int) -> list:
    """Vertex partition attaining the rank formula for the basis.

    Blocks are the connected pieces of the maximal tight sets of the
    basis together with the edges outside the basis (each of which closes
    a circuit inside one block); remaining vertices are singletons.
    """
    sub = GraphWithRoots(g.vertices, {e: g.edges[e] for e in basis}, list(g.roots.items()))
    parent = {v: v for v in g.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def join(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    if sub.edges:
        for F in _maximal_tight_sets(sub, m, k, order=list(sub.edges)):
            for e in F:
                join(*sub.edges[e])
    chosen = set(basis)
    for e, (a, b) in g.edges.items():
        if e not in chosen:
            join(a, b)
    blocks: dict = {}
    for v in g.vertices:
        blocks.setdefault(find(v), []).append(v)
    P = list(blocks.values())
    value = (len(g.delta(P)) + k * (len(g.vertices) - len(P)) - len(g.roots)
             + sum(m.rank(g.roots_on(X)) for X in P))
    if value != len(basis):
        raise AssertionError("partition does not attain the rank formula")
    return P
