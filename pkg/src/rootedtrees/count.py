"""Count functions and their matroid-intersection decision procedure.

For a graph with roots ``(G, R)`` and a matroid ``M`` on ``R`` the count

    f_{M,c}(F) = c(|V(F)| - 1) - (|R_F| - r_M(R_F))

controls whether ``G`` splits into basic rooted trees.  Whether
``|F| <= f(F)`` holds for every nonempty ``F`` is decided with bipartite
independent matchings: every root becomes a self-loop, the plus side of
the bipartite graph holds edges and loops, the minus side holds ``c``
slots per vertex plus one copy of every loop carrying ``M``.  An edge
``e`` lies in no violating set iff the matching still covers the plus
side after ``l`` extra copies of ``e`` are added.

The engine is parametrised by the number ``c`` of slots per vertex and
the number ``l`` of copies, so the same code decides the rigidity counts
(``2|V(F)| - 3``, ``2|V(F)| - 2`` and friends).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .errors import InputError, PreconditionError
from .graph import GraphWithRoots
from .matroid import Matroid


# ---------------------------------------------------------------------------
# direct evaluation


def f_value(g: GraphWithRoots, m: Matroid, c: int, F: Iterable) -> int:
    """f_{M,c}(F) = c(|V(F)| - 1) - (|R_F| - r_M(R_F)) for nonempty F."""
    F = g.check_edges(F)
    if not F:
        raise InputError("f is defined on nonempty edge sets only")
    verts = g.vertices_of(F)
    rf = g.roots_on(verts)
    return c * (len(verts) - 1) - (len(rf) - m.rank(rf))


def count_bound(g: GraphWithRoots, m: Matroid, c: int, ell: int, F: Iterable) -> int:
    """c|V(F)| - l - |R_F| + r_M(R_F): the bound on |F| for offset ``ell``."""
    F = list(F)
    verts = g.vertices_of(F)
    rf = g.roots_on(verts)
    return c * len(verts) - ell - len(rf) + m.rank(rf)


def is_tight(g: GraphWithRoots, m: Matroid, F: Iterable, k: int | None = None) -> bool:
    F = list(F)
    k = m.rank() if k is None else k
    return bool(F) and len(F) == f_value(g, m, k, F)


def violates(g: GraphWithRoots, m: Matroid, F: Iterable, c: int, ell: int) -> bool:
    F = list(F)
    return bool(F) and len(F) > count_bound(g, m, c, ell, F)


# ---------------------------------------------------------------------------
# independent matching


class _LPrime:
    def __repr__(self) -> str:
        return "L'"


LPRIME = _LPrime()


class MatchingState:
    """Bipartite graph H with a current independent matching.

    Plus side: keys ``("e", edge_id)`` for edges, ``("r", root_id)`` for
    root self-loops and ``("c", n)`` for copies of a distinguished
    element.  Minus side: ``slots`` copies of every vertex (stored
    compressed as a capacity) and the copy ``L'`` of the loops, on which
    the matroid acts.  ``where[x]`` is the vertex whose slot ``x`` uses,
    :data:`LPRIME` if the loop ``x`` is matched to its own copy in
    ``L'``, or ``None`` if ``x`` is unmatched.
    """

    def __init__(self, vertices: Sequence[Hashable], slots: int, matroid: Matroid):
        self.slots = slots
        self.matroid = matroid
        self.ends: dict = {}
        self.loop_root: dict = {}
        self.where: dict = {}
        self.at: dict = {v: {} for v in vertices}
        self.lprime: dict = {}
        self._ncopies = 0

    # -- construction -------------------------------------------------------

    @classmethod
    def for_instance(cls, g: GraphWithRoots, m: Matroid, slots: int | None = None,
                     greedy: bool = True) -> "MatchingState":
        """The graph H_0 of an instance with an initial greedy matching."""
        st = cls(g.vertices, m.rank() if slots is None else slots, m)
        for rid, v in g.roots.items():
            st.add_loop(rid, v)
        for e, (u, v) in g.edges.items():
            st.add_edge(e, u, v)
        if greedy:
            st.greedy()
        return st

    def add_edge(self, e, u, v) -> tuple:
        key = ("e", e)
        if key in self.ends:
            raise InputError(f"edge {e!r} already present")
        self.ends[key] = (u, v)
        self.where[key] = None
        return key

    def add_loop(self, rid, v) -> tuple:
        key = ("r", rid)
        if key in self.ends:
            raise InputError(f"root {rid!r} already present")
        self.ends[key] = (v,)
        self.loop_root[key] = rid
        self.where[key] = None
        return key

    def add_copies(self, x, count: int) -> list:
        """Add ``count`` copies of plus element ``x`` (slot neighbours only)."""
        keys = []
        for _ in range(count):
            key = ("c", self._ncopies)
            self._ncopies += 1
            self.ends[key] = self.ends[x]
            self.where[key] = None
            keys.append(key)
        return keys

    def sub_state(self, vertices, keys) -> "MatchingState":
        """Copy of the matching restricted to the plus elements ``keys``.

        Every slot these elements use must belong to ``vertices``.
        """
        st = MatchingState(vertices, self.slots, self.matroid)
        for x in keys:
            st.ends[x] = self.ends[x]
            if x in self.loop_root:
                st.loop_root[x] = self.loop_root[x]
            st.where[x] = None
            st._move(x, self.where[x])
        return st

    def add_vertex(self, v) -> None:
        if v not in self.at:
            self.at[v] = {}

    def remove(self, x) -> None:
        """Remove a plus element, freeing whatever it was matched to."""
        self._move(x, None)
        del self.ends[x]
        del self.where[x]
        self.loop_root.pop(x, None)

    # -- matching primitives ----------------------------------------------------

    def _move(self, x, place) -> None:
        old = self.where[x]
        if old is LPRIME:
            del self.lprime[self.loop_root[x]]
        elif old is not None:
            del self.at[old][x]
        if place is LPRIME:
            self.lprime[self.loop_root[x]] = x
        elif place is not None:
            self.at[place][x] = None
        self.where[x] = place

    def _indep_with(self, extra) -> bool:
        return self.matroid._independent_unchecked(list(self.lprime) + [extra])

    def greedy(self) -> None:
        """Match unmatched elements wherever a free neighbour exists."""
        for x, w in list(self.where.items()):
            if w is not None:
                continue
            rid = self.loop_root.get(x)
            if rid is not None and self._indep_with(rid):
                self._move(x, LPRIME)
                continue
            for v in self.ends[x]:
                if len(self.at[v]) < self.slots:
                    self._move(x, v)
                    break

    def _lprime_moves(self, rid, cache: dict):
        """(True, None) if rid can enter L' freely, else (False, evictable roots).

        Parallel roots behave identically, so results are cached per
        parallel class for the duration of one search.
        """
        key = self._class_of(rid)
        hit = cache.get(key)
        if hit is not None:
            return hit
        indep = self.matroid._independent_unchecked
        base = list(self.lprime)
        if indep(base + [rid]):
            res = (True, ())
        else:
            res = (False, tuple(u for i, u in enumerate(base)
                                if indep(base[:i] + base[i + 1:] + [rid])))
        cache[key] = res
        return res

    def _class_of(self, rid):
        cls = getattr(self.matroid, "parallel_class", None)
        return cls(rid) if cls is not None else rid

    def augment(self, x) -> bool:
        """Try to match ``x`` along a shortest augmenting path."""
        if self.where[x] is not None:
            return True
        parent: dict = {x: None}
        queue = deque([x])
        expanded: set = set()
        at, slots, ends = self.at, self.slots, self.ends
        cache: dict = {}
        while queue:
            y = queue.popleft()
            for v in ends[y]:
                if len(at[v]) < slots:
                    self._apply(parent, y, v)
                    return True
                if v not in expanded:
                    expanded.add(v)
                    for z in at[v]:
                        if z not in parent:
                            parent[z] = (y, v)
                            queue.append(z)
            rid = self.loop_root.get(y)
            if rid is not None and self.where[y] is not LPRIME:
                free, evictable = self._lprime_moves(rid, cache)
                if free:
                    self._apply(parent, y, LPRIME)
                    return True
                for u in evictable:
                    z = self.lprime[u]
                    if z not in parent:
                        parent[z] = (y, LPRIME)
                        queue.append(z)
        return False

    def _apply(self, parent: dict, y, place) -> None:
        moves = []
        while True:
            moves.append((y, place))
            p = parent[y]
            if p is None:
                break
            y, place = p
        for y, _ in moves:
            self._move(y, None)
        for y, place in moves:
            self._move(y, place)

    def augment_all(self) -> bool:
        """Augment every unmatched element; True iff the plus side is covered."""
        ok = True
        for x in [x for x, w in self.where.items() if w is None]:
            if not self.augment(x):
                ok = False
        return ok

    # -- inspection ------------------------------------------------------------------

    @property
    def plus_side(self) -> list:
        return list(self.ends)

    def matching(self) -> dict:
        """Matched pairs, minus side spelled out as ``("slot", v, i)`` or ``("L'", rid)``."""
        out = {}
        for v, elems in self.at.items():
            for i, x in enumerate(elems):
                out[x] = ("slot", v, i)
        for rid, x in self.lprime.items():
            out[x] = ("L'", rid)
        return {x: out[x] for x in self.ends if x in out}

    def size(self) -> int:
        return sum(1 for w in self.where.values() if w is not None)

    def is_covering(self) -> bool:
        return all(w is not None for w in self.where.values())

    def minus_side(self) -> list:
        nodes = [("slot", v, i) for v in self.at for i in range(self.slots)]
        nodes += [("L'", self.loop_root[x]) for x in self.ends if x in self.loop_root]
        return nodes

    def neighbours(self, x) -> list:
        """Minus-side neighbours of a plus element in H."""
        out = [("slot", v, i) for v in self.ends[x] for i in range(self.slots)]
        if x in self.loop_root:
            out.append(("L'", self.loop_root[x]))
        return out

    def exchangeability_graph(self) -> tuple[list, set, set]:
        """Explicit arcs, entrances and exits of the exchangeability graph.

        Returns ``(arcs, S_plus, S_minus)``.  Arcs are labelled pairs
        ``(kind, tail, head)`` with kind in ``{"A0", "M0", "A+", "A-"}``.
        Meant for inspection on small instances.
        """
        match = self.matching()
        matched_minus = {n: x for x, n in match.items()}
        arcs = []
        for x in self.ends:
            for n in self.neighbours(x):
                if match.get(x) != n:
                    arcs.append(("A0", x, n))
        for n, x in matched_minus.items():
            arcs.append(("M0", n, x))
        used_l = [n[1] for n in matched_minus if n[0] == "L'"]
        exits = set()
        for n in self.minus_side():
            if n in matched_minus:
                continue
            if n[0] == "slot" or self.matroid._independent_unchecked(used_l + [n[1]]):
                exits.add(n)
                continue
            for i, u in enumerate(used_l):
                if self.matroid._independent_unchecked(used_l[:i] + used_l[i + 1:] + [n[1]]):
                    arcs.append(("A-", n, ("L'", u)))
        entrances = {x for x in self.ends if x not in match}
        return arcs, entrances, exits

    def exit_reaching(self) -> set:
        """Plus elements from which some exit is reachable."""
        slots, at = self.slots, self.at
        inc: dict = {v: [] for v in at}
        for x, vs in self.ends.items():
            for v in vs:
                inc[v].append(x)
        reach: set = set()
        vreach: set = set()
        queue: deque = deque()
        lp_pred: dict = {}

        def mark_vertex(v):
            if v not in vreach:
                vreach.add(v)
                for y in inc[v]:
                    if y not in reach:
                        reach.add(y)
                        queue.append(y)

        for v in at:
            if len(at[v]) < slots:
                mark_vertex(v)
        cache: dict = {}
        for y, rid in self.loop_root.items():
            if self.where[y] is LPRIME:
                continue
            free, evictable = self._lprime_moves(rid, cache)
            if free:
                if y not in reach:
                    reach.add(y)
                    queue.append(y)
                continue
            for u in evictable:
                lp_pred.setdefault(self.lprime[u], []).append(y)
        while queue:
            z = queue.popleft()
            w = self.where[z]
            if w is LPRIME:
                for y in lp_pred.get(z, ()):
                    if y not in reach:
                        reach.add(y)
                        queue.append(y)
            elif w is not None:
                mark_vertex(w)
        return reach

    def non_exit_set(self) -> list:
        """Plus elements that reach no exit: the largest Rado minimiser."""
        reach = self.exit_reaching()
        return [x for x in self.ends if x not in reach]

    def rado_value(self, F: Iterable) -> int:
        """r_{N-}(Gamma(F)) + |V+ minus F| for a set F of plus elements."""
        F = list(F)
        verts = {v for x in F for v in self.ends[x]}
        loops = [self.loop_root[x] for x in F if x in self.loop_root]
        return (self.slots * len(verts) + self.matroid.rank(dict.fromkeys(loops))
                + len(self.ends) - len(F))


def max_independent_matching(st: MatchingState) -> MatchingState:
    """Augment ``st`` in place to a maximum independent matching and return it."""
    st.augment_all()
    return st


# ---------------------------------------------------------------------------
# reports


@dataclass
class ConditionReport:
    """Outcome of checking the three conditions.

    ``c2_ok`` is ``None`` when the matching route could not decide the
    count because some vertex carries more than ``k`` roots
    (C1 already fails there, so the verdict is negative anyway).
    """

    c1_ok: bool
    c1_vertex: Hashable | None
    c2_ok: bool | None
    c2_witness: list | None
    c3_ok: bool
    counts: tuple
    rank_k: int
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return bool(self.c1_ok and self.c2_ok and self.c3_ok)

    def to_dict(self) -> dict:
        d = {
            "ok": self.ok,
            "rank_k": self.rank_k,
            "c1": {"ok": self.c1_ok, "vertex": self.c1_vertex},
            "c2": {"ok": self.c2_ok, "witness": self.c2_witness},
            "c3": {"ok": self.c3_ok, "edges": self.counts[0], "roots": self.counts[1],
                   "target": self.counts[2]},
        }
        if self.extra:
            d["extra"] = self.extra
        return d


# ---------------------------------------------------------------------------
# sparsity decisions


def _edge_component(g: GraphWithRoots, F: Iterable, e) -> list:
    """Edges of F connected to e, in edge order."""
    F = set(F)
    by_vertex: dict = {}
    for f in F:
        for v in g.edges[f]:
            by_vertex.setdefault(v, []).append(f)
    comp = {e}
    stack = [e]
    while stack:
        f = stack.pop()
        for v in g.edges[f]:
            for h in by_vertex[v]:
                if h not in comp:
                    comp.add(h)
                    stack.append(h)
    return [f for f in g.edges if f in comp]


def locality_order(g: GraphWithRoots, edges: Iterable | None = None) -> list:
    """Edges in breadth-first order from the first vertex of each component.

    Consecutive edges in this order are close in the graph, which keeps
    the augmenting searches of successive per-edge tests short.
    """
    wanted = g.edges if edges is None else set(edges)
    order: list = []
    seen_e: set = set()
    seen_v: set = set()
    for s in g.vertices:
        if s in seen_v:
            continue
        seen_v.add(s)
        q = deque([s])
        while q:
            x = q.popleft()
            for e in g.incident(x):
                if e in seen_e:
                    continue
                seen_e.add(e)
                if e in wanted:
                    order.append(e)
                a, b = g.edges[e]
                y = b if a == x else a
                if y not in seen_v:
                    seen_v.add(y)
                    q.append(y)
    return order


def _max_load(g: GraphWithRoots) -> int:
    """Largest number of roots on one vertex.

    With at most ``c`` roots per vertex, a set of edges and loops that
    beats the count can drop its loop-only vertices and still beat it, so
    the matching decision agrees with the count on edge sets.
    """
    return max((len(g.roots_at(v)) for v in g.vertices), default=0)


def test_edge(st: MatchingState, key, ell: int, extract: bool = False):
    """Decide whether no set containing plus element ``key`` violates offset ``ell``.

    Adds ``ell`` copies of ``key``, augments, and removes them again
    (the remaining matching still covers the original plus side).  With
    ``extract`` the plus elements that reach no exit are returned as
    well.  Returns ``(ok, Z)``.
    """
    copies = st.add_copies(key, ell)
    ok = True
    for c in copies:
        if not st.augment(c):
            ok = False
            break
    Z = st.non_exit_set() if (extract or not ok) else None
    for c in copies:
        st.remove(c)
    return ok, Z


def sparsity_violation(g: GraphWithRoots, m: Matroid, c: int, ell: int,
                       edges: Iterable | None = None, jobs: int = 1,
                       state: MatchingState | None = None):
    """Find F with |F| > c|V(F)| - ell - |R_F| + r(R_F), or return None.

    Only sets meeting ``edges`` (default: all of E) are searched.
    Requires ``|R_v| <= c`` at every vertex.  The witness is a
    maximal violating set through the first failing edge and is checked
    by direct evaluation.
    """
    if _max_load(g) > c:
        raise PreconditionError("a vertex carries more than c roots")
    st = state if state is not None else MatchingState.for_instance(g, m, slots=c)
    if not st.augment_all():
        F = [x[1] for x in st.non_exit_set() if x[0] == "e"]
        if not violates(g, m, F, c, 0):
            raise AssertionError("extracted set does not violate the count")
        return _best_violator(g, m, c, ell, F, None)
    order = locality_order(g, edges)
    if jobs > 1 and len(order) > 1:
        return _parallel_violation(g, m, c, ell, order, jobs)
    for e in order:
        ok, Z = test_edge(st, ("e", e), ell)
        if not ok:
            F = [x[1] for x in Z if x[0] == "e"]
            return _best_violator(g, m, c, ell, F, e)
    return None


def _best_violator(g, m, c, ell, F, e) -> list:
    """Prefer the connected piece through ``e``; fall back to all of F."""
    F = [f for f in g.edges if f in set(F)]
    if e is not None:
        comp = _edge_component(g, F, e)
        if violates(g, m, comp, c, ell):
            return comp
    if not violates(g, m, F, c, ell):
        raise AssertionError("extracted set does not violate the count")
    return F


def _worker(args):
    g, m, c, ell, chunk = args
    st = MatchingState.for_instance(g, m, slots=c)
    st.augment_all()
    for e in chunk:
        ok, Z = test_edge(st, ("e", e), ell)
        if not ok:
            return e, [x[1] for x in Z if x[0] == "e"]
    return None


def _parallel_violation(g, m, c, ell, order, jobs):
    from concurrent.futures import ProcessPoolExecutor

    size = -(-len(order) // jobs)
    chunks = [order[i:i + size] for i in range(0, len(order), size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(_worker, [(g, m, c, ell, ch) for ch in chunks]))
    for res in results:
        if res is not None:
            e, F = res
            return _best_violator(g, m, c, ell, F, e)
    return None


def check_conditions(g: GraphWithRoots, m: Matroid, jobs: int = 1) -> ConditionReport:
    """Decide C1 (independent roots per vertex), C2 (the count) and C3 (the total)."""
    if set(m.ground) != set(g.roots):
        raise InputError("matroid ground set must equal the set of root ids")
    k = m.rank()
    c1_vertex = None
    for v in g.vertices:
        if not m.is_independent(g.roots_at(v)):
            c1_vertex = v
            break
    target = k * len(g.vertices)
    counts = (len(g.edges), len(g.roots), target)
    c3_ok = counts[0] + counts[1] == target
    if _max_load(g) > k:
        c2_ok, witness = None, None
    else:
        witness = sparsity_violation(g, m, k, k, jobs=jobs)
        c2_ok = witness is None
    return ConditionReport(c1_ok=c1_vertex is None, c1_vertex=c1_vertex, c2_ok=c2_ok,
                           c2_witness=witness, c3_ok=c3_ok, counts=counts, rank_k=k)


def count_rank(g: GraphWithRoots, m: Matroid, F: Iterable | None = None) -> int:
    """Rank of F (default E) in the count matroid of f_{M,k}.

    Greedy in edge order: ``e`` joins the current independent set I when
    the bipartite graph of ``(V, I + e, R)`` with ``k`` extra copies of
    ``e`` still has a covering matching.
    """
    F = list(g.edges) if F is None else g.check_edges(F)
    return len(count_basis(g, m, F))


def count_basis(g: GraphWithRoots, m: Matroid, F: Iterable | None = None) -> list:
    """Greedy basis of F in the count matroid of f_{M,k}, in the given order."""
    F = list(g.edges) if F is None else g.check_edges(F)
    for v in g.vertices:
        if not m.is_independent(g.roots_at(v)):
            raise PreconditionError(f"roots at vertex {v!r} are dependent")
    k = m.rank()
    base = GraphWithRoots(g.vertices, {}, list(g.roots.items()))
    st = MatchingState.for_instance(base, m, slots=k)
    if not st.augment_all():
        raise AssertionError("loops alone cannot fail to be covered under C1")
    chosen = []
    for e in F:
        u, v = g.edges[e]
        key = st.add_edge(e, u, v)
        if not st.augment(key):
            st.remove(key)
            continue
        ok, _ = test_edge(st, key, k)
        if ok:
            chosen.append(e)
        else:
            st.remove(key)
    return chosen


def find_tight_set(g: GraphWithRoots, m: Matroid, e, mode: str = "tight",
                   state: MatchingState | None = None):
    """Maximal tight set (or a maximal violating set) containing edge ``e``.

    ``mode="tight"`` presumes the count holds and returns the unique
    maximal F containing e with |F| = f_{M,k}(F), or None.
    ``mode="violating"`` returns, among the sets containing e that
    maximise the deficiency |F| - f_{M,k}(F), the largest one, provided
    that deficiency is positive; otherwise None.  This set may be
    disconnected, and a violating superset with smaller deficiency can
    exist.
    """
    if e not in g.edges:
        raise InputError(f"unknown edge id {e!r}")
    if mode not in ("tight", "violating"):
        raise InputError(f"unknown mode {mode!r}")
    k = m.rank()
    if _max_load(g) > k:
        raise PreconditionError("a vertex carries more than k roots")
    st = state if state is not None else MatchingState.for_instance(g, m, slots=k)
    covered = st.augment_all()
    if mode == "tight":
        if not covered:
            raise PreconditionError("the count fails; no tight sets are defined")
        ok, Z = test_edge(st, ("e", e), k, extract=True)
        if not ok:
            raise PreconditionError("the count fails at this edge")
        Zs = {x[1] for x in Z if x[0] == "e"}
        if e not in Zs:
            return None
        F = _edge_component(g, Zs, e)
        if not is_tight(g, m, F, k):
            raise AssertionError("extracted set is not tight")
        return F
    # Enough copies of e that every maximiser of the deficiency contains
    # them; what remains of the largest maximiser is then the most
    # violating set through e, and it violates iff any set through e does.
    deficit = sum(1 for w in st.where.values() if w is None)
    copies = st.add_copies(("e", e), deficit + 2 * k + 1)
    for c in copies:
        st.augment(c)
    Zs = [x[1] for x in st.non_exit_set() if x[0] == "e"]
    for c in copies:
        st.remove(c)
    if e not in Zs or not violates(g, m, Zs, k, k):
        return None
    Zs = set(Zs)
    return [f for f in g.edges if f in Zs]


def check_counts(g: GraphWithRoots, m: Matroid, c: int, ell: int, total: int | None = None,
                 jobs: int = 1) -> ConditionReport:
    """The three conditions for an arbitrary offset.

    C1 asks for at most ``c`` independent roots per vertex, C2 for
    ``|F| + |R_F| <= c|V(F)| - ell + r(R_F)`` on every nonempty F, and C3
    for ``|E| + |R| = total`` (default ``c|V|``).  With ``c = ell = rank``
    this is :func:`check_conditions`.
    """
    if set(m.ground) != set(g.roots):
        raise InputError("matroid ground set must equal the set of root ids")
    c1_vertex = None
    for v in g.vertices:
        rv = g.roots_at(v)
        if len(rv) > c or not m.is_independent(rv):
            c1_vertex = v
            break
    target = c * len(g.vertices) if total is None else total
    counts = (len(g.edges), len(g.roots), target)
    if _max_load(g) > c:
        c2_ok, witness = None, None
    else:
        witness = sparsity_violation(g, m, c, ell, jobs=jobs)
        c2_ok = witness is None
    return ConditionReport(c1_ok=c1_vertex is None, c1_vertex=c1_vertex, c2_ok=c2_ok,
                           c2_witness=witness, c3_ok=counts[0] + counts[1] == target,
                           counts=counts, rank_k=c, extra={"ell": ell} if ell != c else {})
