"""Brute-force reference implementations.

Everything here is deliberately naive and shares no code with the fast
paths: counts are recomputed from scratch, matroid ranks come from
enumerating subsets through the raw independence oracle, and
decompositions are found by trying every assignment of edges to roots.
Each oracle refuses inputs above its :class:`OracleBudget`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .errors import BudgetExceeded


@dataclass(frozen=True)
class OracleBudget:
    max_vertices: int = 5
    max_edges: int = 7
    max_roots: int = 4
    max_ground: int = 8

    def check(self, g, m=None) -> None:
        if len(g.vertices) > self.max_vertices:
            raise BudgetExceeded(f"{len(g.vertices)} vertices exceed budget {self.max_vertices}")
        if len(g.edges) > self.max_edges:
            raise BudgetExceeded(f"{len(g.edges)} edges exceed budget {self.max_edges}")
        if len(g.roots) > self.max_roots:
            raise BudgetExceeded(f"{len(g.roots)} roots exceed budget {self.max_roots}")
        if m is not None and len(m.ground) > self.max_ground:
            raise BudgetExceeded(f"{len(m.ground)} matroid elements exceed budget {self.max_ground}")


DEFAULT_BUDGET = OracleBudget()


# ---------------------------------------------------------------------------
# enumeration helpers


def set_partitions(items: Sequence) -> Iterator[list[list]]:
    """All partitions of ``items`` into nonempty blocks (restricted growth strings)."""
    items = list(items)
    n = len(items)
    if n == 0:
        yield []
        return
    a = [0] * n

    def emit():
        blocks: list[list] = [[] for _ in range(max(a) + 1)]
        for x, b in zip(items, a):
            blocks[b].append(x)
        return blocks

    def rec(i, top):
        if i == n:
            yield emit()
            return
        for b in range(top + 2):
            a[i] = b
            yield from rec(i + 1, max(top, b))

    a[0] = 0
    yield from rec(1, 0)


def subsets(items: Sequence, nonempty: bool = False) -> Iterator[tuple]:
    items = list(items)
    for size in range(1 if nonempty else 0, len(items) + 1):
        yield from itertools.combinations(items, size)


def brute_rank(m, X: Iterable) -> int:
    """Largest independent subset of X, by enumeration from the top."""
    X = list(dict.fromkeys(X))
    for size in range(len(X), -1, -1):
        for S in itertools.combinations(X, size):
            if m.is_independent(S):
                return size
    return 0


def _verts(g, F) -> set:
    out = set()
    for e in F:
        out.update(g.edges[e])
    return out


def _roots_on(g, X) -> list:
    return [r for r, v in g.roots.items() if v in X]


def brute_f(g, m, c: int, F) -> int:
    """c(|V(F)| - 1) - |R_F| + r(R_F), recomputed without the fast helpers."""
    X = _verts(g, F)
    R = _roots_on(g, X)
    return c * (len(X) - 1) - len(R) + brute_rank(m, R)


# ---------------------------------------------------------------------------
# rank of the count matroid


@dataclass
class RankCertificate:
    value: int
    partition: list          # minimising vertex partition
    edge_partition: list     # minimising (F_0, F_1, ..., F_m)


def rank_by_partitions(g, m, F: Iterable | None = None,
                       budget: OracleBudget = DEFAULT_BUDGET) -> RankCertificate:
    """Rank of F in the count matroid by two independent enumerations.

    The vertex-partition formula
    ``min |delta_F(P)| + k(|V| - |P|) - |R| + sum r(R_X)`` is compared with
    the edge-partition formula ``min |F_0| + sum f(F_i)``; they must agree.
    """
    budget.check(g, m)
    F = list(g.edges) if F is None else list(F)
    k = brute_rank(m, m.ground)
    best_v = None
    for P in set_partitions(g.vertices):
        block = {v: i for i, X in enumerate(P) for v in X}
        cut = sum(1 for e in F if block[g.edges[e][0]] != block[g.edges[e][1]])
        val = (cut + k * (len(g.vertices) - len(P)) - len(g.roots)
               + sum(brute_rank(m, _roots_on(g, set(X))) for X in P))
        if best_v is None or val < best_v[0]:
            best_v = (val, P)
    best_e = (0, [[]]) if not F else None
    if F:
        sentinel = object()
        for P in set_partitions([sentinel] + F):
            f0 = next(b for b in P if sentinel in b)
            val = len(f0) - 1
            rest = [b for b in P if sentinel not in b]
            val += sum(brute_f(g, m, k, b) for b in rest)
            if best_e is None or val < best_e[0]:
                best_e = (val, [[x for x in f0 if x is not sentinel]] + rest)
    if best_v[0] != best_e[0]:
        raise AssertionError(f"rank formulas disagree: {best_v[0]} != {best_e[0]}")
    return RankCertificate(best_v[0], best_v[1], best_e[1])


def independent_by_definition(g, m, F: Iterable, c: int | None = None) -> bool:
    """|F'| <= f(F') for every nonempty F' of F."""
    k = brute_rank(m, m.ground) if c is None else c
    return all(len(S) <= brute_f(g, m, k, S) for S in subsets(list(F), nonempty=True))


# ---------------------------------------------------------------------------
# violators and tight sets


@dataclass
class Violator:
    edges: tuple
    minimal: bool
    maximal: bool


def enumerate_sets(g, pred: Callable[[tuple], bool],
                   budget: OracleBudget = DEFAULT_BUDGET) -> list[tuple]:
    budget.check(g)
    return [S for S in subsets(list(g.edges), nonempty=True) if pred(S)]


def enumerate_violators(g, m, c: int | None = None, ell: int | None = None,
                        budget: OracleBudget = DEFAULT_BUDGET) -> list[Violator]:
    """All nonempty F with |F| + |R_F| > c|V(F)| - ell + r(R_F).

    Defaults: ``c = ell = rank(M)``.
    """
    budget.check(g, m)
    k = brute_rank(m, m.ground)
    c = k if c is None else c
    ell = c if ell is None else ell

    def bad(S):
        X = _verts(g, S)
        R = _roots_on(g, X)
        return len(S) + len(R) > c * len(X) - ell + brute_rank(m, R)

    found = enumerate_sets(g, bad, budget)
    sets = [frozenset(S) for S in found]
    out = []
    for S, fs in zip(found, sets):
        minimal = not any(t < fs for t in sets)
        maximal = not any(fs < t for t in sets)
        out.append(Violator(tuple(S), minimal, maximal))
    return out


def enumerate_tight_sets(g, m, budget: OracleBudget = DEFAULT_BUDGET) -> list[tuple]:
    budget.check(g, m)
    k = brute_rank(m, m.ground)
    return enumerate_sets(g, lambda S: len(S) == brute_f(g, m, k, S), budget)


def count_holds(g, m, c: int | None = None, ell: int | None = None,
                budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    return not enumerate_violators(g, m, c, ell, budget)


def bound_violators(g, bound: Callable[[tuple], int],
                    budget: OracleBudget = DEFAULT_BUDGET) -> list[tuple]:
    """All nonempty F with |F| > bound(F), for an arbitrary bound."""
    return enumerate_sets(g, lambda S: len(S) > bound(S), budget)


# ---------------------------------------------------------------------------
# decompositions


def _is_rooted_tree(g, T, r, acyclic: bool = True) -> bool:
    if not T:
        return True
    X = _verts(g, T)
    if r not in X:
        return False
    if acyclic and len(T) != len(X) - 1:
        return False
    adj: dict = {v: [] for v in X}
    for e in T:
        a, b = g.edges[e]
        adj[a].append(b)
        adj[b].append(a)
    seen = {r}
    stack = [r]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen == X


def is_basic_decomposition(g, m, parts: dict, spanning: bool = False) -> bool:
    """Direct check of a decomposition given as ``{root_id: edge list}``."""
    used = [e for T in parts.values() for e in T]
    if sorted(map(repr, used)) != sorted(map(repr, g.edges)) or len(used) != len(set(used)):
        return False
    k = brute_rank(m, m.ground)
    for rid, T in parts.items():
        if not _is_rooted_tree(g, T, g.roots[rid], acyclic=not spanning):
            return False
    for v in g.vertices:
        spanning_roots = [rid for rid, T in parts.items()
                          if g.roots[rid] == v or v in _verts(g, T)]
        if spanning:
            if brute_rank(m, spanning_roots) != k:
                return False
        elif len(spanning_roots) != k or not m.is_independent(spanning_roots):
            return False
    return True


def exhaustive_basic_decomposition(g, m, budget: OracleBudget = DEFAULT_BUDGET,
                                   spanning: bool = False):
    """First valid decomposition over all edge-to-root assignments, or None.

    With ``spanning`` the parts are rooted components (connected, cycles
    allowed) and every vertex needs a spanning set of roots.
    """
    budget.check(g, m)
    roots = list(g.roots)
    edges = list(g.edges)
    for assign in itertools.product(range(len(roots)), repeat=len(edges)):
        parts = {r: [] for r in roots}
        for e, i in zip(edges, assign):
            parts[roots[i]].append(e)
        if is_basic_decomposition(g, m, parts, spanning):
            return parts
    return None


# ---------------------------------------------------------------------------
# partition conditions


def dual_violating_partition(g, m, budget: OracleBudget = DEFAULT_BUDGET):
    """A partition P with |delta(P)| < k|P| - sum r(R_X), or None."""
    budget.check(g, m)
    k = brute_rank(m, m.ground)
    for P in set_partitions(g.vertices):
        block = {v: i for i, X in enumerate(P) for v in X}
        cut = sum(1 for a, b in g.edges.values() if block[a] != block[b])
        if cut < k * len(P) - sum(brute_rank(m, _roots_on(g, set(X))) for X in P):
            return P
    return None


def rado_minimum(st) -> tuple[int, tuple]:
    """Minimum of r(Gamma(F)) + |V+ minus F| over all plus-side subsets F.

    Recomputes neighbourhoods and ranks from the raw bipartite structure
    of a ``MatchingState``; exponential in the plus side.
    """
    plus = list(st.ends)
    if len(plus) > 16:
        raise BudgetExceeded("plus side too large for Rado enumeration")
    best = None
    for F in subsets(plus):
        slots = set()
        loops = []
        for x in F:
            for v in st.ends[x]:
                for i in range(st.slots):
                    slots.add((v, i))
            if x in st.loop_root:
                loops.append(st.loop_root[x])
        val = len(slots) + brute_rank(st.matroid, loops) + len(plus) - len(F)
        if best is None or val < best[0]:
            best = (val, F)
    return best
