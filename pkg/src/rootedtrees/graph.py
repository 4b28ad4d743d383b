"""Multigraphs carrying a multiset of roots."""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Sequence

from .errors import InputError

Vertex = Hashable
EdgeId = Hashable
RootId = Hashable


class GraphWithRoots:
    """A multigraph ``(V, E)`` with roots placed at vertices.

    Parameters
    ----------
    vertices : sequence
        Vertex ids; their order is the canonical vertex order.
    edges : sequence of pairs, or mapping of edge id to pair
        A plain sequence gets ids ``0, 1, ...`` in list order.  Parallel
        edges are allowed; self-loops are not.
    roots : sequence of ``(root_id, vertex)``
        Root placements; several roots may share a vertex.

    The object is treated as immutable after construction.
    """

    __slots__ = ("vertices", "edges", "roots", "_vindex", "_roots_at", "_incident")

    def __init__(self, vertices: Sequence[Vertex],
                 edges: Sequence[tuple] | Mapping[EdgeId, tuple],
                 roots: Sequence[tuple] = ()):
        self.vertices: tuple = tuple(vertices)
        self._vindex = {v: i for i, v in enumerate(self.vertices)}
        if len(self._vindex) != len(self.vertices):
            raise InputError("repeated vertex id")
        if isinstance(edges, Mapping):
            items = [(k, tuple(uv)) for k, uv in edges.items()]
        else:
            items = [(i, tuple(uv)) for i, uv in enumerate(edges)]
        self.edges: dict = {}
        self._incident: dict = {v: [] for v in self.vertices}
        for eid, uv in items:
            if len(uv) != 2:
                raise InputError(f"edge {eid!r} must have two endpoints")
            u, v = uv
            for x in uv:
                if x not in self._vindex:
                    raise InputError(f"edge {eid!r} uses unknown vertex {x!r}")
            if u == v:
                raise InputError(f"edge {eid!r} is a self-loop")
            self.edges[eid] = (u, v)
            self._incident[u].append(eid)
            self._incident[v].append(eid)
        self.roots: dict = {}
        self._roots_at: dict = {v: [] for v in self.vertices}
        for rid, v in roots:
            if rid in self.roots:
                raise InputError(f"repeated root id {rid!r}")
            if v not in self._vindex:
                raise InputError(f"root {rid!r} placed at unknown vertex {v!r}")
            self.roots[rid] = v
            self._roots_at[v].append(rid)

    # -- basic queries --------------------------------------------------------

    def vertex_index(self, v: Vertex) -> int:
        return self._vindex[v]

    def roots_at(self, v: Vertex) -> list:
        """R_v in root order."""
        return list(self._roots_at[v])

    def incident(self, v: Vertex) -> list:
        return list(self._incident[v])

    def vertices_of(self, F: Iterable[EdgeId]) -> list:
        """V(F) in vertex order."""
        seen = set()
        for e in F:
            seen.update(self.edges[e])
        return sorted(seen, key=self._vindex.__getitem__)

    def roots_on(self, X: Iterable[Vertex]) -> list:
        """Roots placed on the vertex set X, in root order."""
        xs = set(X)
        return [r for r, v in self.roots.items() if v in xs]

    def roots_of_edges(self, F: Iterable[EdgeId]) -> list:
        """R_F: roots placed on V(F)."""
        return self.roots_on(self.vertices_of(F))

    def delta(self, partition: Sequence[Iterable[Vertex]], F: Iterable[EdgeId] | None = None) -> list:
        """Edges of F (default E) joining different blocks of a vertex partition."""
        block = {}
        for i, part in enumerate(partition):
            for v in part:
                block[v] = i
        edges = self.edges if F is None else F
        return [e for e in edges if block[self.edges[e][0]] != block[self.edges[e][1]]]

    def check_edges(self, F: Iterable[EdgeId]) -> list:
        F = list(F)
        for e in F:
            if e not in self.edges:
                raise InputError(f"unknown edge id {e!r}")
        if len(set(F)) != len(F):
            raise InputError("repeated edge id")
        return F

    def components(self) -> list[list[Vertex]]:
        """Connected components as vertex lists, in vertex order."""
        seen: set = set()
        comps = []
        for s in self.vertices:
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            stack = [s]
            while stack:
                x = stack.pop()
                for e in self._incident[x]:
                    a, b = self.edges[e]
                    y = b if a == x else a
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        stack.append(y)
            comp.sort(key=self._vindex.__getitem__)
            comps.append(comp)
        return comps

    def induced(self, vertex_subset: Iterable[Vertex]) -> "GraphWithRoots":
        """Subgraph induced by a vertex set, with the roots placed there."""
        xs = set(vertex_subset)
        verts = [v for v in self.vertices if v in xs]
        edges = {e: uv for e, uv in self.edges.items() if uv[0] in xs and uv[1] in xs}
        roots = [(r, v) for r, v in self.roots.items() if v in xs]
        return GraphWithRoots(verts, edges, roots)

    def edge_subgraph(self, F: Iterable[EdgeId], keep_all_vertices: bool = True) -> "GraphWithRoots":
        F = set(F)
        edges = {e: uv for e, uv in self.edges.items() if e in F}
        if keep_all_vertices:
            return GraphWithRoots(self.vertices, edges, list(self.roots.items()))
        verts = self.vertices_of(edges)
        return GraphWithRoots(verts, edges, [(r, v) for r, v in self.roots.items() if v in set(verts)])

    def with_roots(self, roots: Sequence[tuple]) -> "GraphWithRoots":
        return GraphWithRoots(self.vertices, dict(self.edges), roots)

    def without_edges(self, F: Iterable[EdgeId]) -> "GraphWithRoots":
        drop = set(F)
        edges = {e: uv for e, uv in self.edges.items() if e not in drop}
        return GraphWithRoots(self.vertices, edges, list(self.roots.items()))

    def __eq__(self, other) -> bool:
        return (isinstance(other, GraphWithRoots) and self.vertices == other.vertices
                and list(self.edges.items()) == list(other.edges.items())
                and list(self.roots.items()) == list(other.roots.items()))

    def __hash__(self):
        return hash((self.vertices, tuple(self.edges.items()), tuple(self.roots.items())))

    def __repr__(self) -> str:
        return f"GraphWithRoots(|V|={len(self.vertices)}, |E|={len(self.edges)}, |R|={len(self.roots)})"

    def __reduce__(self):
        return (GraphWithRoots, (self.vertices, dict(self.edges), list(self.roots.items())))
