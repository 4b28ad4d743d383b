"""Matroids given by independence oracles.

A :class:`Matroid` is an immutable value.  Derived matroids (restriction,
deletion, parallel extension, coloops, truncation) are not materialized;
each handle keeps a *normal form* against a base oracle:

* a base kind that decides independence of a set of *tokens*;
* a map from each ground element to its token (parallel elements share a
  token, coloops get a private token the base never sees);
* an optional truncation cap on the size of independent sets.

A set is independent iff its tokens are pairwise distinct, the base
tokens are independent in the base kind and the set respects the cap.
When a modifier cannot be folded into this form (coloops added on top of
a truncation) the current handle becomes the base of a new one.

Element ids are arbitrary hashable values (the package uses strings).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Hashable, Iterable, Mapping, Sequence

from .errors import InputError

Element = Hashable


# ---------------------------------------------------------------------------
# base kinds: each decides independence of a list of distinct tokens


class _Free:
    name = "free"

    def independent(self, tokens: Sequence) -> bool:
        return True


class _Uniform:
    name = "uniform"

    def __init__(self, rank: int):
        if rank < 0:
            raise InputError("uniform rank must be nonnegative")
        self.rank = rank

    def independent(self, tokens: Sequence) -> bool:
        return len(tokens) <= self.rank


class _Graphic:
    name = "graphic"

    def __init__(self, edges: Mapping[Element, tuple]):
        self.edges = dict(edges)

    def independent(self, tokens: Sequence) -> bool:
        parent: dict = {}

        def find(x):
            root = x
            while parent.get(root, root) != root:
                root = parent[root]
            while x != root:
                parent[x], x = root, parent.get(x, x)
            return root

        for t in tokens:
            a, b = self.edges[t]
            ra, rb = find(a), find(b)
            if ra == rb:
                return False
            parent[ra] = rb
        return True


class _Linear:
    name = "linear"

    def __init__(self, vectors: Mapping[Element, Sequence]):
        self.vectors = {e: tuple(Fraction(x) for x in v) for e, v in vectors.items()}
        lengths = {len(v) for v in self.vectors.values()}
        if len(lengths) > 1:
            raise InputError("linear matroid vectors must share one length")

    def independent(self, tokens: Sequence) -> bool:
        # incremental elimination: keep an echelon basis keyed by pivot column
        basis: dict[int, tuple] = {}
        for t in tokens:
            v = list(self.vectors[t])
            for col, row in basis.items():
                if v[col] != 0:
                    f = v[col] / row[col]
                    v = [x - f * y for x, y in zip(v, row)]
            piv = next((i for i, x in enumerate(v) if x != 0), None)
            if piv is None:
                return False
            basis[piv] = tuple(v)
        return True


class _Colored:
    name = "colored"

    def __init__(self, colors: Mapping[Element, Hashable], cap: int):
        self.colors = dict(colors)
        self.cap = cap

    def independent(self, tokens: Sequence) -> bool:
        if len(tokens) > self.cap:
            return False
        seen = {self.colors[t] for t in tokens}
        return len(seen) == len(tokens)


class _Nested:
    """Use a whole matroid as base kind; tokens are its elements."""

    name = "nested"

    def __init__(self, inner: "Matroid"):
        self.inner = inner

    def independent(self, tokens: Sequence) -> bool:
        return self.inner._independent_unchecked(tokens)


class _Coloop:
    """Private token of an element added as a coloop."""

    __slots__ = ("ident",)

    def __init__(self, ident):
        self.ident = ident

    def __repr__(self) -> str:
        return f"coloop({self.ident!r})"


# ---------------------------------------------------------------------------


class Matroid:
    """Immutable matroid on an ordered ground set of element ids.

    Build with one of the constructors :meth:`free`, :meth:`uniform`,
    :meth:`graphic`, :meth:`linear`, :meth:`colored` and derive new
    handles with :meth:`restrict`, :meth:`delete`, :meth:`add_parallel`,
    :meth:`add_coloops`, :meth:`truncate`.
    """

    __slots__ = ("_kind", "_ground", "_members", "_token", "_cap", "kind", "payload", "modifiers")

    def __init__(self, kind, ground, token, cap, spec_kind, payload, modifiers):
        self._kind = kind
        self._ground: tuple = tuple(ground)
        self._members = frozenset(self._ground)
        self._token: dict = token
        self._cap: int | None = cap
        self.kind: str = spec_kind
        self.payload: Any = payload
        self.modifiers: tuple = modifiers

    # -- constructors -------------------------------------------------------

    @staticmethod
    def _check_ids(ids) -> tuple:
        ids = tuple(ids)
        if len(set(ids)) != len(ids):
            raise InputError("repeated element id in ground set")
        return ids

    @classmethod
    def free(cls, elements: Iterable[Element]) -> "Matroid":
        ids = cls._check_ids(elements)
        return cls(_Free(), ids, {e: e for e in ids}, None, "free", None, ())

    @classmethod
    def uniform(cls, elements: Iterable[Element], rank: int) -> "Matroid":
        ids = cls._check_ids(elements)
        return cls(_Uniform(rank), ids, {e: e for e in ids}, None, "uniform", rank, ())

    @classmethod
    def graphic(cls, edges: Mapping[Element, tuple]) -> "Matroid":
        """Graphic matroid; ``edges`` maps element id to an auxiliary edge."""
        ids = cls._check_ids(edges)
        payload = {e: tuple(edges[e]) for e in ids}
        for e, uv in payload.items():
            if len(uv) != 2:
                raise InputError(f"graphic element {e!r} needs two endpoints")
        return cls(_Graphic(payload), ids, {e: e for e in ids}, None, "graphic", payload, ())

    @classmethod
    def linear(cls, vectors: Mapping[Element, Sequence]) -> "Matroid":
        """Linear matroid over the rationals; ``vectors`` maps id to vector."""
        ids = cls._check_ids(vectors)
        kind = _Linear({e: vectors[e] for e in ids})
        return cls(kind, ids, {e: e for e in ids}, None, "linear", kind.vectors, ())

    @classmethod
    def colored(cls, colors: Mapping[Element, Hashable], cap: int) -> "Matroid":
        """Independent iff colors are pairwise distinct and size <= cap."""
        ids = cls._check_ids(colors)
        payload = {e: colors[e] for e in ids}
        return cls(_Colored(payload, cap), ids, {e: e for e in ids}, None,
                   "colored", (payload, cap), ())

    # -- oracle -------------------------------------------------------------

    @property
    def ground(self) -> tuple:
        return self._ground

    def __contains__(self, x) -> bool:
        return x in self._members

    def __len__(self) -> int:
        return len(self._ground)

    def _tokens(self, subset) -> list:
        toks = []
        seen = set()
        members = self._members
        for x in subset:
            if x not in members:
                raise InputError(f"unknown matroid element {x!r}")
            if x in seen:
                raise InputError(f"element {x!r} repeated in subset")
            seen.add(x)
            toks.append(self._token[x])
        return toks

    def _decide(self, toks: list) -> bool:
        if self._cap is not None and len(toks) > self._cap:
            return False
        if len(set(toks)) != len(toks):
            return False
        base = [t for t in toks if not isinstance(t, _Coloop)]
        return self._kind.independent(base)

    def _independent_unchecked(self, subset) -> bool:
        return self._decide([self._token[x] for x in subset])

    def is_independent(self, subset: Iterable[Element]) -> bool:
        """True iff ``subset`` is independent."""
        return self._decide(self._tokens(subset))

    def rank(self, subset: Iterable[Element] | None = None) -> int:
        """Rank by greedy extension (ground set if ``subset`` is None)."""
        return len(self.basis(subset))

    def basis(self, subset: Iterable[Element] | None = None) -> list:
        """Greedy maximal independent subset, scanning in the given order."""
        items = self._ground if subset is None else list(subset)
        self._tokens(items)
        chosen: list = []
        for x in items:
            if self._independent_unchecked(chosen + [x]):
                chosen.append(x)
        return chosen

    def parallel_class(self, x):
        """A key shared exactly by elements made parallel through :meth:`add_parallel`."""
        return self._token[x]

    def span(self, subset: Iterable[Element]) -> frozenset:
        """Closure of ``subset``: all x with rank(X + x) = rank(X)."""
        items = list(subset)
        b = self.basis(items)
        inside = set(items)
        return frozenset(x for x in self._ground
                         if x in inside or not self._independent_unchecked(b + [x]))

    # -- derivations ----------------------------------------------------------

    def _derived(self, kind, ground, token, cap, modifier) -> "Matroid":
        return Matroid(kind, ground, token, cap, self.kind, self.payload,
                       self.modifiers + (modifier,))

    def restrict(self, subset: Iterable[Element]) -> "Matroid":
        """Restriction to ``subset`` (kept in ground order)."""
        items = list(subset)
        self._tokens(items)
        keep = set(items)
        ground = tuple(x for x in self._ground if x in keep)
        return self._derived(self._kind, ground, self._token, self._cap,
                             ("restrict", tuple(ground)))

    def delete(self, subset: Iterable[Element]) -> "Matroid":
        """Deletion of ``subset``."""
        drop = list(subset)
        self._tokens(drop)
        drop_ids = set(drop)
        ground = tuple(x for x in self._ground if x not in drop_ids)
        return self._derived(self._kind, ground, self._token, self._cap,
                             ("delete", tuple(drop)))

    def _fresh(self, ids) -> tuple:
        ids = tuple(ids)
        if len(set(ids)) != len(ids):
            raise InputError("repeated new element id")
        for n in ids:
            if n in self._members:
                raise InputError(f"element id {n!r} already in ground set")
        return ids

    def add_parallel(self, base: Element, new: Element) -> "Matroid":
        """Add ``new`` as an element parallel to ``base``."""
        if base not in self._members:
            raise InputError(f"unknown matroid element {base!r}")
        (new,) = self._fresh([new])
        token = dict(self._token)
        token[new] = token[base]
        return self._derived(self._kind, self._ground + (new,), token, self._cap,
                             ("add_parallel", base, new))

    def add_parallels(self, pairs: Iterable[tuple]) -> "Matroid":
        """Add several parallel elements at once; pairs are (base, new)."""
        pairs = list(pairs)
        new_ids = self._fresh([n for _, n in pairs])
        token = dict(self._token)
        for b, n in pairs:
            if b not in self._members:
                raise InputError(f"unknown matroid element {b!r}")
            token[n] = token[b]
        mods = tuple(("add_parallel", b, n) for b, n in pairs)
        return Matroid(self._kind, self._ground + new_ids, token, self._cap,
                       self.kind, self.payload, self.modifiers + mods)

    def add_coloops(self, ids: Iterable[Element]) -> "Matroid":
        """Add the given fresh ids as coloops."""
        ids = self._fresh(ids)
        mod = ("add_coloops", len(ids), ids)
        if self._cap is not None:
            inner = self
            token = {x: x for x in self._ground}
            for n in ids:
                token[n] = _Coloop(n)
            return Matroid(_Nested(inner), self._ground + ids, token, None,
                           self.kind, self.payload, self.modifiers + (mod,))
        token = dict(self._token)
        for n in ids:
            token[n] = _Coloop(n)
        return self._derived(self._kind, self._ground + ids, token, None, mod)

    def truncate(self) -> "Matroid":
        """Truncation: rank'(X) = min(rank(X), rank(ground) - 1)."""
        cap = max(self.rank() - 1, 0)
        if self._cap is not None:
            cap = min(cap, self._cap)
        return self._derived(self._kind, self._ground, self._token, cap, ("truncate",))

    # -- misc -------------------------------------------------------------------

    def __repr__(self) -> str:
        return (f"Matroid(kind={self.kind!r}, |ground|={len(self._ground)}, "
                f"modifiers={len(self.modifiers)})")

    def __reduce__(self):
        return (Matroid, (self._kind, self._ground, self._token, self._cap,
                          self.kind, self.payload, self.modifiers))
