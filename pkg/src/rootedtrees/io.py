"""Instance and result files.

Instances are JSON objects::

    {
      "version": 1,
      "graph": {"vertices": [...],
                "edges": [{"id": 0, "ends": ["a", "b"]}, ...],
                "roots": [{"id": "r1", "at": "a"}, ...]},
      "matroid": {"kind": "free"},
      "framework": {"model": "body_bar_bar", "dimension": 2,
                    "boundary": {"r1": ["1", "0", "1/2"]}, ...}
    }

Edges may also be given as bare ``[u, v]`` pairs (ids are then list
positions).  Rationals are strings ``"p/q"`` or integers; floats are
refused.  Object keys naming vertices, edges or roots are matched
against the declared ids, so integer ids work as JSON keys too.

:func:`emit_instance` writes the canonical form, and parsing it back
gives the same instance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .errors import InputError
from .graph import GraphWithRoots
from .matroid import Matroid
from .rigidity import MODELS, FrameworkModel

FORMAT_VERSION = 1
MATROID_KINDS = ("free", "uniform", "graphic", "linear", "colored")


@dataclass(frozen=True)
class Instance:
    graph: GraphWithRoots
    matroid: Matroid | None = None
    framework: FrameworkModel | None = None

    def constraint_matroid(self) -> Matroid:
        """The declared matroid, or the free matroid on the roots."""
        return self.matroid if self.matroid is not None else Matroid.free(self.graph.roots)


# ---------------------------------------------------------------------------
# scalars


def parse_rational(x, where: str) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise InputError(f"{where}: rationals must be integers or strings 'p/q', got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"{where}: cannot read {x!r} as a rational") from None
    raise InputError(f"{where}: expected a rational, got {type(x).__name__}")


def format_rational(x) -> str:
    return str(Fraction(x))


def _vector(x, where: str) -> tuple:
    if not isinstance(x, list):
        raise InputError(f"{where}: expected a list of rationals")
    return tuple(parse_rational(v, f"{where}[{i}]") for i, v in enumerate(x))


def _is_id(x) -> bool:
    return isinstance(x, (str, int)) and not isinstance(x, bool)


def _id(x, where: str):
    if not _is_id(x):
        raise InputError(f"{where}: ids must be strings or integers, got {x!r}")
    return x


class _Keys:
    """Map JSON object keys (always strings) back to declared ids."""

    def __init__(self, ids, what: str):
        self.what = what
        self.by_text: dict = {}
        for i in ids:
            t = str(i)
            if t in self.by_text and self.by_text[t] != i:
                raise InputError(f"{what} ids {self.by_text[t]!r} and {i!r} print the same")
            self.by_text[t] = i

    def __call__(self, key: str, where: str):
        if key not in self.by_text:
            raise InputError(f"{where}: unknown {self.what} {key!r}")
        return self.by_text[key]


def _object(x, where: str) -> dict:
    if not isinstance(x, dict):
        raise InputError(f"{where}: expected an object")
    return x


def _field(obj: dict, name: str, where: str):
    if name not in obj:
        raise InputError(f"{where}: missing field {name!r}")
    return obj[name]


# ---------------------------------------------------------------------------
# parsing


def loads_json(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def parse_graph(obj, where: str = "graph") -> GraphWithRoots:
    obj = _object(obj, where)
    verts = _field(obj, "vertices", where)
    if not isinstance(verts, list):
        raise InputError(f"{where}.vertices: expected a list")
    vertices = [_id(v, f"{where}.vertices[{i}]") for i, v in enumerate(verts)]
    raw_edges = obj.get("edges", [])
    if not isinstance(raw_edges, list):
        raise InputError(f"{where}.edges: expected a list")
    edges: dict = {}
    for i, e in enumerate(raw_edges):
        w = f"{where}.edges[{i}]"
        if isinstance(e, list):
            eid, ends = i, e
        else:
            e = _object(e, w)
            eid = _id(_field(e, "id", w), f"{w}.id")
            ends = _field(e, "ends", w)
        if not isinstance(ends, list) or len(ends) != 2:
            raise InputError(f"{w}: an edge needs exactly two ends")
        if eid in edges:
            raise InputError(f"{w}: repeated edge id {eid!r}")
        edges[eid] = (_id(ends[0], w), _id(ends[1], w))
    raw_roots = obj.get("roots", [])
    if not isinstance(raw_roots, list):
        raise InputError(f"{where}.roots: expected a list")
    roots = []
    for i, r in enumerate(raw_roots):
        w = f"{where}.roots[{i}]"
        r = _object(r, w)
        roots.append((_id(_field(r, "id", w), f"{w}.id"), _id(_field(r, "at", w), f"{w}.at")))
    try:
        return GraphWithRoots(vertices, edges, roots)
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from None


def parse_matroid(obj, g: GraphWithRoots, where: str = "matroid") -> Matroid:
    obj = _object(obj, where)
    kind = _field(obj, "kind", where)
    roots = list(g.roots)
    keys = _Keys(roots, "root")
    if kind == "free":
        return Matroid.free(roots)
    if kind == "uniform":
        rank = _field(obj, "rank", where)
        if not isinstance(rank, int) or isinstance(rank, bool) or rank < 0:
            raise InputError(f"{where}.rank: expected a nonnegative integer")
        return Matroid.uniform(roots, rank)
    if kind == "graphic":
        edges = _object(_field(obj, "edges", where), f"{where}.edges")
        data = {}
        for k, uv in edges.items():
            w = f"{where}.edges.{k}"
            if not isinstance(uv, list) or len(uv) != 2 or not all(map(_is_id, uv)):
                raise InputError(f"{w}: expected a pair of ids")
            data[keys(k, w)] = tuple(uv)
        _cover(data, roots, f"{where}.edges")
        return Matroid.graphic({r: data[r] for r in roots})
    if kind == "linear":
        vecs = _object(_field(obj, "vectors", where), f"{where}.vectors")
        data = {keys(k, f"{where}.vectors.{k}"): _vector(v, f"{where}.vectors.{k}")
                for k, v in vecs.items()}
        _cover(data, roots, f"{where}.vectors")
        lengths = {len(v) for v in data.values()}
        if len(lengths) > 1:
            raise InputError(f"{where}.vectors: vectors of different lengths")
        return Matroid.linear({r: data[r] for r in roots})
    if kind == "colored":
        colors = _object(_field(obj, "colors", where), f"{where}.colors")
        data = {}
        for k, c in colors.items():
            if not _is_id(c):
                raise InputError(f"{where}.colors.{k}: colors are strings or integers")
            data[keys(k, f"{where}.colors.{k}")] = c
        _cover(data, roots, f"{where}.colors")
        cap = _field(obj, "cap", where)
        if not isinstance(cap, int) or isinstance(cap, bool) or cap < 0:
            raise InputError(f"{where}.cap: expected a nonnegative integer")
        return Matroid.colored({r: data[r] for r in roots}, cap)
    raise InputError(f"{where}.kind: unknown matroid kind {kind!r} (expected one of {list(MATROID_KINDS)})")


def _cover(data: dict, roots: list, where: str) -> None:
    missing = [r for r in roots if r not in data]
    if missing:
        raise InputError(f"{where}: no entry for roots {missing!r}")


def parse_framework(obj, g: GraphWithRoots, where: str = "framework") -> FrameworkModel:
    obj = _object(obj, where)
    model = _field(obj, "model", where)
    if model not in MODELS:
        raise InputError(f"{where}.model: unknown model {model!r} (expected one of {list(MODELS)})")
    d = _field(obj, "dimension", where)
    if not isinstance(d, int) or isinstance(d, bool):
        raise InputError(f"{where}.dimension: expected an integer")
    rk = _Keys(g.roots, "root")
    vk = _Keys(g.vertices, "vertex")
    ek = _Keys(g.edges, "edge")

    def vec_map(name, keys):
        raw = obj.get(name)
        if raw is None:
            return None
        raw = _object(raw, f"{where}.{name}")
        return {keys(k, f"{where}.{name}.{k}"): _vector(v, f"{where}.{name}.{k}") for k, v in raw.items()}

    pinned = obj.get("pinned", [])
    if not isinstance(pinned, list):
        raise InputError(f"{where}.pinned: expected a list")
    for i, x in enumerate(pinned):
        if not _is_id(x) or str(x) not in vk.by_text:
            raise InputError(f"{where}.pinned[{i}]: unknown vertex {x!r}")
    try:
        return FrameworkModel(model, d, g,
                              boundary=vec_map("boundary", rk) or {},
                              pins=vec_map("pins", rk) or {},
                              pinned=tuple(vk.by_text[str(x)] for x in pinned),
                              sliders=vec_map("sliders", rk) or {},
                              placement=vec_map("placement", vk),
                              bars=vec_map("bars", ek))
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from None


def parse_instance(text: str, source: str = "<input>") -> Instance:
    """Parse instance JSON; errors name the offending field."""
    obj = _object(loads_json(text, source), source)
    version = obj.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise InputError(f"{source}: unsupported version {version!r}")
    unknown = set(obj) - {"version", "graph", "matroid", "framework"}
    if unknown:
        raise InputError(f"{source}: unknown fields {sorted(unknown)!r}")
    g = parse_graph(_field(obj, "graph", source))
    m = parse_matroid(obj["matroid"], g) if "matroid" in obj else None
    fm = parse_framework(obj["framework"], g) if "framework" in obj else None
    return Instance(g, m, fm)


def read_instance(path: str) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    return parse_instance(text, path)


# ---------------------------------------------------------------------------
# emitting


def dumps(obj) -> str:
    """Deterministic JSON text with a trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def id_text(x) -> Any:
    """JSON form of an id: scalars as is, tuples joined with '#'."""
    if isinstance(x, tuple):
        return "#".join(str(id_text(p)) for p in x)
    return x


def key_text(x) -> str:
    return str(id_text(x))


def vector_out(v) -> list:
    return [format_rational(x) for x in v]


def graph_to_obj(g: GraphWithRoots) -> dict:
    return {
        "vertices": [id_text(v) for v in g.vertices],
        "edges": [{"id": id_text(e), "ends": [id_text(u), id_text(v)]} for e, (u, v) in g.edges.items()],
        "roots": [{"id": id_text(r), "at": id_text(v)} for r, v in g.roots.items()],
    }


def matroid_to_obj(m: Matroid) -> dict:
    if m.modifiers:
        raise InputError("only base matroids can be written to instance files")
    if m.kind == "free":
        return {"kind": "free"}
    if m.kind == "uniform":
        return {"kind": "uniform", "rank": m.payload}
    if m.kind == "graphic":
        return {"kind": "graphic", "edges": {key_text(r): [id_text(x) for x in uv]
                                             for r, uv in m.payload.items()}}
    if m.kind == "linear":
        return {"kind": "linear", "vectors": {key_text(r): vector_out(v) for r, v in m.payload.items()}}
    if m.kind == "colored":
        colors, cap = m.payload
        return {"kind": "colored", "colors": {key_text(r): c for r, c in colors.items()}, "cap": cap}
    raise InputError(f"cannot write matroid kind {m.kind!r}")


def framework_to_obj(fm: FrameworkModel) -> dict:
    out: dict = {"model": fm.model, "dimension": fm.d}
    for name in ("boundary", "pins", "sliders"):
        data = getattr(fm, name)
        if data:
            out[name] = {key_text(k): vector_out(v) for k, v in data.items()}
    if fm.pinned:
        out["pinned"] = [id_text(x) for x in fm.pinned]
    if fm.placement is not None:
        out["placement"] = {key_text(k): vector_out(v) for k, v in fm.placement.items()}
    if fm.bars is not None:
        out["bars"] = {key_text(k): vector_out(v) for k, v in fm.bars.items()}
    return out


def instance_to_obj(inst: Instance) -> dict:
    out: dict = {"version": FORMAT_VERSION, "graph": graph_to_obj(inst.graph)}
    if inst.matroid is not None:
        out["matroid"] = matroid_to_obj(inst.matroid)
    if inst.framework is not None:
        out["framework"] = framework_to_obj(inst.framework)
    return out


def emit_instance(inst: Instance) -> str:
    return dumps(instance_to_obj(inst))


def jsonable(x) -> Any:
    """Recursively convert results to JSON-ready values (rationals as strings)."""
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, dict):
        return {key_text(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((jsonable(v) for v in x), key=repr)
    return x
