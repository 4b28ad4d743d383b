"""Command-line interface.

Exit codes: 0 feasible or rigid, 1 infeasible or flexible (witness
included), 2 input error, 3 boundary lines not in general position,
4 an oracle refused the instance as too large, 5 an internal cross-check
failed (oracle disagreement or a realization that could not be certified).
"""

from __future__ import annotations

import argparse
import sys
import time

from . import __version__
from . import oracles
from .count import check_conditions
from .decompose import STRATEGIES, PartitionWitness, basic_decomposition, rooted_component_packing
from .dot import to_dot
from .errors import (BudgetExceeded, CertificationError, GeneralPositionError, InfeasibleError,
                     InputError, PreconditionError)
from .io import (Instance, dumps, framework_to_obj, graph_to_obj, id_text, jsonable, read_instance)
from . import rigidity as rg

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GEOMETRY, EXIT_BUDGET, EXIT_INTERNAL = range(6)


class _Done(Exception):
    def __init__(self, code: int, result: dict):
        self.code = code
        self.result = result


# ---------------------------------------------------------------------------
# witnesses


def report_witnesses(rep, c: int | None = None, ell: int | None = None) -> list[dict]:
    """Witness records for every failed condition of a ConditionReport."""
    c = rep.rank_k if c is None else c
    ell = rep.extra.get("ell", c) if ell is None else ell
    out = []
    if not rep.c1_ok:
        out.append({"kind": "c1", "vertex": id_text(rep.c1_vertex), "max_roots": c})
    if rep.c2_ok is False:
        out.append({"kind": "c2", "edges": [id_text(e) for e in rep.c2_witness], "c": c, "ell": ell})
    if rep.extra.get("laman_ok") is False:
        out.append({"kind": "laman", "edges": [id_text(e) for e in rep.extra["laman_witness"]]})
    if not rep.c3_ok:
        e, r, target = rep.counts
        out.append({"kind": "c3", "edges": e, "roots": r, "target": target})
    return out


def partition_witness(w: PartitionWitness) -> dict:
    return {"kind": "partition", "blocks": [[id_text(v) for v in X] for X in w.partition],
            "cut": w.cut, "bound": w.bound}


def witness_holds(inst: Instance, w: dict) -> bool:
    """Re-check one emitted witness against the instance by direct evaluation."""
    fm = inst.framework
    g = inst.graph
    ids = {str(id_text(x)): x for x in list(g.vertices) + list(g.edges) + list(g.roots)}

    def back(xs):
        return [ids[str(x)] for x in xs]

    if fm is not None and fm.model in ("body_bar_bar", "bar_joint_bar"):
        m = rg.boundary_matroid(fm)
    elif fm is not None and fm.model == "bar_joint_slider":
        from .matroid import Matroid

        m = Matroid.colored({r: rg.direction_key(fm.sliders[r]) for r in g.roots}, 2)
    else:
        m = inst.constraint_matroid()
    kind = w["kind"]
    if kind == "c1":
        rv = g.roots_at(ids[str(w["vertex"])])
        if fm is not None and fm.model == "bar_joint_pin":
            return False
        return len(rv) > w["max_roots"] or oracles.brute_rank(m, rv) < len(rv)
    if kind == "c2":
        F = back(w["edges"])
        if fm is not None and fm.model == "bar_joint_pin":
            X = set(fm.pinned)
            return len(F) > 2 * len(set(g.vertices_of(F)) - X) - 3 + rg.f_X(g, X, F)
        R = g.roots_of_edges(F)
        return len(F) + len(R) > w["c"] * len(g.vertices_of(F)) - w["ell"] + oracles.brute_rank(m, R)
    if kind == "laman":
        F = back(w["edges"])
        return len(F) > 2 * len(g.vertices_of(F)) - 3
    if kind == "c3":
        return (w["edges"] == len(g.edges) and w["edges"] + w["roots"] != w["target"])
    if kind == "partition":
        P = [back(X) for X in w["blocks"]]
        if sorted(map(repr, (v for X in P for v in X))) != sorted(map(repr, g.vertices)):
            return False
        cut = len(g.delta(P))
        if fm is not None and fm.model == "body_bar_pin":
            bound = fm.D * len(P) - sum(rg.pin_constraint_dimension(
                [fm.pins[r] for r in g.roots_on(X)], fm.d) for X in P)
        else:
            k = oracles.brute_rank(m, m.ground)
            bound = k * len(P) - sum(oracles.brute_rank(m, g.roots_on(X)) for X in P)
        return cut == w["cut"] and bound == w["bound"] and cut < bound
    if kind == "general_position":
        from .exterior import concurrent

        return concurrent(*(fm.boundary[r] for r in back(w["roots"])))
    raise InputError(f"unknown witness kind {kind!r}")


def decomposition_obj(dec) -> dict:
    return {"kind": dec.kind,
            "parts": [{"root": id_text(r), "edges": [id_text(e) for e in T]} for r, T in dec.parts]}


# ---------------------------------------------------------------------------
# oracle cross-checks


def _oracle_budget() -> oracles.OracleBudget:
    return oracles.DEFAULT_BUDGET


def _oracle_check(inst: Instance) -> bool:
    g, m = inst.graph, inst.constraint_matroid()
    k = oracles.brute_rank(m, m.ground)
    c1 = all(len(g.roots_at(v)) <= k and oracles.brute_rank(m, g.roots_at(v)) == len(g.roots_at(v))
             for v in g.vertices)
    c3 = len(g.edges) + len(g.roots) == k * len(g.vertices)
    return c1 and c3 and oracles.count_holds(g, m, k, k, _oracle_budget())


def _oracle_framework(fm: rg.FrameworkModel) -> bool:
    g = fm.graph
    B = _oracle_budget()
    if fm.model == "body_bar_pin":
        return rg.pin_partition_verdict(fm, B.max_vertices).ok
    if fm.model == "bar_joint_pin":
        X = set(fm.pinned)
        if len(g.edges) != 2 * (len(g.vertices) - len(X)):
            return False
        return not oracles.bound_violators(
            g, lambda F: 2 * len(set(g.vertices_of(F)) - X) - 3 + rg.f_X(g, X, F), B)
    if fm.model == "bar_joint_slider":
        dirs = {r: rg.direction_key(fm.sliders[r]) for r in g.roots}
        for v in g.vertices:
            rv = g.roots_at(v)
            if len(rv) > min(2, len({dirs[r] for r in rv})):
                return False
        if len(g.edges) + len(g.roots) != 2 * len(g.vertices):
            return False

        def bound(F):
            R = g.roots_of_edges(F)
            n = len(g.vertices_of(F))
            return min(2 * n - 2 + min(2, len({dirs[r] for r in R})) - len(R), 2 * n - 3)

        return not oracles.bound_violators(g, bound, B)
    m = rg.boundary_matroid(fm)
    c, ell, total = (fm.D, fm.D, fm.D * len(g.vertices)) if fm.model == "body_bar_bar" else (2, 3, 2 * len(g.vertices))
    c1 = all(len(g.roots_at(v)) <= c and oracles.brute_rank(m, g.roots_at(v)) == len(g.roots_at(v))
             for v in g.vertices)
    return c1 and len(g.edges) + len(g.roots) == total and oracles.count_holds(g, m, c, ell, B)


def _agree(result: dict, fast: bool, slow: bool) -> None:
    result["oracle"] = {"verdict": slow, "agrees": fast == slow}
    if fast != slow:
        raise _Done(EXIT_INTERNAL, result)


# ---------------------------------------------------------------------------
# commands


def cmd_check(inst: Instance, args) -> tuple[int, dict]:
    g, m = inst.graph, inst.constraint_matroid()
    rep = check_conditions(g, m, jobs=args.jobs)
    result = {"command": "check", "verdict": "feasible" if rep.ok else "infeasible",
              "report": jsonable(rep.to_dict()), "witnesses": report_witnesses(rep)}
    if args.oracle:
        _agree(result, rep.ok, _oracle_check(inst))
    return (EXIT_OK if rep.ok else EXIT_FAIL), result


def cmd_decompose(inst: Instance, args) -> tuple[int, dict]:
    g, m = inst.graph, inst.constraint_matroid()
    result: dict = {"command": "decompose", "mode": "dual" if args.dual else "basic"}
    try:
        if args.dual:
            dec = rooted_component_packing(g, m, strategy=args.strategy)
        else:
            dec = basic_decomposition(g, m, strategy=args.strategy, jobs=args.jobs)
    except InfeasibleError as exc:
        result["verdict"] = "infeasible"
        w = exc.report
        result["witnesses"] = ([partition_witness(w)] if isinstance(w, PartitionWitness)
                               else report_witnesses(w))
        if args.oracle:
            _agree(result, False, _oracle_decomposable(inst, args.dual))
        return EXIT_FAIL, result
    result["verdict"] = "feasible"
    result["decomposition"] = decomposition_obj(dec)
    if args.oracle:
        _agree(result, True, _oracle_decomposable(inst, args.dual))
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(to_dot(g, dec))
    return EXIT_OK, result


def _oracle_decomposable(inst: Instance, dual: bool) -> bool:
    g, m = inst.graph, inst.constraint_matroid()
    if dual:
        return oracles.dual_violating_partition(g, m, _oracle_budget()) is None
    return oracles.exhaustive_basic_decomposition(g, m, _oracle_budget()) is not None


def cmd_rigidity(inst: Instance, args) -> tuple[int, dict]:
    fm = inst.framework
    if fm is None:
        raise InputError("the instance has no framework block")
    result: dict = {"command": "rigidity", "model": fm.model, "dimension": fm.d}
    try:
        rep = rg.check(fm, jobs=args.jobs)
    except GeneralPositionError as exc:
        result["verdict"] = "general_position_violated"
        result["witnesses"] = [{"kind": "general_position", "roots": [id_text(r) for r in exc.triple]}]
        return EXIT_GEOMETRY, result
    ok = rep.ok
    result["verdict"] = "pass" if ok else "fail"
    result["report"] = jsonable(rep.to_dict())
    if isinstance(rep, rg.PinReport):
        result["witnesses"] = [] if ok else [{
            "kind": "partition", "blocks": [[id_text(v) for v in X] for X in rep.partition],
            "cut": rep.cut, "bound": rep.bound}]
    else:
        result["witnesses"] = report_witnesses(rep)
    if args.oracle:
        _agree(result, ok, _oracle_framework(fm))
    if fm.model == "bar_joint_slider" and args.pinned_form:
        result["pinned_form"] = {"graph": graph_to_obj(rg.slider_to_pinned(fm).graph),
                                 "framework": framework_to_obj(rg.slider_to_pinned(fm))}
    if not ok:
        return EXIT_FAIL, result
    target = fm
    if args.realize or (args.certify and not _configured(fm)):
        try:
            target = rg.realize(fm, strategy=args.strategy)
        except CertificationError as exc:
            result["error"] = str(exc)
            return EXIT_INTERNAL, result
        result["realization"] = framework_to_obj(target)
        if target.graph is not fm.graph:
            result["realization"]["graph"] = graph_to_obj(target.graph)
    if args.certify:
        cert = rg.certify(target)
        result["certificate"] = jsonable(cert.to_dict())
        if not cert.rigid:
            result["verdict"] = "flexible"
            return EXIT_FAIL, result
    return EXIT_OK, result


def _configured(fm: rg.FrameworkModel) -> bool:
    if fm.model in rg.BAR_JOINT:
        return fm.placement is not None and all(v in fm.placement for v in fm.graph.vertices)
    return fm.bars is not None or not fm.graph.edges


# ---------------------------------------------------------------------------
# argument handling


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--oracle", action="store_true", default=argparse.SUPPRESS,
                        help="cross-check the verdict with brute-force enumeration (small inputs)")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, metavar="N",
                        help="worker processes for the per-edge count checks")
    common.add_argument("--timing", action="store_true", default=argparse.SUPPRESS,
                        help="add wall-clock seconds to the result")
    common.add_argument("--strategy", choices=STRATEGIES, default=argparse.SUPPRESS,
                        help="reduction order of the decomposer")
    common.add_argument("-o", "--output", default=argparse.SUPPRESS, metavar="PATH",
                        help="write the result JSON here instead of stdout")

    p = argparse.ArgumentParser(prog="rootedtrees", parents=[common],
                                description="Matroid-constrained rooted-tree decompositions "
                                            "and boundary rigidity.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", parents=[common], help="decide the decomposition conditions")
    c.add_argument("instance")

    d = sub.add_parser("decompose", parents=[common], help="build a decomposition")
    d.add_argument("instance")
    d.add_argument("--dual", action="store_true", help="pack rooted components instead of trees")
    d.add_argument("--dot", metavar="PATH", help="also write the decomposition as DOT")

    r = sub.add_parser("rigidity", parents=[common], help="check, realize and certify a framework")
    r.add_argument("instance")
    r.add_argument("--realize", action="store_true", help="construct a bar configuration")
    r.add_argument("--certify", action="store_true", help="exact rank certificate")
    r.add_argument("--pinned-form", action="store_true",
                   help="for slider models, include the equivalent pinned framework")
    return p


_DEFAULTS = {"oracle": False, "jobs": 1, "timing": False, "strategy": "tight_first", "output": None}

_COMMANDS = {"check": cmd_check, "decompose": cmd_decompose, "rigidity": cmd_rigidity}


def run(argv=None) -> tuple[int, dict, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    for k, v in _DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    start = time.perf_counter()
    try:
        if args.jobs < 1:
            raise InputError("--jobs must be at least 1")
        inst = read_instance(args.instance)
        code, result = _COMMANDS[args.command](inst, args)
    except _Done as done:
        code, result = done.code, done.result
    except (InputError, PreconditionError) as exc:
        code, result = EXIT_INPUT, {"command": args.command, "verdict": "error", "error": str(exc)}
    except BudgetExceeded as exc:
        code, result = EXIT_BUDGET, {"command": args.command, "verdict": "error", "error": str(exc)}
    result["exit_code"] = code
    if args.timing:
        result["timing"] = {"seconds": round(time.perf_counter() - start, 6)}
    return code, result, args


def main(argv=None) -> int:
    code, result, args = run(argv)
    text = dumps(result)
    if result.get("verdict") == "error":
        print(f"rootedtrees: error: {result['error']}", file=sys.stderr)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
