"""Command-line front end.

Every subcommand prints one JSON document (sorted keys, so identical
invocations give identical bytes) or a plain-text rendering of it.
Exit codes: 0 success, 2 parse error, 3 semantic or axiom violation,
4 resource bound, 1 selftest failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import acceptance
from . import gmodule as gm
from . import indexed_module as im_mod
from . import kummer_ff as kf
from . import pgroups as pg
from .errors import AutorealError, ParseError
from .group_ring import DEFAULT_ORDER_BOUND


class CommandFailed(Exception):
    """Carries a report that should still be printed before exiting nonzero."""

    def __init__(self, report: dict, code: int):
        super().__init__(report.get("message", ""))
        self.report = report
        self.code = code


def _load_json(path: str) -> dict:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _ring_bound(args) -> int:
    return args.bound if args.bound is not None else DEFAULT_ORDER_BOUND


def _decomposition_report(m: gm.GModule) -> dict:
    d = gm.decompose(m)
    return {
        "p": m.p,
        "n": m.ctx.n,
        "dim": m.dim,
        "type": d.type,
        "generators": [list(g) for g in d.generators],
        "basis_change": d.basis_change.tolist(),
    }


def cmd_module_decompose(args) -> dict:
    return _decomposition_report(gm.module_from_json(_load_json(args.file), _ring_bound(args)))


def cmd_module_dual(args) -> dict:
    m = gm.module_from_json(_load_json(args.file), _ring_bound(args))
    dual = gm.dual_module(m)
    return {
        "dual": gm.module_to_json(dual),
        "type": gm.jordan_type(m),
        "dual_type": gm.jordan_type(dual),
    }


def _axiom_failure(im: im_mod.IndexedModule) -> None:
    violations = im_mod.check_axioms(im)
    if violations:
        raise CommandFailed(
            {
                "error": "PreconditionError",
                "message": "index axioms fail",
                "violations": [{"message": v.message, "witness": list(v.witness)} for v in violations],
            },
            3,
        )


def cmd_jepsilon_decompose(args) -> dict:
    im = im_mod.indexed_from_json(_load_json(args.file), _ring_bound(args))
    _axiom_failure(im)
    d = im_mod.decompose_jepsilon(im)
    return im_mod.decomposition_to_json(im, d)


def cmd_realize(args) -> dict:
    obj = _load_json(args.file)
    im = im_mod.indexed_from_json(obj, _ring_bound(args))
    try:
        gamma = [int(x) for x in obj["gamma"]]
        i = args.i if args.i is not None else int(obj["i"])
        c = args.c if args.c is not None else int(obj["c"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"realize input needs gamma, i and c: {exc}") from exc
    _axiom_failure(im)
    w = im_mod.realize_step(im, i, c, gamma)
    return {"i": i, "c": c, **im_mod.witness_to_json(w)}


def cmd_group_info(args) -> dict:
    bound = args.bound if args.bound is not None else pg.DEFAULT_GROUP_BOUND
    g = pg.make_group(args.p, args.n, args.j, args.e, bound=bound)
    got = pg.invariants(g).to_json()
    pred = pg.predicted_invariants(args.p, args.n, args.j, args.e)
    match = {k: (None if pred[k] is None else got[k] == pred[k]) for k in got}
    return {
        "group": {"p": args.p, "n": args.n, "j": args.j, "e": args.e},
        "computed": got,
        "predicted": pred,
        "match": match,
        "all_match": all(v is not False for v in match.values()),
    }


def cmd_group_export(args) -> str:
    bound = args.bound if args.bound is not None else pg.DEFAULT_GROUP_BOUND
    g = pg.make_group(args.p, args.n, args.j, args.e, bound=bound)
    return pg.export_group(g, args.kind)


def cmd_witt_chain(args) -> dict:
    bound = args.bound if args.bound is not None else pg.WITT_BOUND
    steps = pg.witt_chain(args.p, args.n, args.i, args.c, bound=bound)
    return {
        "p": args.p,
        "n": args.n,
        "i": args.i,
        "c": args.c,
        "steps": [s.to_json() for s in steps],
        "ok": all(s.ok for s in steps),
    }


def cmd_kummer_check(args) -> dict:
    bound = args.bound if args.bound is not None else kf.FIELD_BOUND
    tower = kf.build_tower(args.q, args.p, args.n, seed=args.seed, bound=bound)
    return kf.end_to_end_check(tower)


def cmd_selftest(args) -> dict:
    if args.inject_fault:
        pg.INJECT_COCYCLE_FAULT = True
    echo = None
    if args.format == "text":
        echo = lambda line: print(line, file=sys.stderr, flush=True)  # noqa: E731
    try:
        results = acceptance.run_all(max_pn=args.max_pn, seed=args.seed, only=args.only, echo=echo)
    finally:
        pg.INJECT_COCYCLE_FAULT = False
    report = {
        "max_pn": args.max_pn,
        "seed": args.seed,
        "fault_injected": bool(args.inject_fault),
        "suites": [r.to_json() for r in results],
        "passed": all(r.passed for r in results),
        "total_seconds": round(sum(r.seconds for r in results), 3),
    }
    if not report["passed"]:
        raise CommandFailed(report, 1)
    return report


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "text"), default="json", help="output format")
    parser.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    parser.add_argument("--bound", type=int, default=None, help="size bound for the command's main object")
    parser.add_argument("--output", default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="autoreal", description="Modules over F_p[C_(p^n)], metacyclic p-groups and realization checks."
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text, description=help_text)
        _common(sp)
        sp.set_defaults(func=fn)
        return sp

    sp = add("module-decompose", cmd_module_decompose, "Jordan type, generators and basis change of a module")
    sp.add_argument("file", help="GModule JSON file, or - for stdin")
    sp = add("module-dual", cmd_module_dual, "dual module and its Jordan type")
    sp.add_argument("file")
    sp = add("jepsilon-decompose", cmd_jepsilon_decompose, "U + V decomposition of an indexed module")
    sp.add_argument("file", help="IndexedModule JSON (module plus e)")
    sp = add("realize", cmd_realize, "one realization step from a cyclic submodule with trivial index")
    sp.add_argument("file", help="IndexedModule JSON plus gamma (and optionally i, c)")
    sp.add_argument("--i", type=int, default=None)
    sp.add_argument("--c", type=int, default=None)

    for name, fn, text in (
        ("group-info", cmd_group_info, "computed and predicted invariants of H_(j,e)"),
        ("group-export", cmd_group_export, "multiplication table or presentation of H_(j,e)"),
    ):
        sp = add(name, fn, text)
        for arg in ("p", "n", "j", "e"):
            sp.add_argument(arg, type=int)
        if name == "group-export":
            sp.add_argument("--kind", choices=("table", "pc"), default="table")

    sp = add("witt-chain", cmd_witt_chain, "central extensions from H_(p^i+c) up to H_(p^(i+1))")
    for arg in ("p", "n", "i", "c"):
        sp.add_argument(arg, type=int)
    sp = add("kummer-check", cmd_kummer_check, "finite-field tower consistency report")
    for arg in ("q", "p", "n"):
        sp.add_argument(arg, type=int)
    sp = add("selftest", cmd_selftest, "run every acceptance suite")
    sp.add_argument("--max-pn", type=int, default=None, help="restrict grids to p^n <= MAX_PN")
    sp.add_argument("--only", type=int, action="append", help="run only this criterion (repeatable)")
    sp.add_argument("--inject-fault", action="store_true", help="drop the cocycle term in H_(j,e) (mutation check)")
    return parser


def _render_text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and any(isinstance(x, (dict, list)) for x in (v.values() if isinstance(v, dict) else v)):
                out.append(f"{pad}{k}:")
                out += _render_text(v, indent + 1)
            else:
                out.append(f"{pad}{k}: {json.dumps(v, sort_keys=True, ensure_ascii=False)}")
        return out
    if isinstance(obj, list):
        out = []
        for item in obj:
            if isinstance(item, dict):
                out.append(f"{pad}-")
                out += _render_text(item, indent + 1)
            else:
                out.append(f"{pad}- {json.dumps(item, sort_keys=True, ensure_ascii=False)}")
        return out
    return [f"{pad}{obj}"]


def render(report, fmt: str) -> str:
    if isinstance(report, str):
        return report
    if fmt == "text":
        return "\n".join(_render_text(report)) + "\n"
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _emit(text: str, output: Optional[str], stream) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stream.write(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except CommandFailed as exc:
        _emit(render(exc.report, args.format), args.output, sys.stdout)
        return exc.code
    except AutorealError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(render(err, args.format))
        return exc.exit_code
    _emit(render(report, args.format), args.output, sys.stdout)
    return 0


if __name__ == "__main__":
    sys.exit(main())
