"""Command line front end.

Exit codes: 0 success, 1 negative verdict under --quiet, 2 bad input,
3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import constructions as cons
from . import degrees as deg
from . import iforests as itf
from .acceptors import (LassoWord, acceptor_from_json, acceptor_to_json, eval_lasso,
                        has_balanced_counting_pattern, has_d_counting_pattern, is_aperiodic)
from .errors import ArtifactError, InputError, ResourceError


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno} column {e.colno} ({e.msg})") from None


def load_acceptor(path: str):
    try:
        return acceptor_from_json(_read_json(path))
    except InputError as e:
        if str(e).startswith(path):
            raise
        raise InputError(f"{path}: {e}") from None


def load_forest(arg: str) -> itf.IForest:
    """A forest file (JSON or text syntax) or, failing that, literal text."""
    if os.path.exists(arg):
        with open(arg) as fh:
            text = fh.read()
        try:
            if text.lstrip().startswith("{"):
                return itf.forest_from_json(json.loads(text))
            F = itf.parse_forest(text.strip())
        except json.JSONDecodeError as e:
            raise InputError(f"{arg}: invalid JSON ({e.msg})") from None
        except InputError as e:
            raise InputError(f"{arg}: {e}") from None
    else:
        F = itf.parse_forest(arg)
    if not F.trees:
        raise InputError("the empty forest is not accepted here")
    return F


def _forest_out(F: itf.IForest, args) -> str:
    if args.json:
        obj = itf.forest_to_json(F)
        obj["text"] = itf.to_text(F)
        return json.dumps(obj, sort_keys=True)
    return itf.to_text(F)


def _emit(text: str, args):
    if not args.quiet:
        print(text)


def _verdict(value: bool, args, extra=None) -> int:
    if args.json:
        obj = {"result": value}
        if extra:
            obj.update(extra)
        _emit(json.dumps(obj, sort_keys=True), args)
    else:
        _emit("true" if value else "false", args)
    return 0 if value or not args.quiet else 1


def _write_acceptor(acc, args):
    obj = acceptor_to_json(acc, args.loop_cap)
    text = json.dumps(obj, sort_keys=True)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
        _emit(f"wrote {args.output}: {acc.automaton.num_states} states, {len(obj['labels'])} loops", args)
    else:
        print(text)


def cmd_degree(args):
    acc = load_acceptor(args.acceptor)
    _emit(_forest_out(deg.degree_forest(acc), args), args)
    return 0


def cmd_reduces(args):
    return _verdict(deg.reduces(load_acceptor(args.a), load_acceptor(args.b)), args)


def cmd_equiv(args):
    return _verdict(deg.equivalent(load_acceptor(args.a), load_acceptor(args.b)), args)


def cmd_in_level(args):
    return _verdict(deg.in_level(load_acceptor(args.acceptor), load_forest(args.forest)), args)


def cmd_aperiodic(args):
    aut = load_acceptor(args.acceptor).automaton
    info = {"aperiodic": is_aperiodic(aut)}
    ok = info["aperiodic"]
    if args.d is not None:
        info["d"] = args.d
        info["d_counting_pattern"] = has_d_counting_pattern(aut, args.d)
        ok = ok and not info["d_counting_pattern"]
    if args.balanced:
        info["balanced_counting_pattern"] = has_balanced_counting_pattern(aut)
        ok = ok and not info["balanced_counting_pattern"]
    if args.json:
        _emit(json.dumps(info, sort_keys=True), args)
    else:
        _emit(" ".join(f"{key}={str(v).lower()}" for key, v in info.items()), args)
    return 0 if ok or not args.quiet else 1


def cmd_rho(args):
    F = load_forest(args.forest)
    _write_acceptor(cons.rho_acc(F), args)
    return 0


def cmd_op(args):
    expr = _read_json(args.expr)
    acc = cons.build_expr(expr, os.path.dirname(os.path.abspath(args.expr)))
    _write_acceptor(acc, args)
    return 0


def cmd_eval(args):
    acc = load_acceptor(args.acceptor)
    w = LassoWord.parse(args.lasso)
    value = eval_lasso(acc, w)
    if args.json:
        _emit(json.dumps({"lasso": str(w), "value": value}, sort_keys=True), args)
    else:
        _emit(str(value), args)
    return 0


def cmd_minimize(args):
    _emit(_forest_out(itf.minimize(load_forest(args.forest)), args), args)
    return 0


def cmd_mset(args):
    F = load_forest(args.forest)
    trees = itf.mset(F)
    if args.json:
        out = {"k": F.k, "depth": F.depth, "trees": [itf.tree_to_json(t) for t in trees],
               "text": [itf.to_text(t) for t in trees]}
        _emit(json.dumps(out, sort_keys=True), args)
    else:
        _emit("\n".join(itf.to_text(t) for t in trees), args)
    return 0


def cmd_leq(args):
    return _verdict(itf.leq_h(load_forest(args.a), load_forest(args.b)), args)


def cmd_hasse(args):
    dot = itf.hasse(args.k, args.depth, args.max_nodes)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(dot)
        _emit(f"wrote {args.output}", args)
    else:
        sys.stdout.write(dot)
    return 0


def cmd_selfcheck(args):
    from .selfcheck import run_all

    results = run_all(args.max_nodes)
    ok = all(r[1] for r in results)
    if args.json:
        _emit(json.dumps([{"check": n, "pass": p, "detail": d} for n, p, d in results]), args)
    else:
        for name, passed, detail in results:
            _emit(f"{'PASS' if passed else 'FAIL'} {name}: {detail}", args)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="no output; verdicts via exit code")
    common.add_argument("--json", action="store_true", help="JSON output")
    p = argparse.ArgumentParser(prog="artifact", parents=[common],
                                description="Degrees of regular k-partitions given by Muller acceptors.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=fn)
        return sp

    sp = add("degree", cmd_degree, "canonical degree forest of an acceptor")
    sp.add_argument("acceptor")
    for name, fn, text in (("reduces", cmd_reduces, "whether A reduces to B"),
                           ("equiv", cmd_equiv, "whether A and B have the same degree")):
        sp = add(name, fn, text)
        sp.add_argument("a")
        sp.add_argument("b")
    sp = add("in-level", cmd_in_level, "whether the acceptor lies in the level named by a forest")
    sp.add_argument("acceptor")
    sp.add_argument("--forest", required=True)
    sp = add("aperiodic", cmd_aperiodic, "aperiodicity and counting patterns")
    sp.add_argument("acceptor")
    sp.add_argument("--d", type=int)
    sp.add_argument("--balanced", action="store_true")
    for name, fn, arg, text in (("rho", cmd_rho, "forest", "witness acceptor for a forest"),
                                ("op", cmd_op, "expr", "evaluate a construction expression")):
        sp = add(name, fn, text)
        sp.add_argument(arg)
        sp.add_argument("-o", "--output")
        sp.add_argument("--loop-cap", type=int, default=None)
    sp = add("eval", cmd_eval, "value on a lasso u,v")
    sp.add_argument("acceptor")
    sp.add_argument("--lasso", required=True)
    sp = add("minimize-forest", cmd_minimize, "minimal canonical form of a forest")
    sp.add_argument("forest")
    sp = add("mset", cmd_mset, "the M set of a forest")
    sp.add_argument("forest")
    sp = add("leq", cmd_leq, "compare two forests")
    sp.add_argument("a")
    sp.add_argument("b")
    sp = add("hasse", cmd_hasse, "Hasse diagram of small forests (DOT)")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--max-nodes", type=int, required=True)
    sp.add_argument("-o", "--output")
    sp = add("selfcheck", cmd_selfcheck, "run reduced acceptance checks")
    sp.add_argument("--max-nodes", type=int, default=4)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except ResourceError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (InputError, ArtifactError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except RecursionError:
        print("error: input too deep", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
