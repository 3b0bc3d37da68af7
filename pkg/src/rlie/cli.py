"""Command line front end: JSON in, JSON out."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .charcluster import cluster
from .formations import formation_by_name, is_hypercentral
from .gf import FieldCtx
from .liealg import (Subalgebra, adjust_pmap_centre_kill, p_envelope,
                     verify_pmap)
from .linalg import Matrix
from .repmod import LModule
from .theorem import (VIOLATION, Instance, algebra_from_json, check_theorem_instance,
                      proof_pipeline, random_instance, run_campaign)


def _read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path) as fh:
        return json.load(fh)


def _emit(obj, out: str | None):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out and out != "-":
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _module_from(data: dict, which: str):
    """An (algebra, module) pair from an instance file or a module file."""
    F = FieldCtx.from_json(data["field"])
    L = algebra_from_json(F, data["algebra"])
    key = "module" if "module" in data else which
    if key not in data:
        raise SystemExit(f"input has no {which!r} module")
    return L, LModule.from_json(L, data[key]), data


def cmd_gen(args) -> int:
    inst = random_instance(args.p, args.max_dim_L, args.max_dim_V, args.seed)
    _emit(inst.to_json(), args.output)
    return 0


def cmd_check(args) -> int:
    inst = Instance.from_json(_read_json(args.instance))
    v = check_theorem_instance(inst, args.seed)
    _emit(v.to_json(), args.output)
    return 1 if v.status == VIOLATION else 0


def cmd_pipeline(args) -> int:
    inst = Instance.from_json(_read_json(args.instance))
    rep = proof_pipeline(inst, args.seed)
    _emit(rep, args.output)
    if "refused" in rep:
        return 0
    return 0 if rep["passed"] else 1


def cmd_cluster(args) -> int:
    L, M, _ = _module_from(_read_json(args.input), args.module)
    c = cluster(M, args.seed)
    out = c.to_json()
    out["pretty"] = c.describe()
    out["factor_dims"] = c.factor_dims
    _emit(out, args.output)
    return 0


def cmd_hypercentre(args) -> int:
    data = _read_json(args.input)
    L, M, data = _module_from(data, args.module)
    F = L.field
    if args.whole or "S" not in data:
        S = Subalgebra.whole(L)
    else:
        import numpy as np
        from .linalg import Subspace
        S = Subalgebra(L, Subspace.span(F, L.dim, np.asarray(data["S"], dtype=np.int64).reshape(-1, L.dim, F.m)))
    rep = is_hypercentral(S, M, formation_by_name(args.formation), args.seed, fast=args.fast)
    _emit(rep.to_json(), args.output)
    return 0


def cmd_envelope(args) -> int:
    data = _read_json(args.input)
    F = FieldCtx.from_json(data["field"])
    alg = data["algebra"]
    S = algebra_from_json(F, dict(alg, pmap=[])).underlying()
    faithful = [Matrix.from_json(F, m) for m in data["faithful"]] if "faithful" in data else None
    L, sub = p_envelope(S, faithful)
    if not args.keep_pmap:
        L = adjust_pmap_centre_kill(L)
    out = {"field": F.to_json(),
           "algebra": {"dim": L.dim, "brackets": L.to_sparse(), "pmap": L.to_json_pmap(),
                       "realization": [m.to_json() for m in L.realization]},
           "S": sub.space.to_json(), "pmap_violations": verify_pmap(L)}
    _emit(out, args.output)
    return 0


def cmd_campaign(args) -> int:
    summary = run_campaign(args.primes, args.n, args.max_dim_L, args.max_dim_V, args.seed,
                           pipeline=not args.no_pipeline, keep_records=not args.brief)
    _emit(summary, args.output)
    if args.figures:
        from .plots import render_campaign
        render_campaign(summary, Path(args.figures))
    return 0 if summary["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rlie", description="Restricted Lie algebra workbench")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(sp, inp="instance"):
        sp.add_argument(inp, help="JSON file, or - for stdin")
        sp.add_argument("-o", "--output", help="write JSON here instead of stdout")
        sp.add_argument("--seed", type=int, default=0, help="Meataxe seed")

    sp = sub.add_parser("gen", help="emit a random instance")
    sp.add_argument("--p", type=int, required=True, choices=[2, 3, 5])
    sp.add_argument("--max-dim-L", type=int, default=4)
    sp.add_argument("--max-dim-V", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("check", help="evaluate hypotheses and conclusion")
    common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("pipeline", help="replay the proof on an instance")
    common(sp)
    sp.set_defaults(func=cmd_pipeline)

    sp = sub.add_parser("cluster", help="character cluster of a module")
    common(sp, "input")
    sp.add_argument("--module", default="V", help="which module of an instance file (V or W)")
    sp.set_defaults(func=cmd_cluster)

    sp = sub.add_parser("hypercentre", help="hypercentral series of a module")
    common(sp, "input")
    sp.add_argument("--module", default="V")
    sp.add_argument("--formation", default="nilpotent")
    sp.add_argument("--whole", action="store_true", help="use S = L")
    sp.add_argument("--fast", action="store_true", help="use the formation's fast path")
    sp.set_defaults(func=cmd_hypercentre)

    sp = sub.add_parser("envelope", help="p-envelope of an algebra, centre-killed")
    common(sp, "input")
    sp.add_argument("--keep-pmap", action="store_true", help="skip the centre adjustment")
    sp.set_defaults(func=cmd_envelope)

    sp = sub.add_parser("campaign", help="run seeded instances and summarise")
    sp.add_argument("--primes", type=int, nargs="+", default=[2, 3, 5])
    sp.add_argument("--n", type=int, default=200, help="instances per prime")
    sp.add_argument("--max-dim-L", type=int, default=4)
    sp.add_argument("--max-dim-V", type=int, default=4)
    sp.add_argument("--seed", type=int, default=0, help="first instance seed")
    sp.add_argument("--no-pipeline", action="store_true")
    sp.add_argument("--brief", action="store_true", help="omit per-instance records")
    sp.add_argument("--figures", help="directory for PNG figures and a TSV table")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_campaign)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, AssertionError, RuntimeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
