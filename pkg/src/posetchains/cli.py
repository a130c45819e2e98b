"""Batch command line: generate, color, reduce, verify, search, sweep.

Subcommands: gen, ff, reduce, verify, ladder, chi-exact, suite.
File schemas are the module-level JSON formats (see README).
"""

from __future__ import annotations

import argparse
import json
import sys

from .chains import width
from .generators import (
    gen_core,
    gen_ladder,
    gen_Qk,
    gen_regular_with_ladder,
    gen_Rn,
)
from .harness import ExperimentConfig, emit, run_suite
from .ladder import find_max_ladder
from .online import OnlineInstance, chi_ff_exact, first_fit
from .poset import poset_from_json, poset_to_json
from .reduction import CompositeColorer
from .regular import RegularInstance, verify_p6_p7, verify_regular
from .online import run_online

__all__ = ["main"]


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _parse_params(items: str | None) -> dict[str, str]:
    out: dict[str, str] = {}
    for chunk in (items or "").split(","):
        if not chunk:
            continue
        key, _, value = chunk.partition("=")
        out[key.strip()] = value.strip()
    return out


def _cmd_gen(args) -> int:
    params = _parse_params(args.params)
    kind = args.kind
    if kind == "rn":
        inst = gen_Rn(int(params["n"]))
        _write(args.out, json.dumps(inst.to_json_dict()))
    elif kind == "ladder":
        _write(args.out, poset_to_json(gen_ladder(int(params["m"]))))
    elif kind == "core":
        p = gen_core(params.get("type", "I"), int(params["w"]), int(params.get("k", 1)))
        _write(args.out, poset_to_json(p))
    elif kind == "regular-ladder":
        inst, witness = gen_regular_with_ladder(int(params["w"]))
        doc = json.loads(inst.to_json())
        doc["ladder"] = [list(r) for r in witness.rungs]
        _write(args.out, json.dumps(doc))
    elif kind == "qk":
        q, g = gen_Qk(int(params["m"]), int(params["k"]))
        doc = json.loads(poset_to_json(q))
        doc["coloring"] = list(g.color)
        doc["n_colors"] = g.n_colors
        _write(args.out, json.dumps(doc))
    else:
        raise SystemExit(f"unknown kind {kind!r}")
    return 0


def _load_instance(path: str) -> OnlineInstance:
    with open(path) as fh:
        return OnlineInstance.from_json_dict(json.load(fh))


def _cmd_ff(args) -> int:
    inst = _load_instance(args.instance)
    g = first_fit(inst)
    if args.format == "csv":
        lines = ["vertex,color"] + [f"{v},{c}" for v, c in enumerate(g.color)]
        _write(args.out, "\n".join(lines) + "\n")
    else:
        _write(args.out, json.dumps({"colors": g.n_colors, "assignment": list(g.color)}))
    return 0


def _cmd_reduce(args) -> int:
    inst = _load_instance(args.instance)
    w = args.w if args.w is not None else inst.width_bound
    inst = OnlineInstance(inst.poset, inst.presentation, w)
    colorer = CompositeColorer(w, color_cap=max(2, inst.poset.n * w + 1))
    part = run_online(colorer, inst)
    if args.format == "csv":
        lines = ["vertex,chain"] + [f"{v},{c}" for v, c in enumerate(part.assignment)]
        _write(args.out, "\n".join(lines) + "\n")
    else:
        _write(
            args.out,
            json.dumps({"chains": part.n_chains, "assignment": list(part.assignment)}),
        )
    if args.emit_regular:
        regs = colorer.regular_instances()
        top = regs.get(w)
        doc = {
            str(level): json.loads(reg.to_json()) for level, reg in sorted(regs.items())
        }
        with open(args.emit_regular, "w") as fh:
            json.dump({"levels": doc, "top": json.loads(top.to_json()) if top else None}, fh)
    return 0


def _cmd_verify(args) -> int:
    with open(args.regular) as fh:
        inst = RegularInstance.from_json(fh.read())
    v1 = verify_regular(inst)
    print(f"regular   {'ok' if v1.ok else 'FAIL'}   {v1}")
    failed = not v1.ok
    if v1.ok:
        v2 = verify_p6_p7(inst)
        print(f"global    {'ok' if v2.ok else 'FAIL'}   {v2}")
        failed = failed or not v2.ok
    return 1 if failed else 0


def _cmd_ladder(args) -> int:
    with open(args.poset) as fh:
        p = poset_from_json(fh.read())
    m, emb = find_max_ladder(p, cap=args.cap)
    _write(args.out, json.dumps({"m": m, "rungs": [list(r) for r in emb.rungs]}))
    return 0


def _cmd_chi_exact(args) -> int:
    with open(args.poset) as fh:
        p = poset_from_json(fh.read())
    print(chi_ff_exact(p))
    return 0


def _cmd_suite(args) -> int:
    if args.config:
        with open(args.config) as fh:
            config = ExperimentConfig.from_json(fh.read())
    else:
        sizes = []
        for chunk in (args.sizes or "").split(","):
            if chunk:
                n, _, w = chunk.partition(":")
                sizes.append((int(n), int(w)))
        config = ExperimentConfig(
            seed=args.seed,
            trials=args.trials,
            sizes=tuple(sizes),
            algorithms=tuple((args.algorithms or "first_fit").split(",")),
            rn_sweep=None,
        )
    rows = run_suite(config)
    text = emit(rows, fmt=args.format)
    _write(args.out, text)
    return 1 if any(not r.valid for r in rows) else 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="posetchains")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, out=True):
        sp.add_argument("--seed", type=int, default=0)
        if out:
            sp.add_argument("--out", default=None)
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("gen", help="emit a generated instance")
    sp.add_argument("--kind", required=True, choices=("rn", "ladder", "core", "regular-ladder", "qk"))
    sp.add_argument("--params", default="", help="comma list, e.g. n=5 or w=6,k=4,type=S")
    common(sp)
    sp.set_defaults(func=_cmd_gen)

    sp = sub.add_parser("ff", help="run First-Fit on an instance file")
    sp.add_argument("--instance", required=True)
    common(sp)
    sp.set_defaults(func=_cmd_ff)

    sp = sub.add_parser("reduce", help="run the width-reduction pipeline")
    sp.add_argument("--instance", required=True)
    sp.add_argument("--w", type=int, default=None)
    sp.add_argument("--emit-regular", default=None)
    common(sp)
    sp.set_defaults(func=_cmd_reduce)

    sp = sub.add_parser("verify", help="verify a regular-instance file")
    sp.add_argument("--regular", required=True)
    common(sp, out=False)
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("ladder", help="maximum induced ladder search")
    sp.add_argument("--poset", required=True)
    sp.add_argument("--cap", type=int, default=64)
    common(sp)
    sp.set_defaults(func=_cmd_ladder)

    sp = sub.add_parser("chi-exact", help="exact worst-case First-Fit value")
    sp.add_argument("--poset", required=True)
    common(sp, out=False)
    sp.set_defaults(func=_cmd_chi_exact)

    sp = sub.add_parser("suite", help="run an experiment matrix")
    sp.add_argument("--config", default=None)
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--sizes", default="", help="comma list n:w, e.g. 9:3,20:4")
    sp.add_argument("--algorithms", default="first_fit,composite")
    common(sp)
    sp.set_defaults(func=_cmd_suite)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
