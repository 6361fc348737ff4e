"""Command-line interface.

Subcommands:

    gen      emit a random instance file
    expect   apply the conditional expectation to a named function
    norm     compute a norm (lp | esssup | multiplier | induced | operator)
    op       operator actions (matrix | invert | injective | norm)
    verify   run property checks, write reports, replay witnesses

Exit codes: 0 success / all properties passed, 1 a property violation (or a
singular inversion) was found, 2 usage or I/O error.  The environment
variable ``LMA_SEED`` overrides the default seed; an explicit ``--seed``
flag wins over the environment.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .algebra import MultiplierContext, induced_norm, multiplier_norm
from .expectation import CondExpectation
from .instances import (
    GeneratorConfig,
    Instance,
    InstanceFormatError,
    random_instance,
    read_instance,
    write_instance,
)
from .measure import INF, ess_sup, lp_norm
from .operators import (
    NotInvertibleError,
    invert_operator,
    is_injective,
    operator_matrix,
    operator_norm,
)
from .properties import ALL_PROPERTY_IDS, UnknownPropertyError, get_property
from .suite import DEFAULT_SEED, SuiteConfig, replay, run_suite, verify

__all__ = ["main", "build_parser"]


def _default_seed() -> int:
    env = os.environ.get("LMA_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SystemExit(f"LMA_SEED must be an integer, got {env!r}")
    return DEFAULT_SEED


def _parse_exponent(text: str) -> float:
    if text.lower() in ("inf", "infinity"):
        return INF
    return float(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lambertmul",
        description="Star-product multiplier algebra on finite measure spaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="emit a random instance file")
    gen.add_argument("--seed", type=int, default=None)
    gen.add_argument("--max-atoms", type=int, default=16)
    gen.add_argument("--max-blocks", type=int, default=6)
    gen.add_argument("--value-scale", type=float, default=4.0)
    gen.add_argument("--out", default=None, help="output path (default stdout)")

    expect = sub.add_parser("expect", help="apply the conditional expectation")
    expect.add_argument("--space", required=True, help="instance file")
    expect.add_argument("--fn", required=True, help="function name inside the file")
    expect.add_argument("--out", required=True, help="output instance file")

    norm = sub.add_parser("norm", help="compute a norm of a named function")
    norm.add_argument("--space", required=True)
    norm.add_argument("--fn", required=True)
    norm.add_argument(
        "--kind",
        required=True,
        choices=["lp", "esssup", "multiplier", "induced", "operator"],
    )
    norm.add_argument("--p", type=_parse_exponent, default=2.0)
    norm.add_argument("--q", type=_parse_exponent, default=None)
    norm.add_argument("--restarts", type=int, default=None)
    norm.add_argument("--steps", type=int, default=None)
    norm.add_argument("--seed", type=int, default=None)

    op = sub.add_parser("op", help="operator actions for a named symbol")
    op.add_argument("action", choices=["matrix", "invert", "injective", "norm"])
    op.add_argument("--space", required=True)
    op.add_argument("--fn", required=True)
    op.add_argument("--p", type=_parse_exponent, default=2.0)
    op.add_argument("--q", type=_parse_exponent, default=None)
    op.add_argument("--out", default=None)
    op.add_argument("--seed", type=int, default=None)

    ver = sub.add_parser("verify", help="run property checks")
    ver.add_argument("--props", default="all", help="'all' or comma-separated ids")
    ver.add_argument("--trials", type=int, default=500)
    ver.add_argument("--seed", type=int, default=None)
    ver.add_argument("--tol", type=float, default=1e-9)
    ver.add_argument("--max-atoms", type=int, default=16)
    ver.add_argument("--max-blocks", type=int, default=6)
    ver.add_argument("--stress", action="store_true", help="raise to 64 atoms")
    ver.add_argument("--report", default=None, help="write a JSON report here")
    ver.add_argument("--replay", default=None, help="replay witnesses from a report file")
    return parser


def _load(path):
    try:
        return read_instance(path)
    except FileNotFoundError:
        raise SystemExit(f"error: no such file: {path}")
    except InstanceFormatError as exc:
        raise SystemExit(f"error: {exc}")


def _pick_fn(functions, name, path):
    if name not in functions:
        raise SystemExit(
            f"error: {path} has no function named {name!r}; available: "
            f"{', '.join(sorted(functions)) or '(none)'}"
        )
    return functions[name]


def _complex_pairs(values) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values)]


def _emit(doc) -> None:
    json.dump(doc, sys.stdout, indent=1, sort_keys=True)
    sys.stdout.write("\n")


def _cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    cfg = GeneratorConfig(
        max_atoms=args.max_atoms, max_blocks=args.max_blocks, value_scale=args.value_scale
    )
    space, partition, fns = random_instance(seed, cfg)
    functions = dict(zip(("u", "v", "w"), fns))
    if args.out:
        write_instance(args.out, space, partition, functions)
    else:
        _emit(Instance(space, partition, functions).to_dict())
    return 0


def _cmd_expect(args) -> int:
    space, partition, functions = _load(args.space)
    f = _pick_fn(functions, args.fn, args.space)
    expectation = CondExpectation(space, partition)
    write_instance(args.out, space, partition, {args.fn: expectation.apply(f)})
    return 0


def _cmd_norm(args) -> int:
    space, partition, functions = _load(args.space)
    f = _pick_fn(functions, args.fn, args.space)
    expectation = CondExpectation(space, partition)
    out = {"kind": args.kind, "fn": args.fn, "p": "inf" if args.p == INF else args.p}
    if args.kind == "lp":
        out["value"] = lp_norm(f, args.p, space)
    elif args.kind == "esssup":
        out["value"] = ess_sup(f, space)
    elif args.kind == "multiplier":
        out["value"] = multiplier_norm(f, MultiplierContext(space, expectation, args.p))
    elif args.kind == "induced":
        kwargs = {}
        if args.restarts is not None:
            kwargs["restarts"] = args.restarts
        if args.steps is not None:
            kwargs["steps"] = args.steps
        kwargs["seed"] = args.seed if args.seed is not None else _default_seed()
        est = induced_norm(f, MultiplierContext(space, expectation, args.p), **kwargs)
        out["value"] = est.lower_bound
        out["method"] = est.method
        out["iterations"] = est.iterations
    else:  # operator
        q = args.q if args.q is not None else args.p
        mat = operator_matrix(f, MultiplierContext(space, expectation, args.p))
        seed = args.seed if args.seed is not None else _default_seed()
        res = operator_norm(mat, args.p, q, seed=seed)
        out["q"] = "inf" if q == INF else q
        out["value"] = res.value
        out["exact"] = res.exact
    _emit(out)
    return 0


def _cmd_op(args) -> int:
    space, partition, functions = _load(args.space)
    f = _pick_fn(functions, args.fn, args.space)
    expectation = CondExpectation(space, partition)
    ctx = MultiplierContext(space, expectation, args.p)
    if args.action == "matrix":
        mat = operator_matrix(f, ctx)
        _emit({"n": mat.n, "matrix": [_complex_pairs(row) for row in mat.entries]})
        return 0
    if args.action == "invert":
        try:
            w = invert_operator(f, ctx)
        except NotInvertibleError as exc:
            _emit({
                "error": "not invertible",
                "smallest_singular_value": exc.smallest_singular_value,
            })
            return 1
        if args.out:
            write_instance(args.out, space, partition, {f"inv_{args.fn}": w})
        else:
            _emit({"symbol": _complex_pairs(w)})
        return 0
    if args.action == "injective":
        _emit({"injective": is_injective(f, ctx)})
        return 0
    # norm
    q = args.q if args.q is not None else args.p
    seed = args.seed if args.seed is not None else _default_seed()
    res = operator_norm(operator_matrix(f, ctx), args.p, q, seed=seed)
    _emit({
        "p": "inf" if args.p == INF else args.p,
        "q": "inf" if q == INF else q,
        "value": res.value,
        "exact": res.exact,
    })
    return 0


def _cmd_verify(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()

    if args.replay:
        try:
            with open(args.replay, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except FileNotFoundError:
            raise SystemExit(f"error: no such file: {args.replay}")
        except json.JSONDecodeError as exc:
            raise SystemExit(f"error: {args.replay}: invalid JSON: {exc}")
        entries = doc.get("reports", [doc]) if isinstance(doc, dict) else doc
        results = []
        for entry in entries:
            if not entry.get("witness"):
                continue
            results.append(
                replay(entry["witness"], entry["id"], entry["max_violation"], tol=args.tol)
            )
        _emit({"replayed": results})
        if not results:
            print("no witnesses found in the replay file", file=sys.stderr)
            return 2
        return 0 if all(r["match"] for r in results) else 1

    if args.props.strip().lower() == "all":
        prop_ids = list(ALL_PROPERTY_IDS)
    else:
        prop_ids = [p.strip() for p in args.props.split(",") if p.strip()]
        try:
            for pid in prop_ids:
                get_property(pid)
        except UnknownPropertyError as exc:
            raise SystemExit(f"error: {exc}")
        if not prop_ids:
            raise SystemExit("error: --props got an empty list")

    if set(prop_ids) == set(ALL_PROPERTY_IDS):
        config = SuiteConfig(
            trials=args.trials, seed=seed, tol=args.tol,
            max_atoms=args.max_atoms, max_blocks=args.max_blocks, stress=args.stress,
        )
        suite = run_suite(config)
        reports = suite.reports
        report_doc = suite.to_dict()
    else:
        reports = [
            verify(
                pid, trials=args.trials, seed=seed, tol=args.tol,
                max_atoms=args.max_atoms, max_blocks=args.max_blocks, stress=args.stress,
            )
            for pid in prop_ids
        ]
        report_doc = {
            "seed": seed,
            "tol": args.tol,
            "config": SuiteConfig(trials=args.trials, max_atoms=args.max_atoms,
                                  max_blocks=args.max_blocks, stress=args.stress).to_dict(),
            "reports": [r.to_dict() for r in reports],
            "observations": [],
        }

    for r in reports:
        status = "pass" if r.passed else "FAIL"
        print(f"{r.id:20s} {status}  trials={r.trials}  max_violation={r.max_violation:+.3e}")
    failed = [r for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} properties passed")

    if args.report:
        try:
            with open(args.report, "w", encoding="utf-8") as fh:
                json.dump(report_doc, fh, indent=1, sort_keys=True)
                fh.write("\n")
        except OSError as exc:
            print(f"error: cannot write report to {args.report}: {exc}", file=sys.stderr)
            return 2
    return 1 if failed else 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already; normalize
        return int(exc.code) if exc.code else 0
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "expect":
            return _cmd_expect(args)
        if args.command == "norm":
            return _cmd_norm(args)
        if args.command == "op":
            return _cmd_op(args)
        return _cmd_verify(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 2
        return int(exc.code) if exc.code else 0
    except (InstanceFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
