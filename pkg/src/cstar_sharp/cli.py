"""Command-line front end.

Exit codes: 0 ok, 1 malformed input or bad configuration, 2 tolerance
violation, 3 singular input (or input outside the hypotheses of the checked identity),
4 unwritable output path.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys

from .algebra import DEFAULT_TOL
from .continuous_l2 import closest_unit_in_subspace, compute_cf, l2_norms, verify_thm32, verify_thm34
from .errors import (
    CommutatorTooLarge,
    CStarError,
    NotInvertible,
    NotNormalized,
    ProjectionZero,
    ZeroFunction,
)
from .exact_constant import prop25_upper_bound, verify_cor23, verify_thm22
from .group_integral import verify_thm27
from .modulus_search import SearchConfig, search_min_distance
from .scan import ScanConfig, render, run_scan, summarize
from .serialization import (
    InputError,
    dumps,
    group_function_from_json,
    l2_function_from_json,
    l2_function_to_json,
    loads,
    measure_space_from_json,
    module_vector_from_json,
    projector_from_json,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_TOLERANCE = 2
EXIT_SINGULAR = 3
EXIT_OUTPUT = 4

SEED_ENV = "CSTAR_SHARP_SEED"

log = logging.getLogger("cstar_sharp")


class ConfigError(Exception):
    pass


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _resolve_seed(args) -> int:
    if args.seed is not None:
        seed = args.seed
    else:
        env = os.environ.get(SEED_ENV)
        if env is None:
            return 0
        try:
            seed = int(env)
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV}={env!r} is not an integer") from exc
    if not 0 <= seed < (1 << 64):
        raise ConfigError("seed must be an unsigned 64-bit integer")
    return seed


def _tolerances(args):
    if args.tol is None:
        return DEFAULT_TOL
    if not args.tol > 0:
        raise ConfigError("--tol must be positive")
    return DEFAULT_TOL.with_eq_tol(args.tol)


def _read_json(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    return loads(raw)


def _emit(doc, args) -> None:
    text = dumps(doc)
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")


def _search_config(args, seed) -> SearchConfig:
    try:
        return SearchConfig(
            restarts=args.restarts,
            max_iters=args.iters,
            step_init=args.step_init,
            step_shrink=args.step_shrink,
            conv_tol=args.conv_tol,
            seed=seed,
            witness_seed=args.witness,
            workers=args.workers,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def cmd_cx(args) -> int:
    tol = _tolerances(args)
    x = module_vector_from_json(_read_json(args.input))
    try:
        report = verify_thm22(x, tol)
    except NotInvertible as exc:
        print(dumps({"status": "skipped_singular", "error": str(exc)}))
        return EXIT_SINGULAR
    if report.commuting:
        try:
            report = verify_cor23(x, tol)
        except CommutatorTooLarge:
            pass
    try:
        report.distance_found = prop25_upper_bound(x, tol).witness_distance
    except NotInvertible:
        report.distance_found = None
    _emit(report.to_dict(), args)
    return EXIT_OK if report.status == "ok" else EXIT_TOLERANCE


def cmd_search(args) -> int:
    tol = _tolerances(args)
    cfg = _search_config(args, _resolve_seed(args))
    x = module_vector_from_json(_read_json(args.input))
    try:
        result = search_min_distance(x, cfg, tol)
    except NotInvertible as exc:
        print(dumps({"status": "skipped_singular", "error": str(exc)}))
        return EXIT_SINGULAR
    _emit(result.to_dict(), args)
    return EXIT_OK


def cmd_scan(args) -> int:
    tol = _tolerances(args)
    seed = _resolve_seed(args)
    search = _search_config(args, seed) if args.search else None
    if not args.out:
        raise ConfigError("scan requires --out")
    try:
        cfg = ScanConfig(
            k_list=args.k,
            n_list=args.n,
            trials=args.trials,
            seed=seed,
            tol=tol,
            output_path=args.out,
            format=args.format,
            search=search,
            workers=args.workers,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    try:
        fh = open(cfg.output_path, "w", newline="")
    except OSError as exc:
        print(f"error: cannot write {cfg.output_path}: {exc.strerror}", file=sys.stderr)
        return EXIT_OUTPUT
    rows = run_scan(cfg)
    with fh:
        fh.write(render(rows, cfg))
    summary = summarize(rows)
    c = summary["counts"]
    print(
        f"rows={summary['rows']} ok={c['ok']} skipped_singular={c['skipped_singular']} "
        f"tolerance_violation={c['tolerance_violation']} "
        f"max_residual_thm22={summary['max_residual_thm22']!r} "
        f"max_residual_defs_match={summary['max_residual_defs_match']!r} "
        f"min_ineq_margin={summary['min_ineq_margin']!r}"
    )
    return EXIT_TOLERANCE if c["tolerance_violation"] else EXIT_OK


def cmd_l2(args) -> int:
    tol = _tolerances(args)
    doc = _read_json(args.input)
    if not isinstance(doc, dict) or "space" not in doc or "function" not in doc:
        raise InputError("l2 input needs 'space' and 'function' fields")
    space = measure_space_from_json(doc["space"])
    f = l2_function_from_json(doc["function"], space)
    one, two = l2_norms(f)
    out = {"one_norm": one, "two_norm": two, "total_mass": space.total_mass}
    try:
        out["c_f"] = compute_cf(f, tol)
        thm32 = verify_thm32(f, tol)
    except ZeroFunction as exc:
        print(dumps({"status": "zero_function", "error": str(exc), **out}))
        return EXIT_SINGULAR
    out["thm32"] = thm32.to_dict()
    ok = thm32.ok
    if doc.get("basis") is not None:
        proj = projector_from_json(doc["basis"], space)
        trials = doc.get("trials", 100)
        if isinstance(trials, bool) or not isinstance(trials, int) or trials < 1:
            raise InputError("trials must be a positive integer")
        thm34 = verify_thm34(proj, trials, _resolve_seed(args), tol, strict=bool(doc.get("strict", False)))
        out["thm34"] = thm34.to_dict()
        ok = ok and thm34.ok
        try:
            best = closest_unit_in_subspace(f.with_values(f.values / two), proj, tol)
            out["thm33"] = {"closest_unit": l2_function_to_json(best)}
        except ProjectionZero as exc:
            out["thm33"] = {"error": str(exc)}
    out["status"] = "ok" if ok else "tolerance_violation"
    _emit(out, args)
    return EXIT_OK if ok else EXIT_TOLERANCE


def cmd_group(args) -> int:
    tol = _tolerances(args)
    try:
        f = group_function_from_json(_read_json(args.input))
    except CStarError as exc:
        raise InputError(str(exc)) from exc
    try:
        report = verify_thm27(f, tol)
    except NotNormalized as exc:
        print(dumps({"status": "not_normalized", "error": str(exc), "normalization_residual": exc.residual}))
        return EXIT_SINGULAR
    _emit(report.to_dict(), args)
    return EXIT_OK if report.ok else EXIT_TOLERANCE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="eq_tol; the other tolerances scale with it")
    common.add_argument("--seed", type=int, default=None, help=f"64-bit seed (fallback: ${SEED_ENV}, then 0)")
    common.add_argument("--out", default=None, help="output path")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("-v", "--verbose", action="store_true")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--restarts", type=int, default=16)
    search.add_argument("--iters", type=int, default=2000)
    search.add_argument("--step-init", type=float, default=0.5)
    search.add_argument("--step-shrink", type=float, default=0.7)
    search.add_argument("--conv-tol", type=float, default=1e-9)
    witness = search.add_mutually_exclusive_group()
    witness.add_argument("--witness", dest="witness", action="store_const", const=True, default=None,
                         help="require the analytic witness as restart 0 (exit 3 if it does not exist)")
    witness.add_argument("--no-witness", dest="witness", action="store_const", const=False,
                         help="start every restart from random unitaries")
    search.add_argument("--workers", type=int, default=1)

    parser = argparse.ArgumentParser(prog="cstar-sharp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cx", parents=[common], help="exact constant c_x for a module vector")
    p.add_argument("input")
    p.set_defaults(func=cmd_cx)

    p = sub.add_parser("search", parents=[common, search], help="search the constant-modulus set")
    p.add_argument("input")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("scan", parents=[common, search], help="bulk randomized property scan")
    p.add_argument("--k", type=_int_list, default=[1, 2, 3, 4, 8], help="comma-separated k values")
    p.add_argument("--n", type=_int_list, default=[1, 2, 3, 5, 16], help="comma-separated n values")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--search", action="store_true", help="also run the modulus search per instance")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("l2", parents=[common], help="continuous l1-l2 exact constant")
    p.add_argument("input")
    p.set_defaults(func=cmd_l2)

    p = sub.add_parser("group", parents=[common], help="finite-group Kasparov inner product identity")
    p.add_argument("input")
    p.set_defaults(func=cmd_group)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CStarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_OUTPUT


if __name__ == "__main__":
    sys.exit(main())
