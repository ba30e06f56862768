"""Command-line front end.

Exit codes: 0 when every check is certified, 1 when something exceeds its
expected value (or a theorem's hypotheses fail), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import __version__
from .catalog import run_catalog
from .certificates import csv_summary, dumps, secant_certificate, write_json
from .exact_linalg import DEFAULT_PRIMES
from .horace import (
    ScheduleTrace,
    replay_theorem_i1,
    replay_theorem_i1_0,
    replay_theorem_minus,
)
from .terracini import DEFAULT_SEED, Config, ScanMode, prop_u1_check, scan_z_values, secant_dimension
from .variety import BundleDegree, MultiProjectiveFormat

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--prime", type=_int_list, default=list(DEFAULT_PRIMES),
                   help="comma-separated primes, tried in order")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master seed")
    p.add_argument("--entropy", action="store_true", help="draw the master seed from os.urandom")
    p.add_argument("--trials", type=int, default=3, help="seeds per prime")
    p.add_argument("--out", type=Path, default=None, help="output directory")


def _config(args) -> Config:
    seed = int.from_bytes(os.urandom(8), "big") if args.entropy else args.seed
    try:
        return Config(primes=tuple(args.prime), seed=seed, trials=args.trials)
    except ValueError as exc:
        raise UsageError(str(exc))


def _format_bundle(factors, degrees):
    if factors is None or degrees is None:
        raise UsageError("both factors and degrees are required")
    if len(factors) != len(degrees):
        raise UsageError(f"{len(factors)} factors but {len(degrees)} degrees")
    try:
        return MultiProjectiveFormat(tuple(factors)), BundleDegree(tuple(degrees))
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_dims(args) -> int:
    fmt, bundle = _format_bundle(args.factors, args.degrees)
    config = _config(args)
    if args.z is not None:
        if args.z < 1:
            raise UsageError("--z must be >= 1")
        zs = [args.z]
    else:
        mode = ScanMode.ALL if args.all else ScanMode(args.mode)
        zs = scan_z_values(fmt, bundle, mode)
    certs = []
    for z in zs:
        t0 = time.perf_counter()
        res = secant_dimension(fmt, bundle, z, config)
        ms = round((time.perf_counter() - t0) * 1000)
        certs.append(secant_certificate(fmt, bundle, res, config, ms))
    summary = csv_summary(certs)
    if args.out is not None:
        for c in certs:
            write_json(args.out / f"cert_z{c['z']}.json", c)
        (args.out / "summary.csv").write_text(summary)
    sys.stdout.write(summary)
    return EXIT_OK if all(c["verdict"] == "CertifiedExpected" for c in certs) else EXIT_FAIL


def _hypothesis_failed(which: str, instance: dict, reason: str) -> ScheduleTrace:
    trace = ScheduleTrace(which, instance, {"error": reason})
    trace.verdict = "HypothesisFailed"
    return trace


def cmd_theorem(args) -> int:
    config = _config(args)
    which = args.which
    t0 = time.perf_counter()
    if which == "minus":
        if args.factors is None or len(args.factors) != 2:
            raise UsageError("--factors must give n1,n2")
        if args.degrees is None:
            raise UsageError("--degrees is required")
        extra = args.extra_p1 if args.extra_p1 is not None else len(args.degrees) - 2
        if len(args.degrees) != extra + 2:
            raise UsageError(f"--extra-p1 {extra} needs {extra + 2} degrees, got {len(args.degrees)}")
        n1, n2 = args.factors
        try:
            trace = replay_theorem_minus(n1, n2, args.degrees, config)
        except ValueError as exc:
            instance = {"factors": [n1, n2], "extra_p1": extra, "degrees": args.degrees}
            trace = _hypothesis_failed("minus", instance, str(exc))
        payload, ok = trace.to_json(), trace.verified
    else:
        y_format, y_bundle = _format_bundle(args.y_factors, args.y_degrees)
        if which == "u1":
            if args.z is None or args.z < 1:
                raise UsageError("--z >= 1 is required for u1")
            res = prop_u1_check(y_format, y_bundle, args.z, config)
            payload = {"theorem": "u1", "instance": {
                "y_factors": y_format.to_json(), "y_degrees": y_bundle.to_json(), "z": args.z,
            }, "verdict": res.status, **res.to_json()}
            ok = res.verified
        else:
            if args.t is None or args.t < 2:
                raise UsageError("--t >= 2 is required")
            replay = replay_theorem_i1 if which == "i1" else replay_theorem_i1_0
            trace = replay(y_format, y_bundle, args.t, config)
            payload, ok = trace.to_json(), trace.verified
    doc = {
        "tool_version": __version__,
        "primes": list(config.primes),
        "master_seed": config.seed,
        "trials": config.trials,
        **payload,
        "wall_time_ms": round((time.perf_counter() - t0) * 1000),
    }
    if args.out is not None:
        write_json(args.out / f"theorem_{which}.json", doc)
        print(f"{which}: {doc['verdict']}")
    else:
        sys.stdout.write(dumps(doc))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_catalog(args) -> int:
    config = _config(args)
    outcomes = run_catalog(config)
    width = max(len(o.entry.name) for o in outcomes)
    print(f"{'entry'.ljust(width)}  expected  observed  result")
    for o in outcomes:
        print(f"{o.entry.name.ljust(width)}  {o.entry.expected_defect:8d}  "
              f"{o.observed_defect:8d}  {'pass' if o.passed else 'FAIL'}")
    if args.out is not None:
        write_json(args.out / "catalog.json", {
            "tool_version": __version__,
            "primes": list(config.primes),
            "master_seed": config.seed,
            "trials": config.trials,
            "entries": [o.to_json() for o in outcomes],
        })
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="secantcert", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dims", help="secant dimensions of a Segre-Veronese embedding")
    p.add_argument("--factors", type=_int_list, required=True)
    p.add_argument("--degrees", type=_int_list, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--z", type=int)
    group.add_argument("--all-critical", action="store_true")
    group.add_argument("--all", action="store_true")
    group.add_argument("--mode", choices=[m.value for m in ScanMode], default="critical")
    _add_config_flags(p)
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("theorem", help="replay a theorem on a concrete instance")
    p.add_argument("--which", choices=["i1", "minus", "i1.0", "u1"], required=True)
    p.add_argument("--factors", type=_int_list)
    p.add_argument("--extra-p1", type=int)
    p.add_argument("--degrees", type=_int_list)
    p.add_argument("--y-factors", type=_int_list)
    p.add_argument("--y-degrees", type=_int_list)
    p.add_argument("--t", type=int)
    p.add_argument("--z", type=int)
    _add_config_flags(p)
    p.set_defaults(func=cmd_theorem)

    p = sub.add_parser("catalog", help="run the regression catalog")
    _add_config_flags(p)
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"secantcert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
