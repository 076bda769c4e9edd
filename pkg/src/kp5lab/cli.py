"""Command-line entry point.

Subcommands::

    kp5 simulate    --config cfg.json --out DIR
    kp5 verify SUITE [--samples K] [--seed S] --out DIR
    kp5 uniqueness  --config cfg.json --out DIR
    kp5 scaling-test --config cfg.json --out DIR

Exit codes: 0 success, 1 assertion/experiment failure (report retained in the
output directory), 2 configuration error (nothing written).  KP5_THREADS caps
parallelism (the suites here are sequential; the cap is recorded and passed
through to any thread pools).
"""

from __future__ import annotations

import argparse
import json
import sys

from kp5lab.errors import ConfigurationError, KP5Error
from kp5lab.suites import (
    SUITES,
    load_config,
    run_scaling_test,
    run_simulate,
    run_uniqueness,
    run_verification_suite,
)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="kp5",
        description="Spectral laboratory for the 5th-order KP equations",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the solver from a JSON config")
    sim.add_argument("--config", required=True)
    sim.add_argument("--out", required=True)

    ver = sub.add_parser("verify", help="run one verification suite")
    ver.add_argument("suite", choices=SUITES)
    ver.add_argument("--samples", type=int, default=None)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--out", required=True)

    uni = sub.add_parser("uniqueness", help="scheme-difference experiment")
    uni.add_argument("--config", required=True)
    uni.add_argument("--out", required=True)

    sca = sub.add_parser("scaling-test", help="dilation bookkeeping checks")
    sca.add_argument("--config", required=True)
    sca.add_argument("--out", required=True)
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return run_simulate(load_config(args.config), args.out)
        if args.command == "verify":
            return run_verification_suite(
                args.suite, args.out, samples=args.samples, seed=args.seed
            )
        if args.command == "uniqueness":
            return run_uniqueness(load_config(args.config), args.out)
        if args.command == "scaling-test":
            # scaling configs are free-form (eps/norms/T), not run configs
            try:
                with open(args.config, "r", encoding="utf-8") as fh:
                    cfg = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigurationError(f"cannot read config: {exc}") from exc
            return run_scaling_test(cfg, args.out)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except KP5Error as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
