"""Batch verification driver: every check family as a subcommand.

Exit codes: 0 all checks pass, 1 any check fails, 2 usage error.
JSON reports are byte-identical for a fixed config and seed (timings are
shown in the text format only).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence, TextIO

from .checks import CheckResult, RunConfig, checks_for, run_suite

SUBCOMMANDS = (
    ("schur", "Schur polynomial generating functions and determinant identities"),
    ("fock", "mode algebra, currents, gradings, vacuum uniqueness"),
    ("fms", "field actions, the embedding, closed-form tau functions"),
    ("hirota", "bilinear residue, generating-form checker, restricted equations"),
    ("qdim", "partition generating functions and q-series identities"),
    ("borchardt", "exact determinant/permanent identities"),
    ("verify-all", "every check in every suite"),
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="btau",
        description="Exact batch verification for the charged-free-boson toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in SUBCOMMANDS:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--degree", "-D", type=int, default=8, help="xy-degree cap (default 8)")
        sp.add_argument("--p-window", type=int, default=6, help="p-exponent window (default 6)")
        sp.add_argument("--param-order", type=int, default=3, help="parameter order cap (default 3)")
        sp.add_argument("--order", "-N", type=int, default=40, help="q-series order (default 40)")
        sp.add_argument("--seed", type=int, default=0, help="seed for randomized cases (default 0)")
        sp.add_argument("--json", action="store_true", help="emit the machine-readable report")
        sp.add_argument("--trials", type=int, default=None, help="override randomized trial counts")
        sp.add_argument("--l", dest="ell", type=int, default=None, help="restrict to one charge sector")
        sp.add_argument("--n", dest="n", type=int, default=None, help="matrix dimension for borchardt")
        sp.add_argument(
            "--identity",
            choices=["euler", "euler-family", "identity-1", "identity-2"],
            default=None,
            help="restrict qdim to one identity family",
        )
    return parser


def config_from_args(args: argparse.Namespace, parser: argparse.ArgumentParser) -> RunConfig:
    for name, value in (
        ("degree", args.degree),
        ("p-window", args.p_window),
        ("param-order", args.param_order),
        ("order", args.order),
    ):
        if value < 0:
            parser.error(f"--{name} must be >= 0")
    if args.n is not None and not (1 <= args.n <= 20):
        parser.error("--n must be between 1 and 20 (subset enumeration bound)")
    return RunConfig(
        degree=args.degree,
        p_window=args.p_window,
        param_order=args.param_order,
        q_order=args.order,
        seed=args.seed,
        output_json=args.json,
        trials=args.trials,
        ell=args.ell,
        n=args.n,
        identity=args.identity,
    )


def emit_text(config: RunConfig, results: List[CheckResult], out: TextIO) -> None:
    width = max((len(r.id) for r in results), default=10) + 2
    for r in results:
        out.write(f"{r.status.upper():5} {r.id:<{width}} {r.ms:9.1f} ms  {r.anchor}\n")
        if r.witness:
            out.write(f"      witness: {r.witness}\n")
        if r.detail:
            out.write(f"      detail: {r.detail}\n")
    npass = sum(1 for r in results if r.status == "pass")
    nfail = len(results) - npass
    total = sum(r.ms for r in results)
    out.write(f"summary: {npass} pass, {nfail} fail ({total:.0f} ms)\n")


def emit_json(config: RunConfig, results: List[CheckResult], out: TextIO) -> None:
    doc = {
        "config": config.to_dict(),
        "checks": [r.to_dict() for r in results],
        "summary": {
            "pass": sum(1 for r in results if r.status == "pass"),
            "fail": sum(1 for r in results if r.status == "fail"),
        },
    }
    json.dump(doc, out, indent=2)
    out.write("\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = config_from_args(args, parser)
    specs = checks_for(args.command, config)
    results = run_suite(specs, config)
    if config.output_json:
        emit_json(config, results, sys.stdout)
    else:
        emit_text(config, results, sys.stdout)
    return 0 if all(r.status == "pass" for r in results) else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
