#!/usr/bin/env python3
"""
Command line for the spin-s Dicke toolkit.

Usage:
    python -m app.cli prepare --s2 2 --n 3 --k 2
    python -m app.cli verify --s2 2 --n 3 --k 2 --simplified
    python -m app.cli synth --s2 2 --n 3 --k 2 --simplified --describe
    python -m app.cli count --s2 1 --n 4 --k 2
    python -m app.cli decompose --s2 2 --n 3 --k 2
    python -m app.cli entropy --s2 2 --n 50 --k 50 --out entropy.csv

Spin is given doubled: --s2 1 is s = 1/2, --s2 2 is s = 1.

Exit status: 0 ok, 1 verification failed, 2 bad arguments, 3 register too
large to simulate.
"""
import argparse
import logging
import sys

import pydantic

from app.core.exceptions import (
    EXIT_BAD_ARGUMENTS,
    EXIT_OK,
    EXIT_VERIFICATION_FAILED,
    AppException,
)
from app.core.logging_config import setup_logging
from app.models.schemas import CommandRequest, VerifyReport
from app.services.dicke_service import get_dicke_service
from app.utils.helpers import atomic_write_text

logger = logging.getLogger(__name__)

SUBCOMMANDS = {
    "prepare": "synthesize the circuit, run it on the reference state, write the state",
    "verify": "check circuit output against the closed form and the independent constructions",
    "synth": "write the circuit in the JSON interchange format",
    "count": "print T-operator counts and gate tallies",
    "decompose": "write the qudit Dicke decomposition as `k0 ... k2s  p q` lines",
    "entropy": "write the entanglement entropy table as CSV",
}


def get_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dicke",
        description="Prepare, verify and analyse spin-s Dicke states |D(s)_{n,k}>.",
    )
    p.add_argument("--log-level", default=None, help="logging level (default from LOG_LEVEL)")
    commands = p.add_subparsers(dest="subcommand", required=True, metavar="command")

    for name, help_text in SUBCOMMANDS.items():
        c = commands.add_parser(name, help=help_text, description=help_text)
        c.add_argument("--s2", type=int, required=True, help="doubled spin 2s (1 for s=1/2, 2 for s=1, ...)")
        c.add_argument("--n", type=int, required=True, help="number of sites")
        c.add_argument("--k", type=int, required=True, help="number of lowerings, 0 <= k <= s2*n")
        c.add_argument("--out", default=None, metavar="PATH", help="write output to PATH instead of stdout")
        c.add_argument("--format", choices=["circuit-json", "state-text", "csv"], default=None)
        if name in ("prepare", "verify", "synth"):
            c.add_argument("--simplified", action="store_true", help="use the k-dependent circuit")
            c.add_argument(
                "--perturb", type=float, default=0.0, metavar="DELTA", help="add DELTA to every rotation angle"
            )
        if name == "verify":
            c.add_argument("--tolerance", type=float, default=None, help="allowed infidelity (default 1e-10)")
        if name == "synth":
            c.add_argument("--describe", action="store_true", help="print T provenance instead of JSON")
        if name == "entropy":
            c.add_argument("--l", type=int, default=None, help="partition size; omit to sweep l = 1 ... n-1")
            c.add_argument("--entropy-base", choices=["d", "2"], default=None, help="log base 2s+1 or bits")
    return p


def _request(args: argparse.Namespace) -> CommandRequest:
    fields = {
        key: value
        for key, value in vars(args).items()
        if key in CommandRequest.model_fields and value is not None
    }
    return CommandRequest(**fields)


def main(args=None) -> int:
    args = get_parser().parse_args(args)
    setup_logging(args.log_level)

    try:
        request = _request(args)
    except pydantic.ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BAD_ARGUMENTS

    try:
        result = get_dicke_service().process(request)
        text = result.render()
        if request.out:
            atomic_write_text(request.out, text)
            logger.info(f"Wrote {request.subcommand} output to {request.out}")
        else:
            sys.stdout.write(text)
    except AppException as e:
        logger.error(f"❌ {type(e).__name__}: {e.message}")
        print(f"error: {e.message}", file=sys.stderr)
        return e.exit_code

    if isinstance(result, VerifyReport) and not result.passed:
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
