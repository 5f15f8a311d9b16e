"""Command-line interface.

Each invocation prints exactly one JSON report object to stdout and
human-readable log lines to stderr, so certificate pipelines can consume
stdout directly. Exit codes: 0 success (and a passing verdict), 1 usage
error, 2 certificate failure, 3 input/validation error, 4 numerical
breakdown.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from . import fileio
from .backend import active_backend
from .channels import (
    CqChannel,
    MultipartiteChannel,
    derive_channel,
    random_channel,
    slice_channel,
    tensor_channel,
)
from .errors import (
    AxisOutOfRange,
    CqcapError,
    DimensionMismatch,
    InvalidEnsemble,
    LengthMismatch,
    NumericalBreakdown,
    ParseError,
    SchemaError,
    ShapeMismatch,
    StateError,
    StateValidationError,
    SupportError,
    UnknownLetter,
)
from .quantum import pure_state, validate_state
from .solver import capacity
from .superadd import (
    chain_rule_check,
    estimate_min_derived_capacity,
    verify_superadditivity,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CERT_FAIL = 2
EXIT_INPUT = 3
EXIT_NUMERICAL = 4

_INPUT_ERRORS = (
    ParseError,
    SchemaError,
    StateError,
    StateValidationError,
    DimensionMismatch,
    LengthMismatch,
    UnknownLetter,
    AxisOutOfRange,
    ShapeMismatch,
    InvalidEnsemble,
    SupportError,
    ValueError,
)

GEN_TYPES = ("orthogonal", "bsc", "purepair", "random-pure", "random-mixed")


class UsageError(CqcapError):
    """Bad flags or flag values; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="cqcap",
        description=(
            "Capacities of classical-quantum channels with certified brackets, "
            "and super-additivity certificates."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cap = sub.add_parser("capacity", help="certified capacity of a channel file")
    cap.add_argument("--channel", required=True, metavar="PATH")
    cap.add_argument("--tol", type=float, default=1e-6)
    cap.add_argument("--max-iters", type=int, default=100_000)

    der = sub.add_parser("derive", help="average one axis against a collection file")
    der.add_argument("--channel", required=True, metavar="PATH")
    der.add_argument("--axis", type=int, required=True)
    der.add_argument("--collection", required=True, metavar="PATH")
    der.add_argument("--out", required=True, metavar="PATH")

    sl = sub.add_parser("slice", help="fix one axis letter")
    sl.add_argument("--channel", required=True, metavar="PATH")
    sl.add_argument("--axis", type=int, required=True)
    sl.add_argument("--letter", required=True)
    sl.add_argument("--out", required=True, metavar="PATH")

    ver = sub.add_parser(
        "verify-superadd", help="produce a super-additivity certificate"
    )
    ver.add_argument("--channel", required=True, metavar="PATH")
    ver.add_argument("--tol", type=float, default=1e-6)
    ver.add_argument("--budget", type=int, default=32)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--max-iters", type=int, default=100_000)

    chk = sub.add_parser("chain-check", help="chain-rule identity on a ccq state file")
    chk.add_argument("--state", required=True, metavar="PATH")

    mind = sub.add_parser(
        "min-derived", help="search for low-capacity derived channels on one axis"
    )
    mind.add_argument("--channel", required=True, metavar="PATH")
    mind.add_argument("--axis", type=int, required=True)
    mind.add_argument("--budget", type=int, default=32)
    mind.add_argument("--seed", type=int, default=0)
    mind.add_argument("--tol", type=float, default=1e-6)
    mind.add_argument("--max-iters", type=int, default=100_000)

    gen = sub.add_parser("gen", help="write a built-in or random channel file")
    gen.add_argument("--type", required=True, choices=GEN_TYPES)
    gen.add_argument("--p", type=float, default=None, help="flip probability (bsc)")
    gen.add_argument(
        "--overlap", type=float, default=None, help="pure-state overlap (purepair)"
    )
    gen.add_argument("--dim", type=int, default=2, help="output dimension (random)")
    gen.add_argument(
        "--inputs",
        type=int,
        nargs="+",
        default=[2],
        help="axis sizes (random)",
    )
    gen.add_argument("--seed", type=int, default=0, help="draw seed (random)")
    gen.add_argument(
        "--tensor",
        default=None,
        metavar="PATH",
        help="tensor the generated channel with the channel in PATH",
    )
    gen.add_argument("--out", required=True, metavar="PATH")

    return parser


def _validate_args(args) -> None:
    if getattr(args, "tol", None) is not None and args.tol <= 0:
        raise UsageError("--tol must be positive")
    if getattr(args, "max_iters", None) is not None and args.max_iters < 1:
        raise UsageError("--max-iters must be at least 1")
    if getattr(args, "budget", None) is not None and args.budget < 1:
        raise UsageError("--budget must be at least 1")
    if getattr(args, "seed", None) is not None and args.seed < 0:
        raise UsageError("--seed must be a nonnegative integer")
    if getattr(args, "axis", None) is not None and args.axis < 0:
        raise UsageError("--axis must be a nonnegative integer")
    if args.command == "gen":
        if args.type == "bsc":
            if args.p is None:
                raise UsageError("--type bsc requires --p")
            if not 0.0 <= args.p <= 1.0:
                raise UsageError("--p must lie in [0, 1]")
        elif args.p is not None:
            raise UsageError("--p only applies to --type bsc")
        if args.type == "purepair":
            if args.overlap is None:
                raise UsageError("--type purepair requires --overlap")
            if not 0.0 <= args.overlap <= 1.0:
                raise UsageError("--overlap must lie in [0, 1]")
        elif args.overlap is not None:
            raise UsageError("--overlap only applies to --type purepair")
        if args.dim < 1:
            raise UsageError("--dim must be positive")
        if any(s < 1 for s in args.inputs):
            raise UsageError("--inputs sizes must be positive")


def _diagnostics(t0: float, **extra) -> dict:
    d = {"backend": active_backend, "wall_time_s": time.perf_counter() - t0}
    d.update(extra)
    return d


def _emit(report: dict) -> None:
    print(fileio.render_report(report))


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _gen_channel(args) -> MultipartiteChannel:
    if args.type == "orthogonal":
        base = CqChannel.from_arrays(
            ["0", "1"], [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
        )
        chan = MultipartiteChannel.wrap(base)
    elif args.type == "bsc":
        p = args.p
        base = CqChannel.from_states(
            ["0", "1"],
            [
                validate_state(np.diag([1.0 - p, p])),
                validate_state(np.diag([p, 1.0 - p])),
            ],
        )
        chan = MultipartiteChannel.wrap(base)
    elif args.type == "purepair":
        c = args.overlap
        second = pure_state([c, float(np.sqrt(max(0.0, 1.0 - c * c)))])
        base = CqChannel.from_states(["0", "1"], [pure_state([1.0, 0.0]), second])
        chan = MultipartiteChannel.wrap(base)
    else:
        ensemble = "pure" if args.type == "random-pure" else "mixed"
        chan = random_channel(args.dim, args.inputs, ensemble, args.seed)
    if args.tensor is not None:
        chan = tensor_channel(chan, fileio.parse_channel(args.tensor))
    return chan


def _dispatch(args, t0: float) -> tuple[dict, int]:
    command = args.command
    inputs: dict = {}
    code = EXIT_OK

    if command == "capacity":
        inputs = {
            "channel": args.channel,
            "channel_sha256": fileio.file_digest(args.channel),
            "tol": args.tol,
            "max_iters": args.max_iters,
        }
        chan = fileio.parse_channel(args.channel)
        result = capacity(chan.base, args.tol, args.max_iters)
        results = fileio.capacity_to_obj(result)
        diag = _diagnostics(t0, iterations=result.iterations, converged=result.converged)
        _log(
            f"capacity {result.value:.9f} bits, gap {result.gap:.3e}, "
            f"{result.iterations} iterations"
        )

    elif command == "derive":
        inputs = {
            "channel": args.channel,
            "channel_sha256": fileio.file_digest(args.channel),
            "collection": args.collection,
            "collection_sha256": fileio.file_digest(args.collection),
            "axis": args.axis,
            "out": args.out,
        }
        chan = fileio.parse_channel(args.channel)
        coll = fileio.parse_collection(args.collection)
        if coll.axis != args.axis:
            raise SchemaError(
                f"collection is for axis {coll.axis}, --axis says {args.axis}"
            )
        derived = derive_channel(chan, coll)
        fileio.emit_channel(MultipartiteChannel.wrap(derived), args.out)
        results = {
            "dim": derived.dim,
            "alphabet": list(derived.alphabet),
            "out_sha256": fileio.file_digest(args.out),
        }
        diag = _diagnostics(t0)
        _log(f"derived channel on {len(derived.alphabet)} letters -> {args.out}")

    elif command == "slice":
        inputs = {
            "channel": args.channel,
            "channel_sha256": fileio.file_digest(args.channel),
            "axis": args.axis,
            "letter": args.letter,
            "out": args.out,
        }
        chan = fileio.parse_channel(args.channel)
        sliced = slice_channel(chan, args.axis, args.letter)
        if isinstance(sliced, CqChannel):
            sliced = MultipartiteChannel.wrap(sliced)
        fileio.emit_channel(sliced, args.out)
        results = {
            "dim": sliced.dim,
            "axes": [list(a) for a in sliced.axes],
            "out_sha256": fileio.file_digest(args.out),
        }
        diag = _diagnostics(t0)
        _log(f"sliced channel (arity {sliced.k}) -> {args.out}")

    elif command == "verify-superadd":
        inputs = {
            "channel": args.channel,
            "channel_sha256": fileio.file_digest(args.channel),
            "tol": args.tol,
            "budget": args.budget,
            "seed": args.seed,
            "max_iters": args.max_iters,
        }
        chan = fileio.parse_channel(args.channel)
        cert = verify_superadditivity(
            chan, args.tol, args.budget, args.seed, args.max_iters
        )
        results = fileio.certificate_to_obj(cert)
        diag = _diagnostics(t0, converged=cert.base_result.converged)
        if cert.passed:
            _log(
                f"verdict pass: chain residual {cert.chain_residual:.3e}, "
                f"feasibility slack {cert.feasibility_slack:.3e}"
            )
        else:
            _log("verdict fail: " + "; ".join(cert.reasons))
            code = EXIT_CERT_FAIL
        for flag in cert.flags:
            _log(f"flag: {flag}")

    elif command == "chain-check":
        inputs = {
            "state": args.state,
            "state_sha256": fileio.file_digest(args.state),
        }
        ccq = fileio.parse_ccq_state(args.state)
        res = chain_rule_check(ccq)
        results = {
            "lhs": res.lhs,
            "rhs": res.rhs,
            "residual": res.residual,
            "marginal_term": res.marginal_term,
            "conditional_term": res.conditional_term,
        }
        diag = _diagnostics(t0)
        _log(f"chain rule residual {res.residual:.3e}")

    elif command == "min-derived":
        inputs = {
            "channel": args.channel,
            "channel_sha256": fileio.file_digest(args.channel),
            "axis": args.axis,
            "budget": args.budget,
            "seed": args.seed,
            "tol": args.tol,
            "max_iters": args.max_iters,
        }
        chan = fileio.parse_channel(args.channel)
        est = estimate_min_derived_capacity(
            chan, args.axis, args.budget, args.seed, args.tol, args.max_iters
        )
        results = {
            "estimate": est.estimate,
            "witness": fileio.collection_to_obj(est.witness),
        }
        diag = _diagnostics(t0, solves=est.solves)
        _log(f"minimum-derived estimate {est.estimate:.9f} bits ({est.solves} solves)")

    elif command == "gen":
        inputs = {
            "type": args.type,
            "p": args.p,
            "overlap": args.overlap,
            "dim": args.dim,
            "inputs": list(args.inputs),
            "seed": args.seed,
            "tensor": args.tensor,
            "out": args.out,
        }
        if args.tensor is not None:
            inputs["tensor_sha256"] = fileio.file_digest(args.tensor)
        chan = _gen_channel(args)
        fileio.emit_channel(chan, args.out)
        results = {
            "dim": chan.dim,
            "axes": [list(a) for a in chan.axes],
            "out_sha256": fileio.file_digest(args.out),
        }
        diag = _diagnostics(t0)
        _log(f"wrote {args.type} channel (arity {chan.k}, dim {chan.dim}) -> {args.out}")

    else:  # pragma: no cover - argparse enforces the choices
        raise UsageError(f"unknown command {command!r}")

    return fileio.build_report(command, inputs, results, diag), code


def _error_report(command: str, exc: Exception, code: int, t0: float) -> int:
    report = fileio.build_report(
        command,
        {},
        {"error": {"type": type(exc).__name__, "message": str(exc)}},
        _diagnostics(t0, exit_code=code),
    )
    _emit(report)
    _log(f"error: {exc}")
    return code


def run_cli(argv=None) -> int:
    t0 = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return _error_report("usage", exc, EXIT_USAGE, t0)
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        _validate_args(args)
        report, code = _dispatch(args, t0)
    except UsageError as exc:
        return _error_report(args.command, exc, EXIT_USAGE, t0)
    except NumericalBreakdown as exc:
        return _error_report(args.command, exc, EXIT_NUMERICAL, t0)
    except _INPUT_ERRORS as exc:
        return _error_report(args.command, exc, EXIT_INPUT, t0)
    _emit(report)
    return code


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
