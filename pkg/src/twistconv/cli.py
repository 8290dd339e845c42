"""Command-line front end.

Exit codes: 0 success, 1 verification residual above tolerance,
2 not invertible / not a frame, 3 truncation did not converge,
4 malformed or unsupported input.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import jsonio
from .convinv import InversionConfig
from .errors import NotAFrame, NotInvertible, TruncationNotConverged
from .finite import finite_delta, finite_twisted_convolve, invert_block_circulant
from .gabor import dual_window, frame_operator_dense
from .inversion import invert_twisted, verify_inverse
from .sequences import TwistParams

EXIT_OK = 0
EXIT_RESIDUAL = 1
EXIT_NOT_INVERTIBLE = 2
EXIT_NOT_CONVERGED = 3
EXIT_BAD_INPUT = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_BAD_INPUT, f"{self.prog}: error: {message}\n")


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(args, obj):
    text = jsonio.dumps(obj) + "\n"
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)


def _inversion_config(args) -> InversionConfig:
    return InversionConfig(
        grid_size=args.fft_size,
        symbol_floor=args.symbol_floor,
        tail_tol=args.tail_tol,
        residual_tol=args.tol,
        max_refine=args.max_refine,
    )


def _twist(args, dim) -> TwistParams:
    if args.p is None or args.q is None:
        raise jsonio.FormatError("--p and --q are required")
    return TwistParams(args.p, args.q, dim)


def _load_sequence(path):
    obj = jsonio.load(_read(path))
    if isinstance(obj, dict) and "inverse" in obj and "entries" not in obj:
        obj = obj["inverse"]  # accept a full inversion report
    return jsonio.sequence_from_json(obj)


def cmd_invert(args):
    a = _load_sequence(args.input)
    report = invert_twisted(a, _twist(args, a.dim), _inversion_config(args))
    _write(args, jsonio.report_to_json(report))
    return EXIT_OK


def cmd_finite_invert(args):
    g, q = jsonio.grid_from_json(jsonio.load(_read(args.input)))
    q = args.q if args.q is not None else q
    if q is None:
        raise jsonio.FormatError("q missing from input and flags")
    h = invert_block_circulant(g, q, args.singular_tol)
    p = g.shape[0]
    delta = finite_delta(p)
    residual = max(
        float(np.abs(finite_twisted_convolve(g, h, q) - delta).max()),
        float(np.abs(finite_twisted_convolve(h, g, q) - delta).max()),
    )
    out = jsonio.grid_to_json(h, q)
    out["residual"] = residual
    _write(args, out)
    return EXIT_OK if residual <= args.tol else EXIT_NOT_CONVERGED


def cmd_dual_window(args):
    cfg = jsonio.gabor_from_json(jsonio.load(_read(args.input)))
    gamma, report = dual_window(cfg, _inversion_config(args))
    S = frame_operator_dense(cfg)
    _write(args, {
        "gamma": jsonio.vector_to_json(gamma),
        "frame_residual": float(np.linalg.norm(S @ gamma - cfg.window)),
        "report": jsonio.report_to_json(report),
    })
    return EXIT_OK


def cmd_verify(args):
    a = _load_sequence(args.input)
    b = _load_sequence(args.inverse)
    if a.dim != b.dim:
        raise jsonio.FormatError(f"dimension mismatch: {a.dim} vs {b.dim}")
    right, left = verify_inverse(a, b, _twist(args, a.dim))
    _write(args, {"residual_right": right, "residual_left": left})
    return EXIT_OK if max(right, left) <= args.tol else EXIT_RESIDUAL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", required=True, help="input JSON path, '-' for stdin")
    common.add_argument("--output", default=None, help="output path (default stdout)")
    common.add_argument("--p", type=int, default=None)
    common.add_argument("--q", type=int, default=None)
    common.add_argument("--tol", type=float, default=1e-8, help="residual tolerance")

    numeric = argparse.ArgumentParser(add_help=False)
    numeric.add_argument("--fft-size", type=int, default=None,
                         help="initial FFT grid per axis (default 256 for d=1, 32 for d=2)")
    numeric.add_argument("--symbol-floor", type=float, default=1e-8)
    numeric.add_argument("--tail-tol", type=float, default=1e-12)
    numeric.add_argument("--max-refine", type=int, default=4)

    parser = _Parser(prog="twistconv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("invert", parents=[common, numeric],
                       help="invert a sequence under twisted convolution")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("finite-invert", parents=[common],
                       help="invert a p x p grid under finite twisted convolution")
    p.add_argument("--singular-tol", type=float, default=1e-10,
                   help="relative singular-value threshold for DFT blocks")
    p.set_defaults(func=cmd_finite_invert)

    p = sub.add_parser("dual-window", parents=[common, numeric],
                       help="canonical dual Gabor window on Z_L")
    p.set_defaults(func=cmd_dual_window)

    p = sub.add_parser("verify", parents=[common],
                       help="residuals of a candidate twisted inverse")
    p.add_argument("--inverse", required=True,
                   help="candidate inverse: sequence JSON or an invert report")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (NotInvertible, NotAFrame) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NOT_INVERTIBLE
    except TruncationNotConverged as exc:
        print(f"error: TruncationNotConverged: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    except (ValueError, OSError) as exc:  # FormatError is a ValueError
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
