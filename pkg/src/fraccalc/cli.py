"""Command-line interface.

Subcommands:

* ``eval``     one operator application, closed form and/or oracle
* ``verify``   run a verification suite, emit text/json/csv, exit 0 iff clean
* ``table``    closed-vs-oracle CSV sweep over alpha and t ranges
* ``compare``  corrected vs literature Weyl derivative with oracle verdicts

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 domain
error, 4 convergence error.  Numbers on the command line are plain decimal
literals; ranges are ``start:stop:step`` with both ends included (stop
within ``step * 1e-9``).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import fields, replace

from .closed_forms import closed_eval, weyl_power_literature
from .errors import ConvergenceError, DomainError
from .model import EvalResult, FunctionFamily, OperatorKind, family_param, parse_family
from .oracle import DEFAULT_CONFIG, QuadConfig, oracle_eval
from .verify import SUITE_NAMES, emit_report, falsification_margin, run_suite

_OP_TOKENS = tuple(kind.value for kind in OperatorKind)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _family_arg(text: str) -> FunctionFamily:
    try:
        return parse_family(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _range_arg(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"range {text!r} is not start:stop:step")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"range {text!r} has a non-numeric part") from exc
    if step <= 0.0:
        raise argparse.ArgumentTypeError(f"range step must be > 0, got {step!r}")
    if stop < start:
        raise argparse.ArgumentTypeError(f"range {text!r} is empty (stop < start)")
    values = []
    eps = step * 1e-9
    i = 0
    while True:
        v = start + i * step
        if v > stop + eps:
            break
        values.append(v)
        i += 1
    return values


def _load_config(path: str | None) -> QuadConfig:
    """QuadConfig from a plain 'key = value' file layered over the defaults."""
    if path is None:
        return DEFAULT_CONFIG
    valid = {f.name: f.type for f in fields(QuadConfig)}
    overrides: dict[str, float | int] = {}
    try:
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                text = line.split("#", 1)[0].strip()
                if not text:
                    continue
                key, sep, raw = (part.strip() for part in text.partition("="))
                if not sep or not key or not raw:
                    raise ValueError(f"line {lineno}: expected 'key = value', got {line.rstrip()!r}")
                if key not in valid:
                    raise ValueError(f"line {lineno}: unknown config key {key!r}")
                overrides[key] = int(raw) if key in ("max_nodes", "richardson_levels") else float(raw)
    except OSError as exc:
        raise ValueError(f"cannot read config {path!r}: {exc}") from exc
    return replace(DEFAULT_CONFIG, **overrides)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fraccalc",
        description="Fractional integrals/derivatives: closed forms, quadrature oracles, verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one operator application")
    p_eval.add_argument("--op", required=True, choices=_OP_TOKENS)
    p_eval.add_argument("--alpha", required=True, type=float)
    p_eval.add_argument(
        "--fn",
        required=True,
        type=_family_arg,
        metavar="FAMILY",
        help="power:gamma=G | exp:lambda=L | powerlog:nu=N | abspower:delta=D",
    )
    p_eval.add_argument("--t", required=True, type=float)
    p_eval.add_argument("--method", choices=("closed", "oracle", "both"), default="closed")
    p_eval.add_argument("--config", metavar="PATH")

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("--suite", required=True, choices=SUITE_NAMES)
    p_verify.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p_verify.add_argument("--out", metavar="PATH")
    p_verify.add_argument("--tol", type=float, help="override the relative tolerance of every check")
    p_verify.add_argument("--config", metavar="PATH")

    p_table = sub.add_parser("table", help="closed-vs-oracle sweep as CSV")
    p_table.add_argument("--op", required=True, choices=_OP_TOKENS)
    p_table.add_argument("--fn", required=True, type=_family_arg, metavar="FAMILY")
    p_table.add_argument("--alpha-range", required=True, type=_range_arg, metavar="a:b:s")
    p_table.add_argument("--t-range", required=True, type=_range_arg, metavar="a:b:s")
    p_table.add_argument("--out", required=True, metavar="PATH")

    p_cmp = sub.add_parser("compare", help="corrected vs literature Weyl derivative")
    p_cmp.add_argument("--delta", required=True, type=float)
    p_cmp.add_argument("--alpha", required=True, type=float)
    p_cmp.add_argument("--t-range", required=True, type=_range_arg, metavar="a:b:s")
    p_cmp.add_argument("--out", required=True, metavar="PATH")

    return parser


def _cmd_eval(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    kind = OperatorKind(args.op)
    results: list[EvalResult] = []
    if args.method in ("closed", "both"):
        results.append(closed_eval(kind, args.alpha, args.fn, args.t))
    if args.method in ("oracle", "both"):
        results.append(oracle_eval(kind, args.alpha, args.fn, args.t, cfg))
    for r in results:
        print(f"{_fmt(r.value)}\t{_fmt(r.abs_err_estimate)}\t{r.method}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    cfg = _load_config(args.config)
    report = run_suite(args.suite, cfg, tol_override=args.tol)
    payload = emit_report(report, args.format)
    if args.out:
        with open(args.out, "wb") as handle:
            handle.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.flush()
    return 0 if report.n_fail == 0 else 1


def _cmd_table(args: argparse.Namespace) -> int:
    kind = OperatorKind(args.op)
    param = family_param(args.fn)
    lines = ["alpha,t,param,value_closed,value_oracle,abs_diff"]
    for alpha in args.alpha_range:
        for t in args.t_range:
            closed = closed_eval(kind, alpha, args.fn, t)
            oracle = oracle_eval(kind, alpha, args.fn, t)
            lines.append(
                ",".join(
                    (
                        _fmt(alpha),
                        _fmt(t),
                        _fmt(param),
                        _fmt(closed.value),
                        _fmt(oracle.value),
                        _fmt(abs(closed.value - oracle.value)),
                    )
                )
            )
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    lines = ["delta,alpha,t,corrected,literature,oracle,oracle_err,verdict"]
    for t in args.t_range:
        margin = falsification_margin(args.delta, args.alpha, t)
        lines.append(
            ",".join(
                (
                    _fmt(margin.delta),
                    _fmt(margin.alpha),
                    _fmt(margin.t),
                    _fmt(margin.corrected),
                    _fmt(margin.literature),
                    _fmt(margin.oracle),
                    _fmt(margin.oracle_err),
                    margin.verdict,
                )
            )
        )
    with open(args.out, "w", encoding="utf-8") as handle:
        handle.write("\n".join(lines) + "\n")
    return 0


_COMMANDS = {
    "eval": _cmd_eval,
    "verify": _cmd_verify,
    "table": _cmd_table,
    "compare": _cmd_compare,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValueError as exc:
        if isinstance(exc, DomainError):
            print(f"fraccalc: domain error: {exc}", file=sys.stderr)
            return 3
        print(f"fraccalc: error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"fraccalc: convergence error: {exc}", file=sys.stderr)
        return 4
    except OverflowError as exc:
        print(f"fraccalc: domain error: overflow: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
