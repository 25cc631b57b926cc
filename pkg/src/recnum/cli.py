"""Command-line entry point.

One subcommand per library operation; JSON output by default, CSV where the
result is tabular. Exit codes: 0 success, 2 certification failure (a block
bound misses its target, or validation fails under --strict), 1 usage or
internal error. All floating-point output is limited to 10 significant
digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict
from fractions import Fraction

from . import base, blockcert, bounds, experiments, expsum
from .base import BaseContext, PreconditionError
from .digits import expand, sum_of_digits

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CERT_FAIL = 2


def _round_floats(obj):
    """Round every float to 10 significant digits, recursively."""
    if isinstance(obj, float):
        return float(f"{obj:.10g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _emit(args, payload: dict | str) -> None:
    if isinstance(payload, dict):
        text = json.dumps(_round_floats(payload), indent=2, sort_keys=True) + "\n"
    else:
        text = payload
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _context_from_args(args) -> BaseContext:
    if args.config:
        with open(args.config) as fh:
            spec = base.parse_config(fh.read())
        return BaseContext(spec)
    if not args.coeffs:
        raise PreconditionError("provide --coeffs or --config")
    coeffs = tuple(int(c) for c in args.coeffs.split(","))
    initials = (
        tuple(int(g) for g in args.initials.split(",")) if args.initials else None
    )
    return base.make_context(coeffs, initials)


def _parse_rows(text: str) -> list[int]:
    rows: list[int] = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..")
            rows.extend(range(int(lo), int(hi) + 1))
        else:
            rows.append(int(part))
    return rows


def _grid_from_args(args, a: int | None = None) -> blockcert.GridParams:
    if args.eps is not None and args.eta is not None:
        return blockcert.GridParams(eps=args.eps, eta=args.eta, delta=args.delta)
    if a is not None and a in blockcert.REFERENCE_ROWS:
        return blockcert.reference_grid(a, delta=args.delta)
    raise PreconditionError("provide --eps and --eta (no reference grid for this a)")


def cmd_validate(args) -> int:
    if args.config:
        with open(args.config) as fh:
            spec = base.parse_config(fh.read())
    else:
        coeffs = tuple(int(c) for c in args.coeffs.split(","))
        initials = (
            tuple(int(g) for g in args.initials.split(","))
            if args.initials
            else base.strengthened_initials(coeffs)
        )
        spec = base.RecurrenceSpec(coeffs, initials)
    report = base.validate_spec(spec)
    payload = {
        "coeffs": list(spec.coeffs),
        "initials": list(spec.initials),
        "ok": report.ok,
        "violations": list(report.violations),
    }
    if report.ok:
        payload["alpha"] = base.dominant_root(spec)
    _emit(args, payload)
    if not report.ok and args.strict:
        return EXIT_CERT_FAIL
    return EXIT_OK


def cmd_expand(args) -> int:
    ctx = _context_from_args(args)
    e = expand(ctx, args.n)
    _emit(args, {"n": args.n, "digits": list(e.digits), "sum": sum(e.digits)})
    return EXIT_OK


def cmd_sumdigits(args) -> int:
    ctx = _context_from_args(args)
    _emit(args, {"n": args.n, "sum": sum_of_digits(ctx, args.n)})
    return EXIT_OK


def cmd_expsum(args) -> int:
    ctx = _context_from_args(args)
    params = expsum.ExpSumParams.make(
        expsum.parse_rational(args.y), expsum.parse_rational(args.beta)
    )
    if args.method == "direct":
        value = expsum.exp_sum_direct(ctx, args.n, params)
    else:
        value = expsum.exp_sum_recurrent(ctx, args.n, params).values[args.n]
    _emit(
        args,
        {
            "n": args.n,
            "y": str(Fraction(args.y)),
            "beta": str(Fraction(args.beta)),
            "method": args.method,
            "real": value.real,
            "imag": value.imag,
            "abs": abs(value),
        },
    )
    return EXIT_OK


def cmd_onenorm(args) -> int:
    ctx = _context_from_args(args)
    est = expsum.one_norm(ctx, args.n, args.beta)
    _emit(args, {"n": args.n, "beta": args.beta, "value": est.value,
                 "nodes": est.nodes})
    return EXIT_OK


def cmd_gallagher(args) -> int:
    ctx = _context_from_args(args)
    rep = expsum.gallagher_check(ctx, args.n, args.beta, args.qmax)
    _emit(args, {"n": args.n, "beta": args.beta, "qmax": args.qmax, **asdict(rep)})
    return EXIT_OK


def cmd_mbound(args) -> int:
    ctx = _context_from_args(args)
    rep = bounds.compute_mbound_report(ctx, shift_r=args.shift_r)
    _emit(args, rep.to_dict())
    return EXIT_OK


def cmd_theta(args) -> int:
    ctx = _context_from_args(args)
    rep = bounds.theta_lower_bound(
        ctx,
        use_shifted=args.shift_r is not None,
        shift_r=args.shift_r or 2,
        block_kappa=args.block_kappa,
        block_width=args.block_width,
    )
    _emit(args, {"theta": rep.theta, "eta": rep.eta, "winner": rep.winner,
                 "candidates": rep.candidates})
    return EXIT_OK


def cmd_blockbound(args) -> int:
    grid = _grid_from_args(args, args.a)
    rep = blockcert.certify_block_bound(args.a, grid, threads=args.threads)
    _emit(
        args,
        {
            "a": rep.a,
            "eps": rep.grid.eps,
            "eta": rep.grid.eta,
            "delta": rep.grid.delta,
            "M2_2": rep.M2_2,
            "M2_3": rep.M2_3,
            "M2": rep.M2,
            "kappa": rep.kappa,
            "kappa_target": blockcert.KAPPA_TARGET,
            "pass": rep.ok,
            "main_nodes": rep.main_nodes,
        },
    )
    return EXIT_OK if rep.ok else EXIT_CERT_FAIL


def cmd_table1(args) -> int:
    rows = _parse_rows(args.rows) if args.rows else None
    grids = None
    if args.eps is not None and args.eta is not None:
        grid = blockcert.GridParams(eps=args.eps, eta=args.eta, delta=args.delta)
        grids = {a: grid for a in rows or blockcert.REFERENCE_ROWS}
    results = blockcert.reproduce_table1(rows=rows, grids=grids, threads=args.threads)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ["a", "eps", "eta", "M2", "kappa", "alpha3", "pass", "ref_M2", "ref_kappa"]
    )
    for row in results:
        writer.writerow(
            [
                row.a,
                f"{row.grid.eps:.10g}",
                f"{row.grid.eta:.10g}",
                f"{row.M2:.10g}",
                f"{row.kappa:.10g}",
                row.alpha3,
                int(row.ok),
                f"{row.ref_M2:.10g}",
                f"{row.ref_kappa:.10g}",
            ]
        )
    _emit(args, buf.getvalue())
    return EXIT_OK if all(r.ok for r in results) else EXIT_CERT_FAIL


def cmd_discrepancy(args) -> int:
    ctx = _context_from_args(args)
    rep = experiments.bv_discrepancy(
        ctx, args.x, args.r, args.s, exponent=args.theta - args.eps, A=args.A
    )
    _emit(args, rep.to_dict())
    return EXIT_OK


def cmd_almostprimes(args) -> int:
    ctx = _context_from_args(args)
    sieve = experiments.sieve_spf(args.x)
    count = experiments.almost_prime_count(ctx, args.x, args.r, args.s, sieve)
    import math as _m

    _emit(
        args,
        {
            "x": args.x,
            "r": args.r,
            "s": args.s,
            "count": count,
            "x_over_log_x": args.x / _m.log(args.x),
            "ratio": count / (args.x / _m.log(args.x)),
        },
    )
    return EXIT_OK


def cmd_vmsum(args) -> int:
    ctx = _context_from_args(args)
    sieve = experiments.sieve_spf(args.x)
    rep = experiments.von_mangoldt_sum(ctx, args.x, args.ell, args.r, args.s, sieve)
    _emit(args, rep.to_dict())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--coeffs", help="comma-separated a_1,...,a_d")
    common.add_argument("--initials", help="comma-separated G_0,...,G_{d-1}")
    common.add_argument("--config", help="key=value config file defining the base")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--strict", action="store_true")

    p = argparse.ArgumentParser(prog="recnum", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", parents=[common])
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("expand", parents=[common])
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_expand)

    sp = sub.add_parser("sumdigits", parents=[common])
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_sumdigits)

    sp = sub.add_parser("expsum", parents=[common])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--y", required=True, help="frequency on k, as H/Q")
    sp.add_argument("--beta", required=True, help="frequency on s_G, as R/S")
    sp.add_argument("--method", choices=["direct", "recurrent"], default="recurrent")
    sp.set_defaults(func=cmd_expsum)

    sp = sub.add_parser("onenorm", parents=[common])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.set_defaults(func=cmd_onenorm)

    sp = sub.add_parser("gallagher", parents=[common])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--qmax", type=int, required=True)
    sp.set_defaults(func=cmd_gallagher)

    sp = sub.add_parser("mbound", parents=[common])
    sp.add_argument("--shift-r", type=int, default=None)
    sp.set_defaults(func=cmd_mbound)

    sp = sub.add_parser("theta", parents=[common])
    sp.add_argument("--shift-r", type=int, default=None)
    sp.add_argument("--block-kappa", type=float, default=None)
    sp.add_argument("--block-width", type=int, default=2)
    sp.set_defaults(func=cmd_theta)

    sp = sub.add_parser("blockbound", parents=[common])
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--eps", type=float, default=None)
    sp.add_argument("--eta", type=float, default=None)
    sp.add_argument("--delta", type=float, default=1e-10)
    sp.set_defaults(func=cmd_blockbound)

    sp = sub.add_parser("table1", parents=[common])
    sp.add_argument("--rows", help="e.g. 15..39 or 39 or 15,20,39")
    sp.add_argument("--eps", type=float, default=None)
    sp.add_argument("--eta", type=float, default=None)
    sp.add_argument("--delta", type=float, default=1e-10)
    sp.set_defaults(func=cmd_table1)

    sp = sub.add_parser("discrepancy", parents=[common])
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--theta", type=float, required=True)
    sp.add_argument("--eps", type=float, default=0.0)
    sp.add_argument("--A", type=float, default=1.0)
    sp.set_defaults(func=cmd_discrepancy)

    sp = sub.add_parser("almostprimes", parents=[common])
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.set_defaults(func=cmd_almostprimes)

    sp = sub.add_parser("vmsum", parents=[common])
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.set_defaults(func=cmd_vmsum)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (PreconditionError, base.CostGuardError, base.IntegerWidthError,
            OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
