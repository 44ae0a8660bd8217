"""Command-line interface.

Exit codes: 0 success, 2 bad input, 3 unsupported regime, 4 search failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import cantor, dynamics, paramlab, shiftspace
from .numeric import format_rational, parse_rational
from .rigorous import decimal_floor
from .symbols import SymbolSeq

EXIT_OK, EXIT_INPUT, EXIT_REGIME, EXIT_SEARCH = 0, 2, 3, 4

SWEEP_COLUMNS = [
    "index",
    "beta",
    "ell",
    "tau_rigorous",
    "tau_paper_formula",
    "newhouse_lower",
    "cond_lower_s",
    "cond_upper_s",
    "cond_r_inside",
    "witness_status",
]


class InputError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _seq(text: str) -> SymbolSeq:
    try:
        return SymbolSeq.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def cmd_expand(args, out) -> int:
    p = dynamics.Params(args.alpha, args.beta)
    digits = dynamics.itinerary(p, args.x, args.n).prefix(args.n)
    print(",".join(map(str, digits)), file=out)
    for k in range(1, args.n + 1):
        s = dynamics.expansion_partial_sum(p, digits[:k])
        print(f"S_{k} = {format_rational(s)}", file=out)
    rem = Fraction(args.x) - dynamics.expansion_partial_sum(p, digits)
    bound = p.beta ** -args.n
    print(
        f"remainder x - S_{args.n} = {format_rational(rem)} < beta^-{args.n} = {format_rational(bound)}: "
        f"{0 <= rem < bound}",
        file=out,
    )
    return EXIT_OK


def cmd_spec_check(args, out) -> int:
    p = dynamics.Params(args.alpha, args.beta)
    try:
        verdict = shiftspace.spec_check(p, args.depth, u=args.u, v=args.v)
    except shiftspace.UnsupportedRegime as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_REGIME
    print(str(verdict), file=out)
    payload = {"k_u": verdict.k_u.to_dict(), "k_v": verdict.k_v.to_dict()}
    text = json.dumps(payload, sort_keys=True)
    if args.report:
        _atomic_write(args.report, text + "\n")
    else:
        print(text, file=out)
    return EXIT_OK


def cmd_witness(args, out) -> int:
    try:
        if args.alpha is not None:
            report = paramlab.verify_witness(args.alpha, args.beta, args.omega_r, args.omega_s, args.depth)
        else:
            report = paramlab.find_witness(args.beta, args.depth)
    except paramlab.NoWitness as exc:
        print(f"no witness: {exc}", file=sys.stderr)
        print(json.dumps(exc.diagnostics, sort_keys=True, default=str), file=sys.stderr)
        return EXIT_SEARCH
    text = json.dumps(report.to_dict(), sort_keys=True, indent=1)
    if args.output:
        _atomic_write(args.output, text + "\n")
    else:
        print(text, file=out)
    kind = "exact alpha" if report.exact else f"{len(report.alpha)} nested enclosures"
    print(f"{kind}; certified={report.certified}", file=sys.stderr if not args.output else out)
    return EXIT_OK


def cmd_dim_bound(args, out) -> int:
    if args.ell < 3:
        raise InputError("ell must be at least 3")
    fiber = paramlab.dim_fiber_bound(args.ell)
    print(f"fiber   >= {decimal_floor(fiber, 30)}", file=out)
    print(f"product >= {decimal_floor(fiber + 1, 30)}", file=out)
    return EXIT_OK


@dataclass(frozen=True)
class SweepConfig:
    ell: int
    start: Fraction
    end: Fraction
    steps: int
    depth: int
    output_path: str
    format: str = "csv"
    level: int = 2

    def __post_init__(self):
        if self.steps < 1:
            raise InputError("steps must be at least 1")
        if not self.ell - 1 <= self.start < self.end <= self.ell + 1:
            raise InputError("need ell-1 <= start < end <= ell+1")
        if self.format not in ("csv", "json"):
            raise InputError(f"unknown format {self.format!r}")

    def grid(self) -> list[Fraction]:
        h = (self.end - self.start) / self.steps
        return [self.start + k * h for k in range(self.steps)]


def sweep_row(cfg: SweepConfig, index: int, beta: Fraction) -> dict:
    ell = cfg.ell
    row = dict.fromkeys(SWEEP_COLUMNS, "")
    row.update(index=index, beta=format_rational(beta), ell=ell)
    if not ell - 1 < beta < ell + 1 or ell < 3:
        row["witness_status"] = "outside_window"
        return row
    spec = cantor.IfsSpec.laboratory(beta, ell)
    tau = cantor.thickness(cantor.lambda_approx(spec, cfg.level)).tau
    row["tau_rigorous"] = format_rational(tau)
    row["tau_paper_formula"] = format_rational(cantor.paper_thickness_formula(beta, ell))
    row["newhouse_lower"] = decimal_floor(cantor.newhouse_bound(tau), 30)
    if beta <= ell:
        conds = paramlab.epsilon_conditions(beta, ell)
        row["cond_lower_s"], row["cond_upper_s"], row["cond_r_inside"] = map(str, conds)
        if beta == ell:
            row["witness_status"] = "endpoint_excluded"
        elif not conds.all():
            row["witness_status"] = "conditions_fail"
        else:
            try:
                rep = paramlab.find_witness(beta, cfg.depth, ell)
                row["witness_status"] = "exact" if rep.exact else "enclosure"
            except paramlab.NoWitness:
                row["witness_status"] = "none"
    else:
        row["witness_status"] = "above_ell"
    return row


def _sweep_chunk(job):
    cfg, items = job
    return [sweep_row(cfg, i, b) for i, b in items]


def run_sweep(cfg: SweepConfig, workers: int = 1) -> list[dict]:
    items = list(enumerate(cfg.grid()))
    if workers <= 1:
        return _sweep_chunk((cfg, items))
    size = max(1, math.ceil(len(items) / (4 * workers)))
    jobs = [(cfg, items[i : i + size]) for i in range(0, len(items), size)]
    rows = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for chunk in pool.map(_sweep_chunk, jobs):
            rows.extend(chunk)
    rows.sort(key=lambda r: r["index"])
    return rows


def render_sweep(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, sort_keys=True, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".abshift-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def cmd_sweep(args, out) -> int:
    cfg = SweepConfig(args.ell, args.start, args.end, args.steps, args.depth, args.output, args.format)
    # rows are rendered in memory and written atomically: a failed sweep
    # never leaves a partial file behind
    text = render_sweep(run_sweep(cfg, args.workers), cfg.format)
    if cfg.output_path:
        _atomic_write(cfg.output_path, text)
    else:
        out.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abshift", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="digits and partial sums of the expansion of x")
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--beta", type=_rational, required=True)
    p.add_argument("--x", type=_rational, required=True)
    p.add_argument("--n", type=int, default=20)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("spec-check", help="specification verdict from the K-sets")
    p.add_argument("--alpha", type=_rational, required=True)
    p.add_argument("--beta", type=_rational, required=True)
    p.add_argument("--depth", type=int, default=100)
    p.add_argument("--u", type=_seq, help="override the coding of 0")
    p.add_argument("--v", type=_seq, help="override the coding of 1^-")
    p.add_argument("--report", help="write the K-set reports (JSON) here")
    p.set_defaults(func=cmd_spec_check)

    p = sub.add_parser("witness", help="search (or verify) a specification witness")
    p.add_argument("--beta", type=_rational, required=True)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--alpha", type=_rational, help="verify this alpha instead of searching")
    p.add_argument("--omega-r", type=_seq)
    p.add_argument("--omega-s", type=_seq)
    p.add_argument("--output", help="WitnessReport JSON path")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("sweep", help="tabulate a beta grid in one stratum")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--start", type=_rational, required=True)
    p.add_argument("--end", type=_rational, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("dim-bound", help="dimension lower bounds for a stratum")
    p.add_argument("--ell", type=int, required=True)
    p.set_defaults(func=cmd_dim_bound)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except (InputError, ValueError, dynamics.ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
