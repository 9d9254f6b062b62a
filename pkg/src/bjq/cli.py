"""Batch command-line front end.

Subcommands: quantize, dequantize, diff, dilemma, wigner, bjwigner,
expect.  Exit codes are a stable contract: 0 success, 2 expression or
command-line parse error, 3 semantic error, 4 I/O error, 5 malformed
input data.  Numeric output is fixed at 9 significant digits so repeated
runs are byte-identical.

File formats:

* wavefunction CSV: header ``x,re,im``, one row per sample, uniform
  spacing (validated to 1e-9 relative);
* phase-grid CSV: header ``x,p,value``, row-major with x outer.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from contextlib import contextmanager
from fractions import Fraction

import numpy as np

from . import phasespace
from .exactalg import NormalOp
from .obslang import ObsParseError, ObsSemanticError, parse_classical, parse_operator, print_canonical
from .oracles import MatrixRep, interior_block, matrix_eval
from .phasespace import GridError, WaveGrid, bj_wigner, expect, marginals, wigner
from .quantizers import QuantRule, builtin, dequantize_weyl, op_bj, op_weyl, rule_diff

__all__ = ["main", "entry", "CsvFormatError", "SCHEMA"]

SCHEMA = "bjq.v1"

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SEMANTIC = 3
EXIT_IO = 4
EXIT_FORMAT = 5


class CsvFormatError(ValueError):
    """Malformed wavefunction/phase-grid CSV."""


def _fmt(value: float) -> str:
    return format(float(value), ".9g")


def _default_hbar() -> str:
    return os.environ.get("BJQ_HBAR", "1.0")


# ---------------------------------------------------------------------------
# CSV I/O
# ---------------------------------------------------------------------------


@contextmanager
def _open_input(path: str):
    if path == "-":
        yield sys.stdin
    else:
        with open(path, "r", newline="") as fh:
            yield fh


@contextmanager
def _open_output(path: str | None):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def read_wavefunction_csv(path: str, hbar: float) -> WaveGrid:
    with _open_input(path) as fh:
        rows = list(csv.reader(fh))
    rows = [row for row in rows if row and any(cell.strip() for cell in row)]
    if not rows:
        raise CsvFormatError("no samples")
    header = [cell.strip() for cell in rows[0]]
    if header != ["x", "re", "im"]:
        raise CsvFormatError("expected header 'x,re,im'")
    data = rows[1:]
    if not data:
        raise CsvFormatError("no samples")
    if len(data) < 2:
        raise CsvFormatError("need at least two samples to infer spacing")
    try:
        xs = np.array([float(row[0]) for row in data])
        values = np.array(
            [complex(float(row[1]), float(row[2])) for row in data],
            dtype=np.complex128,
        )
    except (ValueError, IndexError) as exc:
        raise CsvFormatError(f"bad row: {exc}") from None
    dx = xs[1] - xs[0]
    if dx <= 0:
        raise CsvFormatError("x column must be strictly increasing")
    gaps = np.diff(xs)
    if np.max(np.abs(gaps - dx)) > 1e-9 * abs(dx):
        raise CsvFormatError("non-uniform sample spacing")
    return WaveGrid.from_uniform(values, float(xs[0]), float(dx), hbar)


def write_phase_grid_csv(grid, fh) -> None:
    if grid.n != 1:
        raise ValueError("phase-grid CSV is defined for one degree of freedom")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["x", "p", "value"])
    xs = grid.x_axes[0].points()
    ps = grid.p_axes[0].points()
    for j, x in enumerate(xs):
        for m, p in enumerate(ps):
            writer.writerow([_fmt(x), _fmt(p), _fmt(grid.values[j, m])])


# ---------------------------------------------------------------------------
# Output helpers
# ---------------------------------------------------------------------------


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        body = dict(payload)
        body["schema"] = SCHEMA
        print(json.dumps(body, sort_keys=True))
    else:
        print(text)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_quantize(args) -> int:
    rule = QuantRule.parse(args.rule)
    poly = parse_classical(args.expr, n=args.n)
    result = print_canonical(rule.apply(poly))
    _emit(
        args,
        {"command": "quantize", "rule": str(rule), "input": args.expr, "result": result},
        result,
    )
    return EXIT_OK


def _cmd_dequantize(args) -> int:
    op = parse_operator(args.expr, n=args.n)
    result = print_canonical(dequantize_weyl(op))
    _emit(
        args,
        {"command": "dequantize", "input": args.expr, "result": result},
        result,
    )
    return EXIT_OK


def _cmd_diff(args) -> int:
    names = [part.strip() for part in args.rules.split(",")]
    if len(names) != 2:
        raise ValueError("--rules takes exactly two comma-separated rules")
    r1, r2 = (QuantRule.parse(name) for name in names)
    poly = parse_classical(args.expr, n=args.n)
    result = print_canonical(rule_diff(poly, r1, r2))
    _emit(
        args,
        {
            "command": "diff",
            "rules": [str(r1), str(r2)],
            "input": args.expr,
            "result": result,
        },
        result,
    )
    return EXIT_OK


def _matrix_check(op: NormalOp, expected: NormalOp, dim: int = 8) -> str:
    """Numerically re-verify op == expected in the truncated ladder basis."""
    margin = max(op.max_dof_degree(), expected.max_dof_degree(), 1)
    worst = 0.0
    for hbar in (1.0, 0.5):
        rep = MatrixRep(op.n, dim, hbar)
        got = interior_block(matrix_eval(op, rep), rep, margin)
        want = interior_block(matrix_eval(expected, rep), rep, margin)
        scale = max(1.0, float(np.max(np.abs(want))))
        worst = max(worst, float(np.max(np.abs(got - want))) / scale)
    status = "ok" if worst < 1e-8 else "FAILED"
    return f"{status} (max rel dev {worst:.1e} at N={dim}, hbar in {{1, 0.5}})"


def _cmd_dilemma(args) -> int:
    lsq = builtin("lsq")
    lsq_op = builtin("Lsq_op")
    w = op_weyl(lsq)
    bj = op_bj(lsq)
    gap_w = w - lsq_op
    gap_rules = bj - w
    gap_bj = bj - lsq_op

    checks = {
        "weyl_minus_opsq": _matrix_check(w, lsq_op + gap_w),
        "bj_minus_weyl": _matrix_check(bj, w + gap_rules),
        "bj_minus_opsq": _matrix_check(bj, lsq_op + gap_bj),
    }
    values = {
        "weyl_minus_opsq": print_canonical(gap_w),
        "bj_minus_weyl": print_canonical(gap_rules),
        "bj_minus_opsq": print_canonical(gap_bj),
    }
    agree_32 = gap_w == NormalOp.scalar(Fraction(3, 2), 3).scale(
        _hbar_squared()
    )
    agree_12 = gap_rules == NormalOp.scalar(Fraction(1, 2), 3).scale(_hbar_squared())
    agree_sum = gap_bj == gap_w + gap_rules
    agree_advertised = gap_bj == NormalOp.scalar(1, 3).scale(_hbar_squared())

    lines = [
        f"Op_W(lsq)  - Lsq_op = {values['weyl_minus_opsq']}"
        f"   [matrix: {checks['weyl_minus_opsq']}]"
        f"   {'matches' if agree_32 else 'DIFFERS from'} the classic 3/2*hbar^2 extra term",
        f"Op_BJ(lsq) - Op_W(lsq) = {values['bj_minus_weyl']}"
        f"   [matrix: {checks['bj_minus_weyl']}]"
        f"   {'matches' if agree_12 else 'DIFFERS from'} the stated 1/2*hbar^2 gap",
        f"Op_BJ(lsq) - Lsq_op = {values['bj_minus_opsq']}"
        f"   [matrix: {checks['bj_minus_opsq']}]"
        f"   equals the sum of the two gaps: {'yes' if agree_sum else 'NO'};"
        f" the often-quoted value hbar^2 is "
        f"{'reproduced' if agree_advertised else 'NOT reproduced'}",
    ]
    payload = {
        "command": "dilemma",
        "values": values,
        "matrix_checks": checks,
        "agrees_with_3_2_hbar2": agree_32,
        "agrees_with_1_2_hbar2": agree_12,
        "third_equals_sum": agree_sum,
        "agrees_with_advertised_hbar2": agree_advertised,
    }
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _hbar_squared():
    from .exactalg import HCoeff

    return HCoeff.hbar(2)


def _validate_grid_flags(args, psi: WaveGrid) -> None:
    axis = psi.axes[0]
    if args.grid_n is not None:
        if args.grid_n & (args.grid_n - 1) or args.grid_n < 2:
            raise ValueError("--grid-n must be a power of two")
        if axis.size != args.grid_n:
            raise CsvFormatError(
                f"file has {axis.size} samples, --grid-n expects {args.grid_n}"
            )
    if args.xmin is not None and abs(axis.start - args.xmin) > 1e-9 * max(
        1.0, abs(args.xmin)
    ):
        raise CsvFormatError(f"file starts at x={axis.start!r}, --xmin expects {args.xmin!r}")
    if args.xmax is not None and abs(axis.stop - args.xmax) > 1e-9 * max(
        1.0, abs(args.xmax)
    ):
        raise CsvFormatError(f"file ends at x={axis.stop!r}, --xmax expects {args.xmax!r}")


def _grid_diagnostics(psi: WaveGrid, grid) -> str:
    x_marg, _ = marginals(grid)
    density = np.abs(psi.values) ** 2
    return (
        f"normalization {grid.total_mass():.9f}"
        f" (x-marginal L-inf error {np.max(np.abs(x_marg - density)):.3e})"
    )


def _cmd_wigner(args) -> int:
    kind = getattr(args, "kind", "wigner")
    psi = read_wavefunction_csv(args.psi, args.hbar)
    _validate_grid_flags(args, psi)
    grid = bj_wigner(psi) if kind in ("bj", "bj_wigner") else wigner(psi)
    print(_grid_diagnostics(psi, grid), file=sys.stderr)
    if args.format == "json":
        payload = {
            "schema": SCHEMA,
            "command": "wigner" if grid.kind == "wigner" else "bjwigner",
            "kind": grid.kind,
            "hbar": args.hbar,
            "x_axis": {"size": grid.x_axes[0].size, "start": grid.x_axes[0].start, "step": grid.x_axes[0].step},
            "p_axis": {"size": grid.p_axes[0].size, "start": grid.p_axes[0].start, "step": grid.p_axes[0].step},
            "values": [[float(v) for v in row] for row in grid.values],
        }
        with _open_output(args.output) as fh:
            json.dump(payload, fh, sort_keys=True)
            fh.write("\n")
    else:
        with _open_output(args.output) as fh:
            write_phase_grid_csv(grid, fh)
    return EXIT_OK


def _cmd_bjwigner(args) -> int:
    args.kind = "bj"
    return _cmd_wigner(args)


def _cmd_expect(args) -> int:
    if args.rule not in ("weyl", "bj"):
        raise ValueError("expect supports --rule weyl or bj")
    psi = read_wavefunction_csv(args.psi, args.hbar)
    _validate_grid_flags(args, psi)
    poly = parse_classical(args.expr, n=args.n)
    grid = wigner(psi) if args.rule == "weyl" else bj_wigner(psi)
    value = expect(grid, poly)
    _emit(
        args,
        {
            "command": "expect",
            "rule": args.rule,
            "input": args.expr,
            "hbar": args.hbar,
            "result": _fmt(value),
        },
        _fmt(value),
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):  # keep exit-code contract: usage errors are 2
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="bjq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, numeric=False):
        p.add_argument("--format", choices=("text", "csv", "json"), default=None)
        p.add_argument("--n", type=int, default=None, help="degree-of-freedom override")
        if numeric:
            p.add_argument("--hbar", type=float, default=None)
            p.add_argument("--grid-n", dest="grid_n", type=int, default=None)
            p.add_argument("--xmin", type=float, default=None)
            p.add_argument("--xmax", type=float, default=None)

    p = sub.add_parser("quantize", help="quantize a classical observable")
    p.add_argument("expr")
    p.add_argument("--rule", default="weyl")
    add_common(p)
    p.set_defaults(func=_cmd_quantize, default_format="text")

    p = sub.add_parser("dequantize", help="Weyl symbol of an operator expression")
    p.add_argument("expr")
    add_common(p)
    p.set_defaults(func=_cmd_dequantize, default_format="text")

    p = sub.add_parser("diff", help="difference of two quantizations")
    p.add_argument("expr")
    p.add_argument("--rules", required=True, help="e.g. bj,weyl")
    add_common(p)
    p.set_defaults(func=_cmd_diff, default_format="text")

    p = sub.add_parser("dilemma", help="exact angular-momentum ordering report")
    add_common(p)
    p.set_defaults(func=_cmd_dilemma, default_format="text")

    p = sub.add_parser("wigner", help="Wigner transform of a wavefunction CSV")
    p.add_argument("psi", help="wavefunction CSV path, or - for stdin")
    p.add_argument("--kind", choices=("wigner", "bj"), default="wigner")
    p.add_argument("-o", "--output", default=None)
    add_common(p, numeric=True)
    p.set_defaults(func=_cmd_wigner, default_format="csv")

    p = sub.add_parser("bjwigner", help="Born-Jordan-Wigner transform")
    p.add_argument("psi")
    p.add_argument("-o", "--output", default=None)
    add_common(p, numeric=True)
    p.set_defaults(func=_cmd_bjwigner, default_format="csv")

    p = sub.add_parser("expect", help="phase-space expectation value")
    p.add_argument("psi")
    p.add_argument("expr")
    p.add_argument("--rule", default="weyl")
    add_common(p, numeric=True)
    p.set_defaults(func=_cmd_expect, default_format="text")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"bjq: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SystemExit:
        # argparse exits on --help; treat that as success.
        return EXIT_OK

    if args.format is None:
        args.format = args.default_format
    if getattr(args, "hbar", None) is None and hasattr(args, "hbar"):
        try:
            args.hbar = float(_default_hbar())
        except ValueError:
            print(f"bjq: invalid BJQ_HBAR value {_default_hbar()!r}", file=sys.stderr)
            return EXIT_SEMANTIC
    if getattr(args, "hbar", 1.0) is not None and hasattr(args, "hbar") and args.hbar <= 0:
        print("bjq: hbar must be positive", file=sys.stderr)
        return EXIT_SEMANTIC

    try:
        return args.func(args)
    except ObsParseError as exc:
        print(f"bjq: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ObsSemanticError as exc:
        print(f"bjq: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except (CsvFormatError, GridError) as exc:
        print(f"bjq: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except OSError as exc:
        print(f"bjq: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"bjq: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
