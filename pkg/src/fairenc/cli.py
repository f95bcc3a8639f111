"""Command-line entry point for running trade-off sweeps.

Exit codes: 0 success, 2 configuration error, 3 data error.
"""

from __future__ import annotations

import argparse
import sys

from .data import DataError
from .sweep import ConfigError, ReportWriteError, SweepConfig, emit_report, run_sweep
from .synth import SCENARIOS


def _floats(text: str) -> tuple[float, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(part) for part in text.split(","))


def _seeds(text: str) -> tuple[int, ...]:
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part and not part.startswith("-"):
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return tuple(out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fairenc",
        description="Sweep encoder regularization against model accuracy and group fairness.",
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--data", help="CSV file of categorical columns plus a target column")
    source.add_argument("--scenario", choices=sorted(SCENARIOS),
                        help="synthetic scenario instead of a CSV file")
    parser.add_argument("--protected", help="protected column name")
    parser.add_argument("--reference", help="reference group label")
    parser.add_argument("--protected-group",
                        help="protected group label (default: largest non-reference group)")
    parser.add_argument("--target-col", default="target", help="target column name (CSV runs)")
    parser.add_argument("--positive-label", default="1", help="target value mapped to 1 (CSV runs)")
    parser.add_argument("--encoder", choices=["one-hot", "target"], default="target")
    parser.add_argument("--m-grid", type=_floats, default=(),
                        help="comma-separated smoothing values, e.g. 0,1,10,100,1000,10000")
    parser.add_argument("--sigma-grid", type=_floats, default=(),
                        help="comma-separated noise widths, e.g. 0,0.1,0.3,1.0")
    parser.add_argument("--models", default="logistic",
                        help="comma-separated subset of logistic,tree,gbdt")
    parser.add_argument("--seeds", type=_seeds, default=tuple(range(20)),
                        help="comma list and/or inclusive ranges, e.g. 0-19 or 0,3,7")
    parser.add_argument("--split", type=float, default=0.5, help="train fraction")
    parser.add_argument("--threshold", type=float, default=0.5, help="decision threshold")
    parser.add_argument("--out", required=True, help="output file path")
    parser.add_argument("--format", choices=["csv", "markdown-table"], default="csv")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = SweepConfig(
        scenario=args.scenario,
        data_path=args.data,
        target_column=args.target_col,
        positive_label=args.positive_label,
        protected=args.protected,
        reference=args.reference,
        protected_group=args.protected_group,
        encoder=args.encoder,
        m_grid=args.m_grid,
        sigma_grid=args.sigma_grid,
        models=tuple(m.strip() for m in args.models.split(",") if m.strip()),
        seeds=args.seeds,
        split_fraction=args.split,
        threshold=args.threshold,
    )
    try:
        records = run_sweep(config)
        emit_report(records, args.out, format=args.format)
    except ConfigError as exc:
        print(f"fairenc: configuration error: {exc}", file=sys.stderr)
        return 2
    except (DataError, ReportWriteError) as exc:
        print(f"fairenc: data error: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {len(records)} records to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
