"""Command line entry point.

Exit status: 0 on success, 1 on a configuration error, 2 when any Padé cell
is defective or pole-contaminated.
"""
from __future__ import annotations

import argparse
import sys

from . import published
from .report import ConfigError, anomalies, config_from_items, parse_config, render, run_sweep, series_csv
from .series import compute_series

EXIT_OK, EXIT_CONFIG, EXIT_ANOMALY = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hvpade",
        description="Hypervirial perturbation series and Padé sums for the cubic-quadratic anharmonic oscillator.",
    )
    p.add_argument("--config", metavar="PATH", help="flat key = value configuration file")
    p.add_argument("--omega")
    p.add_argument("--states", metavar="LIST")
    p.add_argument("--lambdas", metavar="LIST")
    p.add_argument("--order", metavar="K")
    p.add_argument("--pade", metavar="N:M[,N:M...]")
    p.add_argument("--cubic", metavar="on|off")
    p.add_argument("--oracle", metavar="off|variational|rspt|both")
    p.add_argument("--format", metavar="table|csv")
    p.add_argument("--pole-threshold", metavar="R")
    p.add_argument("--precision", metavar="rational|float")
    p.add_argument("--published", action="store_true",
                   help="append a comparison with the published six-decimal tables (table format only)")
    p.add_argument("--series-csv", action="store_true",
                   help="print exact E^(k) numerator/denominator pairs per state instead of the sweep")
    return p


_OVERRIDES = ("omega", "states", "lambdas", "order", "pade", "cubic", "oracle", "format", "pole_threshold", "precision")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = None
        if args.config:
            try:
                with open(args.config, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                print(f"hvpade: cannot read config: {exc}", file=sys.stderr)
                return EXIT_CONFIG
            cfg = parse_config(text)
        items = [(key, getattr(args, key), None) for key in _OVERRIDES if getattr(args, key) is not None]
        cfg = config_from_items(items, cfg)
    except ConfigError as exc:
        print(f"hvpade: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.series_csv:
        if cfg.precision != "rational":
            print("hvpade: config error: --series-csv needs precision = rational", file=sys.stderr)
            return EXIT_CONFIG
        for n in cfg.states:
            series, _ = compute_series(cfg.model(n))
            sys.stdout.write(f"# n = {n}\n" + series_csv(series))
        return EXIT_OK

    rows = run_sweep(cfg)
    sys.stdout.write(render(rows, cfg.output_format))
    if args.published and cfg.output_format == "table":
        sys.stdout.write("\n" + published.render_comparison(published.compare(rows)))
    bad = anomalies(rows)
    for n, lam, (N, M), flag in bad:
        print(f"hvpade: n={n} lambda={lam:g} E[{N},{M}] {flag}", file=sys.stderr)
    return EXIT_ANOMALY if bad else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
