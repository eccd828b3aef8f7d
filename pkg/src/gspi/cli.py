"""Command-line entry point: ``gspi <command> [flags]``.

Exit codes: 0 success, 1 invalid configuration, 2 runtime failure.
Progress goes to stderr; data goes to files or stdout.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

from .experiments import (ConfigError, ExperimentConfig, emit_figures, reproduce_table1,
                          theory_check, write_dataset)
from .features import BinningScheme, both_vectors
from .graph import read_edge_list
from .kernels import gram

log = logging.getLogger("gspi")

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def _csv(cast):
    def parse(text):
        return [cast(tok) for tok in text.split(",") if tok.strip()]
    return parse


def _common(p: argparse.ArgumentParser) -> None:
    # defaults are None so that a --config file can fill whatever is not given
    p.add_argument("--config", type=Path, help="JSON file with ExperimentConfig fields")
    p.add_argument("--n", type=_csv(int), dest="n_list", help="comma-separated node counts")
    p.add_argument("--c0", type=float)
    p.add_argument("--factors", type=_csv(float), dest="p2_factors", help="comma-separated p2/p1 ratios")
    p.add_argument("--graphs-per-class", type=int)
    p.add_argument("--folds", type=int)
    p.add_argument("--bin-width", type=int)
    p.add_argument("--lambda", type=float, dest="lam")
    p.add_argument("--iterations", type=int, help="Pegasos steps per fold (default 100 per sample)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", type=str)
    p.add_argument("--jobs", type=int)
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gspi", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write one-/two-cluster datasets as edge-list files")
    _common(p)

    p = sub.add_parser("features", help="SPI/GSPI feature vectors of edge-list files")
    _common(p)
    p.add_argument("graphs", nargs="+", type=Path)
    p.add_argument("--type", choices=["spi", "gspi"], default="gspi")
    p.add_argument("--gram", type=Path, help="also write the normalized Gram matrix as CSV")

    p = sub.add_parser("reproduce-table1", help="cross-validated SPI vs GSPI accuracy")
    _common(p)
    p.add_argument("--data", type=str, help="dataset directory written by 'generate'")

    p = sub.add_parser("emit-figures", help="histogram CSVs for figures 1-3")
    _common(p)
    p.add_argument("--which", type=_csv(str), default=["fig1", "fig2", "fig3"])
    p.add_argument("--fig3-graphs", type=int)

    p = sub.add_parser("theory-check", help="analytical predictions vs Monte-Carlo measurements")
    _common(p)
    p.add_argument("--theory-graphs", type=int)
    p.add_argument("--peak-graphs", type=int)
    p.add_argument("--fuzz-cases", type=int)
    return parser


_CONFIG_KEYS = ("n_list", "c0", "p2_factors", "graphs_per_class", "folds", "bin_width", "lam",
                "iterations", "seed", "out", "jobs", "data", "fig3_graphs", "theory_graphs",
                "peak_graphs", "fuzz_cases")


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    base = {}
    if args.config is not None:
        try:
            base = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    try:
        cfg = ExperimentConfig.from_dict(base)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            setattr(cfg, key, value)
    return cfg


def cmd_generate(cfg: ExperimentConfig) -> int:
    cfg.validate()
    manifest = write_dataset(cfg, Path(cfg.out))
    print(json.dumps({"out": cfg.out, "cells": len(manifest["cells"])}))
    return EXIT_OK


def cmd_features(cfg: ExperimentConfig, args) -> int:
    binning = BinningScheme(cfg.bin_width)
    vectors = []
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    for path in args.graphs:
        spi, gspi = both_vectors(read_edge_list(path), binning)
        vec = spi if args.type == "spi" else gspi
        vectors.append(vec)
        if out:
            (out / f"{path.stem}.{args.type}.json").write_text(vec.to_json() + "\n")
        else:
            print(vec.to_json())
    if args.gram:
        gram(vectors, normalize_vectors=True).to_csv(args.gram)
    return EXIT_OK


def cmd_reproduce_table1(cfg: ExperimentConfig) -> int:
    rows = reproduce_table1(cfg, Path(cfg.out))
    for r in rows:
        print(r.csv_line())
    return EXIT_RUNTIME if any(r.error or math.isnan(r.accuracy) for r in rows) else EXIT_OK


def cmd_emit_figures(cfg: ExperimentConfig, which) -> int:
    unknown = set(which) - {"fig1", "fig2", "fig3"}
    if unknown:
        raise ConfigError(f"unknown figure(s): {sorted(unknown)}")
    cfg.validate()
    for name, path in emit_figures(cfg, which, Path(cfg.out)).items():
        print(f"{name},{path}")
    return EXIT_OK


def cmd_theory_check(cfg: ExperimentConfig) -> int:
    report = theory_check(cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    text = json.dumps(report, indent=2) + "\n"
    (out / "theory_check.json").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(message)s", stream=sys.stderr)
    try:
        cfg = config_from_args(args)
        if args.command == "generate":
            return cmd_generate(cfg)
        if args.command == "features":
            return cmd_features(cfg, args)
        if args.command == "reproduce-table1":
            return cmd_reproduce_table1(cfg)
        if args.command == "emit-figures":
            return cmd_emit_figures(cfg, args.which)
        if args.command == "theory-check":
            return cmd_theory_check(cfg)
    except ConfigError as exc:
        print(f"gspi: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001
        print(f"gspi: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
