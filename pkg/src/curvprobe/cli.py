"""Command-line front end: ``curvprobe <kind> [--config F] [--out F] [--seed N] [--threads N]``."""
from __future__ import annotations

import argparse
import json
import sys

from .config import KINDS, ConfigError, ExperimentConfig
from .experiments import emit_csv, metadata, row_warnings, run

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="curvprobe", description="Quantum probes of surface curvature.")
    sub = ap.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        sp = sub.add_parser(kind, help=f"run a {kind} experiment")
        sp.add_argument("--config", help="TOML experiment config (defaults used when omitted)")
        sp.add_argument("--out", help="CSV output path (stdout summary only when omitted)")
        sp.add_argument("--seed", type=int, help="override the config seed (u64)")
        sp.add_argument("--threads", type=int, default=1, help="worker threads for scan points")
        sp.add_argument("--strict", action="store_true", help="exit 2 if any numeric warning was raised")
        sp.add_argument("--dump-config", metavar="PATH", help="write the effective config and continue")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = ExperimentConfig.load(args.config, args.kind) if args.config else ExperimentConfig.default(args.kind)
        if args.seed is not None:
            cfg.seed = args.seed
        cfg.validate()
        if args.threads < 1:
            raise ConfigError("--threads: must be >= 1")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        if args.dump_config:
            cfg.dump(args.dump_config)
        rows, summary = run(cfg, args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO

    if args.out:
        try:
            emit_csv(rows, args.out, cfg.kind, metadata(cfg))
        except OSError as exc:
            print(f"i/o error: {exc}", file=sys.stderr)
            return EXIT_IO
    warns = row_warnings(rows)
    print(json.dumps({"kind": cfg.kind, "seed": cfg.seed, "warnings": len(warns), **summary}, default=str))
    if warns:
        for w in sorted(set(warns)):
            print(f"warning: {w}", file=sys.stderr)
        if args.strict:
            return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
