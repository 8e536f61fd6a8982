"""Command-line front end: `bench`, `dissect` and `fixtures`."""
from __future__ import annotations

import argparse
import logging
from typing import List, Optional

from backend.core import ConfigError
from backend.log import setup_logging

from .commands import EXIT_USAGE, cmd_bench, cmd_dissect, cmd_fixtures
from .config import RunConfig, default_config_path, load_config_smart, parse_sizes

log = logging.getLogger(__name__)

__all__ = ["main", "build_parser", "RunConfig", "load_config_smart", "parse_sizes"]


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="htsp", description="HTSP link simulator and frame tools")
    ap.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = ap.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="run a benchmark scenario, write CSV")
    b.add_argument("scenario", nargs="?", default=None,
                   help="bandwidth | frame_rate | latency | flow_control_stress | error_rate")
    b.add_argument("--config", default=None, help="YAML run config (default: $HTSP_CONFIG or config/htsp.yaml)")
    b.add_argument("--seed", type=int, default=None)
    b.add_argument("--ber", type=float, default=None, help="residual bit error rate after FEC")
    b.add_argument("--vc", type=int, default=None, dest="num_vc", help="number of virtual channels")
    b.add_argument("--burst", type=int, default=None, dest="burst_size_max", help="burst size in bytes")
    b.add_argument("--clock", default=None, help="clock preset: firmware | exact")
    b.add_argument("--sizes", default=None, help="e.g. 64..1M or 768,769,8k")
    b.add_argument("--duration", type=float, default=None, help="simulated seconds per sweep point")
    b.add_argument("--workers", type=int, default=None, help="threads for sweep points")
    b.add_argument("--formula", default=None, choices=["aligned", "plain"],
                   help="calculated column: payload in whole bus words per burst, or plain frame + overhead")
    b.add_argument("--out", default=None, help="CSV path (default stdout)")

    d = sub.add_parser("dissect", help="dump every field of a hex frame file")
    d.add_argument("file")
    d.add_argument("--vc", type=int, default=None, dest="num_vc", help="flag VCs outside 0..N-1")
    d.add_argument("--burst", type=int, default=None, dest="burst_size_max")
    d.add_argument("--json", action="store_true")

    f = sub.add_parser("fixtures", help="generate or verify golden frames")
    f.add_argument("action", choices=["generate", "verify"])
    f.add_argument("--dir", default=None, help="fixture directory (default fixtures/)")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else 0
    setup_logging(args.verbose)

    if args.command == "bench":
        try:
            sizes = parse_sizes(args.sizes) if args.sizes else None
        except ConfigError as e:
            log.error("%s", e)
            return EXIT_USAGE
        run = RunConfig(
            config_path=args.config or default_config_path(),
            scenario=args.scenario,
            num_vc=args.num_vc,
            burst_size_max=args.burst_size_max,
            ber=args.ber,
            seed=args.seed,
            clock=args.clock,
            sizes=sizes,
            out=args.out,
            duration=args.duration,
            workers=args.workers,
            formula=args.formula,
        )
        return cmd_bench(run)
    if args.command == "dissect":
        kw = {"num_vc": args.num_vc, "as_json": args.json}
        if args.burst_size_max:
            kw["burst_size_max"] = args.burst_size_max
        return cmd_dissect(args.file, **kw)
    return cmd_fixtures(args.action, args.dir)
