from __future__ import annotations

import json
import logging
import sys
from pathlib import Path
from typing import Optional

import yaml

from backend.codec import DEFAULT_BURST_SIZE_MAX, dissect_frame
from backend.codec.fixtures import FIXTURE_DIR, generate_fixtures, read_hex, verify_fixtures
from backend.harness import run_benchmark, write_csv
from backend.physim import SimulationAssertion

from .config import RunConfig

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1         # dissect diagnostics / fixture drift
EXIT_USAGE = 2          # bad arguments or config
EXIT_ASSERTION = 3      # a simulation invariant fired


def cmd_bench(run: RunConfig) -> int:
    try:
        cfg = run.resolve()
    except (FileNotFoundError, ValueError, yaml.YAMLError) as e:
        log.error("load config failed: %s", e)
        return EXIT_USAGE

    try:
        table = run_benchmark(cfg.scenario, cfg)
    except SimulationAssertion as e:
        log.error("simulation assertion: %s", e)
        return EXIT_ASSERTION

    if cfg.out:
        Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
        write_csv(table, cfg.out)
        log.info("[OK] %d rows written: %s", len(table), cfg.out)
    else:
        write_csv(table, sys.stdout)
    return EXIT_OK


def cmd_dissect(path: str, *, num_vc: Optional[int] = None,
                burst_size_max: int = DEFAULT_BURST_SIZE_MAX, as_json: bool = False) -> int:
    try:
        data = read_hex(Path(path))
    except FileNotFoundError:
        log.error("no such file: %s", path)
        return EXIT_USAGE
    except ValueError as e:
        log.error("%s is not a hex dump: %s", path, e)
        return EXIT_FAILED

    report = dissect_frame(data, burst_size_max=burst_size_max, num_vc=num_vc)
    if as_json:
        print(json.dumps(report.as_dict(), indent=2))
    else:
        print(report.render())
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_fixtures(action: str, directory: Optional[str] = None) -> int:
    target = Path(directory) if directory else FIXTURE_DIR
    if action == "generate":
        written = generate_fixtures(target)
        log.info("[OK] %d fixtures in %s", len(written), target)
        return EXIT_OK
    if action != "verify":
        log.error("unknown fixtures action %r", action)
        return EXIT_USAGE

    drift = {name: diffs for name, diffs in verify_fixtures(target).items() if diffs}
    for name, diffs in drift.items():
        print(f"[ERR] {name}.hex")
        for line in diffs:
            print(f"    {line}")
    if drift:
        log.error("%d fixture(s) drifted from the encoder", len(drift))
        return EXIT_FAILED
    log.info("[OK] all fixtures match")
    return EXIT_OK
