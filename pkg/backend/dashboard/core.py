# backend/dashboard/core.py
import json
import logging
from pathlib import Path
from typing import Iterator, Mapping, Optional

from backend.cli.config import RunConfig, default_config_path, parse_sizes
from backend.codec import dissect_frame
from backend.core import ConfigError
from backend.harness import COLUMNS, BenchConfig, Scenario, iter_benchmark, run_benchmark
from backend.physim import CLOCK_PRESETS

log = logging.getLogger(__name__)

# sweeps over HTTP stay small unless the caller asks for more
WEB_SIZES = (256, 768, 769, 8192)


def scenarios_payload() -> dict:
    base = BenchConfig()
    return {
        "scenarios": [s.value for s in Scenario],
        "columns": COLUMNS,
        "clock_presets": CLOCK_PRESETS,
        "defaults": {"sizes": list(WEB_SIZES), "seed": base.seed, "duration": base.duration,
                     "formula": base.formula},
    }


def _opt(args: Mapping, key: str, cast):
    value = args.get(key)
    if value in (None, ""):
        return None
    try:
        return cast(value)
    except ValueError:
        raise ConfigError(f"bad value for {key}: {value!r}") from None


def bench_config_from_query(scenario: str, args: Mapping, config_path: Optional[str] = None) -> BenchConfig:
    """Config file (if present) + query-string overrides, validated."""
    sizes = parse_sizes(args["sizes"]) if args.get("sizes") else WEB_SIZES
    run = RunConfig(
        config_path=config_path or default_config_path(),
        scenario=Scenario.parse(scenario).value,
        num_vc=_opt(args, "vc", int),
        burst_size_max=_opt(args, "burst", int),
        ber=_opt(args, "ber", float),
        seed=_opt(args, "seed", int),
        clock=args.get("clock") or None,
        sizes=sizes,
        duration=_opt(args, "duration", float),
        formula=args.get("formula") or None,
    )
    try:
        return run.resolve()
    except FileNotFoundError:
        log.info("no config file at %s, using built-in defaults", run.config_path)
        return BenchConfig.from_dict(run.merge({}))


def run_payload(cfg: BenchConfig) -> dict:
    table = run_benchmark(cfg.scenario, cfg)
    return {"status": "success", "scenario": Scenario.parse(cfg.scenario).value,
            "formula": cfg.formula, "rows": table.to_dict(orient="records")}


def run_csv(cfg: BenchConfig) -> str:
    return run_benchmark(cfg.scenario, cfg).to_csv(index=False, float_format="%.9g")


def stream_rows(cfg: BenchConfig) -> Iterator[str]:
    """Server-sent events: one `data:` line per result row, then `event: done`."""
    for row in iter_benchmark(cfg.scenario, cfg):
        yield f"data: {json.dumps(row)}\n\n"
    yield "event: done\ndata: {}\n\n"


def dissect_payload(hex_text: str, num_vc: Optional[int] = None) -> dict:
    data = bytes.fromhex("".join((hex_text or "").split()))
    report = dissect_frame(data, num_vc=num_vc)
    return {"status": "success" if report.ok else "invalid", **report.as_dict()}
