import io
import math

import pandas as pd
import pytest

from backend.core import ConfigError, EngineConfig
from backend.harness import COLUMNS, DEFAULT_SIZES, BenchConfig, Scenario, run_benchmark, write_csv
from backend.harness.scenarios import (
    bandwidth_point,
    error_rate_point,
    flow_control_point,
    frame_rate_point,
    iter_benchmark,
    latency_point,
)
from backend.physim import LinkConfig


def one(rows):
    assert len(rows) == 1
    return rows[0]


@pytest.mark.parametrize("size", [768, 769, 8192])
def test_bandwidth_tracks_formula(quick_bench, size):
    row = one(bandwidth_point(quick_bench, size))
    assert row["unit"] == "Gb/s" and row["scenario"] == "bandwidth"
    assert row["measured"] == pytest.approx(row["calculated"], rel=0.005)


def test_bandwidth_regime_step(quick_bench):
    small = one(bandwidth_point(quick_bench, 768))["measured"]
    large = one(bandwidth_point(quick_bench, 769))["measured"]
    assert small > 79 and 70 < large < 72
    assert one(bandwidth_point(quick_bench, 8192))["measured"] >= 96.9


def test_bandwidth_pair_topology(quick_bench):
    row = one(bandwidth_point(quick_bench.with_(topology="pair"), 8192))
    assert row["measured"] == pytest.approx(row["calculated"], rel=0.005)


def test_plain_formula_drops_word_alignment(quick_bench):
    aligned = one(bandwidth_point(quick_bench, 769))
    plain = one(bandwidth_point(quick_bench.with_(formula="plain"), 769))
    assert aligned["calculated"] == pytest.approx(70.68, abs=0.01)
    assert plain["calculated"] == pytest.approx(75.02, abs=0.01)
    assert plain["measured"] == aligned["measured"]


def test_frame_rate_small_frames(quick_bench):
    row = one(frame_rate_point(quick_bench, 256))
    assert row["unit"] == "Hz"
    assert row["measured"] / 1e6 == pytest.approx(27.9, rel=0.01)
    assert row["measured"] == pytest.approx(row["calculated"], rel=0.005)


def test_latency_increasing_then_flat(quick_bench):
    sizes = [64, 256, 769, 4096, 8192, 16384]
    lat = [one(latency_point(quick_bench, s))["measured"] for s in sizes]
    assert all(a < b for a, b in zip(lat[:-1], lat[1:-1]))
    assert lat[-1] == lat[-2] == pytest.approx(1.176, abs=0.006)


def test_latency_matches_calibrated_model(quick_bench):
    row = one(latency_point(quick_bench, 1024))
    assert row["unit"] == "us"
    assert row["measured"] == pytest.approx(row["calculated"])


def test_flow_control_stress(quick_bench):
    rows = {r["scenario"]: r for r in flow_control_point(quick_bench, 8192)}
    bw = rows["flow_control_stress/unpaused_bw"]
    assert bw["measured"] > 90
    assert rows["flow_control_stress/stalled_vc_bytes"]["measured"] == 0
    peak = rows["flow_control_stress/peak_fifo"]
    assert 0 < peak["measured"] < peak["calculated"]


def test_error_rate_within_three_sigma(quick_bench):
    cfg = quick_bench.with_(link=LinkConfig(ber=1e-6), error_frames=2000)
    rows = {r["scenario"]: r for r in error_rate_point(cfg, 8192)}
    frac = rows["error_rate/fcs_drop_fraction"]
    p = frac["calculated"]
    sigma = math.sqrt(p * (1 - p) / 2000)
    assert abs(frac["measured"] - p) < 3 * sigma
    assert rows["error_rate/undetected_bit_errors"]["measured"] == 0


def test_error_rate_uses_default_ber_on_clean_link(quick_bench):
    cfg = quick_bench.with_(error_ber=1e-5, error_frames=300)
    row = error_rate_point(cfg, 1024)[0]
    assert row["calculated"] == pytest.approx(1 - (1 - 1e-5) ** (8 * 1098))


def test_run_benchmark_table(quick_bench):
    cfg = quick_bench.with_(sizes=(256, 8192))
    table = run_benchmark("bandwidth", cfg)
    assert list(table.columns) == COLUMNS
    assert list(table["frame_bytes"]) == [256, 8192]
    assert (table["seed"] == 0).all()


def test_same_seed_same_csv(quick_bench):
    cfg = quick_bench.with_(sizes=(512, 2048), link=LinkConfig(ber=1e-5), error_frames=300)
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        write_csv(run_benchmark(Scenario.ERROR_RATE, cfg), buf)
        outs.append(buf.getvalue())
    assert outs[0] == outs[1]
    assert outs[0].splitlines()[0] == ",".join(COLUMNS)


def test_workers_keep_size_order(quick_bench):
    cfg = quick_bench.with_(sizes=(8192, 256, 1024))
    serial = run_benchmark("frame_rate", cfg)
    threaded = run_benchmark("frame_rate", cfg.with_(workers=3))
    pd.testing.assert_frame_equal(serial, threaded)


def test_iter_benchmark_streams_rows(quick_bench):
    rows = iter_benchmark("latency", quick_bench.with_(sizes=(64, 128)))
    assert next(rows)["frame_bytes"] == 64
    assert next(rows)["frame_bytes"] == 128


@pytest.mark.parametrize("name,expected", [
    ("bandwidth", Scenario.BANDWIDTH),
    ("BandwidthSweep", Scenario.BANDWIDTH),
    ("FrameRateSweep", Scenario.FRAME_RATE),
    ("FRAME_RATE", Scenario.FRAME_RATE),
    ("framerate", Scenario.FRAME_RATE),
    ("flow-control-stress", Scenario.FLOW_CONTROL_STRESS),
    ("LatencySweep", Scenario.LATENCY),
    ("error_rate", Scenario.ERROR_RATE),
])
def test_scenario_names(name, expected):
    assert Scenario.parse(name) is expected


def test_unknown_scenario():
    with pytest.raises(ConfigError):
        Scenario.parse("jitter")


@pytest.mark.parametrize("kw", [
    {"sizes": ()},
    {"sizes": (0, 64)},
    {"min_frames": 0},
    {"min_frames": 10, "max_frames": 5},
    {"workers": 0},
    {"topology": "ring"},
    {"stress_vcs": 1},
    {"duration": 0},
    {"formula": "exact"},
])
def test_bench_config_validation(kw):
    with pytest.raises(ConfigError):
        BenchConfig(**kw).validate()


def test_bench_config_from_dict():
    cfg = BenchConfig.from_dict({
        "link": {"clock": "exact", "ber": 1e-9},
        "engine": {"num_vc": 4, "burst_size_max": 4096},
        "bench": {"scenario": "LatencySweep", "sizes": [64, "128"], "seed": 7},
    })
    assert cfg.scenario is Scenario.LATENCY
    assert cfg.sizes == (64, 128)
    assert cfg.link.clock_hz == 195.3125e6
    assert cfg.engine.rx.num_vc == 4 and cfg.engine.tx.burst_size_max == 4096
    assert cfg.as_dict()["bench"]["scenario"] == "latency"


@pytest.mark.parametrize("d", [
    {"links": {}},
    {"bench": {"colour": 1}},
    {"engine": {"num_vcs": 2}},
    {"link": {"clock": "turbo"}},
])
def test_bench_config_rejects_unknown_keys(d):
    with pytest.raises(ConfigError):
        BenchConfig.from_dict(d)


def test_default_sweep_covers_regime_boundaries():
    assert DEFAULT_SIZES[0] == 64 and DEFAULT_SIZES[-1] == 1 << 20
    assert {768, 769, 8192} <= set(DEFAULT_SIZES)
    assert list(DEFAULT_SIZES) == sorted(DEFAULT_SIZES)


def test_engine_vc_limit():
    with pytest.raises(ConfigError):
        EngineConfig.from_dict({"num_vc": 17})


@pytest.mark.slow
def test_full_bandwidth_sweep():
    table = run_benchmark("bandwidth", BenchConfig(min_frames=100, max_frames=2000, workers=4))
    big = table[table["frame_bytes"] >= 8192]
    assert (big["measured"] >= 96.9).all()
    ratio = table["measured"] / table["calculated"]
    assert ratio.between(0.995, 1.005).all()


@pytest.mark.slow
def test_full_frame_rate_at_one_megabyte():
    row = one(frame_rate_point(BenchConfig(min_frames=20, max_frames=50), 1 << 20))
    assert row["measured"] / 1e3 == pytest.approx(11.6, rel=0.01)


@pytest.mark.slow
def test_flow_control_long_run_never_overflows():
    cfg = BenchConfig(stress_frames=50_000, duration=1e-5)
    rows = {r["scenario"]: r for r in flow_control_point(cfg, 8192)}
    assert rows["flow_control_stress/unpaused_bw"]["measured"] >= 90
    peak = rows["flow_control_stress/peak_fifo"]
    assert peak["measured"] < peak["calculated"]


@pytest.mark.slow
def test_error_rate_at_acceptance_scale():
    cfg = BenchConfig(error_ber=1e-7, error_frames=100_000)
    rows = {r["scenario"]: r for r in error_rate_point(cfg, 8192)}
    frac = rows["error_rate/fcs_drop_fraction"]
    p = frac["calculated"]
    assert abs(frac["measured"] - p) < 3 * math.sqrt(p * (1 - p) / 100_000)
    assert rows["error_rate/undetected_bit_errors"]["measured"] == 0
