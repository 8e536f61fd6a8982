import json

import pandas as pd
import pytest
import yaml

from backend.cli import RunConfig, main, parse_sizes
from backend.cli.config import ENV_CONFIG, default_config_path, load_config_smart
from backend.codec.fixtures import FIXTURE_DIR, generate_fixtures, read_hex, to_hex
from backend.core import ConfigError

QUICK = {"bench": {"min_frames": 20, "max_frames": 50, "duration": 1.0e-5}}


@pytest.fixture
def quick_config(tmp_path):
    def write(extra=None):
        d = {k: dict(v) for k, v in QUICK.items()}
        for section, values in (extra or {}).items():
            d.setdefault(section, {}).update(values)
        path = tmp_path / "run.yaml"
        path.write_text(yaml.safe_dump(d))
        return str(path)
    return write


# ---------- bench ----------

def test_bench_writes_csv(quick_config, tmp_path):
    out = tmp_path / "out" / "bw.csv"
    rc = main(["bench", "bandwidth", "--config", quick_config(), "--sizes", "768,8k", "--out", str(out)])
    assert rc == 0
    table = pd.read_csv(out)
    assert list(table.columns) == ["frame_bytes", "measured", "calculated", "unit", "scenario", "seed"]
    assert list(table["frame_bytes"]) == [768, 8192]


def test_bench_to_stdout(quick_config, capsys):
    rc = main(["bench", "LatencySweep", "--config", quick_config(), "--sizes", "64", "--seed", "5"])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("frame_bytes,")
    assert lines[1].endswith(",us,latency,5")


def test_bench_reads_repo_default_config(monkeypatch, capsys):
    monkeypatch.delenv(ENV_CONFIG, raising=False)
    rc = main(["bench", "latency", "--sizes", "64"])
    assert rc == 0
    assert "latency" in capsys.readouterr().out


def test_bench_missing_config_is_usage_error(tmp_path):
    assert main(["bench", "--config", str(tmp_path / "nope.yaml")]) == 2


def test_bench_bad_scenario_is_usage_error(quick_config):
    assert main(["bench", "jitter", "--config", quick_config()]) == 2


@pytest.mark.parametrize("argv", [
    ["bench", "--ber", "2.0"],
    ["bench", "--vc", "0"],
    ["bench", "--burst", "100"],
    ["bench", "--clock", "turbo"],
    ["bench", "--sizes", "big"],
])
def test_bench_invalid_overrides(quick_config, argv):
    assert main(argv + ["--config", quick_config()]) == 2


def test_bench_bad_yaml(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("link: [unclosed\n")
    assert main(["bench", "--config", str(path)]) == 2


def test_bench_simulation_assertion_exit_code(quick_config):
    # the first keepalive cannot arrive before the link timeout fires
    cfg = quick_config({"link": {"propagation_cycles": 10_000_000}})
    assert main(["bench", "latency", "--config", cfg, "--sizes", "64"]) == 3


def test_bench_formula_flag(quick_config, tmp_path):
    out = tmp_path / "plain.csv"
    rc = main(["bench", "bandwidth", "--config", quick_config(), "--sizes", "769",
               "--formula", "plain", "--out", str(out)])
    assert rc == 0
    assert pd.read_csv(out)["calculated"].iloc[0] == pytest.approx(75.02, abs=0.01)
    assert main(["bench", "--formula", "fancy", "--config", quick_config()]) == 2


def test_argparse_errors_map_to_usage():
    assert main(["bench", "--seed", "x"]) == 2
    assert main([]) == 2


# ---------- dissect ----------

def test_dissect_good_fixture(capsys):
    assert main(["dissect", str(FIXTURE_DIR / "full_64.hex")]) == 0
    out = capsys.readouterr().out
    assert "HdrXsum" in out and "[OK] frame is valid" in out


def test_dissect_json(capsys):
    assert main(["dissect", str(FIXTURE_DIR / "header_opcode.hex"), "--json"]) == 0
    d = json.loads(capsys.readouterr().out)
    assert d["ok"] and d["kind"] == "header_only"


def test_dissect_corrupted_frame(tmp_path):
    data = bytearray(read_hex(FIXTURE_DIR / "header_only.hex"))
    data[14] = 0x02
    path = tmp_path / "bad.hex"
    path.write_text(to_hex(bytes(data)))
    assert main(["dissect", str(path)]) == 1


def test_dissect_unknown_vc_flag():
    assert main(["dissect", str(FIXTURE_DIR / "header_opcode.hex"), "--vc", "2"]) == 1


def test_dissect_not_hex(tmp_path):
    path = tmp_path / "junk.hex"
    path.write_text("zz yy")
    assert main(["dissect", str(path)]) == 1


def test_dissect_missing_file(tmp_path):
    assert main(["dissect", str(tmp_path / "none.hex")]) == 2


# ---------- fixtures ----------

def test_fixtures_verify_checked_in():
    assert main(["fixtures", "verify"]) == 0


def test_fixtures_verify_detects_drift(tmp_path, capsys):
    generate_fixtures(tmp_path)
    path = tmp_path / "full_100.hex"
    data = bytearray(read_hex(path))
    data[-1] ^= 0xFF
    path.write_text(to_hex(bytes(data)))
    assert main(["fixtures", "verify", "--dir", str(tmp_path)]) == 1
    assert "[ERR] full_100.hex" in capsys.readouterr().out


def test_fixtures_generate(tmp_path):
    assert main(["fixtures", "generate", "--dir", str(tmp_path)]) == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == [
        "full_100.hex", "full_64.hex", "header_only.hex", "header_opcode.hex"]


# ---------- config helpers ----------

@pytest.mark.parametrize("text,sizes", [
    ("64", (64,)),
    ("768,769,8k", (768, 769, 8192)),
    ("1M", (1 << 20,)),
    ("64..1k", (64, 128, 256, 512, 768, 769, 1024)),
    ("100..120", (100,)),
])
def test_parse_sizes(text, sizes):
    assert parse_sizes(text) == sizes


@pytest.mark.parametrize("text", ["", "abc", "2k..1k", "1G", "-5"])
def test_parse_sizes_rejects(text):
    with pytest.raises(ConfigError):
        parse_sizes(text)


def test_env_var_selects_config(monkeypatch, tmp_path):
    monkeypatch.setenv(ENV_CONFIG, str(tmp_path / "x.yaml"))
    assert default_config_path() == str(tmp_path / "x.yaml")
    monkeypatch.delenv(ENV_CONFIG)
    assert default_config_path() == "config/htsp.yaml"


def test_load_config_relative_to_repo():
    d = load_config_smart("config/htsp.yaml")
    assert set(d) == {"link", "engine", "bench"}


def test_run_config_merge_overrides():
    run = RunConfig(config_path="x", ber=1e-9, clock="exact", num_vc=4, sizes=(64, 128), seed=3)
    merged = run.merge({"link": {"clock_hz": 1e6}, "bench": {"seed": 0}})
    assert merged["link"] == {"ber": 1e-9, "clock": "exact"}
    assert merged["engine"] == {"num_vc": 4}
    assert merged["bench"] == {"seed": 3, "sizes": [64, 128]}


def test_bench_latency_sweep_plateau(quick_config, tmp_path):
    out = tmp_path / "lat.csv"
    assert main(["bench", "latency", "--config", quick_config(), "--sizes", "64..1M", "--out", str(out)]) == 0
    table = pd.read_csv(out)
    plateau = table[table["frame_bytes"] >= 8192]["measured"]
    assert len(plateau) == 9 and plateau.nunique() == 1
    assert plateau.iloc[0] == pytest.approx(1.176, abs=0.006)
