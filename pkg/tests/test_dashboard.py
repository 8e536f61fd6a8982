import json

import pytest
import yaml

from backend.cli.config import ENV_CONFIG
from backend.codec.fixtures import FIXTURE_DIR, read_hex
from frontend.app import create_app


@pytest.fixture
def client():
    app = create_app()
    app.config["TESTING"] = True
    return app.test_client()


@pytest.fixture
def quick_env(monkeypatch, tmp_path):
    def use(link=None):
        d = {"bench": {"min_frames": 20, "max_frames": 50, "duration": 1.0e-5}}
        if link:
            d["link"] = link
        path = tmp_path / "web.yaml"
        path.write_text(yaml.safe_dump(d))
        monkeypatch.setenv(ENV_CONFIG, str(path))
    return use


def test_root_points_at_bench(client):
    assert client.get("/").get_json()["bench"] == "/bench/"


def test_index_lists_scenarios(client):
    d = client.get("/bench/").get_json()
    assert "flow_control_stress" in d["scenarios"]
    assert d["columns"][0] == "frame_bytes"
    assert d["defaults"]["sizes"] == [256, 768, 769, 8192]


def test_run_json(client, quick_env):
    quick_env()
    res = client.get("/bench/run/latency?sizes=64,8k&seed=2")
    assert res.status_code == 200
    d = res.get_json()
    assert d["status"] == "success" and d["scenario"] == "latency"
    assert d["formula"] == "aligned"
    assert [r["frame_bytes"] for r in d["rows"]] == [64, 8192]
    assert all(r["seed"] == 2 for r in d["rows"])


def test_run_csv(client, quick_env):
    quick_env()
    res = client.get("/bench/run/BandwidthSweep?sizes=8k&format=csv")
    assert res.status_code == 200 and res.mimetype == "text/csv"
    lines = res.get_data(as_text=True).splitlines()
    assert lines[0] == "frame_bytes,measured,calculated,unit,scenario,seed"
    assert lines[1].startswith("8192,")


def test_run_without_config_file_uses_defaults(client, monkeypatch, tmp_path):
    monkeypatch.setenv(ENV_CONFIG, str(tmp_path / "absent.yaml"))
    res = client.get("/bench/run/latency?sizes=64")
    assert res.status_code == 200
    assert res.get_json()["rows"][0]["unit"] == "us"


def test_stream_sends_rows_then_done(client, quick_env):
    quick_env()
    res = client.get("/bench/stream/latency?sizes=64,128")
    assert res.mimetype == "text/event-stream"
    body = res.get_data(as_text=True)
    rows = [json.loads(line[len("data: "):]) for line in body.splitlines()
            if line.startswith("data: {\"")]
    assert [r["frame_bytes"] for r in rows] == [64, 128]
    assert body.rstrip().endswith("event: done\ndata: {}")


@pytest.mark.parametrize("url", [
    "/bench/run/jitter",
    "/bench/run/latency?vc=abc",
    "/bench/run/latency?sizes=huge",
    "/bench/run/latency?ber=3",
    "/bench/run/bandwidth?formula=fancy",
    "/bench/stream/nothing",
])
def test_bad_requests(client, quick_env, url):
    quick_env()
    res = client.get(url)
    assert res.status_code == 400
    assert res.get_json()["status"] == "error"


def test_simulation_assertion_is_server_error(client, quick_env):
    quick_env(link={"propagation_cycles": 10_000_000})
    res = client.get("/bench/run/latency?sizes=64")
    assert res.status_code == 500
    assert "link did not come up" in res.get_json()["message"]


def test_dissect_ok(client):
    hex_text = read_hex(FIXTURE_DIR / "full_100.hex").hex(" ")
    d = client.post("/bench/dissect", json={"hex": hex_text}).get_json()
    assert d["status"] == "success" and d["kind"] == "full" and d["length"] == 170


def test_dissect_invalid_frame(client):
    data = bytearray(read_hex(FIXTURE_DIR / "header_only.hex"))
    data[31] ^= 0x01
    d = client.post("/bench/dissect", json={"hex": data.hex()}).get_json()
    assert d["status"] == "invalid"
    assert any(x.startswith("BadChecksum") for x in d["diagnostics"])


def test_dissect_num_vc(client):
    data = read_hex(FIXTURE_DIR / "header_opcode.hex")
    d = client.post("/bench/dissect", json={"hex": data.hex(), "num_vc": 2}).get_json()
    assert d["status"] == "invalid"


@pytest.mark.parametrize("body", [{}, {"hex": ""}, {"hex": "zz"}, {"hex": "00", "num_vc": "x"}])
def test_dissect_bad_input(client, body):
    res = client.post("/bench/dissect", json=body)
    assert res.status_code == 400
