import pytest

from backend.harness import (
    burst_sizes,
    calc_bandwidth,
    calc_framerate,
    calc_latency_us,
    fcs_drop_probability,
    overhead_bytes,
)
from backend.harness.formulas import wire_bytes


def test_burst_sizes():
    assert burst_sizes(20000) == [8192, 8192, 3616]
    assert burst_sizes(8192) == [8192]
    assert burst_sizes(1) == [1]
    with pytest.raises(ValueError):
        burst_sizes(0)


def test_overhead_bytes_per_burst():
    assert overhead_bytes(256) == 192
    assert overhead_bytes(769) == 256
    assert overhead_bytes(1 << 20) == 128 * 256


def test_frame_rate_small_frames():
    assert calc_framerate(256) / 1e6 == pytest.approx(27.9, rel=0.01)


def test_frame_rate_one_megabyte():
    assert calc_framerate(1 << 20) / 1e3 == pytest.approx(11.56, rel=0.01)


def test_bandwidth_large_frames():
    assert calc_bandwidth(8192) == pytest.approx(96.97, abs=0.01)
    assert calc_bandwidth(1 << 20) == pytest.approx(calc_bandwidth(8192))


def test_overhead_regime_step():
    assert calc_bandwidth(768) == pytest.approx(80.0)
    assert calc_bandwidth(769) == pytest.approx(70.68, abs=0.01)


def test_word_alignment_variant():
    assert wire_bytes(769) == 832 + 256
    assert wire_bytes(769, word_align=False) == 769 + 256
    assert calc_bandwidth(769, word_align=False) == pytest.approx(75.02, abs=0.01)
    # sizes already on a word boundary do not care
    assert calc_bandwidth(4096, word_align=False) == calc_bandwidth(4096)


def test_bandwidth_and_rate_agree():
    for size in (64, 1000, 8192, 100000):
        assert calc_bandwidth(size) * 1e9 == pytest.approx(calc_framerate(size) * size * 8)


def test_smaller_bursts_cost_more():
    assert calc_bandwidth(65536, burst_size_max=1024) < calc_bandwidth(65536)


def test_latency_formula():
    assert calc_latency_us(8192) == pytest.approx(1.1755, abs=1e-3)
    assert calc_latency_us(64) < calc_latency_us(8192) == calc_latency_us(1 << 20)


def test_fcs_drop_probability():
    assert fcs_drop_probability(100, 0.0) == 0.0
    bits = 8 * (64 + 100 + 6 + 4)
    assert fcs_drop_probability(100, 1e-9) == pytest.approx(bits * 1e-9, rel=1e-6)
    assert 0.0 < fcs_drop_probability(8192, 1e-4) < 1.0
