"""PRBS testbench, profiler and benchmark scenarios for the simulated link."""
from .formulas import (
    burst_sizes,
    calc_bandwidth,
    calc_framerate,
    calc_latency_us,
    fcs_drop_probability,
    overhead_bytes,
)
from .prbs import PrbsChecker, PrbsState, bit_errors, lfsr_step, prbs_check, prbs_frame
from .profiler import LatencyProbe, ProfilerWindow, WindowReport
from .scenarios import (
    COLUMNS,
    DEFAULT_SIZES,
    BenchConfig,
    Scenario,
    iter_benchmark,
    run_benchmark,
    write_csv,
)
from .testbench import PrbsSink, PrbsSource, Testbench

__all__ = [
    "burst_sizes", "calc_bandwidth", "calc_framerate", "calc_latency_us",
    "fcs_drop_probability", "overhead_bytes",
    "PrbsChecker", "PrbsState", "bit_errors", "lfsr_step", "prbs_check", "prbs_frame",
    "LatencyProbe", "ProfilerWindow", "WindowReport",
    "COLUMNS", "DEFAULT_SIZES", "BenchConfig", "Scenario", "iter_benchmark", "run_benchmark",
    "write_csv", "PrbsSink", "PrbsSource", "Testbench",
]
