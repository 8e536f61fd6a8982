"""HTSP software stack: wire codec, VC engines, simulated PHY and benchmarks."""
