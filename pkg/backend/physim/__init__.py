from .config import CLOCK_PRESETS, LinkConfig, LinkConfigError
from .fcs import FCS_BYTES, fcs32
from .injector import BitErrorInjector
from .link import Delivery, LinkBusyError, LinkStats, PhyLink, SimulationAssertion
from .scheduler import EventQueue
from .timing import (
    FrameTiming,
    data_words,
    latency_model,
    max_in_flight_bytes,
    overhead_cycles,
    wire_cycles,
)

__all__ = [
    "CLOCK_PRESETS", "LinkConfig", "LinkConfigError", "FCS_BYTES", "fcs32",
    "BitErrorInjector", "Delivery", "LinkBusyError", "LinkStats", "PhyLink",
    "SimulationAssertion", "EventQueue", "FrameTiming", "data_words",
    "latency_model", "max_in_flight_bytes", "overhead_cycles", "wire_cycles",
]
