"""HTSP engines: the TX mux/segmenter and the RX validator/reassembler."""
from .config import ERROR_POLICIES, ConfigError, EngineConfig, RxEngineConfig, TxEngineConfig
from .endpoint import Endpoint
from .events import (
    Drop,
    DropReason,
    LinkDown,
    LinkState,
    LinkStatus,
    LinkUp,
    OpCodeEvent,
    PauseChanged,
    RxEvent,
    SegmentDelivered,
)
from .fifo import FifoOverflowError, VcRxFifo
from .rx import RxEngine
from .segment import RxFrame, RxSegment, StreamSegment
from .stats import EngineStats
from .tx import TxEngine

__all__ = [
    "ERROR_POLICIES", "ConfigError", "EngineConfig", "RxEngineConfig", "TxEngineConfig",
    "Endpoint", "Drop", "DropReason", "LinkDown", "LinkState", "LinkStatus", "LinkUp",
    "OpCodeEvent", "PauseChanged", "RxEvent", "SegmentDelivered",
    "FifoOverflowError", "VcRxFifo", "RxEngine", "RxFrame", "RxSegment", "StreamSegment",
    "EngineStats", "TxEngine",
]
