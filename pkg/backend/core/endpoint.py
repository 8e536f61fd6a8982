from __future__ import annotations

from typing import Dict, Optional, Tuple

from backend.physim import LinkConfig, PhyLink

from .config import EngineConfig
from .rx import RxEngine
from .stats import EngineStats
from .tx import TxEngine


class Endpoint:
    """One side of an HTSP link: a TX engine fed by its own RX's view.

    The TX publishes the RX FIFO pause mask and obeys the pause mask and link
    state the RX learned from the far side. `phy` is the outbound wire and
    `peer` the endpoint at its far end.
    """

    def __init__(self, config: EngineConfig, link: LinkConfig, name: str = "ep"):
        self.config = config.validate()
        self.link_config = link.validate()
        self.name = name
        self.stats = EngineStats(num_vc=config.tx.num_vc)
        self.rx = RxEngine(
            config.rx,
            clock_hz=link.clock_hz,
            keepalive_interval=config.tx.keepalive_interval,
            stats=self.stats,
        )
        self.tx = TxEngine(
            config.tx,
            clock_hz=link.clock_hz,
            local_pause=self.rx.local_pause_mask,
            link_state=self.rx.link_state,
            stats=self.stats,
        )
        self.phy: Optional[PhyLink] = None
        self.peer: Optional["Endpoint"] = None

    def connect(self, peer: "Endpoint", phy: PhyLink) -> None:
        self.peer = peer
        self.phy = phy

    @classmethod
    def loopback(cls, config: EngineConfig, link: LinkConfig, seed: int = 0) -> "Endpoint":
        ep = cls(config, link, name="loop")
        ep.connect(ep, PhyLink(link, seed=seed, name="loop"))
        return ep

    @classmethod
    def pair(cls, config: EngineConfig, link: LinkConfig, seed: int = 0) -> Tuple["Endpoint", "Endpoint"]:
        a = cls(config, link, name="a")
        b = cls(config, link, name="b")
        # distinct streams per direction, both derived from the run seed
        a.connect(b, PhyLink(link, seed=2 * seed, name="a->b"))
        b.connect(a, PhyLink(link, seed=2 * seed + 1, name="b->a"))
        return a, b

    def snapshot(self, now: Optional[int] = None) -> Dict[str, int]:
        out = {f"{self.name}.{k}": v for k, v in self.rx.snapshot(now).items()}
        if self.phy is not None:
            out.update(self.phy.stats.snapshot(prefix=f"{self.phy.name}.link."))
        return out
