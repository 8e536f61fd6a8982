import pytest

from backend.codec import FrameKind, PauseMask, parse_frame, serialize_frame
from backend.core import LinkState, LinkStatus, TxEngine, TxEngineConfig


class Pause:
    "Settable stand-in for the local RX FIFO pause mask"

    def __init__(self):
        self.mask = PauseMask()

    def __call__(self):
        return self.mask


def make_tx(num_vc=1, up=True, **kw):
    pause = Pause()
    link = LinkState(state=LinkStatus.UP if up else LinkStatus.DOWN)
    tx = TxEngine(TxEngineConfig(num_vc=num_vc, **kw), clock_hz=1e6, local_pause=pause, link_state=link)
    return tx, pause, link


def drain(tx, now=0):
    frames = []
    while tx.has_pending():
        frames.append(tx.tx_next_frame(now))
    return frames


def test_segmentation_20000_bytes():
    tx, _, _ = make_tx()
    tx.tx_next_frame(0)                          # first call is the link keepalive slot
    assert tx.tx_push(0, bytes(20000), tuser_first=9, tuser_last=3)
    frames = drain(tx)
    assert [len(f.payload) for f in frames] == [8192, 8192, 3616]
    assert [f.footer.tlast for f in frames] == [False, False, True]
    assert [f.header.tuser_first for f in frames] == [9, 0, 0]
    assert [f.footer.tuser_last for f in frames] == [0, 0, 3]
    assert frames[-1].footer.tkeep_last == 3616 - 56 * 64


def test_tid_increments_and_wraps():
    tx, _, _ = make_tx(burst_size_max=64)
    tx.tx_push(0, bytes(64 * 300 // 2))
    tx.tx_push(0, bytes(64 * 300 // 2))
    tids = [f.header.tid for f in drain(tx)]
    assert tids[:3] == [0, 1, 2]
    assert tids[255:258] == [255, 0, 1]


def test_round_robin_interleaves_vcs():
    tx, _, _ = make_tx(num_vc=3, burst_size_max=64)
    for vc in range(3):
        tx.tx_push(vc, bytes(128))
    assert [f.header.vc for f in drain(tx)] == [0, 1, 2, 0, 1, 2]


def test_remote_pause_isolates_vc():
    tx, _, link = make_tx(num_vc=2)
    link.remote_pause = PauseMask(0b01)
    tx.tx_push(0, bytes(100))
    tx.tx_push(1, bytes(100))
    f = tx.tx_next_frame(0)
    assert f.header.vc == 1
    nxt = tx.tx_next_frame(0)
    assert nxt is None or nxt.kind is FrameKind.HEADER_ONLY
    link.remote_pause = PauseMask()
    assert tx.tx_next_frame(1).header.vc == 0


def test_backpressure_when_queue_full():
    tx, _, _ = make_tx(queue_depth=2)
    assert tx.tx_push(0, b"a") and tx.tx_push(0, b"b")
    assert not tx.tx_push(0, b"c")
    assert tx.stats.tx_rejected == 1


def test_push_validation():
    tx, _, _ = make_tx()
    with pytest.raises(ValueError):
        tx.tx_push(1, b"x")
    with pytest.raises(ValueError):
        tx.tx_push(0, b"")
    with pytest.raises(ValueError):
        tx.tx_push(0, b"x", tuser_last=0x80)


def test_keepalive_on_idle_link():
    tx, pause, _ = make_tx(keepalive_interval=100e-6)     # 100 cycles at 1 MHz
    first = tx.tx_next_frame(0)
    assert first.kind is FrameKind.HEADER_ONLY
    assert tx.tx_next_frame(50) is None
    assert tx.next_keepalive() == 100
    ka = tx.tx_next_frame(100)
    assert ka.kind is FrameKind.HEADER_ONLY and ka.header.tid == 1


def test_no_payload_while_link_down():
    tx, _, link = make_tx(up=False)
    tx.tx_push(0, bytes(64))
    assert tx.tx_next_frame(0).kind is FrameKind.HEADER_ONLY
    assert tx.tx_next_frame(1) is None
    link.state = LinkStatus.UP
    assert tx.tx_next_frame(2).kind is FrameKind.FULL


def test_pause_change_publishes_header_only():
    tx, pause, _ = make_tx(num_vc=2)
    tx.tx_next_frame(0)
    pause.mask = PauseMask(0b10)
    assert tx.wants_to_send(1)
    f = tx.tx_next_frame(1)
    assert f.kind is FrameKind.HEADER_ONLY and f.header.pause == PauseMask(0b10)
    assert tx.stats.tx_pause_updates == 1
    assert tx.tx_next_frame(2) is None


def test_footer_latches_pause_at_emission():
    tx, pause, _ = make_tx(num_vc=2)
    tx.tx_next_frame(0)
    tx.tx_push(0, bytes(4096))
    f = tx.tx_next_frame(1)
    assert f.footer.pause == PauseMask()
    pause.mask = PauseMask(0b10)
    latched = tx.latch_footer_pause(f)
    assert latched.header.pause == PauseMask() and latched.footer.pause == PauseMask(0b10)
    assert parse_frame(serialize_frame(latched)).footer.pause == PauseMask(0b10)
    assert not tx.pause_dirty()


def test_opcode_is_one_shot_and_userdata_is_level():
    tx, _, _ = make_tx()
    tx.tx_set_userdata(0xABC)
    tx.tx_set_opcode(0x1234)
    f1 = tx.tx_next_frame(0)
    assert f1.header.opcode_en == 1 and f1.header.opcode_data == 0x1234
    assert f1.header.user_data == 0xABC
    tx.tx_push(0, bytes(64))
    f2 = tx.tx_next_frame(1)
    assert f2.header.opcode_en == 0 and f2.header.user_data == 0xABC


def test_pending_opcode_sent_without_waiting_for_keepalive():
    tx, _, _ = make_tx()
    tx.tx_next_frame(0)
    tx.tx_set_opcode(7)
    f = tx.tx_next_frame(1)
    assert f.kind is FrameKind.HEADER_ONLY and f.header.opcode_en == 1


def test_opcode_overwrite_is_counted():
    tx, _, _ = make_tx()
    tx.tx_set_opcode(1)
    tx.tx_set_opcode(2)
    assert tx.stats.tx_opcodes_dropped == 1
    assert tx.tx_next_frame(0).header.opcode_data == 2


def test_every_frame_encodes():
    tx, _, _ = make_tx(num_vc=4)
    for vc in range(4):
        tx.tx_push(vc, bytes(range(256)) * 40)
    for f in drain(tx):
        assert parse_frame(serialize_frame(f)) == f
