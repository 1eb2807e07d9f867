import numpy as np
import pytest

from dpnmf.data_io import synth_lowrank
from dpnmf.federation import (
    Analyst,
    AnalystMsg,
    ChannelError,
    Curator,
    CuratorMsg,
    InProcessChannel,
    ProtocolError,
    decode,
    encode,
    run_protocol,
)
from dpnmf.init import nndsvd
from dpnmf.matrix_core import Hyperparams
from dpnmf.privacy import PrivacyParams, fit_dp


def setup(n=40, iters=5, seed=0):
    v = synth_lowrank(12, n, 3, seed)[0]
    return v, Hyperparams(k=3, eta_h=10.0, eta_w=0.2, outer_iters=iters), PrivacyParams(0.5, seed=seed)


def test_message_round_trip_bit_exact(rng):
    a = rng.normal(size=(3, 3)) * 10.0 ** rng.integers(-300, 300, size=(3, 3))
    msg = CuratorMsg(4, a, rng.normal(size=(5, 3)))
    back = decode(encode(msg))
    assert back.iter == 4
    np.testing.assert_array_equal(back.a_bar, msg.a_bar)
    np.testing.assert_array_equal(back.b_bar, msg.b_bar)
    reply = decode(encode(AnalystMsg(4, rng.random((5, 3)))))
    assert isinstance(reply, AnalystMsg) and reply.w.shape == (5, 3)


def test_decode_rejects_garbage():
    with pytest.raises(ValueError):
        decode("observer 1 w 1x1 0")
    with pytest.raises(ValueError):
        decode("analyst 1 w 2x2 1 2 3")


def test_zero_rounds():
    v, hp, pp = setup(iters=0)
    w, transcript = run_protocol(v, hp, pp)
    np.testing.assert_array_equal(w, nndsvd(v, 3)[0])
    assert transcript == []


def test_transcript_shape_and_equivalence():
    v, hp, pp = setup(iters=6)
    w, transcript = run_protocol(v, hp, pp)
    roles = [line.split()[0] for line in transcript]
    assert roles == ["curator", "analyst"] * 6
    assert [int(line.split()[1]) for line in transcript] == [t for t in range(1, 7) for _ in (0, 1)]
    np.testing.assert_array_equal(w, fit_dp(v, hp, pp).w)


def test_transcript_replay_reproduces_analyst():
    v, hp, pp = setup(iters=4)
    w, transcript = run_protocol(v, hp, pp)
    analyst = Analyst(nndsvd(v, 3)[0], hp.eta_w)
    for line in transcript:
        msg = decode(line)
        if isinstance(msg, CuratorMsg):
            analyst.round(msg)
    np.testing.assert_array_equal(analyst.w, w)


def test_analyst_ignores_raw_data():
    v, hp, pp = setup(iters=3)
    curator = Curator(v, hp, pp)
    analyst = Analyst(curator.initial_dictionary(), hp.eta_w)
    msgs = []
    for t in range(1, 4):
        msg = curator.round(t)
        msgs.append(msg)
        curator.receive(analyst.round(msg))
    w_real = analyst.w
    # a decoy curator with different data; the analyst only replays the messages
    curator._v = np.zeros_like(v)
    replay = Analyst(nndsvd(v, 3)[0], hp.eta_w)
    for msg in msgs:
        replay.round(msg)
    np.testing.assert_array_equal(replay.w, w_real)


class FlakyChannel(InProcessChannel):
    def __init__(self, fail_at):
        super().__init__()
        self.fail_at = fail_at

    def send(self, line):
        if len(self.transcript) == self.fail_at:
            raise ChannelError("link down")
        super().send(line)


def test_channel_failure_reports_last_round():
    v, hp, pp = setup(iters=5)
    with pytest.raises(ProtocolError) as info:
        run_protocol(v, hp, pp, channel=FlakyChannel(fail_at=5))
    assert info.value.last_round == 2
