"""Curator/analyst simulation of private dictionary learning.

The curator owns V, H and R and only ever sends noise-perturbed statistics;
the analyst owns W and only ever sees those statistics.  Messages travel as
text lines over a channel, so every run leaves a replayable transcript:

    curator 3 a_bar 2x2 <4 values> b_bar 20x2 <40 values>
    analyst 3 w 20x2 <40 values>

Values are row-major, written with 17 significant digits, which reproduces
every double exactly.
"""

import collections
from dataclasses import dataclass, replace

import numpy as np

from .init import init_outliers, nndsvd
from .matrix_core import as_data_matrix
from .privacy import (
    NoisyStatistics,
    analyst_step,
    check_unit_columns,
    private_eta_w,
    release,
)
from .solver import curator_step

__all__ = [
    "AnalystMsg",
    "Analyst",
    "ChannelError",
    "Curator",
    "CuratorMsg",
    "InProcessChannel",
    "ProtocolError",
    "decode",
    "encode",
    "run_protocol",
]


class ProtocolError(RuntimeError):
    def __init__(self, message, last_round):
        super().__init__(f"{message} (last completed round: {last_round})")
        self.last_round = last_round


class ChannelError(IOError):
    pass


@dataclass
class CuratorMsg:
    iter: int
    a_bar: np.ndarray
    b_bar: np.ndarray


@dataclass
class AnalystMsg:
    iter: int
    w: np.ndarray


def _fmt_matrix(name, x):
    x = np.asarray(x, dtype=float)
    values = " ".join(format(float(e), ".17g") for e in x.ravel())
    return f"{name} {x.shape[0]}x{x.shape[1]} {values}"


def encode(msg):
    """Render a message as one transcript line (no trailing newline)."""
    if isinstance(msg, CuratorMsg):
        return " ".join([
            f"curator {msg.iter}",
            _fmt_matrix("a_bar", msg.a_bar),
            _fmt_matrix("b_bar", msg.b_bar),
        ])
    if isinstance(msg, AnalystMsg):
        return f"analyst {msg.iter} " + _fmt_matrix("w", msg.w)
    raise TypeError(f"cannot encode {type(msg).__name__}")


def _read_matrix(tokens, pos, name):
    if tokens[pos] != name:
        raise ValueError(f"expected field {name!r}, found {tokens[pos]!r}")
    rows, cols = (int(x) for x in tokens[pos + 1].split("x"))
    start = pos + 2
    values = np.array([float(t) for t in tokens[start:start + rows * cols]])
    if values.size != rows * cols:
        raise ValueError(f"field {name!r} is truncated")
    return values.reshape(rows, cols), start + rows * cols


def decode(line):
    """Parse one transcript line back into a message."""
    tokens = line.split()
    role, it = tokens[0], int(tokens[1])
    if role == "curator":
        a, pos = _read_matrix(tokens, 2, "a_bar")
        b, pos = _read_matrix(tokens, pos, "b_bar")
        msg = CuratorMsg(it, a, b)
    elif role == "analyst":
        w, pos = _read_matrix(tokens, 2, "w")
        msg = AnalystMsg(it, w)
    else:
        raise ValueError(f"unknown role tag {role!r}")
    if pos != len(tokens):
        raise ValueError("trailing tokens in message")
    return msg


class InProcessChannel:
    """Ordered, reliable in-memory queue that keeps every line it carried."""

    def __init__(self):
        self._queue = collections.deque()
        self.transcript = []

    def send(self, line):
        self.transcript.append(line)
        self._queue.append(line)

    def recv(self):
        if not self._queue:
            raise ChannelError("receive on an empty channel")
        return self._queue.popleft()


class Curator:
    """Holds the private data and the per-sample factors H and R."""

    def __init__(self, v, hp, pp):
        self._v = v
        self._hp = hp
        self._pp = pp
        self._w, self._h = nndsvd(v, hp.k)
        self._r = init_outliers(*v.shape)

    def initial_dictionary(self):
        return self._w.copy()

    def round(self, t):
        self._h, self._r = curator_step(
            self._v, self._w, self._h, self._r, self._hp, bounded=True
        )
        noisy = release(self._v, self._h, self._r, t, self._pp)
        return CuratorMsg(t, noisy.a_bar, noisy.b_bar)

    def receive(self, msg):
        self._w = msg.w


class Analyst:
    """Holds W and updates it from released statistics only."""

    def __init__(self, w0, eta_w):
        self.w = np.array(w0, dtype=float)
        self._eta_w = eta_w

    def round(self, msg):
        noisy = NoisyStatistics(msg.a_bar, msg.b_bar, np.nan, np.nan)
        self.w = analyst_step(self.w, noisy, self._eta_w)
        return AnalystMsg(msg.iter, self.w)


def run_protocol(v, hp, pp, channel=None):
    """Run the two-party protocol for ``hp.outer_iters`` rounds.

    The analyst starts from the curator's NNDSVD dictionary, handed over once
    at setup outside the channel.  Each round is one curator message followed
    by one analyst reply, each encoded to text and decoded on receipt.

    Returns ``(w_private, transcript)``; the dictionary is bit-identical to
    :func:`dpnmf.privacy.fit_dp` for the same inputs.
    """
    v = as_data_matrix(v)
    check_unit_columns(v)
    hp = replace(hp, model_outliers=pp.model_outliers)
    channel = InProcessChannel() if channel is None else channel

    curator = Curator(v, hp, pp)
    analyst = Analyst(curator.initial_dictionary(), private_eta_w(hp))

    done = 0
    for t in range(1, hp.outer_iters + 1):
        try:
            channel.send(encode(curator.round(t)))
            reply = analyst.round(decode(channel.recv()))
            channel.send(encode(reply))
            curator.receive(decode(channel.recv()))
        except (ChannelError, OSError, ValueError) as exc:
            raise ProtocolError(f"round {t} failed: {exc}", done) from exc
        done = t
    return analyst.w, list(channel.transcript)
