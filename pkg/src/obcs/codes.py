"""q-ary linear codes meeting the Gilbert-Varshamov bound.

The generator is fixed one entry at a time by the method of conditional
expectations. The pessimistic estimator is the expected number of nonzero
messages whose codeword ends up lighter than ``ceil(delta * d)`` when the
undetermined entries are uniform over GF(q); it starts below 1 whenever the
GV condition holds and ``delta <= 1 - 1/q``, and never increases.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .fields import get_field

__all__ = [
    "DEFAULT_CODE_CAP",
    "QaryCode",
    "all_codewords",
    "dumps",
    "encode",
    "gv_block_length",
    "gv_code_construct",
    "loads",
    "message_digits",
    "min_distance",
    "q_entropy",
    "repetition_code",
]

DEFAULT_CODE_CAP = 10**5
TIE_TOL = 1e-12


def q_entropy(q, x):
    """q-ary entropy ``x log_q(q-1) - x log_q x - (1-x) log_q(1-x)``."""
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q}")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"q_entropy needs x in [0, 1], got {x}")
    lq = math.log(q)
    h = x * math.log(q - 1) / lq if q > 2 else 0.0
    if 0.0 < x:
        h -= x * math.log(x) / lq
    if x < 1.0:
        h -= (1.0 - x) * math.log1p(-x) / lq
    return min(max(h, 0.0), 1.0)


@dataclass(frozen=True)
class QaryCode:
    """Linear code over GF(q) given by a ``msg_len x d`` generator matrix."""

    q: int
    generator: np.ndarray = field(repr=False)
    delta: float = 0.0

    def __post_init__(self):
        g = np.array(self.generator, dtype=np.int64, ndmin=2)
        if g.ndim != 2:
            raise ValueError("generator must be 2-D")
        if np.any((g < 0) | (g >= self.q)):
            raise ValueError(f"generator symbols must lie in 0..{self.q - 1}")
        get_field(self.q)  # validates q
        g.setflags(write=False)
        object.__setattr__(self, "generator", g)

    @property
    def msg_len(self):
        return self.generator.shape[0]

    @property
    def d(self):
        return self.generator.shape[1]

    @property
    def rate(self):
        return self.msg_len / self.d

    @property
    def gf(self):
        return get_field(self.q)

    @property
    def distance_target(self):
        return _ceil_tol(self.delta * self.d)

    def __eq__(self, other):
        return (
            isinstance(other, QaryCode)
            and self.q == other.q
            and self.delta == other.delta
            and np.array_equal(self.generator, other.generator)
        )

    def __hash__(self):
        return hash((self.q, self.delta, self.generator.tobytes(), self.generator.shape))


def _ceil_tol(v):
    return int(math.ceil(v - 1e-9))


def repetition_code(q, d):
    """The ``[d, 1, d]`` repetition code."""
    return QaryCode(q, np.ones((1, d), dtype=np.int64), 1.0)


def gv_block_length(q, msg_len, delta):
    """Smallest ``d`` with ``msg_len <= (1 - H_q(delta)) * d``."""
    ceiling = 1.0 - q_entropy(q, delta)
    if ceiling <= 0.0:
        raise ValueError(
            f"no block length satisfies the GV condition: H_{q}({delta}) = {1.0 - ceiling:.6g} >= 1"
        )
    d = max(1, math.ceil(msg_len / ceiling))
    while d > 1 and msg_len <= ceiling * (d - 1):
        d -= 1
    while msg_len > ceiling * d:
        d += 1
    return d


def _tail_table(q, d, target):
    # tail[r, w] = Pr[w + Binomial(r, (q-1)/q) < target]
    p = (q - 1) / q
    tail = np.zeros((d + 1, d + 2))
    pmf = np.array([1.0])
    for r in range(d + 1):
        if r:
            nxt = np.zeros(r + 1)
            nxt[:-1] += pmf * (1.0 - p)
            nxt[1:] += pmf * p
            pmf = nxt
        cdf = np.cumsum(pmf)
        for w in range(d + 2):
            j = target - w - 1  # need Binomial <= j
            if j >= 0:
                tail[r, w] = cdf[min(j, r)]
    return tail


def gv_code_construct(q, msg_len, delta, cap=DEFAULT_CODE_CAP, backend=None):
    """Deterministic GV-bound code of dimension ``msg_len`` and relative distance ``delta``.

    The block length is the smallest one the GV condition admits. Ties in
    the greedy go to the smallest field element. Raises ``ValueError`` when
    the condition is infeasible, when ``q**msg_len`` exceeds ``cap``, or when
    the greedy ends with a light codeword (possible only for
    ``delta > 1 - 1/q``).
    """
    if msg_len < 1:
        raise ValueError(f"msg_len must be >= 1, got {msg_len}")
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must lie in [0, 1], got {delta}")
    F = get_field(q)
    if q**msg_len > cap:
        raise ValueError(f"q**msg_len = {q}**{msg_len} exceeds the enumeration cap {cap}")
    d = gv_block_length(q, msg_len, delta)
    target = _ceil_tol(delta * d)
    tail = _tail_table(q, d, target)
    impl = backend or kernels
    gen, weights = impl.gv_greedy(int(q), int(msg_len), int(d), F.add_table, F.mul_table, tail, TIE_TOL)
    light = int(np.count_nonzero(weights[1:] < target))
    if light:
        raise ValueError(
            f"greedy left {light} nonzero codewords below weight {target} "
            f"(delta={delta} exceeds 1 - 1/q = {1 - 1 / q:.4g})"
        )
    return QaryCode(q, gen, float(delta))


def message_digits(q, msg_len, cap=DEFAULT_CODE_CAP):
    """All messages in lexicographic order as a ``(q**msg_len, msg_len)`` array."""
    n_msg = q**msg_len
    if n_msg > cap:
        raise ValueError(f"q**msg_len = {q}**{msg_len} exceeds the enumeration cap {cap}")
    u = np.arange(n_msg, dtype=np.int64)
    digits = np.empty((n_msg, msg_len), dtype=np.int64)
    for t in range(msg_len - 1, -1, -1):
        digits[:, t] = u % q
        u //= q
    return digits


def encode(code, message):
    message = np.asarray(message, dtype=np.int64)
    if message.shape != (code.msg_len,):
        raise ValueError(f"message must have length {code.msg_len}, got shape {message.shape}")
    if np.any((message < 0) | (message >= code.q)):
        raise ValueError(f"message symbols must lie in 0..{code.q - 1}")
    return code.gf.matmul(message, code.generator)


def all_codewords(code, cap=DEFAULT_CODE_CAP):
    """Codewords of every message, rows in lexicographic message order."""
    return code.gf.matmul(message_digits(code.q, code.msg_len, cap), code.generator)


def min_distance(code, cap=DEFAULT_CODE_CAP):
    """Exhaustive minimum weight over nonzero codewords."""
    words = all_codewords(code, cap)[1:]
    if words.shape[0] == 0:
        return code.d
    return int(np.count_nonzero(words, axis=1).min())


def dumps(code):
    lines = [f"{code.q} {code.msg_len} {code.d} {code.delta!r}"]
    lines += [" ".join(str(int(v)) for v in row) for row in code.generator]
    return "\n".join(lines) + "\n"


def loads(text):
    rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
    if not rows or len(rows[0]) != 4:
        raise ValueError("code header must be 'q msg_len d delta'")
    q, msg_len, d = (int(v) for v in rows[0][:3])
    delta = float(rows[0][3])
    gen = np.array([[int(v) for v in r] for r in rows[1:]], dtype=np.int64)
    if gen.shape != (msg_len, d):
        raise ValueError(f"expected a {msg_len}x{d} generator, got {gen.shape}")
    return QaryCode(q, gen, delta)
