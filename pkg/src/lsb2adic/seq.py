"""m-sequences over GF(p), their bit-component / LSB sequences, and b-sequences."""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import InvalidArgument, ResourceLimit
from .gf import FieldContext, mul_matrix, trace_vector
from .numtheory import is_primitive_root

MAX_PERIOD = 10**7


@dataclass(frozen=True)
class PArySequence:
    p: int
    values: np.ndarray  # one period; uint8 when p < 256, else uint16
    n: int | None = None
    beta: int | None = None

    def __post_init__(self):
        raw = np.asarray(self.values)
        if raw.ndim != 1 or (raw.size and (int(raw.max()) >= self.p or int(raw.min()) < 0)):
            raise InvalidArgument(f"values must be a 1-D vector of residues mod {self.p}")
        v = raw.astype(np.uint8 if self.p < 256 else np.uint16)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def N(self) -> int:
        return int(self.values.shape[0])

    @property
    def k(self) -> int:
        """Bits per symbol, ceil(log2 p)."""
        return (self.p - 1).bit_length()

    def counts(self) -> np.ndarray:
        return np.bincount(self.values, minlength=self.p)


@dataclass(frozen=True, eq=False)
class BinarySequence:
    """Periodic 0/1 sequence stored bit-packed, LSB-first within each byte."""

    N: int
    packed: np.ndarray
    provenance: str = "external"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        packed = np.asarray(self.packed, dtype=np.uint8)
        if self.N < 1 or packed.shape != ((self.N + 7) // 8,):
            raise InvalidArgument(f"packed buffer does not hold {self.N} bits")
        tail = self.N % 8
        if tail and packed[-1] >> tail:
            packed = packed.copy()
            packed[-1] &= (1 << tail) - 1
        packed.setflags(write=False)
        object.__setattr__(self, "packed", packed)

    @classmethod
    def from_bits(cls, bits, provenance: str = "external", **meta) -> BinarySequence:
        bits = np.asarray(bits, dtype=np.uint8)
        if bits.ndim != 1 or bits.size == 0:
            raise InvalidArgument("need a non-empty 1-D bit vector")
        if bits.max() > 1:
            raise InvalidArgument("bit vector may only hold 0 and 1")
        return cls(int(bits.size), np.packbits(bits, bitorder="little"), provenance, meta)

    @property
    def bits(self) -> np.ndarray:
        return np.unpackbits(self.packed, count=self.N, bitorder="little")

    @property
    def weight(self) -> int:
        return int(np.bitwise_count(self.packed).sum())

    def __len__(self):
        return self.N

    def __eq__(self, other):
        if not isinstance(other, BinarySequence):
            return NotImplemented
        return self.N == other.N and np.array_equal(self.packed, other.packed)

    def __hash__(self):
        return hash((self.N, self.packed.tobytes()))

    def complement(self) -> BinarySequence:
        return BinarySequence.from_bits(1 - self.bits, self.provenance, **self.meta)

    # serialization --------------------------------------------------------

    def to_raw(self) -> bytes:
        return self.packed.tobytes()

    @classmethod
    def from_raw(cls, data: bytes, N: int, provenance: str = "external") -> BinarySequence:
        packed = np.frombuffer(data, dtype=np.uint8)
        if packed.size != (N + 7) // 8:
            raise InvalidArgument(f"{packed.size} bytes cannot hold exactly {N} bits")
        return cls(N, packed.copy(), provenance)

    def to_json(self) -> dict:
        return {
            "p": self.meta.get("p"),
            "n": self.meta.get("n", "external"),
            "N": self.N,
            "beta": self.meta.get("beta"),
            "provenance": self.provenance,
            "bits_base64": base64.b64encode(self.to_raw()).decode("ascii"),
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> BinarySequence:
        if isinstance(obj, str):
            obj = json.loads(obj)
        raw = base64.b64decode(obj["bits_base64"])
        seq = cls.from_raw(raw, int(obj["N"]), obj.get("provenance", "external"))
        meta = {k: obj[k] for k in ("p", "n", "beta") if obj.get(k) is not None}
        object.__setattr__(seq, "meta", meta)
        return seq


def m_sequence(ctx: FieldContext, max_period: int = MAX_PERIOD) -> PArySequence:
    """a_t = Tr(alpha^t) for t = 0 .. p^n - 2."""
    N = ctx.N
    if N > max_period:
        raise ResourceLimit(f"period {N} exceeds the cap {max_period}")
    vals = _kernels.mseq_values(mul_matrix(ctx, ctx.alpha), trace_vector(ctx), ctx.p, N)
    return PArySequence(ctx.p, vals, ctx.n, ctx.beta)


def bit_component(seq: PArySequence, i: int, zero_as_p: bool = True) -> BinarySequence:
    """i-th bit-component (1-based). Zero is encoded by the bits of p unless
    ``zero_as_p`` is False, which is for experiments only."""
    if not 1 <= i <= seq.k:
        raise InvalidArgument(f"bit index {i} outside 1..{seq.k}")
    vals = seq.values.astype(np.int64)
    if zero_as_p:
        vals = np.where(vals == 0, seq.p, vals)
    bits = ((vals >> (i - 1)) & 1).astype(np.uint8)
    tag = "lsb" if i == 1 else f"bit-component({i})"
    meta = {"p": seq.p, "n": seq.n, "beta": seq.beta}
    if not zero_as_p:
        meta["zero_convention"] = "zero"
    return BinarySequence.from_bits(bits, tag, **meta)


def lsb_sequence(seq: PArySequence, zero_as_p: bool = True) -> BinarySequence:
    return bit_component(seq, 1, zero_as_p)


def b_sequence(p: int, beta: int) -> BinarySequence:
    """b_j = (beta^j mod p) mod 2, period p - 1."""
    if not is_primitive_root(beta, p):
        raise InvalidArgument(f"{beta} is not a primitive root mod {p}")
    powers = np.empty(p - 1, dtype=np.int64)
    x = 1
    for j in range(p - 1):
        powers[j] = x
        x = x * beta % p
    return BinarySequence.from_bits(powers & 1, "b-seq", p=p, n=1, beta=beta % p)


def cyclic_shift(seq: BinarySequence, tau: int) -> BinarySequence:
    """Left shift: out[t] = in[(t + tau) mod N]."""
    tau %= seq.N
    if tau == 0:
        return seq
    return BinarySequence.from_bits(np.roll(seq.bits, -tau), seq.provenance, **seq.meta)


def shift_offset(a: BinarySequence, b: BinarySequence) -> int | None:
    """Least tau in [0, N) with cyclic_shift(a, tau) == b, else None."""
    if a.N != b.N:
        raise InvalidArgument(f"periods differ: {a.N} vs {b.N}")
    hay = a.bits.tobytes() * 2
    pos = hay.find(b.bits.tobytes())
    return pos if 0 <= pos < a.N else None


def lsb_of(ctx: FieldContext, max_period: int = MAX_PERIOD) -> BinarySequence:
    return lsb_sequence(m_sequence(ctx, max_period))
