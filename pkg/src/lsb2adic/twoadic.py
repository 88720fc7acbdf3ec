"""2-adic complexity: exact values, the gcd identities behind the lower bounds, and the bounds.

S(2) = sum s_t 2^t and T(1/2) = sum (-1)^{s_t} 2^{-t} are handled as residues
modulo 2^N - 1, where 2^{-1} = 2^{N-1}. Reductions modulo the two coprime
halves 2^{N/2} + 1 and 2^{N/2} - 1 fold the integer in N/2-bit chunks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .autocorr import AcProfile
from .errors import InvalidArgument, ResourceLimit, UnsupportedPrime
from .seq import BinarySequence

MAX_BITS = 2_000_000
HEURISTIC_CAP = 32
SUPPORTED = (3, 5, 7, 11, 17, 31)


def s_of_two(seq: BinarySequence) -> int:
    """S(2) = sum s_t 2^t, read straight off the LSB-first packed buffer."""
    return int.from_bytes(seq.packed.tobytes(), "little")


def _reversed_value(seq: BinarySequence) -> int:
    # sum_t s_t 2^((N - t) mod N): bit order s_0, s_{N-1}, ..., s_1
    bits = np.roll(seq.bits[::-1], 1)
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


def t_inverse_mod(seq: BinarySequence) -> int:
    """T(2^{-1}) reduced into [0, 2^N - 1).

    sum_t (1 - 2 s_t) 2^((N-t) mod N); the all-ones part is 2^N - 1 = 0, so
    only -2 * sum_t s_t 2^((N-t) mod N) survives.
    """
    N = seq.N
    if N < 2:
        raise InvalidArgument("T(2^{-1}) needs N >= 2")
    m = (1 << N) - 1
    return (-2 * _reversed_value(seq)) % m


def _mod_mersenne(x: int, N: int) -> int:
    """x mod 2^N - 1 for x >= 0, by folding N-bit chunks."""
    m = (1 << N) - 1
    while x > m:
        x = (x & m) + (x >> N)
    return 0 if x == m else x


def _fold(x: int, h: int, sign: int) -> int:
    """x mod 2^h + 1 (sign=+1) or 2^h - 1 (sign=-1), x >= 0.

    Chunks of h bits alternate in sign for the + modulus since 2^h = -1.
    """
    mod = (1 << h) + sign
    mask = (1 << h) - 1
    acc = 0
    k = 0
    while x:
        chunk = x & mask
        acc += -chunk if (sign == 1 and k & 1) else chunk
        x >>= h
        k += 1
    return acc % mod


def hu_sides(seq: BinarySequence, profile: AcProfile) -> tuple[int, int]:
    """Both sides of -2 S(x) T(x^{-1}) = N + sum_{tau>=1} AC(tau) x^tau - T(x^{-1}) sum_t x^t
    at x = 2, reduced mod 2^N - 1."""
    N = seq.N
    if profile.N != N:
        raise InvalidArgument(f"profile period {profile.N} != sequence period {N}")
    if N == 1:
        return 0, 0  # everything is 0 mod 2^1 - 1
    m = (1 << N) - 1
    S = s_of_two(seq)
    T = t_inverse_mod(seq)
    lhs = (-2 * S * T) % m
    # sum AC(tau) 2^tau, grouped by value so each group is a single bit mask
    vals = np.asarray(profile.values, dtype=np.int64).copy()
    vals[0] = 0
    corr = 0
    for v in np.unique(vals):
        if v == 0:
            continue
        mask = np.packbits((vals == v).astype(np.uint8), bitorder="little")
        corr += int(v) * int.from_bytes(mask.tobytes(), "little")
    rhs = (N + corr - T * m) % m
    return lhs, rhs


def hu_congruence_check(seq: BinarySequence, profile: AcProfile) -> bool:
    lhs, rhs = hu_sides(seq, profile)
    return lhs == rhs


def _check_budget(N: int, max_bits: int) -> None:
    if N > max_bits:
        raise ResourceLimit(f"N={N} exceeds the bit budget {max_bits}")


def exact_phi2(seq: BinarySequence, max_bits: int = MAX_BITS) -> int:
    """floor(log2((2^N - 1) / gcd(2^N - 1, S(2))))."""
    _check_budget(seq.N, max_bits)
    m = (1 << seq.N) - 1
    q = m // math.gcd(m, s_of_two(seq))
    return q.bit_length() - 1  # q is never a power of two above 1, it is odd


def g_full(seq: BinarySequence, max_bits: int = MAX_BITS) -> int:
    """gcd(S(2) T(2^{-1}) mod 2^N - 1, 2^N - 1)."""
    _check_budget(seq.N, max_bits)
    N = seq.N
    m = (1 << N) - 1
    prod = _mod_mersenne(s_of_two(seq) * t_inverse_mod(seq), N)
    return math.gcd(prod, m)


def gcd_halves(seq: BinarySequence, max_bits: int = MAX_BITS) -> tuple[int, int]:
    """(gcd with 2^{N/2} + 1, gcd with 2^{N/2} - 1) of S(2) T(2^{-1})."""
    N = seq.N
    if N % 2:
        raise InvalidArgument(f"N={N} is odd; the halves 2^(N/2) +- 1 do not exist")
    _check_budget(N, max_bits)
    h = N // 2
    S = s_of_two(seq)
    T = t_inverse_mod(seq)
    out = []
    for sign in (1, -1):
        mod = (1 << h) + sign
        r = _fold(_fold(S, h, sign) * _fold(T, h, sign), h, sign)
        out.append(math.gcd(r, mod))
    return out[0], out[1]


# -- predicted gcds -------------------------------------------------------------


def _geom(M: int, k: int) -> int:
    """(2^{kM} - 1) / (2^M - 1) = 1 + 2^M + ... + 2^{(k-1)M}."""
    return sum(1 << (i * M) for i in range(k))


def predicted_gcd_halves(p: int, n: int) -> tuple[int, int]:
    """Case tables for (plus half, minus half). The minus half carries the
    (2^{N/2}-1)/(2^M-1) factor; the plus half is a small constant."""
    if p not in SUPPORTED:
        raise UnsupportedPrime(f"no gcd case table for p={p}")
    if n < 2:
        raise InvalidArgument("case tables assume n >= 2")
    N = p**n - 1
    M = N // (p - 1)
    core = _geom(M, (p - 1) // 2)
    odd = n % 2 == 1
    if p == 3:
        plus = 3 if odd else 1
        minus = 3 if (not odd and n != 2) else 1
    elif p == 5:
        plus = 5 if odd else 1
        minus = core * (5 if n % 4 == 0 else 1)
    elif p == 7:
        plus = 1
        minus = core * (7 if n % 3 == 0 else 1) * (3 if not odd else 1)
    elif p == 11:
        plus = 33 if odd else 1
        minus = core * (5 if not odd else 1) * (11 if n % 10 == 0 else 1)
    elif p == 17:
        plus = 1
        minus = core * (17 if n % 8 == 0 else 1)
    else:  # 31
        plus = 9 if n % 6 == 3 else (3 if odd else 1)
        minus = core * (15 if not odd else 1) * (31 if n % 5 == 0 else 1)
    return plus, minus


def predicted_gcd(p: int, n: int, M: int | None = None) -> int:
    """Predicted gcd(S(2) T(2^{-1}), 2^N - 1) as plus-half times minus-half."""
    if M is not None and M != (p**n - 1) // (p - 1):
        raise InvalidArgument(f"M={M} does not match p={p}, n={n}")
    plus, minus = predicted_gcd_halves(p, n)
    return plus * minus


# -- theorem bounds -------------------------------------------------------------


@dataclass(frozen=True)
class BoundCase:
    label: str
    applies: Callable[[int], bool]
    constant: int
    note: str = ""


@dataclass(frozen=True)
class BoundFormula:
    """Phi_2 >= coefficient * N - constant, with the constant picked by n."""

    p: int
    coefficient: Fraction
    cases: tuple[BoundCase, ...]

    @property
    def worst_constant(self) -> int:
        return max(c.constant for c in self.cases)

    def case_for(self, n: int) -> BoundCase:
        for c in self.cases:
            if c.applies(n):
                return c
        raise InvalidArgument(f"no case matches n={n} for p={self.p}")  # tables are exhaustive

    def value(self, n: int) -> int:
        N = self.p**n - 1
        return math.floor(self.coefficient * N) - self.case_for(n).constant


def _always(_n):
    return True


BOUNDS: dict[int, BoundFormula] = {
    3: BoundFormula(3, Fraction(1), (BoundCase("all n", _always, 3),)),
    5: BoundFormula(5, Fraction(3, 4), (
        BoundCase("n = 2 mod 4", lambda n: n % 4 == 2, 2),
        BoundCase("otherwise", _always, 5),
    )),
    7: BoundFormula(7, Fraction(2, 3), (
        BoundCase("n = 0 mod 6", lambda n: n % 6 == 0, 7),
        BoundCase("n even, n != 0 mod 3", lambda n: n % 2 == 0, 4),
        BoundCase("n = 0 mod 3, n odd", lambda n: n % 3 == 0, 5),
        BoundCase("otherwise", _always, 2),
    )),
    11: BoundFormula(11, Fraction(3, 5), (
        BoundCase("n odd", lambda n: n % 2 == 1, 8),
        BoundCase("n = 0 mod 10", lambda n: n % 10 == 0, 8),
        BoundCase("n even, n != 0 mod 10", _always, 5,
                  note="3N/5-4 is derivable here; the weaker stated 3N/5-5 is used"),
    )),
    17: BoundFormula(17, Fraction(9, 16), (
        BoundCase("n = 0 mod 8", lambda n: n % 8 == 0, 7),
        BoundCase("n != 0 mod 8", _always, 2),
    )),
    31: BoundFormula(31, Fraction(8, 15), (
        BoundCase("n = 0 mod 10", lambda n: n % 10 == 0, 10),
        BoundCase("n even, n != 0 mod 5", lambda n: n % 2 == 0, 5),
        BoundCase("n = 0 mod 5, n = 3 mod 6", lambda n: n % 5 == 0 and n % 6 == 3, 10),
        BoundCase("n != 0 mod 5, n = 3 mod 6", lambda n: n % 6 == 3, 5),
        BoundCase("n odd, n = 0 mod 5, n != 3 mod 6", lambda n: n % 5 == 0, 8),
        BoundCase("n odd, n != 0 mod 5, n != 3 mod 6", _always, 3),
    )),
}


def bound_formula(p: int) -> BoundFormula:
    try:
        return BOUNDS[p]
    except KeyError:
        raise UnsupportedPrime(f"no lower-bound theorem for p={p}") from None


def theorem_bound(p: int, n: int, N: int | None = None) -> int:
    if n < 1:
        raise InvalidArgument(f"n must be positive, got {n}")
    if N is not None and N != p**n - 1:
        raise InvalidArgument(f"N={N} does not match p={p}, n={n}")
    return bound_formula(p).value(n)


def conjecture_main(p: int, N: int) -> int:
    """ceil((p+1) N / (2(p-1)))."""
    return -(-(p + 1) * N // (2 * (p - 1)))


@dataclass
class ConjectureReport:
    p: int
    n: int
    N: int
    phi2: int
    main: int
    slack: int
    cap: int
    cap_source: str  # "theorem" or "heuristic"

    @property
    def ok(self) -> bool:
        return self.slack >= -self.cap

    def to_json(self) -> dict:
        return dict(self.__dict__, ok=self.ok)


def conjecture_check(seq: BinarySequence, p: int, n: int, c_cap: int | None = None,
                     max_bits: int = MAX_BITS) -> ConjectureReport:
    if seq.N != p**n - 1:
        raise InvalidArgument(f"sequence period {seq.N} != {p}^{n} - 1")
    if c_cap is not None:
        cap, source = c_cap, "given"
    elif p in BOUNDS:
        cap, source = BOUNDS[p].worst_constant, "theorem"
    else:
        cap, source = HEURISTIC_CAP, "heuristic"
    phi2 = exact_phi2(seq, max_bits)
    main = conjecture_main(p, seq.N)
    return ConjectureReport(p, n, seq.N, phi2, main, phi2 - main, cap, source)


# -- combined report ------------------------------------------------------------


@dataclass
class TwoAdicReport:
    p: int
    n: int
    N: int
    M: int
    beta: int | None
    S2: int
    g_full: int
    g_plus: int
    g_minus: int
    phi2_exact: int
    bound_value: int | None
    predicted_plus: int | None = None
    predicted_minus: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def gcd_ok(self) -> bool | None:
        if self.predicted_plus is None:
            return None
        return (self.g_plus, self.g_minus) == (self.predicted_plus, self.predicted_minus)

    @property
    def bound_ok(self) -> bool | None:
        return None if self.bound_value is None else self.phi2_exact >= self.bound_value

    @property
    def slack(self) -> int | None:
        return None if self.bound_value is None else self.phi2_exact - self.bound_value

    @property
    def verdict(self) -> str:
        if self.bound_value is None:
            return "exploratory"
        return "pass" if self.gcd_ok and self.bound_ok else "fail"

    def invariant_violations(self) -> list[str]:
        bad = []
        m = (1 << self.N) - 1
        if self.g_plus * self.g_minus != self.g_full:
            bad.append("g_plus * g_minus != g_full")
        if self.g_full % math.gcd(m, self.S2):
            bad.append("gcd(2^N-1, S(2)) does not divide g_full")
        if self.phi2_exact < (m // self.g_full).bit_length() - 1:
            bad.append("phi2 below the log of (2^N-1)/g_full")
        return bad

    def to_json(self) -> dict:
        hx = lambda v: None if v is None else hex(v)  # noqa: E731
        return {
            "p": self.p, "n": self.n, "N": self.N, "M": self.M, "beta": self.beta,
            "S2": hx(self.S2), "g_full": hx(self.g_full),
            "g_plus": hx(self.g_plus), "g_minus": hx(self.g_minus),
            "predicted_plus": hx(self.predicted_plus), "predicted_minus": hx(self.predicted_minus),
            "phi2_exact": self.phi2_exact, "bound_value": self.bound_value, "slack": self.slack,
            "gcd_ok": self.gcd_ok, "bound_ok": self.bound_ok, "verdict": self.verdict,
            "notes": list(self.notes),
        }


def two_adic_report(seq: BinarySequence, p: int, n: int, beta: int | None = None,
                    max_bits: int = MAX_BITS) -> TwoAdicReport:
    N = seq.N
    if N != p**n - 1:
        raise InvalidArgument(f"sequence period {N} != {p}^{n} - 1")
    _check_budget(N, max_bits)
    M = N // (p - 1)
    g_plus, g_minus = gcd_halves(seq, max_bits)
    notes = []
    bound = pplus = pminus = None
    if p in SUPPORTED and n >= 2:
        pplus, pminus = predicted_gcd_halves(p, n)
        case = BOUNDS[p].case_for(n)
        bound = theorem_bound(p, n)
        if case.note:
            notes.append(case.note)
        if p in (17, 31) and beta != 3:
            notes.append(f"beta={beta}; the case tables for p={p} assume beta=3")
    rep = TwoAdicReport(p, n, N, M, beta, s_of_two(seq), g_plus * g_minus, g_plus, g_minus,
                        exact_phi2(seq, max_bits), bound, pplus, pminus, notes)
    bad = rep.invariant_violations()
    if bad:
        rep.notes.extend("invariant: " + b for b in bad)
    return rep
