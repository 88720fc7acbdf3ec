"""Hot inner loops, each in a numba and a pure-numpy flavour.

The numba versions are used when numba imports cleanly and the environment
variable ``LSB2ADIC_DISABLE_NUMBA`` is unset or "0". Both flavours are always
importable (``*_numba`` / ``*_numpy``) so tests and the benchmark can compare
them directly; ``mseq_values`` and ``ac_profile`` are the dispatched entry points.
"""

from __future__ import annotations

import math
import os

import numpy as np

_flag = os.environ.get("LSB2ADIC_DISABLE_NUMBA", "0").strip().lower()
_DISABLED = _flag not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


BACKEND = "numba" if HAVE_NUMBA else "numpy"


# -- m-sequence generation ---------------------------------------------------
#
# State v_t is the coefficient vector of alpha^t; mult is the matrix of
# "multiply by alpha" and trvec[i] = Tr(x^i), so a_t = trvec . v_t (mod p).
# The numba path only uses the matrix for the first 2n terms; after that the
# sequence obeys the degree-n recurrence of alpha's minimal polynomial.


def _first_terms(mult, trvec, p, count):
    v = np.zeros(mult.shape[0], dtype=np.int64)
    v[0] = 1
    out = []
    for _ in range(count):
        out.append(int(trvec @ v) % p)
        v = (mult @ v) % p
    return out


def _recurrence(terms, n, p):
    """c with a_{t+n} = sum_i c_i a_{t+i}, from the Hankel system on 2n terms."""
    rows = [[terms[i + j] for j in range(n)] + [terms[i + n]] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col] % p)  # Hankel matrix is invertible
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = pow(rows[col][col], -1, p)
        rows[col] = [x * inv % p for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[col])]
    return [rows[i][n] for i in range(n)]


@njit(cache=True)
def _mseq_loop(init, coef, p, period):
    n = coef.shape[0]
    out = np.empty(period, dtype=np.uint16)
    for t in range(min(n, period)):
        out[t] = init[t]
    for t in range(n, period):
        acc = 0
        for i in range(n):
            acc += coef[i] * out[t - n + i]
        out[t] = acc % p
    return out


def mseq_numba(mult: np.ndarray, trvec: np.ndarray, p: int, period: int) -> np.ndarray:
    mult = np.asarray(mult, dtype=np.int64)
    trvec = np.asarray(trvec, dtype=np.int64)
    n = trvec.shape[0]
    terms = _first_terms(mult, trvec, p, 2 * n)
    coef = np.array(_recurrence(terms, n, p), dtype=np.int64)
    return _mseq_loop(np.array(terms[:n], dtype=np.int64), coef, int(p), int(period))


def mseq_numpy(mult: np.ndarray, trvec: np.ndarray, p: int, period: int) -> np.ndarray:
    # a_{kB+j} = (trvec A^j) . (A^{kB} v_0): two sqrt(N)-length python loops
    # and one (K x n) @ (n x B) product.
    mult = np.asarray(mult, dtype=np.int64)
    n = mult.shape[0]
    block = max(1, math.isqrt(period))
    nblocks = -(-period // block)
    rows = np.empty((block, n), dtype=np.int64)
    r = np.asarray(trvec, dtype=np.int64) % p
    for j in range(block):
        rows[j] = r
        r = (r @ mult) % p
    step = np.eye(n, dtype=np.int64)
    for _ in range(block):
        step = (step @ mult) % p
    states = np.empty((nblocks, n), dtype=np.int64)
    v = np.zeros(n, dtype=np.int64)
    v[0] = 1
    for k in range(nblocks):
        states[k] = v
        v = (step @ v) % p
    vals = (states @ rows.T) % p
    return vals.reshape(-1)[:period].astype(np.uint16)


# -- brute-force periodic autocorrelation -----------------------------------


@njit(cache=True)
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return (x * np.uint64(0x0101010101010101)) >> np.uint64(56)


@njit(cache=True)
def _ac_loop(words, n):
    # words: the bit vector repeated twice, packed LSB-first into uint64, plus
    # one zero word of padding. The shift by tau is read at word offset q, bit r.
    nw = (n + 63) // 64
    tail = n - 64 * (nw - 1)
    last_mask = np.uint64(0xFFFFFFFFFFFFFFFF) >> np.uint64(64 - tail)
    out = np.empty(n, dtype=np.int64)
    for tau in range(n):
        q = tau // 64
        r = np.uint64(tau % 64)
        diff = 0
        for w in range(nw):
            lo = words[q + w]
            if r:
                shifted = (lo >> r) | (words[q + w + 1] << (np.uint64(64) - r))
            else:
                shifted = lo
            x = words[w] ^ shifted
            if w == nw - 1:
                x &= last_mask
            diff += _popcount64(x)
        out[tau] = n - 2 * diff
    return out


def ac_profile_numba(bits: np.ndarray) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint8)
    n = bits.shape[0]
    doubled = np.concatenate([bits, bits])
    packed = np.packbits(doubled, bitorder="little")
    pad = (-packed.size) % 8 + 8
    words = np.concatenate([packed, np.zeros(pad, dtype=np.uint8)]).view("<u8")
    return _ac_loop(np.ascontiguousarray(words, dtype=np.uint64), n)


def ac_profile_numpy(bits: np.ndarray) -> np.ndarray:
    bits = np.asarray(bits, dtype=np.uint8)
    n = bits.shape[0]
    doubled = np.concatenate([bits, bits])
    out = np.empty(n, dtype=np.int64)
    for tau in range(n):
        out[tau] = n - 2 * np.count_nonzero(bits != doubled[tau:tau + n])
    return out


if HAVE_NUMBA:
    mseq_values = mseq_numba
    ac_profile = ac_profile_numba
else:
    mseq_values = mseq_numpy
    ac_profile = ac_profile_numpy
