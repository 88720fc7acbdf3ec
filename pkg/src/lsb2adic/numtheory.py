"""Integer primitives: modular powers, primality, factoring, orders, discrete logs."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BudgetExceeded, InvalidArgument

TRIAL_LIMIT = 10**6
RHO_ITERATION_CAP = 10**8

# deterministic for every n < 3.3e24, which covers 2^64
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_EXTRA_ROUNDS = 64
_MR_SEED = 0x5EED


@dataclass(frozen=True)
class Factorization:
    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for q, e in self.factors:
            if q <= last or e < 1:
                raise InvalidArgument(f"malformed factor list {self.factors}")
            prod *= q**e
            last = q
        if prod != self.value:
            raise InvalidArgument(f"factors multiply to {prod}, not {self.value}")

    @property
    def primes(self) -> list[int]:
        return [q for q, _ in self.factors]

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def euler_phi(self) -> int:
        out = 1
        for q, e in self.factors:
            out *= (q - 1) * q ** (e - 1)
        return out


def mod_pow(base: int, exp: int, modulus: int) -> int:
    if modulus < 2:
        raise InvalidArgument(f"modulus must be >= 2, got {modulus}")
    if exp < 0:
        raise InvalidArgument("negative exponent")
    return pow(base, exp, modulus)


def _mr_round(n: int, d: int, s: int, a: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin; exact below 2^64, error below 2^-128 above it.

    The extra bases used past 2^64 come from a fixed-seed generator so the
    answer is reproducible run to run.
    """
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_mr_round(n, d, s, a) for a in _MR_BASES):
        return False
    if n < 1 << 64:
        return True
    rng = random.Random(_MR_SEED)
    return all(_mr_round(n, d, s, rng.randrange(2, n - 1)) for _ in range(_MR_EXTRA_ROUNDS))


@lru_cache(maxsize=1)
def _small_primes() -> np.ndarray:
    sieve = np.ones(TRIAL_LIMIT + 1, dtype=bool)
    sieve[:2] = False
    for q in range(2, math.isqrt(TRIAL_LIMIT) + 1):
        if sieve[q]:
            sieve[q * q :: q] = False
    return np.flatnonzero(sieve).astype(np.int64)


def _trial_divide(n: int) -> tuple[dict[int, int], int]:
    """Strip every prime factor below TRIAL_LIMIT; returns (factors, cofactor)."""
    primes = _small_primes()
    if n < 1 << 62:
        hits = [int(q) for q in primes[np.int64(n) % primes == 0]]
    else:
        hits = [int(q) for q in primes if n % int(q) == 0]
    found: dict[int, int] = {}
    for q in hits:
        while n % q == 0:
            n //= q
            found[q] = found.get(q, 0) + 1
    return found, n


def pollard_brent(n: int, c: int, cap: int = RHO_ITERATION_CAP) -> int | None:
    """One Brent-cycle rho run with f(x) = x^2 + c, starting at x = 2.

    Returns a nontrivial factor, or None when the run degenerates (caller
    retries with the next c). Raises BudgetExceeded past ``cap`` steps.
    """
    if n % 2 == 0:
        return 2
    y, r, q, g = 2, 1, 1, 1
    m = 128
    x = ys = y
    steps = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        steps += r
        if steps > cap:
            raise BudgetExceeded(f"Pollard rho exceeded {cap} iterations on {n}")
        r *= 2
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return None if g == n else g


def _split(n: int, cap: int) -> list[int]:
    if n == 1:
        return []
    if is_prime(n):
        return [n]
    r = math.isqrt(n)
    if r * r == n:
        return _split(r, cap) * 2
    c = 1
    while True:
        d = pollard_brent(n, c, cap)
        if d is not None:
            return _split(d, cap) + _split(n // d, cap)
        c += 1


def factorize(n: int, rho_cap: int = RHO_ITERATION_CAP) -> Factorization:
    if n < 2:
        raise InvalidArgument(f"factorize needs n >= 2, got {n}")
    found, rem = _trial_divide(n)
    for q in _split(rem, rho_cap):
        found[q] = found.get(q, 0) + 1
    return Factorization(n, tuple(sorted(found.items())))


def mult_order(a: int, modulus: int, group_order: int) -> int:
    """Least d > 0 with a^d = 1 (mod modulus).

    ``group_order`` must be a multiple of the true order (p - 1 for a prime
    modulus, phi(m) in general); its prime factors are stripped one at a time.
    """
    if math.gcd(a, modulus) != 1:
        raise InvalidArgument(f"gcd({a}, {modulus}) != 1")
    if pow(a, group_order, modulus) != 1 % modulus:
        raise InvalidArgument(f"{group_order} is not a multiple of the order of {a}")
    d = group_order
    if d == 1:
        return 1
    for q, _ in factorize(group_order).factors:
        while d % q == 0 and pow(a, d // q, modulus) == 1 % modulus:
            d //= q
    return d


@lru_cache(maxsize=4096)
def _prime_divisors(m: int) -> tuple[int, ...]:
    return tuple(factorize(m).primes)


def is_primitive_root(g: int, p: int) -> bool:
    g %= p
    if g == 0:
        return False
    if p == 2:
        return g == 1
    return all(pow(g, (p - 1) // q, p) != 1 for q in _prime_divisors(p - 1))


def least_primitive_root(p: int) -> int:
    for g in range(1, p):
        if is_primitive_root(g, p):
            return g
    raise InvalidArgument(f"{p} has no primitive root")


def primitive_roots(p: int) -> list[int]:
    return [g for g in range(1, p) if is_primitive_root(g, p)]


def discrete_log(base: int, target: int, p: int) -> int | None:
    """Least e >= 0 with base^e = target (mod p) by baby-step/giant-step.

    Returns None when target is not in the subgroup generated by base.
    """
    base %= p
    target %= p
    if target == 1:
        return 0
    if base == 0 or target == 0:
        return None
    m = math.isqrt(p - 1) + 1
    baby: dict[int, int] = {}
    cur = 1
    for j in range(m):
        baby.setdefault(cur, j)
        cur = cur * base % p
    giant = pow(base, -m, p)
    gamma = target
    for i in range(m + 1):
        j = baby.get(gamma)
        if j is not None:
            return i * m + j
        gamma = gamma * giant % p
    return None


def odd_primes(lo: int, hi: int) -> list[int]:
    """Odd primes p with lo <= p <= hi."""
    return [q for q in range(max(lo, 3), hi + 1) if q % 2 and is_prime(q)]
