"""GF(p) and GF(p^n) arithmetic with dense coefficient vectors, and the trace map."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidArgument
from .numtheory import (
    Factorization,
    discrete_log,
    factorize,
    is_prime,
    is_primitive_root,
    least_primitive_root,
)


@dataclass(frozen=True)
class ExtFieldElement:
    """Element of GF(p^n); ``coeffs[i]`` multiplies x^i."""

    coeffs: tuple[int, ...]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    @property
    def is_constant(self) -> bool:
        return not any(self.coeffs[1:])


def _mulmod(a, b, modulus, p):
    n = len(modulus) - 1
    prod = [0] * (2 * n - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k] % p
        if c:
            base = k - n
            for i in range(n):
                prod[base + i] -= c * modulus[i]
    return tuple(v % p for v in prod[:n])


def _powmod(a, e, modulus, p):
    n = len(modulus) - 1
    result = (1,) + (0,) * (n - 1)
    while e:
        if e & 1:
            result = _mulmod(result, a, modulus, p)
        e >>= 1
        if e:
            a = _mulmod(a, a, modulus, p)
    return result


@dataclass(frozen=True)
class FieldContext:
    p: int
    n: int
    modulus_poly: tuple[int, ...]  # length n+1, monic, low degree first
    alpha: ExtFieldElement
    order_factorization: Factorization
    alpha_exponent: int = 1  # alpha = (class of x)^alpha_exponent
    _one: ExtFieldElement = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_one", ExtFieldElement((1,) + (0,) * (self.n - 1)))

    @property
    def N(self) -> int:
        return self.p**self.n - 1

    @property
    def M(self) -> int:
        return self.N // (self.p - 1)

    @property
    def beta(self) -> int:
        b = self.pow(self.alpha, self.M)
        if not b.is_constant:
            raise InvalidArgument("alpha^M fell outside GF(p); context is corrupt")
        return b.coeffs[0]

    @property
    def one(self) -> ExtFieldElement:
        return self._one

    def element(self, coeffs) -> ExtFieldElement:
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != self.n:
            raise InvalidArgument(f"need {self.n} coefficients, got {len(coeffs)}")
        if any(c < 0 or c >= self.p for c in coeffs):
            raise InvalidArgument(f"coefficients must lie in [0, {self.p})")
        return ExtFieldElement(coeffs)

    def constant(self, c: int) -> ExtFieldElement:
        return ExtFieldElement((c % self.p,) + (0,) * (self.n - 1))

    def add(self, x: ExtFieldElement, y: ExtFieldElement) -> ExtFieldElement:
        return ExtFieldElement(tuple((a + b) % self.p for a, b in zip(x, y)))

    def scale(self, c: int, x: ExtFieldElement) -> ExtFieldElement:
        return ExtFieldElement(tuple(c * a % self.p for a in x))

    def mul(self, x: ExtFieldElement, y: ExtFieldElement) -> ExtFieldElement:
        return ExtFieldElement(_mulmod(x.coeffs, y.coeffs, self.modulus_poly, self.p))

    def pow(self, x: ExtFieldElement, e: int) -> ExtFieldElement:
        if e < 0:
            x = self.inv(x)
            e = -e
        return ExtFieldElement(_powmod(x.coeffs, e, self.modulus_poly, self.p))

    def inv(self, x: ExtFieldElement) -> ExtFieldElement:
        if not any(x.coeffs):
            raise ZeroDivisionError("zero has no inverse")
        return self.pow(x, self.N - 1)

    def alpha_power(self, t: int) -> ExtFieldElement:
        return self.pow(self.alpha, t % self.N)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "modulus_poly": list(self.modulus_poly),
            "alpha_exponent_base_scan": self.alpha_exponent,
            "beta": self.beta,
        }


def _x(n: int) -> tuple[int, ...]:
    return (0, 1) + (0,) * (n - 2) if n > 1 else None


def _root_is_primitive(modulus, p, N, primes) -> bool:
    n = len(modulus) - 1
    x = _x(n)
    one = (1,) + (0,) * (n - 1)
    if _powmod(x, N, modulus, p) != one:
        return False
    return all(_powmod(x, N // q, modulus, p) != one for q in primes)


def build_field(p: int, n: int) -> FieldContext:
    """Deterministic GF(p^n) context.

    For n >= 2, monic degree-n polynomials are scanned in increasing order of
    sum(c_i p^i) over the low coefficients and the first whose root x has
    order p^n - 1 is taken; alpha = x. For n = 1, alpha is the least
    primitive root of p and the modulus is x - alpha.
    """
    if p == 2 or not is_prime(p):
        raise InvalidArgument(f"p must be an odd prime, got {p}")
    if n < 1:
        raise InvalidArgument(f"n must be positive, got {n}")
    N = p**n - 1
    fac = factorize(N)
    if n == 1:
        g = least_primitive_root(p)
        return FieldContext(p, 1, ((-g) % p, 1), ExtFieldElement((g,)), fac)
    primes = fac.primes
    for code in range(p**n):
        if code % p == 0:
            continue  # constant term 0 means x is not a unit
        low = []
        c = code
        for _ in range(n):
            low.append(c % p)
            c //= p
        modulus = tuple(low) + (1,)
        if _root_is_primitive(modulus, p, N, primes):
            return FieldContext(p, n, modulus, ExtFieldElement(_x(n)), fac)
    raise InvalidArgument(f"no primitive polynomial found for GF({p}^{n})")  # unreachable


def retarget_beta(ctx: FieldContext, beta_target: int) -> FieldContext:
    """Context whose primitive element alpha' = alpha^e has alpha'^M = beta_target.

    e = c + k(p-1) with c = log_beta(beta_target) and the least k >= 0 making
    gcd(e, p^n - 1) = 1.
    """
    p = ctx.p
    beta_target %= p
    if not is_primitive_root(beta_target, p):
        raise InvalidArgument(f"{beta_target} is not a primitive root mod {p}")
    c = discrete_log(ctx.beta, beta_target, p)
    if c is None:  # cannot happen for two primitive roots
        raise InvalidArgument(f"{beta_target} not reachable from beta={ctx.beta}")
    N = ctx.N
    e = c
    while math.gcd(e, N) != 1:
        e += p - 1
        if e > c + N * (p - 1):
            raise InvalidArgument("no admissible exponent found")
    if e == 1:
        return ctx
    new = replace(ctx, alpha=ctx.pow(ctx.alpha, e), alpha_exponent=ctx.alpha_exponent * e % N)
    assert new.beta == beta_target
    return new


def field_for(p: int, n: int, beta: int | None = None) -> FieldContext:
    ctx = build_field(p, n)
    return ctx if beta is None else retarget_beta(ctx, beta)


def trace(ctx: FieldContext, x: ExtFieldElement) -> int:
    """Tr(x) = x + x^p + ... + x^(p^(n-1)) by repeated Frobenius."""
    if len(x) != ctx.n:
        raise InvalidArgument(f"element has {len(x)} coefficients, field needs {ctx.n}")
    total = x
    y = x
    for _ in range(ctx.n - 1):
        y = ctx.pow(y, ctx.p)
        total = ctx.add(total, y)
    if not total.is_constant:
        raise InvalidArgument("trace landed outside GF(p); modulus is not irreducible")
    return total.coeffs[0]


def trace_vector(ctx: FieldContext) -> np.ndarray:
    """Tr(x^i) for the polynomial basis 1, x, ..., x^(n-1)."""
    basis = [ExtFieldElement(tuple(int(i == j) for j in range(ctx.n))) for i in range(ctx.n)]
    return np.array([trace(ctx, b) for b in basis], dtype=np.int64)


def mul_matrix(ctx: FieldContext, y: ExtFieldElement) -> np.ndarray:
    """Matrix of x -> y*x acting on coefficient column vectors."""
    cols = []
    for j in range(ctx.n):
        e_j = ExtFieldElement(tuple(int(i == j) for i in range(ctx.n)))
        cols.append(ctx.mul(y, e_j).coeffs)
    return np.array(cols, dtype=np.int64).T.copy()
