"""Integer Laurent polynomials and their roots of unity.

Certification questions reduce to exact cyclotomic divisibility: a nonzero
``p`` vanishes at a primitive ``m``-th root of unity iff ``Phi_m`` divides it.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np


class LaurentPoly:
    """Immutable element of ``Z[t, t^-1]`` stored as ``{exponent: coeff}``."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, int] | None = None):
        self._c = {int(k): int(v) for k, v in (coeffs or {}).items() if v}
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: dict[int, int]) -> "LaurentPoly":
        p = object.__new__(cls)
        p._c = coeffs
        p._hash = None
        return p

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def from_dense(cls, coeffs: Iterable[int], low: int = 0) -> "LaurentPoly":
        """``coeffs[i]`` is the coefficient of ``t^(low+i)``."""
        return cls({low + i: c for i, c in enumerate(coeffs)})

    @property
    def coeffs(self) -> dict[int, int]:
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def __getitem__(self, exp: int) -> int:
        return self._c.get(exp, 0)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __add__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        out = dict(self._c)
        for k, v in other._c.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other: int) -> "LaurentPoly":
        return LaurentPoly.constant(other) - self

    def __mul__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly()
            return LaurentPoly._raw({k: v * other for k, v in self._c.items()})
        out: dict[int, int] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials are invertible")
            (e, c), = self._c.items()
            if abs(c) != 1:
                raise ValueError("only unit monomials are invertible")
            return LaurentPoly({e * k: c ** -k})
        out = LaurentPoly.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def shift(self, by: int) -> "LaurentPoly":
        """Multiply by ``t^by``."""
        return LaurentPoly._raw({k + by: v for k, v in self._c.items()})

    def substitute_inverse(self) -> "LaurentPoly":
        """``p(t) -> p(1/t)``."""
        return LaurentPoly._raw({-k: v for k, v in self._c.items()})

    @property
    def min_exp(self) -> int:
        return min(self._c)

    @property
    def max_exp(self) -> int:
        return max(self._c)

    @property
    def span(self) -> int:
        return self.max_exp - self.min_exp if self._c else 0

    def l1_norm(self) -> int:
        return sum(abs(v) for v in self._c.values())

    def eval_at_one(self) -> int:
        return sum(self._c.values())

    def __call__(self, t: complex) -> complex:
        return sum(c * t ** k for k, c in self._c.items())

    def eval_unit_circle(self, m: int, l: int) -> complex:
        """Floating value at ``exp(2 pi i l / m)``; diagnostics only."""
        if m < 1 or not 0 <= l < m:
            raise ValueError(f"need m >= 1 and 0 <= l < m, got m={m}, l={l}")
        return sum(c * cmath.exp(2j * math.pi * ((k * l) % m) / m) for k, c in self._c.items())

    def dense(self) -> tuple[int, list[int]]:
        """``(low, coeffs)`` with ``coeffs[i]`` the coefficient of ``t^(low+i)``."""
        if not self._c:
            return 0, []
        low = self.min_exp
        out = [0] * (self.span + 1)
        for k, v in self._c.items():
            out[k - low] = v
        return low, out

    def __repr__(self) -> str:
        return f"LaurentPoly({self})"

    def __str__(self) -> str:
        if not self._c:
            return "0"
        terms = []
        for k, c in sorted(self._c.items(), reverse=True):
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "t" if k == 1 else f"t^{k}"
                body = var if mag == 1 else f"{mag}{var}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


T = LaurentPoly.monomial(1)


# --- dense integer helpers ------------------------------------------------

def _rem_monic(num: list[int], den: list[int]) -> list[int]:
    """Remainder of ``num`` by monic ``den``; both low-to-high coefficient lists."""
    r = list(num)
    dd = len(den) - 1
    for top in range(len(r) - 1, dd - 1, -1):
        q = r[top]
        if q:
            shift = top - dd
            for i, d in enumerate(den):
                r[shift + i] -= q * d
    r = r[:dd] if dd > 0 else []
    while r and r[-1] == 0:
        r.pop()
    return r


def _div_exact(num: list[int], den: list[int]) -> list[int]:
    """Quotient of ``num`` by monic ``den``; raises if the division is not exact."""
    r = list(num)
    dd = len(den) - 1
    q = [0] * max(len(r) - dd, 0)
    for top in range(len(r) - 1, dd - 1, -1):
        c = r[top]
        if c:
            shift = top - dd
            q[shift] = c
            for i, d in enumerate(den):
                r[shift + i] -= c * d
    if any(r):
        raise ArithmeticError("division is not exact")
    return q


# --- number theory --------------------------------------------------------

def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    result = n
    for p in factorize(n):
        result -= result // p
    return result


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def lpf(n: int) -> int:
    """Least prime factor of ``n >= 2``."""
    if n < 2:
        raise ValueError("lpf is defined for n >= 2")
    return min(factorize(n))


def _is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


class _TotientTable:
    """Totients up to a bound, grown on demand."""

    def __init__(self) -> None:
        self.phi = np.arange(2, dtype=np.int64)

    def upto(self, bound: int) -> np.ndarray:
        if bound >= len(self.phi):
            size = max(bound + 1, 2 * len(self.phi))
            phi = np.arange(size, dtype=np.int64)
            for q in range(2, size):
                if phi[q] == q:
                    phi[q::q] -= phi[q::q] // q
            self.phi = phi
        return self.phi


_TOTIENTS = _TotientTable()


@lru_cache(maxsize=256)
def _candidate_orders(span: int) -> tuple[int, ...]:
    bound = 2 * span * span
    phi = _TOTIENTS.upto(bound)[: bound + 1]
    return tuple(int(m) for m in np.nonzero(phi <= span)[0] if m >= 2)


def candidate_orders(span: int) -> list[int]:
    """All ``m >= 2`` with ``phi(m) <= span``.

    Complete because ``phi(m) >= sqrt(m/2)``, so every such ``m`` is at most
    ``2 span^2``.
    """
    if span < 1:
        return []
    return list(_candidate_orders(span))


@lru_cache(maxsize=None)
def _cyclotomic_dense(m: int) -> tuple[int, ...]:
    num = [-1] + [0] * (m - 1) + [1]
    for d in divisors(m)[:-1]:
        num = _div_exact(num, list(_cyclotomic_dense(d)))
    return tuple(num)


def cyclotomic(m: int) -> LaurentPoly:
    """The ``m``-th cyclotomic polynomial, by exact division of ``t^m - 1``."""
    if m < 1:
        raise ValueError(f"cyclotomic index must be >= 1, got {m}")
    return LaurentPoly.from_dense(_cyclotomic_dense(m))


@lru_cache(maxsize=None)
def _modular_root(m: int) -> tuple[int, int]:
    """A prime ``l = 1 mod m`` and an element of multiplicative order ``m`` mod ``l``."""
    primes_of_m = list(factorize(m))
    k = 1
    while True:
        ell = k * m + 1
        if _is_prime(ell):
            for g in range(2, ell):
                r = pow(g, (ell - 1) // m, ell)
                if all(pow(r, m // q, ell) != 1 for q in primes_of_m):
                    return ell, r
        k += 1


def divisible_by_cyclotomic(p: LaurentPoly, m: int) -> bool:
    """Exact test of ``Phi_m | p`` in ``Z[t, t^-1]``."""
    if not p:
        return True
    low, dense = p.dense()
    if m >= 2 and euler_phi(m) > len(dense) - 1:
        return False
    # Phi_m | p forces p(r) = 0 mod l at every root r of Phi_m mod l, so a
    # nonzero residue rules divisibility out without any rounding.
    ell, r = _modular_root(m)
    acc = 0
    for c in reversed(dense):
        acc = (acc * r + c) % ell
    if acc:
        return False
    return not _rem_monic(dense, list(_cyclotomic_dense(m)))


@dataclass(frozen=True)
class RootAnalysis:
    bad_set: frozenset[int]
    vanishes_at_one: bool
    span: int
    lpf_bound: int

    def describe(self) -> str:
        if not self.bad_set:
            return "all n >= 2"
        return "all n with no divisor in {" + ", ".join(map(str, sorted(self.bad_set))) + "}"


def analyze_roots(p: LaurentPoly) -> RootAnalysis:
    """Find every ``m >= 2`` such that ``p`` vanishes at a primitive ``m``-th root of unity."""
    if not p:
        raise ValueError("root analysis needs a nonzero polynomial")
    k = p.span
    bad = frozenset(m for m in candidate_orders(k) if divisible_by_cyclotomic(p, m))
    return RootAnalysis(bad, p.eval_at_one() == 0, k, k + 2)


def certified_n(analysis: RootAnalysis, n: int) -> bool:
    """True iff ``p`` is nonzero at every nontrivial ``n``-th root of unity."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    return not any(n % m == 0 for m in analysis.bad_set)


def bad_divisors(analysis: RootAnalysis, n: int) -> list[int]:
    return sorted(m for m in analysis.bad_set if n % m == 0)
