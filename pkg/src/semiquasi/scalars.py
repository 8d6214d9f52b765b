"""Exact scalars: rationals (``fractions.Fraction``) and cyclotomic numbers.

A :class:`Cyclotomic` is an element of Q(zeta_N) stored as its coefficient
vector in the power basis 1, zeta, ..., zeta^(phi(N)-1), reduced modulo the
N-th cyclotomic polynomial.  Arithmetic that produces a rational result
returns a plain ``Fraction`` so that the rational fast path stays the common
case.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Union

Scalar = Union[Fraction, "Cyclotomic"]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("conductor must be positive")
    # x^n - 1 divided by Phi_d for all proper divisors d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _exact_divide(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _exact_divide(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]  # den is monic
        out[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    assert not any(num[: len(den) - 1]), "cyclotomic division not exact"
    return out


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


@lru_cache(maxsize=None)
def _normalized_traces(n: int) -> tuple[Fraction, ...]:
    # average of zeta^j over all conjugates: mu(m)/phi(m), m = order of zeta^j
    out = []
    for j in range(euler_phi(n)):
        m = n // gcd(j, n)
        out.append(Fraction(_mobius(m), euler_phi(m)))
    return tuple(out)


def _reduce(coeffs: list, n: int) -> list:
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    coeffs = list(coeffs)
    for i in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[i]
        if c:
            coeffs[i] = 0
            for j in range(deg):
                if phi[j]:
                    coeffs[i - deg + j] -= c * phi[j]
    coeffs = coeffs[:deg]
    coeffs += [Fraction(0)] * (deg - len(coeffs))
    return coeffs


def _lift(coeffs: tuple, n: int, m: int) -> list:
    """Re-express an element of Q(zeta_n) inside Q(zeta_m), n | m."""
    step = m // n
    out = [Fraction(0)] * (len(coeffs) - 1) * step + [Fraction(0)]
    for j, c in enumerate(coeffs):
        if c:
            out[j * step] += c
    return _reduce(out, m)


def _poly_trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for j, bj in enumerate(b):
            a[shift + j] -= c * bj
        a.pop()
        _poly_trim(a)
    return q, a


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _poly_trim([Fraction(c) for c in out])


class Cyclotomic:
    """Element of the cyclotomic field Q(zeta_N), zeta_N = exp(2 pi i / N)."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs):
        self.n = n
        self.coeffs = tuple(Fraction(c) for c in _reduce(list(coeffs), n))

    @classmethod
    def root(cls, n: int, power: int = 1) -> Scalar:
        """zeta_n ** power (may come back as a Fraction, e.g. for power = 0)."""
        power %= n
        if n <= 2:
            return Fraction(-1) ** power
        base = [Fraction(0)] * (power + 1)
        base[power] = Fraction(1)
        return _demote(cls(n, base))

    # -- helpers ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.n == self.n:
                return self.n, self.coeffs, other.coeffs
            m = self.n * other.n // gcd(self.n, other.n)
            return m, tuple(_lift(self.coeffs, self.n, m)), tuple(_lift(other.coeffs, other.n, m))
        if isinstance(other, (int, Fraction)):
            oc = [Fraction(0)] * len(self.coeffs)
            oc[0] = Fraction(other)
            return self.n, self.coeffs, tuple(oc)
        return None

    def lift(self, m: int) -> "Cyclotomic":
        if m % self.n:
            raise ValueError(f"cannot embed Q(zeta_{self.n}) into Q(zeta_{m})")
        return Cyclotomic(m, _lift(self.coeffs, self.n, m))

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        n, a, b = c
        return _demote(Cyclotomic(n, [x + y for x, y in zip(a, b)]))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.n, [-x for x in self.coeffs])

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        n, a, b = c
        return _demote(Cyclotomic(n, [x - y for x, y in zip(a, b)]))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Fraction(0)
            return Cyclotomic(self.n, [x * other for x in self.coeffs])
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        n, a, b = c
        return _demote(Cyclotomic(n, _poly_mul(list(a), list(b))))

    __rmul__ = __mul__

    def inverse(self) -> Scalar:
        a = _poly_trim(list(self.coeffs))
        if not a:
            raise ZeroDivisionError("cyclotomic zero")
        m = [Fraction(c) for c in cyclotomic_polynomial(self.n)]
        # extended Euclid: s*a + t*m = g
        r0, r1 = m, a
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        g = r0[0]
        return _demote(Cyclotomic(self.n, [c / g for c in s0]))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.n, [x / other for x in self.coeffs])
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result: Scalar = Fraction(1)
        base: Scalar = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        _, a, b = c
        return a == b

    def __bool__(self):
        return any(self.coeffs)

    def __hash__(self):
        tr = _normalized_traces(self.n)
        return hash(sum((c * t for c, t in zip(self.coeffs, tr)), Fraction(0)))

    def __repr__(self):
        return f"Cyclotomic({self.n}, {format_scalar(self)!r})"


def _demote(c: Cyclotomic) -> Scalar:
    return c.coeffs[0] if c.is_rational() else c


def as_scalar(x) -> Scalar:
    if isinstance(x, Cyclotomic):
        return _demote(x)
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def conductor_of(x) -> int:
    return x.n if isinstance(x, Cyclotomic) else 1


def format_scalar(x) -> str:
    """Exact string form: '10/7', '-3', 'z21^5 - 1/2*z21^2'."""
    if not isinstance(x, Cyclotomic):
        return str(Fraction(x))
    parts = []
    for j in range(len(x.coeffs) - 1, -1, -1):
        c = x.coeffs[j]
        if not c:
            continue
        gen = "" if j == 0 else (f"z{x.n}" if j == 1 else f"z{x.n}^{j}")
        if not gen:
            body = str(abs(c))
        elif abs(c) == 1:
            body = gen
        else:
            body = f"{abs(c)}*{gen}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out
