"""Exact arithmetic in the cyclotomic field Q(zeta_m).

Elements are stored in the power basis 1, z, ..., z^(d-1) with d = phi(m),
as an integer numerator vector over a positive common denominator.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den monic; coefficient lists are lowest degree first
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    dd = len(den) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            q[i - dd] = c
            for j, b in enumerate(den):
                num[i - dd + j] -= c * b
    rem = num[:dd] if dd else [0]
    return q, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients (low degree first) of the m-th cyclotomic polynomial."""
    if m < 1:
        raise ValueError("m must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly, rem = _poly_divmod_int(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    return tuple(poly)


class CycloContext:
    """The field Q(zeta_m); instances are cached per conductor."""

    _cache: dict[int, "CycloContext"] = {}

    def __new__(cls, m: int):
        if m in cls._cache:
            return cls._cache[m]
        if m < 1:
            raise ValueError("conductor must be positive")
        self = super().__new__(cls)
        self.m = m
        self.phi_poly = cyclotomic_polynomial(m)
        self.degree = len(self.phi_poly) - 1
        d = self.degree
        # powers z^e mod Phi_m for 0 <= e < m
        table = []
        cur = [1] + [0] * (d - 1)
        for _ in range(m):
            table.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(d):
                    cur[j] -= top * self.phi_poly[j]
        self._powers = table
        cls._cache[m] = self
        return self

    def __repr__(self) -> str:
        return f"CycloContext({self.m})"

    def __reduce__(self):
        return (CycloContext, (self.m,))

    def zero(self) -> "CycloNum":
        return CycloNum(self, (0,) * self.degree)

    def one(self) -> "CycloNum":
        return self(1)

    def __call__(self, value) -> "CycloNum":
        """Embed an integer or Fraction."""
        value = Fraction(value)
        num = [0] * self.degree
        num[0] = value.numerator
        return CycloNum(self, num, value.denominator)

    def root_of_unity(self, a: int) -> "CycloNum":
        return CycloNum(self, self._powers[a % self.m])

    def zeta(self, order: int) -> "CycloNum":
        """The primitive root e^(2 pi i / order) for ``order`` dividing m."""
        if self.m % order:
            raise ValueError(f"{order} does not divide {self.m}")
        return self.root_of_unity(self.m // order)

    def from_coeffs(self, coeffs: Sequence) -> "CycloNum":
        """Element sum c_i z^i from any number of rational coefficients."""
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // gcd(den, c.denominator)
        acc = [0] * self.degree
        for e, c in enumerate(fr):
            if c:
                s = c.numerator * (den // c.denominator)
                for j, p in enumerate(self._powers[e % self.m]):
                    if p:
                        acc[j] += s * p
        return CycloNum(self, acc, den)

    def galois_group(self) -> list[int]:
        return [l for l in range(1, self.m + 1) if gcd(l, self.m) == 1] if self.m > 1 else [1]

    def is_root_of_unity(self, x: "CycloNum") -> bool:
        # the roots of unity in Q(zeta_m) are +-zeta_m^a
        for a in range(self.m):
            r = self.root_of_unity(a)
            if x == r or x == -r:
                return True
        return False


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class CycloNum:
    """An element of Q(zeta_m); immutable."""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx: CycloContext, num: Iterable[int], den: int = 1):
        num = tuple(num)
        if len(num) != ctx.degree:
            raise ValueError("coefficient vector has wrong length")
        if den <= 0:
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            num, den = tuple(-c for c in num), -den
        if den != 1:
            g = den
            for c in num:
                g = gcd(g, c)
                if g == 1:
                    break
            if g != 1:
                num = tuple(c // g for c in num)
                den //= g
        self.ctx = ctx
        self.num = num
        self.den = den

    # --- structure -----------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_integral(self) -> bool:
        return self.den == 1

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def _coerce(self, other) -> "CycloNum":
        if isinstance(other, CycloNum):
            if other.ctx is not self.ctx:
                raise ValueError("elements of different cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ctx(other)
        if not isinstance(other, CycloNum):
            return NotImplemented
        return other.ctx is self.ctx and self.den == other.den and self.num == other.num

    def __hash__(self) -> int:
        return hash((self.ctx.m, self.num, self.den))

    # --- arithmetic ----------------------------------------------------
    def __add__(self, other) -> "CycloNum":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return CycloNum(self.ctx, [a + b for a, b in zip(self.num, o.num)], self.den)
        return CycloNum(
            self.ctx,
            [a * o.den + b * self.den for a, b in zip(self.num, o.num)],
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self) -> "CycloNum":
        return CycloNum(self.ctx, [-a for a in self.num], self.den)

    def __sub__(self, other) -> "CycloNum":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other) -> "CycloNum":
        return (-self) + other

    def __mul__(self, other) -> "CycloNum":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        ctx = self.ctx
        d = ctx.degree
        if o.is_rational():
            s = o.num[0]
            return CycloNum(ctx, [a * s for a in self.num], self.den * o.den)
        if self.is_rational():
            s = self.num[0]
            return CycloNum(ctx, [a * s for a in o.num], self.den * o.den)
        conv = [0] * (2 * d - 1)
        for i, a in enumerate(self.num):
            if a:
                for j, b in enumerate(o.num):
                    if b:
                        conv[i + j] += a * b
        acc = list(conv[:d])
        powers, m = ctx._powers, ctx.m
        for e in range(d, 2 * d - 1):
            c = conv[e]
            if c:
                for j, p in enumerate(powers[e % m]):
                    if p:
                        acc[j] += c * p
        return CycloNum(ctx, acc, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNum":
        """Multiplicative inverse by the extended Euclidean algorithm mod Phi_m."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        if self.is_rational():
            return self.ctx(Fraction(self.den, self.num[0]))
        # solve s * x + t * Phi = 1 over Q
        a = _trim([Fraction(c, self.den) for c in self.num])
        b = [Fraction(c) for c in self.ctx.phi_poly]
        s0, s1 = [Fraction(1)], [Fraction(0)]
        r0, r1 = a, b
        while len(r1) > 1 or r1[0] != 0:
            q, r = _poly_divmod_frac(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r0 is a nonzero constant
        c = r0[0]
        return self.ctx.from_coeffs([x / c for x in s0])

    def __truediv__(self, other) -> "CycloNum":
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other) -> "CycloNum":
        return self.inverse() * other

    def __pow__(self, n: int) -> "CycloNum":
        base = self if n >= 0 else self.inverse()
        result = self.ctx.one()
        for _ in range(abs(n)):
            result = result * base
        return result

    def galois(self, l: int) -> "CycloNum":
        return galois(self.ctx, l, self)

    def conjugate(self) -> "CycloNum":
        """Complex conjugation, i.e. the Galois automorphism z -> z^-1."""
        return galois(self.ctx, -1, self)

    def norm(self) -> Fraction:
        """Field norm down to Q."""
        p = self.ctx.one()
        for l in self.ctx.galois_group():
            p = p * self.galois(l)
        return p.to_fraction()

    # --- presentation --------------------------------------------------
    def to_json(self) -> dict:
        return {"m": self.ctx.m, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "CycloNum":
        ctx = CycloContext(int(data["m"]))
        coeffs = [Fraction(c) for c in data["coeffs"]]
        if len(coeffs) != ctx.degree:
            raise ValueError("coefficient list has wrong length")
        return ctx.from_coeffs(coeffs)

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        s = " + ".join(terms) or "0"
        return s.replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"CycloNum(m={self.ctx.m}, {self})"


def root_of_unity(ctx: CycloContext, a: int) -> CycloNum:
    return ctx.root_of_unity(a)


def galois(ctx: CycloContext, l: int, x: CycloNum) -> CycloNum:
    """Apply the automorphism z_m -> z_m^l."""
    if gcd(l, ctx.m) != 1:
        raise ValueError(f"{l} is not coprime to {ctx.m}")
    acc = [0] * ctx.degree
    powers, m = ctx._powers, ctx.m
    for i, c in enumerate(x.num):
        if c:
            for j, p in enumerate(powers[(i * l) % m]):
                if p:
                    acc[j] += c * p
    return CycloNum(ctx, acc, x.den)


def is_integral(x: CycloNum) -> bool:
    """Z[z_m] is the full ring of integers, so integrality is coefficientwise."""
    return x.is_integral()


def _trim(p: list[Fraction]) -> list[Fraction]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _poly_sub(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    n = max(len(p), len(q))
    out = [(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0) for i in range(n)]
    return _trim([Fraction(x) for x in out])


def _poly_divmod_frac(p: list[Fraction], q: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    p = list(p)
    dq = len(q) - 1
    if len(p) - 1 < dq:
        return [Fraction(0)], _trim(p)
    quot = [Fraction(0)] * (len(p) - dq)
    lead = q[-1]
    for i in range(len(p) - 1, dq - 1, -1):
        c = p[i] / lead
        if c:
            quot[i - dq] = c
            for j, b in enumerate(q):
                p[i - dq + j] -= c * b
    return _trim(quot), _trim(p[:dq] or [Fraction(0)])
