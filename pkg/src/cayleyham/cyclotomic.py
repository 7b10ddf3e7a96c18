"""Exact arithmetic in the cyclotomic integers ``Z[ζ_m]``.

An element is stored as its coefficient vector in the power basis
``1, ζ, ..., ζ^{φ(m)-1}``, i.e. as a polynomial reduced modulo the m-th
cyclotomic polynomial, so equality and zero tests are coefficient-wise.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache
from typing import Iterable, Sequence

Poly = tuple[int, ...]  # coefficients, lowest degree first


def _trim(p: list[int]) -> list[int]:
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def poly_divmod(num: Sequence[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    """Division by a monic integer polynomial."""
    num = list(num)
    den = _trim(list(den))
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return [0], _trim(num)
    q = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            q[i - dd] = c
            for j in range(dd + 1):
                num[i - dd + j] -= c * den[j]
    return _trim(q), _trim(num[:dd] or [0])


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> Poly:
    """``Φ_m``: ``x^m - 1`` divided by ``Φ_d`` for every proper divisor ``d``."""
    if m < 1:
        raise ValueError("m must be positive")
    p = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            p, r = poly_divmod(p, cyclotomic_poly(d))
            if any(r):
                raise ArithmeticError("non-exact cyclotomic division")
    return tuple(p)


def euler_phi(m: int) -> int:
    return len(cyclotomic_poly(m)) - 1


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[Poly, ...]:
    """Reduced coefficient vector of ``ζ^e`` for ``0 ≤ e < m``."""
    phi = cyclotomic_poly(m)
    d = len(phi) - 1
    rows = []
    for e in range(m):
        x = [0] * e + [1]
        _, r = poly_divmod(x, phi)
        rows.append(tuple(r + [0] * (d - len(r))))
    return tuple(rows)


class CycInt:
    """An element of ``Z[ζ_m]``."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs: Iterable[int]) -> None:
        self.m = m
        c = list(coeffs)
        d = euler_phi(m)
        if len(c) > d:
            _, r = poly_divmod(c, cyclotomic_poly(m))
            c = r
        self.coeffs = tuple(int(x) for x in c) + (0,) * (d - len(c))

    # constructors
    @staticmethod
    def integer(m: int, c: int) -> "CycInt":
        return CycInt(m, [c])

    @staticmethod
    def zeta(m: int, e: int = 1) -> "CycInt":
        return CycInt(m, _power_table(m)[e % m])

    @staticmethod
    def from_exponents(m: int, terms: dict[int, int] | Iterable[tuple[int, int]]) -> "CycInt":
        """``Σ c·ζ^e`` from ``{e: c}`` or ``(e, c)`` pairs."""
        items = terms.items() if isinstance(terms, dict) else terms
        table = _power_table(m)
        acc = [0] * euler_phi(m)
        for e, c in items:
            if c:
                for i, t in enumerate(table[e % m]):
                    if t:
                        acc[i] += c * t
        return CycInt(m, acc)

    # ring operations
    def _check(self, other: "CycInt") -> None:
        if self.m != other.m:
            raise ValueError(f"modulus mismatch: {self.m} vs {other.m}")

    def _coerce(self, other) -> "CycInt":
        if isinstance(other, int):
            return CycInt.integer(self.m, other)
        self._check(other)
        return other

    def __add__(self, other) -> "CycInt":
        other = self._coerce(other)
        return CycInt(self.m, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> "CycInt":
        return CycInt(self.m, [-a for a in self.coeffs])

    def __sub__(self, other) -> "CycInt":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "CycInt":
        return self._coerce(other) - self

    def __mul__(self, other) -> "CycInt":
        if isinstance(other, int):
            return CycInt(self.m, [a * other for a in self.coeffs])
        self._check(other)
        a, b = self.coeffs, other.coeffs
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycInt(self.m, prod)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = CycInt.integer(self.m, other)
        return isinstance(other, CycInt) and self.m == other.m and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.m, self.coeffs))

    def __repr__(self) -> str:
        terms = [f"{c}" if i == 0 else f"{c}*z^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"CycInt[{self.m}]({' + '.join(terms) or '0'})"

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    # Galois action and embeddings
    def conjugate(self, j: int) -> "CycInt":
        """``σ_j``: ``ζ ↦ ζ^j`` for ``j`` coprime to ``m``."""
        if math.gcd(j, self.m) != 1:
            raise ValueError("conjugation exponent must be a unit")
        return CycInt.from_exponents(self.m, ((i * j, c) for i, c in enumerate(self.coeffs)))

    def to_complex(self, j: int = 1) -> complex:
        w = cmath.exp(2j * cmath.pi * j / self.m)
        return sum(c * w**i for i, c in enumerate(self.coeffs))

    def norm(self) -> int:
        return cyc_norm(self)

    def reduce_mod_p(self, p: int) -> int:
        return reduce_mod_p(self, p)

    def to_json(self) -> dict:
        return {"m": self.m, "coeffs": list(self.coeffs)}


def cyc_add(a: CycInt, b: CycInt) -> CycInt:
    return a + b


def cyc_mul(a: CycInt, b: CycInt) -> CycInt:
    return a * b


def cyc_neg(a: CycInt) -> CycInt:
    return -a


def units_mod(m: int) -> list[int]:
    return [j for j in range(1, m + 1) if math.gcd(j, m) == 1] if m > 1 else [1]


# --------------------------------------------------------------------------
# determinants and norms


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Fraction-free determinant of an integer matrix."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[-1][-1]


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """``Res(f, g)`` as the determinant of the Sylvester matrix."""
    f, g = _trim(list(f)), _trim(list(g))
    df, dg = len(f) - 1, len(g) - 1
    if dg == 0:
        return g[0] ** df
    if df == 0:
        return f[0] ** dg
    size = df + dg
    rows = []
    fh, gh = f[::-1], g[::-1]  # highest degree first
    for i in range(dg):
        rows.append([0] * i + fh + [0] * (size - i - len(fh)))
    for i in range(df):
        rows.append([0] * i + gh + [0] * (size - i - len(gh)))
    return bareiss_det(rows)


def cyc_norm(a: CycInt) -> int:
    """``N(a) = Π_j σ_j(a)`` computed exactly as ``Res(Φ_m, a)``.

    ``Φ_m`` is monic, so the resultant is the product of ``a`` evaluated at
    the primitive m-th roots of unity, which is the norm with its sign.
    """
    if a.is_zero():
        return 0
    return resultant(cyclotomic_poly(a.m), a.coeffs)


def norm_by_embeddings(a: CycInt) -> complex:
    out = complex(1)
    for j in units_mod(a.m):
        out *= a.to_complex(j)
    return out


def exact_divide(a: CycInt, b: CycInt) -> CycInt:
    """``a / b`` when the quotient lies in ``Z[ζ_m]``.

    Uses ``a/b = a·Π_{j≠1} σ_j(b) / N(b)``; raises if the division is not exact.
    """
    a._check(b)
    nb = cyc_norm(b)
    if nb == 0:
        raise ZeroDivisionError("division by zero")
    num = a
    for j in units_mod(a.m):
        if j != 1:
            num = num * b.conjugate(j)
    if any(c % nb for c in num.coeffs):
        raise ArithmeticError("quotient is not a cyclotomic integer")
    return CycInt(a.m, [c // nb for c in num.coeffs])


def cofactor_det(matrix: Sequence[Sequence[CycInt]], m: int) -> CycInt:
    """Determinant by Laplace expansion along the first row."""
    n = len(matrix)
    if n == 0:
        return CycInt.integer(m, 1)
    if n == 1:
        return matrix[0][0]
    total = CycInt.integer(m, 0)
    for j in range(n):
        if matrix[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in matrix[1:]]
        term = matrix[0][j] * cofactor_det(minor, m)
        total = total - term if j % 2 else total + term
    return total


def ring_bareiss_det(matrix: Sequence[Sequence[CycInt]], m: int) -> CycInt:
    """Fraction-free elimination over ``Z[ζ_m]`` with exact ring division."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return CycInt.integer(m, 1)
    sign = 1
    prev = CycInt.integer(m, 1)
    for k in range(n - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, n):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return CycInt.integer(m, 0)
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = exact_divide(a[i][j] * pivot - a[i][k] * a[k][j], prev)
            a[i][k] = CycInt.integer(m, 0)
        prev = pivot
    return a[-1][-1] * sign


# --------------------------------------------------------------------------
# reduction modulo p


def least_primitive_root(p: int) -> int:
    from .groups import least_primitive_root as lpr

    return lpr(p)


def zeta_image(p: int, m: int) -> int:
    """Image of ``ζ_m`` in ``Z_p^×``: ``g^((p-1)/m)`` for the least primitive root ``g``."""
    if (p - 1) % m:
        raise ValueError(f"{m} does not divide {p} - 1")
    return pow(least_primitive_root(p), (p - 1) // m, p)


def reduce_mod_p(x: CycInt, p: int) -> int:
    r = zeta_image(p, x.m)
    acc, power = 0, 1
    for c in x.coeffs:
        acc = (acc + c * power) % p
        power = power * r % p
    return acc
