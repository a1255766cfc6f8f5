"""Truncated formal power series over exact rationals or binary64 floats.

A series is an immutable coefficient tuple c_0..c_N (coefficient of z^0..z^N)
tagged with a scalar mode.  Rational mode uses :class:`fractions.Fraction`
throughout, so every operation is exact; float mode runs the same algorithms
on binary64.  Mixing modes inside one computation raises ``ValueError``.

The Cauchy-transform argument 1/z + R(z) is never stored as a Laurent
object: operations that need the pole (:func:`invert_pole_series`) take the
regular part and treat the 1/z term implicitly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

RATIONAL = "rational"
FLOAT = "float"

Number = Union[int, float, Fraction, str]


def as_scalar(value: Number, mode: str):
    """Coerce *value* to the scalar type of *mode*.

    Rational mode accepts ints, Fractions and "p/q" strings; float mode
    accepts anything float() does.
    """
    if mode == RATIONAL:
        if isinstance(value, float):
            raise ValueError("float value %r in rational mode" % (value,))
        return Fraction(value)
    if mode == FLOAT:
        if isinstance(value, str):
            return float(Fraction(value))
        return float(value)
    raise ValueError("unknown scalar mode %r" % (mode,))


def scalars_close(a, b, rel: float = 1e-10) -> bool:
    """Mode-agnostic comparison: exact for Fractions, relative for floats."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    fa, fb = float(a), float(b)
    return abs(fa - fb) <= rel * max(1.0, abs(fa), abs(fb))


class TruncatedSeries:
    """Coefficients c_0..c_N of a power series truncated at order N."""

    __slots__ = ("coeffs", "mode")

    def __init__(self, coeffs: Iterable[Number], mode: str = RATIONAL):
        coeffs = tuple(as_scalar(c, mode) for c in coeffs)
        if not coeffs:
            raise ValueError("a truncated series needs at least c_0")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "mode", mode)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedSeries is immutable")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, order: int, mode: str = RATIONAL) -> "TruncatedSeries":
        return cls([0] * (order + 1), mode)

    @classmethod
    def one(cls, order: int, mode: str = RATIONAL) -> "TruncatedSeries":
        return cls([1] + [0] * order, mode)

    @classmethod
    def identity(cls, order: int, mode: str = RATIONAL) -> "TruncatedSeries":
        """The series z (requires order >= 1)."""
        if order < 1:
            raise ValueError("identity series needs order >= 1")
        return cls([0, 1] + [0] * (order - 1), mode)

    def _check(self, other: "TruncatedSeries") -> None:
        if self.mode != other.mode:
            raise ValueError("scalar mode mismatch: %s vs %s"
                             % (self.mode, other.mode))

    def truncate(self, order: int) -> "TruncatedSeries":
        if order >= self.order:
            return self
        return TruncatedSeries(self.coeffs[:order + 1], self.mode)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        n = min(self.order, other.order)
        return TruncatedSeries(
            [self.coeffs[k] + other.coeffs[k] for k in range(n + 1)],
            self.mode)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries([-c for c in self.coeffs], self.mode)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        n = min(self.order, other.order)
        zero = as_scalar(0, self.mode)
        out = [zero] * (n + 1)
        for i, a in enumerate(self.coeffs[:n + 1]):
            if a == 0:
                continue
            for j in range(n + 1 - i):
                out[i + j] += a * other.coeffs[j]
        return TruncatedSeries(out, self.mode)

    def scale(self, factor: Number) -> "TruncatedSeries":
        f = as_scalar(factor, self.mode)
        return TruncatedSeries([f * c for c in self.coeffs], self.mode)

    def shift(self) -> "TruncatedSeries":
        """Multiply by z, keeping the truncation order."""
        if self.order == 0:
            return TruncatedSeries([0], self.mode)
        return TruncatedSeries((as_scalar(0, self.mode),) + self.coeffs[:-1],
                               self.mode)

    def reciprocal(self) -> "TruncatedSeries":
        """1/self; requires a nonzero constant term."""
        if self.coeffs[0] == 0:
            raise ZeroDivisionError("series has zero constant term")
        c0 = self.coeffs[0]
        inv = [1 / c0 if self.mode == FLOAT else Fraction(1) / c0]
        for m in range(1, self.order + 1):
            s = sum((self.coeffs[i] * inv[m - i]
                     for i in range(1, m + 1)), as_scalar(0, self.mode))
            inv.append(-s / c0)
        return TruncatedSeries(inv, self.mode)

    def __eq__(self, other) -> bool:
        """Coefficientwise equality up to the common order."""
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        if self.mode != other.mode:
            return False
        n = min(self.order, other.order)
        return self.coeffs[:n + 1] == other.coeffs[:n + 1]

    __hash__ = None

    def agrees(self, other: "TruncatedSeries", rel: float = 1e-10) -> bool:
        """Like ``==`` but with a relative tolerance in float mode."""
        self._check(other)
        n = min(self.order, other.order)
        return all(scalars_close(self.coeffs[k], other.coeffs[k], rel)
                   for k in range(n + 1))

    def __repr__(self) -> str:
        return "TruncatedSeries(%r, mode=%r)" % (list(self.coeffs), self.mode)


def compose(f: TruncatedSeries, g: TruncatedSeries, *,
            polynomial: bool = False) -> TruncatedSeries:
    """f(g(z)) truncated at the common order.

    g must have zero constant term unless *polynomial* asserts that the
    stored coefficients of f are its complete expansion.
    """
    f._check(g)
    if g.coeffs[0] != 0 and not polynomial:
        raise ValueError("inner series has nonzero constant term")
    n = min(f.order, g.order)
    zero = as_scalar(0, f.mode)
    out = [zero] * (n + 1)
    power = TruncatedSeries.one(n, f.mode)
    gt = g.truncate(n)
    for k, fk in enumerate(f.coeffs[:n + 1]):
        if fk != 0:
            for t in range(n + 1):
                out[t] += fk * power.coeffs[t]
        if k < n:
            power = power * gt
    return TruncatedSeries(out, f.mode)


def invert_pole_series(reg: TruncatedSeries,
                       order: int | None = None) -> TruncatedSeries:
    """Multiplicative inverse of C(z) = 1/z + reg(z).

    Both C and its inverse B(z) = sum b_n z^{n+1} are handled through their
    tail sequences: the input holds c_{k+1} at index k (so reg = the regular
    part of C), the output holds b_{k+1} at index k, with c_0 = b_0 = 1
    implicit.  In this convention the map is an involution, and the full
    inverse is B(z) = z + z^2 * result(z).
    """
    if order is None:
        order = reg.order
    c = reg.truncate(order).coeffs if order <= reg.order else \
        reg.coeffs + (as_scalar(0, reg.mode),) * (order - reg.order)
    one = as_scalar(1, reg.mode)
    b = [one]                       # b_0
    for m in range(1, order + 2):
        # sum_{i+j=m} c_i b_j = 0 with c_0 = 1 and c_i = c[i-1]
        s = as_scalar(0, reg.mode)
        for i in range(1, m + 1):
            ci = c[i - 1] if i - 1 < len(c) else as_scalar(0, reg.mode)
            s += ci * b[m - i]
        b.append(-s)
    return TruncatedSeries(b[1:order + 2], reg.mode)


def pole_product_is_one(reg: TruncatedSeries, tail: TruncatedSeries) -> bool:
    """Check (1/z + reg(z)) * (z + z^2 tail(z)) == 1 up to the common order."""
    reg._check(tail)
    n = min(reg.order, tail.order)
    b = (as_scalar(1, reg.mode),) + tail.coeffs     # b_0..b_{n+1}
    c = (as_scalar(1, reg.mode),) + reg.coeffs      # c_0..c_{n+1}
    for m in range(n + 2):
        s = sum((c[i] * b[m - i] for i in range(m + 1)),
                as_scalar(0, reg.mode))
        want = as_scalar(1 if m == 0 else 0, reg.mode)
        if not scalars_close(s, want):
            return False
    return True


def r_from_moments(moments: TruncatedSeries) -> TruncatedSeries:
    """Free cumulants of a moment sequence, as the R-transform tail.

    Input: m_0..m_N with m_0 = 1.  Output: series with r(k+1) at index k,
    i.e. R(z) = sum_k out[k] z^k, determined by the triangular system
    m_n = sum_{k=1}^{n} r_k [z^{n-k}] M(z)^k.
    """
    if moments.coeffs[0] != 1:
        raise ValueError("moment sequence must be normalized (m_0 = 1)")
    n = moments.order
    if n == 0:
        raise ValueError("need at least the first moment")
    mode = moments.mode
    powers = [TruncatedSeries.one(n, mode)]
    for _ in range(n):
        powers.append(powers[-1] * moments)
    r = []
    for m in range(1, n + 1):
        s = as_scalar(0, mode)
        for k in range(1, m):
            s += r[k - 1] * powers[k].coeffs[m - k]
        r.append(moments.coeffs[m] - s)
    return TruncatedSeries(r, mode)
