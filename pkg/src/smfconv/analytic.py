"""Cauchy-transform layer: the subordination recursion, the master formula
for the convolution moments, the five binary convolution kinds with their
closed-form cross-checks, and density extraction.

Cauchy transforms are carried as moment generating functions: with
w = 1/z, G(z) = w M(w), so G-composition arguments like R(G(z)) become
ordinary compositions R(w M(w)) with zero inner constant term.
"""

from __future__ import annotations

import cmath
import math
from typing import Dict, List, Sequence, Tuple

from .arrays import Cell, DistributionArray, NamedLaw, row_identical_array
from .series import FLOAT, RATIONAL, TruncatedSeries, as_scalar, compose

OFF = {1: 2, 2: 1}


def _k_series(r_tail: TruncatedSeries, m_star: TruncatedSeries):
    """R(w M*(w)) as a truncated series in w."""
    return compose(r_tail, m_star.shift())


def solve_subordination(array: DistributionArray,
                        order: int) -> Dict[Cell, TruncatedSeries]:
    """Moment generating functions of the four subordinate transforms.

    The fixed point is coefficient-triangular: coefficient n of each
    series depends only on lower coefficients of the family, so iterating
    the defining map order+1 times stabilizes every coefficient.
    """
    if array.order < order:
        raise ValueError("cumulant order %d < requested order %d"
                         % (array.order, order))
    mode = array.mode

    # pad or cut each cell tail to the working order; the top coefficient
    # of a K-series never reaches the truncated output, so this is exact
    def pad(s):
        coeffs = list(s.coeffs) + [as_scalar(0, mode)] * (order - s.order)
        return TruncatedSeries(coeffs[:order + 1], mode)

    r = {cell: pad(array.r_series(cell))
         for cell in ((1, 1), (1, 2), (2, 1), (2, 2))}
    m_star = {cell: TruncatedSeries.one(order, mode) for cell in r}
    one = TruncatedSeries.one(order, mode)
    for _ in range(order + 1):
        k = {cell: _k_series(r[cell], m_star[cell]) for cell in m_star}
        new = {}
        for j in (1, 2):
            den = one - (k[(j, j)] + k[(OFF[j], j)]).shift()
            new[(j, j)] = den.reciprocal()
            den = one - (k[(j, OFF[j])] + k[(OFF[j], j)]).shift()
            new[(j, OFF[j])] = den.reciprocal()
        m_star = new
    return m_star


def master_cauchy(array: DistributionArray, order: int) -> TruncatedSeries:
    """Moment series of the convolution via the subordination family:
    M = 1 / (1 - w [K_{1,1} + K_{2,2}]) with K_{j,j} = R_{j,j}(w M*_{j,j})."""
    m_star = solve_subordination(array, order)
    mode = array.mode

    def pad(s):
        coeffs = list(s.coeffs) + [as_scalar(0, mode)] * (order - s.order)
        return TruncatedSeries(coeffs[:order + 1], mode)

    k11 = _k_series(pad(array.r_series((1, 1))), m_star[(1, 1)])
    k22 = _k_series(pad(array.r_series((2, 2))), m_star[(2, 2)])
    den = TruncatedSeries.one(order, mode) - (k11 + k22).shift()
    return den.reciprocal()


def law_moments(law: NamedLaw, order: int,
                mode: str = RATIONAL) -> TruncatedSeries:
    """Moment series of a single law, via the one-cell master formula."""
    array = DistributionArray.from_laws({(1, 1): law}, max(order, 1), mode)
    return master_cauchy(array, order)


def f_compose_moments(m1: TruncatedSeries,
                      m2: TruncatedSeries) -> TruncatedSeries:
    """Moment series of the monotone convolution via composition of
    reciprocal Cauchy transforms, F = F1 o F2.

    With N = 1/M, F(z) = z N(1/z) = 1/w + T(w) where T holds n_{k+1} at
    index k; then F1(F2(z)) = F2(z) + S1(G2(z)) with S1(u) = (N1(u)-1)/u
    and G2 = w M2(w), and the result converts back through M = 1/(1+wT).
    """
    order = min(m1.order, m2.order)
    if order == 0:
        return TruncatedSeries.one(0, m1.mode)
    m1, m2 = m1.truncate(order), m2.truncate(order)
    zero = (as_scalar(0, m1.mode),)
    n1 = m1.reciprocal()
    n2 = m2.reciprocal()
    s1 = TruncatedSeries(n1.coeffs[1:] + zero, m1.mode)
    t2 = TruncatedSeries(n2.coeffs[1:] + zero, m2.mode)
    total = t2 + compose(s1, m2.shift())
    den = TruncatedSeries.one(order, m1.mode) + total.shift()
    return den.reciprocal()


def binary_convolutions(law1: NamedLaw, law2: NamedLaw, kind: str,
                        order: int, mode: str = RATIONAL) -> TruncatedSeries:
    """Moment series of a binary convolution realized as an array shape.

    kind is one of free, monotone, boolean, s_free, orthogonal.  The array
    route (master_cauchy on the row-identical shape) is cross-checked
    against the closed-form fixed-point equation of the kind; a mismatch
    raises ArithmeticError.
    """
    array = row_identical_array(kind, law1, law2, max(order, 2), mode)
    result = master_cauchy(array, order)

    r1 = TruncatedSeries(law1.cumulants(order + 1, mode), mode)
    r2 = TruncatedSeries(law2.cumulants(order + 1, mode), mode)
    one = TruncatedSeries.one(order, mode)

    def against(m_series, *terms):
        den = one - sum(terms[1:], terms[0]).shift()
        return m_series.agrees(den.reciprocal())

    if kind == "free":
        ok = against(result, compose(r1, result.shift()),
                     compose(r2, result.shift()))
    elif kind == "monotone":
        g2 = law_moments(law2, order, mode)
        ok = against(result, compose(r1, result.shift()),
                     compose(r2, g2.shift()))
    elif kind == "boolean":
        g1 = law_moments(law1, order, mode)
        g2 = law_moments(law2, order, mode)
        ok = against(result, compose(r1, g1.shift()),
                     compose(r2, g2.shift()))
    elif kind == "s_free":
        free = binary_convolutions(law1, law2, "free", order, mode)
        ok = against(result, compose(r1, free.shift()))
    elif kind == "orthogonal":
        mono = binary_convolutions(law1, law2, "monotone", order, mode)
        ok = against(result, compose(r1, mono.shift()))
    else:
        raise ValueError("unknown convolution kind %r" % (kind,))
    if not ok:
        raise ArithmeticError("closed-form cross-check failed for %r" % kind)
    return result


# -- density extraction ------------------------------------------------------


def meixner_parameters(array: DistributionArray):
    """(a, b) when the array is square with semicircle(a) diagonal cells and
    equal point-mass(b) off-diagonal cells (a shared rate, b = c); else None.
    """
    if array.J != frozenset(((1, 1), (1, 2), (2, 1), (2, 2))):
        return None
    p = array.order
    zero = as_scalar(0, array.mode)

    def matches(cell, pattern):
        return all(array.r(cell, k) == pattern.get(k, zero)
                   for k in range(1, p + 1))

    a = array.r((1, 1), 2) if p >= 2 else zero
    b = array.r((1, 2), 1)
    if a == 0:
        return None
    if not (matches((1, 1), {2: a}) and matches((2, 2), {2: a})
            and matches((1, 2), {1: b}) and matches((2, 1), {1: b})):
        return None
    return float(a), float(b)


def meixner_cauchy(a: float, b: float, z: complex) -> complex:
    """Closed-form transform G(z) = (b - s(z)) / (4a + 2bz - z^2) with the
    branch of s(z) = sqrt((z-b)^2 - 4a) asymptotic to z - b."""
    s = cmath.sqrt((z - b) ** 2 - 4 * a)
    if abs(s - (z - b)) > abs(-s - (z - b)):
        s = -s
    den = 4 * a + 2 * b * z - z * z
    return (b - s) / den


def meixner_density(a: float, b: float, x: float) -> float:
    """Continuous part sqrt(4a - (x-b)^2) / (pi (4a + 2bx - x^2)) on
    [b - 2 sqrt(a), b + 2 sqrt(a)], zero outside."""
    disc = 4 * a - (x - b) ** 2
    if disc <= 0:
        return 0.0
    return math.sqrt(disc) / (math.pi * (4 * a + 2 * b * x - x * x))


def meixner_atoms(a: float, b: float,
                  weight_floor: float = 1e-12) -> List[Tuple[float, float]]:
    """Atoms as residues of the closed form at the real zeros of the
    denominator z = b +- sqrt(b^2 + 4a); only one carries positive weight
    (none for b = 0)."""
    s = math.sqrt(b * b + 4 * a)
    out = []
    for z0, w in ((b + s, (b - abs(b)) / (-2 * s)),
                  (b - s, (b + abs(b)) / (2 * s))):
        if w > weight_floor:
            out.append((z0, w))
    return out


def cauchy_value(array: DistributionArray, z: complex,
                 max_iter: int = 500, tol: float = 1e-13) -> complex:
    """Numeric G(z) by damped iteration of the subordination fixed point.

    Works for any array with finitely many cumulants; Im z > 0 required.
    """
    if z.imag <= 0:
        raise ValueError("evaluation point must be in the upper half plane")
    cells = ((1, 1), (1, 2), (2, 1), (2, 2))
    r = {cell: [float(v) for v in array.r_series(cell).coeffs]
         for cell in cells}

    def r_eval(cell, u):
        total = 0.0
        for c in reversed(r[cell]):
            total = total * u + c
        return total

    g = {cell: 1.0 / z for cell in cells}
    for _ in range(max_iter):
        k = {cell: r_eval(cell, g[cell]) for cell in cells}
        new = {}
        for j in (1, 2):
            new[(j, j)] = 1.0 / (z - k[(j, j)] - k[(OFF[j], j)])
            new[(j, OFF[j])] = 1.0 / (z - k[(j, OFF[j])] - k[(OFF[j], j)])
        delta = max(abs(new[c] - g[c]) for c in cells)
        g = {c: 0.5 * g[c] + 0.5 * new[c] for c in cells}
        if delta < tol:
            break
    k11 = r_eval((1, 1), g[(1, 1)])
    k22 = r_eval((2, 2), g[(2, 2)])
    return 1.0 / (z - k11 - k22)


def stieltjes_density(array: DistributionArray, grid: Sequence[float],
                      eps: float):
    """Sampled density -Im G(x + i eps)/pi on the grid, plus the atom list.

    Uses the closed form when the array matches the semicircle/point-mass
    pattern (then atoms come from residues); otherwise evaluates the
    subordination fixed point numerically and reports no atoms.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if array.mode != FLOAT:
        raise ValueError("density extraction requires float mode")
    params = meixner_parameters(array)
    rows = []
    for x in grid:
        z = complex(x, eps)
        g = (meixner_cauchy(params[0], params[1], z) if params
             else cauchy_value(array, z))
        rows.append((float(x), -g.imag / math.pi))
    atoms = meixner_atoms(*params) if params else []
    return rows, atoms
