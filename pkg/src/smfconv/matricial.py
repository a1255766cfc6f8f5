"""Unit-valued transform layer: assembling the matricial R-transform,
inverting its Cauchy argument, checking the linearization residuals in all
states, and reconstructing the transform uniquely from moment data.

A unit-valued series is stored as four scalar series over the q basis.
Transform series use the tail convention of :func:`series.invert_pole_series`:
coefficient k of an R-side series is c_{k+1} (so the series is the regular
part of 1/z + R), and coefficient k of a B-side series is b_{k+1} (the
multiplicative inverse being z + z^2 * tail), with c_0 = b_0 = 1 implicit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Tuple

from .arrays import DistributionArray
from .fock import FockModel
from .series import TruncatedSeries, as_scalar, invert_pole_series
from .units import QCELLS, UnitElement

# q-component of the assembled transform <- pairwise sums of cell transforms
Q_SUMMANDS = {
    (1, 1): ((1, 1), (2, 2)),
    (2, 1): ((1, 1), (2, 1)),
    (1, 2): ((2, 2), (1, 2)),
    (2, 2): ((1, 2), (2, 1)),
}


@dataclass(frozen=True)
class UnitSeries:
    """Series with unit-algebra coefficients, as four scalar series."""

    components: Tuple[Tuple[Tuple[int, int], TruncatedSeries], ...]

    def __post_init__(self):
        cells = tuple(c for c, _ in self.components)
        if cells != QCELLS:
            raise ValueError("components must cover the q basis in order")
        orders = {s.order for _, s in self.components}
        modes = {s.mode for _, s in self.components}
        if len(orders) != 1 or len(modes) != 1:
            raise ValueError("components must share order and mode")

    @classmethod
    def from_map(cls, comp: Dict[Tuple[int, int], TruncatedSeries]):
        return cls(tuple((qc, comp[qc]) for qc in QCELLS))

    def component(self, qcell) -> TruncatedSeries:
        return dict(self.components)[tuple(qcell)]

    @property
    def order(self) -> int:
        return self.components[0][1].order

    @property
    def mode(self) -> str:
        return self.components[0][1].mode

    def coefficient(self, n: int) -> UnitElement:
        return UnitElement(tuple(s.coeffs[n] for _, s in self.components),
                           self.mode)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UnitSeries):
            return NotImplemented
        return all(a == b for (_, a), (_, b)
                   in zip(self.components, other.components))

    __hash__ = None

    def agrees(self, other: "UnitSeries", rel: float = 1e-10) -> bool:
        return all(a.agrees(b, rel) for (_, a), (_, b)
                   in zip(self.components, other.components))


def assemble_matricial_r(array: DistributionArray, order: int) -> UnitSeries:
    """Sum of the cell R-transforms weighted by their internal units.

    Over the q basis each component is the sum of two cell transforms:
    q11 <- (1,1)+(2,2), q21 <- (1,1)+(2,1), q12 <- (2,2)+(1,2),
    q22 <- (1,2)+(2,1); each is the R-transform of the free convolution of
    the two cell distributions.
    """
    if array.order < order + 1:
        raise ValueError("need cumulants to order %d" % (order + 1))
    comp = {}
    for qc, (c1, c2) in Q_SUMMANDS.items():
        s = (array.r_series(c1) + array.r_series(c2)).truncate(order)
        comp[qc] = s
    return UnitSeries.from_map(comp)


def invert_C(r: UnitSeries, order: int | None = None) -> UnitSeries:
    """Multiplicative inverse of 1/z + R, componentwise over the q basis."""
    return UnitSeries.from_map(
        {qc: invert_pole_series(r.component(qc), order)
         for qc in QCELLS})


def b_elements(B: UnitSeries, count: int) -> List[UnitElement]:
    """Inverse-series coefficients b_0..b_count as unit elements."""
    if count > B.order + 1:
        raise ValueError("B holds b_1..b_%d, requested b_%d"
                         % (B.order + 1, count))
    out = [UnitElement.identity(B.mode)]
    for n in range(count):
        out.append(B.coefficient(n))
    return out


def _alternating_sums(model: FockModel, b_ops, mid_op, state: str,
                      m_max: int):
    """S_m = sum_{k=1}^m sum_{n1+..+nk=m-k} <b_{n1} M b_{n2} .. M b_{nk}>."""
    base = model.state_vector(state)
    ref = next(iter(base))
    zero = as_scalar(0, model.mode)

    def vec_add(acc, v):
        for w, c in v.items():
            acc[w] = acc.get(w, zero) + c
        return acc

    # U[k][r] = sum over compositions of r into k parts, applied to base
    U_prev = {r: b_ops[r].apply(base) for r in range(m_max)}
    sums = []
    for m in range(1, m_max + 1):
        sums.append(U_prev.get(m - 1, {}).get(ref, zero))
    level = U_prev
    for k in range(2, m_max + 1):
        nxt = {}
        for r in range(m_max - k + 1):
            acc: dict = {}
            for n1 in range(r + 1):
                prev = level.get(r - n1)
                if not prev:
                    continue
                vec_add(acc, b_ops[n1].apply(mid_op.apply(prev)))
            nxt[r] = {w: c for w, c in acc.items() if c != 0}
        for m in range(k, m_max + 1):
            sums[m - 1] += nxt.get(m - k, {}).get(ref, zero)
        level = nxt
    return sums


def linearization_residuals(model: FockModel, B: UnitSeries, m_max: int):
    """Residuals of the vacuum-state linearization identity; the expected
    value is 1 at m = 1 and 0 for every larger m."""
    if m_max > model.depth:
        raise ValueError("m_max %d exceeds model depth %d"
                         % (m_max, model.depth))
    b_ops = [model.unit_op(b) for b in b_elements(B, m_max)]
    return _alternating_sums(model, b_ops, model.total(), "phi", m_max)


def compressed_residuals(model: FockModel, B: UnitSeries, m_max: int):
    """Per-cell residual table of the compressed identity.

    Cell (i,j) pairs the compression P_{i,j} (1 - q11 on the diagonal,
    1 - 1_{j,j} off it) with the vector state at e_{i,i}; each row of the
    table is expected to read 1, 0, 0, ...
    """
    if m_max > model.depth:
        raise ValueError("need model depth >= m_max")
    b_ops = [model.unit_op(b) for b in b_elements(B, m_max)]
    out = {}
    for cell in sorted(model.J):
        state = "phi1" if cell[0] == 1 else "phi2"
        mid = model.compressed_total(cell)
        out[cell] = _alternating_sums(model, b_ops, mid, state, m_max)
    return out


def scalar_r_as_unit_series(r: TruncatedSeries) -> UnitSeries:
    """A scalar series as a multiple of the identity element."""
    return UnitSeries.from_map({qc: r for qc in QCELLS})


def _solve_b_value(model: FockModel, b_ops, mid_op, state: str, m: int):
    """Known-part of the level-(m+1) residual: everything except <b_m>."""
    sums = _alternating_sums(model, b_ops + [model.unit_op(
        UnitElement.zero(model.mode))], mid_op, state, m + 1)
    return -sums[m]


def reconstruct_unique(model: FockModel, order: int) -> UnitSeries:
    """Recover the matricial R-transform from moment data alone.

    Solves the vacuum-state recursion for the q11 components and the two
    compressed conjugate-state recursions for q21 and q12; the q22
    component follows from the linear relation Q22 = Q21 + Q12 - Q11 on
    the Cauchy-argument side.  Needs one cell in each row of J and model
    depth at least order + 1.
    """
    if order + 1 > model.depth:
        raise ValueError("need model depth >= order + 1")
    mode = model.mode
    row_cell = {}
    for i in (1, 2):
        for cell in ((i, i), (i, 3 - i)):
            if cell in model.J:
                row_cell[i] = cell
                break
    if set(row_cell) != {1, 2}:
        raise ValueError("reconstruction needs a cell in each row of J")

    mids = {
        "phi": ("phi", model.total()),
        "phi1": ("phi1", model.compressed_total(row_cell[1])),
        "phi2": ("phi2", model.compressed_total(row_cell[2])),
    }
    zero = as_scalar(0, mode)
    one = as_scalar(1, mode)
    b_seq = {qc: [one] for qc in QCELLS}      # b_0..b_m per component
    c_seq = {qc: [] for qc in QCELLS}         # c_1..c_m per component
    b_ops = [model.unit_op(UnitElement.identity(mode))]

    def c_from_b(qc, m):
        # sum_{i+j=m} c_i b_j = 0, c_0 = b_0 = 1
        s = zero
        for i in range(1, m):
            s += c_seq[qc][i - 1] * b_seq[qc][m - i]
        return -b_seq[qc][m] - s

    def b_from_c(qc, m):
        s = zero
        for i in range(1, m):
            s += c_seq[qc][i - 1] * b_seq[qc][m - i]
        return -s - c_seq[qc][m - 1]

    for m in range(1, order + 2):
        values = {}
        for state, (st, mid) in mids.items():
            values[state] = _solve_b_value(model, b_ops, mid, st, m)
        b_seq[(1, 1)].append(values["phi"])
        b_seq[(2, 1)].append(values["phi1"])
        b_seq[(1, 2)].append(values["phi2"])
        for qc in ((1, 1), (2, 1), (1, 2)):
            c_seq[qc].append(c_from_b(qc, m))
        c22 = (c_seq[(2, 1)][m - 1] + c_seq[(1, 2)][m - 1]
               - c_seq[(1, 1)][m - 1])
        c_seq[(2, 2)].append(c22)
        b_seq[(2, 2)].append(b_from_c((2, 2), m))
        b_ops.append(model.unit_op(UnitElement(
            tuple(b_seq[qc][m] for qc in QCELLS), mode)))

    return UnitSeries.from_map(
        {qc: TruncatedSeries(c_seq[qc][:order + 1], mode) for qc in QCELLS})
