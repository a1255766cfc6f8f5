"""2x2 arrays of distributions given through their free-cumulant sequences."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Mapping, Sequence, Tuple

from .series import RATIONAL, TruncatedSeries, as_scalar

Cell = Tuple[int, int]

ALL_CELLS: Tuple[Cell, ...] = ((1, 1), (1, 2), (2, 1), (2, 2))

SHAPES: Dict[str, frozenset] = {
    "square": frozenset(ALL_CELLS),
    "diagonal": frozenset({(1, 1), (2, 2)}),
    "lower_triangular": frozenset({(1, 1), (2, 1), (2, 2)}),
    "upper_anti_triangular": frozenset({(1, 1), (1, 2), (2, 1)}),
    "column": frozenset({(1, 1), (2, 1)}),
}


@dataclass(frozen=True)
class NamedLaw:
    """A distribution given by name: semicircle(a), point_mass(b), or an
    explicit cumulant sequence."""

    kind: str
    params: tuple

    @classmethod
    def semicircle(cls, a) -> "NamedLaw":
        return cls("semicircle", (a,))

    @classmethod
    def point_mass(cls, b) -> "NamedLaw":
        return cls("point_mass", (b,))

    @classmethod
    def custom(cls, cumulants: Sequence) -> "NamedLaw":
        return cls("custom", tuple(cumulants))

    def cumulants(self, order: int, mode: str = RATIONAL) -> tuple:
        """r(1..order) for this law."""
        zero = as_scalar(0, mode)
        if self.kind == "semicircle":
            out = [zero] * order
            if order >= 2:
                out[1] = as_scalar(self.params[0], mode)
            return tuple(out)
        if self.kind == "point_mass":
            out = [zero] * order
            if order >= 1:
                out[0] = as_scalar(self.params[0], mode)
            return tuple(out)
        if self.kind == "custom":
            vals = [as_scalar(v, mode) for v in self.params]
            vals += [zero] * (order - len(vals))
            return tuple(vals[:order])
        raise ValueError("unknown law kind %r" % (self.kind,))


@dataclass(frozen=True)
class DistributionArray:
    """Shape set J with a free-cumulant sequence r(1..p) per cell.

    Cells outside J behave as identically zero cumulants.  All cells share
    one scalar mode and one cumulant order p.
    """

    cells: Tuple[Tuple[Cell, tuple], ...]
    mode: str = RATIONAL

    def __post_init__(self):
        if not self.cells:
            raise ValueError("array needs at least one cell")
        orders = {len(c) for _, c in self.cells}
        if len(orders) != 1:
            raise ValueError("all cells must share one cumulant order")
        if orders == {0}:
            raise ValueError("cumulant sequences must have order >= 1")
        for cell, _ in self.cells:
            if cell not in ALL_CELLS:
                raise ValueError("cell %r outside the 2x2 index set" % (cell,))

    @classmethod
    def from_cumulants(cls, cumulants: Mapping[Cell, Sequence],
                       mode: str = RATIONAL) -> "DistributionArray":
        cells = tuple(sorted(
            (cell, tuple(as_scalar(v, mode) for v in seq))
            for cell, seq in cumulants.items()))
        return cls(cells, mode)

    @classmethod
    def from_laws(cls, laws: Mapping[Cell, NamedLaw], order: int,
                  mode: str = RATIONAL) -> "DistributionArray":
        return cls.from_cumulants(
            {cell: law.cumulants(order, mode) for cell, law in laws.items()},
            mode)

    @property
    def J(self) -> frozenset:
        return frozenset(cell for cell, _ in self.cells)

    @property
    def order(self) -> int:
        return len(self.cells[0][1])

    def cumulant_map(self) -> Dict[Cell, tuple]:
        return dict(self.cells)

    def padded(self, order: int) -> "DistributionArray":
        """Extend every cell with zero cumulants up to r(order)."""
        if self.order >= order:
            return self
        zero = as_scalar(0, self.mode)
        pad = (zero,) * (order - self.order)
        return DistributionArray(tuple((c, seq + pad) for c, seq in self.cells),
                                 self.mode)

    def r(self, cell: Cell, k: int):
        """Cumulant r_cell(k); zero outside J."""
        if not 1 <= k <= self.order:
            raise ValueError("cumulant order %d out of range" % k)
        for c, seq in self.cells:
            if c == cell:
                return seq[k - 1]
        return as_scalar(0, self.mode)

    def r_series(self, cell: Cell) -> TruncatedSeries:
        """R-transform tail of the cell: coefficient of z^k is r(k+1)."""
        for c, seq in self.cells:
            if c == cell:
                return TruncatedSeries(seq, self.mode)
        return TruncatedSeries.zero(self.order - 1, self.mode)


def row_identical_array(kind: str, law1: NamedLaw, law2: NamedLaw,
                        order: int, mode: str = RATIONAL) -> DistributionArray:
    """Array realizing a binary convolution: row 1 carries law1, row 2 law2,
    on the shape matching *kind*."""
    shape_for_kind = {
        "free": "square",
        "monotone": "lower_triangular",
        "boolean": "diagonal",
        "s_free": "upper_anti_triangular",
        "orthogonal": "column",
    }
    if kind not in shape_for_kind:
        raise ValueError("unknown convolution kind %r" % (kind,))
    J = SHAPES[shape_for_kind[kind]]
    laws = {cell: (law1 if cell[0] == 1 else law2) for cell in J}
    return DistributionArray.from_laws(laws, order, mode)
