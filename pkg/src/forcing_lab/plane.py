"""Finite partial functions on the grid: conditions for adding many reals.

A PlaneCondition maps finitely many (row, col) cells to bits. Order is
reverse inclusion of cell maps: p is stronger than q when p's cells extend
q's. A GenericPlane is the filter-side object: a total assignment built
from finitely many commitments, finalized row streams, and a default fill
rule for everything never touched.
"""

from __future__ import annotations

from types import MappingProxyType
from typing import Dict, Iterable, Optional, Tuple

from .bits import BitStream, BitString, ConstTail, PrngTail, derive_seed, prng_bit
from .errors import IncompatibleConditions

Cell = Tuple[int, int]


class PlaneCondition:
    """Immutable finite partial function (row, col) -> bit."""

    __slots__ = ("cells",)

    def __init__(self, cells: Optional[Dict[Cell, int]] = None):
        self.cells = MappingProxyType(dict(cells or {}))

    @classmethod
    def empty(cls) -> "PlaneCondition":
        return cls()

    @classmethod
    def from_items(cls, items: Iterable[Tuple[int, int, int]]) -> "PlaneCondition":
        return cls({(r, c): b for r, c, b in items})

    @property
    def is_empty(self) -> bool:
        return not self.cells

    @property
    def support(self):
        return frozenset(self.cells)

    def get(self, row: int, col: int):
        return self.cells.get((row, col))

    def with_cell(self, row: int, col: int, bit: int) -> "PlaneCondition":
        old = self.cells.get((row, col))
        if old is not None and old != bit:
            raise IncompatibleConditions(
                f"cell ({row},{col}) already set to {old}", cell=(row, col))
        new = dict(self.cells)
        new[(row, col)] = bit
        return PlaneCondition(new)

    def leq(self, other: "PlaneCondition") -> bool:
        """Stronger-or-equal: self's cell map extends other's."""
        for cell, bit in other.cells.items():
            if self.cells.get(cell) != bit:
                return False
        return True

    def compatible(self, other: "PlaneCondition") -> bool:
        for cell, bit in other.cells.items():
            mine = self.cells.get(cell)
            if mine is not None and mine != bit:
                return False
        return True

    def row_cells(self, row: int) -> Dict[int, int]:
        return {c: b for (r, c), b in self.cells.items() if r == row}

    def max_row(self) -> int:
        return max((r for r, _ in self.cells), default=-1)

    def max_col(self) -> int:
        return max((c for _, c in self.cells), default=-1)

    def to_json(self):
        return [[r, c, self.cells[(r, c)]] for r, c in sorted(self.cells)]

    @classmethod
    def from_json(cls, items) -> "PlaneCondition":
        return cls.from_items((r, c, b) for r, c, b in items)

    def __eq__(self, other):
        if not isinstance(other, PlaneCondition):
            return NotImplemented
        return self.cells == other.cells

    def __hash__(self):
        return hash(frozenset(self.cells.items()))

    def __len__(self):
        return len(self.cells)

    def __repr__(self):
        if len(self.cells) <= 6:
            inner = ",".join(f"({r},{c})={b}" for (r, c), b in sorted(self.cells.items()))
            return f"PlaneCondition({inner})"
        return f"PlaneCondition({len(self.cells)} cells)"


def merge_conditions(p: PlaneCondition, q: PlaneCondition) -> PlaneCondition:
    """Union of the two cell maps; the greatest lower bound when compatible."""
    merged = dict(p.cells)
    for cell, bit in q.cells.items():
        old = merged.get(cell)
        if old is not None and old != bit:
            raise IncompatibleConditions(
                f"conditions disagree at cell {cell}", cell=cell)
        merged[cell] = bit
    return PlaneCondition(merged)


def factor_plane(p: PlaneCondition, n: int):
    """Split by row: cells with row < n, and cells with row >= n."""
    low = {cell: b for cell, b in p.cells.items() if cell[0] < n}
    high = {cell: b for cell, b in p.cells.items() if cell[0] >= n}
    return PlaneCondition(low), PlaneCondition(high)


class GenericPlane:
    """A total function on the grid standing in for a generic filter.

    Rows present in `rows` are finalized streams; other cells come from the
    accumulated commitments, and cells never touched by either default to
    the fill rule (seeded pseudo-random bits, or 0 when seed is None).
    """

    def __init__(self, commitments: PlaneCondition = None,
                 rows: Optional[Dict[int, BitStream]] = None,
                 fill_seed=None):
        self.commitments = commitments if commitments is not None else PlaneCondition.empty()
        self.rows = dict(rows or {})
        self.fill_seed = fill_seed

    def fill_bit(self, row: int, col: int) -> int:
        if self.fill_seed is None:
            return 0
        return prng_bit(derive_seed(self.fill_seed, "plane-fill", row), col)

    def cell(self, row: int, col: int) -> int:
        stream = self.rows.get(row)
        if stream is not None:
            return stream.bit(col)
        committed = self.commitments.get(row, col)
        if committed is not None:
            return committed
        return self.fill_bit(row, col)

    def row_stream(self, row: int) -> BitStream:
        """The row as a stream; consistent with cell() everywhere."""
        stream = self.rows.get(row)
        if stream is not None:
            return stream
        cols = self.commitments.row_cells(row)
        width = max(cols, default=-1) + 1
        prefix = BitString.from_bits(self.cell(row, c) for c in range(width))
        if self.fill_seed is None:
            tail = ConstTail(0)
        else:
            tail = PrngTail(derive_seed(self.fill_seed, "plane-fill", row))
        return BitStream(prefix, tail)

    def restriction(self, size: int) -> PlaneCondition:
        """The size x size corner of the plane as a finite condition."""
        return PlaneCondition({(r, c): self.cell(r, c)
                               for r in range(size) for c in range(size)})

    def contains(self, p: PlaneCondition) -> bool:
        """Whether p is a restriction of this plane (p is in its filter)."""
        return all(self.cell(r, c) == b for (r, c), b in p.cells.items())

    def to_json(self):
        return {"commitments": self.commitments.to_json(),
                "rows": {str(r): self.rows[r].to_json() for r in sorted(self.rows)},
                "fill_seed": self.fill_seed}

    @classmethod
    def from_json(cls, obj) -> "GenericPlane":
        from .bits import stream_from_json
        rows = {int(r): stream_from_json(s) for r, s in obj.get("rows", {}).items()}
        return cls(PlaneCondition.from_json(obj.get("commitments", [])),
                   rows=rows, fill_seed=obj.get("fill_seed"))
