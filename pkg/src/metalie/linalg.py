"""Exact Gaussian elimination over Q or F_p on sparse row vectors.

Rows are dicts ``{column_key: coefficient}``; column keys only need to be
hashable and mutually comparable.
"""
from __future__ import annotations

from typing import Dict, Hashable, List, Optional, Sequence

from .ring import Field, Scalar

Row = Dict[Hashable, Scalar]


def _sub_scaled(dst: Row, src: Row, c: Scalar, p: int) -> None:
    for k, v in src.items():
        w = dst.get(k, 0) - c * v
        if p:
            w %= p
        if w:
            dst[k] = w
        else:
            dst.pop(k, None)


class Echelon:
    """Incrementally maintained echelon basis; answers span and coordinate queries.

    Each stored row remembers which input combination produced it, so
    ``coordinates`` returns weights on the original inputs.
    """

    def __init__(self, field: Field):
        self.field = field
        self.rows: Dict[Hashable, Row] = {}  # pivot column -> row with pivot coeff 1
        self.combos: Dict[Hashable, Row] = {}
        self.count = 0

    def _reduce(self, v: Row, combo: Row):
        p = self.field.p
        v = dict(v)
        while v:
            piv = next((k for k in sorted(v) if k in self.rows), None)
            if piv is None:
                break
            c = v[piv]
            _sub_scaled(v, self.rows[piv], c, p)
            _sub_scaled(combo, self.combos[piv], c, p)
        return v, combo

    def add(self, v: Row) -> bool:
        """Insert v; True iff it was independent of the rows so far."""
        idx = self.count
        self.count += 1
        v, combo = self._reduce(v, {idx: self.field.convert(1)})
        if not v:
            return False
        piv = min(v)
        inv = self.field.div(1, v[piv])
        p = self.field.p
        norm = {k: (c * inv) % p if p else c * inv for k, c in v.items()}
        ncombo = {k: (c * inv) % p if p else c * inv for k, c in combo.items()}
        # keep the basis fully reduced on the new pivot
        for k in list(self.rows):
            row = self.rows[k]
            if piv in row:
                c = row[piv]
                _sub_scaled(row, norm, c, p)
                _sub_scaled(self.combos[k], ncombo, c, p)
        self.rows[piv] = norm
        self.combos[piv] = ncombo
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, v: Row) -> bool:
        rem, _ = self._reduce(v, {})
        return not rem

    def coordinates(self, v: Row) -> Optional[Row]:
        """Weights w on inserted vectors (by insertion index) with sum w_i v_i = v."""
        rem, combo = self._reduce(v, {})
        if rem:
            return None
        p = self.field.p
        return {k: (-c) % p if p else -c for k, c in combo.items() if c}


def rank(rows: Sequence[Row], field: Field) -> int:
    e = Echelon(field)
    for r in rows:
        e.add(r)
    return e.rank


def independent_subset(rows: Sequence[Row], field: Field) -> List[int]:
    """Indices of a greedy (lowest index first) maximal independent subset."""
    e = Echelon(field)
    return [i for i, r in enumerate(rows) if e.add(r)]


def invert(matrix: Sequence[Sequence[Scalar]], field: Field) -> List[List[Scalar]]:
    """Inverse of a square matrix by Gauss-Jordan; raises on singular input."""
    n = len(matrix)
    p = field.p
    conv = field.convert
    aug = [[conv(c) for c in row] + [conv(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise ValueError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = field.div(1, aug[col][col])
        aug[col] = [(c * inv) % p if p else c * inv for c in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                c = aug[r][col]
                aug[r] = [(a - c * b) % p if p else a - c * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]
