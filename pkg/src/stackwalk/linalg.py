"""Exact rank and null-space computations over prime fields and the rationals.

Matrices arrive as :class:`SparseMatrix`; the eliminations work on row
dictionaries ``{col: value}``.  Over ``F_2`` rows are packed into Python
integers and reduced with XOR.  Over ``Q`` unit pivots are eliminated
first (exact, no coefficient growth), and whatever remains goes through
Bareiss fraction-free elimination on integers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction]
Row = dict[int, int]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field: ``F_p`` for a prime p, or ``Q`` when characteristic is 0."""

    characteristic: int

    def __post_init__(self):
        p = self.characteristic
        if p != 0 and (p > 2**31 or not _is_prime(p)):
            raise ValueError(f"characteristic must be 0 or a prime <= 2^31, got {p}")

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    def __str__(self) -> str:
        return "Q" if self.characteristic == 0 else f"F{self.characteristic}"

    @classmethod
    def parse(cls, text: str | int) -> "FieldSpec":
        s = str(text).strip().upper()
        if s in ("Q", "QQ", "0"):
            return cls(0)
        return cls(int(s.lstrip("FZ/")))


F2 = FieldSpec(2)
QQ = FieldSpec(0)


@lru_cache(maxsize=64)
def _inverse_table(p: int) -> tuple[int, ...]:
    inv = [0, 1] + [0] * (p - 2)
    for a in range(2, p):
        inv[a] = (p - (p // a) * inv[p % a] % p) % p
    return tuple(inv)


def _inverter(p: int):
    if p <= 1 << 16:
        table = _inverse_table(p)
        return table.__getitem__
    return lambda a: pow(a, -1, p)


@dataclass(frozen=True)
class SparseMatrix:
    rows: int
    cols: int
    entries: dict[tuple[int, int], Scalar] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (r, c), v in self.entries.items():
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise IndexError(f"entry ({r}, {c}) outside {self.rows}x{self.cols}")
            if v != 0:
                clean[(r, c)] = v
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, dense: Sequence[Sequence[Scalar]]) -> "SparseMatrix":
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        return cls(rows, cols, {(i, j): v for i, row in enumerate(dense)
                                for j, v in enumerate(row) if v != 0})

    @classmethod
    def from_rows(cls, rows: Sequence[dict[int, Scalar]], cols: int) -> "SparseMatrix":
        return cls(len(rows), cols, {(i, j): v for i, r in enumerate(rows)
                                     for j, v in r.items()})

    def to_dense(self) -> list[list[Scalar]]:
        out: list[list[Scalar]] = [[0] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_dicts(self) -> list[dict[int, Scalar]]:
        rows: list[dict[int, Scalar]] = [{} for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(self.cols, self.rows,
                            {(c, r): v for (r, c), v in self.entries.items()})


# ---------------------------------------------------------------------------
# rank kernels on row lists


def rank_gf2_bits(rows: Iterable[int]) -> int:
    """Rank over F_2 of rows packed as integer bitsets."""
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            h = r.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = r
                break
            r ^= p
    return len(pivots)


def _to_int_rows_mod(rows: Iterable[dict[int, Scalar]], p: int) -> list[Row]:
    out = []
    for r in rows:
        d = {}
        for c, v in r.items():
            if isinstance(v, Fraction):
                v = v.numerator * pow(v.denominator, -1, p)
            v %= p
            if v:
                d[c] = v
        if d:
            out.append(d)
    return out


def rank_mod_p(rows: Iterable[dict[int, Scalar]], p: int) -> int:
    if p == 2:
        packed = []
        for r in _to_int_rows_mod(rows, 2):
            m = 0
            for c in r:
                m |= 1 << c
            packed.append(m)
        return rank_gf2_bits(packed)
    inv = _inverter(p)
    pivots: dict[int, Row] = {}  # pivot column -> row normalised to 1 there
    for r in _to_int_rows_mod(rows, p):
        while r:
            c = min(r)
            piv = pivots.get(c)
            if piv is None:
                s = inv(r[c])
                pivots[c] = {k: v * s % p for k, v in r.items()}
                break
            f = r[c]
            for k, v in piv.items():
                nv = (r.get(k, 0) - f * v) % p
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
    return len(pivots)


def _integer_rows(rows: Iterable[dict[int, Scalar]]) -> list[Row]:
    out = []
    for r in rows:
        if not r:
            continue
        den = 1
        for v in r.values():
            if isinstance(v, Fraction):
                den = den * v.denominator // gcd(den, v.denominator)
        d = {c: int(v * den) for c, v in r.items() if v != 0}
        if d:
            out.append(d)
    return out


def _bareiss_rank(dense: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination; all intermediate values are integers."""
    m = [row[:] for row in dense]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot = next((i for i in range(rank, nrows) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        pv = m[rank][col]
        for i in range(rank + 1, nrows):
            a = m[i][col]
            row_i, row_r = m[i], m[rank]
            for j in range(col + 1, ncols):
                row_i[j] = (pv * row_i[j] - a * row_r[j]) // prev
            row_i[col] = 0
        prev = pv
        rank += 1
        if rank == nrows:
            break
    return rank


def rank_rational(rows: Iterable[dict[int, Scalar]]) -> int:
    # Unit pivots: each new pivot row is already reduced by all earlier
    # pivots, so reducing by creation order terminates without fill cycles.
    pivots: dict[int, Row] = {}
    order: dict[int, int] = {}
    leftover: list[Row] = []

    def reduce(r: Row) -> Row:
        while True:
            hits = [c for c in r if c in pivots]
            if not hits:
                return r
            c = min(hits, key=order.__getitem__)
            prow = pivots[c]
            f = r[c] * prow[c]  # prow[c] is +-1, its own inverse
            for k, v in prow.items():
                nv = r.get(k, 0) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)

    for r in _integer_rows(rows):
        r = reduce(r)
        if not r:
            continue
        unit = [c for c, v in r.items() if v in (1, -1)]
        if unit:
            c = min(unit)
            order[c] = len(order)
            pivots[c] = r
        else:
            leftover.append(r)
    work = [w for w in (reduce(r) for r in leftover) if w]
    if not work:
        return len(pivots)
    cols = sorted({c for r in work for c in r})
    idx = {c: j for j, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in work]
    for i, r in enumerate(work):
        for c, v in r.items():
            dense[i][idx[c]] = v
    return len(pivots) + _bareiss_rank(dense)


def row_rank(rows: Iterable[dict[int, Scalar]], field_: FieldSpec) -> int:
    """Rank of the span of ``rows`` over the field."""
    if field_.is_rational:
        return rank_rational(rows)
    return rank_mod_p(rows, field_.characteristic)


def rank(m: SparseMatrix, field_: FieldSpec) -> int:
    # row-major elimination on the transpose is column-major on m
    cols_as_rows = m.transpose().row_dicts() if m.cols <= m.rows else m.row_dicts()
    return row_rank(cols_as_rows, field_)


# ---------------------------------------------------------------------------
# null spaces


def _normalise(v: Scalar, field_: FieldSpec) -> Scalar:
    if field_.is_rational:
        return Fraction(v)
    p = field_.characteristic
    if isinstance(v, Fraction):
        return v.numerator * pow(v.denominator, -1, p) % p
    return v % p


def _rref_rows(rows: list[dict[int, Scalar]], field_: FieldSpec):
    """Reduced row echelon form; returns {pivot_col: row} with 1 at the pivot."""
    p = field_.characteristic
    inv = (lambda a: 1 / a) if field_.is_rational else _inverter(p)
    pivots: dict[int, dict[int, Scalar]] = {}
    for raw in rows:
        r = {c: _normalise(v, field_) for c, v in raw.items()}
        r = {c: v for c, v in r.items() if v != 0}
        for c, piv in pivots.items():
            a = r.get(c)
            if a:
                for k, v in piv.items():
                    nv = r.get(k, 0) - a * v
                    if not field_.is_rational:
                        nv %= p
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        if not r:
            continue
        c0 = min(r)
        s = inv(r[c0])
        r = {k: (v * s if field_.is_rational else v * s % p) for k, v in r.items()}
        for c, piv in pivots.items():
            a = piv.get(c0)
            if a:
                for k, v in r.items():
                    nv = piv.get(k, 0) - a * v
                    if not field_.is_rational:
                        nv %= p
                    if nv:
                        piv[k] = nv
                    else:
                        piv.pop(k, None)
        pivots[c0] = r
    return pivots


def kernel_rows(rows: list[dict[int, Scalar]], ncols: int,
                field_: FieldSpec) -> list[dict[int, Scalar]]:
    """Sparse basis of {x : r·x = 0 for every row r}."""
    pivots = _rref_rows(rows, field_)
    p = field_.characteristic
    basis = []
    for free in range(ncols):
        if free in pivots:
            continue
        vec: dict[int, Scalar] = {free: Fraction(1) if field_.is_rational else 1}
        for pc, prow in pivots.items():
            a = prow.get(free)
            if a:
                vec[pc] = -a if field_.is_rational else (-a) % p
        basis.append(vec)
    return basis


def kernel_basis(m: SparseMatrix, field_: FieldSpec) -> list[list[Scalar]]:
    """Basis of the null space of ``m`` as dense vectors of length ``m.cols``."""
    sparse = kernel_rows(m.row_dicts(), m.cols, field_)
    zero: Scalar = Fraction(0) if field_.is_rational else 0
    out = []
    for vec in sparse:
        dense = [zero] * m.cols
        for c, v in vec.items():
            dense[c] = v
        out.append(dense)
    return out


def rank_dense_reference(dense: Sequence[Sequence[Scalar]], field_: FieldSpec) -> int:
    """Plain textbook elimination over Fractions or residues; a second route for checks."""
    p = field_.characteristic
    if field_.is_rational:
        m = [[Fraction(v) for v in row] for row in dense]
    else:
        m = [[_normalise(v, field_) for v in row] for row in dense]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pv = m[r][c]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                if field_.is_rational:
                    f = m[i][c] / pv
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
                else:
                    f = m[i][c] * pow(pv, -1, p) % p
                    m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
    return r
