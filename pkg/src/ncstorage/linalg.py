"""Dense matrices over GF(2^m).

Row-vector convention throughout: a coding vector is a length-k row and a
generator matrix is n x k with one coding vector per row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch, DuplicatePoint, SingularMatrix
from .galois import FieldSpec, get_field

Row = tuple[int, ...]


@dataclass(frozen=True)
class GfMatrix:
    spec: FieldSpec
    data: tuple[Row, ...]

    def __post_init__(self):
        widths = {len(r) for r in self.data}
        if len(widths) > 1:
            raise DimensionMismatch(f"ragged rows: widths {sorted(widths)}")
        q = self.spec.q
        for r in self.data:
            for v in r:
                if not 0 <= v < q:
                    raise ValueError(f"entry {v} not in {self.spec}")

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Iterable[Iterable[int]]) -> "GfMatrix":
        return cls(spec, tuple(tuple(int(v) for v in r) for r in rows))

    @classmethod
    def identity(cls, spec: FieldSpec, k: int) -> "GfMatrix":
        return cls(spec, tuple(unit_vector(k, i) for i in range(k)))

    @classmethod
    def zeros(cls, spec: FieldSpec, rows: int, cols: int) -> "GfMatrix":
        return cls(spec, tuple((0,) * cols for _ in range(rows)))

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0]) if self.data else 0

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> Row:
        return self.data[i]

    def select_rows(self, idx: Sequence[int]) -> "GfMatrix":
        return GfMatrix(self.spec, tuple(self.data[i] for i in idx))

    def transpose(self) -> "GfMatrix":
        return GfMatrix(self.spec, tuple(zip(*self.data)))

    def with_entry(self, i: int, j: int, value: int) -> "GfMatrix":
        rows = [list(r) for r in self.data]
        rows[i][j] = value
        return GfMatrix.from_rows(self.spec, rows)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]

    def __str__(self) -> str:
        return "\n".join(" ".join(f"{v:3d}" for v in r) for r in self.data)


def unit_vector(k: int, i: int) -> Row:
    return tuple(1 if j == i else 0 for j in range(k))


def mat_mul(a: GfMatrix, b: GfMatrix) -> GfMatrix:
    if a.spec != b.spec:
        raise DimensionMismatch(f"field mismatch: {a.spec} vs {b.spec}")
    if a.cols != b.rows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    f = get_field(a.spec)
    bt = list(zip(*b.data)) if b.data else []
    return GfMatrix(a.spec, tuple(tuple(f.dot(r, c) for c in bt) for r in a.data))


def vec_mat(spec: FieldSpec, x: Sequence[int], a: GfMatrix) -> Row:
    """Row vector times matrix: sum_i x[i] * a.row(i)."""
    if len(x) != a.rows:
        raise DimensionMismatch(f"vector of length {len(x)} vs {a.rows} rows")
    f = get_field(spec)
    mt = f.mul_table
    out = [0] * a.cols
    for xi, r in zip(x, a.data):
        if xi:
            mrow = mt[xi]
            for j, v in enumerate(r):
                out[j] ^= mrow[v]
    return tuple(out)


def _eliminate(spec: FieldSpec, rows: list[list[int]], ncols: int, reduce_above: bool):
    """In-place Gaussian elimination; returns (rank, pivot columns, product of pivots).

    Pivot choice is the first nonzero entry in the column.  Row swaps do not
    change the determinant's sign in characteristic 2.
    """
    f = get_field(spec)
    mt, inv = f.mul_table, f.inv_table
    rank = 0
    det = 1
    pivots = []
    nrows = len(rows)
    for c in range(ncols):
        p = next((r for r in range(rank, nrows) if rows[r][c]), None)
        if p is None:
            continue
        rows[rank], rows[p] = rows[p], rows[rank]
        prow = rows[rank]
        pv = prow[c]
        det = mt[det][pv]
        s = mt[inv[pv]]
        for j in range(c, len(prow)):
            prow[j] = s[prow[j]]
        targets = range(nrows) if reduce_above else range(rank + 1, nrows)
        for r in targets:
            if r == rank:
                continue
            row = rows[r]
            fac = row[c]
            if fac:
                m = mt[fac]
                for j in range(c, len(row)):
                    pj = prow[j]
                    if pj:
                        row[j] ^= m[pj]
        pivots.append(c)
        rank += 1
        if rank == nrows:
            break
    return rank, pivots, det


def rank(a: GfMatrix) -> int:
    if a.rows == 0 or a.cols == 0:
        return 0
    return _eliminate(a.spec, [list(r) for r in a.data], a.cols, False)[0]


def determinant(a: GfMatrix) -> int:
    if a.rows != a.cols:
        raise DimensionMismatch(f"determinant of non-square {a.shape}")
    if a.rows == 0:
        return 1
    r, _, det = _eliminate(a.spec, [list(row) for row in a.data], a.cols, False)
    return det if r == a.rows else 0


def is_nonsingular(spec: FieldSpec, rows: Sequence[Sequence[int]]) -> bool:
    """Fast path for the MDS checks: square rows, no GfMatrix wrapper."""
    k = len(rows)
    return _eliminate(spec, [list(r) for r in rows], k, False)[0] == k


def mat_inv(a: GfMatrix) -> GfMatrix:
    """Gauss-Jordan on [A | I]."""
    if a.rows != a.cols:
        raise DimensionMismatch(f"inverse of non-square {a.shape}")
    k = a.rows
    aug = [list(r) + list(unit_vector(k, i)) for i, r in enumerate(a.data)]
    r, pivots, _ = _eliminate(a.spec, aug, k, True)
    if r < k or pivots != list(range(k)):
        raise SingularMatrix(f"matrix has rank {r} < {k}")
    return GfMatrix(a.spec, tuple(tuple(row[k:]) for row in aug))


def vandermonde(spec: FieldSpec, points: Sequence[int], k: int) -> GfMatrix:
    """Row i is [1, t_i, t_i^2, ..., t_i^(k-1)]."""
    if len(set(points)) != len(points):
        raise DuplicatePoint(f"evaluation points repeat: {list(points)}")
    if k < 1:
        raise ValueError("k must be >= 1")
    f = get_field(spec)
    return GfMatrix(spec, tuple(tuple(f.pow(t, e) for e in range(k)) for t in points))


def solve(a: GfMatrix, b: Sequence[int]) -> Row:
    """Return x with x . A = b, i.e. sum_i x[i] * A.row(i) == b."""
    if a.rows != a.cols:
        raise DimensionMismatch(f"solve needs a square matrix, got {a.shape}")
    if len(b) != a.cols:
        raise DimensionMismatch(f"right-hand side has length {len(b)}, expected {a.cols}")
    # x A = b  <=>  A^T x^T = b^T
    k = a.rows
    at = list(zip(*a.data))
    aug = [list(at[i]) + [b[i]] for i in range(k)]
    r, pivots, _ = _eliminate(a.spec, aug, k, True)
    if r < k or pivots != list(range(k)):
        raise SingularMatrix(f"coefficient matrix has rank {r} < {k}")
    return tuple(row[k] for row in aug)
