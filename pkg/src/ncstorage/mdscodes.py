"""Generator-matrix construction and verification.

Families:

* ``RS_VANDERMONDE`` -- rows ``[1, t, ..., t^(k-1)]`` at distinct points.
* ``SPARSEST`` -- ``M * inv(N)`` where N is k rows of an MDS matrix M; the
  pivot rows become identity vectors and nothing else can be zeroed.
* ``MAXIMAL`` -- every nonzero-point Vandermonde row plus e_1, e_k (and
  e_(k-1) when q = 2^m and k is 3 or q-1): q+1 or q+2 MDS rows.
* ``RLNC_RANDOM`` -- uniform random entries, redrawn until MDS.
"""

from __future__ import annotations

import enum
import itertools
import math
import random
import statistics
from dataclasses import dataclass, replace
from typing import Sequence

from .errors import (
    BadPivotSet,
    DuplicatePoint,
    KTooLarge,
    MdsRetryExhausted,
    NotConstructible,
    NotMds,
    TooLong,
    TooManySubsets,
    Unsupported,
)
from .galois import MAX_M, FieldSpec, field_for_q, get_field
from .linalg import GfMatrix, is_nonsingular, mat_inv, mat_mul, unit_vector, vandermonde

MDS_MAX_N = 18
RLNC_MAX_RETRIES = 1000


class Family(enum.Enum):
    RS_VANDERMONDE = "rs"
    SPARSEST = "sparsest"
    MAXIMAL = "maximal"
    RLNC_RANDOM = "rlnc"


class MdsStatus(enum.Enum):
    UNVERIFIED = "unverified"
    VERIFIED = "verified"
    FAILED = "failed"


@dataclass(frozen=True)
class GeneratorMatrix:
    mat: GfMatrix
    family: Family
    mds_verified: MdsStatus = MdsStatus.UNVERIFIED
    # right factor applied to the source construction (inv(N) for SPARSEST);
    # lets functional repair map extension rows into the same basis
    transform: GfMatrix | None = None

    @property
    def n(self) -> int:
        return self.mat.rows

    @property
    def k(self) -> int:
        return self.mat.cols

    @property
    def spec(self) -> FieldSpec:
        return self.mat.spec

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self.mat.data

    def verified(self) -> "GeneratorMatrix":
        status = MdsStatus.VERIFIED if is_mds(self) else MdsStatus.FAILED
        return replace(self, mds_verified=status)


@dataclass(frozen=True)
class WeightProfile:
    column_weights: tuple[int, ...]
    total_weight: int
    zero_count: int
    stddev: float


# -- verification ------------------------------------------------------------


def _check_bound(n: int, k: int, max_n: int | None, force: bool) -> None:
    limit = MDS_MAX_N if max_n is None else max_n
    if n > limit and not force:
        raise TooManySubsets(
            f"exhaustive MDS check over C({n},{k}) = {math.comb(n, k)} subsets "
            f"exceeds n <= {limit}; pass force=True to run it anyway"
        )


def mds_witness(
    g: GeneratorMatrix | GfMatrix,
    *,
    max_n: int | None = None,
    force: bool = False,
    must_include: int | None = None,
) -> tuple[int, ...] | None:
    """First k-subset of rows (lexicographic) whose submatrix is singular.

    ``must_include`` restricts the search to subsets containing that row,
    which is all that needs checking after appending one row to an MDS set.
    """
    mat = g.mat if isinstance(g, GeneratorMatrix) else g
    n, k = mat.rows, mat.cols
    if k == 0 or n < k:
        return None
    _check_bound(n, k, max_n, force)
    spec, rows = mat.spec, mat.data
    if must_include is None:
        subsets = itertools.combinations(range(n), k)
    else:
        others = [i for i in range(n) if i != must_include]
        subsets = (
            tuple(sorted(c + (must_include,)))
            for c in itertools.combinations(others, k - 1)
        )
    for sub in subsets:
        if not is_nonsingular(spec, [rows[i] for i in sub]):
            return sub
    return None


def is_mds(g: GeneratorMatrix | GfMatrix, *, max_n: int | None = None, force: bool = False) -> bool:
    """True iff every k x k submatrix built from k distinct rows is nonsingular."""
    return mds_witness(g, max_n=max_n, force=force) is None


def weight_profile(g: GeneratorMatrix | GfMatrix) -> WeightProfile:
    mat = g.mat if isinstance(g, GeneratorMatrix) else g
    weights = tuple(sum(1 for r in mat.data if r[j]) for j in range(mat.cols))
    total = sum(weights)
    stddev = statistics.pstdev(weights) if weights else 0.0
    return WeightProfile(weights, total, mat.rows * mat.cols - total, stddev)


# -- constructors ------------------------------------------------------------


def rs_generator(n: int, k: int, spec: FieldSpec, points: Sequence[int] | None = None) -> GeneratorMatrix:
    """Vandermonde generator; default points are 1..n (0 is used only if n = q)."""
    if points is None:
        if n > spec.q:
            raise TooLong(f"n={n} exceeds q={spec.q} evaluation points")
        points = list(range(1, n + 1)) if n < spec.q else list(range(spec.q))
    points = list(points)
    if len(points) != n:
        raise ValueError(f"need {n} points, got {len(points)}")
    if n > spec.q:
        raise TooLong(f"n={n} exceeds q={spec.q} evaluation points")
    if len(set(points)) != n:
        raise DuplicatePoint(f"evaluation points repeat: {points}")
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    return GeneratorMatrix(vandermonde(spec, points, k), Family.RS_VANDERMONDE)


def default_pivots(g: GeneratorMatrix) -> list[int]:
    """Rows with the smallest evaluation points: for Vandermonde rows the first k."""
    return list(range(g.k))


def sparsify(
    m: GeneratorMatrix,
    pivot_rows: Sequence[int] | None = None,
    *,
    check: bool = True,
) -> GeneratorMatrix:
    """G = M * inv(N), N being the k x k submatrix of M at ``pivot_rows``."""
    k = m.k
    pivots = default_pivots(m) if pivot_rows is None else list(pivot_rows)
    if len(pivots) != k or len(set(pivots)) != k or not all(0 <= p < m.n for p in pivots):
        raise BadPivotSet(f"need {k} distinct row indices in [0, {m.n}), got {pivots}")
    if check and m.mds_verified is not MdsStatus.VERIFIED:
        witness = mds_witness(m)
        if witness is not None:
            raise NotMds(f"rows {witness} of the source matrix are dependent")
    try:
        n_inv = mat_inv(m.mat.select_rows(pivots))
    except Exception as exc:  # SingularMatrix
        raise BadPivotSet(f"pivot rows {pivots} are singular") from exc
    g = mat_mul(m.mat, n_inv)
    # elimination already fixes pivot rows to e_i exactly; the status carries over
    status = MdsStatus.VERIFIED if check else m.mds_verified
    transform = n_inv if m.transform is None else mat_mul(m.transform, n_inv)
    return GeneratorMatrix(g, Family.SPARSEST, status, transform)


def sparsest_generator(n: int, k: int, spec: FieldSpec) -> GeneratorMatrix:
    """Sparsify the first n rows of the maximal construction on its first k rows.

    For n < q those rows are exactly the RS generator at points 1..n; longer
    codes borrow e_1, e_k (and e_(k-1)) so the minimal field still works.
    """
    rows = maximal_rows(spec, k)
    if n > len(rows):
        raise TooLong(f"({n},{k}) needs more than the {len(rows)} rows available over {spec}")
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    source = GeneratorMatrix(GfMatrix(spec, tuple(rows[:n])), Family.RS_VANDERMONDE)
    if n <= MDS_MAX_N:
        source = source.verified()
    else:
        # subset of the maximal construction, MDS by construction
        source = replace(source, mds_verified=MdsStatus.VERIFIED)
    return sparsify(source)


def maximal_rows(spec: FieldSpec, k: int) -> list[tuple[int, ...]]:
    """Vandermonde rows for t = 1..q-1, then e_1, e_k, then e_(k-1) when allowed."""
    q = spec.q
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > q:
        raise KTooLarge(f"k={k} exceeds q={q}")
    rows = list(vandermonde(spec, list(range(1, q)), k).data)
    if k == 1:
        # e_1 = e_k = [1]; any nonzero single row is MDS for k = 1
        return rows + [(1,), (1,)]
    rows += [unit_vector(k, 0), unit_vector(k, k - 1)]
    if has_extra_row(q, k):
        rows.append(unit_vector(k, k - 2))
    return rows


def has_extra_row(q: int, k: int) -> bool:
    """Whether e_(k-1) joins the construction (q = 2^m and k = 3 or k = q-1)."""
    return k >= 3 and k in (3, q - 1)


def maximal_generator(spec: FieldSpec, k: int, *, verify: bool = True) -> GeneratorMatrix:
    rows = maximal_rows(spec, k)
    g = GeneratorMatrix(GfMatrix(spec, tuple(rows)), Family.MAXIMAL)
    if verify and len(rows) <= MDS_MAX_N:
        g = g.verified()
    return g


def maximal_length(q: int, k: int) -> int:
    return q + 2 if has_extra_row(q, k) else q + 1


def min_field_size(n: int, k: int) -> int:
    """Smallest q = 2^m whose maximal construction reaches n rows."""
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got n={n}, k={k}")
    for m in range(1, MAX_M + 1):
        q = 1 << m
        if k <= q and maximal_length(q, k) >= n:
            return q
    raise Unsupported(f"(n={n}, k={k}) needs a field larger than GF({1 << MAX_M})")


def jump_vandermonde_matrix(spec: FieldSpec, points: Sequence[int]) -> GfMatrix:
    """(k-1) x (k-1) matrix with column powers 0..k-3 and k-1 (k-2 skipped)."""
    f = get_field(spec)
    k = len(points) + 1
    powers = list(range(k - 2)) + [k - 1]
    return GfMatrix(spec, tuple(tuple(f.pow(a, e) for e in powers) for a in points))


def jump_vandermonde_nonsingular(points: Sequence[int]) -> bool:
    """Nonsingular iff the points sum (XOR) to a nonzero element."""
    if len(set(points)) != len(points):
        raise DuplicatePoint(f"points repeat: {list(points)}")
    if any(p == 0 for p in points):
        raise ValueError("points must be nonzero")
    acc = 0
    for p in points:
        acc ^= p
    return acc != 0


def rlnc_generator(
    n: int, k: int, spec: FieldSpec, seed: int, *, max_retries: int = RLNC_MAX_RETRIES
) -> GeneratorMatrix:
    rng = random.Random(seed)
    q = spec.q
    for _ in range(max_retries):
        mat = GfMatrix(spec, tuple(tuple(rng.randrange(q) for _ in range(k)) for _ in range(n)))
        if is_mds(mat, force=True):
            return GeneratorMatrix(mat, Family.RLNC_RANDOM, MdsStatus.VERIFIED)
    raise MdsRetryExhausted(
        f"no MDS ({n},{k}) matrix over {spec} after {max_retries} draws (seed {seed})"
    )


def framed_rs_generator(n: int, k: int, spec: FieldSpec, shape: str | None = None) -> GeneratorMatrix:
    """RS baseline used in the storage experiments.

    ``g1``: e_1, Vandermonde rows at 1..n-2, e_k.
    ``g2`` (k = 3): e_1, Vandermonde rows at 1..n-3, e_2, e_3.
    Default shape is g2 for k = 3, g1 otherwise.
    """
    if shape is None:
        shape = "g2" if k == 3 else "g1"
    if n == k:
        return GeneratorMatrix(GfMatrix.identity(spec, k), Family.RS_VANDERMONDE, MdsStatus.VERIFIED)
    if shape == "g1":
        if k < 2:
            raise NotConstructible("G1 needs k >= 2")
        n_points = n - 2
        tail = [unit_vector(k, k - 1)]
    elif shape == "g2":
        if k != 3:
            raise NotConstructible("G2 is defined for k = 3 only")
        n_points = n - 3
        tail = [unit_vector(k, 1), unit_vector(k, 2)]
    else:
        raise ValueError(f"unknown shape {shape!r}")
    if n_points < 0 or n_points > spec.q - 1:
        raise NotConstructible(
            f"{shape} with n={n} needs {n_points} distinct nonzero points in {spec}"
        )
    if k > spec.q:
        raise NotConstructible(f"k={k} exceeds q={spec.q}")
    vand = vandermonde(spec, list(range(1, n_points + 1)), k).data if n_points else ()
    rows = (unit_vector(k, 0),) + tuple(vand) + tuple(tail)
    g = GeneratorMatrix(GfMatrix(spec, rows), Family.RS_VANDERMONDE)
    g = g.verified()
    if g.mds_verified is MdsStatus.FAILED:
        raise NotConstructible(f"{shape} ({n},{k}) over {spec} is not MDS")
    return g


def build_generator(
    family: Family | str,
    n: int | None,
    k: int,
    spec: FieldSpec | None = None,
    *,
    seed: int | None = None,
) -> GeneratorMatrix:
    """Single entry point used by the CLI and the experiment runner."""
    family = Family(family) if isinstance(family, str) else family
    if spec is None:
        if family is Family.MAXIMAL:
            raise ValueError("the maximal construction needs an explicit field")
        if family is Family.RS_VANDERMONDE:
            spec = field_for_q(max(2, 1 << (n - 1).bit_length()))
        else:
            spec = field_for_q(min_field_size(n, k)) if n > k else field_for_q(2)
    if family is Family.MAXIMAL:
        return maximal_generator(spec, k)
    if n is None:
        raise ValueError(f"{family.value} needs n")
    if family is Family.RS_VANDERMONDE:
        return rs_generator(n, k, spec)
    if family is Family.SPARSEST:
        return sparsest_generator(n, k, spec)
    if seed is None:
        raise ValueError("rlnc needs an explicit seed")
    return rlnc_generator(n, k, spec, seed)


def extension_rows(g: GeneratorMatrix) -> list[tuple[int, ...]]:
    """Candidate coding vectors for functional repair, in allocation order.

    The maximal construction for (q, k), mapped through the matrix's
    transform so sparsified codes stay in their own basis.
    """
    rows = maximal_rows(g.spec, g.k)
    if g.transform is not None:
        rows = list(mat_mul(GfMatrix(g.spec, tuple(rows)), g.transform).data)
    return rows
