"""Arithmetic over GF(2^m), 1 <= m <= 8.

Elements are plain ints in ``[0, q)``.  Every field is described by a
:class:`FieldSpec` (degree + reduction polynomial); multiplication goes
through :class:`LookupTables`, either the 1-D log/antilog pair or the 2-D
multiplication/division pair.  :func:`poly_mulmod` is the table-free
shift-and-reduce reference used to cross-check both table modes.
"""

from __future__ import annotations

import csv
import enum
import functools
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DegreeMismatch, DivisionByZero, ReduciblePolynomial

MAX_M = 8

# x^3+x+1 for GF(8); the others are the usual primitive choices.
CANONICAL_POLY = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0x11D,
}


def _degree(p: int) -> int:
    return p.bit_length() - 1


def _poly_rem(a: int, b: int) -> int:
    """Remainder of a / b as GF(2)[x] polynomials."""
    db = _degree(b)
    while a and _degree(a) >= db:
        a ^= b << (_degree(a) - db)
    return a


def find_factor(poly: int) -> int | None:
    """Smallest nontrivial factor of ``poly`` over GF(2), by trial division.

    Only divisors of degree <= deg(poly)/2 need to be tried.
    """
    d = _degree(poly)
    for cand in range(2, 1 << (d // 2 + 1)):
        if _poly_rem(poly, cand) == 0:
            return cand
    return None


@dataclass(frozen=True)
class FieldSpec:
    m: int
    poly: int

    @property
    def q(self) -> int:
        return 1 << self.m

    def to_json(self) -> dict:
        return {"m": self.m, "poly": self.poly}

    def __str__(self) -> str:
        return f"GF(2^{self.m})/{self.poly:#x}"


def validate_field(m: int, poly: int | None = None) -> FieldSpec:
    """Return a :class:`FieldSpec` if ``poly`` is irreducible of degree ``m``.

    ``poly=None`` picks the canonical polynomial for ``m``.
    """
    if not 1 <= m <= MAX_M:
        raise DegreeMismatch(f"extension degree m={m} outside 1..{MAX_M}")
    if poly is None:
        poly = CANONICAL_POLY[m]
    if poly <= 0 or _degree(poly) != m:
        raise DegreeMismatch(f"polynomial {poly:#x} does not have degree {m}")
    factor = find_factor(poly)
    if factor is not None:
        raise ReduciblePolynomial(poly, factor)
    return FieldSpec(m, poly)


def field_for_q(q: int) -> FieldSpec:
    m = q.bit_length() - 1
    if q != 1 << m:
        raise DegreeMismatch(f"q={q} is not a power of two")
    return validate_field(m)


def check_element(spec: FieldSpec, a: int) -> int:
    if not 0 <= a < spec.q:
        raise ValueError(f"{a} is not an element of {spec}")
    return a


def poly_mulmod(a: int, b: int, spec: FieldSpec) -> int:
    """Shift-and-reduce product; the reference every table is checked against."""
    result = 0
    top = spec.q
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= spec.poly
    return result


def multiplicative_order(a: int, spec: FieldSpec) -> int:
    if a == 0:
        raise DivisionByZero("0 has no multiplicative order")
    x, order = a, 1
    while x != 1:
        x = poly_mulmod(x, a, spec)
        order += 1
    return order


def primitive_element(spec: FieldSpec) -> int:
    """The canonical generator x when primitive, else the smallest primitive element."""
    start = 2 if spec.q > 2 else 1
    for g in range(start, spec.q):
        if multiplicative_order(g, spec) == spec.q - 1:
            return g
    raise AssertionError(f"{spec} has no primitive element")  # unreachable for a field


class TableMode(enum.Enum):
    LOG_ANTILOG_1D = "1d"
    MUL_DIV_2D = "2d"


# index 0 of the log table has no logarithm
LOG_SENTINEL = 0


@dataclass(frozen=True)
class LookupTables:
    spec: FieldSpec
    mode: TableMode
    generator: int = 0
    log_table: tuple[int, ...] = ()
    antilog_table: tuple[int, ...] = ()
    mul_table: tuple[tuple[int, ...], ...] = ()
    div_table: tuple[tuple[int, ...], ...] = ()
    memory_bytes: int = field(default=0)

    def mul(self, a: int, b: int) -> int:
        if self.mode is TableMode.MUL_DIV_2D:
            return self.mul_table[a][b]
        if a == 0 or b == 0:
            return 0
        return self.antilog_table[(self.log_table[a] + self.log_table[b]) % (self.spec.q - 1)]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise DivisionByZero(f"{a} / 0")
        if self.mode is TableMode.MUL_DIV_2D:
            return self.div_table[a][b]
        if a == 0:
            return 0
        return self.antilog_table[(self.log_table[a] - self.log_table[b]) % (self.spec.q - 1)]

    def dump_csv(self, path: str | Path) -> None:
        """Debug dump: one row per table entry."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            if self.mode is TableMode.LOG_ANTILOG_1D:
                w.writerow(["x", "log", "antilog"])
                for x in range(self.spec.q):
                    w.writerow([x, self.log_table[x], self.antilog_table[x]])
            else:
                w.writerow(["a", "b", "mul", "div"])
                for a in range(self.spec.q):
                    for b in range(self.spec.q):
                        w.writerow([a, b, self.mul_table[a][b], self.div_table[a][b]])


def build_tables(spec: FieldSpec, mode: TableMode = TableMode.LOG_ANTILOG_1D) -> LookupTables:
    """Populate log/antilog (q bytes each) or mul/div (q^2 bytes each) tables."""
    q = spec.q
    g = primitive_element(spec)
    antilog = [0] * q
    log = [LOG_SENTINEL] * q
    x = 1
    for i in range(q - 1):
        antilog[i] = x
        log[x] = i
        x = poly_mulmod(x, g, spec)
    antilog[q - 1] = antilog[0]
    if mode is TableMode.LOG_ANTILOG_1D:
        return LookupTables(
            spec, mode, g, tuple(log), tuple(antilog), memory_bytes=2 * q
        )

    def mul(a, b):
        if a == 0 or b == 0:
            return 0
        return antilog[(log[a] + log[b]) % (q - 1)]

    def div(a, b):
        if a == 0 or b == 0:
            # division by zero has no value; stored as 0 and never read via div()
            return 0
        return antilog[(log[a] - log[b]) % (q - 1)]

    mul_t = tuple(tuple(mul(a, b) for b in range(q)) for a in range(q))
    div_t = tuple(tuple(div(a, b) for b in range(q)) for a in range(q))
    return LookupTables(
        spec, mode, g, mul_table=mul_t, div_table=div_t, memory_bytes=2 * q * q
    )


def gf_add(a: int, b: int) -> int:
    return a ^ b


gf_sub = gf_add


def gf_mul(a: int, b: int, tables: LookupTables) -> int:
    return tables.mul(a, b)


class Field:
    """Arithmetic context used by the matrix code.

    Holds a 2-D multiplication table (at most 64 KiB of Python ints for
    GF(256)) plus inverse/log/exp lists.
    """

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.q = spec.q
        self.tables = build_tables(spec, TableMode.MUL_DIV_2D)
        self.mul_table = self.tables.mul_table
        one_d = build_tables(spec, TableMode.LOG_ANTILOG_1D)
        self.log = one_d.log_table
        self.exp = one_d.antilog_table
        self.inv_table = (0,) + tuple(self.tables.div_table[1][a] for a in range(1, self.q))

    def add(self, a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no inverse")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul_table[a][self.inv(b)]

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self.exp[(self.log[a] * e) % (self.q - 1)]

    def dot(self, xs, ys) -> int:
        acc = 0
        mt = self.mul_table
        for x, y in zip(xs, ys):
            acc ^= mt[x][y]
        return acc

    def nonzero(self) -> range:
        return range(1, self.q)

    def __repr__(self) -> str:
        return f"Field({self.spec})"


@functools.lru_cache(maxsize=None)
def get_field(spec: FieldSpec) -> Field:
    return Field(spec)


def gf_inv(a: int, spec: FieldSpec) -> int:
    return get_field(spec).inv(a)
