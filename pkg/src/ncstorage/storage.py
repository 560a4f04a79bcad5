"""Encode k source blocks into n shares and decode from any k of them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionMismatch, SingularMatrix, SingularSelection, Unsupported
from .galois import FieldSpec, get_field
from .linalg import GfMatrix, mat_inv
from .mdscodes import GeneratorMatrix

Symbols = tuple[int, ...]


@dataclass(frozen=True)
class SourceData:
    spec: FieldSpec
    blocks: tuple[Symbols, ...]

    def __post_init__(self):
        lengths = {len(b) for b in self.blocks}
        if len(lengths) > 1:
            raise DimensionMismatch(f"blocks differ in length: {sorted(lengths)}")
        for b in self.blocks:
            for s in b:
                if not 0 <= s < self.spec.q:
                    raise ValueError(f"symbol {s} not in {self.spec}")

    @classmethod
    def from_lists(cls, spec: FieldSpec, blocks: Sequence[Sequence[int]]) -> "SourceData":
        return cls(spec, tuple(tuple(int(s) for s in b) for b in blocks))

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def block_len(self) -> int:
        return len(self.blocks[0]) if self.blocks else 0


@dataclass(frozen=True)
class Share:
    index: int
    coding_vector: Symbols
    payload: Symbols
    spec: FieldSpec


def combine(spec: FieldSpec, coeffs: Sequence[int], payloads: Sequence[Sequence[int]]) -> Symbols:
    """Symbol-wise sum_i coeffs[i] * payloads[i]."""
    mt = get_field(spec).mul_table
    length = len(payloads[0]) if payloads else 0
    out = [0] * length
    for c, p in zip(coeffs, payloads):
        if not c:
            continue
        m = mt[c]
        for s, v in enumerate(p):
            if v:
                out[s] ^= m[v]
    return tuple(out)


def encode_vector(vector: Sequence[int], data: SourceData) -> Symbols:
    return combine(data.spec, vector, data.blocks)


def encode(g: GeneratorMatrix, data: SourceData) -> list[Share]:
    if g.k != data.k:
        raise DimensionMismatch(f"generator has k={g.k}, data has {data.k} blocks")
    if g.spec != data.spec:
        raise DimensionMismatch(f"field mismatch: {g.spec} vs {data.spec}")
    return [
        Share(j, row, encode_vector(row, data), g.spec) for j, row in enumerate(g.rows)
    ]


def decode(shares: Sequence[Share]) -> SourceData:
    """Recover the source from exactly k shares (extra shares are ignored)."""
    if not shares:
        raise SingularSelection("no shares given")
    spec = shares[0].spec
    k = len(shares[0].coding_vector)
    if len(shares) < k:
        raise SingularSelection(f"need {k} shares, got {len(shares)}")
    chosen = list(shares[:k])
    a = GfMatrix(spec, tuple(s.coding_vector for s in chosen))
    try:
        a_inv = mat_inv(a)
    except SingularMatrix as exc:
        idx = [s.index for s in chosen]
        raise SingularSelection(f"coding vectors of shares {idx} are dependent") from exc
    # data = A^-1 * payloads: block i = sum_j a_inv[i][j] * payload_j
    payloads = [s.payload for s in chosen]
    return SourceData(spec, tuple(combine(spec, a_inv.row(i), payloads) for i in range(k)))


# -- byte framing ------------------------------------------------------------


def bytes_to_symbols(data: bytes, spec: FieldSpec) -> Symbols:
    """GF(2^8): one symbol per byte.  GF(2^4): two nibbles per byte, high first."""
    if spec.m == 8:
        return tuple(data)
    if spec.m == 4:
        out = []
        for b in data:
            out += (b >> 4, b & 0xF)
        return tuple(out)
    raise Unsupported(f"byte payloads need GF(2^8) or GF(2^4), not {spec}")


def symbols_to_bytes(symbols: Sequence[int], spec: FieldSpec) -> bytes:
    if spec.m == 8:
        return bytes(symbols)
    if spec.m == 4:
        if len(symbols) % 2:
            raise ValueError("odd number of nibbles")
        return bytes((symbols[i] << 4) | symbols[i + 1] for i in range(0, len(symbols), 2))
    raise Unsupported(f"byte payloads need GF(2^8) or GF(2^4), not {spec}")


def split_bytes(data: bytes, k: int, spec: FieldSpec) -> SourceData:
    """Zero-pad ``data`` to a multiple of k bytes and cut it into k blocks."""
    block = -(-len(data) // k) if data else 1
    padded = data + bytes(block * k - len(data))
    return SourceData(
        spec,
        tuple(bytes_to_symbols(padded[i * block:(i + 1) * block], spec) for i in range(k)),
    )


def join_bytes(source: SourceData, length: int) -> bytes:
    return b"".join(symbols_to_bytes(b, source.spec) for b in source.blocks)[:length]
