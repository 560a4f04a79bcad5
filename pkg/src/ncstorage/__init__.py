"""Sparse MDS storage codes and network-coded repair for sensor networks."""

from .errors import NcStorageError
from .galois import FieldSpec, build_tables, get_field, validate_field
from .linalg import GfMatrix
from .mdscodes import (
    GeneratorMatrix,
    is_mds,
    min_field_size,
    sparsest_generator,
    sparsify,
    maximal_generator,
    weight_profile,
)
from .repair import Method, RepairMode, multi_failure_repair, repair_node
from .storage import SourceData, decode, encode

__all__ = [
    "FieldSpec", "GeneratorMatrix", "GfMatrix", "Method", "NcStorageError", "RepairMode",
    "SourceData", "build_tables", "decode", "encode", "get_field", "is_mds", "min_field_size",
    "multi_failure_repair", "repair_node", "sparsest_generator", "sparsify",
    "maximal_generator", "validate_field", "weight_profile",
]
