"""Seeded storage/repair experiments with transmission-count energy accounting.

Topology generation and routing live in :mod:`ncstorage.topology`; they are
re-exported here so experiment code can import everything from one place.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .galois import FieldSpec, field_for_q
from .mdscodes import (
    GeneratorMatrix,
    min_field_size,
    framed_rs_generator,
    rlnc_generator,
    rs_generator,
    sparsest_generator,
)
from .repair import Method, RepairMode, repair_node
from .storage import SourceData, encode, encode_vector
from .topology import (  # noqa: F401  (re-exports)
    DEFAULT_AREA,
    DEFAULT_RADIUS,
    STORAGE_VIEW,
    EnergyReport,
    Node,
    Role,
    Topology,
    bfs_hops,
    graph_topology,
    one_hop_topology,
    random_topology,
    shortest_hops,
    shortest_path,
)

CSV_HEADER = ("seed", "k", "family", "method", "total_tx", "stddev_tx", "control_tx")

STORAGE_FAMILIES = ("sparsest", "rs", "rlnc", "vandermonde")


def simulate_storage_phase(
    topology: Topology,
    g: GeneratorMatrix,
    sensor_ids: Sequence[int] | None = None,
    storage_ids: Sequence[int] | None = None,
) -> EnergyReport:
    """Every nonzero G[j][i] ships data block i from its sensor to storage node j.

    Defaults map data indices to sensors and rows to storage nodes in
    ascending id order.  Each hop costs its sender one transmission.
    """
    if sensor_ids is None:
        sensor_ids = topology.ids([Role.SENSOR])[: g.k]
    if storage_ids is None:
        storage_ids = topology.ids([Role.STORAGE])[: g.n]
    if len(sensor_ids) != g.k or len(storage_ids) != g.n:
        raise ValueError(
            f"need {g.k} sensors and {g.n} storage nodes, "
            f"got {len(sensor_ids)} and {len(storage_ids)}"
        )
    adj = topology.adjacency()
    report = EnergyReport()
    for s in sensor_ids:
        report.participate(s)
    for j, row in enumerate(g.rows):
        for i, coeff in enumerate(row):
            if coeff:
                report.send_along(shortest_path(adj, sensor_ids[i], storage_ids[j]))
    return report


def assign_shares(topology: Topology, g: GeneratorMatrix, data: SourceData) -> dict:
    """Share j goes to the j-th storage node in ascending id order."""
    storage = topology.ids([Role.STORAGE])
    if len(storage) < g.n:
        raise ValueError(f"{len(storage)} storage nodes for {g.n} shares")
    return dict(zip(storage, encode(g, data)))


def random_source(spec: FieldSpec, k: int, block_len: int, seed: int) -> SourceData:
    rng = random.Random(seed)
    return SourceData(spec, tuple(tuple(rng.randrange(spec.q) for _ in range(block_len)) for _ in range(k)))


def simulate_repair_experiment(
    topology: Topology,
    g: GeneratorMatrix,
    failed_id: int,
    method,
    mode=None,
    *,
    data_seed: int = 0,
) -> EnergyReport:
    """One single-node repair; raises if the regenerated share is wrong."""
    method = Method(method) if isinstance(method, str) else method
    mode = RepairMode.EXACT if mode is None else RepairMode(mode) if isinstance(mode, str) else mode
    data = random_source(g.spec, g.k, 4, data_seed)
    shares = assign_shares(topology, g, data)
    outcome = repair_node(topology, shares, failed_id, g, mode, method)
    new = outcome.new_share
    if new.payload != encode_vector(new.coding_vector, data):
        raise AssertionError("regenerated share does not match the source data")
    return outcome.energy


# -- sweeps ------------------------------------------------------------------


def storage_field(n: int, k: int, family: str, spare: int = 0) -> FieldSpec:
    """Default field per family: the smallest one that fits, GF(2^8) for RLNC.

    Small fields make random MDS draws rare, so RLNC gets the byte field.
    ``spare`` asks for that many unused vectors beyond n (functional repair).
    """
    if family == "rlnc":
        return field_for_q(256)
    q = min_field_size(n + spare, k) if n + spare > k else 2
    if family in ("rs", "vandermonde"):
        # G1 needs n-2 distinct nonzero points, plain RS needs n points
        need = n if family == "vandermonde" else n - 1
        while q < need or q < k:
            q *= 2
    return field_for_q(q)


def storage_generator(family: str, n: int, k: int, spec: FieldSpec, seed: int) -> GeneratorMatrix:
    if family == "sparsest":
        return sparsest_generator(n, k, spec)
    if family == "rs":
        return framed_rs_generator(n, k, spec)
    if family == "vandermonde":
        return rs_generator(n, k, spec)
    if family == "rlnc":
        return rlnc_generator(n, k, spec, seed)
    raise ValueError(f"unknown storage family {family!r}")


@dataclass
class ComparisonConfig:
    seeds: Sequence[int] = (0,)
    k_values: Sequence[int] = tuple(range(3, 9))
    families: Sequence[str] = ("sparsest", "rs", "rlnc")
    methods: Sequence[str] = ("storage",)
    regime: str = "random"  # or "one-hop"
    n_storage: int = 10
    n_sensor: int = 20
    area: tuple[float, float] = DEFAULT_AREA
    radius: float = DEFAULT_RADIUS
    redundancy: int = 2  # storage experiments use n = k + redundancy
    repair_family: str = "sparsest"
    repair_mode: str = "exact"
    spec: FieldSpec | None = None  # None: smallest field that fits each (n, k)
    topology: Topology | None = None  # fixed deployment instead of seeded draws


def _topology_for(cfg: ComparisonConfig, seed: int, for_repair: bool) -> Topology:
    if cfg.topology is not None:
        return cfg.topology
    if cfg.regime == "one-hop":
        return one_hop_topology(cfg.n_storage, cfg.n_sensor, cfg.area)
    return random_topology(
        seed, cfg.n_storage, cfg.n_sensor, cfg.area, cfg.radius, storage_connected=for_repair
    )


def run_comparison(cfg: ComparisonConfig) -> list[dict]:
    """One row per (seed, k, family, method)."""
    rows = []
    storage_methods = [m for m in cfg.methods if m == "storage"]
    repair_methods = [m for m in cfg.methods if m != "storage"]
    for seed in cfg.seeds:
        if storage_methods:
            topo = _topology_for(cfg, seed, False)
            for k in cfg.k_values:
                n = k + cfg.redundancy
                for family in cfg.families:
                    spec = cfg.spec or storage_field(n, k, family)
                    g = storage_generator(family, n, k, spec, seed)
                    rep = simulate_storage_phase(topo, g)
                    rows.append(_row(seed, k, family, "storage", rep))
        if repair_methods:
            topo = _topology_for(cfg, seed, True)
            storage = topo.ids([Role.STORAGE])
            n = len(storage)
            failed = random.Random(seed).choice(storage)
            for k in cfg.k_values:
                if k >= n:
                    continue
                spare = 1 if cfg.repair_mode == "functional" else 0
                spec = cfg.spec or storage_field(n, k, cfg.repair_family, spare)
                g = storage_generator(cfg.repair_family, n, k, spec, seed)
                for method in repair_methods:
                    rep = simulate_repair_experiment(topo, g, failed, method, cfg.repair_mode, data_seed=seed)
                    rows.append(_row(seed, k, cfg.repair_family, method, rep))
    return rows


def _row(seed, k, family, method, rep: EnergyReport) -> dict:
    return {
        "seed": seed,
        "k": k,
        "family": family,
        "method": method,
        "total_tx": rep.total_tx,
        "stddev_tx": f"{rep.stddev_tx:.6f}",
        "control_tx": rep.control_tx,
    }


def rows_to_csv(rows: Sequence[dict], path: str | Path | None = None) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_HEADER, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text
