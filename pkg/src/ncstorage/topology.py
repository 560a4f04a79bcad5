"""Unit-disk WSN topologies, hop-count routing and transmission ledgers."""

from __future__ import annotations

import enum
import functools
import math
import random
import statistics
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable

from .errors import ConnectivityRetryExhausted, Unreachable

DEFAULT_AREA = (200.0, 180.0)
DEFAULT_RADIUS = 60.0
CONNECTIVITY_RETRIES = 10_000


class Role(enum.Enum):
    STORAGE = "storage"
    SENSOR = "sensor"
    NEWCOMER = "newcomer"


STORAGE_VIEW = frozenset({Role.STORAGE, Role.NEWCOMER})


@dataclass(frozen=True)
class Node:
    id: int
    x: float
    y: float
    role: Role
    alive: bool = True


@dataclass(frozen=True)
class Topology:
    nodes: tuple[Node, ...]
    radius: float
    area: tuple[float, float] = DEFAULT_AREA
    # explicit edge list; None means unit-disk edges derived from positions
    links: frozenset[tuple[int, int]] | None = None

    def __post_init__(self):
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate node ids")

    @functools.cached_property
    def _by_id(self) -> dict[int, Node]:
        return {n.id: n for n in self.nodes}

    @functools.cached_property
    def _edges(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {n.id: [] for n in self.nodes}
        if self.links is not None:
            for u, v in self.links:
                adj[u].append(v)
                adj[v].append(u)
        else:
            r2 = self.radius * self.radius
            ns = self.nodes
            for i, a in enumerate(ns):
                for b in ns[i + 1:]:
                    if (a.x - b.x) ** 2 + (a.y - b.y) ** 2 <= r2:
                        adj[a.id].append(b.id)
                        adj[b.id].append(a.id)
        return {u: tuple(sorted(vs)) for u, vs in adj.items()}

    def node(self, node_id: int) -> Node:
        return self._by_id[node_id]

    def ids(self, roles: Iterable[Role] | None = None, alive_only: bool = True) -> list[int]:
        roles = None if roles is None else set(roles)
        return sorted(
            n.id
            for n in self.nodes
            if (roles is None or n.role in roles) and (n.alive or not alive_only)
        )

    def adjacency(self, roles: Iterable[Role] | None = None) -> dict[int, tuple[int, ...]]:
        """Alive nodes (optionally restricted to ``roles``) and their alive neighbours."""
        keep = set(self.ids(roles))
        return {u: tuple(v for v in self._edges[u] if v in keep) for u in sorted(keep)}

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u, vs in self._edges.items() for v in vs if u < v)

    def is_connected(self, roles: Iterable[Role] | None = None) -> bool:
        adj = self.adjacency(roles)
        if not adj:
            return True
        return len(bfs_hops(adj, next(iter(adj)))) == len(adj)

    def replace_node(self, node_id: int, **changes) -> "Topology":
        nodes = tuple(replace(n, **changes) if n.id == node_id else n for n in self.nodes)
        return replace(self, nodes=nodes)

    def with_newcomer(self, failed_id: int) -> "Topology":
        """The failed node's slot, re-occupied by a newcomer at the same position."""
        return self.replace_node(failed_id, role=Role.NEWCOMER, alive=True)

    def to_json(self) -> dict:
        out = {
            "area": list(self.area),
            "radius": self.radius,
            "nodes": [
                {"id": n.id, "x": n.x, "y": n.y, "role": n.role.value, "alive": n.alive}
                for n in self.nodes
            ],
        }
        if self.links is not None:
            out["links"] = [list(e) for e in sorted(self.links)]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Topology":
        nodes = tuple(
            Node(int(d["id"]), float(d["x"]), float(d["y"]), Role(d.get("role", "storage")),
                 bool(d.get("alive", True)))
            for d in obj["nodes"]
        )
        links = obj.get("links")
        return cls(
            nodes,
            float(obj["radius"]),
            tuple(obj.get("area", DEFAULT_AREA)),
            None if links is None else frozenset(tuple(sorted(map(int, e))) for e in links),
        )


def graph_topology(
    edges: Iterable[tuple[int, int]], roles: dict[int, Role] | None = None
) -> Topology:
    """Abstract topology from an explicit edge list (positions are placeholders)."""
    edges = [tuple(sorted(e)) for e in edges]
    ids = sorted({u for e in edges for u in e} | set(roles or {}))
    roles = roles or {}
    nodes = tuple(Node(i, float(i), 0.0, roles.get(i, Role.STORAGE)) for i in ids)
    return Topology(nodes, 0.0, (float(len(ids)), 0.0), frozenset(edges))


def random_topology(
    seed: int,
    n_storage: int = 10,
    n_sensor: int = 20,
    area: tuple[float, float] = DEFAULT_AREA,
    radius: float = DEFAULT_RADIUS,
    *,
    storage_connected: bool = False,
    max_retries: int = CONNECTIVITY_RETRIES,
) -> Topology:
    """Uniform random deployment, redrawn until connected.

    Storage nodes get ids 0..n_storage-1 and sensors the ids after them.
    ``storage_connected`` additionally requires the storage-only subgraph to
    be connected (repair runs with sensors removed).
    """
    if n_storage < 0 or n_sensor < 0 or n_storage + n_sensor == 0:
        raise ValueError("need a positive node count")
    if radius < 0:
        raise ValueError("radius must be non-negative")
    rng = random.Random(seed)
    w, h = area
    roles = [Role.STORAGE] * n_storage + [Role.SENSOR] * n_sensor
    for _ in range(max_retries):
        nodes = tuple(
            Node(i, rng.uniform(0, w), rng.uniform(0, h), role) for i, role in enumerate(roles)
        )
        topo = Topology(nodes, radius, (w, h))
        if topo.is_connected() and (not storage_connected or topo.is_connected(STORAGE_VIEW)):
            return topo
    raise ConnectivityRetryExhausted(
        f"no connected deployment after {max_retries} draws (seed {seed}, radius {radius})"
    )


def one_hop_topology(n_storage: int, n_sensor: int, area: tuple[float, float] = DEFAULT_AREA) -> Topology:
    """Every node within range of every other: transmissions equal nonzero counts."""
    diag = math.hypot(*area)
    w, h = area
    nodes = tuple(
        Node(i, w * (i + 1) / (n_storage + n_sensor + 1), h / 2,
             Role.STORAGE if i < n_storage else Role.SENSOR)
        for i in range(n_storage + n_sensor)
    )
    return Topology(nodes, diag, area)


# -- routing -----------------------------------------------------------------


def bfs_hops(adj: dict[int, tuple[int, ...]], src: int) -> dict[int, int]:
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def shortest_path(adj: dict[int, tuple[int, ...]], src: int, dst: int) -> list[int]:
    """Lexicographically smallest among the shortest src -> dst paths."""
    if src not in adj or dst not in adj:
        raise Unreachable(f"{src} or {dst} is not an alive node of this view")
    dist = bfs_hops(adj, dst)
    if src not in dist:
        raise Unreachable(f"no path from {src} to {dst}")
    path = [src]
    u = src
    while u != dst:
        u = min(v for v in adj[u] if dist.get(v) == dist[u] - 1)
        path.append(u)
    return path


def shortest_hops(topology: Topology, a: int, b: int, roles: Iterable[Role] | None = None) -> int:
    adj = topology.adjacency(roles)
    if a not in adj or b not in adj:
        raise Unreachable(f"{a} or {b} is not alive")
    dist = bfs_hops(adj, a)
    if b not in dist:
        raise Unreachable(f"no path from {a} to {b}")
    return dist[b]


# -- energy accounting -------------------------------------------------------


@dataclass
class EnergyReport:
    """Per-node transmission ledger; one unit = one packet over one hop.

    ``per_node_tx`` also holds zero entries for participants that never
    transmitted, so ``stddev_tx`` is taken over all participants.
    """

    per_node_tx: dict[int, int] = field(default_factory=dict)
    per_node_rx: dict[int, int] = field(default_factory=dict)
    control_tx: int = 0

    def participate(self, node: int) -> None:
        self.per_node_tx.setdefault(node, 0)

    def transmit(self, sender: int, receiver: int, packets: int = 1) -> None:
        self.per_node_tx[sender] = self.per_node_tx.get(sender, 0) + packets
        self.per_node_rx[receiver] = self.per_node_rx.get(receiver, 0) + packets

    def send_along(self, path: list[int], packets: int = 1) -> None:
        for u, v in zip(path, path[1:]):
            self.transmit(u, v, packets)

    @property
    def total_tx(self) -> int:
        return sum(self.per_node_tx.values())

    @property
    def stddev_tx(self) -> float:
        vals = list(self.per_node_tx.values())
        return statistics.pstdev(vals) if vals else 0.0

    def merge(self, other: "EnergyReport") -> "EnergyReport":
        out = EnergyReport(dict(self.per_node_tx), dict(self.per_node_rx), self.control_tx + other.control_tx)
        for u, c in other.per_node_tx.items():
            out.per_node_tx[u] = out.per_node_tx.get(u, 0) + c
        for u, c in other.per_node_rx.items():
            out.per_node_rx[u] = out.per_node_rx.get(u, 0) + c
        return out

    def to_json(self) -> dict:
        return {
            "per_node_tx": {str(k): v for k, v in sorted(self.per_node_tx.items())},
            "per_node_rx": {str(k): v for k, v in sorted(self.per_node_rx.items())},
            "control_tx": self.control_tx,
            "total_tx": self.total_tx,
            "stddev_tx": self.stddev_tx,
        }
