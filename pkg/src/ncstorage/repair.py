"""Network-coding iterative repair and the download-k baseline.

A repair regenerates a lost share at a *newcomer* that takes the failed
node's slot (same id, same position).  With network coding the newcomer
picks k surviving shares forming a tree, solves ``beta = sum x_i alpha_i``
and each tree node adds ``x_i * payload_i`` to the packet passing through,
so one packet crosses each tree edge.  The baseline ships k whole shares
to the newcomer over shortest paths and decodes there.

Repairs run on the storage-only view of a topology (sensors removed).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    Disconnected,
    InsufficientShares,
    InsufficientSurvivors,
    MissingShare,
    NoUnusedVector,
    SingularMatrix,
    SingularSelection,
    TooManyFailures,
)
from .galois import FieldSpec, get_field
from .linalg import GfMatrix, solve
from .mdscodes import GeneratorMatrix, extension_rows, mds_witness
from .storage import Share, decode, encode_vector
from .topology import STORAGE_VIEW, EnergyReport, Role, Topology, bfs_hops, shortest_path

Vector = tuple[int, ...]


class RepairMode(enum.Enum):
    EXACT = "exact"
    FUNCTIONAL = "functional"


class Method(enum.Enum):
    NC_ITERATIVE = "nc"
    TRADITIONAL = "traditional"


# -- repair tree -------------------------------------------------------------


@dataclass(frozen=True)
class RepairTree:
    newcomer: int
    path: tuple[int, ...]  # main route, leaf first; path[-1] neighbours the newcomer
    branches: tuple[tuple[int, int], ...] = ()  # (node, attachment point)

    @property
    def members(self) -> tuple[int, ...]:
        return self.path + tuple(b for b, _ in self.branches)

    @property
    def branch_free(self) -> bool:
        return not self.branches

    def parents(self) -> dict[int, int]:
        out = {}
        for u, v in zip(self.path, self.path[1:]):
            out[u] = v
        if self.path:
            out[self.path[-1]] = self.newcomer
        out.update(dict(self.branches))
        return out

    def to_json(self) -> dict:
        return {
            "newcomer": self.newcomer,
            "path": list(self.path),
            "branches": [{"node": b, "attach": a} for b, a in self.branches],
        }


def _holder_graph(topology: Topology, newcomer: int, holders: Iterable[int] | None):
    adj = topology.adjacency(STORAGE_VIEW)
    if newcomer not in adj:
        raise Disconnected(f"newcomer {newcomer} is not an alive node")
    if holders is None:
        holders = [u for u in adj if topology.node(u).role is Role.STORAGE]
    hold = set(holders) & set(adj)
    hold.discard(newcomer)
    return adj, hold


def _search_routes(adj, hold, newcomer, k):
    """DFS over loop-free holder routes leaving the newcomer, ascending ids.

    Returns the first (lexicographically smallest) route with k holders if
    one exists, else the longest route, also lexicographically first.
    """
    best: list[int] = []
    found: list[int] | None = None
    path: list[int] = []
    on_path: set[int] = set()

    def dfs(u):
        nonlocal best, found
        path.append(u)
        on_path.add(u)
        if len(path) > len(best):
            best = list(path)
        if len(path) == k:
            found = list(path)
        else:
            for v in adj[u]:
                if v in hold and v not in on_path:
                    dfs(v)
                    if found is not None:
                        break
        path.pop()
        on_path.discard(u)

    for start in adj[newcomer]:
        if start in hold:
            dfs(start)
            if found is not None:
                return found
    return best


def build_repair_tree(
    topology: Topology, newcomer_id: int, k: int, holders: Iterable[int] | None = None
) -> RepairTree:
    """Pick k share holders: a k-node route if one exists, else the longest
    route plus holders hanging off it (deepest attachment first, then id).
    """
    adj, hold = _holder_graph(topology, newcomer_id, holders)
    if len(hold) < k:
        raise InsufficientSurvivors(f"{len(hold)} surviving holders, need {k}")
    reach = set(bfs_hops({u: tuple(v for v in adj[u] if v in hold or u == newcomer_id)
                          for u in hold | {newcomer_id}}, newcomer_id)) - {newcomer_id}
    if len(reach) < k:
        raise Disconnected(f"only {len(reach)} holders reachable from newcomer {newcomer_id}, need {k}")

    route = _search_routes(adj, hold, newcomer_id, k)
    if len(route) == k:
        return RepairTree(newcomer_id, tuple(reversed(route)))

    depth = {newcomer_id: 0}
    depth.update({u: i + 1 for i, u in enumerate(route)})
    branches: list[tuple[int, int]] = []
    need = k - len(route)
    while need:
        cands = []
        for u in sorted(hold - depth.keys()):
            atts = [v for v in adj[u] if v in depth]
            if atts:
                att = max(atts, key=lambda v: (depth[v], -v))
                cands.append((-depth[att], u, att))
        if not cands:  # unreachable given the check above
            raise Disconnected("ran out of attachable holders")
        cands.sort()
        for _, u, att in cands[:need]:
            branches.append((u, att))
        for _, u, att in cands[:need]:
            depth[u] = depth[att] + 1
        need -= min(need, len(cands))
    return RepairTree(newcomer_id, tuple(reversed(route)), tuple(branches))


# -- coefficients ------------------------------------------------------------


def solve_coefficients(spec: FieldSpec, alphas: Sequence[Sequence[int]], beta: Sequence[int]) -> Vector:
    """x with sum_i x[i] * alphas[i] == beta."""
    try:
        return solve(GfMatrix.from_rows(spec, alphas), beta)
    except SingularMatrix as exc:
        raise SingularSelection("helper coding vectors are linearly dependent") from exc


def choose_beta(
    mode: RepairMode,
    g: GeneratorMatrix,
    failed_index: int,
    live_vectors: Iterable[Sequence[int]] = (),
) -> Vector:
    """Target coding vector for the newcomer.

    EXACT reuses the failed row.  FUNCTIONAL takes the first vector of the
    maximal construction that is neither a row of ``g`` nor currently live,
    and keeps the live set plus itself MDS.
    """
    if mode is RepairMode.EXACT:
        return tuple(g.rows[failed_index])
    live = [tuple(v) for v in live_vectors]
    taken = set(g.rows) | set(live)
    for cand in extension_rows(g):
        if cand in taken:
            continue
        mat = GfMatrix(g.spec, tuple(live) + (cand,))
        if mds_witness(mat, must_include=len(live), force=True) is None:
            return cand
    raise NoUnusedVector(f"every vector of the ({g.n},{g.k}) extension over {g.spec} is in use")


# -- plans and outcomes ------------------------------------------------------


@dataclass(frozen=True)
class RepairPlan:
    tree: RepairTree
    alphas: tuple[Vector, ...]
    beta: Vector
    coeffs: Vector
    mode: RepairMode
    share_index: int
    control_tx: int = 0

    def to_json(self) -> dict:
        return {
            "tree": self.tree.to_json(),
            "members": list(self.tree.members),
            "alphas": [list(a) for a in self.alphas],
            "beta": list(self.beta),
            "coeffs": list(self.coeffs),
            "mode": self.mode.value,
            "share_index": self.share_index,
            "control_tx": self.control_tx,
        }


@dataclass
class RepairOutcome:
    new_shares: tuple[Share, ...]
    energy: EnergyReport
    max_buffer: dict[int, int] = field(default_factory=dict)
    plan: RepairPlan | None = None

    @property
    def new_share(self) -> Share:
        return self.new_shares[0]

    @property
    def transmissions_total(self) -> int:
        return self.energy.total_tx


def _control_cost(adj, newcomer: int, members: Iterable[int]) -> int:
    """Stage-2 feedback (one per newcomer neighbour) plus a notification to each member."""
    dist = bfs_hops(adj, newcomer)
    return len(adj[newcomer]) + sum(dist[m] for m in members)


def plan_repair(
    topology: Topology,
    newcomer_id: int,
    shares: Mapping[int, Share],
    g: GeneratorMatrix,
    mode: RepairMode,
    failed_index: int,
) -> RepairPlan:
    """Tree + target vector + coefficients; ``shares`` are the survivors' shares."""
    tree = build_repair_tree(topology, newcomer_id, g.k, holders=shares.keys())
    alphas = tuple(tuple(shares[m].coding_vector) for m in tree.members)
    live = [s.coding_vector for s in shares.values()]
    beta = choose_beta(mode, g, failed_index, live)
    coeffs = solve_coefficients(g.spec, alphas, beta)
    adj = topology.adjacency(STORAGE_VIEW)
    return RepairPlan(tree, alphas, beta, coeffs, mode, failed_index,
                      _control_cost(adj, newcomer_id, tree.members))


# -- streaming engine --------------------------------------------------------


@dataclass
class _Packet:
    target: int | None  # None: a raw share, else a partial sum for that target
    slot: int  # index into the helper shares for raw packets
    payload: tuple[int, ...]


def _stream(
    spec: FieldSpec,
    parents: Mapping[int, int],
    newcomer: int,
    holdings: Mapping[int, Sequence[int]],
    payloads: Sequence[Sequence[int]],
    coeffs: Sequence[Sequence[int]],
    energy: EnergyReport,
) -> tuple[list[tuple[int, ...]], dict[int, int]]:
    """Push re-encoded packets up a tree towards the newcomer.

    ``holdings[node]`` lists slots (indices into ``payloads``) the node
    contributes; ``coeffs[t][slot]`` is the coefficient of that slot for
    target t.  A node holding fewer packets than targets forwards them raw,
    otherwise it folds everything into one partial sum per target; so a
    single-target tree moves exactly one packet per edge.
    """
    d = len(coeffs)
    mt = get_field(spec).mul_table

    def depth(u):
        n = 0
        while u != newcomer:
            u = parents[u]
            n += 1
        return n

    inbox: dict[int, list[_Packet]] = {u: [] for u in parents}
    inbox[newcomer] = []
    max_buffer: dict[int, int] = {}
    for u in sorted(parents, key=lambda u: (-depth(u), u)):
        energy.participate(u)
        packets = inbox[u] + [_Packet(None, s, tuple(payloads[s])) for s in holdings.get(u, ())]
        max_buffer[u] = max(1, len(inbox[u]))
        if len(packets) < d:
            out = packets
        else:
            out = [_fold(mt, packets, coeffs, t) for t in range(d)]
        if out:
            energy.transmit(u, parents[u], len(out))
            inbox[parents[u]].extend(out)

    received = inbox[newcomer]
    max_buffer[newcomer] = len(received)
    results = [_fold(mt, received, coeffs, t).payload for t in range(d)]
    return results, max_buffer


def _fold(mt, packets: Sequence[_Packet], coeffs, t: int) -> _Packet:
    length = len(packets[0].payload) if packets else 0
    acc = [0] * length
    for p in packets:
        if p.target is None:
            c = coeffs[t][p.slot]
            if not c:
                continue
            m = mt[c]
            for i, v in enumerate(p.payload):
                acc[i] ^= m[v]
        elif p.target == t:
            for i, v in enumerate(p.payload):
                acc[i] ^= v
    return _Packet(t, -1, tuple(acc))


def iterative_repair(plan: RepairPlan, node_shares: Mapping[int, Share]) -> RepairOutcome:
    """Run the re-encoding chain of ``plan``; one packet per tree edge."""
    members = plan.tree.members
    missing = [m for m in members if m not in node_shares]
    if missing:
        raise MissingShare(f"tree members {missing} hold no share")
    spec = node_shares[members[0]].spec
    energy = EnergyReport(control_tx=plan.control_tx)
    holdings = {m: (i,) for i, m in enumerate(members)}
    payloads = [node_shares[m].payload for m in members]
    (payload,), buffers = _stream(
        spec, plan.tree.parents(), plan.tree.newcomer, holdings, payloads, [plan.coeffs], energy
    )
    share = Share(plan.share_index, plan.beta, payload, spec)
    return RepairOutcome((share,), energy, buffers, plan)


def traditional_repair(
    topology: Topology,
    newcomer_id: int,
    g: GeneratorMatrix,
    k: int,
    node_shares: Mapping[int, Share],
    beta: Sequence[int],
    share_index: int,
) -> RepairOutcome:
    """Download k shares from the hop-nearest holders, decode, re-encode beta."""
    adj, hold = _holder_graph(topology, newcomer_id, node_shares.keys())
    if len(hold) < k:
        raise InsufficientSurvivors(f"{len(hold)} surviving holders, need {k}")
    dist = bfs_hops(adj, newcomer_id)
    reach = sorted((dist[u], u) for u in hold if u in dist)
    if len(reach) < k:
        raise Disconnected(f"only {len(reach)} holders reachable from newcomer {newcomer_id}, need {k}")
    chosen = [u for _, u in reach[:k]]
    energy = EnergyReport()
    for u in chosen:
        energy.participate(u)
        energy.send_along(shortest_path(adj, u, newcomer_id))
        energy.control_tx += dist[u]  # the request travelling out
    data = decode([node_shares[u] for u in chosen])
    share = Share(share_index, tuple(beta), encode_vector(beta, data), g.spec)
    return RepairOutcome((share,), energy, {newcomer_id: k})


# -- drivers -----------------------------------------------------------------


def repair_node(
    topology: Topology,
    node_shares: Mapping[int, Share],
    failed_id: int,
    g: GeneratorMatrix,
    mode: RepairMode = RepairMode.EXACT,
    method: Method = Method.NC_ITERATIVE,
) -> RepairOutcome:
    """Regenerate ``failed_id``'s share at a newcomer occupying its slot.

    ``node_shares`` maps storage node -> share; the failed node's entry is
    only consulted for its share index (its payload is treated as lost).
    """
    if failed_id not in node_shares:
        raise MissingShare(f"no share record for failed node {failed_id}")
    failed_index = node_shares[failed_id].index
    survivors = {u: s for u, s in node_shares.items() if u != failed_id}
    topo = topology.with_newcomer(failed_id)
    if method is Method.NC_ITERATIVE:
        plan = plan_repair(topo, failed_id, survivors, g, mode, failed_index)
        return iterative_repair(plan, survivors)
    live = [s.coding_vector for s in survivors.values()]
    beta = choose_beta(mode, g, failed_index, live)
    return traditional_repair(topo, failed_id, g, g.k, survivors, beta, failed_index)


def multi_failure_repair(
    topology: Topology,
    failed_ids: Sequence[int],
    g: GeneratorMatrix,
    node_shares: Mapping[int, Share],
    mode: RepairMode = RepairMode.EXACT,
    method: Method = Method.NC_ITERATIVE,
) -> list[RepairOutcome]:
    """Repair simultaneous failures one by one, ascending id.

    Nodes not yet repaired are down; each finished newcomer joins the
    survivors for the next round.
    """
    failed = sorted(set(failed_ids))
    if len(failed) > g.n - g.k:
        raise TooManyFailures(f"{len(failed)} failures exceed n-k = {g.n - g.k}")
    topo = topology
    for f in failed:
        topo = topo.replace_node(f, alive=False)
    shares = dict(node_shares)
    pending = set(failed)
    outcomes = []
    for f in failed:
        current = {u: s for u, s in shares.items() if u not in pending or u == f}
        outcome = repair_node(topo, current, f, g, mode, method)
        shares[f] = outcome.new_share
        pending.discard(f)
        topo = topo.replace_node(f, alive=True, role=Role.STORAGE)
        outcomes.append(outcome)
    return outcomes


def multi_share_repair(
    assignment: Mapping[int, Sequence[Share]],
    failed_node: int,
    g: GeneratorMatrix,
    topology: Topology | None = None,
    mode: RepairMode = RepairMode.EXACT,
    method: Method = Method.NC_ITERATIVE,
) -> RepairOutcome:
    """Repair every share of ``failed_node`` when nodes may hold several shares.

    Helpers are taken nearest-first (hop distance, then more shares, then
    id) until they hold k shares; combining shares inside one node is free.
    ``topology=None`` means every node reaches every other in one hop.
    """
    lost = list(assignment.get(failed_node, ()))
    if not lost:
        raise MissingShare(f"node {failed_node} holds no shares")
    survivors = {u: list(s) for u, s in assignment.items() if u != failed_node and s}
    k = g.k
    if sum(len(s) for s in survivors.values()) < k:
        raise InsufficientShares(f"survivors hold fewer than {k} shares")

    if topology is None:
        ids = sorted(set(survivors) | {failed_node})
        adj = {u: tuple(v for v in ids if v != u) for u in ids}
    else:
        adj = topology.with_newcomer(failed_node).adjacency(STORAGE_VIEW)
    dist = bfs_hops(adj, failed_node)
    order = sorted((dist[u], -len(s), u) for u, s in survivors.items() if u in dist)
    helpers: list[int] = []
    slots: list[Share] = []
    for _, _, u in order:
        if len(slots) >= k:
            break
        helpers.append(u)
        slots.extend(survivors[u])
    if len(slots) < k:
        raise InsufficientShares(f"only {len(slots)} shares reachable, need {k}")
    slots = slots[:k]
    owner = []
    for u in helpers:
        owner += [u] * len(survivors[u])
    owner = owner[:k]

    live = [s.coding_vector for ss in survivors.values() for s in ss]
    betas = []
    for s in lost:
        beta = choose_beta(mode, g, s.index, live)
        betas.append(beta)
        live.append(beta)
    spec = g.spec
    energy = EnergyReport()

    if method is Method.TRADITIONAL:
        for u, s in zip(owner, slots):
            energy.participate(u)
            energy.send_along(shortest_path(adj, u, failed_node))
        data = decode(slots)
        new = tuple(Share(s.index, b, encode_vector(b, data), spec) for s, b in zip(lost, betas))
        return RepairOutcome(new, energy, {failed_node: k})

    alphas = [s.coding_vector for s in slots]
    coeffs = [solve_coefficients(spec, alphas, b) for b in betas]
    parents: dict[int, int] = {}
    for u in helpers:
        path = shortest_path(adj, u, failed_node)
        for a, b in zip(path, path[1:]):
            parents.setdefault(a, b)
    holdings: dict[int, list[int]] = {}
    for i, u in enumerate(owner):
        holdings.setdefault(u, []).append(i)
    payloads = [s.payload for s in slots]
    results, buffers = _stream(spec, parents, failed_node, holdings, payloads, coeffs, energy)
    new = tuple(Share(s.index, b, p, spec) for s, b, p in zip(lost, betas, results))
    return RepairOutcome(new, energy, buffers)
