"""Storage, repair, reconstruction and in-place modification.

A file is a vector x of length B = C(b, 2).  Node v stores
z_j = φ(v; e_j)·x for every j != pivot(v), which is b - 1 field elements.
Every routine accepts an optional ``ledger`` and records the number of
field elements it moves there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .errors import DomainError, RankDeficiencyError, ReconstructionError, UnrepairableError
from .field import FieldSpec
from .goodmatrix import GoodMatrix
from .ledger import BandwidthLedger
from .linalg import gauss_solve, rank, solve_unique
from .plucker import (
    NodeVector,
    are_dependent,
    codeword_basis,
    extend_payload,
    node_matrix,
    pair_count,
    pair_index,
    plucker_embed,
    sparse_to_dense,
    unit_row_sparse,
)


@dataclass(frozen=True)
class SystemConfig:
    field: FieldSpec
    b: int
    n: int

    def __post_init__(self):
        if self.b < 3:
            raise ValueError(f"b must be >= 3 (b = {self.b} gives a degenerate file length)")
        if not self.b <= self.n <= self.max_nodes:
            raise ValueError(f"need b <= n <= {self.max_nodes}, got n = {self.n}")

    @property
    def B(self) -> int:
        return pair_count(self.b)

    @property
    def alpha(self) -> int:
        return self.b - 1

    @property
    def beta(self) -> int:
        return 1

    @property
    def max_nodes(self) -> int:
        q = self.field.q
        return (q**self.b - 1) // (q - 1)


@dataclass
class NodeState:
    id: NodeVector
    payload: np.ndarray
    alive: bool = True

    def copy(self) -> NodeState:
        return NodeState(self.id, self.payload.copy(), self.alive)


@dataclass
class RepairPlan:
    failed: NodeVector
    helpers: list
    mode: str
    omitted: int | None = None
    extra: dict = dc_field(default_factory=dict)

    @property
    def cost(self) -> int:
        if self.mode == "min-bandwidth":
            return len(self.helpers)
        return len(self.helpers) * (self.failed.b - 1)


def _record(ledger, kind, elements, metadata=0, participants=(), **detail):
    if ledger is not None:
        ledger.record(kind, elements, metadata, [p.label for p in participants], detail)


def node_payload(F: FieldSpec, v: NodeVector, x) -> np.ndarray:
    return codeword_basis(F, v).apply(F, x)


def encode_store(
    F: FieldSpec, x, assignment: Sequence[NodeVector], ledger: BandwidthLedger | None = None
) -> list:
    """Send every node its payload; n(b - 1) elements leave the source."""
    vectors = [v if isinstance(v, NodeVector) else NodeVector.normalized(F, v) for v in assignment]
    if not vectors:
        return []
    b = vectors[0].b
    x = F.array(x)
    if x.shape != (pair_count(b),):
        raise ValueError(f"file length {x.size} != B = {pair_count(b)}")
    if len(set(vectors)) != len(vectors):
        raise ValueError("assignment repeats a 1-subspace")
    if any(v.b != b for v in vectors):
        raise ValueError("node vectors have different lengths")
    nodes = [NodeState(v, node_payload(F, v, x)) for v in vectors]
    _record(ledger, "store", len(nodes) * (b - 1), participants=vectors)
    return nodes


# -- minimum-bandwidth repair -------------------------------------------------


def _greedy_basis(F, candidates, target_rank):
    chosen = []
    for node in candidates:
        trial = chosen + [node]
        if rank(F, node_matrix([n.id for n in trial])) == len(trial):
            chosen = trial
            if len(chosen) == target_rank:
                break
    return chosen


def plan_min_bw_repair(F: FieldSpec, failed: NodeVector, active: Sequence[NodeState]) -> RepairPlan:
    """Choose b - 1 or b helpers whose span contains every e_t, t != s.

    First looks for b - 1 independent live nodes vanishing at some
    coordinate s with failed[s] != 0 (trying s in increasing order); falls
    back to any b independent live nodes.  Nodes parallel to ``failed``
    are never helpers: their share would be zero.
    """
    b = failed.b
    usable = [n for n in active if n.alive and not are_dependent(F, n.id, failed)]
    for s in range(b):
        if failed.coords[s] == 0:
            continue
        pool = [n for n in usable if n.id.coords[s] == 0]
        chosen = _greedy_basis(F, pool, b - 1)
        if len(chosen) == b - 1:
            return RepairPlan(failed, [n.id for n in chosen], "min-bandwidth", s)
    chosen = _greedy_basis(F, usable, b)
    if len(chosen) == b:
        s = failed.pivot
        return RepairPlan(failed, [n.id for n in chosen], "min-bandwidth", s)
    raise UnrepairableError(f"no live helper set can repair {failed} with one element each", [failed])


def helper_pair_share(F: FieldSpec, helper: NodeState, target: NodeVector) -> int:
    """φ(u; v)·x computed by helper u from its own payload only."""
    if not helper.alive:
        raise DomainError(f"helper {helper.id} is not alive")
    if are_dependent(F, helper.id, target):
        raise DomainError(f"helper {helper.id} is parallel to {target}")
    z = extend_payload(F, helper.id, helper.payload)
    return F.dot(target.array, z)


def min_bw_repair_assemble(F: FieldSpec, plan: RepairPlan, shares) -> np.ndarray:
    """Rebuild the failed payload from one share per helper.

    Share l equals -sum_t u_l[t] z_t with z_t = φ(v; e_t)·x.  Together with
    sum_t v[t] z_t = 0 these equations determine z exactly.
    """
    v = plan.failed
    U = node_matrix(plan.helpers)
    if len(shares) != len(plan.helpers):
        raise ValueError("one share per helper expected")
    A = np.vstack([F.neg(U), v.array[None, :]])
    w = np.concatenate([F.array(list(shares)), [0]])
    try:
        z = solve_unique(F, A, w, "repair system")
    except RankDeficiencyError as exc:
        raise AssertionError(f"repair plan for {v} violates its span condition") from exc
    return np.delete(z, v.pivot)


def min_bw_repair(
    F: FieldSpec,
    failed: NodeVector,
    active: Sequence[NodeState],
    ledger: BandwidthLedger | None = None,
    kind: str = "repair-min-bw",
):
    """Plan, collect shares and assemble.  Returns (payload, plan)."""
    plan = plan_min_bw_repair(F, failed, active)
    by_id = {n.id: n for n in active}
    shares = [helper_pair_share(F, by_id[u], failed) for u in plan.helpers]
    payload = min_bw_repair_assemble(F, plan, shares)
    _record(ledger, kind, len(shares), len(shares), plan.helpers, target=failed.label)
    return payload, plan


# -- local and parallel repair -------------------------------------------------


def _check_helpers(F, helpers):
    if not helpers:
        raise UnrepairableError("no helpers given")
    U = node_matrix([h.id for h in helpers])
    if rank(F, U) != len(helpers):
        raise DomainError("local repair helpers must be linearly independent")
    for h in helpers:
        if not h.alive:
            raise DomainError(f"helper {h.id} is not alive")
    return U


def _combine(F, failed, coeffs, extended):
    z = np.zeros(failed.b, dtype=np.int64)
    for g, ext in zip(coeffs, extended):
        if g:
            z = F.add(z, F.mul(int(g), ext))
    return np.delete(z, failed.pivot)


def _coefficients(F, U, failed):
    try:
        return gauss_solve(F, U.T, failed.array).x
    except RankDeficiencyError:
        raise UnrepairableError(f"{failed} is outside the span of the helpers", [failed]) from None


def local_repair(
    F: FieldSpec,
    failed: NodeVector,
    helpers: Sequence[NodeState],
    ledger: BandwidthLedger | None = None,
) -> np.ndarray:
    """Download whole payloads from l helpers spanning ``failed``."""
    U = _check_helpers(F, helpers)
    coeffs = _coefficients(F, U, failed)
    extended = [extend_payload(F, h.id, h.payload) for h in helpers]
    payload = _combine(F, failed, coeffs, extended)
    b = failed.b
    _record(ledger, "repair-local", len(helpers) * (b - 1), 0, [h.id for h in helpers],
            target=failed.label)
    return payload


def parallel_repair(
    F: FieldSpec,
    failed: Sequence[NodeVector],
    helpers: Sequence[NodeState],
    ledger: BandwidthLedger | None = None,
) -> list:
    """Repair several nodes from one download of s helpers: s(b - 1) elements."""
    U = _check_helpers(F, helpers)
    outside = []
    coeffs = []
    for v in failed:
        try:
            coeffs.append(_coefficients(F, U, v))
        except UnrepairableError:
            outside.append(v)
    if outside:
        names = ", ".join(str(v) for v in outside)
        raise UnrepairableError(f"outside the helpers' span: {names}", outside)
    extended = [extend_payload(F, h.id, h.payload) for h in helpers]
    out = [_combine(F, v, g, extended) for v, g in zip(failed, coeffs)]
    b = helpers[0].id.b
    _record(ledger, "repair-parallel", len(helpers) * (b - 1), 0, [h.id for h in helpers],
            targets=[v.label for v in failed])
    return out


# -- reconstruction -------------------------------------------------------------


def _check_independent(F, nodes):
    if not nodes:
        raise ReconstructionError("no nodes given", rank=0)
    b = nodes[0].id.b
    if len(nodes) != b:
        raise ReconstructionError(f"reconstruction needs exactly b = {b} nodes, got {len(nodes)}")
    rk = rank(F, node_matrix([n.id for n in nodes]))
    if rk != b:
        raise ReconstructionError(f"node set has rank {rk} < b = {b}", rank=rk)
    return b


def full_reconstruction_system(F: FieldSpec, nodes: Sequence[NodeState]):
    """The b^2 x B matrix with rows φ(u_i; e_j) and its right-hand side."""
    b = nodes[0].id.b
    B = pair_count(b)
    rows, rhs = [], []
    for n in nodes:
        z = extend_payload(F, n.id, n.payload)
        for j in range(b):
            rows.append(sparse_to_dense(unit_row_sparse(F, n.id, j), B))
            rhs.append(z[j])
    return np.vstack(rows), np.array(rhs, dtype=np.int64)


def reconstruct_full(
    F: FieldSpec, nodes: Sequence[NodeState], ledger: BandwidthLedger | None = None
) -> np.ndarray:
    """Download all b(b - 1) = 2B stored elements from b independent nodes."""
    b = _check_independent(F, nodes)
    A, w = full_reconstruction_system(F, nodes)
    x = solve_unique(F, A, w, "reconstruction system")
    _record(ledger, "reconstruct-full", b * (b - 1), 0, [n.id for n in nodes],
            per_node=[b - 1] * b)
    return x


def reconstruct_min(
    F: FieldSpec,
    nodes: Sequence[NodeState],
    N: GoodMatrix,
    ledger: BandwidthLedger | None = None,
) -> np.ndarray:
    """Download exactly B pair elements, scheduled by a good matrix.

    Node i ships φ(u_i; u_j)·x for every j with N[j][i] == 1.  Every peer
    is told the full identity list first (b(b - 1) identities of metadata).
    """
    b = _check_independent(F, nodes)
    if not isinstance(N, GoodMatrix):
        N = GoodMatrix(len(N), N)
    if N.b != b:
        raise ValueError(f"good matrix is {N.b}x{N.b}, need b = {b}")
    B = pair_count(b)
    ids = [n.id for n in nodes]
    w = np.zeros(B, dtype=np.int64)
    seen = np.zeros(B, dtype=np.int64)
    per_node = []
    for i, node in enumerate(nodes):
        sent = N.senders_to(i)
        per_node.append(len(sent))
        for j in sent:
            share = helper_pair_share(F, node, ids[j])
            lo, hi = min(i, j), max(i, j)
            k = pair_index(lo, hi, b)
            w[k] = share if i < j else F.neg(share)
            seen[k] += 1
    if not np.all(seen == 1):
        raise AssertionError("good matrix did not deliver every pair element exactly once")
    A = np.vstack([plucker_embed(F, ids[i], ids[j]) for i, j in _pairs(b)])
    x = solve_unique(F, A, w, "pair system")
    _record(ledger, "reconstruct-min", B, b * (b - 1), ids, per_node=per_node)
    return x


def _pairs(b):
    return [(i, j) for i in range(b) for j in range(i + 1, b)]


# -- modification -------------------------------------------------------------------


def file_diff(F: FieldSpec, x, y) -> list:
    """Sparse y - x as [(position, delta), ...] over nonzero deltas."""
    d = F.sub(F.array(y), F.array(x))
    return [(int(k), int(d[k])) for k in np.flatnonzero(d)]


def apply_modification(
    F: FieldSpec,
    nodes: Sequence[NodeState],
    diff,
    ledger: BandwidthLedger | None = None,
) -> list:
    """Update every live node from the sparse difference y - x alone.

    Each live node receives the same list of (position, delta) pairs.
    Dead nodes are left untouched; they are rebuilt on repair.
    """
    if not nodes:
        return []
    b = nodes[0].id.b
    B = pair_count(b)
    delta = {}
    for pos, val in diff:
        pos = int(pos)
        if not 0 <= pos < B:
            raise ValueError(f"position {pos} out of range [0, {B})")
        if pos in delta:
            raise ValueError(f"position {pos} listed twice")
        val = F.canonical(val)
        if val == 0:
            raise ValueError(f"delta at position {pos} is zero")
        delta[pos] = val
    out = []
    live = []
    for node in nodes:
        if not node.alive:
            out.append(node)
            continue
        basis = codeword_basis(F, node.id)
        payload = node.payload.copy()
        for k, row in enumerate(basis.sparse):
            acc = int(payload[k])
            for pos, coef in row:
                d = delta.get(pos)
                if d:
                    acc = F.add(acc, F.mul(coef, d))
            payload[k] = acc
        out.append(NodeState(node.id, payload, True))
        live.append(node.id)
    d = len(delta)
    bits = (math.ceil(math.log2(B)) + math.ceil(math.log2(F.q))) * d * len(live)
    _record(ledger, "modify", 0, d * len(live), live, pairs_per_node=d, bits=bits)
    return out
