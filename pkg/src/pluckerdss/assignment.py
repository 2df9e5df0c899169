"""Identifier-vector assignments and exhaustive oracles for their resilience.

Matrix text files hold one row per line, entries are canonical integers
separated by whitespace; ``#`` starts a comment.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import BudgetExceededError
from .field import FieldSpec
from .linalg import in_span, rank
from .plucker import NodeVector, node_matrix, normalized_vectors

DEFAULT_NODE_BUDGET = 1 << 14
DEFAULT_ENUM_BUDGET = 1 << 22


@dataclass(frozen=True)
class Assignment:
    vectors: tuple
    resilience: int | None = None
    locality: int | None = None
    provenance: str = "explicit"

    def __post_init__(self):
        vecs = tuple(self.vectors)
        object.__setattr__(self, "vectors", vecs)
        if len(set(vecs)) != len(vecs):
            raise ValueError("assignment repeats a 1-subspace")
        if vecs and len({v.b for v in vecs}) != 1:
            raise ValueError("assignment mixes vector lengths")

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    @property
    def b(self) -> int:
        return self.vectors[0].b

    def to_text(self) -> str:
        return "".join(" ".join(str(c) for c in v.coords) + "\n" for v in self.vectors)


def projective_size(q: int, k: int) -> int:
    """Number of 1-subspaces of F_q^k, the Gaussian coefficient [k; 1]_q."""
    return (q**k - 1) // (q - 1)


def full_assignment(F: FieldSpec, b: int, budget: int = DEFAULT_NODE_BUDGET) -> Assignment:
    size = projective_size(F.q, b)
    if size > budget:
        raise BudgetExceededError(f"{size} nodes exceed the node budget {budget}")
    vecs = tuple(normalized_vectors(F, b))
    return Assignment(vecs, None, None, "full")


def min_distance_bruteforce(F: FieldSpec, G, budget: int = DEFAULT_ENUM_BUDGET) -> int:
    """Minimum Hamming weight of m·G over every nonzero message m."""
    G = F.array(G)
    if G.ndim == 1:
        G = G[None, :]
    k, n = G.shape
    total = F.q**k
    if total > budget:
        raise BudgetExceededError(f"{total} messages exceed the enumeration budget {budget}")
    best = n + 1
    chunk = 1 << 14
    powers = F.q ** np.arange(k - 1, -1, -1, dtype=np.int64)
    for start in range(1, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        msgs = (idx[:, None] // powers[None, :]) % F.q
        words = F.matmul(msgs, G)
        w = int(np.count_nonzero(words, axis=1).min())
        best = min(best, w)
    if best == n + 1:
        raise ValueError("generator matrix has no nonzero message (k = 0)")
    return best


def from_generator_matrix(F: FieldSpec, G, budget: int = DEFAULT_ENUM_BUDGET) -> Assignment:
    """Columns of a b x n generator matrix; resilience is (min distance - 1)."""
    G = F.array(G)
    b, n = G.shape
    if rank(F, G) != b:
        raise ValueError(f"generator matrix has rank {rank(F, G)} < {b}")
    if np.any(~G.any(axis=0)):
        raise ValueError("generator matrix has a zero column")
    vecs = [NodeVector.normalized(F, G[:, k]) for k in range(n)]
    if len(set(vecs)) != n:
        raise ValueError("generator matrix has two columns in the same 1-subspace")
    delta = min_distance_bruteforce(F, G, budget)
    return Assignment(tuple(vecs), delta - 1, None, "generator-matrix")


def locality_partition_assignment(F: FieldSpec, basis: Sequence, c: int) -> Assignment:
    """Every 1-subspace of the span of each block of c consecutive basis vectors."""
    basis = [v.array if isinstance(v, NodeVector) else F.array(v) for v in basis]
    b = len(basis)
    if c < 2 or b % c:
        raise ValueError(f"group size c = {c} must be >= 2 and divide b = {b}")
    if rank(F, np.array(basis)) != b:
        raise ValueError("partition basis is not linearly independent")
    vecs = []
    for g in range(b // c):
        group = np.array(basis[g * c : (g + 1) * c])
        for coeff in normalized_vectors(F, c):
            vecs.append(NodeVector.normalized(F, F.matvec(group.T, coeff.array)))
    return Assignment(tuple(vecs), F.q ** (c - 1) - 1, c, "locality-partition")


@dataclass(frozen=True)
class ResilienceResult:
    ok: bool
    t: int
    witness: tuple | None = None
    checked: int = 0

    def __bool__(self):
        return self.ok


def is_t_resilient(
    F: FieldSpec, vectors: Sequence[NodeVector], t: int, budget: int = DEFAULT_ENUM_BUDGET
) -> ResilienceResult:
    """Does every (S minus T), |T| = t, still span F^b?  Returns a witness T if not."""
    vectors = list(vectors)
    n = len(vectors)
    if not 0 <= t <= n:
        raise ValueError(f"t = {t} outside [0, {n}]")
    count = math.comb(n, t)
    if count > budget:
        raise BudgetExceededError(f"C({n}, {t}) = {count} subsets exceed the budget {budget}")
    b = vectors[0].b
    M = node_matrix(vectors)
    checked = 0
    for T in itertools.combinations(range(n), t):
        keep = np.delete(M, list(T), axis=0)
        checked += 1
        if keep.shape[0] < b or rank(F, keep) < b:
            return ResilienceResult(False, t, tuple(vectors[k] for k in T), checked)
    return ResilienceResult(True, t, None, checked)


def _reduce(F, basis, vec):
    for piv, row in basis:
        c = vec[piv]
        if c:
            vec = [F.sub(a, F.mul(c, r)) for a, r in zip(vec, row)]
    return vec


def _with_row(F, basis, vec):
    """basis plus the reduced ``vec`` (pivot scaled to 1), or None if dependent."""
    vec = _reduce(F, basis, vec)
    piv = next((k for k, a in enumerate(vec) if a), None)
    if piv is None:
        return None
    s = F.inv(vec[piv])
    return basis + [(piv, [F.mul(s, a) for a in vec])]


def find_local_repair_set(
    F: FieldSpec, active: Sequence[NodeVector], failed: NodeVector, max_size: int
) -> list | None:
    """Smallest independent subset of ``active`` (size <= max_size) spanning ``failed``.

    Subsets are tried by increasing size, in ``itertools.combinations``
    order of the registry, so ties go to the earliest nodes.  The search
    walks that order depth first, extending one reduced basis per prefix.
    """
    active = list(active)
    if failed in active:
        return [failed]
    if not active or not in_span(F, node_matrix(active), failed.array):
        return None
    rows = [list(v.coords) for v in active]
    target = list(failed.coords)
    n = len(rows)

    def search(start, basis, left, chosen):
        if left == 0:
            return chosen if not any(_reduce(F, basis, target)) else None
        for k in range(start, n - left + 1):
            ext = _with_row(F, basis, rows[k])
            if ext is None:
                continue
            hit = search(k + 1, ext, left - 1, chosen + [k])
            if hit is not None:
                return hit
        return None

    for size in range(2, min(max_size, n) + 1):
        hit = search(0, [], size, [])
        if hit is not None:
            return [active[k] for k in hit]
    return None


# -- matrix text files --------------------------------------------------------


def parse_matrix_text(text: str) -> list:
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append([int(v) for v in line.replace(",", " ").split()])
    if rows and len({len(r) for r in rows}) != 1:
        raise ValueError("matrix rows have different lengths")
    return rows


def load_matrix(path) -> list:
    return parse_matrix_text(Path(path).read_text())


def load_vectors(F: FieldSpec, path) -> Assignment:
    rows = load_matrix(path)
    return Assignment(tuple(NodeVector.normalized(F, r) for r in rows), provenance="explicit")


def format_matrix(rows) -> str:
    return "".join(" ".join(str(int(v)) for v in r) + "\n" for r in rows)


def fixture_path(name: str) -> Path:
    return Path(__file__).parent / "fixtures" / name
