"""Plücker coordinates of pairs of vectors and the per-node codeword bases.

Pair coordinates use 0-based indices: the pair (i, j), i < j, of ``[0, b)``
sits at position ``pair_index(i, j, b)`` in lexicographic order, so a
Plücker vector has length ``B = b * (b - 1) // 2``.

For a node direction v, the row φ(v; e_j) is sparse: it holds v[i] at pair
(i, j) for i < j and -v[k] at pair (j, k) for k > j.  A node stores the
products of the file with these rows for every j except its pivot.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DomainError
from .field import FieldSpec
from .linalg import rank


def pair_count(b: int) -> int:
    return b * (b - 1) // 2


def pair_index(i: int, j: int, b: int) -> int:
    """Position of the pair (i, j), 0 <= i < j < b, in lexicographic order."""
    if not (0 <= i < j < b):
        raise ValueError(f"need 0 <= i < j < b, got i={i}, j={j}, b={b}")
    return i * b - i * (i + 1) // 2 + (j - i - 1)


@lru_cache(maxsize=None)
def pairs(b: int) -> tuple:
    return tuple((i, j) for i in range(b) for j in range(i + 1, b))


@lru_cache(maxsize=None)
def _pair_arrays(b):
    P = np.array(pairs(b), dtype=np.int64).reshape(-1, 2)
    return P[:, 0], P[:, 1]


@dataclass(frozen=True)
class NodeVector:
    """Normalized identifier of a storage node: leftmost nonzero entry is 1."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        object.__setattr__(self, "coords", coords)
        nz = [k for k, c in enumerate(coords) if c != 0]
        if not nz:
            raise DomainError("the zero vector does not identify a node")
        if coords[nz[0]] != 1:
            raise DomainError(f"{coords} is not normalized (leftmost nonzero must be 1)")

    @classmethod
    def normalized(cls, F: FieldSpec, coords) -> NodeVector:
        """Scale ``coords`` so its leftmost nonzero entry is 1."""
        coords = [F.canonical(c) for c in coords]
        lead = next((c for c in coords if c != 0), 0)
        if lead == 0:
            raise DomainError("the zero vector does not identify a node")
        s = F.inv(lead)
        return cls(tuple(F.mul(c, s) for c in coords))

    @property
    def b(self) -> int:
        return len(self.coords)

    @property
    def pivot(self) -> int:
        return next(k for k, c in enumerate(self.coords) if c != 0)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)

    @property
    def label(self) -> str:
        return ",".join(str(c) for c in self.coords)

    @classmethod
    def parse(cls, F: FieldSpec, text: str) -> NodeVector:
        parts = text.replace(",", " ").split()
        return cls.normalized(F, [int(p) for p in parts])

    def __str__(self):
        return "(" + self.label + ")"


def _coords(v):
    if isinstance(v, NodeVector):
        return v.array
    return np.asarray(v, dtype=np.int64)


def plucker_embed(F: FieldSpec, v, u) -> np.ndarray:
    """φ(v; u): the 2x2 minors of the matrix with rows v and u."""
    v, u = _coords(v), _coords(u)
    if v.shape != u.shape or v.ndim != 1:
        raise ValueError(f"length mismatch: {v.shape} vs {u.shape}")
    I, J = _pair_arrays(len(v))
    return F.sub(F.mul(v[I], u[J]), F.mul(v[J], u[I]))


def unit_row_sparse(F: FieldSpec, v, j: int) -> list:
    """Sparse φ(v; e_j) as [(pair position, value), ...], ascending, nonzero only."""
    coords = v.coords if isinstance(v, NodeVector) else tuple(int(c) for c in v)
    b = len(coords)
    out = []
    for i in range(j):
        if coords[i]:
            out.append((pair_index(i, j, b), coords[i]))
    for k in range(j + 1, b):
        if coords[k]:
            out.append((pair_index(j, k, b), F.neg(coords[k])))
    return out


def sparse_to_dense(entries, length: int) -> np.ndarray:
    out = np.zeros(length, dtype=np.int64)
    for pos, val in entries:
        out[pos] = val
    return out


@dataclass(frozen=True)
class CodewordBasis:
    """Rows φ(v; e_j) for j in ``indices`` (increasing), held sparsely."""

    owner: NodeVector
    indices: tuple
    sparse: tuple
    matrix: np.ndarray

    @property
    def b(self) -> int:
        return self.owner.b

    def __len__(self):
        return len(self.indices)

    def apply(self, F: FieldSpec, x) -> np.ndarray:
        return F.matvec(self.matrix, np.asarray(x, dtype=np.int64))


def _build_basis(F, v, omit):
    idx = tuple(j for j in range(v.b) if j != omit)
    sparse = tuple(tuple(unit_row_sparse(F, v, j)) for j in idx)
    B = pair_count(v.b)
    M = np.vstack([sparse_to_dense(r, B) for r in sparse]) if sparse else np.zeros((0, B), np.int64)
    M.setflags(write=False)
    return CodewordBasis(v, idx, sparse, M)


@lru_cache(maxsize=65536)
def _cached_basis(F, v):
    basis = _build_basis(F, v, v.pivot)
    assert rank(F, basis.matrix) == v.b - 1, f"codeword basis of {v} is rank deficient"
    return basis


def codeword_basis(F: FieldSpec, v: NodeVector) -> CodewordBasis:
    if not isinstance(v, NodeVector):
        v = NodeVector.normalized(F, v)
    return _cached_basis(F, v)


def basis_omit(F: FieldSpec, v: NodeVector, s: int) -> CodewordBasis:
    """Rows φ(v; e_i) for i != s; spans the same space whenever v[s] != 0."""
    if v.coords[s] == 0:
        raise DomainError(f"coordinate {s} of {v} is zero")
    if s == v.pivot:
        return codeword_basis(F, v)
    return _build_basis(F, v, s)


def missing_payload_element(F: FieldSpec, v: NodeVector, payload, s: int | None = None) -> int:
    """φ(v; e_s)·x from a stored payload, via sum_j v_j φ(v; e_j) = 0.

    ``payload`` holds φ(v; e_j)·x for j != pivot(v), in increasing j.
    """
    r = v.pivot
    s = r if s is None else s
    gamma = v.coords
    if gamma[s] == 0:
        raise DomainError(f"coordinate {s} of {v} is zero")
    payload = [int(z) for z in payload]
    if len(payload) != v.b - 1:
        raise ValueError(f"payload length {len(payload)} != b - 1 = {v.b - 1}")
    if s != r:
        return payload[s if s < r else s - 1]
    acc = 0
    for k, j in enumerate(j for j in range(v.b) if j != r):
        if gamma[j]:
            acc = F.add(acc, F.mul(gamma[j], payload[k]))
    return F.neg(F.div(acc, gamma[s]))


def extend_payload(F: FieldSpec, v: NodeVector, payload) -> np.ndarray:
    """All b values φ(v; e_j)·x, j in [0, b), from the b - 1 stored ones."""
    r = v.pivot
    payload = np.asarray(payload, dtype=np.int64)
    z = np.empty(v.b, dtype=np.int64)
    z[:r] = payload[:r]
    z[r + 1 :] = payload[r:]
    z[r] = missing_payload_element(F, v, payload, r)
    return z


def are_dependent(F: FieldSpec, u, v) -> bool:
    return not np.any(plucker_embed(F, u, v))


def intersection_vector(F: FieldSpec, u: NodeVector, v: NodeVector) -> np.ndarray:
    """φ(u; v), which spans the intersection of the two codeword spaces."""
    w = plucker_embed(F, u, v)
    if not np.any(w):
        raise DomainError(f"{u} and {v} span the same 1-subspace")
    return w


def normalized_vectors(F: FieldSpec, b: int):
    """All normalized vectors of F^b: by pivot position, then lexicographically."""
    q = F.q
    for r in range(b):
        tail = b - r - 1
        for n in range(q**tail):
            rest = []
            for _ in range(tail):
                n, d = divmod(n, q)
                rest.append(d)
            yield NodeVector((0,) * r + (1,) + tuple(reversed(rest)))


def node_matrix(vectors: Sequence[NodeVector]) -> np.ndarray:
    if not vectors:
        return np.zeros((0, 0), dtype=np.int64)
    return np.array([v.coords for v in vectors], dtype=np.int64)
