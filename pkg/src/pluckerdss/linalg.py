"""Gaussian elimination over a FieldSpec.

Matrices are 2-D int64 numpy arrays of canonical field elements.  The
elimination works a whole column at a time, but can still emit the
equivalent sequence of elementary row operations so that the same
operations can be replayed on a vector of payload scalars.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import RankDeficiencyError
from .field import FieldSpec


@dataclass(frozen=True)
class RowOp:
    """One elementary row operation.

    kind "swap": exchange rows ``target`` and ``source``.
    kind "scale": row[target] *= factor.
    kind "addmul": row[target] += factor * row[source].
    """

    kind: str
    target: int
    source: int = -1
    factor: int = 0


@dataclass
class Echelon:
    matrix: np.ndarray
    pivots: list
    ops: list = dc_field(default_factory=list)

    @property
    def rank(self) -> int:
        return len(self.pivots)


@dataclass
class Solution:
    x: np.ndarray
    rank: int
    pivots: list
    ops: list

    @property
    def unique(self) -> bool:
        return self.rank == len(self.x)


def row_reduce(F: FieldSpec, M, record: bool = False, ncols: int | None = None) -> Echelon:
    """Reduced row echelon form of ``M``.

    Only the first ``ncols`` columns are used for pivoting (the rest ride
    along, which is how augmented systems are handled).  With ``record``
    the elementary operations are returned in application order.
    """
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise ValueError("row_reduce expects a 2-D matrix")
    nrows, total = A.shape
    ncols = total if ncols is None else ncols
    pivots = []
    ops = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            A[[r, p]] = A[[p, r]]
            if record:
                ops.append(RowOp("swap", r, p))
        lead = int(A[r, c])
        if lead != 1:
            s = F.inv(lead)
            A[r] = F.mul(A[r], s)
            if record:
                ops.append(RowOp("scale", r, factor=s))
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = F.sub(A[hit], F.mul(col[hit][:, None], A[r][None, :]))
            if record:
                for t in hit:
                    ops.append(RowOp("addmul", int(t), r, F.neg(int(col[t]))))
        pivots.append(c)
        r += 1
    return Echelon(A, pivots, ops)


def replay(F: FieldSpec, ops, values) -> np.ndarray:
    """Apply recorded row operations to a vector (rows = entries)."""
    v = np.array(values, dtype=np.int64, copy=True)
    for op in ops:
        if op.kind == "swap":
            v[[op.target, op.source]] = v[[op.source, op.target]]
        elif op.kind == "scale":
            v[op.target] = F.mul(int(v[op.target]), op.factor)
        elif op.kind == "addmul":
            v[op.target] = F.add(int(v[op.target]), F.mul(op.factor, int(v[op.source])))
        else:
            raise ValueError(f"unknown row operation {op.kind!r}")
    return v


def rank(F: FieldSpec, M) -> int:
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return 0
    return row_reduce(F, M).rank


def gauss_solve(F: FieldSpec, A, w, record: bool = False) -> Solution:
    """Solve ``A x = w``.

    Raises RankDeficiencyError (carrying ``rank(A)``) if the system is
    inconsistent.  If ``A`` has a nontrivial kernel the free variables are
    set to zero; ``Solution.unique`` tells the caller which case occurred.
    """
    A = np.asarray(A, dtype=np.int64)
    w = np.asarray(w, dtype=np.int64)
    if A.ndim != 2 or w.ndim != 1 or A.shape[0] != w.shape[0]:
        raise ValueError(f"shape mismatch: A {A.shape}, w {w.shape}")
    nrows, ncols = A.shape
    aug = np.concatenate([A, w[:, None]], axis=1)
    ech = row_reduce(F, aug, record=record, ncols=ncols)
    R = ech.matrix
    rk = ech.rank
    if rk < nrows and np.any(R[rk:, ncols] != 0):
        raise RankDeficiencyError(f"inconsistent system (rank {rk})", rank=rk)
    x = np.zeros(ncols, dtype=np.int64)
    for i, c in enumerate(ech.pivots):
        x[c] = R[i, ncols]
    return Solution(x, rk, ech.pivots, ech.ops)


def solve_unique(F: FieldSpec, A, w, what: str = "system") -> np.ndarray:
    sol = gauss_solve(F, A, w)
    if not sol.unique:
        raise RankDeficiencyError(
            f"{what} has rank {sol.rank} < {len(sol.x)} unknowns", rank=sol.rank
        )
    return sol.x


def combination_coefficients(F: FieldSpec, rows, target) -> np.ndarray:
    """Coefficients g with sum_t g[t] * rows[t] == target."""
    rows = np.asarray(rows, dtype=np.int64)
    return gauss_solve(F, rows.T, np.asarray(target, dtype=np.int64)).x


def in_span(F: FieldSpec, rows, v) -> bool:
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        return not np.any(np.asarray(v))
    return rank(F, np.vstack([rows, v])) == rank(F, rows)


def same_row_space(F: FieldSpec, A, B) -> bool:
    ra, rb = rank(F, A), rank(F, B)
    return ra == rb == rank(F, np.vstack([A, B]))


def intersection_dim(F: FieldSpec, A, B) -> int:
    """dim(rowspace(A) & rowspace(B)) by rank(A) + rank(B) - rank(A;B)."""
    return rank(F, A) + rank(F, B) - rank(F, np.vstack([A, B]))
