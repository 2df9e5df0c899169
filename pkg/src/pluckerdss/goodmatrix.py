"""Binary download schedules for bandwidth-B reconstruction.

Column i of a good matrix N lists the peers j whose pair element
φ(u_i; u_j)·x node i ships to the data collector (N[j][i] == 1).  The
docstrings number rows and columns from 1 to match the usual statement of
the six conditions; storage is 0-based.

    (1) column b is all zero
    (2) row b is one on columns 1..b-1
    (3) the diagonal is zero
    (4) N[i][j] != N[j][i] for i != j
    (5) b even: columns 1..b-1 each have weight b/2
    (6) b odd: columns 1..b-1 have weight (b-1)/2 or (b+1)/2, total C(b, 2)
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidGoodMatrixError


@dataclass(frozen=True)
class GoodMatrix:
    b: int
    bits: tuple

    def __post_init__(self):
        bits = tuple(tuple(int(v) for v in row) for row in self.bits)
        object.__setattr__(self, "bits", bits)
        bad = validate_good_matrix(bits)
        if bad:
            raise InvalidGoodMatrixError(f"violates conditions {bad}", bad)
        if len(bits) != self.b:
            raise InvalidGoodMatrixError(f"matrix size {len(bits)} != b = {self.b}")

    def column_weights(self):
        return [sum(row[i] for row in self.bits) for i in range(self.b)]

    def senders_to(self, i: int):
        """Peers j for which node i ships φ(u_i; u_j)·x."""
        return [j for j in range(self.b) if self.bits[j][i]]

    def to_text(self) -> str:
        return format_grid(self.bits)


def _cyclic_rows(first):
    n = len(first)
    return [first[n - k :] + first[: n - k] for k in range(n)]


def build_good_matrix(b: int) -> GoodMatrix:
    if b < 3:
        raise ValueError(f"good matrices need b >= 3, got {b}")
    n = b - 1
    if b % 2 == 0:
        first = [0] * (b // 2) + [1] * (b // 2 - 1)
        block = _cyclic_rows(first)
    else:
        first = [0] * ((b + 1) // 2) + [1] * ((b - 3) // 2)
        block = _cyclic_rows(first)
        h = (b - 1) // 2
        for k in range(h):
            block[k][h + k] = 1
    bits = [row + [0] for row in block]
    bits.append([1] * n + [0])
    return GoodMatrix(b, tuple(tuple(r) for r in bits))


def validate_good_matrix(bits) -> list:
    """Return the 1-based numbers of the violated conditions (empty if good)."""
    rows = [list(r) for r in bits]
    b = len(rows)
    if any(len(r) != b for r in rows):
        raise ValueError("good-matrix candidate must be square")
    if any(v not in (0, 1) for r in rows for v in r):
        raise ValueError("good-matrix candidate must be binary")
    bad = []
    if any(rows[i][b - 1] for i in range(b)):
        bad.append(1)
    if not all(rows[b - 1][i] == 1 for i in range(b - 1)):
        bad.append(2)
    if any(rows[i][i] for i in range(b)):
        bad.append(3)
    if any(rows[i][j] == rows[j][i] for i in range(b) for j in range(i + 1, b)):
        bad.append(4)
    weights = [sum(rows[k][i] for k in range(b)) for i in range(b - 1)]
    if b % 2 == 0:
        if any(w != b // 2 for w in weights):
            bad.append(5)
    else:
        total = sum(map(sum, rows))
        if any(w not in ((b - 1) // 2, (b + 1) // 2) for w in weights) or total != b * (b - 1) // 2:
            bad.append(6)
    return bad


def format_grid(bits) -> str:
    return "\n".join(" ".join(str(v) for v in row) for row in bits) + "\n"


def parse_grid(text: str):
    rows = [line.split() for line in text.splitlines() if line.strip()]
    return tuple(tuple(int(v) for v in r) for r in rows)
