"""Byte files <-> field symbols, and cluster snapshots.

Symbol encoding:
  * GF(2): bits, most significant bit of each byte first.  A file of B
    symbols is exactly ceil(B / 8) bytes and its padding bits must be zero.
  * GF(q), 2 < q <= 256: one byte per symbol; bytes >= q are rejected.
  * q > 256: fixed-width big-endian chunks of ceil(log2(q) / 8) bytes.
"""

from __future__ import annotations

import json

import numpy as np

from .codec import NodeState
from .field import FieldSpec, parse_field
from .plucker import NodeVector, pair_count

SNAPSHOT_FORMAT = "pluckerdss-snapshot"
SNAPSHOT_VERSION = 1


class EncodingError(ValueError):
    pass


def symbol_width(F: FieldSpec) -> int:
    return ((F.q - 1).bit_length() + 7) // 8


def required_bytes(F: FieldSpec, count: int) -> int:
    if F.q == 2:
        return (count + 7) // 8
    if F.q <= 256:
        return count
    return count * symbol_width(F)


def bytes_to_symbols(F: FieldSpec, data: bytes, count: int) -> np.ndarray:
    need = required_bytes(F, count)
    if len(data) != need:
        raise EncodingError(f"expected {need} bytes for B = {count} symbols over {F!r}, got {len(data)}")
    if F.q == 2:
        bits = np.unpackbits(np.frombuffer(data, dtype=np.uint8)).astype(np.int64)
        if np.any(bits[count:]):
            raise EncodingError("padding bits after the last symbol must be zero")
        return bits[:count]
    if F.q <= 256:
        sym = np.frombuffer(data, dtype=np.uint8).astype(np.int64)
    else:
        w = symbol_width(F)
        sym = np.array([int.from_bytes(data[k : k + w], "big") for k in range(0, len(data), w)],
                       dtype=np.int64)
    bad = np.flatnonzero(sym >= F.q)
    if bad.size:
        raise EncodingError(f"symbol {int(sym[bad[0]])} at position {int(bad[0])} is not in {F!r}")
    return sym


def symbols_to_bytes(F: FieldSpec, symbols) -> bytes:
    sym = np.asarray(symbols, dtype=np.int64)
    if F.q == 2:
        return np.packbits(sym.astype(np.uint8)).tobytes()
    if F.q <= 256:
        return sym.astype(np.uint8).tobytes()
    w = symbol_width(F)
    return b"".join(int(s).to_bytes(w, "big") for s in sym)


def snapshot_dict(F: FieldSpec, b: int, nodes) -> dict:
    return {
        "format": SNAPSHOT_FORMAT,
        "version": SNAPSHOT_VERSION,
        "field": F.spec_string(),
        "modulus": F.modulus,
        "b": b,
        "B": pair_count(b),
        "nodes": [
            {"id": list(n.id.coords), "payload": [int(v) for v in n.payload], "alive": bool(n.alive)}
            for n in nodes
        ],
    }


def dump_snapshot(F: FieldSpec, b: int, nodes) -> str:
    return json.dumps(snapshot_dict(F, b, nodes), sort_keys=True, indent=2) + "\n"


def load_snapshot(text: str):
    """Returns (field, b, [NodeState, ...])."""
    doc = json.loads(text)
    if doc.get("format") != SNAPSHOT_FORMAT:
        raise ValueError("not a pluckerdss snapshot")
    if doc.get("version") != SNAPSHOT_VERSION:
        raise ValueError(f"unsupported snapshot version {doc.get('version')}")
    F = parse_field(doc["field"], doc.get("modulus"))
    b = int(doc["b"])
    nodes = []
    for entry in doc["nodes"]:
        v = NodeVector(tuple(entry["id"]))
        payload = F.array(entry["payload"])
        if v.b != b or payload.shape != (b - 1,):
            raise ValueError(f"node {v} does not match b = {b}")
        nodes.append(NodeState(v, payload, bool(entry["alive"])))
    return F, b, nodes
