"""Line-oriented scenario files.

One step per line; ``#`` starts a comment.  Node vectors are written as
comma-separated coordinates (``1,1,0``) and are normalized on use.

    store random | store <x_0> ... <x_{B-1}>
    fail <vec> ... | fail random <k>
    repair <vec> ... [auto|local|min-bandwidth] | repair dead [mode]
    parallel-repair <vec> ... | parallel-repair dead
    reconstruct full | reconstruct min
    modify <pos>:<delta> ... | modify random <d>
    add <vec>
    assert recovered | assert consistent | assert <metric> <op> <int>

Metrics: alive, dead, n, b, B, ledger.total, ledger.metadata, ledger.last,
ledger.<kind>, step.elements, step.metadata.  Operators: == != <= >= < >.
Positions are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError

OPS = ("store", "fail", "repair", "parallel-repair", "reconstruct", "modify", "add", "assert")
_COMPARATORS = ("==", "!=", "<=", ">=", "<", ">")


@dataclass(frozen=True)
class Step:
    op: str
    args: list
    line: int
    text: str


@dataclass(frozen=True)
class Scenario:
    steps: tuple

    def __len__(self):
        return len(self.steps)


def _check(op, args, path, line):
    def bad(msg):
        raise ConfigError(msg, path, line)

    if op == "store" and not args:
        bad("store needs 'random' or the file symbols")
    if op == "fail":
        if not args:
            bad("fail needs node vectors or 'random <k>'")
        if args[0] == "random" and (len(args) > 2 or (len(args) == 2 and not args[1].isdigit())):
            bad("usage: fail random <k>")
    if op in ("repair", "parallel-repair") and not args:
        bad(f"{op} needs node vectors or 'dead'")
    if op == "reconstruct" and args not in ([], ["full"], ["min"]):
        bad("usage: reconstruct full|min")
    if op == "modify":
        if args and args[0] == "random":
            if len(args) != 2 or not args[1].isdigit():
                bad("usage: modify random <d>")
        else:
            for tok in args:
                if tok.count(":") != 1:
                    bad(f"modify entries are <pos>:<delta>, got {tok!r}")
    if op == "add" and not args:
        bad("add needs a node vector")
    if op == "assert":
        if args in (["recovered"], ["consistent"]):
            return
        if len(args) != 3 or args[1] not in _COMPARATORS:
            bad("usage: assert <metric> <op> <int> | assert recovered | assert consistent")
        try:
            int(args[2])
        except ValueError:
            bad(f"assert right-hand side must be an integer, got {args[2]!r}")


def parse_scenario(text: str, path=None) -> Scenario:
    steps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        op, *args = body.split()
        op = op.lower()
        if op not in OPS:
            raise ConfigError(f"unknown step {op!r}", path, lineno)
        _check(op, args, path, lineno)
        steps.append(Step(op, args, lineno, body))
    return Scenario(tuple(steps))


def load_scenario(path) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_text(), str(path))
