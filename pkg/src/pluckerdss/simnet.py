"""In-process cluster simulation: registry, failures, orchestration, reports.

Messages are function calls; the BandwidthLedger is what makes the traffic
observable.  Everything random is drawn from generators seeded by the
scenario seed, so equal inputs give byte-identical reports.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import codec
from .assignment import Assignment, find_local_repair_set
from .codec import NodeState, SystemConfig
from .errors import BudgetExceededError, DSSError, UnrepairableError
from .goodmatrix import build_good_matrix
from .ledger import BandwidthLedger
from .linalg import rank
from .plucker import NodeVector, node_matrix
from .scenario import Scenario, Step

REPORT_VERSION = 1
LOCAL_SEARCH_BUDGET = 200_000


def _greedy_independent(F, vectors, limit):
    chosen = []
    for v in vectors:
        trial = chosen + [v]
        if rank(F, node_matrix(trial)) == len(trial):
            chosen = trial
            if len(chosen) == limit:
                break
    return chosen


def _bounded_local_search(F, active, failed, cap, budget=LOCAL_SEARCH_BUDGET):
    n = len(active)
    cost = sum(math.comb(n, k) for k in range(2, min(cap, n) + 1))
    if cost > budget:
        raise BudgetExceededError(f"local repair search over {cost} subsets exceeds {budget}")
    return find_local_repair_set(F, active, failed, cap)


class Cluster:
    """A registry of nodes holding one file, plus its bandwidth ledger."""

    def __init__(self, config: SystemConfig, assignment: Assignment, seed: int = 0,
                 locality_cap: int | None = None):
        if len(assignment) != config.n or assignment.b != config.b:
            raise ValueError("assignment does not match the system configuration")
        self.config = config
        self.assignment = assignment
        self.seed = seed
        if locality_cap is None:
            locality_cap = assignment.locality or config.b
        self.locality_cap = locality_cap
        self.F = config.field
        self.nodes: dict = {}
        self.ledger = BandwidthLedger()
        self.rng = random.Random(seed)
        self.np_rng = np.random.default_rng(seed)
        self.file = None
        self.recovered = None

    # -- registry -------------------------------------------------------------

    @property
    def b(self) -> int:
        return self.config.b

    def alive(self) -> list:
        return [n for n in self.nodes.values() if n.alive]

    def dead(self) -> list:
        return [n for n in self.nodes.values() if not n.alive]

    def node(self, v: NodeVector) -> NodeState:
        try:
            return self.nodes[v]
        except KeyError:
            raise DSSError(f"no node {v} in the registry") from None

    def clone(self) -> Cluster:
        other = Cluster(self.config, self.assignment, self.seed, self.locality_cap)
        other.nodes = {k: n.copy() for k, n in self.nodes.items()}
        other.file = None if self.file is None else self.file.copy()
        return other

    # -- operations -------------------------------------------------------------

    def random_file(self) -> np.ndarray:
        return self.F.random(self.np_rng, self.config.B)

    def store(self, x=None) -> np.ndarray:
        x = self.random_file() if x is None else self.F.array(x)
        nodes = codec.encode_store(self.F, x, self.assignment.vectors, self.ledger)
        self.nodes = {n.id: n for n in nodes}
        self.file = x
        return x

    def repair(self, v: NodeVector, mode: str = "auto"):
        """Rebuild node v; returns (mode used, helper vectors)."""
        node = self.node(v)
        if node.alive:
            raise DSSError(f"node {v} is alive")
        active = [n for n in self.alive()]
        if mode in ("auto", "local"):
            try:
                helpers = _bounded_local_search(self.F, [n.id for n in active], v, self.locality_cap)
            except BudgetExceededError:
                if mode == "local":
                    raise
                helpers = None
            if helpers is not None:
                states = [self.nodes[u] for u in helpers]
                node.payload = codec.local_repair(self.F, v, states, self.ledger)
                node.alive = True
                return "local", helpers
            if mode == "local":
                raise UnrepairableError(f"no local repair set of size <= {self.locality_cap} for {v}", [v])
        if mode not in ("auto", "min-bandwidth"):
            raise ValueError(f"unknown repair mode {mode!r}")
        payload, plan = codec.min_bw_repair(self.F, v, active, self.ledger)
        node.payload = payload
        node.alive = True
        return "min-bandwidth", plan.helpers

    def parallel_repair(self, failed):
        """Repair several dead nodes from one download.

        Helpers: a basis of the live nodes inside span(failed) when that
        suffices, otherwise a greedy basis of all live nodes.
        """
        failed = list(failed)
        for v in failed:
            if self.node(v).alive:
                raise DSSError(f"node {v} is alive")
        alive_ids = [n.id for n in self.alive()]
        W = node_matrix(failed)
        k = rank(self.F, W)
        inside = [u for u in alive_ids if rank(self.F, np.vstack([W, u.array])) == k]
        helpers = _greedy_independent(self.F, inside, k)
        if len(helpers) < k:
            helpers = _greedy_independent(self.F, helpers + alive_ids, self.b)
        states = [self.nodes[u] for u in helpers]
        payloads = codec.parallel_repair(self.F, failed, states, self.ledger)
        for v, p in zip(failed, payloads):
            self.nodes[v].payload = p
            self.nodes[v].alive = True
        return helpers

    def reconstruction_set(self) -> list:
        ids = _greedy_independent(self.F, [n.id for n in self.alive()], self.b)
        if len(ids) < self.b:
            raise codec.ReconstructionError(
                f"live nodes span only dimension {len(ids)} < {self.b}", rank=len(ids)
            )
        return [self.nodes[u] for u in ids]

    def reconstruct(self, mode: str = "full") -> np.ndarray:
        nodes = self.reconstruction_set()
        if mode == "full":
            x = codec.reconstruct_full(self.F, nodes, self.ledger)
        elif mode == "min":
            x = codec.reconstruct_min(self.F, nodes, build_good_matrix(self.b), self.ledger)
        else:
            raise ValueError(f"unknown reconstruction mode {mode!r}")
        self.recovered = x
        return x

    def modify(self, diff):
        updated = codec.apply_modification(self.F, list(self.nodes.values()), diff, self.ledger)
        self.nodes = {n.id: n for n in updated}
        if self.file is not None:
            y = self.file.copy()
            for pos, d in diff:
                y[pos] = self.F.add(int(y[pos]), self.F.canonical(d))
            self.file = y

    def add_node(self, v: NodeVector):
        """Materialize a brand-new node with a minimum-bandwidth repair."""
        if v in self.nodes:
            raise DSSError(f"node {v} already exists")
        if len(self.nodes) + 1 > self.config.max_nodes:
            raise DSSError("registry is full")
        payload, plan = codec.min_bw_repair(self.F, v, self.alive(), self.ledger, kind="add-node")
        self.nodes[v] = NodeState(v, payload, True)
        return plan.helpers

    def consistent(self) -> bool:
        if self.file is None:
            return False
        return all(
            np.array_equal(n.payload, codec.node_payload(self.F, n.id, self.file))
            for n in self.alive()
        )


def inject_failures(cluster: Cluster, count: int | None = None, ids=None, seed=None) -> list:
    """Mark nodes dead, either the given ``ids`` or ``count`` seeded-uniform picks."""
    if ids is not None:
        victims = [cluster.node(v) for v in ids]
        for n in victims:
            if not n.alive:
                raise DSSError(f"node {n.id} is already dead")
    else:
        alive = cluster.alive()
        if count is None or count < 0 or count > len(alive):
            raise DSSError(f"cannot fail {count} of {len(alive)} live nodes")
        rng = cluster.rng if seed is None else random.Random(seed)
        victims = rng.sample(alive, count)
    for n in victims:
        n.alive = False
    return [n.id for n in victims]


# -- scenario execution ------------------------------------------------------


@dataclass
class StepResult:
    index: int
    line: int
    op: str
    text: str
    status: str
    message: str = ""
    elements: int = 0
    metadata: int = 0
    detail: dict = dc_field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "line": self.line,
            "op": self.op,
            "text": self.text,
            "status": self.status,
            "message": self.message,
            "elements": self.elements,
            "metadata": self.metadata,
            "detail": self.detail,
        }


@dataclass
class Report:
    header: dict
    steps: list
    ledger: BandwidthLedger

    @property
    def ok(self) -> bool:
        return all(s.status in ("ok", "PASS") for s in self.steps)

    @property
    def assertions(self) -> list:
        return [s for s in self.steps if s.op == "assert"]

    def as_dict(self) -> dict:
        return {
            "format": "pluckerdss-report",
            "version": REPORT_VERSION,
            "config": self.header,
            "steps": [s.as_dict() for s in self.steps],
            "ledger": {
                "total_elements": self.ledger.total_elements,
                "total_metadata": self.ledger.total_metadata,
                "by_kind": self.ledger.totals_by_kind(),
                "records": [r.as_dict() for r in self.ledger.records],
            },
            "assertions": {
                "passed": sum(s.status == "PASS" for s in self.assertions),
                "failed": sum(s.status == "FAIL" for s in self.assertions),
            },
            "ok": self.ok,
        }

    def to_json(self) -> str:
        return json.dumps(_plain(self.as_dict()), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        h = self.header
        lines = [
            f"# field={h['field']} b={h['b']} B={h['B']} n={h['n']} seed={h['seed']}",
        ]
        for s in self.steps:
            msg = f"  {s.message}" if s.message else ""
            lines.append(
                f"{s.index:>4} {s.status:<6} {s.op:<15} elements={s.elements:<5} "
                f"metadata={s.metadata:<5}{msg}"
            )
        lines.append(
            f"total elements={self.ledger.total_elements} metadata={self.ledger.total_metadata}"
        )
        for kind, total in self.ledger.totals_by_kind().items():
            lines.append(f"  {kind}: {total}")
        lines.append("RESULT " + ("ok" if self.ok else "FAILED"))
        return "\n".join(lines) + "\n"


def _histogram(values) -> dict:
    out = {}
    for v in sorted(values):
        out[str(v)] = out.get(str(v), 0) + 1
    return out


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [int(v) for v in obj]
    return obj


_OPS = {
    "==": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
}


def _metric(cluster: Cluster, name: str, prev: StepResult | None) -> int:
    if name == "alive":
        return len(cluster.alive())
    if name == "dead":
        return len(cluster.dead())
    if name == "n":
        return len(cluster.nodes)
    if name == "B":
        return cluster.config.B
    if name == "b":
        return cluster.b
    if name == "ledger.total":
        return cluster.ledger.total_elements
    if name == "ledger.metadata":
        return cluster.ledger.total_metadata
    if name == "ledger.last":
        rec = cluster.ledger.last()
        return rec.elements if rec else 0
    if name == "step.elements":
        return prev.elements if prev else 0
    if name == "step.metadata":
        return prev.metadata if prev else 0
    if name.startswith("ledger."):
        return cluster.ledger.totals_by_kind().get(name[len("ledger."):], 0)
    raise ValueError(f"unknown metric {name!r}")


def _execute(cluster: Cluster, step: Step, prev: StepResult | None) -> tuple:
    """Run one step; returns (status, message, detail)."""
    F = cluster.F
    a = step.args
    if step.op == "store":
        x = cluster.store(None if a == ["random"] else [int(v) for v in a])
        return "ok", "", {"file": [int(v) for v in x]}
    if step.op == "fail":
        if a and a[0] == "random":
            ids = inject_failures(cluster, count=int(a[1]) if len(a) > 1 else 1)
        else:
            ids = inject_failures(cluster, ids=[NodeVector.parse(F, t) for t in a])
        return "ok", " ".join(str(v) for v in ids), {"failed": [v.label for v in ids]}
    if step.op == "repair":
        mode = "auto"
        targets = a
        if a and a[-1] in ("auto", "local", "min-bandwidth"):
            mode, targets = a[-1], a[:-1]
        vs = [n.id for n in cluster.dead()] if targets == ["dead"] else [NodeVector.parse(F, t) for t in targets]
        used = []
        for v in vs:
            how, helpers = cluster.repair(v, mode)
            used.append({"node": v.label, "mode": how, "helpers": [u.label for u in helpers]})
        return "ok", "; ".join(f"{u['node']} via {u['mode']} ({len(u['helpers'])} helpers)" for u in used), {"repairs": used}
    if step.op == "parallel-repair":
        vs = [n.id for n in cluster.dead()] if a == ["dead"] else [NodeVector.parse(F, t) for t in a]
        helpers = cluster.parallel_repair(vs)
        return "ok", f"{len(vs)} nodes from {len(helpers)} helpers", {"helpers": [u.label for u in helpers]}
    if step.op == "reconstruct":
        mode = a[0] if a else "full"
        x = cluster.reconstruct(mode)
        match = cluster.file is not None and np.array_equal(x, cluster.file)
        return "ok", "recovered file matches" if match else "recovered file differs", {
            "file": [int(v) for v in x], "matches": bool(match)}
    if step.op == "modify":
        if a and a[0] == "random":
            d = int(a[1])
            positions = sorted(cluster.rng.sample(range(cluster.config.B), d))
            diff = [(p, cluster.rng.randrange(1, F.q)) for p in positions]
        else:
            diff = []
            for tok in a:
                pos, val = tok.split(":")
                diff.append((int(pos), int(val)))
        cluster.modify(diff)
        return "ok", f"{len(diff)} positions", {"diff": [[p, v] for p, v in diff]}
    if step.op == "add":
        v = NodeVector.parse(F, " ".join(a))
        helpers = cluster.add_node(v)
        return "ok", f"{v} from {len(helpers)} helpers", {"helpers": [u.label for u in helpers]}
    if step.op == "assert":
        if a == ["recovered"]:
            ok = cluster.recovered is not None and cluster.file is not None and np.array_equal(
                cluster.recovered, cluster.file)
            return ("PASS" if ok else "FAIL"), "recovered", {}
        if a == ["consistent"]:
            ok = cluster.consistent()
            return ("PASS" if ok else "FAIL"), "consistent", {}
        name, op, rhs = a
        lhs = _metric(cluster, name, prev)
        ok = _OPS[op](lhs, int(rhs))
        return ("PASS" if ok else "FAIL"), f"{name} = {lhs} {op} {rhs}", {"value": lhs}
    raise ValueError(f"unknown step {step.op!r}")


def run_scenario(config: SystemConfig, assignment: Assignment, scenario: Scenario, seed: int = 0,
                 locality_cap: int | None = None) -> Report:
    cluster = Cluster(config, assignment, seed, locality_cap)
    header = {
        "field": config.field.spec_string(),
        "modulus": config.field.modulus,
        "b": config.b,
        "B": config.B,
        "n": config.n,
        "seed": seed,
        "provenance": assignment.provenance,
        "locality_cap": cluster.locality_cap,
    }
    results = []
    prev = None
    for k, step in enumerate(scenario.steps, 1):
        mark = len(cluster.ledger)
        try:
            status, message, detail = _execute(cluster, step, prev)
        except (DSSError, ValueError, AssertionError) as exc:
            status, message, detail = "FAILED", f"{type(exc).__name__}: {exc}", {}
        recs = cluster.ledger.since(mark)
        res = StepResult(
            k, step.line, step.op, step.text, status, message,
            sum(r.elements for r in recs), sum(r.metadata for r in recs), detail,
        )
        results.append(res)
        if step.op != "assert":
            prev = res
    return Report(header, results, cluster.ledger)


# -- resilience sweep ----------------------------------------------------------


@dataclass
class SweepReport:
    t: int
    sets_checked: int = 0
    failures: list = dc_field(default_factory=list)
    locality_violations: list = dc_field(default_factory=list)
    min_bw_costs: list = dc_field(default_factory=list)
    local_sizes: list = dc_field(default_factory=list)
    reconstruction_cost: int = 0
    repairs_checked: int = 0
    locality_cap: int | None = None
    claimed_locality: int | None = None

    @property
    def ok(self) -> bool:
        return not self.failures and not self.locality_violations

    @property
    def worst_min_bw_cost(self) -> int:
        return max(self.min_bw_costs, default=0)

    @property
    def worst_local_size(self) -> int:
        return max(self.local_sizes, default=0)

    def as_dict(self) -> dict:
        return {
            "format": "pluckerdss-sweep",
            "version": REPORT_VERSION,
            "t": self.t,
            "sets_checked": self.sets_checked,
            "ok": self.ok,
            "failures": self.failures[:50],
            "failure_count": len(self.failures),
            "locality_violations": self.locality_violations[:50],
            "locality_violation_count": len(self.locality_violations),
            "claimed_locality": self.claimed_locality,
            "locality_cap": self.locality_cap,
            "worst_min_bw_cost": self.worst_min_bw_cost,
            "worst_local_size": self.worst_local_size,
            "worst_reconstruction_cost": self.reconstruction_cost,
            "repairs_checked": self.repairs_checked,
            "min_bw_cost_histogram": _histogram(self.min_bw_costs),
            "local_size_histogram": _histogram(self.local_sizes),
        }

    def to_json(self) -> str:
        return json.dumps(_plain(self.as_dict()), sort_keys=True, indent=2) + "\n"

    def to_text(self) -> str:
        d = self.as_dict()
        lines = [
            f"resilience sweep t={self.t}: {self.sets_checked} failure sets",
            f"  worst min-bandwidth repair cost: {d['worst_min_bw_cost']} elements",
            f"  worst local repair size: {d['worst_local_size']} helpers",
            f"  reconstruction cost: {d['worst_reconstruction_cost']} elements",
            f"  failures: {d['failure_count']}, locality violations: {d['locality_violation_count']}",
        ]
        for f in self.failures[:10]:
            lines.append(f"  FAIL {f}")
        lines.append("RESULT " + ("ok" if self.ok else "FAILED"))
        return "\n".join(lines) + "\n"


def resilience_sweep(config: SystemConfig, assignment: Assignment, t: int,
                     locality_cap: int | None = None, seed: int = 0, verify: bool = True,
                     budget: int = 1 << 20) -> SweepReport:
    """Fail every set of at most t nodes and check repair and reconstruction.

    A failed node counts as repairable if a local repair set (within the
    locality cap) or a minimum-bandwidth plan exists among the survivors.
    With ``verify`` every repair and one full reconstruction per set are
    executed on a stored random file and compared with the truth.
    """
    F = config.field
    n = len(assignment)
    total = sum(math.comb(n, k) for k in range(1, t + 1))
    if total > budget:
        raise BudgetExceededError(f"{total} failure sets exceed the budget {budget}")
    base = Cluster(config, assignment, seed, locality_cap)
    base.store()
    cap = base.locality_cap
    report = SweepReport(t, locality_cap=cap, claimed_locality=assignment.locality)
    vectors = list(assignment.vectors)
    # A smallest local set found with nobody failed stays smallest whenever
    # it avoids the failure set, since removing nodes cannot shrink the minimum.
    unrestricted = {}
    for v in vectors:
        try:
            unrestricted[v] = _bounded_local_search(F, [u for u in vectors if u != v], v, cap)
        except BudgetExceededError:
            unrestricted[v] = None
    for k in range(1, t + 1):
        for T in itertools.combinations(range(n), k):
            report.sets_checked += 1
            failed = [vectors[i] for i in T]
            failed_set = set(failed)
            tag = [v.label for v in failed]
            survivors = [v for i, v in enumerate(vectors) if i not in T]
            states = [base.nodes[v] for v in survivors]
            if rank(F, node_matrix(survivors)) < config.b:
                report.failures.append({"failed": tag, "reason": "survivors do not span"})
                continue
            if verify:
                basis = _greedy_independent(F, survivors, config.b)
                x = codec.reconstruct_full(F, [base.nodes[u] for u in basis])
                if not np.array_equal(x, base.file):
                    report.failures.append({"failed": tag, "reason": "reconstruction mismatch"})
                report.reconstruction_cost = max(report.reconstruction_cost, config.b * (config.b - 1))
            for v in failed:
                report.repairs_checked += 1
                truth = base.nodes[v].payload
                repaired = False
                local = unrestricted[v]
                if local is None or not failed_set.isdisjoint(local):
                    try:
                        local = _bounded_local_search(F, survivors, v, cap)
                    except BudgetExceededError:
                        local = None
                if local is not None:
                    repaired = True
                    report.local_sizes.append(len(local))
                    if verify:
                        got = codec.local_repair(F, v, [base.nodes[u] for u in local])
                        if not np.array_equal(got, truth):
                            report.failures.append({"failed": tag, "node": v.label, "reason": "local repair mismatch"})
                elif assignment.locality is not None:
                    report.locality_violations.append({"failed": tag, "node": v.label})
                try:
                    plan = codec.plan_min_bw_repair(F, v, states)
                except UnrepairableError:
                    plan = None
                if plan is not None:
                    repaired = True
                    report.min_bw_costs.append(len(plan.helpers))
                    if verify:
                        shares = [codec.helper_pair_share(F, base.nodes[u], v) for u in plan.helpers]
                        got = codec.min_bw_repair_assemble(F, plan, shares)
                        if not np.array_equal(got, truth):
                            report.failures.append({"failed": tag, "node": v.label, "reason": "min-bandwidth repair mismatch"})
                if not repaired:
                    report.failures.append({"failed": tag, "node": v.label, "reason": "unrepairable"})
    return report
