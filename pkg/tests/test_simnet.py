import numpy as np
import pytest

from pluckerdss.assignment import (
    Assignment,
    fixture_path,
    full_assignment,
    load_vectors,
    locality_partition_assignment,
)
from pluckerdss.codec import SystemConfig, encode_store
from pluckerdss.errors import DSSError
from pluckerdss.field import GF
from pluckerdss.plucker import NodeVector
from pluckerdss.scenario import parse_scenario
from pluckerdss.simnet import Cluster, inject_failures, resilience_sweep, run_scenario


def units(b):
    return [NodeVector(tuple(int(i == k) for i in range(b))) for k in range(b)]


def setup(q, b, assignment=None):
    F = GF(q)
    a = assignment or full_assignment(F, b)
    return SystemConfig(F, b, len(a)), a


def run(text, q=3, b=4, seed=0, assignment=None):
    config, a = setup(q, b, assignment)
    return run_scenario(config, a, parse_scenario(text), seed)


def test_store_then_full_reconstruct():
    rep = run("store random\nreconstruct full\nassert recovered\nassert step.elements == 12")
    assert rep.ok
    assert rep.steps[1].elements == 2 * 6


def test_min_bandwidth_repair_cost():
    for seed in range(10):
        rep = run("store random\nfail random 1\nrepair dead min-bandwidth\nassert consistent", seed=seed)
        assert rep.ok
        assert rep.steps[2].elements in (3, 4)


def test_empty_scenario():
    rep = run("")
    assert rep.steps == [] and rep.ok
    assert rep.ledger.total_elements == 0


def test_failed_assertion_and_step_errors_are_recorded():
    rep = run("store random\nassert alive == 0\nrepair 1,0,0,0\nreconstruct full\nassert recovered")
    assert [s.status for s in rep.steps] == ["ok", "FAIL", "FAILED", "ok", "PASS"]
    assert not rep.ok
    assert "RESULT FAILED" in rep.to_text()


def test_ledger_conservation():
    """Every step's elements equal the per-algorithm counts."""
    q, b = 3, 4
    B = b * (b - 1) // 2
    rep = run(
        "store random\nfail random 3\nrepair dead\nfail 1,0,0,0\nrepair 1,0,0,0 min-bandwidth\n"
        "fail 1,1,0,0 1,2,0,0\nparallel-repair dead\nreconstruct full\nreconstruct min\n"
        "modify random 2\nassert consistent",
        q=q, b=b, seed=5,
    )
    assert rep.ok, rep.to_text()
    s = rep.steps
    assert s[0].elements == 40 * (b - 1)
    assert s[2].elements == sum(len(r["helpers"]) * (b - 1) if r["mode"] == "local" else len(r["helpers"])
                                for r in s[2].detail["repairs"])
    assert s[4].elements in (b - 1, b)
    assert s[6].elements == len(s[6].detail["helpers"]) * (b - 1)
    assert s[7].elements == 2 * B and s[8].elements == B
    assert s[9].elements == 0 and s[9].metadata == 2 * 40
    assert rep.ledger.total_elements == sum(x.elements for x in s)


def test_determinism():
    text = "store random\nfail random 4\nrepair dead\nmodify random 3\nreconstruct min\nassert recovered"
    a = run(text, seed=42).to_json()
    b = run(text, seed=42).to_json()
    c = run(text, seed=43).to_json()
    assert a == b
    assert a != c


def test_add_node_materializes_payload():
    F = GF(5)
    config = SystemConfig(F, 4, 4)
    a = Assignment(tuple(units(4)))
    c = Cluster(config, a, seed=1)
    x = c.store()
    v = NodeVector((1, 2, 3, 4))
    c.add_node(v)
    assert np.array_equal(c.node(v).payload, encode_store(F, x, [v])[0].payload)
    assert c.ledger.last().kind == "add-node" and c.ledger.last().elements == 3
    with pytest.raises(DSSError):
        c.add_node(v)


def test_inject_failures():
    config, a = setup(2, 4)
    c = Cluster(config, a)
    c.store()
    assert inject_failures(c, count=0) == []
    ids = [NodeVector((1, 0, 0, 0)), NodeVector((0, 0, 1, 1))]
    assert inject_failures(c, ids=ids) == ids
    assert {n.id for n in c.dead()} == set(ids)
    with pytest.raises(DSSError):
        inject_failures(c, ids=ids[:1])
    with pytest.raises(DSSError):
        inject_failures(c, count=100)
    c1, c2 = Cluster(config, a), Cluster(config, a)
    c1.store(), c2.store()
    assert inject_failures(c1, count=5, seed=9) == inject_failures(c2, count=5, seed=9)


def test_cluster_clone_is_independent():
    config, a = setup(2, 3)
    c = Cluster(config, a)
    c.store()
    d = c.clone()
    inject_failures(d, count=2)
    assert len(c.alive()) == 7 and len(d.alive()) == 5


def test_auto_repair_prefers_local():
    F = GF(2)
    a = locality_partition_assignment(F, units(4), 2)
    config = SystemConfig(F, 4, len(a))
    c = Cluster(config, a, seed=3)
    c.store()
    inject_failures(c, ids=[NodeVector((1, 1, 0, 0))])
    mode, helpers = c.repair(NodeVector((1, 1, 0, 0)))
    assert mode == "local" and len(helpers) == 2
    assert c.consistent()


def test_sweep_resilient7():
    F = GF(2)
    a = load_vectors(F, fixture_path("resilient7.txt"))
    config = SystemConfig(F, 7, len(a))
    rep = resilience_sweep(config, a, 2)
    assert rep.ok and rep.sets_checked == 11 + 55
    assert rep.worst_min_bw_cost <= 7
    assert not resilience_sweep(config, a, 3, verify=False).ok


def test_sweep_unit_basis_fails():
    F = GF(3)
    a = Assignment(tuple(units(3)))
    rep = resilience_sweep(SystemConfig(F, 3, 3), a, 1)
    assert not rep.ok
    assert all(f["reason"] == "survivors do not span" for f in rep.failures)


def test_sweep_partition_q5():
    F = GF(5)
    a = locality_partition_assignment(F, units(4), 2)
    rep = resilience_sweep(SystemConfig(F, 4, len(a)), a, 4)
    assert rep.ok
    assert rep.worst_local_size <= 2
    assert set(rep.min_bw_costs) <= {3, 4}
