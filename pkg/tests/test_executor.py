import copy
import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import net_of
from intercomm.config import network_from_config
from intercomm.coordination import Coordinator
from intercomm.executor import (
    consensus_report, plan_cost, simulate, total_cost, verify_connectivity_over_time, waiting_table,
)
from intercomm.generate import random_config


def star_net(speeds=None):
    # team 1 = {1, 2} meets only at point 1; robot 1 starts 3 away, robot 2 starts 5 away
    return net_of([(0, 0), (3, 0), (0, 5)], [([1, 2], [1]), ([1], [2]), ([2], [3])],
                  starts=[2, 3], speeds=speeds)


def test_first_arrival_waits_for_the_other():
    net = star_net()
    plan = Coordinator(net).synthesize()
    trace = simulate(plan, net, cycles=1, consensus=False)
    first = trace.meetings[0]
    assert first.team == 1 and first.location == 1
    assert first.time == pytest.approx(5.0)
    assert first.waits[1] == pytest.approx(2.0)
    assert first.waits[2] == pytest.approx(0.0)


def test_speed_scales_travel_time():
    net = star_net(speeds=[1.0, 2.5])
    trace = simulate(Coordinator(net).synthesize(), net, cycles=1, consensus=False)
    first = trace.meetings[0]
    assert first.time == pytest.approx(3.0)
    assert first.waits == pytest.approx({1: 0.0, 2: 1.0})


def test_colocated_meeting_fires_at_zero():
    net = net_of([(0, 0), (1, 0)], [([1, 2], [1])], starts=[1, 1])
    trace = simulate(Coordinator(net).synthesize(), net, cycles=3)
    assert [e.time for e in trace.meetings] == [0.0, 0.0, 0.0]
    assert all(w == 0.0 for e in trace.meetings for w in e.waits.values())


def test_zero_cycles_gives_empty_trace(golden_net, golden_plan):
    trace = simulate(golden_plan, golden_net, cycles=0)
    assert trace.meetings == [] and trace.completed_cycles() == []
    assert verify_connectivity_over_time(trace, golden_net).ok


def test_truncated_trace_drops_partial_cycle(golden_net, golden_plan):
    full = simulate(golden_plan, golden_net, cycles=3, consensus=False)
    assert full.completed_cycles() == [1, 2, 3]
    cut = max(e.time for e in full.meetings if e.cycle == 2) - 1e-6
    part = simulate(golden_plan, golden_net, cycles=3, consensus=False, max_time=cut)
    assert part.completed_cycles() == [1]
    rep = verify_connectivity_over_time(part, golden_net)
    assert rep.cycles == [1] and rep.ok


def test_golden_meets_every_cycle(golden_net, golden_plan):
    trace = simulate(golden_plan, golden_net, cycles=10)
    rep = verify_connectivity_over_time(trace, golden_net)
    assert rep.ok
    # two rounds per cycle, one meeting per team per round
    assert rep.counts == {m: 20 for m in golden_net.team_ids}
    assert all(n == 2 for per in rep.per_cycle.values() for n in per.values())


def test_skipping_a_team_is_flagged(golden_net, golden_plan):
    plan = copy.deepcopy(golden_plan)
    for rp in plan.rounds:
        rp.columns = [dataclasses.replace(c, teams=tuple(m for m in c.teams if m != 3)) for c in rp.columns]
    trace = simulate(plan, golden_net, cycles=2)
    rep = verify_connectivity_over_time(trace, golden_net)
    assert not rep.ok
    assert rep.counts[3] == 0
    assert any("team 3" in f for f in rep.failures)


def test_meetings_happen_at_the_planned_point(golden_net, golden_plan):
    trace = simulate(golden_plan, golden_net, cycles=2)
    for e in trace.meetings:
        for i in golden_net.members(e.team):
            pos = trace.position(i, e.time)
            assert math.dist(pos, golden_net.graph.position(e.location)) < 1e-9


def test_odometer_matches_plan_cost(golden_net, golden_coord, golden_plan):
    trace = simulate(golden_plan, golden_net, cycles=5)
    per, total = total_cost(trace)
    want_per, want_total = plan_cost(golden_plan, golden_coord.wts, 5)
    assert total == pytest.approx(want_total, abs=1e-9)
    for i in per:
        assert per[i] == pytest.approx(want_per[i], abs=1e-9)
    assert want_total == pytest.approx(5 * golden_plan.suffix_cost(golden_coord.wts), abs=1e-9)


def test_simulation_is_deterministic(golden_net, golden_plan):
    a = simulate(golden_plan, golden_net, cycles=3, seed=4)
    b = simulate(golden_plan, golden_net, cycles=3, seed=4)
    assert a.events == b.events and a.consensus == b.consensus


def test_consensus_identical_values_stay_put(golden_net, golden_plan):
    trace = simulate(golden_plan, golden_net, cycles=2, values={i: 0.5 for i in golden_net.robot_ids})
    assert all(v == 0.5 for _, vals in trace.consensus for v in vals.values())


def test_consensus_two_robots_average_at_first_meeting():
    net = net_of([(0, 0), (1, 0)], [([1, 2], [1, 2])], starts=[1, 2])
    trace = simulate(Coordinator(net).synthesize(), net, cycles=1, values={1: 0.0, 2: 1.0})
    assert trace.consensus[1][1] == {1: 0.5, 2: 0.5}
    assert consensus_report(trace).final == 0.0


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 100_000))
def test_meetings_preserve_the_sum(seed):
    net = network_from_config(random_config(seed, 4, 3, 9))
    trace = simulate(Coordinator(net).synthesize(), net, cycles=3, seed=seed)
    total0 = sum(trace.consensus[0][1].values())
    for _, vals in trace.consensus:
        assert math.isclose(sum(vals.values()), total0, abs_tol=1e-9)
    spreads = consensus_report(trace).spreads
    assert all(b <= a + 1e-12 for a, b in zip(spreads, spreads[1:]))


def test_waiting_table_rows(golden_net, golden_plan):
    trace = simulate(golden_plan, golden_net, cycles=2, consensus=False)
    rows = waiting_table(trace, cycle=2)
    assert {r[1] for r in rows} == set(golden_net.team_ids)
    assert all(r[4] >= 0 for r in rows)


def test_bad_speed_rejected(golden_net, golden_plan):
    with pytest.raises(ValueError):
        simulate(golden_plan, golden_net, speeds={1: 0.0})


def averaging_oracle(plan, net, values, cycles):
    """Apply each planned meeting as an averaging matrix, in plan order."""
    idx = {i: k for k, i in enumerate(net.robot_ids)}
    v = np.array([values[i] for i in net.robot_ids], dtype=float)
    for rp in plan.unrolled(cycles):
        for m, _, _ in rp.meetings():
            A = np.eye(len(v))
            members = [idx[i] for i in net.members(m)]
            for a in members:
                A[a] = 0.0
                A[a, members] = 1.0 / len(members)
            v = A @ v
    return v


def test_hub_instance_matches_averaging_oracle():
    # one robot shared by all five teams of three: mixing is slow, about
    # 0.7 per cycle, so 50 cycles leave a spread near 1e-8
    cfg = random_config(509, 11, 5, 15)
    net = network_from_config(cfg)
    assert len(set.intersection(*(set(t["members"]) for t in cfg["teams"]))) == 1
    plan = Coordinator(net).synthesize()
    values = {r["id"]: r["value"] for r in cfg["robots"]}
    trace = simulate(plan, net, cycles=50, values=values)
    want = averaging_oracle(plan, net, values, 50)
    got = trace.consensus[-1][1]
    for k, i in enumerate(net.robot_ids):
        assert got[i] == pytest.approx(want[k], abs=1e-12)
    assert 1e-9 < want.max() - want.min() < 1e-7
