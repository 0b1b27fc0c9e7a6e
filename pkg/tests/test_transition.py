import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from helpers import net_of
from intercomm.generate import random_config
from intercomm.config import network_from_config
from intercomm.transition import (
    WAIT, WPTS, WTS, InadmissiblePath, RobotNotInTeam, compose, path_cost, project, trace_of,
)
from oracles import floyd, robot_states


def test_golden_state_counts(golden_net):
    sizes = {i: len(WTS(golden_net, i).states) for i in golden_net.robot_ids}
    # robot 2 sits in three teams of four points, the rest in two
    assert sizes == {1: 8, 2: 12, 3: 8, 4: 8, 5: 8}


def test_wts_weights_and_actions():
    net = net_of([(0, 0), (3, 4), (6, 8)], [([1], [1, 3])], starts=[1], edges=[(1, 2), (2, 3)])
    w = WTS(net, 1)
    assert w.states == (1, 3)
    assert w.weight(1, 1) == 0.0
    assert w.weight(1, 3) == pytest.approx(10.0)
    assert w.action(1, 1) == WAIT
    assert not w.is_transition(1, 2)
    assert w.label(3) == frozenset({(1, 3)})


def test_two_by_two_product_has_four_successors():
    net = net_of([(0, 0), (1, 0)], [([1, 2], [1, 2])], starts=[1, 2])
    team = WPTS([WTS(net, 1), WTS(net, 2)])
    succ = dict(team.successors((1, 2)))
    assert set(succ) == {(1, 1), (1, 2), (2, 1), (2, 2)}
    assert succ[(2, 1)] == pytest.approx(2.0)
    assert team.label((2, 1)) == frozenset({(1, 2), (2, 1)})
    with pytest.raises(RobotNotInTeam):
        team.index_of(3)


def test_project_compose_round_trip():
    path = [(1, 2, 3), (1, 1, 3), (2, 1, 1)]
    per = [project(path, (4, 5, 6), i) for i in (4, 5, 6)]
    assert per[1] == [2, 1, 1]
    assert compose(per) == path
    with pytest.raises(ValueError):
        compose([[1, 2], [1]])


def test_path_cost_lasso():
    net = net_of([(0, 0), (1, 0), (3, 0)], [([1], [1, 2, 3])], starts=[1])
    w = WTS(net, 1)
    assert path_cost(w, [1, 2, 3]) == pytest.approx(3.0)
    pre, cyc = path_cost(w, [1], suffix=[2, 3])
    assert pre == pytest.approx(1.0)
    assert cyc == pytest.approx(4.0)
    with pytest.raises(InadmissiblePath):
        path_cost(w, [])
    assert trace_of(w, [1, 2]) == [frozenset({(1, 1)}), frozenset({(1, 2)})]


@pytest.mark.parametrize("seed", range(8))
def test_weights_match_floyd(seed):
    cfg = random_config(seed, 4, 3, 8)
    net = network_from_config(cfg)
    d = floyd(cfg)
    for i in net.robot_ids:
        w = WTS(net, i)
        assert list(w.states) == robot_states(cfg, i)
        for a, b in itertools.product(w.states, repeat=2):
            assert math.isclose(w.weight(a, b), d[a, b], abs_tol=1e-9)
            assert w.weight(a, b) == w.weight(b, a)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_product_size_and_additive_cost(seed):
    cfg = random_config(seed, 3, 2, 6)
    net = network_from_config(cfg)
    factors = [WTS(net, i) for i in net.robot_ids]
    team = WPTS(factors)
    q = team.initial
    succ = list(team.successors(q))
    assert len(succ) == math.prod(len(f.states) for f in factors)
    for q2, w in succ:
        assert math.isclose(w, sum(f.weight(a, b) for f, a, b in zip(factors, q, q2)), abs_tol=1e-9)
    # cost of a joint path equals the sum of its projections' costs
    path = [q] + [s for s, _ in succ[:3]]
    total = path_cost(team, path)
    per = sum(path_cost(f, project(path, team.robots, f.robot)) for f in factors)
    assert math.isclose(total, per, abs_tol=1e-9)
