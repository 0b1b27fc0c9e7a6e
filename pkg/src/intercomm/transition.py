"""Weighted transition systems for single robots and teams.

A robot's state is simply the location id it sits at; a team state is the
tuple of member locations ordered by robot id. Atomic propositions are
``(robot, location)`` pairs, true when that robot is at that location.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .network import Network


class StartNotInStateSet(ValueError):
    pass


class RobotNotInTeam(ValueError):
    pass


class InadmissiblePath(ValueError):
    pass


WAIT = "wait"


class WTS:
    """Robot i's abstraction: wait, or go directly to any other state.

    Going from one state to another costs the geodesic length in the
    mobility graph; intermediate graph nodes are not states.
    """

    def __init__(self, net: Network, robot: int, initial: int | None = None):
        self.robot = robot
        self.states = net.state_locations(robot)
        self._stateset = frozenset(self.states)
        self.initial = net.robot(robot).start if initial is None else initial
        if self.initial not in self._stateset:
            raise StartNotInStateSet(f"robot {robot}: start {self.initial} not in {self.states}")
        self.graph = net.graph

    def __contains__(self, q) -> bool:
        return q in self._stateset

    def weight(self, q, q2) -> float:
        return 0.0 if q == q2 else self.graph.distance(q, q2)

    def action(self, q, q2):
        if not self.is_transition(q, q2):
            raise InadmissiblePath(f"robot {self.robot}: no transition {q} -> {q2}")
        return WAIT if q == q2 else ("go-to", q2)

    def is_transition(self, q, q2) -> bool:
        return q in self._stateset and q2 in self._stateset

    def successors(self, q) -> list[tuple[int, float]]:
        return [(q2, self.weight(q, q2)) for q2 in self.states]

    def label(self, q) -> frozenset:
        return frozenset({(self.robot, q)})

    def dump(self) -> str:
        lines = [f"# wTS robot {self.robot}: {len(self.states)} states, initial {self.initial}"]
        for q in self.states:
            for q2 in self.states:
                act = WAIT if q == q2 else f"go-to({q2})"
                lines.append(f"{q} -> {q2} {act} {self.weight(q, q2):.9f}")
        return "\n".join(lines)


class WPTS:
    """Synchronous product of the members' transition systems.

    Never materialized: successors are generated on demand.
    """

    def __init__(self, factors: Sequence[WTS], initial: tuple | None = None, team: int | None = None):
        self.factors = tuple(sorted(factors, key=lambda f: f.robot))
        self.robots = tuple(f.robot for f in self.factors)
        self.team = team
        self.initial = tuple(f.initial for f in self.factors) if initial is None else tuple(initial)
        if not self.contains(self.initial):
            raise InadmissiblePath(f"joint state {self.initial} is not a product state")

    def contains(self, q) -> bool:
        return len(q) == len(self.factors) and all(s in f for s, f in zip(q, self.factors))

    def is_transition(self, q, q2) -> bool:
        return (
            len(q) == len(q2) == len(self.factors)
            and all(f.is_transition(a, b) for f, a, b in zip(self.factors, q, q2))
        )

    def weight(self, q, q2) -> float:
        return sum(f.weight(a, b) for f, a, b in zip(self.factors, q, q2))

    def successors(self, q):
        """Yield (joint successor, weight) for every combination of moves."""
        per_robot = [f.successors(s) for f, s in zip(self.factors, q)]
        for combo in itertools.product(*per_robot):
            yield tuple(s for s, _ in combo), sum(w for _, w in combo)

    def label(self, q) -> frozenset:
        out = set()
        for f, s in zip(self.factors, q):
            out |= f.label(s)
        return frozenset(out)

    def index_of(self, robot: int) -> int:
        try:
            return self.robots.index(robot)
        except ValueError:
            raise RobotNotInTeam(f"robot {robot} not in team {self.robots}") from None


def build_wts(net: Network, robot: int) -> WTS:
    return WTS(net, robot)


def build_wpts(wts_list: Sequence[WTS], initial=None, team=None) -> WPTS:
    return WPTS(wts_list, initial=initial, team=team)


def project(path, robots: Sequence[int], robot: int) -> list:
    """Robot's coordinate along a joint path. Repeated states are kept."""
    robots = tuple(robots)
    if robot not in robots:
        raise RobotNotInTeam(f"robot {robot} not in team {robots}")
    k = robots.index(robot)
    return [q[k] for q in path]


def compose(paths: Sequence[Sequence]) -> list[tuple]:
    """Inverse of project: zip equal-length per-robot paths into joint states."""
    lengths = {len(p) for p in paths}
    if len(lengths) > 1:
        raise ValueError(f"paths have different lengths {sorted(lengths)}")
    return [tuple(states) for states in zip(*paths)]


def check_path(system, path) -> None:
    if not path:
        raise InadmissiblePath("empty path")
    for a, b in zip(path, path[1:]):
        if not system.is_transition(a, b):
            raise InadmissiblePath(f"no transition {a} -> {b}")
    if len(path) == 1:
        ok = system.contains(path[0]) if isinstance(system, WPTS) else path[0] in system
        if not ok:
            raise InadmissiblePath(f"{path[0]} is not a state")


def path_cost(system, path, suffix=None):
    """Sum of transition weights along a path.

    With ``suffix`` given the path is read as a lasso ``path (suffix)^w``
    and the result is ``(prefix cost, cost of one suffix cycle)``; the
    cycle closes from the last suffix state back to its first one.
    """
    check_path(system, path)
    pre = sum(system.weight(a, b) for a, b in zip(path, path[1:]))
    if suffix is None:
        return pre
    check_path(system, suffix)
    if not system.is_transition(path[-1], suffix[0]):
        raise InadmissiblePath(f"prefix does not connect to suffix: {path[-1]} -> {suffix[0]}")
    pre += system.weight(path[-1], suffix[0])
    cyc = suffix + [suffix[0]]
    for a, b in zip(cyc, cyc[1:]):
        if not system.is_transition(a, b):
            raise InadmissiblePath(f"no transition {a} -> {b}")
    return pre, sum(system.weight(a, b) for a, b in zip(cyc, cyc[1:]))


def trace_of(system, path) -> list[frozenset]:
    return [system.label(q) for q in path]
