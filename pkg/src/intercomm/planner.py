"""Minimum-cost team plans over the product automaton."""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .buchi import PBA, MeetPredicate


class NoAcceptingReachable(RuntimeError):
    pass


class NotAMeetingState(ValueError):
    pass


@dataclass(frozen=True)
class TeamPrefix:
    team: int
    robots: tuple[int, ...]
    path: tuple[tuple[int, ...], ...]
    meeting_point: int
    cost: float

    def projection(self, robot: int) -> list[int]:
        k = self.robots.index(robot)
        return [q[k] for q in self.path]


def meeting_lower_bound(pba: PBA, pred: MeetPredicate):
    """Admissible, consistent A* heuristic: cheapest direct meeting cost."""
    factors = pba.wpts.factors

    def h(state):
        q, b = state
        if b in pba.nba.accepting:
            return 0.0
        return min(
            sum(f.weight(s, p) for f, s in zip(factors, q))
            for p in pred.comm_points
        )

    return h


def _search(pba: PBA, sources, is_goal, heuristic=None, forbid_wait=False):
    """Best-first search over the implicit product graph.

    Heap entries are ordered by (estimated cost, hops, joint state,
    automaton state), which makes ties resolve the same way every time:
    fewer joint steps first, then lexicographically smaller states.
    """
    h = heuristic or (lambda s: 0.0)
    best = {}
    parent = {}
    heap = []
    for s, g0 in sources:
        best[s] = g0
        parent[s] = None
        heapq.heappush(heap, (g0 + h(s), 0, s[0], s[1], g0))
    closed = set()
    while heap:
        _, hops, q, b, g = heapq.heappop(heap)
        s = (q, b)
        if s in closed or g > best.get(s, float("inf")):
            continue
        closed.add(s)
        if is_goal(s) and hops > 0:
            path = [s]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return g, path[::-1]
        for s2, w in pba.successors(s, forbid_wait=forbid_wait):
            g2 = g + w
            if s2 in closed:
                continue
            if g2 < best.get(s2, float("inf")):
                best[s2] = g2
                parent[s2] = s
                heapq.heappush(heap, (g2 + h(s2), hops + 1, s2[0], s2[1], g2))
    return None


def plan_team_prefix(pba: PBA, pred: MeetPredicate, q0=None, use_heuristic: bool = True) -> TeamPrefix:
    """Cheapest path from the joint state ``q0`` to an accepting product state.

    The result always has at least one joint step, so a team that is
    already together gets a single wait step of cost 0.
    """
    sources = [(s, 0.0) for s in pba.initial_states(q0)]
    h = meeting_lower_bound(pba, pred) if use_heuristic else None
    found = _search(pba, sources, pba.is_accepting, heuristic=h)
    if found is None:
        raise NoAcceptingReachable(f"team {pred.team}: no accepting state reachable from {q0}")
    cost, path = found
    joint = tuple(s[0] for s in path)
    prefix = TeamPrefix(pred.team, pba.wpts.robots, joint, -1, cost)
    return TeamPrefix(pred.team, pba.wpts.robots, joint, meeting_point_of(prefix, pred), cost)


def plan_team_suffix(pba: PBA, accepting_state, forbid_wait: bool = False):
    """Cheapest cycle through an accepting product state.

    Returns ``(joint states from the state back to itself, cost)``.
    With waiting allowed this is normally the free wait loop; forbidding
    waits makes every robot move on every step.
    """
    if not pba.is_accepting(accepting_state):
        raise ValueError(f"{accepting_state} is not accepting")
    target = accepting_state
    sources = list(pba.successors(target, forbid_wait=forbid_wait))
    found = _cycle_search(pba, target, sources, forbid_wait)
    if found is None:
        return None
    cost, path = found
    return [s[0] for s in path], cost


def _cycle_search(pba, target, sources, forbid_wait):
    best, parent, heap = {}, {}, []
    for s, w in sources:
        if w < best.get(s, float("inf")):
            best[s] = w
            parent[s] = target
    for s, w in best.items():
        heapq.heappush(heap, (w, 1, s[0], s[1]))
    closed = set()
    while heap:
        g, hops, q, b = heapq.heappop(heap)
        s = (q, b)
        if s in closed or g > best[s]:
            continue
        closed.add(s)
        if s == target:
            path = [s]
            cur = parent[s]
            while cur != target:
                path.append(cur)
                cur = parent[cur]
            path.append(target)
            return g, path[::-1]
        for s2, w in pba.successors(s, forbid_wait=forbid_wait):
            g2 = g + w
            if s2 not in closed and g2 < best.get(s2, float("inf")):
                best[s2] = g2
                parent[s2] = s
                heapq.heappush(heap, (g2, hops + 1, s2[0], s2[1]))
    return None


def meeting_point_of(prefix: TeamPrefix, pred: MeetPredicate) -> int:
    final = prefix.path[-1]
    label = {(i, s) for i, s in zip(prefix.robots, final)}
    p = pred.meeting_point(label)
    if p is None:
        raise NotAMeetingState(f"team {pred.team}: final state {final} is not a meeting")
    return p
