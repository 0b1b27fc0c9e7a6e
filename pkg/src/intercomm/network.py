"""Mobility graph, robot teams and the derived team graph."""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable


@dataclass(frozen=True)
class Location:
    id: int
    position: tuple[float, ...]


class MobilityGraph:
    """Undirected weighted graph over located nodes.

    Edge weights default to the Euclidean distance between endpoints.
    """

    def __init__(self, locations: Iterable[Location], edges: Iterable[tuple]):
        self.locations = {loc.id: loc for loc in locations}
        self.adj: dict[int, dict[int, float]] = {j: {} for j in self.locations}
        self.edges: dict[frozenset, float] = {}
        self.problems: list[Problem] = []
        for edge in edges:
            i, j = edge[0], edge[1]
            w = edge[2] if len(edge) > 2 else None
            if i not in self.locations or j not in self.locations:
                self.problems.append(Problem("UnknownLocation", f"edge ({i}, {j}) references an unknown location"))
                continue
            if i == j:
                self.problems.append(Problem("SelfLoop", f"edge ({i}, {j}) is a self-loop"))
                continue
            if w is None:
                w = self.euclidean(i, j)
            if not w > 0:
                self.problems.append(Problem("NonPositiveWeight", f"edge ({i}, {j}) has weight {w}"))
                continue
            self.edges[frozenset((i, j))] = float(w)
            self.adj[i][j] = float(w)
            self.adj[j][i] = float(w)
        self._geodesic = lru_cache(maxsize=None)(self._dijkstra)

    def euclidean(self, i: int, j: int) -> float:
        return math.dist(self.locations[i].position, self.locations[j].position)

    def position(self, j: int) -> tuple[float, ...]:
        return self.locations[j].position

    def is_connected(self) -> bool:
        if not self.locations:
            return False
        start = min(self.locations)
        seen = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in self.adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return len(seen) == len(self.locations)

    def geodesic(self, a: int, b: int) -> tuple[float, tuple[int, ...]]:
        """Shortest path from a to b as (length, node ids).

        Ties between equal-length paths go to the lexicographically
        smallest node sequence, so results are reproducible.
        """
        if a == b:
            return 0.0, (a,)
        # cache keyed on the unordered pair; reverse when needed
        if a < b:
            return self._geodesic(a, b)
        length, path = self._geodesic(b, a)
        return length, tuple(reversed(path))

    def distance(self, a: int, b: int) -> float:
        return self.geodesic(a, b)[0]

    def _dijkstra(self, a: int, b: int) -> tuple[float, tuple[int, ...]]:
        heap = [(0.0, (a,))]
        done = set()
        while heap:
            d, path = heapq.heappop(heap)
            u = path[-1]
            if u in done:
                continue
            done.add(u)
            if u == b:
                return d, path
            for v, w in self.adj[u].items():
                if v not in done:
                    heapq.heappush(heap, (d + w, path + (v,)))
        raise ValueError(f"no path between {a} and {b}")


@dataclass(frozen=True)
class Team:
    id: int
    members: frozenset
    comm_points: tuple[int, ...]


@dataclass(frozen=True)
class Robot:
    id: int
    start: int
    speed: float = 1.0
    value: float | None = None


@dataclass
class TeamStructure:
    teams: dict[int, Team]
    robots: dict[int, Robot]


@dataclass
class TeamGraph:
    edges: frozenset
    neighbors: dict[int, frozenset]
    robot_teams: dict[int, frozenset]
    robot_neighbors: dict[int, frozenset]

    def degree(self, m: int) -> int:
        return len(self.neighbors[m])

    @property
    def max_degree(self) -> int:
        return max((len(n) for n in self.neighbors.values()), default=0)

    def is_connected(self) -> bool:
        nodes = sorted(self.neighbors)
        if not nodes:
            return False
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            u = stack.pop()
            for v in self.neighbors[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == len(nodes)


def build_team_graph(teams: TeamStructure) -> TeamGraph:
    ids = sorted(teams.teams)
    edges = set()
    neighbors = {m: set() for m in ids}
    for a_idx, m in enumerate(ids):
        for n in ids[a_idx + 1:]:
            if teams.teams[m].members & teams.teams[n].members:
                edges.add((m, n))
                neighbors[m].add(n)
                neighbors[n].add(m)
    robot_teams = {
        i: frozenset(m for m in ids if i in teams.teams[m].members)
        for i in teams.robots
    }
    robot_neighbors = {}
    for i, s in robot_teams.items():
        mates = set()
        for m in s:
            mates |= teams.teams[m].members
        mates.discard(i)
        robot_neighbors[i] = frozenset(mates)
    return TeamGraph(
        edges=frozenset(edges),
        neighbors={m: frozenset(v) for m, v in neighbors.items()},
        robot_teams=robot_teams,
        robot_neighbors=robot_neighbors,
    )


@dataclass(frozen=True)
class Problem:
    code: str
    message: str

    def __str__(self):
        return f"{self.code}: {self.message}"


class InvalidNetwork(ValueError):
    """Raised by validate_network; ``problems`` lists every diagnostic found."""

    def __init__(self, problems: list[Problem]):
        self.problems = list(problems)
        super().__init__("; ".join(str(p) for p in self.problems))

    @property
    def codes(self) -> set[str]:
        return {p.code for p in self.problems}


@dataclass
class Network:
    """A validated mobility graph together with its teams."""

    graph: MobilityGraph
    teams: TeamStructure
    team_graph: TeamGraph
    relax: bool = False
    warnings: list[Problem] = field(default_factory=list)

    @property
    def robot_ids(self) -> list[int]:
        return sorted(self.teams.robots)

    @property
    def team_ids(self) -> list[int]:
        return sorted(self.teams.teams)

    def team(self, m: int) -> Team:
        return self.teams.teams[m]

    def members(self, m: int) -> tuple[int, ...]:
        return tuple(sorted(self.teams.teams[m].members))

    def robot(self, i: int) -> Robot:
        return self.teams.robots[i]

    def all_comm_points(self) -> set[int]:
        pts = set()
        for t in self.teams.teams.values():
            pts.update(t.comm_points)
        return pts

    def state_locations(self, i: int) -> tuple[int, ...]:
        """Locations that make up robot i's transition-system states."""
        if self.relax:
            pts = self.all_comm_points() | {self.robot(i).start}
        else:
            pts = set()
            for m in self.team_graph.robot_teams[i]:
                pts.update(self.team(m).comm_points)
        return tuple(sorted(pts))


def footnote_violations(graph: MobilityGraph, teams: TeamStructure, team_graph: TeamGraph) -> list[Problem]:
    """Geodesics between a robot's own points that cross another team's point.

    The wait/go-to abstraction assumes a robot never has to pass through a
    communication point that belongs only to teams it is not part of.
    """
    owners: dict[int, set[int]] = {}
    for t in teams.teams.values():
        for p in t.comm_points:
            owners.setdefault(p, set()).add(t.id)
    out = []
    for i in sorted(teams.robots):
        own = team_graph.robot_teams[i]
        pts = sorted({p for m in own for p in teams.teams[m].comm_points})
        for a_idx, a in enumerate(pts):
            for b in pts[a_idx + 1:]:
                _, path = graph.geodesic(a, b)
                for node in path[1:-1]:
                    if node in owners and not owners[node] & own:
                        out.append(Problem(
                            "PathCrossesForeignPoint",
                            f"robot {i}: geodesic {a}->{b} passes through {node}",
                        ))
                        break
    return out


def validate_network(graph: MobilityGraph, teams: TeamStructure, relax: bool = False) -> Network:
    problems = list(graph.problems)
    if not graph.locations:
        problems.append(Problem("EmptyGraph", "no locations"))
    elif not graph.is_connected():
        problems.append(Problem("DisconnectedMobilityGraph", "mobility graph is not connected"))
    if not teams.teams:
        problems.append(Problem("NoTeams", "at least one team is required"))
    for m, t in sorted(teams.teams.items()):
        if not t.members:
            problems.append(Problem("EmptyTeam", f"team {m} has no members"))
        if not t.comm_points:
            problems.append(Problem("EmptyCommSet", f"team {m} has no communication points"))
        for i in sorted(t.members):
            if i not in teams.robots:
                problems.append(Problem("UnknownRobot", f"team {m} references robot {i}"))
        for p in t.comm_points:
            if p not in graph.locations:
                problems.append(Problem("UnknownLocation", f"team {m} references location {p}"))
    for i, r in sorted(teams.robots.items()):
        if r.start not in graph.locations:
            problems.append(Problem("UnknownLocation", f"robot {i} starts at unknown location {r.start}"))
        if not r.speed > 0:
            problems.append(Problem("NonPositiveSpeed", f"robot {i} has speed {r.speed}"))
        if not any(i in t.members for t in teams.teams.values()):
            problems.append(Problem("RobotWithoutTeam", f"robot {i} belongs to no team"))
    if problems:
        raise InvalidNetwork(problems)

    tg = build_team_graph(teams)
    if not tg.is_connected():
        raise InvalidNetwork([Problem("DisconnectedTeamGraph", "team graph is not connected")])
    net = Network(graph, teams, tg, relax=relax)
    for i in net.robot_ids:
        if net.robot(i).start not in net.state_locations(i):
            problems.append(Problem(
                "StartNotInStateSet",
                f"robot {i} starts at {net.robot(i).start}, outside its communication points",
            ))
    if problems:
        raise InvalidNetwork(problems)
    net.warnings = footnote_violations(graph, teams, tg)
    return net
