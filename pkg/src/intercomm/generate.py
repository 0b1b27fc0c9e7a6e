"""Seeded random network configurations for testing and experiments."""

from __future__ import annotations

import itertools
import math
import random

from .config import network_from_config
from .network import InvalidNetwork


class SizeInfeasible(ValueError):
    pass


def _teams(rng, n_robots, n_teams, max_team):
    """Random team membership whose team graph is a connected tree or better."""
    teams = [set() for _ in range(n_teams)]
    teams[0].add(rng.randint(1, n_robots))
    for m in range(1, n_teams):
        parent = rng.randrange(m)
        teams[m].add(rng.choice(sorted(teams[parent])))
    unassigned = [i for i in range(1, n_robots + 1) if not any(i in t for t in teams)]
    rng.shuffle(unassigned)
    for i in unassigned:
        open_teams = [m for m in range(n_teams) if len(teams[m]) < max_team]
        if not open_teams:
            return None
        teams[rng.choice(open_teams)].add(i)
    return teams


def random_config(seed: int, n_robots: int = 5, n_teams: int = 5, n_locations: int = 20,
                  max_team: int = 3, comm_per_team: int | None = None,
                  extra_edge_prob: float = 0.2, size: float = 10.0, max_tries: int = 1000) -> dict:
    """Connected mobility graph, connected team graph, starts inside each robot's states."""
    if min(n_robots, n_teams, n_locations, max_team) < 1:
        raise SizeInfeasible("robots, teams, locations and team size must all be at least 1")
    if n_robots + n_teams - 1 > n_teams * max_team:
        raise SizeInfeasible(f"{n_robots} robots cannot form {n_teams} connected teams of at most {max_team}")
    cpt = comm_per_team or max(1, min(4, n_locations // n_teams))
    cpt = min(cpt, n_locations)
    rng = random.Random(seed)
    for _ in range(max_tries):
        pts = [(round(rng.uniform(0, size), 3), round(rng.uniform(0, size), 3)) for _ in range(n_locations)]
        if len(set(pts)) < n_locations:
            continue
        edges = set()
        for j in range(1, n_locations):
            near = min(range(j), key=lambda k: math.dist(pts[j], pts[k]))
            edges.add((near, j))
        for a, b in itertools.combinations(range(n_locations), 2):
            if (a, b) not in edges and rng.random() < extra_edge_prob:
                edges.add((a, b))
        teams = _teams(rng, n_robots, n_teams, max_team)
        if teams is None:
            continue
        ids = list(range(1, n_locations + 1))
        if n_locations >= n_teams * cpt:
            rng.shuffle(ids)
            comm = [sorted(ids[m * cpt:(m + 1) * cpt]) for m in range(n_teams)]
        else:
            comm = [sorted(rng.sample(ids, cpt)) for _ in range(n_teams)]
        robots = []
        for i in range(1, n_robots + 1):
            own = sorted({p for m, t in enumerate(teams) if i in t for p in comm[m]})
            robots.append({
                "id": i,
                "start": rng.choice(own),
                "speed": round(rng.uniform(0.5, 2.0), 3),
                "value": round(rng.random(), 6),
            })
        cfg = {
            "name": f"random-{seed}",
            "locations": [{"id": j + 1, "coords": list(p)} for j, p in enumerate(pts)],
            "edges": [{"i": a + 1, "j": b + 1} for a, b in sorted(edges)],
            "teams": [{"id": m + 1, "members": sorted(t), "comm_points": comm[m]} for m, t in enumerate(teams)],
            "robots": robots,
        }
        try:
            network_from_config(cfg)
        except InvalidNetwork:
            continue
        return cfg
    raise SizeInfeasible(f"no valid configuration found in {max_tries} tries")
