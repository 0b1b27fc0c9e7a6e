import itertools
import json
from importlib import resources

from intercomm.config import network_from_config

FIVE_TEAMS = [[1, 2], [2, 3], [3, 4], [2, 4, 5], [1, 5]]


def golden_config() -> dict:
    return json.loads((resources.files("intercomm") / "data" / "golden.json").read_text())


def config(coords, teams, starts, edges=None, speeds=None, values=None):
    """Compact config builder. ``teams`` is a list of (members, comm_points)."""
    n = len(coords)
    if edges is None:
        edges = list(itertools.combinations(range(1, n + 1), 2))
    edge_list = []
    for e in edges:
        d = {"i": e[0], "j": e[1]}
        if len(e) > 2:
            d["weight"] = e[2]
        edge_list.append(d)
    robots = []
    for pos, s in enumerate(starts, start=1):
        r = {"id": pos, "start": s}
        if speeds:
            r["speed"] = speeds[pos - 1]
        if values:
            r["value"] = values[pos - 1]
        robots.append(r)
    return {
        "locations": [{"id": j + 1, "coords": list(c)} for j, c in enumerate(coords)],
        "edges": edge_list,
        "teams": [{"members": list(m), "comm_points": list(c)} for m, c in teams],
        "robots": robots,
    }


def net_of(*args, **kw):
    relax = kw.pop("relax", False)
    return network_from_config(config(*args, **kw), relax=relax)
