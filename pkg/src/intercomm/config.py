"""JSON configuration files for networks.

A configuration looks like::

    {
      "locations": [{"id": 1, "coords": [0.0, 0.0]}, ...],
      "edges":     [{"i": 1, "j": 2, "weight": 3.5}, ...],   # weight optional
      "teams":     [{"id": 1, "members": [1, 2], "comm_points": [1, 4]}, ...],
      "robots":    [{"id": 1, "start": 1, "speed": 1.0, "value": 0.3}, ...]
    }

Team ids are optional and default to the 1-based position in ``teams``.
Robot ``speed`` defaults to 1 and ``value`` (initial consensus value) is
optional. Unknown keys are rejected.
"""

from __future__ import annotations

import json
from pathlib import Path

import jsonschema

from .network import (
    InvalidNetwork,
    Location,
    MobilityGraph,
    Network,
    Problem,
    Robot,
    Team,
    TeamStructure,
    validate_network,
)

_pos_int = {"type": "integer", "minimum": 1}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["locations", "edges", "teams", "robots"],
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "locations": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id", "coords"],
                "properties": {
                    "id": _pos_int,
                    "coords": {"type": "array", "minItems": 1, "items": {"type": "number"}},
                },
            },
        },
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["i", "j"],
                "properties": {
                    "i": _pos_int,
                    "j": _pos_int,
                    "weight": {"type": "number"},
                },
            },
        },
        "teams": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["members", "comm_points"],
                "properties": {
                    "id": _pos_int,
                    "members": {"type": "array", "items": _pos_int},
                    "comm_points": {"type": "array", "items": _pos_int},
                },
            },
        },
        "robots": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["id", "start"],
                "properties": {
                    "id": _pos_int,
                    "start": _pos_int,
                    "speed": {"type": "number"},
                    "value": {"type": "number"},
                },
            },
        },
    },
}


class ConfigError(Exception):
    """The file is missing, unreadable, or does not match the schema."""


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    check_schema(cfg)
    return cfg


_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def check_schema(cfg: dict) -> None:
    err = jsonschema.exceptions.best_match(_VALIDATOR.iter_errors(cfg))
    if err is not None:
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise ConfigError(f"schema error at {where}: {err.message}")


def network_from_config(cfg: dict, relax: bool = False) -> Network:
    """Build and validate a network. Raises InvalidNetwork on domain errors."""
    check_schema(cfg)
    problems = []
    ids = [loc["id"] for loc in cfg["locations"]]
    if sorted(ids) != list(range(1, len(ids) + 1)):
        problems.append(Problem("BadLocationIds", "location ids must be unique and contiguous from 1"))
    dims = {len(loc["coords"]) for loc in cfg["locations"]}
    if len(dims) > 1:
        problems.append(Problem("MixedDimensions", f"coordinates have mixed dimensions {sorted(dims)}"))
    locations = [Location(loc["id"], tuple(float(c) for c in loc["coords"])) for loc in cfg["locations"]]
    edges = [(e["i"], e["j"], e.get("weight")) for e in cfg["edges"]]
    graph = MobilityGraph(locations, edges)

    teams = {}
    for pos, t in enumerate(cfg["teams"], start=1):
        m = t.get("id", pos)
        if m != pos:
            problems.append(Problem("BadTeamIds", f"team at position {pos} has id {m}"))
        teams[pos] = Team(pos, frozenset(t["members"]), tuple(sorted(set(t["comm_points"]))))
    robots = {}
    for r in cfg["robots"]:
        if r["id"] in robots:
            problems.append(Problem("DuplicateRobot", f"robot {r['id']} listed twice"))
        robots[r["id"]] = Robot(r["id"], r["start"], float(r.get("speed", 1.0)), r.get("value"))
    if problems:
        raise InvalidNetwork(problems)
    return validate_network(graph, TeamStructure(teams, robots), relax=relax)


def load_network(path, relax: bool = False) -> Network:
    return network_from_config(load_config(path), relax=relax)


def network_to_config(net: Network) -> dict:
    g = net.graph
    return {
        "locations": [{"id": j, "coords": list(g.position(j))} for j in sorted(g.locations)],
        "edges": [
            {"i": min(e), "j": max(e), "weight": w}
            for e, w in sorted(g.edges.items(), key=lambda kv: sorted(kv[0]))
        ],
        "teams": [
            {"id": m, "members": sorted(net.team(m).members), "comm_points": list(net.team(m).comm_points)}
            for m in net.team_ids
        ],
        "robots": [
            {k: v for k, v in (("id", i), ("start", r.start), ("speed", r.speed), ("value", r.value)) if v is not None}
            for i, r in sorted(net.teams.robots.items())
        ],
    }
