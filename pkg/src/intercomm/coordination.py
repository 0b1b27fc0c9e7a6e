"""Conflict-free per-robot plans built from per-team meeting prefixes.

Every round k gives each robot a row of slots (columns). A team's joint
path to its next meeting point occupies the team's slot for all of its
members; every other slot of a robot is an all-wait stretch ("X").
Adjacent teams in the team graph never share a slot, so no robot is asked
to be in two places at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

from .buchi import PBA, build_team_nba, meet_predicate
from .network import Network, TeamGraph
from .planner import TeamPrefix, plan_team_prefix
from .transition import WPTS, WTS, compose


class ChainingMismatch(ValueError):
    pass


class HorizonExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class NodeSequence:
    """Walk over the team graph, one representative comm point per visit."""

    entries: tuple[tuple[int, int], ...]  # (team, location)

    @property
    def teams(self) -> tuple[int, ...]:
        return tuple(m for m, _ in self.entries)

    def first_visits(self) -> list[int]:
        order, seen = [], set()
        for m in self.teams:
            if m not in seen:
                seen.add(m)
                order.append(m)
        return order


def build_sequence(net: Network) -> NodeSequence:
    """Closed depth-first walk over the team graph from the lowest team id.

    Backtracking steps are part of the walk, so consecutive entries are
    always adjacent teams.
    """
    tg = net.team_graph
    root = min(tg.neighbors)
    walk = [root]
    seen = {root}

    def visit(m):
        for n in sorted(tg.neighbors[m]):
            if n not in seen:
                seen.add(n)
                walk.append(n)
                visit(n)
                walk.append(m)

    visit(root)
    return NodeSequence(tuple((m, min(net.team(m).comm_points)) for m in walk))


@dataclass(frozen=True)
class SlotAssignment:
    num_slots: int
    slot_of: dict

    @property
    def used(self) -> list[int]:
        return sorted(set(self.slot_of.values()))

    def is_proper(self, tg: TeamGraph) -> bool:
        return all(self.slot_of[m] != self.slot_of[n] for m, n in tg.edges)


def assign_slots(tg: TeamGraph, seq: NodeSequence, num_slots: int | None = None) -> SlotAssignment:
    """Greedy coloring in first-visit order: smallest slot free among colored neighbors."""
    ell = tg.max_degree + 1 if num_slots is None else num_slots
    slot_of = {}
    for m in seq.first_visits():
        taken = {slot_of[n] for n in tg.neighbors[m] if n in slot_of}
        slot = next(s for s in range(1, ell + 1 + len(taken)) if s not in taken)
        if slot > ell:
            raise ValueError(f"team {m}: no free slot among {ell}")
        slot_of[m] = slot
    return SlotAssignment(ell, slot_of)


@dataclass(frozen=True)
class Column:
    slot: int
    teams: tuple[int, ...]
    length: int


@dataclass
class RoundPlan:
    k: int
    columns: list[Column]
    paths: dict  # robot -> list of per-column state lists
    team_paths: dict  # team -> TeamPrefix
    members: dict  # team -> member tuple

    def flat(self, i: int) -> list[int]:
        return [q for col in self.paths[i] for q in col]

    def start_state(self, i: int) -> int:
        return self.paths[i][0][0]

    def end_state(self, i: int) -> int:
        return self.paths[i][-1][-1]

    @property
    def signature(self) -> tuple:
        return tuple(self.start_state(i) for i in sorted(self.paths))

    @property
    def end_signature(self) -> tuple:
        return tuple(self.end_state(i) for i in sorted(self.paths))

    @property
    def length(self) -> int:
        return sum(c.length for c in self.columns)

    def layout(self, i: int) -> list:
        """Team scheduled for robot i in each column, None for X."""
        out = []
        for col in self.columns:
            mine = [m for m in col.teams if i in self.members[m]]
            out.append(mine[0] if len(mine) == 1 else (tuple(mine) if mine else None))
        return out

    def column_offsets(self) -> list[int]:
        offs, acc = [], 0
        for col in self.columns:
            offs.append(acc)
            acc += col.length
        return offs

    def meetings(self) -> list[tuple[int, int, int]]:
        """(team, index in the flat round, location) of each planned meeting."""
        out = []
        for off, col in zip(self.column_offsets(), self.columns):
            for m in col.teams:
                tp = self.team_paths[m]
                out.append((m, off + len(tp.path) - 1, tp.meeting_point))
        return sorted(out, key=lambda x: (x[1], x[0]))

    def cost(self, wts: dict) -> float:
        total = 0.0
        for i, cols in self.paths.items():
            f = self.flat(i)
            total += sum(wts[i].weight(a, b) for a, b in zip(f, f[1:]))
        return total


@dataclass
class MotionPlan:
    """Rounds 1..k_s; rounds k_p..k_s repeat forever."""

    rounds: list[RoundPlan]
    k_p: int
    k_s: int
    slots: SlotAssignment | None = None
    sequence: NodeSequence | None = None

    @property
    def prefix_rounds(self) -> list[RoundPlan]:
        return self.rounds[: self.k_p - 1]

    @property
    def suffix_rounds(self) -> list[RoundPlan]:
        return self.rounds[self.k_p - 1: self.k_s]

    @property
    def robots(self) -> list[int]:
        return sorted(self.rounds[0].paths)

    def round_at(self, r: int) -> RoundPlan:
        """Round at unrolled 0-based position r of the infinite plan."""
        n_pre = self.k_p - 1
        if r < n_pre:
            return self.rounds[r]
        suf = self.suffix_rounds
        return suf[(r - n_pre) % len(suf)]

    def unrolled(self, cycles: int) -> list[RoundPlan]:
        return [self.round_at(r) for r in range(self.k_p - 1 + cycles * len(self.suffix_rounds))]

    def robot_prefix(self, i: int) -> list[int]:
        return [q for rp in self.prefix_rounds for q in rp.flat(i)]

    def robot_suffix(self, i: int) -> list[int]:
        return [q for rp in self.suffix_rounds for q in rp.flat(i)]

    def suffix_cost(self, wts: dict) -> float:
        return sum(rp.cost(wts) for rp in self.suffix_rounds)

    def prefix_cost(self, wts: dict) -> float:
        return sum(rp.cost(wts) for rp in self.prefix_rounds)


class Coordinator:
    """Sequential run of the slot-based construction for one network.

    Teams are planned slot by slot so that each team's start state is where
    its members ended the previous slot.
    """

    def __init__(self, net: Network, sequence: NodeSequence | None = None,
                 slots: SlotAssignment | None = None, use_heuristic: bool = True):
        self.net = net
        self.sequence = sequence or build_sequence(net)
        self.slots = slots or assign_slots(net.team_graph, self.sequence)
        self.use_heuristic = use_heuristic
        self.wts = {i: WTS(net, i) for i in net.robot_ids}
        self.members = {m: net.members(m) for m in net.team_ids}
        self.preds = {m: meet_predicate(net, m) for m in net.team_ids}
        self._pba = {
            m: PBA(WPTS([self.wts[i] for i in self.members[m]], team=m), build_team_nba(net, m))
            for m in net.team_ids
        }
        self._cache: dict = {}
        order = {m: pos for pos, m in enumerate(self.sequence.first_visits())}
        self._team_order = sorted(net.team_ids, key=lambda m: (self.slots.slot_of[m], order.get(m, math.inf)))

    def pba(self, m: int) -> PBA:
        return self._pba[m]

    def team_prefix(self, m: int, q0: tuple) -> TeamPrefix:
        key = (m, q0)
        if key not in self._cache:
            self._cache[key] = plan_team_prefix(self._pba[m], self.preds[m], q0, self.use_heuristic)
        return self._cache[key]

    @property
    def initial_chain(self) -> dict:
        return {i: self.wts[i].initial for i in self.net.robot_ids}

    def build_round(self, k: int, chain: dict) -> RoundPlan:
        robots = self.net.robot_ids
        if sorted(chain) != robots:
            raise ChainingMismatch(f"round {k}: chain covers robots {sorted(chain)}, expected {robots}")
        for i, q in chain.items():
            if q not in self.wts[i]:
                raise ChainingMismatch(f"round {k}: robot {i} would start at {q}, not one of its states")
        cur = dict(chain)
        columns, paths, team_paths = [], {i: [] for i in robots}, {}
        for e in range(1, self.slots.num_slots + 1):
            teams = tuple(m for m in self._team_order if self.slots.slot_of[m] == e)
            if not teams:
                continue  # all robots wait: column discarded
            placed = {}
            for m in teams:
                members = self.members[m]
                tp = self.team_prefix(m, tuple(cur[i] for i in members))
                team_paths[m] = tp
                for i in members:
                    proj = tp.projection(i)
                    if proj[0] != cur[i]:
                        raise ChainingMismatch(f"round {k}, team {m}: robot {i} starts at {proj[0]}, was at {cur[i]}")
                    placed[i] = proj
            length = max(len(p) for p in placed.values())
            for i in robots:
                p = placed.get(i, [cur[i]])
                p = p + [p[-1]] * (length - len(p))
                paths[i].append(p)
                cur[i] = p[-1]
            columns.append(Column(e, teams, length))
        return RoundPlan(k, columns, paths, team_paths, self.members)

    def rounds(self, chain: dict | None = None, start_k: int = 1) -> Iterable[RoundPlan]:
        chain = dict(chain or self.initial_chain)
        k = start_k
        while True:
            rp = self.build_round(k, chain)
            yield rp
            chain = {i: rp.end_state(i) for i in rp.paths}
            k += 1

    def recurrence_bound(self) -> int:
        return math.prod(len(w.states) for w in self.wts.values())

    def synthesize(self) -> MotionPlan:
        k_p, k_s, plan = detect_prefix_suffix(self.rounds(), self.recurrence_bound())
        plan.slots = self.slots
        plan.sequence = self.sequence
        return plan


def detect_prefix_suffix(rounds: Iterable[RoundPlan], bound: int):
    """Stop at the first round whose end state tuple was already a round start.

    Returns ``(k_p, k_s, MotionPlan)``.
    """
    seen, kept = {}, []
    for rp in rounds:
        if rp.k > bound:
            raise HorizonExceeded(f"no recurrence within {bound} rounds")
        seen.setdefault(rp.signature, rp.k)
        kept.append(rp)
        if rp.end_signature in seen:
            k_p, k_s = seen[rp.end_signature], rp.k
            return k_p, k_s, MotionPlan(kept, k_p, k_s)
    raise HorizonExceeded("round stream ended before a recurrence")


@dataclass(frozen=True)
class Violation:
    kind: str  # "transition", "slot-conflict", "chaining", "sync"
    robot: int | None
    round: int
    detail: str

    def __str__(self):
        who = f"robot {self.robot}" if self.robot is not None else "plan"
        return f"[{self.kind}] round {self.round}, {who}: {self.detail}"


@dataclass
class AdmissibilityReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set:
        return {v.kind for v in self.violations}


def check_admissible(plan: MotionPlan, wts: dict) -> AdmissibilityReport:
    """Check transitions, slot conflicts, chaining, and team synchronization."""
    rep = AdmissibilityReport()
    add = rep.violations.append
    for rp in plan.rounds:
        for i in plan.robots:
            f = rp.flat(i)
            for a, b in zip(f, f[1:]):
                if not wts[i].is_transition(a, b):
                    add(Violation("transition", i, rp.k, f"{a} -> {b} is not a transition"))
            if len(f) == 1 and f[0] not in wts[i]:
                add(Violation("transition", i, rp.k, f"{f[0]} is not a state"))
            cols = rp.paths[i]
            for e in range(1, len(cols)):
                if cols[e][0] != cols[e - 1][-1]:
                    add(Violation("chaining", i, rp.k, f"column {e + 1} starts at {cols[e][0]}, previous ended at {cols[e - 1][-1]}"))
        for e, col in enumerate(rp.columns):
            for i in plan.robots:
                mine = [m for m in col.teams if i in rp.members[m]]
                if len(mine) > 1:
                    add(Violation("slot-conflict", i, rp.k, f"column {e + 1} holds teams {mine}"))
            for i in plan.robots:
                if len(rp.paths[i][e]) != col.length:
                    add(Violation("sync", i, rp.k, f"column {e + 1} has length {len(rp.paths[i][e])}, expected {col.length}"))
            for m in col.teams:
                tp = rp.team_paths[m]
                joint = compose([rp.paths[i][e][: len(tp.path)] for i in rp.members[m]])
                if tuple(joint) != tp.path:
                    add(Violation("sync", None, rp.k, f"team {m} members do not follow the team path in column {e + 1}"))

    for i in plan.robots:
        if plan.rounds[0].start_state(i) != wts[i].initial:
            add(Violation("chaining", i, 1, f"plan starts at {plan.rounds[0].start_state(i)}, robot starts at {wts[i].initial}"))
        for prev, nxt in zip(plan.rounds, plan.rounds[1:]):
            if nxt.start_state(i) != prev.end_state(i):
                add(Violation("chaining", i, nxt.k, f"round starts at {nxt.start_state(i)}, previous ended at {prev.end_state(i)}"))
        last, first = plan.rounds[plan.k_s - 1], plan.rounds[plan.k_p - 1]
        if last.end_state(i) != first.start_state(i):
            add(Violation("chaining", i, last.k, f"suffix does not close: ends at {last.end_state(i)}, loops to {first.start_state(i)}"))
    return rep


def check_slot_bound(slots: SlotAssignment, tg: TeamGraph) -> list[str]:
    problems = []
    if len(slots.used) > tg.max_degree + 1:
        problems.append(f"{len(slots.used)} slots used, bound is {tg.max_degree + 1}")
    for m, n in sorted(tg.edges):
        if slots.slot_of[m] == slots.slot_of[n]:
            problems.append(f"adjacent teams {m} and {n} share slot {slots.slot_of[m]}")
    return problems
