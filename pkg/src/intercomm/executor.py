"""Asynchronous continuous-time execution of motion plans.

Each robot walks its own plan at its own speed along geodesics of the
mobility graph. The only synchronization is at planned meetings: a robot
arriving at the meeting state of one of its teams waits there until every
member has arrived, then the meeting fires and all members leave together.
Wait steps take no time.
"""

from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass, field

from .coordination import MotionPlan
from .network import Network

TIME_TOL = 1e-9

# order of simultaneous events at one robot
_ARRIVE, _RESUME = 0, 1


class Deadlock(RuntimeError):
    pass


@dataclass(frozen=True)
class Event:
    time: float
    robot: int
    kind: str  # depart, arrive, wait, meet, done
    location: int
    team: int | None = None
    value: float | None = None


@dataclass(frozen=True)
class Leg:
    robot: int
    t0: float
    t1: float
    src: int
    dst: int
    nodes: tuple[int, ...]
    length: float


@dataclass(frozen=True)
class MeetingEvent:
    team: int
    location: int
    round: int  # 1-based position in the unrolled plan
    cycle: int | None  # 1-based suffix cycle, None inside the prefix
    time: float
    arrivals: dict
    waits: dict


@dataclass
class ExecutionTrace:
    robots: list
    events: list = field(default_factory=list)
    meetings: list = field(default_factory=list)
    legs: list = field(default_factory=list)
    odometer: dict = field(default_factory=dict)
    consensus: list = field(default_factory=list)  # (time, {robot: value})
    round_done: dict = field(default_factory=dict)  # robot -> completion time per round
    prefix_rounds: int = 0
    suffix_len: int = 1
    cycles: int = 0
    end_time: float = 0.0
    start: dict = field(default_factory=dict)
    graph: object = None

    def completed_cycles(self) -> list[int]:
        """1-based suffix cycles finished by every robot."""
        out = []
        for c in range(1, self.cycles + 1):
            last = self.prefix_rounds + c * self.suffix_len  # 1-based round number
            if all(len(self.round_done.get(i, [])) >= last for i in self.robots):
                out.append(c)
        return out

    def position(self, robot: int, t: float) -> tuple[float, ...]:
        loc = self.start[robot]
        for leg in self.legs:
            if leg.robot != robot or leg.t0 > t:
                continue
            if t >= leg.t1:
                loc = leg.dst
                continue
            frac = (t - leg.t0) / (leg.t1 - leg.t0)
            return _along(self.graph, leg.nodes, frac * leg.length)
        return self.graph.position(loc)


def _along(graph, nodes, dist):
    for a, b in zip(nodes, nodes[1:]):
        w = graph.adj[a][b]
        if dist <= w:
            pa, pb = graph.position(a), graph.position(b)
            f = dist / w
            return tuple(x + f * (y - x) for x, y in zip(pa, pb))
        dist -= w
    return graph.position(nodes[-1])


def initial_values(net: Network, seed: int = 0) -> dict:
    """Configured consensus values, or seeded uniform draws in [0, 1)."""
    rng = random.Random(seed)
    out = {}
    for i in net.robot_ids:
        v = net.robot(i).value
        out[i] = float(v) if v is not None else rng.random()
    return out


def simulate(plan: MotionPlan, net: Network, speeds: dict | None = None, cycles: int = 1,
             max_time: float | None = None, consensus: bool = True,
             values: dict | None = None, seed: int = 0) -> ExecutionTrace:
    """Discrete-event run of ``cycles`` suffix cycles (plus the prefix)."""
    robots = plan.robots
    speeds = {i: net.robot(i).speed for i in robots} | dict(speeds or {})
    for i, v in speeds.items():
        if not v > 0:
            raise ValueError(f"robot {i}: speed must be positive, got {v}")
    n_rounds = plan.k_p - 1 + cycles * len(plan.suffix_rounds) if cycles > 0 else 0
    rounds = [plan.round_at(r) for r in range(n_rounds)]

    seq = {i: [] for i in robots}
    round_end = {}  # global index -> 1-based round number, same for all robots
    barrier_at = {i: {} for i in robots}
    barrier_info = {}
    for r, rp in enumerate(rounds):
        off = len(seq[robots[0]])
        for i in robots:
            seq[i].extend(rp.flat(i))
        round_end[off + rp.length - 1] = r + 1
        for m, idx, loc in rp.meetings():
            key = (r + 1, m)
            barrier_info[key] = (loc, rp.members[m])
            for i in rp.members[m]:
                barrier_at[i][off + idx] = key

    n_pre = plan.k_p - 1
    L = len(plan.suffix_rounds)
    trace = ExecutionTrace(
        robots=list(robots), prefix_rounds=n_pre, suffix_len=L, cycles=cycles if n_rounds else 0,
        start={i: plan.rounds[0].start_state(i) for i in robots}, graph=net.graph,
    )
    trace.odometer = {i: 0.0 for i in robots}
    trace.round_done = {i: [] for i in robots}
    vals = None
    if consensus:
        vals = dict(values) if values is not None else initial_values(net, seed)
        trace.consensus.append((0.0, dict(vals)))
    if not n_rounds:
        return trace

    cursor = {i: 0 for i in robots}
    arrived: dict = {}  # barrier key -> {robot: arrival time}
    released = set()
    finished = set()
    heap = []
    counter = 0

    def push(t, i, kind):
        nonlocal counter
        heapq.heappush(heap, (t, i, kind, counter))
        counter += 1

    def log(t, i, kind, loc, team=None, value=None):
        trace.events.append(Event(t, i, kind, loc, team, value))

    def advance(i, t):
        """Run robot i forward from its cursor until it must wait or travel."""
        s = seq[i]
        while True:
            n = cursor[i]
            key = barrier_at[i].get(n)
            if key is not None and key not in released:
                got = arrived.setdefault(key, {})
                if i not in got:
                    got[i] = t
                    log(t, i, "wait", s[n], team=key[1])
                loc, members = barrier_info[key]
                if len(got) < len(members):
                    return
                fire(key, t, i)
            if n in round_end:
                trace.round_done[i].append(t)
            if n == len(s) - 1:
                finished.add(i)
                log(t, i, "done", s[n])
                return
            a, b = s[n], s[n + 1]
            cursor[i] = n + 1
            if a == b:
                continue
            length, nodes = net.graph.geodesic(a, b)
            t1 = t + length / speeds[i]
            trace.legs.append(Leg(i, t, t1, a, b, nodes, length))
            trace.odometer[i] += length
            log(t, i, "depart", a)
            push(t1, i, _ARRIVE)
            return

    def fire(key, t, current):
        loc, members = barrier_info[key]
        released.add(key)
        got = arrived.pop(key)
        rnd, m = key
        cyc = None if rnd <= n_pre else (rnd - n_pre - 1) // L + 1
        value = None
        if vals is not None:
            value = sum(vals[j] for j in members) / len(members)
            for j in members:
                vals[j] = value
            trace.consensus.append((t, dict(vals)))
        trace.meetings.append(MeetingEvent(
            team=m, location=loc, round=rnd, cycle=cyc, time=t,
            arrivals=dict(got), waits={j: t - got[j] for j in members},
        ))
        log(t, min(members), "meet", loc, team=m, value=value)
        for j in members:
            if j != current:
                push(t, j, _RESUME)

    for i in robots:
        advance(i, 0.0)
    while heap:
        t, i, kind, _ = heapq.heappop(heap)
        if max_time is not None and t > max_time:
            trace.end_time = max_time
            return trace
        if kind == _ARRIVE:
            log(t, i, "arrive", seq[i][cursor[i]])
        advance(i, t)
        trace.end_time = max(trace.end_time, t)
    waiting = [i for i in robots if i not in finished]
    if waiting:
        raise Deadlock(f"robots {waiting} are stuck waiting at t={trace.end_time}")
    return trace


@dataclass
class ConnectivityReport:
    cycles: list
    counts: dict  # team -> meetings within completed cycles
    per_cycle: dict  # team -> {cycle: count}
    gaps: dict  # team -> times between consecutive meetings
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_connectivity_over_time(trace: ExecutionTrace, teams) -> ConnectivityReport:
    """Every team must meet at least once inside every completed suffix cycle.

    ``teams`` maps team id to its comm points (a Network also works).
    """
    if isinstance(teams, Network):
        teams = {m: teams.team(m).comm_points for m in teams.team_ids}
    done = trace.completed_cycles()
    per_cycle = {m: {c: 0 for c in done} for m in teams}
    gaps, failures = {}, []
    for m in teams:
        times = sorted(e.time for e in trace.meetings if e.team == m)
        gaps[m] = [b - a for a, b in zip(times, times[1:])]
    for e in trace.meetings:
        if e.location not in teams[e.team]:
            failures.append(f"team {e.team} met at {e.location}, not one of its points")
        if e.cycle in per_cycle.get(e.team, {}):
            per_cycle[e.team][e.cycle] += 1
    for m in sorted(teams):
        for c, n in per_cycle[m].items():
            if n < 1:
                failures.append(f"team {m} did not meet in cycle {c}")
    counts = {m: sum(v.values()) for m, v in per_cycle.items()}
    return ConnectivityReport(done, counts, per_cycle, gaps, failures)


@dataclass
class ConsensusReport:
    times: list
    spreads: list
    envelope: list

    @property
    def final(self) -> float:
        return self.spreads[-1] if self.spreads else 0.0

    def first_below(self, tol: float):
        for t, s in zip(self.times, self.spreads):
            if s < tol:
                return t
        return None


def consensus_report(trace: ExecutionTrace) -> ConsensusReport:
    times, spreads, env = [], [], []
    best = math.inf
    for t, vals in trace.consensus:
        s = max(vals.values()) - min(vals.values())
        best = min(best, s)
        times.append(t)
        spreads.append(s)
        env.append(best)
    return ConsensusReport(times, spreads, env)


def total_cost(trace: ExecutionTrace) -> tuple[dict, float]:
    return dict(trace.odometer), sum(trace.odometer.values())


def plan_cost(plan: MotionPlan, wts: dict, cycles: int) -> tuple[dict, float]:
    """Per-robot distance of the plan's prefix plus ``cycles`` suffix cycles."""
    per = {i: 0.0 for i in plan.robots}
    for r in range(plan.k_p - 1 + cycles * len(plan.suffix_rounds)):
        rp = plan.round_at(r)
        for i in plan.robots:
            f = rp.flat(i)
            per[i] += sum(wts[i].weight(a, b) for a, b in zip(f, f[1:]))
    return per, sum(per.values())


def waiting_table(trace: ExecutionTrace, cycle: int | None = None) -> list[tuple]:
    """(round, team, robot, location, wait) rows, optionally for one cycle."""
    rows = []
    for e in trace.meetings:
        if cycle is not None and e.cycle != cycle:
            continue
        for j in sorted(e.waits):
            rows.append((e.round, e.team, j, e.location, e.waits[j]))
    return rows
