"""Plan and trace files.

Numbers are written with 9 decimals and keys in a fixed order so that
identical runs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json

from .coordination import Column, MotionPlan, NodeSequence, RoundPlan, SlotAssignment
from .executor import ExecutionTrace, consensus_report, verify_connectivity_over_time, waiting_table
from .planner import TeamPrefix

PREC = 9


def num(x: float) -> str:
    return f"{x:.{PREC}f}"


def _round(x):
    return float(num(x))


def plan_to_dict(plan: MotionPlan, wts: dict | None = None) -> dict:
    def round_dict(rp: RoundPlan):
        return {
            "k": rp.k,
            "columns": [{"slot": c.slot, "teams": list(c.teams), "length": c.length} for c in rp.columns],
            "paths": {str(i): rp.paths[i] for i in sorted(rp.paths)},
            "team_paths": {
                str(m): {
                    "robots": list(tp.robots),
                    "path": [list(q) for q in tp.path],
                    "meeting_point": tp.meeting_point,
                    "cost": _round(tp.cost),
                }
                for m, tp in sorted(rp.team_paths.items())
            },
        }

    out = {
        "k_p": plan.k_p,
        "k_s": plan.k_s,
        "members": {str(m): list(v) for m, v in sorted(plan.rounds[0].members.items())},
        "rounds": [round_dict(rp) for rp in plan.rounds],
    }
    if plan.slots is not None:
        out["num_slots"] = plan.slots.num_slots
        out["slot_of"] = {str(m): s for m, s in sorted(plan.slots.slot_of.items())}
    if plan.sequence is not None:
        out["sequence"] = [list(e) for e in plan.sequence.entries]
    if wts is not None:
        out["cost"] = {"prefix": _round(plan.prefix_cost(wts)), "suffix_per_cycle": _round(plan.suffix_cost(wts))}
    return out


def plan_from_dict(d: dict) -> MotionPlan:
    members = {int(m): tuple(v) for m, v in d["members"].items()}
    rounds = []
    for r in d["rounds"]:
        team_paths = {
            int(m): TeamPrefix(int(m), tuple(tp["robots"]), tuple(tuple(q) for q in tp["path"]),
                               tp["meeting_point"], tp["cost"])
            for m, tp in r["team_paths"].items()
        }
        rounds.append(RoundPlan(
            k=r["k"],
            columns=[Column(c["slot"], tuple(c["teams"]), c["length"]) for c in r["columns"]],
            paths={int(i): [list(col) for col in cols] for i, cols in r["paths"].items()},
            team_paths=team_paths,
            members=members,
        ))
    slots = None
    if "slot_of" in d:
        slots = SlotAssignment(d["num_slots"], {int(m): s for m, s in d["slot_of"].items()})
    seq = NodeSequence(tuple(tuple(e) for e in d["sequence"])) if "sequence" in d else None
    return MotionPlan(rounds, d["k_p"], d["k_s"], slots, seq)


def dump_plan_json(plan: MotionPlan, wts: dict | None = None) -> str:
    return json.dumps(plan_to_dict(plan, wts), indent=1, sort_keys=True) + "\n"


def plan_text(plan: MotionPlan, wts: dict | None = None) -> str:
    lines = [f"k_p {plan.k_p}", f"k_s {plan.k_s}"]
    if plan.slots is not None:
        lines.append(f"slots {plan.slots.num_slots} used {len(plan.rounds[0].columns)}")
        lines.append("slot_of " + " ".join(f"T{m}:{s}" for m, s in sorted(plan.slots.slot_of.items())))
    if wts is not None:
        lines.append(f"cost prefix {num(plan.prefix_cost(wts))} suffix_per_cycle {num(plan.suffix_cost(wts))}")
    for rp in plan.rounds:
        part = "suffix" if rp.k >= plan.k_p else "prefix"
        lines.append(f"round {rp.k} {part}")
        for m, tp in sorted(rp.team_paths.items()):
            lines.append(f"  team {m} meet {tp.meeting_point} cost {num(tp.cost)}")
        for i in sorted(rp.paths):
            cells = []
            for lay, col in zip(rp.layout(i), rp.paths[i]):
                tag = "X" if lay is None else f"T{lay}"
                cells.append(f"{tag}[{' '.join(map(str, col))}]")
            lines.append(f"  robot {i} " + " ".join(cells))
    return "\n".join(lines) + "\n"


def plan_csv(plan: MotionPlan) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["round", "robot", "column", "slot", "team", "states"])
    for rp in plan.rounds:
        for i in sorted(rp.paths):
            for e, (lay, col) in enumerate(zip(rp.layout(i), rp.paths[i]), start=1):
                w.writerow([rp.k, i, e, rp.columns[e - 1].slot, "X" if lay is None else lay, " ".join(map(str, col))])
    return buf.getvalue()


def trace_lines(trace: ExecutionTrace) -> str:
    """One record per event: time robot event location team value."""
    out = []
    for ev in trace.events:
        team = "-" if ev.team is None else str(ev.team)
        value = "-" if ev.value is None else num(ev.value)
        out.append(f"{num(ev.time)} {ev.robot} {ev.kind} {ev.location} {team} {value}")
    return "\n".join(out) + ("\n" if out else "")


def trace_csv(trace: ExecutionTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["time", "robot", "event", "location", "team", "value"])
    for ev in trace.events:
        w.writerow([num(ev.time), ev.robot, ev.kind, ev.location,
                    "" if ev.team is None else ev.team, "" if ev.value is None else num(ev.value)])
    return buf.getvalue()


def waits_csv(trace: ExecutionTrace, cycle: int | None = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["round", "team", "robot", "location", "wait"])
    for rnd, m, i, loc, wait in waiting_table(trace, cycle):
        w.writerow([rnd, m, i, loc, num(wait)])
    return buf.getvalue()


def consensus_csv(trace: ExecutionTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["time"] + [f"v{i}" for i in trace.robots] + ["spread"])
    for t, vals in trace.consensus:
        spread = max(vals.values()) - min(vals.values())
        w.writerow([num(t)] + [num(vals[i]) for i in trace.robots] + [num(spread)])
    return buf.getvalue()


def summary_text(trace: ExecutionTrace, net) -> str:
    rep = verify_connectivity_over_time(trace, net)
    lines = [
        f"end_time {num(trace.end_time)}",
        f"completed_cycles {len(rep.cycles)}",
        "meetings " + " ".join(f"T{m}:{n}" for m, n in sorted(rep.counts.items())),
        "odometer " + " ".join(f"{i}:{num(d)}" for i, d in sorted(trace.odometer.items())),
        f"total_distance {num(sum(trace.odometer.values()))}",
        f"connectivity {'ok' if rep.ok else 'FAILED'}",
    ]
    lines += [f"  failure: {f}" for f in rep.failures]
    if trace.consensus:
        cr = consensus_report(trace)
        hit = cr.first_below(1e-9)
        lines.append(f"consensus_final_spread {num(cr.final)}")
        lines.append(f"consensus_below_1e-9_at {'never' if hit is None else num(hit)}")
    waits = {}
    for e in trace.meetings:
        for i, w in e.waits.items():
            waits[i] = waits.get(i, 0.0) + w
    lines.append("total_wait " + " ".join(f"{i}:{num(w)}" for i, w in sorted(waits.items())))
    return "\n".join(lines) + "\n"
