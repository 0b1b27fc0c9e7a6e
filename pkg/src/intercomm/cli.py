"""Command-line front end.

    intercomm validate --config FILE
    intercomm plan     --config FILE [--out DIR] [--format text|csv]
    intercomm simulate --config FILE [--cycles N] [--out DIR] [--no-consensus]
    intercomm gen      --seed S [-N 5] [-M 5] [-L 20] [--out FILE]

``--config golden`` uses the bundled five-robot scenario. Exit status is
0 on success, 1 for domain failures (invalid network, violated checks) and
2 for I/O or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import files
from .config import ConfigError, load_network
from .coordination import ChainingMismatch, Coordinator, HorizonExceeded, check_admissible, check_slot_bound
from .executor import Deadlock, simulate, verify_connectivity_over_time
from .generate import SizeInfeasible, random_config
from .network import InvalidNetwork
from .planner import NoAcceptingReachable
from .transition import StartNotInStateSet

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2


def golden_path() -> Path:
    return Path(str(resources.files("intercomm") / "data" / "golden.json"))


def _config_path(arg: str) -> Path:
    if arg == "golden" and not Path(arg).exists():
        return golden_path()
    return Path(arg)


def _write(out: Path | None, name: str, text: str):
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text)


def cmd_validate(args) -> int:
    net = load_network(_config_path(args.config), relax=args.relax_footnote1)
    tg = net.team_graph
    print(f"valid: {len(net.graph.locations)} locations, {len(net.graph.edges)} edges, "
          f"{len(net.robot_ids)} robots, {len(net.team_ids)} teams, max team degree {tg.max_degree}")
    for w in net.warnings:
        print(f"warning: {w}")
    return EXIT_OK


def _plan(args):
    net = load_network(_config_path(args.config), relax=args.relax_footnote1)
    coord = Coordinator(net)
    plan = coord.synthesize()
    return net, coord, plan


def cmd_plan(args) -> int:
    net, coord, plan = _plan(args)
    report = check_admissible(plan, coord.wts)
    bound = check_slot_bound(coord.slots, net.team_graph)
    out = Path(args.out) if args.out else None
    _write(out, "plan.json", files.dump_plan_json(plan, coord.wts))
    if args.format == "csv":
        _write(out, "plan.csv", files.plan_csv(plan))
    else:
        _write(out, "plan.txt", files.plan_text(plan, coord.wts))
    print(f"k_p {plan.k_p}")
    print(f"k_s {plan.k_s}")
    print(f"slots {coord.slots.num_slots} used {len(plan.rounds[0].columns)}")
    print(f"suffix_cost_per_cycle {files.num(plan.suffix_cost(coord.wts))}")
    print(f"admissible {'yes' if report.ok else 'no'}")
    for v in report.violations:
        print(f"  {v}")
    for p in bound:
        print(f"  slot bound: {p}")
    return EXIT_OK if report.ok and not bound else EXIT_DOMAIN


def cmd_simulate(args) -> int:
    net, coord, plan = _plan(args)
    trace = simulate(plan, net, cycles=args.cycles, consensus=args.consensus, seed=args.seed)
    rep = verify_connectivity_over_time(trace, net)
    out = Path(args.out) if args.out else None
    if args.format == "csv":
        _write(out, "trace.csv", files.trace_csv(trace))
    else:
        _write(out, "trace.txt", files.trace_lines(trace))
    _write(out, "waits.csv", files.waits_csv(trace))
    if args.consensus:
        _write(out, "consensus.csv", files.consensus_csv(trace))
    summary = files.summary_text(trace, net)
    _write(out, "summary.txt", summary)
    sys.stdout.write(summary)
    return EXIT_OK if rep.ok else EXIT_DOMAIN


def cmd_gen(args) -> int:
    cfg = random_config(args.seed, args.robots, args.teams, args.locations, max_team=args.max_team)
    text = json.dumps(cfg, indent=1) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="intercomm", description=__doc__.splitlines()[0] if __doc__ else None)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--config", required=True, help="network JSON file, or 'golden'")
        p.add_argument("--relax-footnote1", action="store_true",
                       help="give every robot all communication points as states")
        if out:
            p.add_argument("--out", help="output directory")
            p.add_argument("--format", choices=["text", "csv"], default="text")

    p = sub.add_parser("validate", help="check a network configuration")
    common(p, out=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("plan", help="synthesize motion plans")
    common(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("simulate", help="plan, execute asynchronously and verify")
    common(p)
    p.add_argument("--cycles", type=int, default=10)
    p.add_argument("--seed", type=int, default=0, help="seed for consensus values not given in the config")
    p.add_argument("--consensus", action=argparse.BooleanOptionalAction, default=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("gen", help="write a random valid configuration")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-N", "--robots", type=int, default=5)
    p.add_argument("-M", "--teams", type=int, default=5)
    p.add_argument("-L", "--locations", type=int, default=20)
    p.add_argument("--max-team", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InvalidNetwork as exc:
        for p in exc.problems:
            print(f"invalid: {p}", file=sys.stderr)
        return EXIT_DOMAIN
    except (SizeInfeasible, StartNotInStateSet, NoAcceptingReachable, ChainingMismatch, HorizonExceeded, Deadlock) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
