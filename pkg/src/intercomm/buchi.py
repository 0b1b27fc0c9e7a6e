"""Büchi automaton for "the team meets infinitely often" and its product
with a team transition system."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .network import Network
from .transition import WPTS


@dataclass(frozen=True)
class MeetPredicate:
    """True on a label iff every member is at one common comm point."""

    team: int
    members: tuple[int, ...]
    comm_points: tuple[int, ...]

    def __call__(self, label) -> bool:
        return self.meeting_point(label) is not None

    def meeting_point(self, label):
        for p in self.comm_points:
            if all((i, p) in label for i in self.members):
                return p
        return None

    def __str__(self):
        return f"meet(T{self.team})"


def _true(label) -> bool:
    return True


_true.__name__ = "true"


@dataclass
class NBA:
    states: tuple
    initial: frozenset
    accepting: frozenset
    transitions: tuple  # (src, predicate, dst)

    def step(self, b, label) -> list:
        return sorted({dst for src, pred, dst in self.transitions if src == b and pred(label)})

    def accepts_lasso(self, prefix: Sequence, cycle: Sequence) -> bool:
        """Does the word ``prefix cycle^w`` belong to the language?

        Runs a nested depth-first search on the product of the automaton
        with the lasso's positions.
        """
        if not cycle:
            raise ValueError("cycle must be nonempty")
        n_pre, n = len(prefix), len(prefix) + len(cycle)

        def letter(pos):
            return prefix[pos] if pos < n_pre else cycle[pos - n_pre]

        def nxt(pos):
            return pos + 1 if pos + 1 < n else n_pre

        def succ(node):
            b, pos = node
            return [(b2, nxt(pos)) for b2 in self.step(b, letter(pos))]

        # node (b, pos): automaton in b, about to read position pos
        visited, flagged = set(), set()

        def inner(seed):
            stack = [seed]
            while stack:
                u = stack.pop()
                for v in succ(u):
                    if v == seed:
                        return True
                    if v not in flagged:
                        flagged.add(v)
                        stack.append(v)
            return False

        def outer(root):
            # iterative post-order DFS; inner search launched on exit
            visited.add(root)
            stack = [(root, iter(succ(root)))]
            while stack:
                u, it = stack[-1]
                for v in it:
                    if v not in visited:
                        visited.add(v)
                        stack.append((v, iter(succ(v))))
                        break
                else:
                    stack.pop()
                    if u[0] in self.accepting and inner(u):
                        return True
            return False

        return any(outer((b, 0)) for b in sorted(self.initial) if (b, 0) not in visited)


def gf_automaton(pred: Callable) -> NBA:
    """Two-state automaton accepting words where ``pred`` holds infinitely often.

    State 0 is initial, state 1 accepting; entering 1 requires ``pred``.
    """
    return NBA(
        states=(0, 1),
        initial=frozenset({0}),
        accepting=frozenset({1}),
        transitions=((0, _true, 0), (0, pred, 1), (1, _true, 0), (1, pred, 1)),
    )


def meet_predicate(net: Network, m: int) -> MeetPredicate:
    t = net.team(m)
    return MeetPredicate(m, tuple(sorted(t.members)), tuple(t.comm_points))


def build_team_nba(net: Network, m: int) -> NBA:
    return gf_automaton(meet_predicate(net, m))


class PBA:
    """Lazy product of a team transition system with an automaton.

    A product state is ``(joint state, automaton state)``; moving to a joint
    state lets the automaton read that successor's label.
    """

    def __init__(self, wpts: WPTS, nba: NBA):
        self.wpts = wpts
        self.nba = nba

    def initial_states(self, q0=None) -> list:
        q0 = self.wpts.initial if q0 is None else tuple(q0)
        return [(q0, b) for b in sorted(self.nba.initial)]

    def is_accepting(self, state) -> bool:
        return state[1] in self.nba.accepting

    def successors(self, state, forbid_wait: bool = False):
        q, b = state
        for q2, w in self.wpts.successors(q):
            if forbid_wait and any(x == y for x, y in zip(q, q2)):
                continue
            for b2 in self.nba.step(b, self.wpts.label(q2)):
                yield (q2, b2), w

    def weight(self, s, s2) -> float:
        return self.wpts.weight(s[0], s2[0])


def build_pba(wpts: WPTS, nba: NBA) -> PBA:
    return PBA(wpts, nba)
