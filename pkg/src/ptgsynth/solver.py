"""On-the-fly parameter synthesis for reachability objectives.

Forward exploration of the parametric zone graph is interleaved with
backward propagation of winning (and, optionally, losing) sets.  Update
queues are drained before each exploration step.  The parameter region
reported at any time is a sound under-approximation of the winning
valuations, which grows monotonically.
"""

from __future__ import annotations

import logging
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .geometry import Polyhedron, Region
from .model import PTG, Objective, initial_zone, validate
from .semantics import (
    SymbolicState,
    ZGEdge,
    discrete_pred,
    initial_symbolic_state,
    make_state,
    safe_pred,
    successors,
    uncontrollable_moves,
    winning_moves,
)

log = logging.getLogger(__name__)

REASONS = ("fixpoint", "initial_covered", "budget", "timeout")


@dataclass(frozen=True)
class Options:
    inc: bool = True
    cm: bool = False
    cv: bool = False
    lp: bool = False
    max_states: int | None = None
    max_iterations: int | None = None
    timeout: float | None = None
    check_invariants: bool = False
    check_every: int = 1
    oracle_samples: int = 0
    report_each_update: bool = False
    fair: bool = False

    @classmethod
    def from_names(cls, names: Iterable[str], **kw) -> "Options":
        flags = {n.strip() for n in names if n.strip()}
        unknown = flags - {"inc", "cm", "cv", "lp"}
        if unknown:
            raise ValueError(f"unknown optimization(s): {', '.join(sorted(unknown))}")
        return cls(inc="inc" in flags, cm="cm" in flags, cv="cv" in flags, lp="lp" in flags, **kw)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n in ("inc", "cm", "cv", "lp") if getattr(self, n))


class _Queue:
    """FIFO without duplicates."""

    def __init__(self) -> None:
        self._items: deque[SymbolicState] = deque()
        self._members: set[SymbolicState] = set()

    def push(self, s: SymbolicState) -> None:
        if s not in self._members:
            self._members.add(s)
            self._items.append(s)

    def pop(self) -> SymbolicState:
        s = self._items.popleft()
        self._members.discard(s)
        return s

    def __contains__(self, s: object) -> bool:
        return s in self._members

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self):
        return iter(self._items)


@dataclass
class Stats:
    iterations: int = 0
    explore_steps: int = 0
    updates_w: int = 0
    updates_l: int = 0
    win_growths: int = 0
    lose_growths: int = 0
    param_growths: int = 0
    prunes_cm: int = 0
    prunes_cv: int = 0
    subsumed: int = 0
    states: int = 0
    wall_time: float = 0.0

    def as_dict(self) -> dict:
        return {
            "states": self.states,
            "iterations": self.iterations,
            "explore_steps": self.explore_steps,
            "updates": self.updates_w + self.updates_l,
            "updates_win": self.updates_w,
            "updates_lose": self.updates_l,
            "win_growths": self.win_growths,
            "lose_growths": self.lose_growths,
            "param_growths": self.param_growths,
            "prunes": {"cm": self.prunes_cm, "cv": self.prunes_cv, "inc": self.subsumed},
            "wall_time": round(self.wall_time, 6),
        }


Event = tuple[str, object]


@dataclass
class SolverState:
    ptg: PTG
    objective: Objective
    options: Options
    initial: SymbolicState
    init_zone: Polyhedron
    explored: dict[SymbolicState, None] = field(default_factory=dict)
    by_location: dict[str, list[SymbolicState]] = field(default_factory=dict)
    waiting_explore: _Queue = field(default_factory=_Queue)
    waiting_update_w: _Queue = field(default_factory=_Queue)
    waiting_update_l: _Queue = field(default_factory=_Queue)
    depends: dict[SymbolicState, dict[SymbolicState, None]] = field(default_factory=dict)
    zg_edges: dict[SymbolicState, list[ZGEdge]] = field(default_factory=dict)
    win: dict[SymbolicState, Region] = field(default_factory=dict)
    lose: dict[SymbolicState, Region] = field(default_factory=dict)
    pruned: set[SymbolicState] = field(default_factory=set)
    pruned_cm: set[SymbolicState] = field(default_factory=set)
    known: set[SymbolicState] = field(default_factory=set)
    winning_param: Region | None = None
    stats: Stats = field(default_factory=Stats)
    listener: Callable[[str, object], None] | None = None
    history: list[Region] = field(default_factory=list)

    @classmethod
    def start(cls, ptg: PTG, objective: Objective, options: Options,
              listener: Callable[[str, object], None] | None = None) -> "SolverState":
        validate(ptg, objective)
        init = initial_symbolic_state(ptg)
        st = cls(ptg, objective, options, init, initial_zone(ptg), listener=listener)
        st.winning_param = Region.empty(ptg.signature.param_signature())
        st.waiting_explore.push(init)
        st._known(init)
        return st

    # -- bookkeeping ------------------------------------------------------

    def _known(self, s: SymbolicState) -> None:
        self.known.add(s)
        self.by_location.setdefault(s.location, []).append(s)

    def emit(self, kind: str, payload: object) -> None:
        if self.listener is not None:
            self.listener(kind, payload)

    def win_of(self, s: SymbolicState) -> Region:
        return self.win.get(s) or Region.empty(self.ptg.signature)

    def lose_of(self, s: SymbolicState) -> Region:
        return self.lose.get(s) or Region.empty(self.ptg.signature)

    def set_win(self, s: SymbolicState, region: Region) -> None:
        self.win[s] = region
        self.stats.win_growths += 1
        for d in self.depends.get(s, ()):
            self.waiting_update_w.push(d)
        if s == self.initial:
            grown = region.intersect(self.init_zone).project_params()
            assert self.winning_param is not None
            if not self.winning_param.includes(grown):
                self.winning_param = self.winning_param.union(grown)
                self.stats.param_growths += 1
                if self.options.report_each_update:
                    self.history.append(self.winning_param)
                self.emit("param", self.winning_param)

    def set_lose(self, s: SymbolicState, region: Region) -> None:
        self.lose[s] = region
        self.stats.lose_growths += 1
        for d in self.depends.get(s, ()):
            self.waiting_update_l.push(d)

    def find_cover(self, s: SymbolicState) -> SymbolicState | None:
        """An explored or pending state equal to ``s`` (or including it, with ``inc``)."""
        if s in self.known:
            return s
        if self.options.inc:
            for other in self.by_location.get(s.location, ()):
                if other.zone.includes(s.zone):
                    return other
        return None


@dataclass
class SynthesisResult:
    winning_param: Region
    terminated: bool
    termination_reason: str
    stats: dict
    history: list[Region] = field(default_factory=list)
    violations: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# steps


def explore_step(st: SolverState) -> None:
    ptg, opts = st.ptg, st.options
    s = st.waiting_explore.pop()
    st.stats.explore_steps += 1
    st.emit("explore", s)
    goal = s.location in st.objective.goal_locations
    assert st.winning_param is not None
    if opts.cm and not st.winning_param.is_empty() and \
            st.winning_param.includes(s.zone.project_params()):
        st.stats.prunes_cm += 1
        st.pruned.add(s)
        st.pruned_cm.add(s)
        st.explored[s] = None
        return
    succ = successors(ptg, s)
    deadlock = not any(e.controllable for e, _ in succ)
    if goal:
        st.set_win(s, Region.from_polyhedron(s.zone))
    if opts.lp and deadlock and not goal:
        rest = Region.from_polyhedron(s.zone).diff(st.win_of(s))
        if not rest.is_empty():
            st.set_lose(s, rest)
    if opts.cv and (goal or deadlock):
        st.stats.prunes_cv += 1
        st.pruned.add(s)
        st.explored[s] = None
        return
    st.explored[s] = None
    edges: list[ZGEdge] = []
    for e, zone in succ:
        nxt = make_state(e.target, zone)
        cover = st.find_cover(nxt)
        if cover is None:
            cover = nxt
            st._known(nxt)
            st.waiting_explore.push(nxt)
        elif cover != nxt:
            st.stats.subsumed += 1
        edges.append(ZGEdge(e, cover))
        st.depends.setdefault(cover, {})[s] = None
    st.zg_edges[s] = edges
    st.waiting_update_w.push(s)
    if opts.lp:
        st.waiting_update_l.push(s)


def new_win(st: SolverState, s: SymbolicState) -> Region:
    ptg = st.ptg
    edges = st.zg_edges.get(s, [])
    good = st.win_of(s).union(winning_moves(ptg, s, edges, st.win))
    if good.is_empty():
        return good
    bad = uncontrollable_moves(ptg, s, edges, st.win)
    return safe_pred(ptg, s.location, good, bad).intersect(s.zone)


def update_step_w(st: SolverState) -> None:
    s = st.waiting_update_w.pop()
    st.stats.updates_w += 1
    nw = new_win(st, s)
    old = st.win_of(s)
    if not old.includes(nw):
        st.set_win(s, old.union(nw))
        st.emit("update", s)


def new_lose(st: SolverState, s: SymbolicState) -> Region:
    ptg = st.ptg
    sig = ptg.signature
    controllable = Region.empty(sig)
    losing_moves = Region.empty(sig)
    for ze in st.zg_edges.get(s, []):
        lose_t = st.lose_of(ze.target)
        if ze.edge.controllable:
            escape = Region.from_polyhedron(ze.target.zone).diff(lose_t)
            if not escape.is_empty():
                controllable = controllable.union(discrete_pred(ptg, ze.edge, escape))
        elif not lose_t.is_empty():
            losing_moves = losing_moves.union(discrete_pred(ptg, ze.edge, lose_t))
    losing_moves = losing_moves.intersect(s.zone)
    good = st.lose_of(s).union(losing_moves)
    if good.is_empty():
        return good
    bad = controllable.intersect(s.zone).diff(losing_moves)
    return safe_pred(ptg, s.location, good, bad).intersect(s.zone).diff(st.win_of(s))


def update_step_l(st: SolverState) -> None:
    s = st.waiting_update_l.pop()
    st.stats.updates_l += 1
    nl = new_lose(st, s)
    old = st.lose_of(s)
    if not old.includes(nl):
        st.set_lose(s, old.union(nl))
        st.emit("update_lose", s)


def terminate_check(st: SolverState, started: float) -> tuple[bool, str | None]:
    opts = st.options
    if not (st.waiting_explore or st.waiting_update_w or st.waiting_update_l):
        return True, "fixpoint"
    if opts.lp and st.initial in st.explored:
        covered = st.win_of(st.initial).union(st.lose_of(st.initial))
        if covered.includes(st.initial.zone):
            return True, "initial_covered"
    if opts.max_states is not None and len(st.explored) >= opts.max_states:
        return True, "budget"
    if opts.max_iterations is not None and st.stats.iterations >= opts.max_iterations:
        return True, "budget"
    if opts.timeout is not None and time.monotonic() - started >= opts.timeout:
        return True, "timeout"
    return False, None


def step(st: SolverState, turn: int = 0) -> None:
    """One scheduling decision: update queues first, or round robin with ``fair``."""
    queues = [(st.waiting_update_w, update_step_w)]
    if st.options.lp:
        queues.append((st.waiting_update_l, update_step_l))
    queues.append((st.waiting_explore, explore_step))
    ready = [fn for q, fn in queues if q]
    if not ready:
        return
    fn = ready[turn % len(ready)] if st.options.fair else ready[0]
    fn(st)
    st.stats.iterations += 1


def solve(ptg: PTG, objective: Objective, options: Options | None = None,
          listener: Callable[[str, object], None] | None = None) -> SynthesisResult:
    opts = options or Options()
    started = time.monotonic()
    st = SolverState.start(ptg, objective, opts, listener)
    violations = []
    turn = 0
    while True:
        done, reason = terminate_check(st, started)
        if done:
            break
        step(st, turn)
        turn += 1
        if opts.check_invariants and st.stats.iterations % max(1, opts.check_every) == 0:
            violations.extend(check_invariants(st))
    if opts.check_invariants:
        violations.extend(check_invariants(st, oracle_samples=opts.oracle_samples,
                                           final=reason == "fixpoint"))
    st.stats.states = len(st.explored)
    st.stats.wall_time = time.monotonic() - started
    assert st.winning_param is not None and reason is not None
    log.info("synthesis stopped (%s) after %d iterations, %d states", reason,
             st.stats.iterations, st.stats.states)
    return SynthesisResult(
        winning_param=st.winning_param,
        terminated=reason in ("fixpoint", "initial_covered"),
        termination_reason=reason,
        stats=st.stats.as_dict(),
        history=list(st.history),
        violations=violations,
    )



# ---------------------------------------------------------------------------
# invariant checking


@dataclass(frozen=True)
class Violation:
    invariant: str
    state: SymbolicState | None
    message: str

    def __str__(self) -> str:
        where = f" at {self.state}" if self.state is not None else ""
        return f"invariant {self.invariant} violated{where}: {self.message}"


def check_invariants(st: SolverState, oracle_samples: int = 0, final: bool = False) -> list[Violation]:
    """Check the algorithm invariants on the current solver state.

    Numbered checks: 1 initial state known, 2 successors accounted for,
    3 goal states fully winning, 4 sampled winning points confirmed by the
    oracle, 5 no pending growth outside the update queue, 7 dependency
    graph mirrors recorded edges, 8 update queues hold explored states.
    ``win`` and ``lose`` must also stay inside the zone and disjoint.
    """
    ptg = st.ptg
    out: list[Violation] = []
    pending = set(st.waiting_explore)
    if st.initial not in st.explored and st.initial not in pending:
        out.append(Violation("1", st.initial, "initial state neither explored nor waiting"))
    for s in st.explored:
        if s in st.pruned:
            continue
        recorded = st.zg_edges.get(s, [])
        for e, zone in successors(ptg, s):
            match = [ze for ze in recorded if ze.edge == e and ze.target.zone.includes(zone)]
            if not match:
                out.append(Violation("2", s, f"successor via {e} not recorded"))
                continue
            t = match[0].target
            if t not in st.explored and t not in pending:
                out.append(Violation("2", s, f"successor {t} neither explored nor waiting"))
    for s in st.explored:
        if s.location in st.objective.goal_locations and s not in st.pruned_cm:
            if not st.win_of(s).includes(s.zone):
                out.append(Violation("3", s, "goal state is not fully winning"))
    for s, w in st.win.items():
        if not Region.from_polyhedron(s.zone).includes(w):
            out.append(Violation("win", s, "win set leaves the zone"))
    for s, l in st.lose.items():
        if not Region.from_polyhedron(s.zone).includes(l):
            out.append(Violation("lose", s, "lose set leaves the zone"))
        if not l.intersect(st.win_of(s)).is_empty():
            out.append(Violation("lose", s, "win and lose overlap"))
    for s in st.explored:
        if s in st.waiting_update_w:
            continue
        nw = new_win(st, s)
        if not st.win_of(s).includes(nw):
            out.append(Violation("5", s, "win would grow but state is not queued for update"))
    for s, edges in st.zg_edges.items():
        for ze in edges:
            if s not in st.depends.get(ze.target, {}):
                out.append(Violation("7", s, f"edge to {ze.target} missing from dependencies"))
    for t, preds in st.depends.items():
        for s in preds:
            if not any(ze.target == t for ze in st.zg_edges.get(s, [])):
                out.append(Violation("7", s, f"dependency on {t} without a recorded edge"))
    for q in (st.waiting_update_w, st.waiting_update_l):
        for s in q:
            if s not in st.explored:
                out.append(Violation("8", s, "queued for update but not explored"))
    if oracle_samples:
        out.extend(_oracle_spot_check(st, oracle_samples))
    return out


def _oracle_spot_check(st: SolverState, budget: int) -> list[Violation]:
    from .oracle import oracle_verdict

    ptg = st.ptg
    nc = len(ptg.clocks)
    out = []
    checked = 0
    for s, w in st.win.items():
        for part in w:
            if checked >= budget:
                return out
            pt = part.sample_point()
            if pt is None:
                continue
            clocks = dict(zip(ptg.clocks, pt[:nc]))
            verdict = oracle_verdict(ptg, st.objective, pt[nc:], start=clocks, location=s.location)
            checked += 1
            if verdict is False:
                out.append(Violation("4", s, f"oracle rejects winning point {pt}"))
    return out
