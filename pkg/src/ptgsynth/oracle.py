"""Brute-force winner determination at a fixed parameter valuation.

The parameters are substituted, all constants are scaled to integers, and
time is discretised with granularity ``g`` (a unit fraction of the scaled
integer grid).  Clock values are capped at one above the largest constant.
The resulting finite turn-based game is solved by a backward attractor in
which the environment has priority: a node is lost for the controller as
soon as some enabled uncontrollable edge leads to a non-winning node.

Only guards and invariants whose atoms mention at most one clock, with unit
coefficient after valuation, are supported; other models are reported as
inapplicable (``None``).
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

from .model import PTG, Objective

log = logging.getLogger(__name__)

# (clock index, is_lower_bound, bound in grid units, strict)
Atom = tuple[int, bool, int, bool]


class Inapplicable(Exception):
    pass


@dataclass(frozen=True)
class ConcreteEdge:
    source: int
    target: int
    guard: tuple[Atom, ...] | None  # None: disabled
    resets: tuple[int, ...]
    controllable: bool


@dataclass(frozen=True)
class ConcreteGame:
    locations: tuple[str, ...]
    clocks: tuple[str, ...]
    scale: int  # scaled constant = original * scale
    units: int  # grid points per scaled unit (1/g)
    cap: int  # clock cap in grid units
    edges: tuple[ConcreteEdge, ...]
    invariants: tuple[tuple[Atom, ...] | None, ...]  # None: unsatisfiable
    start: tuple[int, ...]

    @property
    def granularity(self) -> Fraction:
        return Fraction(1, self.units)


@dataclass(frozen=True)
class GameNode:
    location: int
    clocks: tuple[int, ...]


def _as_valuation(ptg: PTG, vp: Mapping[str, Fraction] | Sequence[Fraction]) -> dict[str, Fraction]:
    if isinstance(vp, Mapping):
        out = {p: Fraction(vp[p]) for p in ptg.params}
    else:
        vals = list(vp)
        if len(vals) != len(ptg.params):
            raise ValueError(f"expected {len(ptg.params)} parameter values, got {len(vals)}")
        out = {p: Fraction(v) for p, v in zip(ptg.params, vals)}
    if any(v < 0 for v in out.values()):
        raise ValueError("parameter values must be nonnegative")
    return out


def _bounds(ptg: PTG, poly, vp: dict[str, Fraction]):
    """Per-constraint (clock, lower?, bound, strict) in original units; None if unsatisfiable."""
    if poly.is_empty():
        return None
    sig = ptg.signature
    nc = len(sig.clocks)
    out = []
    for c in poly.constraints:
        k = Fraction(c.const) + sum(c.coeffs[nc + i] * vp[p] for i, p in enumerate(sig.params))
        clocks = [i for i in range(nc) if c.coeffs[i]]
        if not clocks:
            if k < 0 or (k == 0 and c.strict):
                return None
            continue
        if len(clocks) > 1:
            raise Inapplicable("atom relates several clocks")
        i = clocks[0]
        a = c.coeffs[i]
        out.append((i, a > 0, -k / a, c.strict))
    return out


def valuate(ptg: PTG, vp: Mapping[str, Fraction] | Sequence[Fraction],
            granularity: Fraction = Fraction(1, 2),
            start: Mapping[str, Fraction] | None = None) -> ConcreteGame:
    """Substitute parameters and build the discretised game.

    Raises :class:`Inapplicable` when a guard or invariant relates two clocks.
    """
    g = Fraction(granularity)
    if g <= 0 or g > 1 or g.numerator != 1:
        raise ValueError("granularity must be a unit fraction")
    val = _as_valuation(ptg, vp)
    inv_b = [_bounds(ptg, ptg.invariant(l), val) for l in ptg.locations]
    edge_b = [_bounds(ptg, e.guard, val) for e in ptg.edges]
    start_v = [Fraction((start or {}).get(x, 0)) for x in ptg.clocks]
    rats = [b[2] for bs in inv_b + edge_b if bs for b in bs] + start_v
    scale = lcm(1, *(q.denominator for q in rats))
    units = g.denominator
    top = max([0] + [int(q * scale) for q in rats])
    cap = (top + 1) * units

    def atoms(bs) -> tuple[Atom, ...] | None:
        if bs is None:
            return None
        return tuple((i, lower, int(b * scale) * units, strict) for i, lower, b, strict in bs)

    loc_idx = {l: n for n, l in enumerate(ptg.locations)}
    edges = tuple(
        ConcreteEdge(loc_idx[e.source], loc_idx[e.target], atoms(b),
                     tuple(ptg.clocks.index(x) for x in e.resets), e.controllable)
        for e, b in zip(ptg.edges, edge_b))
    return ConcreteGame(
        locations=tuple(ptg.locations), clocks=tuple(ptg.clocks), scale=scale, units=units,
        cap=cap, edges=edges, invariants=tuple(atoms(b) for b in inv_b),
        start=tuple(min(int(v * scale) * units, cap) for v in start_v))


def _holds(atoms: tuple[Atom, ...] | None, v: tuple[int, ...]) -> bool:
    if atoms is None:
        return False
    for i, lower, b, strict in atoms:
        x = v[i]
        if lower:
            if x < b or (strict and x == b):
                return False
        elif x > b or (strict and x == b):
            return False
    return True


def oracle_wins(cg: ConcreteGame, goal: Iterable[str], initial: str) -> bool:
    """Does the controller win from (initial, cg.start)?"""
    goal_idx = {cg.locations.index(l) for l in goal}
    start = GameNode(cg.locations.index(initial), cg.start)
    if start.location in goal_idx:
        return True
    if not _holds(cg.invariants[start.location], start.clocks):
        return False
    out_edges: dict[int, list[ConcreteEdge]] = {}
    for e in cg.edges:
        out_edges.setdefault(e.source, []).append(e)

    # forward exploration of the reachable graph
    index: dict[GameNode, int] = {start: 0}
    nodes = [start]
    ctrl: list[list[int]] = []
    unc: list[list[int]] = []
    queue = deque([0])
    while queue:
        n = queue.popleft()
        node = nodes[n]
        c_succ: list[int] = []
        u_succ: list[int] = []
        if node.location not in goal_idx:
            moves: list[tuple[GameNode, bool]] = []
            ticked = tuple(min(x + 1, cg.cap) for x in node.clocks)
            if _holds(cg.invariants[node.location], ticked):
                moves.append((GameNode(node.location, ticked), True))
            for e in out_edges.get(node.location, ()):
                if not _holds(e.guard, node.clocks):
                    continue
                v = tuple(0 if i in e.resets else x for i, x in enumerate(node.clocks))
                if _holds(cg.invariants[e.target], v):
                    moves.append((GameNode(e.target, v), e.controllable))
            for m, controllable in moves:
                j = index.get(m)
                if j is None:
                    j = index[m] = len(nodes)
                    nodes.append(m)
                    queue.append(j)
                (c_succ if controllable else u_succ).append(j)
        ctrl.append(c_succ)
        unc.append(u_succ)

    # backward attractor
    total = len(nodes)
    c_pred: list[list[int]] = [[] for _ in range(total)]
    u_pred: list[list[int]] = [[] for _ in range(total)]
    for n in range(total):
        for j in ctrl[n]:
            c_pred[j].append(n)
        for j in unc[n]:
            u_pred[j].append(n)
    bad_unc = [len(unc[n]) for n in range(total)]
    has_good = [False] * total
    winning = [False] * total
    work = deque(n for n in range(total) if nodes[n].location in goal_idx)
    for n in work:
        winning[n] = True
    while work:
        j = work.popleft()
        for n in u_pred[j]:
            bad_unc[n] -= 1
            if not winning[n] and bad_unc[n] == 0 and has_good[n]:
                winning[n] = True
                work.append(n)
        for n in c_pred[j]:
            has_good[n] = True
            if not winning[n] and bad_unc[n] == 0:
                winning[n] = True
                work.append(n)
    log.debug("oracle: %d nodes, start %s", total, "wins" if winning[0] else "loses")
    return winning[0]


def oracle_verdict(ptg: PTG, objective: Objective, vp: Mapping[str, Fraction] | Sequence[Fraction],
                   start: Mapping[str, Fraction] | None = None, location: str | None = None,
                   refine: bool = True) -> bool | None:
    """Verdict at granularity 1/2, or None when inapplicable or unstable under refinement to 1/4."""
    loc = ptg.initial if location is None else location
    try:
        coarse = oracle_wins(valuate(ptg, vp, Fraction(1, 2), start), objective.goal_locations, loc)
        if not refine:
            return coarse
        fine = oracle_wins(valuate(ptg, vp, Fraction(1, 4), start), objective.goal_locations, loc)
    except Inapplicable:
        return None
    return coarse if coarse == fine else None
