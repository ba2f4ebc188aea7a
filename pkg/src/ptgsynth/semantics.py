"""Symbolic one-step operators on the parametric zone graph.

Every temporal operator is intersected with the invariant of the location
and with the nonnegative orthant, so zones never leave ``Inv(l)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .geometry import Constraint, Polyhedron, Region
from .model import PTG, Edge, initial_zone


class SemanticsError(ValueError):
    pass


@dataclass(frozen=True)
class SymbolicState:
    """A location with a zone; zones are kept in canonical form so equal sets compare equal."""

    location: str
    zone: Polyhedron

    def __str__(self) -> str:
        return f"({self.location}, {self.zone})"


@dataclass(frozen=True)
class ZGEdge:
    edge: Edge
    target: SymbolicState


def make_state(location: str, zone: Polyhedron) -> SymbolicState:
    return SymbolicState(location, zone.canonical())


def time_close(ptg: PTG, location: str, zone: Polyhedron) -> Polyhedron:
    return zone.elapse_future().intersect(ptg.space(location))


def initial_symbolic_state(ptg: PTG) -> SymbolicState:
    zone = initial_zone(ptg)
    if zone.is_empty():
        raise SemanticsError(f"initial zone of {ptg.initial!r} is empty")
    return make_state(ptg.initial, time_close(ptg, ptg.initial, zone))


def discrete_succ(ptg: PTG, state: SymbolicState, edge: Edge) -> Polyhedron:
    """Zone reached through ``edge`` followed by time elapse; empty when disabled."""
    if edge.source != state.location:
        raise SemanticsError(f"edge {edge} does not leave {state.location!r}")
    z = state.zone.intersect(edge.guard)
    if z.is_empty():
        return z
    z = z.reset(edge.resets).intersect(ptg.space(edge.target))
    if z.is_empty():
        return z
    return time_close(ptg, edge.target, z)


def _reset_pins(ptg: PTG, clocks: Iterable[str]) -> list[Constraint]:
    sig = ptg.signature
    pins = []
    for x in clocks:
        j = sig.index(x)
        for s in (1, -1):
            unit = [0] * sig.dim
            unit[j] = s
            pins.append(Constraint(tuple(unit), 0, False))
    return pins


# Semantic operators below are pure in (model, location/edge, polyhedra), so
# the per-disjunct building blocks are memoized.
_CACHE = 1 << 14


@lru_cache(maxsize=_CACHE)
def _pred_convex(ptg: PTG, edge: Edge, d: Polyhedron) -> Polyhedron:
    pins = _reset_pins(ptg, edge.resets)
    q = d.add(*pins) if pins else d
    if q.is_empty():
        return q
    pre = ptg.space(edge.source).intersect(edge.guard)
    return q.free(edge.resets).intersect(pre)


def discrete_pred(ptg: PTG, edge: Edge, target: Region) -> Region:
    """Valuations at ``edge.source`` from which taking ``edge`` lands in ``target``."""
    return Region.of(ptg.signature, (_pred_convex(ptg, edge, d) for d in target))


@lru_cache(maxsize=_CACHE)
def _past(ptg: PTG, location: str, p: Polyhedron) -> Polyhedron:
    return p.elapse_past().intersect(ptg.space(location))


@lru_cache(maxsize=_CACHE)
def _safe_pred_convex(ptg: PTG, location: str, g: Polyhedron, b: Polyhedron) -> Region:
    sig = ptg.signature
    past_b = _past(ptg, location, b)
    first = _past(ptg, location, g).minus(past_b)
    second = [_past(ptg, location, q) for q in g.intersect(past_b).minus(b)]
    return Region.of(sig, list(first) + second)


@lru_cache(maxsize=_CACHE)
def _safe_pred_one(ptg: PTG, location: str, g: Polyhedron, bad: Region) -> Region:
    past_g = _past(ptg, location, g)
    acc = [past_g]
    for b in bad:
        if not acc:
            break
        if past_g.disjoint(b):
            # every visit to b comes after the last chance to reach g
            continue
        past_b = _past(ptg, location, b)
        sp = _safe_pred_convex(ptg, location, g, b)
        nxt: list[Polyhedron] = []
        for a in acc:
            if a.disjoint(past_b):
                # b is not in the future of any point of a
                nxt.append(a)
            else:
                nxt.extend(q for q in (a.intersect(d) for d in sp) if not q.is_empty())
        acc = list(Region.of(ptg.signature, nxt))
    return Region.of(ptg.signature, acc)


def safe_pred(ptg: PTG, location: str, good: Region, bad: Region) -> Region:
    """Valuations from which some delay inside ``Inv(location)`` reaches ``good``
    while every point passed on the way, the endpoint included, avoids ``bad``."""
    out = Region.empty(ptg.signature)
    for g in good:
        out = out.union(_safe_pred_one(ptg, location, g, bad))
    return out


def winning_moves(ptg: PTG, state: SymbolicState, zg_edges: Sequence[ZGEdge],
                  win: Mapping[SymbolicState, Region]) -> Region:
    sig = ptg.signature
    out = Region.empty(sig)
    for ze in zg_edges:
        if ze.edge.controllable:
            w = win.get(ze.target)
            if w is not None and not w.is_empty():
                out = out.union(discrete_pred(ptg, ze.edge, w))
    return out.intersect(state.zone)


def uncontrollable_moves(ptg: PTG, state: SymbolicState, zg_edges: Sequence[ZGEdge],
                         win: Mapping[SymbolicState, Region]) -> Region:
    sig = ptg.signature
    out = Region.empty(sig)
    for ze in zg_edges:
        if not ze.edge.controllable:
            rest = Region.from_polyhedron(ze.target.zone)
            w = win.get(ze.target)
            if w is not None and not w.is_empty():
                rest = rest.diff(w)
            if not rest.is_empty():
                out = out.union(discrete_pred(ptg, ze.edge, rest))
    return out.intersect(state.zone)


def successors(ptg: PTG, state: SymbolicState) -> list[tuple[Edge, Polyhedron]]:
    """Outgoing edges with their nonempty successor zones, in model order."""
    out = []
    for e in ptg.outgoing(state.location):
        z = discrete_succ(ptg, state, e)
        if not z.is_empty():
            out.append((e, z))
    return out


def controller_deadlock(ptg: PTG, state: SymbolicState,
                        zg_edges: Sequence[ZGEdge] | None = None) -> bool:
    """No controllable edge has a nonempty successor from ``state``."""
    if zg_edges is None:
        return not any(e.controllable for e, _ in successors(ptg, state))
    return not any(ze.edge.controllable for ze in zg_edges)
