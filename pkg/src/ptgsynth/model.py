"""Parametric timed game data model and validation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .geometry import Constraint, Polyhedron, Signature


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    guard: Polyhedron
    resets: tuple[str, ...] = ()
    label: str | None = None
    controllable: bool = True

    def __str__(self) -> str:
        kind = "c" if self.controllable else "u"
        name = f" {self.label}" if self.label else ""
        return f"{kind}{name}:{self.source}->{self.target}"


@dataclass(frozen=True)
class Objective:
    goal_locations: frozenset[str]

    @classmethod
    def of(cls, locations: Iterable[str]) -> "Objective":
        return cls(frozenset(locations))


@dataclass(frozen=True, eq=True)
class PTG:
    """A parametric timed game; locations without an entry in ``invariants`` carry ``true``."""

    locations: tuple[str, ...]
    clocks: tuple[str, ...]
    params: tuple[str, ...]
    edges: tuple[Edge, ...]
    initial: str
    invariants: Mapping[str, Polyhedron] = field(default_factory=dict)

    def __post_init__(self) -> None:
        sig = Signature(tuple(self.clocks), tuple(self.params))
        object.__setattr__(self, "_signature", sig)
        nonneg = []
        for i in range(sig.dim):
            unit = [0] * sig.dim
            unit[i] = 1
            nonneg.append(Constraint(tuple(unit), 0, False))
        state_space = Polyhedron.make(sig, nonneg)
        object.__setattr__(self, "_state_space", state_space)
        object.__setattr__(self, "_spaces", {})

    __hash__ = object.__hash__

    @property
    def signature(self) -> Signature:
        return self._signature  # type: ignore[attr-defined]

    @property
    def state_space(self) -> Polyhedron:
        """Nonnegativity of every clock and parameter."""
        return self._state_space  # type: ignore[attr-defined]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(sorted({e.label for e in self.edges if e.label}))

    def invariant(self, location: str) -> Polyhedron:
        inv = self.invariants.get(location)
        return Polyhedron.universe(self.signature) if inv is None else inv

    def space(self, location: str) -> Polyhedron:
        """``Inv(location)`` intersected with the nonnegative orthant."""
        spaces = self._spaces  # type: ignore[attr-defined]
        sp = spaces.get(location)
        if sp is None:
            sp = self.invariant(location).intersect(self.state_space)
            spaces[location] = sp
        return sp

    def outgoing(self, location: str) -> list[Edge]:
        return [e for e in self.edges if e.source == location]


def validate(ptg: PTG, objective: Objective) -> None:
    """Raise :class:`ModelError` on the first structural problem found."""
    locs = set(ptg.locations)
    if len(locs) != len(ptg.locations):
        raise ModelError("duplicate location")
    if ptg.initial not in locs:
        raise ModelError(f"dangling location: initial location {ptg.initial!r} is not declared")
    sig = ptg.signature
    for loc, inv in ptg.invariants.items():
        if loc not in locs:
            raise ModelError(f"dangling location: invariant for undeclared {loc!r}")
        if inv.signature != sig:
            raise ModelError(f"invariant of {loc!r} is over a different signature")
    for e in ptg.edges:
        for end in (e.source, e.target):
            if end not in locs:
                raise ModelError(f"dangling location: edge {e} refers to undeclared {end!r}")
        for x in e.resets:
            if x not in ptg.clocks:
                raise ModelError(f"edge {e} resets unknown clock {x!r}")
        if e.guard.signature != sig:
            raise ModelError(f"guard of edge {e} references identifiers outside the model")
    if not objective.goal_locations:
        raise ModelError("empty goal set")
    unknown = sorted(objective.goal_locations - locs)
    if unknown:
        raise ModelError(f"goal refers to unknown location(s): {', '.join(unknown)}")


def initial_zone(ptg: PTG) -> Polyhedron:
    """Every clock at 0, every parameter nonnegative, inside ``Inv(initial)``."""
    sig = ptg.signature
    pins = []
    for x in ptg.clocks:
        j = sig.index(x)
        for s in (1, -1):
            unit = [0] * sig.dim
            unit[j] = s
            pins.append(Constraint(tuple(unit), 0, False))
    base = ptg.space(ptg.initial)
    return base.add(*pins) if pins else base
