"""Seeded random instances shared by the property and acceptance suites."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

from ptgsynth.geometry import Constraint, Polyhedron, Region, Signature, constraint
from ptgsynth.parser import parse_model
from ptgsynth.semantics import safe_pred

SIGNATURES = (
    Signature(("x",), ("p",)),
    Signature(("x", "y"), ()),
    Signature(("x", "y"), ("p",)),
    Signature(("x",), ("p", "q")),
)


def rand_constraint(sig: Signature, rng: random.Random, dims: list[int] | None = None) -> Constraint:
    dims = dims if dims is not None else list(range(sig.dim))
    coeffs = [0] * sig.dim
    for j in rng.sample(dims, rng.randint(1, min(2, len(dims)))):
        coeffs[j] = rng.choice((-2, -1, 1, 2))
    return constraint(coeffs, rng.randint(-4, 4), rng.random() < 0.4)


def rand_raw(sig: Signature, rng: random.Random, most: int = 3) -> list[Constraint]:
    return [rand_constraint(sig, rng) for _ in range(rng.randint(0, most))]


def rand_poly(sig: Signature, rng: random.Random, most: int = 3) -> Polyhedron:
    return Polyhedron.make(sig, rand_raw(sig, rng, most))


def rand_region(sig: Signature, rng: random.Random, parts: int = 2) -> Region:
    return Region.of(sig, (rand_poly(sig, rng) for _ in range(rng.randint(0, parts))))


def grid(sig: Signature, step: Fraction = Fraction(1, 2), lo: int = -3, hi: int = 3):
    vals = [lo + k * step for k in range(int((hi - lo) / step) + 1)]
    return product(vals, repeat=sig.dim)


def pinned(sig: Signature, poly: Polyhedron, names: tuple[str, ...], values) -> Polyhedron:
    """``poly`` with each named dimension fixed to the given value."""
    pins = []
    for n, v in zip(names, values):
        unit = [0] * sig.dim
        unit[sig.index(n)] = 1
        pins.append(constraint(unit, -Fraction(v)))
        pins.append(constraint([-a for a in unit], Fraction(v)))
    return poly.add(*pins)


# -- zone-shaped clock regions for SafePred -----------------------------------

ONE_CLOCK = parse_model("clocks: x; location l {} init: l; goal: l;")[0]
TWO_CLOCKS = parse_model("clocks: x, y; location l {} init: l; goal: l;")[0]


def rand_zone(sig: Signature, rng: random.Random, most: int = 2) -> Polyhedron:
    """Conjunction of atoms ``x ~ k`` and ``x - y ~ k`` within the nonnegative orthant."""
    nc = len(sig.clocks)
    cons = []
    for i in range(nc):
        unit = [0] * sig.dim
        unit[i] = 1
        cons.append(Constraint(tuple(unit), 0, False))
    for _ in range(rng.randint(1, most)):
        coeffs = [0] * sig.dim
        i = rng.randrange(nc)
        coeffs[i] = rng.choice((-1, 1))
        if nc > 1 and rng.random() < 0.3:
            coeffs[1 - i] = -coeffs[i]
        cons.append(constraint(coeffs, rng.randint(-4, 4), rng.random() < 0.4))
    return Polyhedron.make(sig, cons)


def rand_zone_region(sig: Signature, rng: random.Random, parts: int = 2) -> Region:
    return Region.of(sig, (rand_zone(sig, rng) for _ in range(rng.randint(0, parts))))


def interval_region(rng: random.Random) -> tuple[Region, list[tuple[int, int, bool, bool]]]:
    """Union of intervals with integer endpoints in [0, 4] (upper end possibly open-ended)."""
    sig = ONE_CLOCK.signature
    ivs = []
    parts = []
    for _ in range(rng.randint(0, 2)):
        lo = rng.randint(0, 4)
        hi = rng.randint(lo, 5)  # 5 stands for +infinity
        lo_strict = rng.random() < 0.5 and hi > lo
        hi_strict = rng.random() < 0.5 and hi > lo and hi < 5
        cons = [constraint([1], -lo, lo_strict)]
        if hi < 5:
            cons.append(constraint([-1], hi, hi_strict))
        ivs.append((lo, hi, lo_strict, hi_strict))
        parts.append(Polyhedron.make(sig, cons))
    return Region.of(sig, parts), ivs


def in_intervals(v: Fraction, ivs) -> bool:
    for lo, hi, ls, hs in ivs:
        above = v > lo if ls else v >= lo
        below = True if hi == 5 else (v < hi if hs else v <= hi)
        if above and below:
            return True
    return False


def grid_safe_pred(x0: Fraction, good, bad, step: Fraction = Fraction(1, 4), horizon: int = 6) -> bool:
    """Some grid delay reaches ``good`` while every grid point on the way avoids ``bad``."""
    v = x0
    while v <= horizon:
        if in_intervals(v, bad):
            return False
        if in_intervals(v, good):
            return True
        v += step
    return False


def check_safe_pred_grid(rng: random.Random) -> None:
    """One random 1-clock instance; raises AssertionError on disagreement."""
    g, givs = interval_region(rng)
    b, bivs = interval_region(rng)
    sp = safe_pred(ONE_CLOCK, "l", g, b)
    step = Fraction(1, 4)
    for k in range(int(5 / step) + 1):
        x0 = k * step
        if x0.denominator == 1:
            # within 1/8 of a potential boundary
            continue
        want = grid_safe_pred(x0, givs, bivs)
        assert sp.contains_point((x0,)) == want, (givs, bivs, x0, str(sp))


def check_safe_pred_monotone(rng: random.Random) -> None:
    ptg = ONE_CLOCK if rng.random() < 0.5 else TWO_CLOCKS
    sig = ptg.signature
    g = rand_zone_region(sig, rng)
    b = rand_zone_region(sig, rng)
    g2 = g.union(rand_zone_region(sig, rng, 1))
    b2 = b.union(rand_zone_region(sig, rng, 1))
    base = safe_pred(ptg, "l", g, b)
    assert safe_pred(ptg, "l", g2, b).includes(base)
    assert base.includes(safe_pred(ptg, "l", g, b2))


def check_projection(rng: random.Random) -> None:
    sig = rng.choice((SIGNATURES[0], SIGNATURES[2], SIGNATURES[3]))
    p = rand_poly(sig, rng)
    proj = p.project_params()
    for q in product([Fraction(k, 2) for k in range(-4, 5)], repeat=len(sig.params)):
        if rng.random() < 0.7:
            continue
        lifted = not pinned(sig, p, sig.params, q).is_empty()
        assert proj.contains_point(q) == lifted, (p, q)


def check_partition(rng: random.Random) -> None:
    sig = rng.choice(SIGNATURES[:3])
    a = rand_region(sig, rng)
    b = rand_region(sig, rng)
    d = a.diff(b)
    m = a.intersect(b)
    assert d.union(m).equiv(a)
    assert d.intersect(b).is_empty()
    for pt in grid(sig, Fraction(1), -2, 2):
        if rng.random() < 0.8:
            continue
        ina, inb = a.contains_point(pt), b.contains_point(pt)
        assert d.contains_point(pt) == (ina and not inb)
        assert m.contains_point(pt) == (ina and inb)


def check_elapse(rng: random.Random) -> None:
    sig = rng.choice(SIGNATURES)
    p = rand_poly(sig, rng)
    for op in (Polyhedron.elapse_future, Polyhedron.elapse_past):
        once = op(p)
        assert once.includes(p)
        assert op(once).equiv(once)
