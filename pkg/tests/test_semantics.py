import pytest

from ptgsynth.geometry import Region, Signature
from ptgsynth.parser import parse_model
from ptgsynth.semantics import (
    SemanticsError,
    SymbolicState,
    ZGEdge,
    controller_deadlock,
    discrete_pred,
    discrete_succ,
    initial_symbolic_state,
    make_state,
    safe_pred,
    successors,
    time_close,
    uncontrollable_moves,
    winning_moves,
)

from conftest import poly, region

ONE_CLOCK = parse_model("clocks: x; location l {} init: l; goal: l;")[0]


def _edge(ptg, label):
    return next(e for e in ptg.edges if e.label == label)


def _zg(ptg, state):
    return [ZGEdge(e, make_state(e.target, z)) for e, z in successors(ptg, state)]


def test_time_close_coffee(coffee_unbounded):
    ptg, _ = coffee_unbounded
    sig = ptg.signature
    z = poly("x = 0 && y = 0 && p1 >= 0 && p2 >= 0 && p3 >= 0 && p4 >= 0", sig)
    got = time_close(ptg, "preparing_coffee", z)
    assert got.equiv(poly("x = y && x >= 0 && p1 >= 0 && p2 >= 0 && p3 >= 0 && p4 >= 0", sig))
    assert time_close(ptg, "preparing_coffee", got).equiv(got)


def test_time_close_respects_invariant():
    ptg, _ = parse_model("clocks: x; parameters: p; location l { invariant: x <= p; } init: l; goal: l;")
    got = time_close(ptg, "l", poly("x = 0 && p >= 0", ptg.signature))
    assert got.equiv(poly("0 <= x && x <= p", ptg.signature))


def test_initial_symbolic_state(coffee_unbounded):
    ptg, _ = coffee_unbounded
    s = initial_symbolic_state(ptg)
    assert s.location == "preparing_coffee"
    assert s.zone.equiv(poly("x = y && x >= 0 && p1 >= 0 && p2 >= 0 && p3 >= 0 && p4 >= 0",
                             ptg.signature))


def test_initial_symbolic_state_variants():
    ptg, _ = parse_model("clocks: x, y; location l {} init: l; goal: l;")
    assert initial_symbolic_state(ptg).zone.equiv(poly("x = y && x >= 0", ptg.signature))
    ptg, _ = parse_model("clocks: x; location l { invariant: x = 0; } init: l; goal: l;")
    assert initial_symbolic_state(ptg).zone.equiv(poly("x = 0", ptg.signature))
    ptg, _ = parse_model("clocks: x; location l { invariant: x > 0; } init: l; goal: l;")
    with pytest.raises(SemanticsError):
        initial_symbolic_state(ptg)


def test_discrete_succ_ask_sugar(coffee_unbounded):
    ptg, _ = coffee_unbounded
    s = initial_symbolic_state(ptg)
    got = discrete_succ(ptg, s, _edge(ptg, "ask_sugar"))
    want = poly("x >= 0 && y - x < p1 && y >= x && p1 >= 0 && p2 >= 0 && p3 >= 0 && p4 >= 0",
                ptg.signature)
    assert got.equiv(want)


def test_discrete_succ_disabled_and_self_loop():
    ptg, _ = parse_model("clocks: x; location a {} location b {} "
                         "cedge a -> b { guard: x < 0; } cedge a -> a {} init: a; goal: b;")
    s = initial_symbolic_state(ptg)
    assert discrete_succ(ptg, s, ptg.edges[0]).is_empty()
    assert discrete_succ(ptg, s, ptg.edges[1]).equiv(s.zone)
    with pytest.raises(SemanticsError):
        discrete_succ(ptg, SymbolicState("b", s.zone), ptg.edges[1])


def test_discrete_pred_examples():
    ptg, _ = parse_model("clocks: x, y; location a {} location b {} "
                         "cedge a -> b { reset: {x}; } init: a; goal: b;")
    e = ptg.edges[0]
    sig = ptg.signature
    got = discrete_pred(ptg, e, region("x = 0 && y >= 1", sig))
    assert got.equiv(region("x >= 0 && y >= 1", sig))
    assert discrete_pred(ptg, e, region("x >= 1", sig)).is_empty()


def test_safe_pred_examples():
    sig = ONE_CLOCK.signature
    got = safe_pred(ONE_CLOCK, "l", region("x = 2", sig), region("x = 1", sig))
    assert got.equiv(region("1 < x && x <= 2", sig))
    got = safe_pred(ONE_CLOCK, "l", region("x = 2", sig), Region.empty(sig))
    assert got.equiv(region("0 <= x && x <= 2", sig))
    got = safe_pred(ONE_CLOCK, "l", region("x = 1", sig), region("x = 1", sig))
    assert got.is_empty()


def test_safe_pred_union_form():
    sig = ONE_CLOCK.signature
    good = region("1 <= x && x <= 2 || x >= 5", sig)
    bad = region("x = 3 || 0 <= x && x < 1/2", sig)
    got = safe_pred(ONE_CLOCK, "l", good, bad)
    assert got.equiv(region("1/2 <= x && x <= 2 || x > 3", sig))


def test_winning_and_uncontrollable_moves(coffee_unbounded):
    ptg, _ = coffee_unbounded
    s = initial_symbolic_state(ptg)
    zg = _zg(ptg, s)
    assert winning_moves(ptg, s, zg, {}).is_empty()
    served = next(ze.target for ze in zg if ze.edge.label == "serve_coffee")
    win = {served: Region.from_polyhedron(served.zone)}
    got = winning_moves(ptg, s, zg, win)
    assert got.equiv(Region.from_polyhedron(s.zone.intersect(poly("p3 < y && y < p4", ptg.signature))))
    # ask_sugar target is not winning, so the whole guard is an environment threat
    sugar = next(ze for ze in zg if ze.edge.label == "ask_sugar")
    threat = uncontrollable_moves(ptg, s, zg, win)
    assert threat.equiv(discrete_pred(ptg, sugar.edge, Region.from_polyhedron(sugar.target.zone))
                        .intersect(s.zone))
    win[sugar.target] = Region.from_polyhedron(sugar.target.zone)
    assert uncontrollable_moves(ptg, s, zg, win).is_empty()


def test_moves_without_edges():
    s = initial_symbolic_state(ONE_CLOCK)
    assert winning_moves(ONE_CLOCK, s, [], {}).is_empty()
    assert uncontrollable_moves(ONE_CLOCK, s, [], {}).is_empty()


def test_controller_deadlock():
    ptg, _ = parse_model("clocks: x; location a {} location b {} location c {} "
                         "uedge a -> b {} cedge c -> b { guard: x < 0; } cedge b -> a {} "
                         "init: a; goal: b;")
    a = initial_symbolic_state(ptg)
    assert controller_deadlock(ptg, a)
    assert controller_deadlock(ptg, make_state("c", a.zone))
    assert not controller_deadlock(ptg, make_state("b", a.zone))
    assert controller_deadlock(ptg, a, _zg(ptg, a))


def test_zg_edge_targets_recompute(coffee_unbounded):
    ptg, _ = coffee_unbounded
    frontier = [initial_symbolic_state(ptg)]
    seen = set()
    while frontier and len(seen) < 12:
        s = frontier.pop()
        if s in seen:
            continue
        seen.add(s)
        for e, z in successors(ptg, s):
            assert time_close(ptg, e.target, z).equiv(z)
            assert make_state(e.target, z) == make_state(e.target, discrete_succ(ptg, s, e))
            frontier.append(make_state(e.target, z))
