from fractions import Fraction

import pytest

from ptgsynth.geometry import Constraint, Polyhedron, Region, Signature
from ptgsynth.model import PTG, Edge, ModelError, Objective, initial_zone, validate
from ptgsynth.parser import (
    ParseError,
    constraint_atoms,
    parse_constraint,
    parse_model,
    print_constraint,
    print_model,
)

from conftest import FIXTURES, load, poly

MINIMAL = "clocks: x; parameters: p; location a {} location b {} " \
          "cedge a -> b { guard: x >= p; } init: a; goal: b;"

ALL_FIXTURES = sorted(f.name[:-4] for f in FIXTURES.iterdir() if f.name.endswith(".ptg"))


def _error(text: str, **kw) -> ParseError:
    with pytest.raises(ParseError) as info:
        parse_model(text, **kw)
    return info.value


# -- model ---------------------------------------------------------------


def test_coffee_validates(coffee_unbounded):
    ptg, obj = coffee_unbounded
    validate(ptg, obj)
    assert obj.goal_locations == {"coffee_served"}


def test_dangling_location():
    ptg, obj = parse_model(MINIMAL)
    bad = PTG(ptg.locations, ptg.clocks, ptg.params,
              ptg.edges + (Edge("a", "nowhere", Polyhedron.universe(ptg.signature)),), "a")
    with pytest.raises(ModelError, match="dangling location"):
        validate(bad, obj)


def test_unknown_goal():
    ptg, _ = parse_model(MINIMAL)
    with pytest.raises(ModelError):
        validate(ptg, Objective.of(["c"]))
    with pytest.raises(ModelError, match="empty goal"):
        validate(ptg, Objective.of([]))


def test_reset_unknown_clock():
    ptg, obj = parse_model(MINIMAL)
    bad = PTG(ptg.locations, ptg.clocks, ptg.params,
              (Edge("a", "b", Polyhedron.universe(ptg.signature), ("z",)),), "a")
    with pytest.raises(ModelError, match="unknown clock"):
        validate(bad, obj)


def test_guard_over_foreign_signature():
    ptg, obj = parse_model(MINIMAL)
    other = Signature(("x",), ("q",))
    bad = PTG(ptg.locations, ptg.clocks, ptg.params,
              (Edge("a", "b", Polyhedron.universe(other)),), "a")
    with pytest.raises(ModelError):
        validate(bad, obj)


def test_initial_zone_coffee(coffee_unbounded):
    ptg, _ = coffee_unbounded
    z = initial_zone(ptg)
    assert z.equiv(poly("x = 0 && y = 0 && p1 >= 0 && p2 >= 0 && p3 >= 0 && p4 >= 0",
                        ptg.signature))


def test_initial_zone_empty_with_strict_invariant():
    ptg, _ = parse_model("clocks: x; location a { invariant: x > 0; } init: a; goal: a;")
    assert initial_zone(ptg).is_empty()


def test_initial_zone_without_invariant():
    ptg, _ = parse_model("clocks: x, y; parameters: p; location a {} init: a; goal: a;")
    assert initial_zone(ptg).equiv(poly("x = 0 && y = 0 && p >= 0", ptg.signature))


def test_state_space_is_nonnegative():
    ptg, _ = parse_model(MINIMAL)
    assert ptg.state_space.equiv(poly("x >= 0 && p >= 0", ptg.signature))
    assert ptg.space("a").equiv(ptg.state_space)


# -- parser --------------------------------------------------------------


def test_minimal_model():
    ptg, obj = parse_model(MINIMAL)
    assert ptg.locations == ("a", "b")
    assert len(ptg.edges) == 1 and ptg.edges[0].controllable
    assert ptg.edges[0].guard.equiv(poly("x >= p", ptg.signature))
    assert obj.goal_locations == {"b"}


def test_coffee_shape(coffee_unbounded):
    ptg, _ = coffee_unbounded
    assert len(ptg.locations) == 4
    assert sum(e.controllable for e in ptg.edges) == 2
    assert sum(not e.controllable for e in ptg.edges) == 3
    assert ptg.labels == ("ask_coffee", "ask_sugar", "serve_coffee", "sugar_added", "take_coffee")


@pytest.mark.parametrize("guard", ["x*y >= 1", "p*p >= 1", "x*p >= 1", "p*x >= 1"])
def test_nonlinear_terms(guard):
    text = MINIMAL.replace("x >= p", guard).replace("clocks: x;", "clocks: x, y;")
    err = _error(text)
    assert err.kind == "semantic" and "nonlinear term" in err.message


def test_error_span_points_at_token():
    text = MINIMAL.replace("x >= p", "x >= q")
    err = _error(text)
    assert "unknown identifier" in err.message
    assert text[err.span.begin:err.span.end] == "q"
    assert err.span.line == 1 and err.span.column == err.span.begin + 1


def test_error_line_column_multiline():
    text = "clocks: x;\nlocation a {}\nlocation b { invariant: x <= 1/0; }\ninit: a; goal: b;\n"
    err = _error(text)
    assert err.span.line == 3
    assert "3:" in str(err)


@pytest.mark.parametrize("text, fragment", [
    ("clocks: x, x; location a {} init: a; goal: a;", "duplicate"),
    ("clocks: x; parameters: x; location a {} init: a; goal: a;", "duplicate"),
    ("location a {} location a {} init: a; goal: a;", "duplicate"),
    ("location a {} goal: a;", "init"),
    ("location a {} init: a;", "goal"),
    ("location a {} init: b; goal: a;", "dangling"),
    ("clocks: x; location a { invariant: x <= 1/; } init: a; goal: a;", "rational"),
    ("clocks: x; location a { invariant: x <= 1 $ } init: a; goal: a;", ""),
])
def test_parse_errors(text, fragment):
    err = _error(text)
    assert err.message
    assert fragment in str(err)


def test_strict_grammar_rejects_differences():
    text = "clocks: x, y; location a {} location b {} cedge a -> b { guard: x - y <= 1; } init: a; goal: b;"
    ptg, _ = parse_model(text)
    assert ptg.edges[0].guard.equiv(poly("x - y <= 1", ptg.signature))
    err = _error(text, strict_grammar=True)
    assert err.kind == "semantic"


def test_print_constraint_examples():
    sig = Signature((), ("p1", "p2", "p3", "p4"))
    assert print_constraint(Region.empty(sig)) == "false"
    assert print_constraint(Region.universe(sig)) == "true"
    r = parse_constraint("p1 + p2 <= p4 && p3 < p4", sig)
    assert print_constraint(r) == "p1 + p2 <= p4 && p3 < p4"
    assert constraint_atoms(r) == [["p1 + p2 <= p4", "p3 < p4"]]


def test_print_constraint_is_deterministic_and_reparses():
    sig = Signature((), ("p", "q"))
    a = parse_constraint("p <= 1 && q >= 2 || p > 3 && 2*q < 1/2", sig)
    b = parse_constraint("2*q < 1/2 && p > 3 || q >= 2 && p <= 1", sig)
    assert print_constraint(a) == print_constraint(b)
    assert parse_constraint(print_constraint(a), sig).equiv(a)


def test_print_constraint_rejects_clocks():
    with pytest.raises(ValueError):
        print_constraint(Region.universe(Signature(("x",), ())))


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_round_trip(name):
    ptg, obj = load(name)
    text = print_model(ptg, obj)
    ptg2, obj2 = parse_model(text)
    assert (ptg2.locations, ptg2.clocks, ptg2.params, ptg2.initial) == \
        (ptg.locations, ptg.clocks, ptg.params, ptg.initial)
    assert obj2 == obj
    assert len(ptg2.edges) == len(ptg.edges)
    for e, f in zip(ptg.edges, ptg2.edges):
        assert (e.source, e.target, e.resets, e.label, e.controllable) == \
            (f.source, f.target, f.resets, f.label, f.controllable)
        assert e.guard.equiv(f.guard)
    for loc in ptg.locations:
        assert ptg.invariant(loc).equiv(ptg2.invariant(loc))
    # normalization is idempotent
    assert print_model(ptg2, obj2) == text
