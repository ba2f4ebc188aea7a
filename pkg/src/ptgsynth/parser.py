"""Text front end for PTG model files, plus model/constraint printers.

Model file grammar (``#`` starts a line comment)::

    file      := decls location+ edge* "init" ":" ID ";" "goal" ":" idlist ";"
    decls     := ("clocks" ":" idlist ";")? ("parameters" ":" idlist ";")?
    location  := "location" ID "{" ("invariant" ":" conj ";")? "}"
    edge      := ("cedge"|"uedge") ID "->" ID "{"
                   ("guard" ":" conj ";")? ("reset" ":" "{" idlist? "}" ";")?
                   ("label" ":" ID ";")? "}"
    conj      := "true" | atom ("&&" atom)*
    atom      := term ("<"|"<="|"="|">="|">") term
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .geometry import (
    Constraint,
    Polyhedron,
    Region,
    Signature,
    atoms,
    format_region,
    linear,
)
from .model import PTG, Edge, ModelError, Objective, validate


@dataclass(frozen=True)
class SourceSpan:
    begin: int
    end: int
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan, kind: str = "syntax") -> None:
        assert message and kind in ("lex", "syntax", "semantic")
        super().__init__(f"{span}: {kind} error: {message}")
        self.message = message
        self.span = span
        self.kind = kind


KEYWORDS = {"clocks", "parameters", "location", "invariant", "cedge", "uedge", "guard",
            "reset", "label", "init", "goal", "true", "false"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<rational>\d+(?:/\d*)?)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|&&|\|\||<=|>=|[<>=:;{},+\-*()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "id", "rational", "op", "kw", "eof"
    text: str
    span: SourceSpan
    value: Fraction | None = None


def _lex(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line, col = 1, 1
    byte = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        lexeme = m.group(0) if m else text[pos]
        nbytes = len(lexeme.encode("utf-8"))
        span = SourceSpan(byte, byte + nbytes, line, col)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", span, "lex")
        kind = m.lastgroup
        if kind == "rational":
            num, _, den = lexeme.partition("/")
            if "/" in lexeme and (not den or int(den) == 0):
                raise ParseError(f"malformed rational {lexeme!r}", span, "lex")
            value = Fraction(int(num), int(den) if den else 1)
            tokens.append(Token("rational", lexeme, span, value))
        elif kind == "id":
            tokens.append(Token("kw" if lexeme in KEYWORDS else "id", lexeme, span))
        elif kind == "op":
            tokens.append(Token("op", lexeme, span))
        nl = lexeme.count("\n")
        if nl:
            line += nl
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = m.end()
        byte += nbytes
    tokens.append(Token("eof", "", SourceSpan(byte, byte, line, col)))
    return tokens


# linear expression: (coefficients by name, constant)
Linear = tuple[dict[str, Fraction], Fraction]

_RELATIONS = ("<", "<=", "=", ">=", ">")


class _Parser:
    def __init__(self, text: str, strict_grammar: bool = False) -> None:
        self.tokens = _lex(text)
        self.i = 0
        self.strict_grammar = strict_grammar
        self.clocks: tuple[str, ...] = ()
        self.params: tuple[str, ...] = ()

    # -- token helpers ----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "kw") and t.text == text

    def accept(self, text: str) -> Token | None:
        return self.advance() if self.at(text) else None

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {found!r}", self.tok.span)
        return self.advance()

    def ident(self) -> Token:
        if self.tok.kind != "id":
            found = self.tok.text or "end of input"
            raise ParseError(f"expected identifier, found {found!r}", self.tok.span)
        return self.advance()

    def idlist(self) -> list[Token]:
        out = [self.ident()]
        while self.accept(","):
            out.append(self.ident())
        return out

    # -- expressions ------------------------------------------------------

    def signature(self) -> Signature:
        return Signature(self.clocks, self.params)

    def expr(self) -> Linear:
        neg = bool(self.accept("-"))
        terms, const = self.term()
        if neg:
            terms, const = {k: -v for k, v in terms.items()}, -const
        while self.at("+") or self.at("-"):
            sign = 1 if self.advance().text == "+" else -1
            t2, c2 = self.term()
            for k, v in t2.items():
                terms[k] = terms.get(k, Fraction(0)) + sign * v
            const += sign * c2
        return terms, const

    def term(self) -> Linear:
        terms, const = self.factor()
        while self.at("*"):
            star = self.advance()
            t2, c2 = self.factor()
            if any(terms.values()) and any(t2.values()):
                raise ParseError("nonlinear term", star.span, "semantic")
            if any(terms.values()):
                terms, const = {k: v * c2 for k, v in terms.items()}, const * c2
            else:
                terms, const = {k: v * const for k, v in t2.items()}, const * c2
        return terms, const

    def factor(self) -> Linear:
        t = self.tok
        if t.kind == "rational":
            self.advance()
            assert t.value is not None
            return {}, t.value
        if t.kind == "id":
            self.advance()
            if t.text not in self.clocks and t.text not in self.params:
                raise ParseError(f"unknown identifier {t.text!r}", t.span, "semantic")
            return {t.text: Fraction(1)}, Fraction(0)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        if self.at("-"):
            self.advance()
            terms, const = self.factor()
            return {k: -v for k, v in terms.items()}, -const
        found = t.text or "end of input"
        raise ParseError(f"expected a term, found {found!r}", t.span)

    def atom(self) -> list[Constraint]:
        start = self.tok
        lhs = self.expr()
        rel = self.tok
        if not (rel.kind == "op" and rel.text in _RELATIONS):
            found = rel.text or "end of input"
            raise ParseError(f"expected a comparison, found {found!r}", rel.span)
        self.advance()
        rhs = self.expr()
        diff = dict(lhs[0])
        for k, v in rhs[0].items():
            diff[k] = diff.get(k, Fraction(0)) - v
        const = lhs[1] - rhs[1]
        diff = {k: v for k, v in diff.items() if v}
        self._check_shape(diff, start.span)
        sig = self.signature()
        neg = {k: -v for k, v in diff.items()}
        op = rel.text
        if op == ">=":
            return [linear(sig, diff, const)]
        if op == ">":
            return [linear(sig, diff, const, True)]
        if op == "<=":
            return [linear(sig, neg, -const)]
        if op == "<":
            return [linear(sig, neg, -const, True)]
        return [linear(sig, diff, const), linear(sig, neg, -const)]

    def _check_shape(self, diff: dict[str, Fraction], span: SourceSpan) -> None:
        clock_part = {k: v for k, v in diff.items() if k in self.clocks}
        if not clock_part:
            return
        if len(clock_part) == 1 and abs(next(iter(clock_part.values()))) == 1:
            return
        if len(clock_part) == 2 and sorted(clock_part.values()) == [-1, 1]:
            if self.strict_grammar:
                raise ParseError("clock difference not allowed with strict grammar", span, "semantic")
            return
        raise ParseError("atom is not of the form 'clock ~ plt', 'clock - clock ~ plt' or 'plt ~ plt'",
                         span, "semantic")

    def conj(self) -> Polyhedron:
        sig = self.signature()
        if self.accept("true"):
            return Polyhedron.universe(sig)
        if self.accept("false"):
            return Polyhedron.empty(sig)
        cons = self.atom()
        while self.accept("&&"):
            cons.extend(self.atom())
        return Polyhedron.make(sig, cons)

    def disj(self) -> list[Polyhedron]:
        parts = [self.disjunct()]
        while self.accept("||"):
            parts.append(self.disjunct())
        return parts

    def disjunct(self) -> Polyhedron:
        if self.at("("):
            # parenthesised conjunction, or an atom starting with "("
            save = self.i
            self.advance()
            try:
                p = self.conj()
                self.expect(")")
                if not (self.at("||") or self.tok.kind == "eof" or self.at(";")):
                    raise ParseError("", self.tok.span)
                return p
            except ParseError:
                self.i = save
        return self.conj()

    # -- model ------------------------------------------------------------

    def declare(self, seen: dict[str, Token], tok: Token) -> None:
        if tok.text in seen:
            raise ParseError(f"duplicate declaration of {tok.text!r}", tok.span, "semantic")
        seen[tok.text] = tok

    def model(self) -> tuple[PTG, Objective]:
        names: dict[str, Token] = {}
        if self.accept("clocks"):
            self.expect(":")
            ids = self.idlist()
            for t in ids:
                self.declare(names, t)
            self.clocks = tuple(t.text for t in ids)
            self.expect(";")
        if self.accept("parameters"):
            self.expect(":")
            ids = self.idlist()
            for t in ids:
                self.declare(names, t)
            self.params = tuple(t.text for t in ids)
            self.expect(";")
        locations: dict[str, Token] = {}
        invariants: dict[str, Polyhedron] = {}
        if not self.at("location"):
            raise ParseError("expected at least one 'location'", self.tok.span)
        while self.accept("location"):
            name = self.ident()
            self.declare(locations, name)
            self.expect("{")
            if self.accept("invariant"):
                self.expect(":")
                invariants[name.text] = self.conj()
                self.expect(";")
            self.expect("}")
        edges: list[Edge] = []
        sig = self.signature()
        while self.at("cedge") or self.at("uedge"):
            kw = self.advance()
            src = self.ident()
            self.expect("->")
            dst = self.ident()
            for t in (src, dst):
                if t.text not in locations:
                    raise ParseError(f"dangling location {t.text!r}", t.span, "semantic")
            self.expect("{")
            guard = Polyhedron.universe(sig)
            resets: tuple[str, ...] = ()
            label = None
            seen_items: dict[str, Token] = {}
            while not self.at("}"):
                item = self.tok
                if self.accept("guard"):
                    self.declare(seen_items, item)
                    self.expect(":")
                    guard = self.conj()
                elif self.accept("reset"):
                    self.declare(seen_items, item)
                    self.expect(":")
                    self.expect("{")
                    ids = [] if self.at("}") else self.idlist()
                    self.expect("}")
                    for t in ids:
                        if t.text not in self.clocks:
                            raise ParseError(f"reset of unknown clock {t.text!r}", t.span, "semantic")
                    resets = tuple(dict.fromkeys(t.text for t in ids))
                elif self.accept("label"):
                    self.declare(seen_items, item)
                    self.expect(":")
                    label = self.ident().text
                else:
                    found = item.text or "end of input"
                    raise ParseError(f"expected 'guard', 'reset', 'label' or '}}', found {found!r}", item.span)
                self.expect(";")
            self.expect("}")
            edges.append(Edge(src.text, dst.text, guard, resets, label, kw.text == "cedge"))
        self.expect("init")
        self.expect(":")
        init = self.ident()
        if init.text not in locations:
            raise ParseError(f"dangling location {init.text!r}", init.span, "semantic")
        self.expect(";")
        self.expect("goal")
        self.expect(":")
        goals = self.idlist()
        for t in goals:
            if t.text not in locations:
                raise ParseError(f"goal refers to unknown location {t.text!r}", t.span, "semantic")
        self.expect(";")
        if self.tok.kind != "eof":
            raise ParseError(f"unexpected {self.tok.text!r} after goal", self.tok.span)
        ptg = PTG(tuple(locations), self.clocks, self.params, tuple(edges), init.text, invariants)
        objective = Objective.of(t.text for t in goals)
        try:
            validate(ptg, objective)
        except ModelError as exc:
            raise ParseError(str(exc), init.span, "semantic") from exc
        return ptg, objective


def parse_model(text: str, strict_grammar: bool = False) -> tuple[PTG, Objective]:
    return _Parser(text, strict_grammar).model()


def parse_constraint(text: str, sig: Signature) -> Region:
    """Parse a ``||``-of-``&&`` constraint over ``sig`` (the inverse of :func:`print_constraint`)."""
    p = _Parser(text)
    p.clocks, p.params = sig.clocks, sig.params
    parts = p.disj()
    if p.tok.kind != "eof":
        raise ParseError(f"unexpected {p.tok.text!r}", p.tok.span)
    return Region.of(sig, parts)


def print_constraint(region: Region) -> str:
    if region.signature.clocks:
        raise ValueError("print_constraint expects a region over parameters only")
    return format_region(region)


def constraint_atoms(region: Region) -> list[list[str]]:
    """Sorted atom lists per disjunct, the JSON rendering of a region."""
    return sorted(atoms(p) for p in region.disjuncts)


def _conj_text(p: Polyhedron) -> str:
    return "true" if p.is_universe() else " && ".join(atoms(p))


def print_model(ptg: PTG, objective: Objective) -> str:
    lines: list[str] = []
    if ptg.clocks:
        lines.append(f"clocks: {', '.join(ptg.clocks)};")
    if ptg.params:
        lines.append(f"parameters: {', '.join(ptg.params)};")
    lines.append("")
    for loc in ptg.locations:
        inv = ptg.invariants.get(loc)
        if inv is None:
            lines.append(f"location {loc} {{}}")
        else:
            lines.append(f"location {loc} {{ invariant: {_conj_text(inv)}; }}")
    lines.append("")
    for e in ptg.edges:
        kw = "cedge" if e.controllable else "uedge"
        body = [f"guard: {_conj_text(e.guard)};"]
        if e.resets:
            body.append(f"reset: {{{', '.join(e.resets)}}};")
        if e.label:
            body.append(f"label: {e.label};")
        lines.append(f"{kw} {e.source} -> {e.target} {{ {' '.join(body)} }}")
    lines.append("")
    lines.append(f"init: {ptg.initial};")
    lines.append(f"goal: {', '.join(sorted(objective.goal_locations))};")
    return "\n".join(lines) + "\n"


def iter_tokens(text: str) -> Iterator[Token]:
    """Token stream of a model text (debugging aid)."""
    return iter(_lex(text))
