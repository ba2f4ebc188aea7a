"""Exact NNC polyhedra over a joint clock + parameter space.

A :class:`Polyhedron` is a conjunction of linear constraints, each weak
(``>= 0``) or strict (``> 0``).  Constraints are stored with integer
coefficients, so Fourier-Motzkin steps stay in integer arithmetic; exact
rationals only appear inside the LP and at the API boundary.

A :class:`Region` is a finite union of polyhedra sharing one signature.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Iterable, Mapping, NamedTuple, Sequence

from .lp import nnc_feasible

Rational = Fraction


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    """Ordered clock and parameter names; clocks come first in every vector."""

    clocks: tuple[str, ...]
    params: tuple[str, ...]

    def __post_init__(self) -> None:
        names = self.clocks + self.params
        if len(set(names)) != len(names):
            raise GeometryError(f"duplicate dimension names in {names}")

    @property
    def names(self) -> tuple[str, ...]:
        return self.clocks + self.params

    @property
    def dim(self) -> int:
        return len(self.clocks) + len(self.params)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise GeometryError(f"unknown identifier {name!r}") from None

    def param_signature(self) -> "Signature":
        return Signature((), self.params)


# ---------------------------------------------------------------------------
# constraints


class Constraint(NamedTuple):
    """``sum(coeffs[i] * v[i]) + const >= 0`` (``> 0`` when strict).

    Coefficients and constant are integers with no common factor.
    """

    coeffs: tuple[int, ...]
    const: int
    strict: bool


def _normalize(coeffs: Sequence[int], const: int, strict: bool) -> Constraint:
    g = 0
    for a in coeffs:
        if a:
            g = gcd(g, a)
    if g == 0:
        # constant comparison
        if const > 0 or (const == 0 and not strict):
            return Constraint(tuple(coeffs), 1, False)
        return Constraint(tuple(coeffs), -1, False)
    g = gcd(g, const)
    if g != 1:
        return Constraint(tuple(a // g for a in coeffs), const // g, strict)
    return Constraint(tuple(coeffs), const, strict)


def constraint(coeffs: Sequence[Fraction | int], const: Fraction | int, strict: bool = False) -> Constraint:
    """Build a normalized constraint from rational coefficients."""
    fr = [Fraction(a) for a in coeffs]
    fc = Fraction(const)
    den = reduce(lambda acc, q: acc * q.denominator // gcd(acc, q.denominator), fr + [fc], 1)
    return _normalize([int(a * den) for a in fr], int(fc * den), strict)


def linear(sig: Signature, terms: Mapping[str, Fraction | int], const: Fraction | int = 0,
           strict: bool = False) -> Constraint:
    """``sum(terms[name] * name) + const >= 0`` (or ``> 0``)."""
    coeffs: list[Fraction | int] = [0] * sig.dim
    for name, a in terms.items():
        coeffs[sig.index(name)] += Fraction(a)
    return constraint(coeffs, const, strict)


def is_trivial(c: Constraint) -> bool:
    return not any(c.coeffs)


def is_tautology(c: Constraint) -> bool:
    return not any(c.coeffs) and c.const > 0


def is_contradiction(c: Constraint) -> bool:
    return not any(c.coeffs) and c.const < 0


def negate(c: Constraint) -> Constraint:
    """The complement half-space: not (e >= 0) is -e > 0; not (e > 0) is -e >= 0."""
    return _normalize([-a for a in c.coeffs], -c.const, not c.strict)


@lru_cache(maxsize=1 << 16)
def _direction(c: Constraint) -> tuple[tuple[int, ...], Fraction]:
    """Primitive coefficient vector and the matching rescaled constant."""
    g = 0
    for a in c.coeffs:
        if a:
            g = gcd(g, a)
    if g == 1:
        return c.coeffs, Fraction(c.const)
    return tuple(a // g for a in c.coeffs), Fraction(c.const, g)


def _tighter(c: Constraint, d: Constraint) -> Constraint:
    """Of two constraints with the same direction, the one implying the other."""
    _, kc = _direction(c)
    _, kd = _direction(d)
    if kc < kd:
        return c
    if kd < kc:
        return d
    return c if c.strict else d


def _combine(p: Constraint, n: Constraint, j: int) -> Constraint:
    """Eliminate dimension ``j`` between ``p`` (coef > 0) and ``n`` (coef < 0)."""
    mp = -n.coeffs[j]
    mn = p.coeffs[j]
    g = gcd(mp, mn)
    mp //= g
    mn //= g
    coeffs = [mp * a + mn * b for a, b in zip(p.coeffs, n.coeffs)]
    coeffs[j] = 0
    return _normalize(coeffs, mp * p.const + mn * n.const, p.strict or n.strict)


FALSE_CONST = -1


def _false(dim: int) -> Constraint:
    return Constraint((0,) * dim, -1, False)


def _evaluate(c: Constraint, point: Sequence[Fraction]) -> bool:
    s = Fraction(c.const)
    for a, x in zip(c.coeffs, point):
        if a:
            s += a * x
    return s > 0 if c.strict else s >= 0


def _holds_scaled(c: Constraint, w: tuple[tuple[int, ...], int]) -> bool:
    nums, den = w
    s = c.const * den
    for a, x in zip(c.coeffs, nums):
        if a:
            s += a * x
    return s > 0 if c.strict else s >= 0


def _dedupe(cons: Iterable[Constraint], dim: int) -> tuple[Constraint, ...] | None:
    """Syntactic cleanup: drop tautologies, keep tightest per direction.

    Returns None when a constant contradiction or a pair of opposite
    constraints with an empty gap is found.
    """
    best: dict[tuple[int, ...], Constraint] = {}
    for c in cons:
        if not any(c.coeffs):
            if c.const < 0:
                return None
            continue
        key, _ = _direction(c)
        old = best.get(key)
        best[key] = c if old is None else _tighter(c, old)
    for key, c in best.items():
        opp = best.get(tuple(-a for a in key))
        if opp is not None:
            _, k1 = _direction(c)
            _, k2 = _direction(opp)
            # a.v >= -k1 and a.v <= k2
            if -k1 > k2 or (-k1 == k2 and (c.strict or opp.strict)):
                return None
    return tuple(sorted(best.values()))


@lru_cache(maxsize=1 << 18)
def _feasible_set(cons: frozenset[Constraint], dim: int) -> bool:
    return nnc_feasible(sorted(cons), dim)


def _feasible(cons: Sequence[Constraint], dim: int) -> bool:
    return _feasible_set(frozenset(cons), dim)


def _escapes(c: Constraint, cons: Sequence[Constraint]) -> bool:
    """Cheap non-entailment test for a nonempty ``cons``.

    If moving along some axis never violates ``cons`` but eventually
    violates ``c``, then ``cons`` cannot imply ``c``.
    """
    for j, a in enumerate(c.coeffs):
        if a > 0:
            if all(d.coeffs[j] <= 0 for d in cons):
                return True
        elif a < 0:
            if all(d.coeffs[j] >= 0 for d in cons):
                return True
    return False


def _entails(cons: Sequence[Constraint], c: Constraint, dim: int) -> bool:
    """Does the (satisfiable) conjunction ``cons`` imply ``c``?"""
    if is_tautology(c):
        return True
    key, k = _direction(c)
    for d in cons:
        dk, dkk = _direction(d)
        if dk == key and (dkk < k or (dkk == k and (d.strict or not c.strict))):
            return True
    if _escapes(c, cons):
        return False
    return not _feasible(list(cons) + [negate(c)], dim)


def _remove_redundant(cons: tuple[Constraint, ...], dim: int) -> tuple[Constraint, ...]:
    kept = list(cons)
    i = 0
    while i < len(kept):
        others = kept[:i] + kept[i + 1:]
        if others and not _escapes(kept[i], others) and not _feasible(others + [negate(kept[i])], dim):
            kept.pop(i)
        else:
            i += 1
    return tuple(kept)


def _find_equality(cons: Sequence[Constraint], j: int) -> Constraint | None:
    """A weak constraint ``e >= 0`` whose mirror ``-e >= 0`` is also present, with e_j != 0."""
    weak = {c for c in cons if not c.strict and c.coeffs[j]}
    for c in sorted(weak):
        mirror = Constraint(tuple(-a for a in c.coeffs), -c.const, False)
        if mirror in weak:
            return c if c.coeffs[j] > 0 else mirror
    return None


def _eliminate(cons: Sequence[Constraint], j: int, dim: int) -> list[Constraint] | None:
    """Existentially quantify dimension ``j`` (Fourier-Motzkin, Gauss on equalities)."""
    eq = _find_equality(cons, j)
    if eq is not None:
        mirror = Constraint(tuple(-a for a in eq.coeffs), -eq.const, False)
        out = []
        for c in cons:
            if c == eq or c == mirror:
                continue
            a = c.coeffs[j]
            if a > 0:
                out.append(_combine(c, mirror, j))
            elif a < 0:
                out.append(_combine(eq, c, j))
            else:
                out.append(c)
        return out
    pos = [c for c in cons if c.coeffs[j] > 0]
    neg = [c for c in cons if c.coeffs[j] < 0]
    out = [c for c in cons if c.coeffs[j] == 0]
    for p in pos:
        for n in neg:
            out.append(_combine(p, n, j))
    return out


# ---------------------------------------------------------------------------
# polyhedra


_CACHE = 1 << 15


@dataclass(frozen=True, eq=False)
class Polyhedron:
    """A convex NNC polyhedron in canonical (minimized) constraint form.

    The empty polyhedron is represented by the single constraint ``-1 >= 0``;
    the universe by the empty conjunction.  Values are immutable, so the
    expensive operations are memoized.
    """

    signature: Signature
    constraints: tuple[Constraint, ...]

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, Polyhedron) and self.constraints == other.constraints \
            and self.signature == other.signature

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.signature, self.constraints))
            object.__setattr__(self, "_hash", h)
        return h


    def _cset(self) -> frozenset[Constraint]:
        cs = self.__dict__.get("_cs")
        if cs is None:
            cs = frozenset(self.constraints)
            object.__setattr__(self, "_cs", cs)
        return cs

    # -- construction -----------------------------------------------------

    @classmethod
    def make(cls, sig: Signature, constraints: Iterable[Constraint]) -> "Polyhedron":
        cons = list(constraints)
        for c in cons:
            if len(c.coeffs) != sig.dim:
                raise GeometryError("constraint dimension does not match signature")
        return cls._minimized(sig, cons)

    @classmethod
    def universe(cls, sig: Signature) -> "Polyhedron":
        return cls(sig, ())

    @classmethod
    def empty(cls, sig: Signature) -> "Polyhedron":
        return cls(sig, (_false(sig.dim),))

    @classmethod
    def _minimized(cls, sig: Signature, cons: Iterable[Constraint]) -> "Polyhedron":
        dd = _dedupe(cons, sig.dim)
        if dd is None:
            return cls.empty(sig)
        if not dd:
            return cls(sig, ())
        if not _feasible(dd, sig.dim):
            return cls.empty(sig)
        if len(dd) > 1:
            dd = _remove_redundant(dd, sig.dim)
        return cls(sig, dd)

    # -- predicates -------------------------------------------------------

    def is_empty(self) -> bool:
        return len(self.constraints) == 1 and is_contradiction(self.constraints[0])

    def is_universe(self) -> bool:
        return not self.constraints

    def _check(self, other: "Polyhedron") -> None:
        if self.signature != other.signature:
            raise GeometryError("signature mismatch")

    @lru_cache(maxsize=_CACHE)
    def includes(self, other: "Polyhedron") -> bool:
        """True iff ``other`` is a subset of ``self``."""
        self._check(other)
        if other.is_empty() or self.is_universe():
            return True
        if self.is_empty():
            return False
        w = other._witness()
        if w is not None and not all(_holds_scaled(c, w) for c in self.constraints):
            return False
        dim = self.signature.dim
        return all(_entails(other.constraints, c, dim) for c in self.constraints)

    def equiv(self, other: "Polyhedron") -> bool:
        return self.includes(other) and other.includes(self)

    def entails(self, c: Constraint) -> bool:
        if self.is_empty():
            return True
        return _entails(self.constraints, c, self.signature.dim)

    def disjoint(self, other: "Polyhedron") -> bool:
        self._check(other)
        if self.is_empty() or other.is_empty():
            return True
        return _dedupe(self.constraints + other.constraints, self.signature.dim) is None or \
            not _feasible(self.constraints + other.constraints, self.signature.dim)

    def contains_point(self, point: Sequence[Fraction | int] | Mapping[str, Fraction | int]) -> bool:
        sig = self.signature
        if isinstance(point, Mapping):
            vec = [Fraction(point[n]) for n in sig.names]
        else:
            vec = [Fraction(x) for x in point]
            if len(vec) != sig.dim:
                raise GeometryError(f"point has {len(vec)} coordinates, signature has {sig.dim}")
        return all(_evaluate(c, vec) for c in self.constraints)

    # -- operations -------------------------------------------------------

    @lru_cache(maxsize=_CACHE)
    def intersect(self, other: "Polyhedron") -> "Polyhedron":
        self._check(other)
        if self.is_empty() or other.is_universe():
            return self
        if other.is_empty() or self.is_universe():
            return other
        return Polyhedron._minimized(self.signature, self.constraints + other.constraints)

    def add(self, *cons: Constraint) -> "Polyhedron":
        if self.is_empty():
            return self
        return Polyhedron._minimized(self.signature, self.constraints + tuple(cons))

    def _eliminate_dims(self, dims: Iterable[int]) -> tuple[Constraint, ...] | None:
        dim = self.signature.dim
        cons: Sequence[Constraint] = self.constraints
        for j in dims:
            out = _eliminate(cons, j, dim)
            dd = _dedupe(out, dim) if out is not None else None
            if dd is None:
                return None
            if len(dd) > len(cons) + 2:
                dd = _remove_redundant(dd, dim)
            cons = dd
        return tuple(cons)

    def free(self, clocks: Iterable[str]) -> "Polyhedron":
        """Existentially quantify the given clocks; the result ignores them."""
        sig = self.signature
        idx = []
        for x in clocks:
            if x not in sig.clocks:
                raise GeometryError(f"unknown clock {x!r}")
            idx.append(sig.index(x))
        if not idx or self.is_empty():
            return self
        cons = self._eliminate_dims(idx)
        if cons is None:
            return Polyhedron.empty(sig)
        return Polyhedron._minimized(sig, cons)

    def reset(self, clocks: Iterable[str]) -> "Polyhedron":
        clocks = list(clocks)
        freed = self.free(clocks)
        if not clocks or freed.is_empty():
            return freed
        sig = self.signature
        pins = []
        for x in clocks:
            j = sig.index(x)
            unit = [0] * sig.dim
            unit[j] = 1
            pins.append(Constraint(tuple(unit), 0, False))
            unit = [0] * sig.dim
            unit[j] = -1
            pins.append(Constraint(tuple(unit), 0, False))
        return Polyhedron._minimized(sig, freed.constraints + tuple(pins))

    @lru_cache(maxsize=_CACHE)
    def project_params(self) -> "Polyhedron":
        """Eliminate every clock; the result lives over parameters only."""
        sig = self.signature
        nc = len(sig.clocks)
        psig = sig.param_signature()
        if self.is_empty():
            return Polyhedron.empty(psig)
        cons = self._eliminate_dims(range(nc))
        if cons is None:
            return Polyhedron.empty(psig)
        return Polyhedron._minimized(psig, [Constraint(c.coeffs[nc:], c.const, c.strict) for c in cons])

    @lru_cache(maxsize=_CACHE)
    def _elapse(self, sign: int) -> "Polyhedron":
        sig = self.signature
        nc = len(sig.clocks)
        if self.is_empty() or nc == 0:
            return self
        dim = sig.dim
        # extra last dimension delta >= 0; clock x becomes x - sign*delta
        ext = []
        for c in self.constraints:
            s = sum(c.coeffs[:nc])
            ext.append(Constraint(c.coeffs + (-sign * s,), c.const, c.strict))
        ext.append(Constraint((0,) * dim + (1,), 0, False))
        out = _eliminate(ext, dim, dim + 1)
        cons = [Constraint(c.coeffs[:dim], c.const, c.strict) for c in out]
        return Polyhedron._minimized(sig, cons)

    def elapse_future(self) -> "Polyhedron":
        return self._elapse(+1)

    def elapse_past(self) -> "Polyhedron":
        return self._elapse(-1)

    def complement(self) -> "Region":
        sig = self.signature
        if self.is_empty():
            return Region(sig, (Polyhedron.universe(sig),))
        parts = [Polyhedron._minimized(sig, [negate(c)]) for c in self.constraints]
        return Region.of(sig, parts)

    @lru_cache(maxsize=_CACHE)
    def minus(self, other: "Polyhedron") -> tuple["Polyhedron", ...]:
        """``self \\ other`` as pairwise-disjoint nonempty pieces."""
        self._check(other)
        if self.is_empty():
            return ()
        if other.is_empty() or self.disjoint(other):
            return (self,)
        sig = self.signature
        pieces = []
        acc = list(self.constraints)
        for c in other.constraints:
            if _entails(self.constraints, c, sig.dim):
                continue
            piece = Polyhedron._minimized(sig, acc + [negate(c)])
            if not piece.is_empty():
                pieces.append(piece)
            acc.append(c)
        return tuple(pieces)

    @lru_cache(maxsize=_CACHE)
    def canonical(self) -> "Polyhedron":
        """A representation that depends only on the denoted set.

        Implicit equalities are made explicit and put in reduced row echelon
        form; their pivot dimensions are then substituted out of the
        remaining inequalities before minimization.
        """
        if self.is_empty() or self.is_universe():
            return self
        sig = self.signature
        dim = sig.dim
        cons = self.constraints
        present = set(cons)
        eq_rows: list[list[Fraction]] = []
        ineqs: list[Constraint] = []
        for c in cons:
            mirror = Constraint(tuple(-a for a in c.coeffs), -c.const, False)
            if not c.strict and (mirror in present or _entails(cons, mirror, dim)):
                eq_rows.append([Fraction(a) for a in c.coeffs] + [Fraction(c.const)])
            else:
                ineqs.append(c)
        if not eq_rows:
            return self
        pivots = _rref(eq_rows, dim)
        out = []
        for row in eq_rows:
            c = constraint(row[:dim], row[dim])
            out.append(c)
            out.append(negate(c)._replace(strict=False))
        for c in ineqs:
            vec = [Fraction(a) for a in c.coeffs] + [Fraction(c.const)]
            for row, j in zip(eq_rows, pivots):
                f = vec[j]
                if f:
                    vec = [v - f * r for v, r in zip(vec, row)]
            out.append(constraint(vec[:dim], vec[dim], c.strict))
        return Polyhedron._minimized(sig, out)

    @lru_cache(maxsize=_CACHE)
    def _witness(self) -> tuple[tuple[int, ...], int] | None:
        """A sample point as integer numerators over a common denominator."""
        p = self.sample_point()
        if p is None:
            return None
        den = lcm(*(x.denominator for x in p)) if p else 1
        return tuple(int(x * den) for x in p), den

    def sample_point(self) -> tuple[Fraction, ...] | None:
        """Some rational point of the polyhedron, or None when empty.

        Dimensions are fixed one at a time from projections, preferring small
        integers, then half-integers, then midpoints.
        """
        if self.is_empty():
            return None
        dim = self.signature.dim
        # stages[k] constrains dimensions 0..k only
        stages: list[Sequence[Constraint]] = [()] * dim
        cons: Sequence[Constraint] = self.constraints
        for k in range(dim - 1, -1, -1):
            stages[k] = cons
            if k:
                out = _eliminate(cons, k, dim)
                dd = _dedupe(out, dim) if out is not None else None
                if dd is None:
                    return None
                if len(dd) > len(cons) + 2:
                    dd = _remove_redundant(dd, dim)
                cons = dd
        point: list[Fraction] = []
        for k in range(dim):
            lo: tuple[Fraction, bool] | None = None
            hi: tuple[Fraction, bool] | None = None
            for c in stages[k]:
                a = c.coeffs[k]
                rest = c.const + sum(c.coeffs[i] * point[i] for i in range(k))
                if not a:
                    continue
                bound = Fraction(-rest, a)
                if a > 0:
                    if lo is None or bound > lo[0] or (bound == lo[0] and c.strict):
                        lo = (bound, c.strict)
                else:
                    if hi is None or bound < hi[0] or (bound == hi[0] and c.strict):
                        hi = (bound, c.strict)
            point.append(_pick(lo, hi))
        return tuple(point)

    def __str__(self) -> str:
        return format_polyhedron(self)


def _pick(lo: tuple[Fraction, bool] | None, hi: tuple[Fraction, bool] | None) -> Fraction:
    def ok(v: Fraction) -> bool:
        if lo is not None and (v < lo[0] or (v == lo[0] and lo[1])):
            return False
        if hi is not None and (v > hi[0] or (v == hi[0] and hi[1])):
            return False
        return True

    start = lo[0] if lo is not None else (hi[0] if hi is not None else Fraction(0))
    base = max(Fraction(0), start) if lo is None and hi is not None and hi[0] >= 0 else start
    for step in (Fraction(1), Fraction(1, 2)):
        v = Fraction(int(base // step)) * step
        for cand in (v, v + step, v - step):
            if ok(cand):
                return cand
    if lo is not None and hi is not None:
        return (lo[0] + hi[0]) / 2
    if lo is not None:
        return lo[0] + 1
    assert hi is not None
    return hi[0] - 1


def _rref(rows: list[list[Fraction]], dim: int) -> list[int]:
    """Reduce ``rows`` in place (dropping dependent ones); return pivot columns."""
    pivots: list[int] = []
    r = 0
    for j in range(dim):
        sel = next((i for i in range(r, len(rows)) if rows[i][j]), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        piv = rows[r][j]
        rows[r] = [v / piv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][j]:
                f = rows[i][j]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(j)
        r += 1
    del rows[r:]
    return pivots


# ---------------------------------------------------------------------------
# regions


def _covers(c: Constraint, d: Constraint) -> bool:
    """c or d holds everywhere (opposite directions, no gap between them)."""
    kc, vc = _direction(c)
    kd, vd = _direction(d)
    if tuple(-x for x in kc) != kd:
        return False
    # c: a.v >= -vc ; d: a.v <= vd
    return -vc < vd or (-vc == vd and not (c.strict and d.strict))


def _merge_pair(a: Polyhedron, b: Polyhedron) -> Polyhedron | None:
    """Convex union of a and b when it is ``a`` minus one constraint.

    Requires a constraint c of a and d of b with ``c or d`` valid, every other
    constraint of b already in a (so ``(a - c) & not c`` lies in b) and b
    inside ``a - c``.
    """
    sa, sb = a._cset(), b._cset()
    if len(sa - sb) != 1 and len(sb - sa) != 1:
        return None
    for x, y, sx, sy in ((a, b, sa, sb), (b, a, sb, sa)):
        dy = sy - sx
        if len(dy) != 1:
            continue
        (d,) = dy
        for c in sx - sy:
            if not _covers(c, d):
                continue
            hull = tuple(k for k in x.constraints if k != c)
            dim = x.signature.dim
            if all(k in sy or _entails(y.constraints, k, dim) for k in hull):
                return Polyhedron(x.signature, hull)
    return None


@dataclass(frozen=True)
class Region:
    """A finite union of nonempty polyhedra (the empty region has none)."""

    signature: Signature
    disjuncts: tuple[Polyhedron, ...]

    @classmethod
    def of(cls, sig: Signature, parts: Iterable[Polyhedron]) -> "Region":
        out: list[Polyhedron] = []
        for p in parts:
            if p.signature != sig:
                raise GeometryError("signature mismatch")
            _absorb(out, p)
        return cls(sig, tuple(out))

    @classmethod
    def empty(cls, sig: Signature) -> "Region":
        return cls(sig, ())

    @classmethod
    def universe(cls, sig: Signature) -> "Region":
        return cls(sig, (Polyhedron.universe(sig),))

    @classmethod
    def from_polyhedron(cls, p: Polyhedron) -> "Region":
        return cls(p.signature, () if p.is_empty() else (p,))

    def _check(self, other: "Region | Polyhedron") -> None:
        if self.signature != other.signature:
            raise GeometryError("signature mismatch")

    def is_empty(self) -> bool:
        return not self.disjuncts

    def __iter__(self):
        return iter(self.disjuncts)

    def __len__(self) -> int:
        return len(self.disjuncts)

    def union(self, other: "Region | Polyhedron") -> "Region":
        self._check(other)
        parts = other.disjuncts if isinstance(other, Region) else (other,)
        out = list(self.disjuncts)
        for p in parts:
            _absorb(out, p)
        return Region(self.signature, tuple(out))

    def intersect(self, other: "Region | Polyhedron") -> "Region":
        self._check(other)
        parts = other.disjuncts if isinstance(other, Region) else (other,)
        out: list[Polyhedron] = []
        for a in self.disjuncts:
            for b in parts:
                _absorb(out, a.intersect(b))
        return Region(self.signature, tuple(out))

    def diff(self, other: "Region | Polyhedron") -> "Region":
        self._check(other)
        parts = other.disjuncts if isinstance(other, Region) else (other,)
        pieces = list(self.disjuncts)
        for b in parts:
            nxt: list[Polyhedron] = []
            for p in pieces:
                nxt.extend(p.minus(b))
            pieces = nxt
            if not pieces:
                break
        return Region.of(self.signature, pieces)

    def includes(self, other: "Region | Polyhedron") -> bool:
        """True iff ``other`` is a subset of ``self``."""
        self._check(other)
        parts = other.disjuncts if isinstance(other, Region) else (() if other.is_empty() else (other,))
        for q in parts:
            if any(p.includes(q) for p in self.disjuncts):
                continue
            rest = [q]
            for p in self.disjuncts:
                nxt: list[Polyhedron] = []
                for r in rest:
                    nxt.extend(r.minus(p))
                rest = nxt
                if not rest:
                    break
            if rest:
                return False
        return True

    def equiv(self, other: "Region | Polyhedron") -> bool:
        other_r = other if isinstance(other, Region) else Region.from_polyhedron(other)
        return self.includes(other_r) and other_r.includes(self)

    def contains_point(self, point) -> bool:
        return any(p.contains_point(point) for p in self.disjuncts)

    def map(self, fn) -> "Region":
        return Region.of(self.signature, (fn(p) for p in self.disjuncts))

    def elapse_past(self) -> "Region":
        return self.map(Polyhedron.elapse_past)

    def elapse_future(self) -> "Region":
        return self.map(Polyhedron.elapse_future)

    def project_params(self) -> "Region":
        psig = self.signature.param_signature()
        return Region.of(psig, (p.project_params() for p in self.disjuncts))

    def complement(self) -> "Region":
        return Region.universe(self.signature).diff(self)

    def __str__(self) -> str:
        return format_region(self)


def _absorb(out: list[Polyhedron], p: Polyhedron) -> None:
    """Add ``p`` to a disjunct list, dropping subsumed pieces and merging neighbours."""
    if p.is_empty():
        return
    for q in out:
        if q.includes(p):
            return
    out[:] = [q for q in out if not p.includes(q)]
    while True:
        for i, q in enumerate(out):
            m = _merge_pair(q, p)
            if m is not None:
                del out[i]
                p = m
                out[:] = [r for r in out if not p.includes(r)]
                break
        else:
            break
    out.append(p)


# ---------------------------------------------------------------------------
# module-level API mirroring the operation names


def make(sig: Signature, constraints: Iterable[Constraint]) -> Polyhedron:
    return Polyhedron.make(sig, constraints)


def is_empty(p: Polyhedron | Region) -> bool:
    return p.is_empty()


def intersect(p: Polyhedron, q: Polyhedron) -> Polyhedron:
    return p.intersect(q)


def includes(p: Polyhedron, q: Polyhedron) -> bool:
    return p.includes(q)


def elapse_future(p: Polyhedron) -> Polyhedron:
    return p.elapse_future()


def elapse_past(p: Polyhedron) -> Polyhedron:
    return p.elapse_past()


def reset(p: Polyhedron, clocks: Iterable[str]) -> Polyhedron:
    return p.reset(clocks)


def free(p: Polyhedron, clocks: Iterable[str]) -> Polyhedron:
    return p.free(clocks)


def project_params(p: Polyhedron) -> Polyhedron:
    return p.project_params()


def complement(p: Polyhedron) -> Region:
    return p.complement()


def region_diff(a: Region, b: Region) -> Region:
    return a.diff(b)


def region_includes(a: Region, b: Region) -> bool:
    return a.includes(b)


def region_equiv(a: Region, b: Region) -> bool:
    return a.equiv(b)


def contains_point(p: Polyhedron | Region, point) -> bool:
    return p.contains_point(point)


def minimize(p: Polyhedron) -> Polyhedron:
    return Polyhedron._minimized(p.signature, p.constraints)


# ---------------------------------------------------------------------------
# printing


def _fmt_rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_terms(terms: list[tuple[str, Fraction]], const: Fraction) -> str:
    """Render ``sum(coef*name) + const``; ``terms`` carries signed coefficients."""
    out = []
    for name, a in terms:
        mag = abs(a)
        body = name if mag == 1 else f"{_fmt_rat(mag)}*{name}"
        if not out:
            out.append(body if a > 0 else f"-{body}")
        else:
            out.append(("+ " if a > 0 else "- ") + body)
    if const or not out:
        if not out:
            out.append(_fmt_rat(const))
        else:
            out.append(("+ " if const > 0 else "- ") + _fmt_rat(abs(const)))
    return " ".join(out)


def format_constraint(sig: Signature, c: Constraint, equality: bool = False) -> str:
    """Deterministic text for one atom, e.g. ``x - y <= 2*p1 + 1/3``.

    Clock terms (if any) go on the left; otherwise negatively weighted
    parameters go on the left of a ``<``/``<=``.
    """
    if is_trivial(c):
        return "true" if c.const >= 0 and not (c.strict and c.const == 0) else "false"
    names = sig.names
    nc = len(sig.clocks)
    coeffs = [Fraction(a) for a in c.coeffs]
    const = Fraction(c.const)
    clock_idx = [i for i in range(nc) if coeffs[i]]
    if clock_idx:
        flip = coeffs[clock_idx[0]] < 0
        # leading clock gets coefficient 1; flipped atoms render as <=
        sgn = Fraction(-1 if flip else 1, abs(coeffs[clock_idx[0]]))
        left = [(names[i], sgn * coeffs[i]) for i in clock_idx]
        right = [(names[i], -sgn * coeffs[i]) for i in range(nc, len(names)) if coeffs[i]]
        rconst = -sgn * const
        if equality:
            op = "="
        elif flip:
            op = "<" if c.strict else "<="
        else:
            op = ">" if c.strict else ">="
        return f"{_fmt_terms(left, Fraction(0))} {op} {_fmt_terms(right, rconst)}"
    neg = [(names[i], -coeffs[i]) for i in range(len(names)) if coeffs[i] < 0]
    pos = [(names[i], coeffs[i]) for i in range(len(names)) if coeffs[i] > 0]
    if not neg:
        op = "=" if equality else (">" if c.strict else ">=")
        return f"{_fmt_terms(pos, Fraction(0))} {op} {_fmt_rat(-const) if const else '0'}"
    op = "=" if equality else ("<" if c.strict else "<=")
    return f"{_fmt_terms(neg, Fraction(0))} {op} {_fmt_terms(pos, const)}"


def atoms(p: Polyhedron) -> list[str]:
    """Rendered atoms of a polyhedron; mirrored weak pairs collapse to ``=``."""
    if p.is_empty():
        return ["false"]
    sig = p.signature
    seen = set(p.constraints)
    out = []
    used = set()
    for c in p.constraints:
        if c in used:
            continue
        mirror = Constraint(tuple(-a for a in c.coeffs), -c.const, False)
        if not c.strict and mirror in seen and mirror not in used:
            # render the orientation whose first nonzero coefficient is negative
            first = next(a for a in c.coeffs if a)
            rep = c if first < 0 else mirror
            used.update((c, mirror))
            out.append(format_constraint(sig, rep, equality=True))
        else:
            used.add(c)
            out.append(format_constraint(sig, c))
    return sorted(out)


def format_polyhedron(p: Polyhedron) -> str:
    if p.is_universe():
        return "true"
    return " && ".join(atoms(p))


def format_region(r: Region) -> str:
    if r.is_empty():
        return "false"
    parts = sorted(format_polyhedron(p) for p in r.disjuncts)
    if "true" in parts:
        return "true"
    if len(parts) == 1:
        return parts[0]
    return " || ".join(f"({s})" for s in parts)
