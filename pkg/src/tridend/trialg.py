"""Graded tridendriform series over the tree and surjection bases.

:class:`TriSeries` is a truncated linear combination of basis elements with
exact rational coefficients, plus a separate scalar slot for the adjoined
unit. The unit never appears as a basis element, which keeps the undefined
products ``1<1``, ``1>1`` and ``1.1`` detectable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Any, Callable

from . import treekit, wqsurj
from .errors import DomainError, UndefinedOperationError
from .treekit import LEAF, Tree, _node

PREC, SUCC, DOT = "prec", "succ", "dot"


# -- bases ---------------------------------------------------------------------

class Basis:
    """Basis-level structure: grading, text codec and the three products."""

    name = "abstract"

    def degree(self, b) -> int:
        raise NotImplementedError

    def product(self, b, c, op) -> dict:
        raise NotImplementedError

    def encode(self, b) -> str:
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def sort_key(self, b):
        return (self.degree(b), self.encode(b))

    def generator(self):
        raise NotImplementedError

    def elements(self, n: int) -> list:
        raise NotImplementedError

    def __repr__(self):
        return f"<{self.name} basis>"


def _add_into(out, items, scale=1):
    for k, v in items:
        out[k] = out.get(k, 0) + scale * v


@lru_cache(maxsize=None)
def _tree_star(s, t) -> tuple:
    if not s:
        return ((t, 1),)
    if not t:
        return ((s, 1),)
    out = {}
    for op in (PREC, SUCC, DOT):
        _add_into(out, _tree_product(s, t, op))
    return tuple(sorted(out.items()))


@lru_cache(maxsize=None)
def _tree_product(s, t, op) -> tuple:
    # s < t = V(s_1..s_{n-1}, s_n * t)
    # s > t = V(s * t_1, t_2..t_p)
    # s . t = V(s_1..s_{n-1}, s_n * t_1, t_2..t_p)
    out = {}
    if op == PREC:
        head = tuple(s[:-1])
        for w, m in _tree_star(s[-1], t):
            _add_into(out, [(_node(head + (w,)), m)])
    elif op == SUCC:
        tail = tuple(t[1:])
        for w, m in _tree_star(s, t[0]):
            _add_into(out, [(_node((w,) + tail), m)])
    elif op == DOT:
        head, tail = tuple(s[:-1]), tuple(t[1:])
        for w, m in _tree_star(s[-1], t[0]):
            _add_into(out, [(_node(head + (w,) + tail), m)])
    else:
        raise DomainError(f"unknown product {op!r}")
    return tuple(out.items())


class TreeBasis(Basis):
    """Planar reduced trees other than the leaf (the free algebra on one generator)."""

    name = "trees"

    def degree(self, b):
        return treekit.degree(b)

    def product(self, b, c, op):
        return dict(_tree_product(b, c, op))

    def encode(self, b):
        return treekit.encode(b)

    def parse(self, text):
        t = treekit.parse(text)
        if not t:
            raise DomainError("the leaf is the unit, not a basis element")
        return t

    def generator(self):
        return treekit.Y

    def elements(self, n):
        return treekit.enumerate_trees(n)


class SurjectionBasis(Basis):
    """Surjections, the basis of WQSym."""

    name = "surjections"

    def degree(self, b):
        return len(b)

    def product(self, b, c, op):
        return wqsurj.wq_product(b, c, op)

    def encode(self, b):
        return wqsurj.encode(b)

    def parse(self, text):
        return wqsurj.parse(text)

    def sort_key(self, b):
        return (len(b), tuple(b))

    def generator(self):
        return wqsurj.Surjection((1,))

    def elements(self, n):
        return wqsurj.enumerate_surjections(n)


TREES = TreeBasis()
SURJECTIONS = SurjectionBasis()
BASES = {"trees": TREES, "surjections": SURJECTIONS}


# -- series --------------------------------------------------------------------

class TriSeries:
    """Truncated element of the unital tridendriform algebra over ``basis``.

    Treat instances as immutable; every operation returns a new series.
    """

    __slots__ = ("basis", "terms", "scalar", "truncation")

    def __init__(self, basis: Basis, terms=None, scalar=0, truncation: int = 8):
        self.basis = basis
        self.truncation = int(truncation)
        self.scalar = Fraction(scalar)
        clean = {}
        for b, c in (terms or {}).items():
            c = Fraction(c)
            if c == 0:
                continue
            d = basis.degree(b)
            if d < 1:
                raise DomainError(f"basis element {b!r} has degree {d} < 1")
            if d <= self.truncation:
                clean[b] = c
        self.terms = clean

    # construction helpers
    @classmethod
    def basis_element(cls, basis, b, coeff=1, truncation=8):
        return cls(basis, {b: coeff}, 0, truncation)

    @classmethod
    def unit(cls, basis, truncation=8):
        return cls(basis, {}, 1, truncation)

    @classmethod
    def zero(cls, basis, truncation=8):
        return cls(basis, {}, 0, truncation)

    @classmethod
    def generator(cls, basis, truncation=8):
        return cls(basis, {basis.generator(): 1}, 0, truncation)

    def _like(self, terms, scalar=0, truncation=None):
        return TriSeries(self.basis, terms, scalar,
                         self.truncation if truncation is None else truncation)

    # inspection
    def is_unit_free(self) -> bool:
        return self.scalar == 0

    def degree_part(self, n: int) -> "TriSeries":
        if n == 0:
            return self._like({}, self.scalar)
        return self._like({b: c for b, c in self.terms.items() if self.basis.degree(b) == n})

    def truncate(self, n: int) -> "TriSeries":
        return self._like(self.terms, self.scalar, min(n, self.truncation))

    def max_degree(self) -> int:
        return max((self.basis.degree(b) for b in self.terms), default=0)

    def min_degree(self) -> int:
        if self.scalar:
            return 0
        return min((self.basis.degree(b) for b in self.terms), default=self.truncation + 1)

    def items(self):
        """Terms in canonical order (degree, then encoding)."""
        return sorted(self.terms.items(), key=lambda kv: self.basis.sort_key(kv[0]))

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, b):
        return self.terms.get(b, Fraction(0))

    # linear structure
    def _check(self, other):
        if not isinstance(other, TriSeries):
            return NotImplemented
        if other.basis is not self.basis:
            raise DomainError(f"cannot combine {self.basis.name} and {other.basis.name} series")
        return min(self.truncation, other.truncation)

    def __add__(self, other):
        trunc = self._check(other)
        if trunc is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for b, c in other.terms.items():
            terms[b] = terms.get(b, 0) + c
        return self._like(terms, self.scalar + other.scalar, trunc)

    def __neg__(self):
        return self._like({b: -c for b, c in self.terms.items()}, -self.scalar)

    def __sub__(self, other):
        if not isinstance(other, TriSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, k):
        if isinstance(k, TriSeries):
            return NotImplemented
        k = Fraction(k)
        return self._like({b: k * c for b, c in self.terms.items()}, k * self.scalar)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return self * (1 / Fraction(k))

    def __eq__(self, other):
        if not isinstance(other, TriSeries):
            return NotImplemented
        return (self.basis is other.basis and self.scalar == other.scalar
                and self.terms == other.terms)

    def equal_up_to(self, other, degree: int) -> bool:
        return self.truncate(degree) == other.truncate(degree)

    __hash__ = None

    def __repr__(self):
        return f"TriSeries({self.basis.name}, {format_series(self)}, trunc={self.truncation})"

    # products as methods
    def prec(self, other):
        return prec(self, other)

    def succ(self, other):
        return succ(self, other)

    def dot(self, other):
        return dot(self, other)

    def star(self, other):
        return star(self, other)

    # serialization
    def to_dict(self) -> dict:
        return {
            "basis": self.basis.name,
            "scalar": fraction_text(self.scalar),
            "truncation": self.truncation,
            "terms": {self.basis.encode(b): fraction_text(c) for b, c in self.items()},
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "TriSeries":
        basis = BASES[data.get("basis", "trees")]
        terms = {basis.parse(k): Fraction(v) for k, v in data.get("terms", {}).items()}
        return cls(basis, terms, Fraction(data.get("scalar", "0")), int(data["truncation"]))

    @classmethod
    def from_json(cls, text: str) -> "TriSeries":
        return cls.from_dict(json.loads(text))


def fraction_text(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_series(x: TriSeries) -> str:
    parts = []
    if x.scalar:
        parts.append(fraction_text(x.scalar) + "*1")
    for b, c in x.items():
        parts.append(f"{fraction_text(c)}*{x.basis.encode(b)}")
    return " + ".join(parts) if parts else "0"


# -- products ------------------------------------------------------------------

def _bilinear(x, y, op, trunc):
    basis = x.basis
    deg = basis.degree
    out = {}
    ys = [(c, cc, deg(c)) for c, cc in y.terms.items()]
    for b, cb in x.terms.items():
        db = deg(b)
        for c, cc, dc in ys:
            if db + dc > trunc:
                continue
            k = cb * cc
            for w, m in basis.product(b, c, op).items():
                out[w] = out.get(w, 0) + k * m
    return out


def _product(x: TriSeries, y: TriSeries, op: str) -> TriSeries:
    trunc = x._check(y)
    if trunc is NotImplemented:
        raise TypeError("tridendriform products need two TriSeries")
    if x.scalar and y.scalar:
        raise UndefinedOperationError(f"1 {op} 1 is not defined")
    out = _bilinear(x, y, op, trunc)
    # a < 1 = a = 1 > a; 1 < a = a > 1 = 1.a = a.1 = 0
    if op == PREC and y.scalar:
        _add_into(out, x.terms.items(), y.scalar)
    elif op == SUCC and x.scalar:
        _add_into(out, y.terms.items(), x.scalar)
    return x._like(out, 0, trunc)


def prec(x, y):
    return _product(x, y, PREC)


def succ(x, y):
    return _product(x, y, SUCC)


def dot(x, y):
    return _product(x, y, DOT)


def preceq(x, y):
    """x ⪯ y = x < y + x . y"""
    return prec(x, y) + dot(x, y)


def succeq(x, y):
    """x ≽ y = x > y + x . y"""
    return succ(x, y) + dot(x, y)


def star(x: TriSeries, y: TriSeries) -> TriSeries:
    """Associative product a*b = a<b + a>b + a.b, with 1 as two-sided unit."""
    trunc = x._check(y)
    if trunc is NotImplemented:
        raise TypeError("star needs two TriSeries")
    out = {}
    for op in (PREC, SUCC, DOT):
        _add_into(out, _bilinear(x, y, op, trunc).items())
    if y.scalar:
        _add_into(out, x.terms.items(), y.scalar)
    if x.scalar:
        _add_into(out, y.terms.items(), x.scalar)
    return x._like(out, x.scalar * y.scalar, trunc)


_PRELIE = {
    "rhd": "rhd", "▷": "rhd",
    "lhd": "lhd", "◁": "lhd",
    "urhd": "urhd", "▷̲": "urhd",
    "ulhd": "ulhd", "◁̲": "ulhd",
}


def prelie(x, y, flavor="rhd"):
    """Pre-Lie products built from the two dendriform halves.

    ``rhd``:  x ≽ y - y < x   (left pre-Lie)
    ``lhd``:  x < y - y ≽ x   (right pre-Lie)
    ``urhd``: x > y - y ⪯ x   (left pre-Lie)
    ``ulhd``: x ⪯ y - y > x   (right pre-Lie)
    """
    try:
        flavor = _PRELIE[flavor]
    except KeyError:
        raise DomainError(f"unknown pre-Lie flavor {flavor!r}") from None
    if x.scalar or y.scalar:
        raise DomainError("pre-Lie products are defined on unit-free elements only")
    if flavor == "rhd":
        return succeq(x, y) - prec(y, x)
    if flavor == "lhd":
        return prec(x, y) - succeq(y, x)
    if flavor == "urhd":
        return succ(x, y) - preceq(y, x)
    return preceq(x, y) - succ(y, x)


def postlie_diamond(x, y):
    """x ⋄ y = x > y - y < x"""
    if x.scalar or y.scalar:
        raise DomainError("the post-Lie product is defined on unit-free elements only")
    return succ(x, y) - prec(y, x)


def dot_bracket(x, y):
    """[x, y]. = x.y - y.x"""
    return dot(x, y) - dot(y, x)


def star_bracket(x, y):
    return star(x, y) - star(y, x)


# -- exp / log ---------------------------------------------------------------

def star_power(x, k):
    out = TriSeries.unit(x.basis, x.truncation)
    for _ in range(k):
        out = star(out, x)
    return out


def exp_star(x: TriSeries) -> TriSeries:
    """sum_k x^{*k}/k!, truncated; x must have zero scalar part."""
    if x.scalar:
        raise DomainError("exp_star needs a series with zero scalar part")
    total = TriSeries.unit(x.basis, x.truncation)
    power = TriSeries.unit(x.basis, x.truncation)
    for k in range(1, x.truncation + 1):
        power = star(power, x)
        if not power.terms:
            break
        total = total + power * Fraction(1, factorial(k))
    return total


def log_star(x: TriSeries) -> TriSeries:
    """-sum_k (-1)^k (x-1)^{*k}/k, truncated; x must have scalar part 1."""
    if x.scalar != 1:
        raise DomainError(f"log_star needs scalar part 1, got {x.scalar}")
    y = x - TriSeries.unit(x.basis, x.truncation)
    total = TriSeries.zero(x.basis, x.truncation)
    power = TriSeries.unit(x.basis, x.truncation)
    for k in range(1, x.truncation + 1):
        power = star(power, y)
        if not power.terms:
            break
        total = total + power * Fraction((-1) ** (k + 1), k)
    return total


def tridendriform_word(x: TriSeries, n: int, side="prec") -> TriSeries:
    """x^(n)_< = x < x^(n-1)_<  or  x^(n)_> = x^(n-1)_> > x, with x^(0) = 1."""
    if x.scalar:
        raise DomainError("tridendriform words need a unit-free element")
    if n < 0:
        raise DomainError("n must be >= 0")
    side = {"<": PREC, ">": SUCC}.get(side, side)
    w = TriSeries.unit(x.basis, x.truncation)
    for _ in range(n):
        if side == PREC:
            w = prec(x, w)
        elif side == SUCC:
            w = succ(w, x)
        else:
            raise DomainError(f"side must be prec or succ, got {side!r}")
    return w


# -- free-algebra maps -------------------------------------------------------

def _check_binary(t, side):
    if not t or not treekit.is_binary(t):
        raise DomainError("expected a planar binary tree other than the leaf")
    side = side.upper()
    if side not in ("L", "R"):
        raise DomainError(f"side must be L or R, got {side!r}")
    return side


def f_lr(t: Tree, side: str, truncation=None) -> TriSeries:
    """F_L(t) or F_R(t): the trees reached by shrinking one class of inner edges.

    F_L shrinks edges pointing up to the right, F_R edges pointing up to the
    left. Agrees with :func:`dendriform_morphism` on every binary tree.
    """
    side = _check_binary(t, side)
    kind = "right" if side == "L" else "left"
    terms = {s: 1 for s in treekit.contract_by_kind(t, [kind])}
    return TriSeries(TREES, terms, 0, treekit.degree(t) if truncation is None else truncation)


def descent_filter(t: Tree, side: str, orientation: str = treekit.AS_PRINTED,
                   truncation=None) -> TriSeries:
    """Sum of t' <= t with weak(t') == strict(t) (side L) or strict(t') == strict(t) (R).

    Matches :func:`f_lr` up to degree 2 only; from degree 3 on it also picks
    up trees produced by shrinking edges of the other class.
    """
    side = _check_binary(t, side)
    target = treekit.descent_stats(t, orientation).strict
    terms = {}
    for s in treekit.contraction_closure(t):
        st = treekit.descent_stats(s, orientation)
        if (st.weak if side == "L" else st.strict) == target:
            terms[s] = 1
    return TriSeries(TREES, terms, 0, treekit.degree(t) if truncation is None else truncation)


def dendriform_morphism(t: Tree, side: str, truncation=None) -> TriSeries:
    """The dendriform map from binary trees to A_L or A_R, computed recursively.

    F_L(t1 v t2) = F_L(t1) > Y ⪯ F_L(t2);  F_R(t1 v t2) = F_R(t1) ≽ Y < F_R(t2).
    """
    side = _check_binary(t, side)
    trunc = treekit.degree(t) if truncation is None else truncation
    y = TriSeries.generator(TREES, trunc)
    unit = TriSeries.unit(TREES, trunc)
    left_op = succ if side == "L" else succeq
    right_op = preceq if side == "L" else prec

    def rec(s):
        if not s:
            return unit
        left, right = rec(s[0]), rec(s[1])
        mid = left_op(left, y) if left.terms else y
        return right_op(mid, right) if right.terms else mid

    return rec(t)


@dataclass(frozen=True)
class TriTarget:
    """A tridendriform algebra given by its operations.

    ``unit`` is optional; when absent, the leaf is handled through the unital
    rules only (``1 > a = a``, ``a < 1 = a``), which is all the recursion
    for the morphism needs.
    """

    name: str
    prec: Callable[[Any, Any], Any]
    succ: Callable[[Any, Any], Any]
    dot: Callable[[Any, Any], Any]
    add: Callable[[Any, Any], Any]
    scale: Callable[[Any, Any], Any]
    zero: Callable[[], Any]
    unit: Any = None


_UNIT = object()


def eval_morphism(x, target: TriTarget, generator):
    """Image of x (a tree or a tree series) under the morphism with Y -> generator.

    F(V(t_1..t_n)) = (F(t_1) > a) . ... . (F(t_{n-2}) > a) . (F(t_{n-1}) > a < F(t_n))
    """
    memo = {}

    def succ_a(u):
        return generator if u is _UNIT else target.succ(u, generator)

    def rec(t):
        if not t:
            return _UNIT
        got = memo.get(t)
        if got is not None:
            return got
        imgs = [rec(c) for c in t]
        last = succ_a(imgs[-2])
        if imgs[-1] is not _UNIT:
            last = target.prec(last, imgs[-1])
        acc = last
        for u in reversed(imgs[:-2]):
            acc = target.dot(succ_a(u), acc)
        memo[t] = acc
        return acc

    if isinstance(x, Tree):
        if not x:
            if target.unit is None:
                raise DomainError(f"target {target.name} has no unit for the leaf")
            return target.unit
        return rec(x)
    if x.basis is not TREES:
        raise DomainError("eval_morphism expects a series in the tree basis")
    total = target.zero()
    for t, c in x.items():
        total = target.add(total, target.scale(c, rec(t)))
    if x.scalar:
        if target.unit is None:
            raise DomainError(f"target {target.name} has no unit")
        total = target.add(total, target.scale(x.scalar, target.unit))
    return total


def series_target(basis: Basis, truncation: int) -> TriTarget:
    """The tree or surjection algebra itself, as a morphism target."""
    return TriTarget(
        name=basis.name,
        prec=prec, succ=succ, dot=dot,
        add=lambda u, v: u + v,
        scale=lambda c, u: u * c,
        zero=lambda: TriSeries.zero(basis, truncation),
        unit=TriSeries.unit(basis, truncation),
    )


def psi_star_series(x: TriSeries, orientation: str = wqsurj.ROOT_DEEPEST) -> TriSeries:
    """Linear extension of psi_star from the tree basis to WQSym."""
    if x.basis is not TREES:
        raise DomainError("psi_star applies to tree-basis series")
    out = {}
    for t, c in x.terms.items():
        for f in wqsurj.fiber(t, orientation):
            out[f] = out.get(f, 0) + c
    return TriSeries(SURJECTIONS, out, x.scalar, x.truncation)
