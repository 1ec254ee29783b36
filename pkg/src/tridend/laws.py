"""Identities every tridendriform algebra must satisfy, as executable checks.

Each check takes a :class:`~tridend.trialg.TriTarget` (so it works for tree
series, WQSym series and matrix sequences alike) and returns ``True`` or
``False``. Random samplers for the three concrete algebras live here too.
"""

from __future__ import annotations

from . import seqalg, trialg
from .rng import SplitMix64
from .trialg import SURJECTIONS, TREES, TriSeries, TriTarget


class Ops:
    """Derived products of a tridendriform algebra given by a TriTarget."""

    def __init__(self, target: TriTarget):
        self.t = target

    def prec(self, x, y):
        return self.t.prec(x, y)

    def succ(self, x, y):
        return self.t.succ(x, y)

    def dot(self, x, y):
        return self.t.dot(x, y)

    def star(self, x, y):
        return self.prec(x, y) + self.succ(x, y) + self.dot(x, y)

    def preceq(self, x, y):
        return self.prec(x, y) + self.dot(x, y)

    def succeq(self, x, y):
        return self.succ(x, y) + self.dot(x, y)

    def rhd(self, x, y):
        return self.succeq(x, y) - self.prec(y, x)

    def lhd(self, x, y):
        return self.prec(x, y) - self.succeq(y, x)

    def urhd(self, x, y):
        return self.succ(x, y) - self.preceq(y, x)

    def ulhd(self, x, y):
        return self.preceq(x, y) - self.succ(y, x)

    def diamond(self, x, y):
        return self.succ(x, y) - self.prec(y, x)

    def bracket(self, x, y):
        return self.dot(x, y) - self.dot(y, x)

    def commutator(self, op, x, y):
        return op(x, y) - op(y, x)


def tridendriform_axioms(o: Ops, a, b, c) -> dict:
    """The seven axioms, with the third read as (a*b) > c."""
    return {
        "A1": o.prec(o.prec(a, b), c) == o.prec(a, o.star(b, c)),
        "A2": o.prec(o.succ(a, b), c) == o.succ(a, o.prec(b, c)),
        "A3": o.succ(a, o.succ(b, c)) == o.succ(o.star(a, b), c),
        "A4": o.dot(o.dot(a, b), c) == o.dot(a, o.dot(b, c)),
        "A5": o.dot(o.succ(a, b), c) == o.succ(a, o.dot(b, c)),
        "A6": o.dot(o.prec(a, b), c) == o.dot(a, o.succ(b, c)),
        "A7": o.prec(o.dot(a, b), c) == o.dot(a, o.prec(b, c)),
        "star_assoc": o.star(o.star(a, b), c) == o.star(a, o.star(b, c)),
    }


def _left_prelie(op, a, b, c):
    # (a,b,c) - (b,a,c) for the associator of op
    assoc_abc = op(op(a, b), c) - op(a, op(b, c))
    assoc_bac = op(op(b, a), c) - op(b, op(a, c))
    return assoc_abc == assoc_bac


def _right_prelie(op, a, b, c):
    assoc_abc = op(op(a, b), c) - op(a, op(b, c))
    assoc_acb = op(op(a, c), b) - op(a, op(c, b))
    return assoc_abc == assoc_acb


def _is_zero(x):
    return x == x - x


def lie_identities(o: Ops, a, b, c) -> dict:
    """Pre-Lie, post-Lie, bracket coincidence and the operator splittings."""
    br, dm = o.bracket, o.diamond
    return {
        "prelie_rhd": _left_prelie(o.rhd, a, b, c) and _left_prelie(o.rhd, b, c, a),
        "prelie_urhd": _left_prelie(o.urhd, a, b, c) and _left_prelie(o.urhd, c, a, b),
        "prelie_lhd": _right_prelie(o.lhd, a, b, c) and _right_prelie(o.lhd, b, c, a),
        "prelie_ulhd": _right_prelie(o.ulhd, a, b, c) and _right_prelie(o.ulhd, c, a, b),
        # a acts as a derivation of the bracket
        "postlie_derivation": dm(a, br(b, c)) == br(dm(a, b), c) + br(b, dm(a, c)),
        "postlie_bracket": dm(br(a, b), c) == (dm(a, dm(b, c)) - dm(dm(a, b), c)
                                               - dm(b, dm(a, c)) + dm(dm(b, a), c)),
        "bracket_jacobi": _is_zero(br(a, br(b, c)) + br(b, br(c, a)) + br(c, br(a, b))),
        "lie_brackets_coincide": (o.commutator(o.star, a, b) == o.commutator(o.rhd, a, b)
                                  and o.commutator(o.rhd, a, b) == o.commutator(o.urhd, a, b)),
        "split_rhd": o.rhd(a, b) == dm(a, b) + o.dot(a, b),
        "split_urhd": o.urhd(a, b) == dm(a, b) - o.dot(b, a),
        "left_succ_action": o.succ(a, o.succ(b, c)) == o.succ(o.star(a, b), c),
        "dendriform_halves": (o.preceq(a, b) + o.succ(a, b) == o.star(a, b)
                              and o.prec(a, b) + o.succeq(a, b) == o.star(a, b)),
    }


# -- samplers ---------------------------------------------------------------------

def _split_degrees(rng: SplitMix64, cap: int, total: int):
    while True:
        ds = [rng.randint(1, cap) for _ in range(3)]
        if sum(ds) <= total:
            return ds


def random_series(rng: SplitMix64, basis, max_degree: int, truncation: int, n_terms=2):
    """Unit-free series with up to ``n_terms`` basis elements of degree <= max_degree."""
    terms = {}
    for _ in range(n_terms):
        d = rng.randint(1, max_degree)
        pool = basis.elements(d)
        c = rng.fraction()
        if c:
            b = rng.choice(pool)
            terms[b] = terms.get(b, 0) + c
    if not any(terms.values()):
        terms = {rng.choice(basis.elements(1)): 1}
    return TriSeries(basis, terms, 0, truncation)


def random_triples(kind: str, count: int, seed: int, cap: int = 4, total: int = 6,
                   horizon: int = 7, dim: int = 2):
    """``count`` seeded unit-free triples in ``trees``, ``surjections`` or ``sequences``."""
    rng = SplitMix64(seed)
    out = []
    for _ in range(count):
        if kind == "sequences":
            out.append(tuple(seqalg.MatSeq.random(rng, horizon, dim) for _ in range(3)))
            continue
        basis = {"trees": TREES, "surjections": SURJECTIONS}[kind]
        ds = _split_degrees(rng, cap, total)
        out.append(tuple(random_series(rng, basis, d, total) for d in ds))
    return out


def target_for(kind: str, truncation: int = 6, horizon: int = 7, dim: int = 2) -> TriTarget:
    if kind == "sequences":
        return seqalg.sequence_target(dim, horizon)
    basis = {"trees": TREES, "surjections": SURJECTIONS}[kind]
    return trialg.series_target(basis, truncation)


ALGEBRAS = ("trees", "surjections", "sequences")
