"""Magnus elements of the linear tridendriform equations.

For a generator a, X solves X = 1 + a < X and X̄ solves X̄ = 1 + a ⪯ X̄.
Their star-logarithms Ω' = log*(X) and Ω̄' = log*(X̄) are computed here in
three ways:

* ``oracle_log``: expand log* of the fixed point directly (ground truth);
* ``prelie_magnus``: the Bernoulli recursion in the pre-Lie products ▷, ▷̲;
* ``closed_formula``: one coefficient per tree (or surjection), read off its
  descent count.

``discrete_mps`` realizes Ω = S(Ω') for a concrete matrix sequence.

The closed formula depends on four drawing conventions that cannot be read
off unambiguously; :func:`resolve_conventions` tries all sixteen
combinations and freezes the only one that passes every consistency check.
"""

from __future__ import annotations

import itertools
import json
import logging
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from pathlib import Path

import numpy as np

from . import seqalg, treekit, trialg, wqsurj
from .errors import DomainError, UnresolvedConventionError
from .rng import SplitMix64
from .trialg import SURJECTIONS, TREES, TriSeries

log = logging.getLogger(__name__)

SIGN_D = "d"
SIGN_COMPLEMENT = "complement"
SIGN_RULES = (SIGN_D, SIGN_COMPLEMENT)

STRICT, WEAK = "strict", "weak"
# which fixed-point flavor each closed-formula variant is meant to reproduce
VARIANT_FLAVOR = {STRICT: "prec", WEAK: "preceq"}

DEFAULT_LEDGER = "conventions.json"


# -- conventions ---------------------------------------------------------------

@dataclass(frozen=True)
class Conventions:
    descent_orientation: str = treekit.AS_PRINTED
    sign_rule: str = SIGN_COMPLEMENT
    t_order: str = seqalg.DIRECT
    level_orientation: str = wqsurj.ROOT_DEEPEST

    @classmethod
    def all_combinations(cls):
        for combo in itertools.product(treekit.ORIENTATIONS, SIGN_RULES,
                                       seqalg.T_ORDERS, wqsurj.LEVEL_ORIENTATIONS):
            yield cls(*combo)


@dataclass
class ConventionLedger:
    conventions: Conventions | None = None
    status: str = "unresolved"
    evidence: dict = field(default_factory=dict)

    @property
    def frozen(self) -> bool:
        return self.status == "frozen" and self.conventions is not None

    def require(self) -> Conventions:
        if not self.frozen:
            raise UnresolvedConventionError(
                f"conventions are unresolved; run `tridend magnus resolve` to write {DEFAULT_LEDGER}"
            )
        return self.conventions

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "conventions": asdict(self.conventions) if self.conventions else None,
            "evidence": self.evidence,
        }

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def from_dict(cls, data):
        conv = data.get("conventions")
        return cls(Conventions(**conv) if conv else None, data.get("status", "unresolved"),
                   data.get("evidence", {}))

    @classmethod
    def load(cls, path) -> "ConventionLedger":
        path = Path(path)
        if not path.exists():
            raise UnresolvedConventionError(
                f"ledger {path} not found; run `tridend magnus resolve --ledger {path}` first"
            )
        return cls.from_dict(json.loads(path.read_text()))


def _conventions(ledger) -> Conventions:
    if isinstance(ledger, Conventions):
        return ledger
    if ledger is None:
        raise UnresolvedConventionError(
            f"no convention ledger given; run `tridend magnus resolve` to write {DEFAULT_LEDGER}"
        )
    return ledger.require()


# -- Bernoulli numbers -------------------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """B_m with B_1 = -1/2, from sum_{k<=m} C(m+1, k) B_k = 0."""
    if m < 0:
        raise DomainError("m must be >= 0")
    if m == 0:
        return Fraction(1)
    return -sum(comb(m + 1, k) * bernoulli(k) for k in range(m)) / (m + 1)


# -- results -----------------------------------------------------------------

@dataclass
class MagnusResult:
    variant: str
    truncation: int
    payload: object

    def degree_part(self, n):
        return self.payload.degree_part(n)


# -- free-algebra computations -------------------------------------------------------

def _flavor_product(flavor):
    if flavor in ("prec", "<", "≺"):
        return trialg.prec
    if flavor in ("preceq", "⪯"):
        return trialg.preceq
    raise DomainError(f"unknown fixed-point flavor {flavor!r}")


def solve_fixed_point(flavor="prec", truncation=6, basis=TREES) -> TriSeries:
    """X = sum_n a^(n) with a^(n) = a op a^(n-1), op = < or ⪯."""
    op = _flavor_product(flavor)
    a = TriSeries.generator(basis, truncation)
    total = TriSeries.unit(basis, truncation)
    word = TriSeries.unit(basis, truncation)
    for _ in range(truncation):
        word = op(a, word)
        total = total + word
    return total


def oracle_log(flavor="prec", truncation=6, basis=TREES) -> MagnusResult:
    return MagnusResult(flavor, truncation, trialg.log_star(solve_fixed_point(flavor, truncation, basis)))


def prelie_magnus(flavor="rhd", truncation=6, basis=TREES) -> MagnusResult:
    """Solve Ω' = sum_m B_m/m! L^(m)_{Ω'▷}(a) degree by degree.

    ``levels[m][k]`` holds the degree-k part of L^(m)(a); it only involves
    parts of Ω' of degree < k, so each degree closes without iteration.
    """
    if flavor not in ("rhd", "urhd", "▷", "▷̲"):
        raise DomainError(f"prelie_magnus flavor must be rhd or urhd, got {flavor!r}")
    a = TriSeries.generator(basis, truncation)
    zero = TriSeries.zero(basis, truncation)
    omega = {1: a}
    levels = {0: {1: a}}
    for n in range(2, truncation + 1):
        part = zero
        for m in range(1, n):
            level = levels.setdefault(m, {})
            acc = zero
            for i in range(1, n - m + 1):
                inner = levels[m - 1].get(n - i)
                if inner is not None and omega.get(i) is not None:
                    acc = acc + trialg.prelie(omega[i], inner, flavor)
            level[n] = acc
            b = bernoulli(m)
            if b:
                part = part + acc * (b / factorial(m))
        omega[n] = part
    total = zero
    for part in omega.values():
        total = total + part
    return MagnusResult(flavor, truncation, total)


def closed_coefficient(n: int, d: int, sign_rule: str) -> Fraction:
    """(-1)^e / (n C(n-1, d)) with e = d or n-1-d."""
    if sign_rule == SIGN_D:
        e = d
    elif sign_rule == SIGN_COMPLEMENT:
        e = n - 1 - d
    else:
        raise DomainError(f"unknown sign rule {sign_rule!r}")
    return Fraction((-1) ** e, n * comb(n - 1, d))


def closed_formula(variant=STRICT, truncation=6, basis=TREES, ledger=None) -> MagnusResult:
    """Sum over basis elements of degree <= truncation weighted by descent counts."""
    conv = _conventions(ledger)
    if variant not in (STRICT, WEAK):
        raise DomainError(f"variant must be strict or weak, got {variant!r}")
    terms = {}
    for n in range(1, truncation + 1):
        for b in basis.elements(n):
            if basis is TREES:
                st = treekit.descent_stats(b, conv.descent_orientation)
            else:
                st = wqsurj.descents(b)
            d = st.strict if variant == STRICT else st.weak
            terms[b] = closed_coefficient(n, d, conv.sign_rule)
    return MagnusResult(variant, truncation, TriSeries(basis, terms, 0, truncation))


# -- sequence realization ------------------------------------------------------

def _descent_count(t, variant, conv):
    st = treekit.descent_stats(t, conv.descent_orientation)
    return st.strict if variant == STRICT else st.weak


def omega_prime_sequence(a: seqalg.MatSeq, truncation: int, variant=STRICT, ledger=None,
                         evaluator=None) -> seqalg.GradedSeq:
    """Ω'(a) in the sequence algebra via F_a on trees, grouped by Ψ-fibers.

    Fiber coefficients are constant because descents are Ψ-invariant, so the
    sum over surjections collapses to one tree evaluation per tree.
    """
    conv = _conventions(ledger)
    ev = evaluator or seqalg.SequenceEvaluator(a)
    parts = {}
    for n in range(1, truncation + 1):
        terms = {t: closed_coefficient(n, _descent_count(t, variant, conv), conv.sign_rule)
                 for t in treekit.enumerate_trees(n)}
        parts[n] = ev.series(terms)
    return seqalg.GradedSeq(a.dim, a.horizon, truncation, parts, 0)


def discrete_mps_sequence(a: seqalg.MatSeq, truncation: int, variant=STRICT,
                          ledger=None) -> seqalg.GradedSeq:
    """Ω(a)(N) for every N = 0..H at once (production path)."""
    return omega_prime_sequence(a, truncation, variant, ledger).summed()


def discrete_mps(a: seqalg.MatSeq, N: int, truncation: int, variant=STRICT, ledger=None,
                 path="fast") -> dict:
    """Degree -> matrix of the discrete Magnus element Ω(a)(N).

    ``path="fast"`` evaluates trees recursively; ``path="diagonal"`` sums
    a(s_1)...a(s_n) over every partial diagonal T_sigma(N), sigma in ST_n.
    """
    conv = _conventions(ledger)
    if N > a.horizon:
        raise seqalg.HorizonError(f"N={N} exceeds the horizon {a.horizon}")
    if path == "fast":
        graded = discrete_mps_sequence(a.prefix(N), truncation, variant, conv)
        return graded.at(N)
    if path == "diagonal":
        out = {}
        for n in range(1, truncation + 1):
            total = np.full((a.dim, a.dim), seqalg.ZERO, dtype=object)
            for sigma in wqsurj.enumerate_surjections(n):
                st = wqsurj.descents(sigma)
                d = st.strict if variant == STRICT else st.weak
                c = seqalg.to_mpq(closed_coefficient(n, d, conv.sign_rule))
                if N >= max(sigma):
                    total = total + c * seqalg.diagonal_sum(sigma, a, N, conv.t_order)
            out[n] = total
        return out
    raise DomainError(f"unknown path {path!r}")


def sequence_oracle(a: seqalg.MatSeq, truncation: int, flavor="prec") -> seqalg.GradedSeq:
    """S(log*(X)) computed entirely inside the sequence algebra."""
    x = seqalg.fixed_point_sequences(a, truncation, flavor)
    return seqalg.graded_log(x).summed()


# -- verification ------------------------------------------------------------------

@dataclass
class Report:
    name: str
    ok: bool = True
    checks: list = field(default_factory=list)
    counterexample: object = None

    def record(self, label, passed, detail=None):
        self.checks.append((label, bool(passed)))
        if not passed and self.ok:
            self.ok = False
            self.counterexample = (label, detail)
        return passed

    def __bool__(self):
        return self.ok


def exp_check(a: seqalg.MatSeq, N: int, truncation: int, ledger=None) -> Report:
    """exp*(Ω') reproduces X and X̄ for trees, surjections and sequences."""
    conv = _conventions(ledger)
    rep = Report("exp_check")
    for basis in (TREES, SURJECTIONS):
        for variant, flavor in VARIANT_FLAVOR.items():
            omega = closed_formula(variant, truncation, basis, conv).payload
            x = solve_fixed_point(flavor, truncation, basis)
            rep.record(f"{basis.name}/{variant}", trialg.exp_star(omega) == x)
    a = a.prefix(N)
    for variant, flavor in VARIANT_FLAVOR.items():
        omega = omega_prime_sequence(a, truncation, variant, conv)
        x = seqalg.fixed_point_sequences(a, truncation, flavor)
        got = seqalg.graded_exp(omega)
        ok = all(got[n] == x[n] for n in range(1, truncation + 1)) and got.scalar == 1
        rep.record(f"sequences/{variant}", ok)
    return rep


def _tree_pairs(max_total):
    for ds in range(1, max_total):
        for dt in range(1, max_total - ds + 1):
            for s in treekit.enumerate_trees(ds):
                for t in treekit.enumerate_trees(dt):
                    yield s, t


def check_psi_morphism(max_total: int, orientation=wqsurj.ROOT_DEEPEST) -> Report:
    rep = Report(f"psi_star morphism, total degree <= {max_total}")
    for s, t in _tree_pairs(max_total):
        xs = TriSeries.basis_element(TREES, s, truncation=max_total)
        xt = TriSeries.basis_element(TREES, t, truncation=max_total)
        ps = trialg.psi_star_series(xs, orientation)
        pt = trialg.psi_star_series(xt, orientation)
        for op in (trialg.prec, trialg.succ, trialg.dot):
            lhs = trialg.psi_star_series(op(xs, xt), orientation)
            if not rep.record((s, t, op.__name__), lhs == op(ps, pt)):
                return rep
    return rep


def check_descent_preservation(max_n: int, orientation=wqsurj.ROOT_DEEPEST,
                               descent_orientation=treekit.AS_PRINTED) -> Report:
    rep = Report(f"descent preservation, n <= {max_n}")
    for n in range(1, max_n + 1):
        for f in wqsurj.enumerate_surjections(n):
            t = wqsurj.forget_levels(f, orientation)
            ds = wqsurj.descents(f)
            dt = treekit.descent_stats(t, descent_orientation)
            if not rep.record(f, ds.strict == dt.strict and ds.weak == dt.weak, (ds, dt)):
                return rep
    return rep


def check_fiber_factorization(a: seqalg.MatSeq, max_degree: int, order=seqalg.DIRECT,
                        orientation=wqsurj.ROOT_DEEPEST) -> Report:
    """F_a(t) equals F~_a(psi_star(t)) for every tree of degree <= max_degree."""
    rep = Report(f"F_a = F~_a o psi_star, degree <= {max_degree}")
    ev = seqalg.SequenceEvaluator(a)
    for n in range(1, max_degree + 1):
        for t in treekit.enumerate_trees(n):
            rhs = seqalg.f_tilde(wqsurj.psi_star(t, orientation), a, order)
            if not rep.record(t, ev(t) == rhs):
                return rep
    return rep


def check_closed_vs_oracle(conv: Conventions, max_degree: int) -> Report:
    rep = Report(f"closed formula vs log*, degree <= {max_degree}")
    for variant, flavor in VARIANT_FLAVOR.items():
        closed = closed_formula(variant, max_degree, TREES, conv).payload
        oracle = oracle_log(flavor, max_degree, TREES).payload
        rep.record(variant, closed == oracle, (closed - oracle))
    return rep


def resolve_conventions(degrees=(2, 3), seed=0) -> ConventionLedger:
    """Try all 16 flag combinations and freeze the single one that passes.

    Per combination: (i) closed formulas equal log* of X and X̄ in the tree
    basis, (ii) psi_star is a morphism, (iii) descents are preserved by Ψ,
    (iv) F_a = F~_a o psi_star on a seeded random 2x2 sequence.
    """
    top = max(degrees)
    a = seqalg.MatSeq.random(SplitMix64(seed), horizon=top + 2, dim=2)
    cache = {}

    def cached(key, fn):
        if key not in cache:
            cache[key] = bool(fn())
        return cache[key]

    passing, table = [], {}
    for conv in Conventions.all_combinations():
        checks = {
            "closed_formula": cached(("i", conv.descent_orientation, conv.sign_rule),
                                     lambda: check_closed_vs_oracle(conv, top)),
            "psi_morphism": cached(("ii", conv.level_orientation),
                                   lambda: check_psi_morphism(top, conv.level_orientation)),
            "descent_preservation": cached(
                ("iii", conv.level_orientation, conv.descent_orientation),
                lambda: check_descent_preservation(top, conv.level_orientation,
                                                   conv.descent_orientation)),
            "fiber_factorization": cached(("iv", conv.level_orientation, conv.t_order),
                                    lambda: check_fiber_factorization(a, top, conv.t_order,
                                                                conv.level_orientation)),
        }
        label = "/".join(asdict(conv).values())
        table[label] = checks
        if all(checks.values()):
            passing.append(conv)
    evidence = {"degrees": list(degrees), "seed": seed, "combinations": table,
                "passing": len(passing)}
    if len(passing) != 1:
        raise RuntimeError(
            f"convention resolution found {len(passing)} passing combinations; expected exactly 1"
        )
    log.info("conventions frozen: %s", passing[0])
    return ConventionLedger(passing[0], "frozen", evidence)
