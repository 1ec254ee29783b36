"""The verification battery behind ``tridend verify suite``.

Every check returns a :class:`~tridend.magnus.Report`; a failing report
carries the first counterexample found, which is enough to replay it.
Checks run in a fixed order and all randomness flows from one seed.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from . import laws, magnus, seqalg, treekit, trialg, wqsurj
from .magnus import Report
from .rng import SplitMix64
from .trialg import SURJECTIONS, TREES, TriSeries


def schroeder_counts(n_max: int) -> list:
    """Little Schroeder numbers by their three-term recurrence."""
    s = [1, 1]
    for n in range(2, n_max + 1):
        s.append(((6 * n - 3) * s[n - 1] - (n - 2) * s[n - 2]) // (n + 1))
    return s[: n_max + 1]


def fubini_counts(n_max: int) -> list:
    """Ordered Bell numbers: a(n) = sum_k C(n, k) a(n - k)."""
    a = [1]
    for n in range(1, n_max + 1):
        a.append(sum(comb(n, k) * a[n - k] for k in range(1, n + 1)))
    return a


# -- trees ----------------------------------------------------------------------

def check_tree_counts(max_degree):
    rep = Report(f"tree counts, degree <= {max_degree}")
    want = schroeder_counts(max_degree)
    for n in range(max_degree + 1):
        got = len(treekit.enumerate_trees(n))
        rep.record(n, got == want[n], (got, want[n]))
    return rep


def check_tree_codec(max_degree):
    rep = Report("tree encode/parse round trip, sorted enumeration")
    for n in range(max_degree + 1):
        trees = treekit.enumerate_trees(n)
        codes = [treekit.encode(t) for t in trees]
        rep.record(("sorted", n), codes == sorted(set(codes)))
        for t, code in zip(trees, codes):
            if not rep.record(code, treekit.parse(code) == t):
                return rep
    return rep


def check_descent_bounds(max_degree):
    rep = Report("strict <= weak <= degree - 1, mirror involution")
    for n in range(1, max_degree + 1):
        for t in treekit.enumerate_trees(n):
            st = treekit.descent_stats(t)
            ok = st.strict <= st.weak <= n - 1 and treekit.mirror(treekit.mirror(t)) == t
            if not rep.record(treekit.encode(t), ok, st):
                return rep
    return rep


def check_contraction(max_degree):
    rep = Report("contraction closure: degree, transitivity, edge rule")
    for n in range(1, max_degree + 1):
        for t in treekit.enumerate_trees(n):
            code = treekit.encode(t)
            closure = treekit.contraction_closure(t)
            ok = all(treekit.degree(s) == n and treekit.contraction_closure(s) <= closure
                     for s in closure)
            if not rep.record(("closure", code), ok):
                return rep
            for e in treekit.inner_edges(t):
                after = treekit.descent_stats(treekit.contract_edge(t, e))._asdict()
                pred = treekit.contraction_descent_rule(t, e)
                if not rep.record(("edge", code, e), all(after[k] == v for k, v in pred.items()),
                                  (pred, after)):
                    return rep
    return rep


def check_f_lr(max_degree):
    rep = Report("F_L, F_R by edge shrinking equal the dendriform morphisms")
    for n in range(1, max_degree + 1):
        for t in treekit.binary_trees(n):
            for side in "LR":
                ok = trialg.f_lr(t, side) == trialg.dendriform_morphism(t, side)
                if not rep.record((treekit.encode(t), side), ok):
                    return rep
    return rep


def check_grafting(max_degree):
    rep = Report("V(t1, t2) = t1 > Y < t2 and the arity-k factorization")
    trunc = max_degree
    y = TriSeries.generator(TREES, trunc)
    unit = TriSeries.unit(TREES, trunc)

    def el(t):
        return unit if not t else TriSeries.basis_element(TREES, t, truncation=trunc)

    for t in treekit.enumerate_trees(max_degree) + treekit.enumerate_trees(max_degree - 1):
        kids = [el(c) for c in t]
        last = trialg.succ(kids[-2], y) if kids[-2].terms else y
        acc = trialg.prec(last, kids[-1]) if kids[-1].terms else last
        for k in reversed(kids[:-2]):
            acc = trialg.dot(trialg.succ(k, y) if k.terms else y, acc)
        if not rep.record(treekit.encode(t), acc == el(t)):
            return rep
    return rep


# -- surjections -------------------------------------------------------------------

def check_surjection_counts(max_n):
    rep = Report(f"surjection counts, n <= {max_n}")
    want = fubini_counts(max_n)
    for n in range(1, max_n + 1):
        got = len(wqsurj.enumerate_surjections(n))
        rep.record(n, got == want[n], (got, want[n]))
    return rep


def check_leveled_round_trip(max_n, orientation):
    rep = Report(f"P o P^-1 = id and fibers partition ST_n, n <= {max_n}")
    for n in range(1, max_n + 1):
        for f in wqsurj.enumerate_surjections(n):
            if not rep.record(f, wqsurj.from_leveled_tree(wqsurj.to_leveled_tree(f, orientation)) == f):
                return rep
        sizes = wqsurj.fiber_sizes(n, orientation)
        rep.record(("partition", n), sum(sizes.values()) == len(wqsurj.enumerate_surjections(n)))
        if orientation == wqsurj.ROOT_DEEPEST:
            for t in treekit.enumerate_trees(n):
                if not rep.record(("levelings", treekit.encode(t)),
                                  sizes.get(t, 0) == wqsurj.count_levelings(t)):
                    return rep
    return rep


def check_worked_example():
    rep = Report("worked example 3,4,1,3,2,4,1,3,4,1,1,3")
    f = wqsurj.parse("3,4,1,3,2,4,1,3,4,1,1,3")
    blocks = wqsurj.split_blocks(f)
    rep.record("blocks", blocks == [(3,), (1, 3, 2), (1, 3), (1, 1, 3)], blocks)
    std = [tuple(wqsurj.standardize(b)) for b in blocks]
    rep.record("standardized", std == [(1,), (1, 3, 2), (1, 2), (1, 1, 2)], std)
    return rep


def check_eval_wqsym(max_degree, orientation):
    rep = Report("tree morphism into WQSym with Y -> (1) equals psi_star")
    target = trialg.series_target(SURJECTIONS, max_degree)
    gen = TriSeries.generator(SURJECTIONS, max_degree)
    for n in range(1, max_degree + 1):
        for t in treekit.enumerate_trees(n):
            got = trialg.eval_morphism(t, target, gen)
            want = TriSeries(SURJECTIONS, wqsurj.psi_star(t, orientation), 0, max_degree)
            if not rep.record(treekit.encode(t), got == want):
                return rep
    return rep


# -- laws on random triples ------------------------------------------------------------

def check_laws(kind, count, seed):
    rep = Report(f"tridendriform, pre-Lie and post-Lie identities on {count} {kind} triples")
    o = laws.Ops(laws.target_for(kind))
    for i, (a, b, c) in enumerate(laws.random_triples(kind, count, seed)):
        results = {**laws.tridendriform_axioms(o, a, b, c), **laws.lie_identities(o, a, b, c)}
        failed = sorted(k for k, v in results.items() if not v)
        if not rep.record(i, not failed, {"triple": i, "seed": seed, "failed": failed}):
            return rep
    return rep


# -- sequences -----------------------------------------------------------------------

def check_rota_baxter(seed, count=10):
    rep = Report("S is Rota-Baxter of weight 1; D S = id")
    rng = SplitMix64(seed)
    for i in range(count):
        d = rng.randint(1, 3)
        f, g = (seqalg.MatSeq.random(rng, 8, d) for _ in range(2))
        lhs = seqalg.summ(f) @ seqalg.summ(g)
        rhs = seqalg.summ(seqalg._s(f) @ g + f @ seqalg._s(g) + f @ g)
        ok = lhs == rhs and seqalg.diff(seqalg.summ(f)) == f
        if not rep.record(i, ok):
            return rep
    return rep


def check_partition(max_n, max_N=7, order=seqalg.DIRECT):
    rep = Report(f"partial diagonals partition the cube, n <= {max_n}, N <= {max_N}")
    for n in range(1, max_n + 1):
        for N in range(max_N + 1):
            seen = set()
            total = 0
            for sigma in wqsurj.enumerate_surjections(n):
                pts = seqalg.enumerate_T(sigma, N, order)
                total += len(pts)
                ok = len(pts) == seqalg.t_size(sigma, N) and seen.isdisjoint(pts) and all(
                    seqalg.pattern_of(s, order) == sigma for s in pts)
                seen.update(pts)
                if not rep.record((tuple(sigma), N), ok):
                    return rep
            rep.record((n, N), total == N ** n and len(seen) == N ** n)
    return rep


def check_split(max_total=5, max_N=7, order=seqalg.DIRECT):
    rep = Report(f"three-part splitting of T_sigma x T_tau, n + m <= {max_total}, N <= {max_N}")
    for n in range(1, max_total):
        for m in range(1, max_total - n + 1):
            for sigma in wqsurj.enumerate_surjections(n):
                for tau in wqsurj.enumerate_surjections(m):
                    for N in range(max_N + 1):
                        r = seqalg.split_check(sigma, tau, N, order)
                        if not rep.record((tuple(sigma), tuple(tau), N), r.ok, r.counterexample):
                            return rep
    return rep


def check_fast_eval(a, max_degree, order, orientation):
    rep = Report(f"fast_eval = morphism recursion = diagonal path, degree <= {max_degree}")
    ev = seqalg.SequenceEvaluator(a)
    target = seqalg.sequence_target(a.dim, a.horizon)
    for n in range(1, max_degree + 1):
        for t in treekit.enumerate_trees(n):
            f = ev(t)
            ok = f == trialg.eval_morphism(t, target, a) and f == seqalg.f_tilde(
                wqsurj.psi_star(t, orientation), a, order)
            if not rep.record(treekit.encode(t), ok):
                return rep
    return rep


def check_locality(a, truncation, conv, seed):
    rep = Report("degree-n coefficient at N ignores a beyond index N")
    rng = SplitMix64(seed)
    full = magnus.omega_prime_sequence(a, truncation, magnus.STRICT, conv)
    for N in range(a.horizon):
        noise = seqalg.MatSeq.random(rng, a.horizon, a.dim)
        mixed = seqalg.MatSeq(a.data.copy())
        mixed.data[N + 1:] = noise.data[N + 1:]
        other = magnus.omega_prime_sequence(mixed, truncation, magnus.STRICT, conv)
        ok = all((full[n][N] == other[n][N]).all() for n in range(1, truncation + 1))
        if not rep.record(N, ok):
            return rep
    return rep


# -- Magnus ------------------------------------------------------------------------------

def check_prelie_magnus(truncation):
    rep = Report(f"pre-Lie Magnus recursions equal log*, degree <= {truncation}")
    for flavor, fixed in (("rhd", "prec"), ("urhd", "preceq")):
        got = magnus.prelie_magnus(flavor, truncation).payload
        want = magnus.oracle_log(fixed, truncation).payload
        rep.record(flavor, got == want, (got - want))
    a = TriSeries.generator(TREES, 3)
    aa = trialg.prelie(a, a, "rhd")
    first = (a - aa * Fraction(1, 2) + trialg.prelie(aa, a, "rhd") * Fraction(1, 4)
             + trialg.prelie(a, aa, "rhd") * Fraction(1, 12))
    rep.record("printed first terms", magnus.prelie_magnus("rhd", 3).payload == first)
    return rep


def check_closed_formula(conv, truncation):
    rep = magnus.check_closed_vs_oracle(conv, truncation)
    for variant in (magnus.STRICT, magnus.WEAK):
        trees = magnus.closed_formula(variant, truncation, TREES, conv).payload
        surj = magnus.closed_formula(variant, truncation, SURJECTIONS, conv).payload
        rep.record(("psi_star", variant),
                   trialg.psi_star_series(trees, conv.level_orientation) == surj)
    return rep


def check_discrete(a, truncation, conv):
    rep = Report(f"discrete Magnus: fast = diagonal = in-algebra log*, degree <= {truncation}")
    for variant, flavor in magnus.VARIANT_FLAVOR.items():
        oracle = magnus.sequence_oracle(a, truncation, flavor)
        for N in range(a.horizon + 1):
            fast = magnus.discrete_mps(a, N, truncation, variant, conv)
            diag = magnus.discrete_mps(a, N, truncation, variant, conv, path="diagonal")
            prod = seqalg.ordered_product_log(a, N, truncation, flavor)
            ok = all((fast[n] == diag[n]).all() and (fast[n] == oracle[n][N]).all()
                     and (fast[n] == prod[n]).all() for n in fast)
            if not rep.record((variant, N), ok):
                return rep
    return rep


def check_scalar_sanity(truncation=6, max_N=10, conv=None):
    """a = 1 in dimension one: degree-n part of Omega(N) is (-1)^(n-1) N / n."""
    rep = Report("scalar a = 1 gives N log(1 + h)")
    a = seqalg.MatSeq.constant(1, max_N, 1)
    graded = magnus.discrete_mps_sequence(a, truncation, magnus.STRICT, conv)
    for N in range(max_N + 1):
        for n in range(1, truncation + 1):
            want = seqalg.to_mpq(Fraction((-1) ** (n - 1) * N, n))
            if not rep.record((n, N), graded[n][N][0, 0] == want, graded[n][N][0, 0]):
                return rep
    return rep


def check_exp(a, truncation, conv):
    return magnus.exp_check(a, a.horizon, truncation, conv)


# -- driver ----------------------------------------------------------------------------------

def suite(max_degree=4, max_n=4, seed=0, ledger=None, triples=20, horizon=8):
    """Yield Reports for the full battery, in a fixed order.

    Conventions come from ``ledger`` when given; otherwise they are resolved
    on the spot (resolution is itself one of the checks).
    """
    try:
        resolved = magnus.resolve_conventions(seed=seed)
        rep = Report("convention resolution picks exactly one combination")
        rep.record("unique", True)
    except RuntimeError as exc:
        rep = Report("convention resolution picks exactly one combination")
        rep.record("unique", False, str(exc))
        yield rep
        return
    if ledger is not None:
        rep.record("matches ledger", ledger.require() == resolved.conventions,
                   (ledger.conventions, resolved.conventions))
    yield rep
    conv = resolved.conventions

    yield check_tree_counts(max_degree)
    yield check_tree_codec(max_degree)
    yield check_descent_bounds(max_degree)
    yield check_contraction(max_degree)
    yield check_f_lr(max_degree)
    yield check_grafting(max_degree)
    yield check_surjection_counts(max_n)
    yield check_leveled_round_trip(max_n, conv.level_orientation)
    yield magnus.check_descent_preservation(max_n, conv.level_orientation, conv.descent_orientation)
    yield magnus.check_psi_morphism(min(max_degree + 1, 5), conv.level_orientation)
    yield check_worked_example()
    yield check_eval_wqsym(max_degree, conv.level_orientation)
    for i, kind in enumerate(laws.ALGEBRAS):
        yield check_laws(kind, triples, seed + i)
    yield check_rota_baxter(seed)
    yield check_partition(max_n)
    yield check_split(min(max_n + 1, 5))

    a = seqalg.MatSeq.random(SplitMix64(seed), horizon, 2)
    yield check_fast_eval(a, max_degree, conv.t_order, conv.level_orientation)
    yield magnus.check_fiber_factorization(a, max_degree, conv.t_order, conv.level_orientation)
    yield check_locality(a, max_degree, conv, seed)
    yield check_prelie_magnus(max_degree + 1)
    yield check_closed_formula(conv, max_degree + 1)
    yield check_discrete(a, max_degree, conv)
    yield check_scalar_sanity(conv=conv)
    yield check_exp(a, max_degree, conv)
