import json
from fractions import Fraction

import gmpy2
import numpy as np
import pytest

from tridend import seqalg as sq
from tridend import treekit as tk
from tridend import wqsurj as wq
from tridend.errors import DimensionError, DomainError, HorizonError
from tridend.rng import SplitMix64

S = wq.Surjection


@pytest.fixture(scope="module")
def a():
    return sq.MatSeq.random(SplitMix64(7), 9, 2)


def m(*rows):
    return np.array([[gmpy2.mpq(Fraction(x)) for x in r] for r in rows], dtype=object)


def test_summ_and_diff():
    one = sq.MatSeq.constant(1, 5)
    s = sq.summ(one)
    assert [s[N][0, 0] for N in range(6)] == [0, 1, 2, 3, 4, 5]
    assert sq.diff(s) == one
    f = sq.MatSeq.random(SplitMix64(1), 6, 3)
    assert sq.diff(sq.summ(f)) == f
    sd = sq.summ(sq.diff(f))
    for N in range(5):
        assert (sd[N] == f[N] - f[0]).all()


def test_horizon_errors():
    f = sq.MatSeq.constant(1, 3)
    with pytest.raises(HorizonError):
        f[3]
    with pytest.raises(HorizonError):
        f.prefix(4)


def test_dimension_errors():
    with pytest.raises(DimensionError):
        sq.MatSeq.constant(1, 3, 2) + sq.MatSeq.constant(1, 3, 3)
    with pytest.raises(DimensionError):
        sq.MatSeq(np.zeros((2, 2, 3), dtype=object))


def test_products_scalar():
    one = sq.MatSeq.constant(1, 5)
    p = sq.tri_products(one, one, "<")
    assert [p[N][0, 0] for N in range(5)] == [0, 1, 2, 3, 4]
    with pytest.raises(DomainError):
        sq.tri_products(one, one, "?")


def test_noncommutative_witness(a):
    b = sq.MatSeq.random(SplitMix64(8), 9, 2)
    lhs = sq.seq_prec(a, b) - sq.seq_succ(b, a)
    sb = sq._s(b)
    assert lhs == (a @ sb) - (sb @ a)
    assert not lhs == sq.MatSeq(sq.zeros(9, 2))


def test_json_round_trip():
    f = sq.MatSeq.from_matrices([[["1/2", "0"], ["1", "3/7"]], [[2, -1], ["-5/3", 0]]])
    d = f.to_dict()
    assert d == {"dim": 2, "entries": [[["1/2", "0"], ["1", "3/7"]], [["2", "-1"], ["-5/3", "0"]]]}
    assert sq.MatSeq.from_json(json.dumps(d)) == f


def test_enumerate_T_examples():
    assert sq.enumerate_T(S((1, 1)), 3) == [(0, 0), (1, 1), (2, 2)]
    assert sq.enumerate_T(S((2, 1)), 3) == [(1, 0), (2, 0), (2, 1)]
    assert sq.enumerate_T(S((2, 1)), 3, sq.INVERTED) == [(0, 1), (0, 2), (1, 2)]
    assert sum(len(sq.enumerate_T(s, 3)) for s in wq.enumerate_surjections(2)) == 9
    assert sq.enumerate_T(S((1,)), 0) == []


def test_partition_of_cube():
    for n in range(1, 5):
        for N in range(8):
            seen = []
            for s in wq.enumerate_surjections(n):
                pts = sq.enumerate_T(s, N)
                assert len(pts) == sq.t_size(s, N)
                assert all(sq.pattern_of(p) == s for p in pts)
                seen.extend(pts)
            assert len(seen) == len(set(seen)) == N ** n


def test_split_small_example():
    r = sq.split_check(S((1,)), S((1,)), 3)
    assert r.ok and r.counts == {"prec": 3, "succ": 3, "dot": 3}
    r0 = sq.split_check(S((1, 2)), S((1,)), 0)
    assert r0.ok and r0.counts == {"prec": 0, "succ": 0, "dot": 0}


def test_split_exhaustive():
    for n in range(1, 5):
        for k in range(1, 6 - n):
            for s in wq.enumerate_surjections(n):
                for t in wq.enumerate_surjections(k):
                    for N in range(8):
                        assert sq.split_check(s, t, N), (s, t, N)


def test_split_wrong_comparator_fails():
    assert not sq.split_check(S((1,)), S((1,)), 3, extreme="min")


def test_f_tilde_examples(a):
    assert sq.f_tilde(S((1,)), a) == a
    assert sq.f_tilde(S((1, 1)), a) == a @ a
    assert sq.f_tilde(S((2, 1)), a) == sq.seq_prec(a, a)
    assert sq.f_tilde(S((1, 2)), a) == sq.seq_succ(a, a)
    lin = sq.f_tilde({S((2, 1)): 2, S((1, 1)): Fraction(-1, 2)}, a)
    assert lin == sq.seq_prec(a, a) * 2 - (a @ a) * Fraction(1, 2)


def test_fast_eval_examples(a):
    assert sq.fast_eval(tk.Y, a) == a
    assert sq.fast_eval(tk.comb(2, "right"), a) == a @ sq._s(a)
    assert sq.fast_eval(tk.corolla(3), a) == a @ a
    with pytest.raises(DomainError):
        sq.fast_eval(tk.LEAF, a)


def test_fast_eval_equals_fiber_sum(a):
    ev = sq.SequenceEvaluator(a)
    for n in range(1, 5):
        for t in tk.enumerate_trees(n):
            assert ev(t) == sq.f_tilde(wq.psi_star(t), a)


def test_evaluator_series_matches_termwise(a):
    ev = sq.SequenceEvaluator(a)
    terms = {t: Fraction(i + 1, 3) for i, t in enumerate(tk.enumerate_trees(3))}
    want = sq.MatSeq(sq.zeros(9, 2))
    for t, c in terms.items():
        want = want + ev(t) * c
    assert ev.series(terms) == want


def test_graded_log_exp_round_trip(a):
    x = sq.fixed_point_sequences(a, 4, "prec")
    back = sq.graded_exp(sq.graded_log(x))
    assert back == x


def test_ordered_product_log_degree_one(a):
    for N in range(9):
        got = sq.ordered_product_log(a, N, 3)
        assert (got[1] == sq.summ(a)[N]).all()


def test_ordered_product_log_scalar():
    one = sq.MatSeq.constant(1, 6)
    got = sq.ordered_product_log(one, 5, 4)
    assert [got[n][0, 0] for n in range(1, 5)] == [5, Fraction(-5, 2), Fraction(5, 3), Fraction(-5, 4)]
