import pytest

from tridend import treekit as tk
from tridend import wqsurj as wq
from tridend.errors import DomainError

S = wq.Surjection
RC2, LC2, C3 = tk.comb(2, "right"), tk.comb(2, "left"), tk.corolla(3)
FUBINI = [1, 3, 13, 75, 541, 4683]


def test_surjection_validation():
    assert S((2, 1, 2)).r == 2
    with pytest.raises(DomainError):
        S((1, 3))
    with pytest.raises(DomainError):
        S(())
    with pytest.raises(DomainError):
        wq.parse("1,,2")


def test_standardize_examples():
    assert wq.standardize((2, 7, 4, 1, 4)) == (2, 4, 3, 1, 3)
    assert wq.standardize((1, 2, 3)) == (1, 2, 3)
    assert wq.standardize((5, 5)) == (1, 1)
    with pytest.raises(DomainError):
        wq.standardize(())


@pytest.mark.parametrize("n", range(1, 7))
def test_counts(n):
    assert len(wq.enumerate_surjections(n)) == FUBINI[n - 1]


def test_enumeration_order():
    assert wq.enumerate_surjections(1) == [(1,)]
    assert wq.enumerate_surjections(2) == [(1, 1), (1, 2), (2, 1)]
    words = wq.enumerate_surjections(4)
    assert words == sorted(set(words))


def test_codec():
    f = wq.parse("3,4,1,3,2,4,1,3,4,1,1,3")
    assert wq.encode(f) == "3,4,1,3,2,4,1,3,4,1,1,3"
    assert str(S((1, 2))) == "1,2"


def test_products_degree_one():
    one = S((1,))
    assert wq.wq_product(one, one, "succ") == {(1, 2): 1}
    assert wq.wq_product(one, one, "<") == {(2, 1): 1}
    assert wq.wq_product(one, one, ".") == {(1, 1): 1}
    with pytest.raises(DomainError):
        wq.wq_product(one, one, "?")


def test_triple_star_is_all_of_st3():
    one = S((1,))
    total = {}
    for f, c in wq.wq_star(one, one).items():
        for g, d in wq.wq_star(f, one).items():
            total[g] = total.get(g, 0) + c * d
    assert set(total) == set(wq.enumerate_surjections(3))
    assert set(total.values()) == {1}


def test_product_terms_have_right_length_and_split():
    f, g = S((1, 2, 1)), S((2, 1))
    for op in ("prec", "succ", "dot"):
        for w in wq.wq_product(f, g, op):
            assert len(w) == 5
            assert wq.standardize(w[:3]) == f and wq.standardize(w[3:]) == g
            left, right = max(w[:3]), max(w[3:])
            assert {"prec": left > right, "succ": left < right, "dot": left == right}[op]


def test_juxtaposition_associative():
    a, b, c = (1, 2), (3,), (2, 2)
    assert (a + b) + c == a + (b + c)


def test_descents():
    assert wq.descents(S((2, 1))) == (1, 1)
    assert wq.descents(S((1, 1))) == (0, 1)
    assert wq.descents(S((1, 2))) == (0, 0)


def test_worked_example_blocks():
    f = wq.parse("3,4,1,3,2,4,1,3,4,1,1,3")
    blocks = wq.split_blocks(f)
    assert blocks == [(3,), (1, 3, 2), (1, 3), (1, 1, 3)]
    assert [wq.standardize(b) for b in blocks] == [(1,), (1, 3, 2), (1, 2), (1, 1, 2)]


def test_leveled_tree_small_cases():
    assert wq.to_leveled_tree(S((1,))).shape == tk.Y
    assert wq.to_leveled_tree(S((1, 1))).shape == C3
    rc = wq.LeveledTree(RC2, (((), 2), ((1,), 1)))
    assert wq.from_leveled_tree(rc) == (2, 1)
    lc = wq.LeveledTree(LC2, (((), 2), ((0,), 1)))
    assert wq.from_leveled_tree(lc) == (1, 2)
    assert wq.from_leveled_tree(wq.LeveledTree(C3, (((), 1),))) == (1, 1)


def test_invalid_levels_rejected():
    bad = wq.LeveledTree(RC2, (((), 1), ((1,), 2)))
    with pytest.raises(DomainError):
        wq.from_leveled_tree(bad)
    gap = wq.LeveledTree(RC2, (((), 3), ((1,), 1)))
    with pytest.raises(DomainError):
        wq.from_leveled_tree(gap)
    with pytest.raises(DomainError):
        wq.to_leveled_tree((1, 3))


def test_forget_levels_examples():
    assert wq.forget_levels(S((2, 1))) == RC2
    assert wq.forget_levels(S((1, 2))) == LC2
    assert wq.forget_levels(S((1, 1))) == C3


def test_round_trip_and_descent_preservation():
    for n in range(1, 7):
        for f in wq.enumerate_surjections(n):
            lt = wq.to_leveled_tree(f)
            assert wq.from_leveled_tree(lt) == f
            t = lt.shape
            assert tk.degree(t) == n
            ds, dt = wq.descents(f), tk.descent_stats(t)
            assert (ds.strict, ds.weak) == (dt.strict, dt.weak)


def test_fibers_partition_and_match_levelings():
    for n in range(1, 6):
        sizes = wq.fiber_sizes(n)
        assert sum(sizes.values()) == FUBINI[n - 1]
        assert set(sizes) == set(tk.enumerate_trees(n))
        for t in tk.enumerate_trees(n):
            assert sizes[t] == wq.count_levelings(t)


def test_psi_star_examples():
    assert wq.psi_star(tk.Y) == {(1,): 1}
    assert wq.psi_star(RC2) == {(2, 1): 1}
    assert wq.psi_star(C3) == {(1, 1): 1}
    with pytest.raises(DomainError):
        wq.psi_star(tk.LEAF)
