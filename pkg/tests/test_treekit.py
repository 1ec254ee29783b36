import pytest

from tridend import treekit as tk
from tridend.errors import ArityError, DomainError, TreeParseError

LEAF, Y = tk.LEAF, tk.Y
RC2 = tk.parse("(|,(|,|))")
LC2 = tk.parse("((|,|),|)")
C3 = tk.parse("(|,|,|)")

# frozen: little Schroeder numbers
SCHROEDER = [1, 1, 3, 11, 45, 197, 903]


def test_graft_examples():
    assert tk.graft([LEAF, LEAF]) == Y
    assert tk.graft([LEAF, LEAF, LEAF]) == C3
    assert tk.graft([Y, LEAF]) == tk.comb(2, "left")
    assert tk.degree(tk.graft([RC2, Y, LEAF])) == 2 + 1 + 0 + 2


def test_graft_rejects_single_child():
    with pytest.raises(ArityError):
        tk.graft([Y])
    with pytest.raises(ArityError):
        tk.Tree([LEAF])


@pytest.mark.parametrize("n", range(7))
def test_counts(n):
    assert len(tk.enumerate_trees(n)) == SCHROEDER[n]


def test_counts_match_independent_recurrence():
    from tridend.verify import schroeder_counts
    assert schroeder_counts(6) == SCHROEDER


def test_enumeration_sorted_unique():
    for n in range(5):
        codes = [tk.encode(t) for t in tk.enumerate_trees(n)]
        assert codes == sorted(set(codes))
        assert all(tk.degree(t) == n for t in tk.enumerate_trees(n))


def test_degree_cap():
    with pytest.raises(DomainError):
        tk.enumerate_trees(11)
    with pytest.raises(DomainError):
        tk.enumerate_trees(-1)


def test_degree2_listing():
    assert [tk.encode(t) for t in tk.enumerate_trees(2)] == ["((|,|),|)", "(|,(|,|))", "(|,|,|)"]


def test_combs():
    assert tk.comb(0, "right") == LEAF
    assert tk.comb(2, "right") == RC2
    assert tk.comb(2, "left") == LC2
    assert tk.encode(tk.comb(3, "right")) == "(|,(|,(|,|)))"
    assert tk.mirror(tk.comb(4, "right")) == tk.comb(4, "left")


def test_encode_parse():
    assert tk.encode(Y) == "(|,|)"
    assert tk.encode(tk.graft([LEAF, Y])) == "(|,(|,|))"
    assert tk.parse("(|,|,|)") == C3
    assert tk.parse(" ( | , ( |,| ) ) ") == RC2
    for n in range(5):
        for t in tk.enumerate_trees(n):
            assert tk.parse(tk.encode(t)) == t


@pytest.mark.parametrize("text,pos", [("(|,|", 4), ("(|)", 0), ("(|,x)", 3), ("(|,|))", 5), ("", 0)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(TreeParseError) as info:
        tk.parse(text)
    assert info.value.position == pos


def test_descent_examples():
    assert tk.descent_stats(RC2) == tk.DescentStats(weak=1, strict=1)
    assert tk.descent_stats(tk.comb(3, "right")).weak == 2
    for n in range(1, 6):
        assert tk.descent_stats(tk.comb(n, "left")) == (0, 0)
    assert tk.descent_stats(C3) == tk.DescentStats(weak=1, strict=0)
    assert tk.descent_stats(LEAF) == (0, 0)


def test_descent_bounds_and_mirror():
    for n in range(1, 7):
        for t in tk.enumerate_trees(n):
            st = tk.descent_stats(t)
            assert st.strict <= st.weak <= n - 1
            assert tk.mirror(tk.mirror(t)) == t
            assert tk.descent_stats(t, tk.MIRRORED) == tk.descent_stats(tk.mirror(t))


def test_contraction_closure_examples():
    assert tk.contraction_closure(Y) == {Y}
    assert tk.contraction_closure(RC2) == {RC2, C3}
    assert tk.contraction_closure(C3) == {C3}
    assert len(tk.contraction_closure(tk.comb(3, "right"))) == 4


def test_contraction_order_is_transitive():
    for n in range(1, 6):
        for t in tk.enumerate_trees(n):
            cl = tk.contraction_closure(t)
            assert t in cl
            for s in cl:
                assert tk.degree(s) == n
                assert tk.contraction_closure(s) <= cl


def test_closure_matches_repeated_single_edge_contraction():
    for n in range(1, 6):
        for t in tk.enumerate_trees(n):
            kinds = ("left", "right", "middle")
            assert tk.contract_by_kind(t, kinds) == tk.contraction_closure(t)


def test_edge_rule_on_every_edge():
    for n in range(1, 6):
        for t in tk.enumerate_trees(n):
            for e in tk.inner_edges(t):
                after = tk.descent_stats(tk.contract_edge(t, e))._asdict()
                for k, v in tk.contraction_descent_rule(t, e).items():
                    assert after[k] == v, (tk.encode(t), e)


def test_middle_edge_naive_rule_fails_somewhere():
    # shrinking a middle edge does not always move both counts by one
    t = tk.parse("(|,((|,|),|),|)")
    (e,) = [e for e in tk.inner_edges(t) if e.kind == "middle"]
    before, after = tk.descent_stats(t), tk.descent_stats(tk.contract_edge(t, e))
    assert (after.weak - before.weak, after.strict - before.strict) != (1, -1)


def test_edge_kinds():
    kinds = sorted(e.kind for e in tk.inner_edges(tk.parse("((|,|),(|,|),(|,|))")))
    assert kinds == ["left", "middle", "right"]
