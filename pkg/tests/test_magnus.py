import json
from fractions import Fraction

import pytest

from tridend import magnus as mg
from tridend import seqalg as sq
from tridend import treekit as tk
from tridend import trialg
from tridend.errors import DomainError, UnresolvedConventionError
from tridend.rng import SplitMix64
from tridend.trialg import SURJECTIONS, TREES, TriSeries

RC2, LC2, C3 = tk.comb(2, "right"), tk.comb(2, "left"), tk.corolla(3)
RESOLVED = mg.Conventions("as-printed", "complement", "direct", "root-deepest")


def part(d, trunc=6):
    return TriSeries(TREES, d, 0, trunc)


@pytest.fixture(scope="module")
def ledger():
    return mg.resolve_conventions()


def test_bernoulli():
    assert [mg.bernoulli(m) for m in range(5)] == [1, Fraction(-1, 2), Fraction(1, 6), 0,
                                                   Fraction(-1, 30)]
    assert mg.bernoulli(12) == Fraction(-691, 2730)
    with pytest.raises(DomainError):
        mg.bernoulli(-1)


def test_fixed_point_low_degrees():
    x = mg.solve_fixed_point("prec", 3)
    assert x.scalar == 1
    assert x.degree_part(1) == part({tk.Y: 1}, 3)
    assert x.degree_part(2) == part({RC2: 1}, 3)
    xb = mg.solve_fixed_point("preceq", 3)
    assert xb.degree_part(2) == part({RC2: 1, C3: 1}, 3)
    with pytest.raises(DomainError):
        mg.solve_fixed_point("nope")


def test_oracle_degree_two():
    h = Fraction(1, 2)
    assert mg.oracle_log("prec", 4).degree_part(1) == part({tk.Y: 1}, 4)
    assert mg.oracle_log("prec", 4).degree_part(2) == part({RC2: h, LC2: -h, C3: -h}, 4)
    assert mg.oracle_log("preceq", 4).degree_part(2) == part({RC2: h, LC2: -h, C3: h}, 4)


def test_oracle_degree_three_frozen():
    got = {tk.encode(t): c for t, c in mg.oracle_log("prec", 3).degree_part(3).items()}
    third, sixth = Fraction(1, 3), Fraction(1, 6)
    assert got == {
        "(((|,|),|),|)": third, "((|,(|,|)),|)": -sixth, "((|,|),(|,|))": -sixth,
        "((|,|),|,|)": third, "((|,|,|),|)": third, "(|,((|,|),|))": -sixth,
        "(|,(|,(|,|)))": third, "(|,(|,|),|)": -sixth, "(|,(|,|,|))": -sixth,
        "(|,|,(|,|))": -sixth, "(|,|,|,|)": third,
    }


def test_prelie_first_terms():
    a = TriSeries.generator(TREES, 3)
    aa = trialg.prelie(a, a, "rhd")
    om = mg.prelie_magnus("rhd", 3).payload
    assert om.degree_part(2) == aa * Fraction(-1, 2)
    assert om.degree_part(3) == (trialg.prelie(aa, a, "rhd") * Fraction(1, 4)
                                 + trialg.prelie(a, aa, "rhd") * Fraction(1, 12))
    with pytest.raises(DomainError):
        mg.prelie_magnus("lhd")


@pytest.mark.parametrize("flavor,fixed", [("rhd", "prec"), ("urhd", "preceq")])
def test_prelie_equals_oracle(flavor, fixed):
    assert mg.prelie_magnus(flavor, 5).payload == mg.oracle_log(fixed, 5).payload


def test_prelie_in_surjection_basis():
    got = mg.prelie_magnus("rhd", 4, SURJECTIONS).payload
    assert got == mg.oracle_log("prec", 4, SURJECTIONS).payload


def test_closed_coefficients():
    assert mg.closed_coefficient(1, 0, "d") == 1
    assert [abs(mg.closed_coefficient(3, d, "d")) for d in range(3)] == [
        Fraction(1, 3), Fraction(1, 6), Fraction(1, 3)]
    assert mg.closed_coefficient(2, 1, "d") == Fraction(-1, 2)
    assert mg.closed_coefficient(2, 1, "complement") == Fraction(1, 2)
    with pytest.raises(DomainError):
        mg.closed_coefficient(2, 0, "x")


def test_closed_formula_refuses_without_ledger():
    with pytest.raises(UnresolvedConventionError):
        mg.closed_formula("strict", 3)
    with pytest.raises(UnresolvedConventionError):
        mg.closed_formula("strict", 3, TREES, mg.ConventionLedger())


def test_resolution_is_unique_and_idempotent(ledger):
    assert ledger.frozen
    assert ledger.conventions == RESOLVED
    assert ledger.evidence["passing"] == 1
    assert len(ledger.evidence["combinations"]) == 16
    assert mg.resolve_conventions().to_dict() == ledger.to_dict()


def test_ledger_file_round_trip(ledger, tmp_path):
    path = tmp_path / "conventions.json"
    ledger.save(path)
    data = json.loads(path.read_text())
    assert data["status"] == "frozen"
    assert data["conventions"]["sign_rule"] == "complement"
    assert data["evidence"]["degrees"] == [2, 3]
    assert mg.ConventionLedger.load(path).require() == RESOLVED
    with pytest.raises(UnresolvedConventionError):
        mg.ConventionLedger.load(tmp_path / "missing.json")


def test_closed_degree_two(ledger):
    h = Fraction(1, 2)
    got = mg.closed_formula("strict", 2, TREES, ledger).payload
    assert got == part({tk.Y: 1, RC2: h, LC2: -h, C3: -h}, 2)
    printed = mg.Conventions("as-printed", "d", "direct", "root-deepest")
    assert mg.closed_formula("strict", 2, TREES, printed).payload.degree_part(2) == \
        part({RC2: -h, LC2: h, C3: h}, 2)


@pytest.mark.parametrize("variant,flavor", [("strict", "prec"), ("weak", "preceq")])
def test_closed_equals_oracle(ledger, variant, flavor):
    assert mg.closed_formula(variant, 5, TREES, ledger).payload == mg.oracle_log(flavor, 5).payload


@pytest.mark.parametrize("variant", ["strict", "weak"])
def test_closed_formula_is_fiber_constant(ledger, variant):
    trees = mg.closed_formula(variant, 5, TREES, ledger).payload
    surj = mg.closed_formula(variant, 5, SURJECTIONS, ledger).payload
    assert trialg.psi_star_series(trees) == surj


def test_closed_formula_grading(ledger):
    x = mg.closed_formula("weak", 4, TREES, ledger).payload
    for n in range(1, 5):
        assert len(x.degree_part(n)) == len(tk.enumerate_trees(n))


def test_discrete_degree_one_is_sa(ledger):
    a = sq.MatSeq.random(SplitMix64(2), 6, 2)
    sa = sq.summ(a)
    for N in range(7):
        assert (mg.discrete_mps(a, N, 1, "strict", ledger)[1] == sa[N]).all()
    with pytest.raises(sq.HorizonError):
        mg.discrete_mps(a, 7, 1, "strict", ledger)


def test_discrete_paths_agree(ledger):
    a = sq.MatSeq.random(SplitMix64(4), 6, 3)
    for variant, flavor in mg.VARIANT_FLAVOR.items():
        oracle = mg.sequence_oracle(a, 4, flavor)
        for N in range(7):
            fast = mg.discrete_mps(a, N, 4, variant, ledger)
            diag = mg.discrete_mps(a, N, 4, variant, ledger, path="diagonal")
            prod = sq.ordered_product_log(a, N, 4, flavor)
            for n in range(1, 5):
                assert (fast[n] == diag[n]).all()
                assert (fast[n] == oracle[n][N]).all()
                assert (fast[n] == prod[n]).all()


def test_scalar_sanity(ledger):
    one = sq.MatSeq.constant(1, 10)
    g = mg.discrete_mps_sequence(one, 6, "strict", ledger)
    for N in range(11):
        for n in range(1, 7):
            assert g[n][N][0, 0] == Fraction((-1) ** (n - 1) * N, n)


def test_weak_variant_scalar(ledger):
    # (1 - h)^(-N): log is N (h + h^2/2 + h^3/3 + ...)
    one = sq.MatSeq.constant(1, 6)
    g = mg.discrete_mps_sequence(one, 4, "weak", ledger)
    for N in range(7):
        for n in range(1, 5):
            assert g[n][N][0, 0] == Fraction(N, n)


def test_locality(ledger):
    a = sq.MatSeq.random(SplitMix64(9), 7, 2)
    full = mg.omega_prime_sequence(a, 3, "strict", ledger)
    for N in range(7):
        b = sq.MatSeq(a.data.copy())
        b.data[N + 1:] = sq.MatSeq.random(SplitMix64(N), 7, 2).data[N + 1:]
        other = mg.omega_prime_sequence(b, 3, "strict", ledger)
        for n in range(1, 4):
            assert (full[n][N] == other[n][N]).all()


def test_exp_check(ledger):
    a = sq.MatSeq.random(SplitMix64(3), 6, 2)
    assert mg.exp_check(a, 6, 4, ledger)


def test_exp_of_degree_two_term():
    h = Fraction(1, 2)
    om = part({tk.Y: 1, RC2: h, LC2: -h, C3: -h}, 2)
    assert trialg.exp_star(om).degree_part(2) == part({RC2: 1}, 2)


def test_check_reports_counterexample():
    bad = mg.Conventions("as-printed", "d", "direct", "root-deepest")
    rep = mg.check_closed_vs_oracle(bad, 3)
    assert not rep and rep.counterexample[0] == "strict"
    rep = mg.check_descent_preservation(3, "root-top")
    assert not rep and rep.counterexample is not None
