import dataclasses
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cayleylab.elements import cycles, matrix, residue
from cayleylab.errors import PreconditionError
from cayleylab.groups import GeneratingSet, construct
from cayleylab.structure import all_subgroups, subgroup_closure, trivial_subgroup
from cayleylab.verifier import (CLAIMS, RULES, check_abelian_diameter, check_bt,
                                check_bt_hypothesis, check_conjugacy_bound, check_lemma_nilp2,
                                check_normal_set, check_scaling, check_schreier, check_theorem_B,
                                class_sets, recheck, run_corpus, scaling_experiment, summarize)

T, C = cycles(3, (0, 1)), cycles(3, (0, 1, 2))
TRANSPOSITIONS = [cycles(3, (0, 1)), cycles(3, (0, 2)), cycles(3, (1, 2))]
MINUS = matrix(2, 0, 0, 2, 3)


@pytest.fixture(scope="module")
def s3():
    return construct("sym:3")


def test_abelian_examples():
    r = check_abelian_diameter(construct("cyclic:5"), [residue(1)])
    assert r.passed and r.witnesses["bound"] == 5 and r.witnesses["tight"] == 1
    r = check_abelian_diameter(construct("cyclic:6"), [residue(1), residue(2)])
    assert r.passed and r.witnesses["diameter"] == 3 and r.witnesses["bound"] == 10
    assert check_abelian_diameter(construct("cyclic:1"), [residue(0)]).passed
    with pytest.raises(PreconditionError):
        check_abelian_diameter(construct("sym:3"), [T, C])


def test_literal_form_recorded():
    # C5 with {1}: diam 4 < 5 = |G|^(1/1), so the literal form fails while the binomial one holds
    r = check_abelian_diameter(construct("cyclic:5"), [residue(1)])
    assert r.passed and r.witnesses["literal_holds"] == 0


def test_theorem_b_examples(s3):
    A3 = subgroup_closure(s3, [C])
    r = check_theorem_B(s3, A3, [T, C])
    w = r.witnesses
    assert r.passed and (w["diam_G"], w["diam_H"], w["diam_ab"]) == (2, 1, 1)
    assert w["ab_order"] == 3 == w["bound"] and w["tight"] == 1
    assert check_theorem_B(s3, trivial_subgroup(s3), [T, C]).passed
    C4 = construct("cyclic:4")
    r = check_theorem_B(C4, subgroup_closure(C4, [residue(2)]), [residue(1)])
    assert r.passed and (r.witnesses["diam_G"], r.witnesses["diam_H"], r.witnesses["bound"]) == (3, 1, 2)


def test_schreier_examples(s3):
    for H in all_subgroups(s3):
        r = check_schreier(s3, H, [T, C])
        assert r.passed and r.witnesses["schreier_size"] <= r.witnesses["index"] * 2
    with pytest.raises(PreconditionError):
        check_schreier(s3, subgroup_closure(s3, [C]), [C])


def test_conjugacy_examples(s3):
    r = check_conjugacy_bound(s3)
    assert r.passed and r.witnesses["k_G"] == 3
    assert check_conjugacy_bound(construct("cyclic:8")).witnesses["k_G"] == 8
    r = check_conjugacy_bound(construct("sl2:5"))
    assert r.passed and r.witnesses["k_G"] == 9 and r.witnesses["subgroups"] == 76


def test_nilp2_examples(s3):
    r = check_lemma_nilp2(s3)
    assert r.passed and r.witnesses["H_order"] == 3 and r.witnesses["nilpotency_class"] == 1
    r = check_lemma_nilp2(construct("q8"))
    assert r.passed and r.witnesses["H_order"] == 4
    r = check_lemma_nilp2(construct("elemab:2:3"))
    assert r.passed and r.witnesses["H_order"] == 8


def test_normal_set_examples(s3):
    r = check_normal_set(s3, TRANSPOSITIONS)
    w = r.witnesses
    assert r.passed and w["kernel_order"] == w["center_order"] == 1
    assert w["quotient_order"] == 6 == w["set_factorial"] and w["tight"] == 1
    G = construct("product:cyclic:2,cyclic:4")
    assert check_normal_set(G, list(G.generators)).passed
    r = check_normal_set(construct("q8"), [MINUS])
    assert r.passed and r.witnesses["generates"] == 0
    with pytest.raises(PreconditionError):
        check_normal_set(s3, [T])


def test_bt_examples(s3):
    for spec in ("cyclic:12", "product:cyclic:2,cyclic:6"):
        G = construct(spec)
        r = check_bt(G, G.generators, 5, Fraction(1, 4), 1)
        assert r.passed and r.witnesses["N_order"] == 1 and r.witnesses["index"] == 1
    r = check_bt(s3, [T, C], 3, Fraction(1, 4), 2)
    assert r.passed and r.witnesses["n"] == 1
    assert (r.witnesses["N_order"], r.witnesses["H_order"]) == (1, 3)
    q8 = construct("q8")
    r = check_bt(q8, q8.generators, 4, Fraction(1, 4), 2)
    w = r.witnesses
    assert r.passed and w["radius"] == 2 and w["N_order"] == 2 and w["N_in_ball"] == 1
    assert w["index"] == 1


def test_bt_hypothesis_report(s3):
    r = check_bt_hypothesis(s3, [T, C], 3, 1)
    assert r.passed and r.witnesses["holds"] == 1 and r.witnesses["n"] == 1
    # theta small enough that no n works
    G = construct("cyclic:64")
    r = check_bt_hypothesis(G, G.generators, Fraction(1, 2), 1)
    assert r.passed and r.witnesses["holds"] == 0 and r.witnesses["min_ratio"] == 1


def test_scaling_examples():
    rows = scaling_experiment("CYCLIC", [16, 32, 64, 128])
    assert [r.diameter for r in rows] == [15, 31, 63, 127]
    assert abs(rows[0].fit_exponent - 1) < 0.05
    assert check_scaling("CYCLIC", rows).passed
    rows = scaling_experiment("WREATH", range(2, 6))
    assert rows[0].diameter == 4 and check_scaling("WREATH", rows).passed
    assert scaling_experiment("CYCLIC", [16, 32]) == scaling_experiment("CYCLIC", [16, 32])
    assert [r.group_order for r in rows] == sorted(r.group_order for r in rows)


def test_run_corpus_examples():
    assert run_corpus([], ["SCHREIER"]) == []
    reps = run_corpus(["sym:3"], ["SCHREIER"], seed=0)
    assert reps and all(r.passed for r in reps)
    reps = run_corpus([f"cyclic:{n}" for n in range(5, 10)], ["ABELIAN_DIAM"], seed=0)
    assert reps and all(r.passed for r in reps)
    reps = run_corpus(["sym:3", "bogus:1"], ["NILP2"])
    assert summarize(reps) == {"reports": 2, "passed": 1, "failed": 1, "limit_errors": 0}
    assert "error" in reps[-1].witnesses


def test_class_sets(s3):
    sets = class_sets(s3)
    assert sorted(len(S) for S in sets) == [2, 3]
    assert all(S.is_conjugation_closed(s3) for S in sets)


@pytest.mark.parametrize("spec", ["sym:4", "q8", "dihedral:5", "cyclic:10", "wreath:3"])
def test_reports_recheck(spec):
    reps = run_corpus([spec], [c for c in CLAIMS if c != "SCALING"], seed=3, samples=3)
    assert reps
    for r in reps:
        assert recheck(r) == r.passed


def test_tampered_witnesses_fail_recheck(s3):
    r = check_normal_set(s3, TRANSPOSITIONS)
    bad = dataclasses.replace(r, witnesses={**r.witnesses, "set_factorial": 2})
    assert not recheck(bad)
    r = check_theorem_B(s3, subgroup_closure(s3, [C]), [T, C])
    bad = dataclasses.replace(r, witnesses={**r.witnesses, "diam_H": 5})
    assert not recheck(bad)


def test_rules_cover_claims():
    assert set(RULES) == set(CLAIMS)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["cyclic:12", "product:cyclic:4,cyclic:4", "elemab:3:2", "cyclic:30"]),
       st.data())
def test_abelian_bound_property(spec, data):
    G = construct(spec)
    S = data.draw(st.lists(st.sampled_from(G.elements), min_size=1, max_size=3, unique=True))
    S = GeneratingSet(tuple(S))
    from cayleylab.cayley import generates
    if generates(G, S):
        r = check_abelian_diameter(G, S)
        assert r.passed and recheck(r)
