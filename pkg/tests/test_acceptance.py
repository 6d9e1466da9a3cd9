"""Acceptance criteria 1-10, one test each.

Each test prints ``ACCEPTANCE <n> PASS|FAIL <title>``; the lines are repeated in
the pytest terminal summary. Run directly with ``python tests/test_acceptance.py``
for the lines alone.
"""

import functools
import json
import sys
from fractions import Fraction
from math import comb, factorial
from pathlib import Path

import pytest

from cayleylab.cayley import diameter, find_log_set
from cayleylab.cli import run
from cayleylab.corpus import DEFAULT_CORPUS, product_corpus, sample_generating_sets
from cayleylab.elements import cycles, residue
from cayleylab.groups import GeneratingSet, construct, read_table
from cayleylab.structure import center, subgroup_closure
from cayleylab.verifier import (check_abelian_diameter, check_bt, check_conjugacy_bound,
                                check_lemma_nilp2, check_normal_set, check_scaling,
                                check_theorem_B, class_sets, recheck, run_corpus,
                                scaling_experiment)

sys.path.insert(0, str(Path(__file__).parent))
from oracles import naive_ball_sizes, naive_classes  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"
SEED = 2024
RESULTS = {}

ABELIAN_EXTRA = ["cyclic:128", "cyclic:500", "cyclic:512", "elemab:2:9", "elemab:3:5",
                 "product:cyclic:16,cyclic:32", "product:cyclic:6,cyclic:60",
                 "product:elemab:2:3,cyclic:63"]


def _corpus(max_order, extra=()):
    return [s for s in list(DEFAULT_CORPUS) + list(extra) if construct(s).order <= max_order]


def criterion(number, title):
    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            ok = False
            try:
                fn(*args, **kwargs)
                ok = True
            finally:
                line = f"ACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'} {title}"
                RESULTS[number] = line
                print(line)
        return inner
    return wrap


def _failures(reports):
    return [(r.instance, r.notes) for r in reports if not r.passed or recheck(r) != r.passed]


@criterion(1, "exact diameters of C_n, S3, W2")
def test_criterion_1_exact_diameters():
    for n in (5, 16, 64, 1000):
        G = construct(f"cyclic:{n}")
        assert diameter(G, [residue(1)]) == n - 1
    S3 = construct("sym:3")
    S = [cycles(3, (0, 1)), cycles(3, (0, 1, 2))]
    assert diameter(S3, S) == 2 == len(naive_ball_sizes(S3, S)) - 1
    W2 = construct("wreath:2")
    assert diameter(W2, W2.generators) == 4 == len(naive_ball_sizes(W2, W2.generators)) - 1


@criterion(2, "abelian binomial bound, order <= 512, <= 50 sets per group")
def test_criterion_2_abelian_bound():
    checked, bad = 0, []
    for spec in _corpus(512, ABELIAN_EXTRA):
        G = construct(spec)
        if not G.is_abelian():
            continue
        sets = sample_generating_sets(G, SEED, count=50, max_size=3)[:50]
        for S in sets:
            r = check_abelian_diameter(G, S)
            checked += 1
            if not r.passed or not recheck(r):
                bad.append(r.instance)
    tight = check_abelian_diameter(construct("cyclic:5"), [residue(1)])
    assert tight.passed and tight.witnesses["tight"] == 1
    assert checked > 300 and bad == []


@pytest.fixture(scope="module")
def sweep_200():
    specs = _corpus(200)
    return run_corpus(specs, ["SCHREIER", "THEOREM_B"], seed=SEED, samples=8)


@criterion(3, "Schreier generators for every subgroup, order <= 200")
def test_criterion_3_schreier(sweep_200):
    reps = [r for r in sweep_200 if r.claim == "SCHREIER"]
    assert sum(r.witnesses.get("instances", 0) for r in reps) > 2000
    assert _failures(reps) == []


@criterion(4, "THEOREM_B chain for every subgroup; S3/A3 tight")
def test_criterion_4_theorem_b(sweep_200):
    reps = [r for r in sweep_200 if r.claim == "THEOREM_B"]
    assert sum(r.witnesses.get("instances", 0) for r in reps) > 2000
    assert _failures(reps) == []
    S3 = construct("sym:3")
    r = check_theorem_B(S3, subgroup_closure(S3, [cycles(3, (0, 1, 2))]),
                        [cycles(3, (0, 1)), cycles(3, (0, 1, 2))])
    assert r.passed and r.witnesses["tight"] == 1
    assert r.witnesses["ab_order"] == 3 == comb(1 + 2, 2) == r.witnesses["bound"]


@criterion(5, "conjugacy bounds over all subgroups, order <= 500; k(SL2(F5)) = 9")
def test_criterion_5_conjugacy():
    bad = []
    for spec in _corpus(500):
        r = check_conjugacy_bound(construct(spec))
        if not r.passed or not recheck(r):
            bad.append(r.instance)
    assert bad == []
    G = construct("sl2:5")
    assert check_conjugacy_bound(G).witnesses["k_G"] == 9 == len(naive_classes(G))


@criterion(6, "best abelian section has class <= 2 (corpus, products <= 63, fixtures)")
def test_criterion_6_nilp2():
    groups = [construct(s) for s in _corpus(500)]
    groups += [construct(s) for s in product_corpus(63)]
    groups += [read_table(p) for p in sorted(FIXTURES.glob("*.tbl"))]
    assert len(groups) > 400
    bad = []
    for G in groups:
        r = check_lemma_nilp2(G)
        if not r.passed or not recheck(r):
            bad.append(r.instance)
    assert bad == []


@criterion(7, "normal sets: kernel = center, |G/Z| <= |S|!, chain; S3 gives 6 = 3!")
def test_criterion_7_normal_sets():
    bad, generating = [], 0
    for spec in _corpus(200):
        G = construct(spec)
        for S in class_sets(G):
            r = check_normal_set(G, S)
            generating += r.witnesses["generates"]
            if not r.passed or not recheck(r):
                bad.append(r.instance)
    assert bad == [] and generating > 20
    S3 = construct("sym:3")
    trans = [S for S in class_sets(S3) if len(S) == 3][0]
    r = check_normal_set(S3, trans)
    assert r.passed and r.witnesses["quotient_order"] == 6 == factorial(3)
    assert r.witnesses["tight"] == 1


@criterion(8, "BT shape with theta=5, delta=1/4, index cap 2; Q8 has N = Z in B_2")
def test_criterion_8_bt():
    specs = [s for s in _corpus(512, ABELIAN_EXTRA) if construct(s).is_abelian()]
    specs += ["sym:3", "q8", "dihedral:4"]
    bad, checked = [], 0
    for spec in specs:
        G = construct(spec)
        for S in sample_generating_sets(G, SEED, count=8):
            r = check_bt(G, S, 5, Fraction(1, 4), 2)
            checked += 1
            if not r.passed or not recheck(r):
                bad.append(r.instance)
    assert bad == [] and checked > 100
    Q8 = construct("q8")
    r = check_bt(Q8, GeneratingSet.standard(Q8), 5, Fraction(1, 4), 2)
    w = r.witnesses
    assert r.passed and w["growth"] == 1 and w["radius"] == 2
    assert w["N_order"] == center(Q8).order == 2 and w["N_in_ball"] == 1 and w["index"] == 1


@criterion(9, "scaling: cyclic exponent, wreath diam <= 4n, SL2 diam <= 4 log2|G|, log set")
def test_criterion_9_scaling():
    expected = json.loads((FIXTURES / "expected.json").read_text())
    rows = scaling_experiment("CYCLIC", [16, 32, 64, 128, 256, 512, 1024])
    assert 0.95 <= rows[0].fit_exponent <= 1.05 and check_scaling("CYCLIC", rows).passed
    rows = scaling_experiment("WREATH", range(2, 9))
    assert all(r.diameter <= 4 * r.parameter for r in rows)
    assert [r.diameter for r in rows] == expected["wreath_diameters_n2_to_8"]
    assert check_scaling("WREATH", rows).passed
    rows = scaling_experiment("SL2", [3, 5, 7, 11, 13])
    assert all(2 ** r.diameter <= r.group_order ** 4 for r in rows)
    assert [r.diameter for r in rows] == expected["sl2_diameters_p3_5_7_11_13"]
    assert check_scaling("SL2", rows).passed
    C64 = construct("cyclic:64")
    binary = [residue(2 ** i) for i in range(6)]
    S = find_log_set(C64, 1, 1, trials=0, candidates=[binary])
    assert S is not None and diameter(C64, S) <= 6


@criterion(10, "sweep with equal seeds gives byte-identical JSON")
def test_criterion_10_determinism(tmp_path):
    corpus = tmp_path / "corpus.txt"
    corpus.write_text("\n".join(_corpus(64)) + "\n")
    outs = []
    for i in range(2):
        out = tmp_path / f"sweep{i}.json"
        code = run(["sweep", "--corpus", str(corpus), "--seed", str(SEED), "--format", "json",
                    "--output", str(out), "--samples", "4"])
        assert code == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["summary"]["failed"] == 0


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
