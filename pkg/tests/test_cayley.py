import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cayleylab.cayley import (INFINITE, ball_distances, ball_profile, ceil_log2_multiple,
                              diameter, find_log_set, floor_power, growth_alpha,
                              growth_condition, iroot_floor, power_profile, power_sets)
from cayleylab.corpus import DEFAULT_CORPUS, sample_generating_sets
from cayleylab.elements import cycles, residue
from cayleylab.errors import PreconditionError
from cayleylab.groups import GeneratingSet, construct, quotient
from cayleylab.structure import normal_subgroups

from oracles import naive_ball_sizes, naive_powers

T, C = cycles(3, (0, 1)), cycles(3, (0, 1, 2))
SMALL_CORPUS = [s for s in DEFAULT_CORPUS if construct(s).order <= 200]


@pytest.fixture(scope="module")
def s3():
    return construct("sym:3")


@pytest.fixture
def expected(fixtures_dir):
    return json.loads((fixtures_dir / "expected.json").read_text())


def test_ball_examples(s3):
    C5 = construct("cyclic:5")
    assert list(ball_profile(C5, [residue(1)]).sizes) == [1, 2, 3, 4, 5]
    assert diameter(C5, [residue(1)]) == 4
    prof = ball_profile(s3, [T, C])
    assert list(prof.sizes) == [1, 3, 6] and prof.generates and prof.diameter == 2
    prof = ball_profile(s3, [C])
    assert list(prof.sizes)[-1] == 3 and not prof.generates
    assert diameter(s3, [C]) is INFINITE


def test_wreath_hand_value():
    G = construct("wreath:2")
    assert list(ball_profile(G, G.generators).sizes) == [1, 3, 5, 7, 8]


def test_power_examples(s3):
    assert list(power_profile(s3, [T, C], 3).sizes) == [2, 4, 6]
    assert list(power_profile(construct("cyclic:1000"), [residue(1)], 10).sizes) == [1] * 10
    G = construct("sym:4")
    assert list(power_profile(G, [G.identity], 6).sizes) == [1] * 6


def test_power_cap(s3):
    prof = power_profile(construct("sym:5"), construct("sym:5").generators, 20, cap=10)
    assert prof.cap_hit and len(prof.sizes) < 20


def test_growth_examples(s3):
    w = growth_condition(construct("cyclic:1000"), [residue(1)], 5, Fraction(1, 4))
    assert w.n == 1 and w.ratio == 1
    w = growth_condition(s3, [T, C], 3, 1)
    assert w.n == 1 and w.ratio == 3
    for spec in ("sym:4", "q8", "wreath:3"):
        G = construct(spec)
        assert growth_condition(G, G.generators, G.order, 1).n == 1
    with pytest.raises(PreconditionError):
        growth_condition(s3, [C], 5, Fraction(1, 4))


def test_exact_arithmetic():
    assert iroot_floor(80, 4) == 2 and iroot_floor(81, 4) == 3
    assert floor_power(16, Fraction(3, 4)) == 8
    assert floor_power(15, Fraction(3, 4)) == 7
    assert floor_power(0, Fraction(1, 2)) == 0
    assert growth_alpha(1) == 1 and growth_alpha(5 ** 8 - 1) == 1 and growth_alpha(5 ** 8) == 2
    assert ceil_log2_multiple(4, 720) == 38
    assert ceil_log2_multiple(1, 64) == 6 and ceil_log2_multiple(1, 65) == 7
    assert ceil_log2_multiple(Fraction(1, 2), 64) == 3


def test_find_log_set(expected):
    C64 = construct("cyclic:64")
    binary = [residue(2 ** i) for i in range(6)]
    assert diameter(C64, binary) == 6
    S = find_log_set(C64, 1, 1, trials=0, candidates=[binary])
    assert S is not None and diameter(C64, S) <= 6
    C2 = construct("cyclic:2")
    S = find_log_set(C2, 1, 1, trials=5)
    assert list(S) == [residue(1)] and diameter(C2, S) == 1
    rec = expected["find_log_set_sym6_c4_trials100_seed7"]
    G = construct("sym:6")
    S = find_log_set(G, 4, 4, trials=100, seed=7)
    assert S is not None and rec["found"]
    assert (len(S), diameter(G, S)) == (rec["size"], rec["diameter"])
    assert S.label.endswith(f":{rec['trial']}")


@pytest.mark.parametrize("spec", SMALL_CORPUS)
def test_ball_matches_naive_and_powers(spec):
    G = construct(spec)
    for S in sample_generating_sets(G, seed=0, count=3):
        prof = ball_profile(G, S)
        assert list(prof.sizes) == naive_ball_sizes(G, S)
        # B_n is the union of S^0..S^n
        union = {G.identity_index}
        for n, level in enumerate(power_sets(G, S, max(prof.diameter, 1)), start=1):
            union |= set(level.tolist())
            if n >= len(prof.sizes):
                break
            assert len(union) == prof.sizes[n]
        # counting bound: |B_d| <= (|S|+1)^d
        assert (len(S) + 1) ** prof.diameter >= G.order


@pytest.mark.parametrize("spec", ["sym:4", "q8", "dihedral:6", "wreath:3", "sl2:3",
                                  "product:sym:3,cyclic:4"])
def test_quotient_diameter_monotone(spec):
    G = construct(spec)
    S = GeneratingSet.standard(G)
    d = diameter(G, S)
    for N in normal_subgroups(G):
        Q = quotient(G, N)
        assert diameter(Q, [Q.project(s) for s in S]) <= d


def test_identity_in_s_makes_powers_balls():
    G = construct("sym:4")
    S = list(G.generators) + [G.identity]
    balls = list(ball_profile(G, S).sizes)
    powers = list(power_profile(G, S, len(balls) - 1).sizes)
    assert powers == balls[1:]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["sym:4", "dihedral:7", "q8", "wreath:3", "product:cyclic:4,cyclic:6"]),
       st.data())
def test_profiles_invariants(spec, data):
    G = construct(spec)
    S = data.draw(st.lists(st.sampled_from(G.elements), min_size=1, max_size=3, unique=True))
    prof = ball_profile(G, S)
    sizes = list(prof.sizes)
    assert sizes[0] == 1
    assert all(a < b for a, b in zip(sizes, sizes[1:]))
    assert prof.generates == (sizes[-1] == G.order)
    # independent of ordering
    assert list(ball_profile(G, list(reversed(S))).sizes) == sizes
    powers = list(power_profile(G, S, 6).sizes)
    assert powers == naive_powers(G, S, 6)
    assert all(1 <= p <= G.order for p in powers)
    assert all(b <= len(set(S)) * a for a, b in zip(powers, powers[1:]))
    dist = ball_distances(G, S)
    if prof.generates:
        assert int(dist.max()) == prof.diameter


def test_cyclic_diameters():
    for n in (5, 16, 64, 1000):
        assert diameter(construct(f"cyclic:{n}"), [residue(1)]) == n - 1
    assert math.isinf(INFINITE)
