"""Claim checkers producing self-certifying reports.

Every report's ``passed`` flag is computed by ``RULES[claim](witnesses)``,
so ``recheck(report)`` reproduces it from the witnesses alone. All pass/fail
arithmetic is exact (ints, Fractions, binomials); floats only appear in
fitted scaling exponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial

import numpy as np

from . import cayley
from .cayley import INFINITE, ball_distances, diameter, floor_power, growth_alpha, growth_scan
from .errors import CayleyLabError, LimitError, PreconditionError
from .groups import FiniteGroup, GeneratingSet, construct
from .structure import (all_subgroups, best_abelian_section, center, class_count_by_centralizers,
                        closure_mask, conjugacy_classes, conjugation_kernel, find_bt_witness,
                        schreier_generators, trivial_subgroup, whole_group)

CLAIMS = ("ABELIAN_DIAM", "THEOREM_B", "SCHREIER", "CONJ_BOUND", "NILP2", "NORMAL_SET",
          "BT_HYPOTHESIS", "BT_WITNESS", "SCALING")


@dataclass
class ClaimReport:
    claim: str
    instance: str
    passed: bool
    witnesses: dict = field(default_factory=dict)
    notes: str = ""


def _abelian_chain(w):
    return w["ab_order"] <= comb(w["diam_ab"] + w["m"], w["m"])


def _bt_hypothesis(w):
    if w["n_max"] != floor_power(w["diameter"], w["delta"]):
        return False
    if w["holds"]:
        return (w["n"] <= w["n_max"] and w["big"] <= w["theta"] * w["small"]
                and w["alpha"] == growth_alpha(w["diameter"]))
    return w["n_max"] == 0 or w["min_ratio"] > w["theta"]


def _bt_witness(w):
    if not w["growth"]:
        return True
    if w["radius"] != floor_power(w["diameter"], Fraction(1, 2) + w["delta"]):
        return False
    return bool(w["found"] and w["N_in_ball"] and w["H_over_N_abelian"]
                and w["index"] <= w["index_cap"])


def _aggregated(rule):
    def check(w):
        if "instances" in w:
            return w["failures"] == 0
        return rule(w)
    return check


RULES = {
    "ABELIAN_DIAM": lambda w: w["order"] <= comb(w["diameter"] + w["gens"], w["gens"]),
    "SCHREIER": _aggregated(lambda w: bool(w["in_H"] and w["generates_H"]
                               and w["schreier_size"] <= w["index"] * w["gens"]
                               and w["diam_H"] <= w["diam_G"])),
    "THEOREM_B": _aggregated(lambda w: (w["diam_G"] >= w["diam_H"] >= w["diam_ab"]
                            and w["m"] <= w["index"] * w["gens"] and _abelian_chain(w))),
    "CONJ_BOUND": lambda w: (w["index_violations"] == 0 and w["linear_violations"] == 0
                             and w["k_G"] == w["k_G_centralizers"]
                             and w["k_G"] * w["max_H_index"] >= w["max_H_k"] >= w["max_H_ab"]),
    "NILP2": lambda w: 0 <= w["nilpotency_class"] <= 2,
    "NORMAL_SET": lambda w: (not w["generates"]) or bool(
        w["kernel_order"] == w["center_order"] and w["kernel_is_center"]
        and w["order"] <= w["center_order"] * w["set_factorial"]
        and w["diam_G"] >= w["diam_Z"]
        and w["m"] <= w["set_size"] * (w["order"] // w["center_order"])
        and w["center_order"] <= comb(w["diam_Z"] + w["m"], w["m"])),
    "BT_HYPOTHESIS": _bt_hypothesis,
    "BT_WITNESS": _bt_witness,
    "SCALING": lambda w: w["violations"] == 0,
}


def _report(claim, instance, witnesses, notes=""):
    if "error" in witnesses:
        return ClaimReport(claim, instance, False, witnesses, notes)
    return ClaimReport(claim, instance, bool(RULES[claim](witnesses)), witnesses, notes)


def recheck(report: ClaimReport) -> bool:
    if "error" in report.witnesses:
        return False
    return bool(RULES[report.claim](report.witnesses))


def _label(G, S=None, H=None):
    parts = [G.id]
    if S is not None:
        parts.append("S=" + (S.label or "custom") + f"[{len(S)}]")
    if H is not None:
        parts.append(f"H=<{','.join(k.hex() for k in H.generator_keys)}>")
    return " ".join(parts)


def _as_set(S, label="custom"):
    return S if isinstance(S, GeneratingSet) else GeneratingSet(tuple(S), label=label)


def _require_generating(G, S):
    d = diameter(G, S)
    if d is INFINITE:
        raise PreconditionError(f"{_label(G, S)}: S does not generate G")
    return d


# -- single-instance checks ---------------------------------------------------------


def check_abelian_diameter(G: FiniteGroup, S) -> ClaimReport:
    """|G| <= C(diam + |S|, |S|): exponent vectors of total degree <= diam cover G."""
    S = _as_set(S)
    if not G.is_abelian():
        raise PreconditionError(f"{G.id} is not abelian")
    d = _require_generating(G, S)
    k = len(S)
    w = {"order": G.order, "diameter": d, "gens": k, "bound": comb(d + k, k),
         "literal_holds": int(d ** k >= G.order)}
    w["tight"] = int(w["bound"] == G.order)
    notes = "literal diam >= |G|^(1/|S|) " + ("holds" if w["literal_holds"] else "fails") \
        + " under the empty-product convention"
    return _report("ABELIAN_DIAM", _label(G, S), w, notes)


def check_schreier(G: FiniteGroup, H, S, diam_G=None) -> ClaimReport:
    S = _as_set(S)
    if diam_G is None:
        diam_G = _require_generating(G, S)
    data = schreier_generators(G, H, S)
    view = H.as_group()
    in_H = all(g in H for g in data.generators)
    prof = cayley.ball_profile(view, data.generators) if in_H else None
    w = {"order_G": G.order, "order_H": H.order, "index": H.index, "gens": len(S),
         "schreier_size": len(data.generators), "in_H": int(in_H),
         "generates_H": int(bool(prof and prof.generates)),
         "diam_G": diam_G, "diam_H": prof.diameter if prof and prof.generates else -1}
    return _report("SCHREIER", _label(G, S, H), w)


def check_theorem_B(G: FiniteGroup, H, S, diam_G=None) -> ClaimReport:
    """diam(G,S) >= diam(H,S-bar) >= diam(H/H', rho(S-bar)) and |H/H'| <= C(diam_ab + m, m)."""
    S = _as_set(S)
    if diam_G is None:
        diam_G = _require_generating(G, S)
    data = schreier_generators(G, H, S)
    diam_H = diameter(H.as_group(), data.generators)
    Q = H.abelianization
    images = GeneratingSet(tuple(Q.project(s) for s in data.generators))
    nonid = [x for x in images if x != Q.identity]
    diam_ab = diameter(Q, nonid)
    m = len(nonid)
    ab = Q.order
    w = {"order_G": G.order, "order_H": H.order, "index": H.index, "gens": len(S),
         "schreier_size": len(data.generators), "diam_G": diam_G, "diam_H": diam_H,
         "diam_ab": diam_ab, "ab_order": ab, "m": m, "bound": comb(diam_ab + m, m)}
    w["tight"] = int(w["bound"] == ab)
    # literal exponent form with c = 1: diam^(|G:H||S|) >= |H/H'|
    w["literal_holds"] = int(diam_G ** (H.index * len(S)) >= ab)
    return _report("THEOREM_B", _label(G, S, H), w)


def check_conjugacy_bound(G: FiniteGroup) -> ClaimReport:
    """k(G) >= k(H)/|G:H| and k(H) >= |H/H'| for every subgroup H."""
    kG = conjugacy_classes(G).count
    worst = None
    index_bad = linear_bad = 0
    subs = all_subgroups(G)
    for H in subs:
        kH = conjugacy_classes(H).count
        if kG * H.index < kH:
            index_bad += 1
        if kH < H.abelianization_order:
            linear_bad += 1
        ratio = Fraction(kH, H.index)
        if worst is None or ratio > worst[0]:
            worst = (ratio, H, kH)
    _, H, kH = worst
    w = {"k_G": kG, "k_G_centralizers": class_count_by_centralizers(G), "order": G.order,
         "subgroups": len(subs), "index_violations": index_bad, "linear_violations": linear_bad,
         "max_H_order": H.order, "max_H_index": H.index, "max_H_k": kH,
         "max_H_ab": H.abelianization_order}
    return _report("CONJ_BOUND", _label(G), w, "maximizing H attains the largest k(H)/|G:H|")


def check_lemma_nilp2(G: FiniteGroup) -> ClaimReport:
    best, H = best_abelian_section(G)
    cls = H.nilpotency_class
    w = {"order": G.order, "max_ab": best, "H_order": H.order,
         "nilpotency_class": -1 if cls is None else cls}
    return _report("NILP2", _label(G, H=H), w)


def check_normal_set(G: FiniteGroup, S) -> ClaimReport:
    S = _as_set(S)
    if not S.is_conjugation_closed(G):
        raise PreconditionError(f"{_label(G, S)}: S is not closed under conjugation")
    d = diameter(G, S)
    w = {"order": G.order, "set_size": len(S), "set_factorial": factorial(len(S)),
         "generates": int(d is not INFINITE)}
    if d is INFINITE:
        return _report("NORMAL_SET", _label(G, S), w, "S does not generate: vacuous")
    Z = center(G)
    K = conjugation_kernel(G, S)
    data = schreier_generators(G, Z, S)
    diam_Z = diameter(Z.as_group(), data.generators)
    w.update({"center_order": Z.order, "kernel_order": K.order, "kernel_is_center": int(K == Z),
              "quotient_order": Z.index, "diam_G": d, "diam_Z": diam_Z,
              "m": len(data.generators), "bound": comb(diam_Z + len(data.generators), len(data.generators))})
    w["tight"] = int(Z.index == w["set_factorial"])
    return _report("NORMAL_SET", _label(G, S), w)


# -- moderate growth and bounded-index witnesses ---------------------------------------


def check_bt_hypothesis(G: FiniteGroup, S, theta=5, delta=Fraction(1, 4)) -> ClaimReport:
    S = _as_set(S)
    theta, delta = Fraction(theta), Fraction(delta)
    d, rows = growth_scan(G, S, theta, delta)
    w = {"diameter": d, "theta": theta, "delta": delta, "n_max": len(rows), "holds": 0}
    for n, small, big in rows:
        if big <= theta * small:
            w.update(holds=1, n=n, small=small, big=big, alpha=growth_alpha(d))
            break
    else:
        w["min_ratio"] = min((Fraction(b, s) for _, s, b in rows), default=Fraction(0))
    return _report("BT_HYPOTHESIS", _label(G, S), w)


def check_bt(G: FiniteGroup, S, theta=5, delta=Fraction(1, 4), index_cap=2) -> ClaimReport:
    """If |S^5n| <= theta|S^n| for some n <= diam^delta, find normal N inside
    B_floor(diam^(1/2+delta)) and H >= N with H/N abelian and |G:H| <= index_cap."""
    S = _as_set(S)
    theta, delta = Fraction(theta), Fraction(delta)
    d = _require_generating(G, S)
    witness = cayley.growth_condition(G, S, theta, delta)
    radius = floor_power(d, Fraction(1, 2) + delta)
    w = {"diameter": d, "theta": theta, "delta": delta, "radius": radius,
         "index_cap": index_cap, "growth": int(witness is not None)}
    if witness is None:
        return _report("BT_WITNESS", _label(G, S), w, "growth hypothesis fails: vacuous")
    w["n"] = witness.n
    w["ratio"] = witness.ratio
    dist = ball_distances(G, S)
    ball = (dist >= 0) & (dist <= radius)
    found = find_bt_witness(G, index_cap, within=ball)
    w["found"] = int(found is not None)
    if found is not None:
        N, H = found
        w.update({"N_order": N.order, "H_order": H.order, "index": H.index,
                  "N_in_ball": int(N.issubset(ball)),
                  "H_over_N_abelian": int(H.derived.issubset(N))})
    else:
        w.update(N_in_ball=0, H_over_N_abelian=0, index=0)
    return _report("BT_WITNESS", _label(G, S), w)


# -- scaling ----------------------------------------------------------------------------


FAMILIES = {
    "CYCLIC": lambda n: f"cyclic:{n}",
    "DIHEDRAL": lambda n: f"dihedral:{n}",
    "WREATH": lambda n: f"wreath:{n}",
    "SL2": lambda p: f"sl2:{p}",
    "ELEMAB": lambda k: f"elemab:2:{k}",
}


@dataclass(frozen=True)
class ScalingRow:
    parameter: int
    group_order: int
    diameter: int
    log_order: float
    fit_exponent: float


def scaling_experiment(family: str, params, gens=None) -> list:
    """Exact diameters along a family plus the least-squares slope of log diam vs log |G|.

    ``gens`` maps a group to its GeneratingSet; the standard generators by default.
    """
    family = family.upper()
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    raw = []
    for p in params:
        G = construct(FAMILIES[family](p))
        S = gens(G) if gens else GeneratingSet.standard(G)
        raw.append((p, G.order, diameter(G, S)))
    raw.sort(key=lambda r: (r[1], r[0]))
    xs = np.log([r[1] for r in raw])
    ys = np.log([max(r[2], 1) for r in raw])
    slope = float(np.polyfit(xs, ys, 1)[0]) if len(raw) >= 2 and np.ptp(xs) > 0 else float("nan")
    return [ScalingRow(p, n, d, float(math.log(n)), slope) for p, n, d in raw]


def check_scaling(family: str, rows) -> ClaimReport:
    """CYCLIC: exponent in [0.95, 1.05]; WREATH: diam <= 4n; SL2: diam <= 4 log2|G|."""
    family = family.upper()
    w = {"rows": len(rows), "fit_exponent": rows[0].fit_exponent if rows else float("nan")}
    if family == "CYCLIC":
        w["violations"] = int(not 0.95 <= w["fit_exponent"] <= 1.05)
    elif family == "WREATH":
        w["violations"] = sum(r.diameter > 4 * r.parameter for r in rows)
        w["max_diam_over_n"] = max(Fraction(r.diameter, r.parameter) for r in rows)
    elif family == "SL2":
        w["violations"] = sum(2 ** r.diameter > r.group_order ** 4 for r in rows)
    else:
        w["violations"] = 0
    return _report("SCALING", f"{family} {[r.parameter for r in rows]}", w,
                   "empirical: asymptotic statements are represented by fitted rows")


# -- corpus sweep ----------------------------------------------------------------------


def run_corpus(corpus, claims=CLAIMS, seed: int = 0, samples: int = 8, max_order: int = 500,
               theta=5, delta=Fraction(1, 4), index_cap=2) -> list:
    """Deterministic sweep of claims over corpus groups and sampled generating sets.

    Subgroup-wide claims (SCHREIER, THEOREM_B) are aggregated into one report per
    (group, generating set). Instance errors become failed reports with an
    ``error`` witness instead of aborting the sweep.
    """
    from .corpus import resolve_entry, sample_generating_sets

    reports = []
    for entry in corpus:
        try:
            G, fixed = resolve_entry(entry)
        except CayleyLabError as exc:
            reports.append(_error_report("CORPUS", str(entry), exc))
            continue
        if G.order > max_order:
            continue
        if fixed is not None:
            gensets = [fixed]
        else:
            try:
                gensets = sample_generating_sets(G, seed, count=samples)
            except CayleyLabError as exc:
                reports.append(_error_report("CORPUS", G.id, exc))
                continue
        for claim in claims:
            try:
                reports.extend(run_claim(claim, G, gensets, theta, delta, index_cap))
            except CayleyLabError as exc:
                reports.append(_error_report(claim, G.id, exc))
    return reports


def _error_report(claim, instance, exc):
    kind = "limit" if isinstance(exc, LimitError) else "error"
    return ClaimReport(claim, instance, False, {"error": 1}, f"{kind}: {exc}")


def _aggregate(claim, G, S, checks):
    fails = [r for r in checks if not r.passed]
    w = {"instances": len(checks), "failures": len(fails),
         "tight": sum(r.witnesses.get("tight", 0) for r in checks)}
    return _report(claim, _label(G, S), w, "; ".join(r.instance for r in fails[:5]))


def run_claim(claim, G, gensets, theta, delta, index_cap):
    if claim == "ABELIAN_DIAM":
        if not G.is_abelian():
            return []
        return [check_abelian_diameter(G, S) for S in gensets]
    if claim in ("SCHREIER", "THEOREM_B"):
        check = check_schreier if claim == "SCHREIER" else check_theorem_B
        out = []
        for S in gensets:
            d = _require_generating(G, S)
            out.append(_aggregate(claim, G, S, [check(G, H, S, d) for H in all_subgroups(G)]))
        return out
    if claim == "CONJ_BOUND":
        return [check_conjugacy_bound(G)]
    if claim == "NILP2":
        return [check_lemma_nilp2(G)]
    if claim == "NORMAL_SET":
        return [check_normal_set(G, S) for S in class_sets(G)]
    if claim == "BT_HYPOTHESIS":
        return [check_bt_hypothesis(G, S, theta, delta) for S in gensets]
    if claim == "BT_WITNESS":
        return [check_bt(G, S, theta, delta, index_cap) for S in gensets]
    if claim == "SCALING":
        return []
    raise ValueError(f"unknown claim {claim!r}")


def class_sets(G: FiniteGroup) -> list:
    """Each non-identity conjugacy class as a conjugation-closed GeneratingSet."""
    out = []
    e = G.identity
    for key in conjugacy_classes(G).representatives:
        x = G.elements[G._enumeration[1][key]]
        if x == e:
            continue
        S = GeneratingSet((x,), label=f"class:{key.hex()}").conjugation_closure(G)
        out.append(GeneratingSet(S.elements, False, True, f"class:{key.hex()}"))
    return out


def summarize(reports) -> dict:
    return {"reports": len(reports), "passed": sum(r.passed for r in reports),
            "failed": sum(not r.passed for r in reports),
            "limit_errors": sum(r.notes.startswith("limit:") for r in reports if "error" in r.witnesses)}
