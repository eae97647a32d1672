"""Acceptance criteria, one test each; all checks are exact.

Each test records a PASS/FAIL line (shown in the pytest summary) before
asserting, so a failing criterion still reports what was measured.
"""

import random
from fractions import Fraction as Q

import pytest

from conftest import ACCEPTANCE
from oracles import exceptional_box, exceptional_dfs, normal_forms, sign_value_set

from neg4lat.lattice import LatticeClass, canonical_std, k_dot, pair, square
from neg4lat.spheres import (
    MULTIPLE_OF_EXCEPTIONAL,
    NOT_REPRESENTABLE,
    NSM_POSITIVE,
    load_table,
    screen,
    unit_meeting_exceptional,
    value_set,
    verify_table,
)
from neg4lat.surgery import (
    BlowdownScenario,
    InfeasibleScenario,
    InvariantState,
    Kappa,
    classify_minus4,
    kred_solve,
    minus4_blow_down,
    run_pipeline,
)
from neg4lat.weyl import (
    CREMONA,
    PAIR,
    Reflection,
    apply_word,
    enumerate_exceptional,
    orbit_equivalent,
    reduce,
    reflect,
    step_from_json,
)


def C(*t):
    return LatticeClass(t[0], tuple(t[1:]))


def record(n, ok, detail):
    ACCEPTANCE[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, detail


TABLE = load_table()


def test_criterion_1_table_integrity():
    bad = []
    for e in TABLE:
        nonzero = sum(1 for v in e.xi.b if v)
        if square(e.xi) != -4 or nonzero != e.rel_min_k:
            bad.append(f"{e.xi} (square {square(e.xi)}, {nonzero} nonzero vs k={e.rel_min_k})")
    ok = len(TABLE) == 25 and not bad
    record(1, ok, f"{len(TABLE)} rows transcribed (25 expected); violations: {bad or 'none'}")


def test_criterion_2_value_sets():
    problems = []
    expect = {C(2, 2, 1, 1, 1, 1): {-12, -8, 0, 4}, C(3, 2, 2, 1, 1, 1, 1, 1): {-18, -14, -10, 0, 4, 8}}
    for xi, want in expect.items():
        got = set(value_set(xi).values)
        if got != want or got != sign_value_set(xi.a, xi.b):
            problems.append(f"{xi}: {sorted(got)}")
    # rows marked N whose exclusion rests on the value set (all but the multiple (0,2))
    argued = [e.xi for e in TABLE if e.sympl_rep == "N" and e.xi != C(0, 2)]
    for named in (C(5, 4, 2, 2, 2, 1), C(9, 8, 2, 2, 2, 2, 2, 1), C(5, 3, 2, 2, 2, 2, 1, 1, 1, 1)):
        if named not in argued:
            problems.append(f"{named} missing from table")
    for xi in argued:
        if 2 in value_set(xi) or 2 in sign_value_set(xi.a, xi.b):
            problems.append(f"2 in value set of {xi}")
        elif screen(xi).outcome != NOT_REPRESENTABLE:
            problems.append(f"{xi} not screened out")
    record(2, not problems, f"{len(argued)} N rows exclude 2; problems: {problems or 'none'}")


def test_criterion_3_multiples():
    expect = {
        C(4, 2, 2, 2, 2, 2): (-2, C(2, 1, 1, 1, 1, 1)),
        C(6, 4, 2, 2, 2, 2, 2, 2): (-2, C(3, 2, 1, 1, 1, 1, 1, 1)),
        C(0, 2): (-2, LatticeClass.exceptional(0, 1)),
    }
    problems = []
    for xi, want in expect.items():
        v = screen(xi)
        m, e = v.multiple or (None, None)
        replay = all(w.multiple[0] * w.multiple[1] == w.xi_tilde for w in v.witnesses)
        if v.outcome != MULTIPLE_OF_EXCEPTIONAL or (m, e) != want or not replay:
            problems.append(f"{xi}: {v.outcome} {m} {e}")
    record(3, not problems, f"factorizations {'match' if not problems else problems}")


def test_criterion_4_nsm_positive():
    flagged = [e.xi for e in TABLE if e.nsm_positive]
    good, bad = [], []
    for xi in flagged:
        if square(xi) != -4:
            bad.append(f"{xi}: square {square(xi)}, cannot be screened")
            continue
        v = screen(xi)
        ok = v.outcome == NSM_POSITIVE and v.meeting is not None
        if ok:
            xt, e = v.meeting
            ok = pair(e, xt) == 1 and square(e) == -1 and k_dot(e) == -1 and k_dot(xt) == 2
        (good if ok else bad).append(f"{xi}: {v.outcome}")
    record(4, not bad, f"{len(good)}/{len(flagged)} rows flagged >0 are nsm-positive; others: {bad or 'none'}")


def test_criterion_5_enriques_class():
    v = C(6, *[2] * 10)
    oracle = exceptional_dfs(10, 6)
    catalog = enumerate_exceptional(10, 6)
    same = sorted((e.a, e.b) for e in catalog) == oracle
    pairs = {pair(e, v) for e in catalog}
    ok = (square(v) == -4 and k_dot(v) == 2 and v == -2 * canonical_std(10)
          and unit_meeting_exceptional(v, 6) == [] and same and len(catalog) >= 1 and pairs == {2})
    # the size is whatever the oracle finds; it is well above the 527 quoted as an upper bound
    record(5, ok, f"catalog size {len(catalog)} (oracle {len(oracle)}, equal={same}); "
                  f"pair values {sorted(pairs)}; no unit meeting")


def test_criterion_6_surgery_arithmetic():
    checks = []
    for ks, kw, area in [(-1, 5, 4), (0, Q(-3), Q(1, 3)), (7, Q(2, 9), 11)]:
        m = minus4_blow_down(InvariantState(ks, kw), area)
        checks.append(m.K_sq == ks + 1 and m.K_omega == Q(kw) + Q(area) / 2)
    out = run_pipeline([
        {"op": "init", "K_sq": 0, "K_omega": "-3"},
        {"op": "blow_up", "area": "1/2"},
        {"op": "minus4", "area": "2"},
        {"op": "blow_up", "area": "1/3"},
        {"op": "minus4", "area": "7/3", "minimal": True},
    ])
    checks.append(out["final"]["K_sq"] == 0)
    checks.append(kred_solve(9, 9) == 1 and kred_solve(8, 9) == 2)
    record(6, all(checks), f"minus4 deltas, Enriques chain K^2={out['final']['K_sq']}, "
                           f"kred (1, 2) = ({kred_solve(9, 9)}, {kred_solve(8, 9)})")


SCENARIOS = [
    ((0, 0, 1), Kappa.ONE),
    ((0, 2, 2), Kappa.ZERO),
    ((1, 0, 0), Kappa.TWO),
    ((1, 0, 1), Kappa.ONE),
    ((2, 0, 0), Kappa.TWO),
    ((2, 0, 1), Kappa.TWO),
]


def test_criterion_7_classifier():
    wrong = []
    for (kx, n, k), want in SCENARIOS:
        got = classify_minus4(BlowdownScenario(Kappa(kx), n, k)).kappa_M
        if got != want:
            wrong.append(f"{(kx, n, k)} -> {got}, want {want}")
    try:
        classify_minus4(BlowdownScenario(Kappa.ZERO, 0, 0))
        wrong.append("(0,0,0) accepted")
    except InfeasibleScenario:
        pass
    record(7, not wrong, f"{len(SCENARIOS)} scenarios + infeasible (0,0,0); problems: {wrong or 'none'}")


def test_criterion_8_properties():
    rng = random.Random(20240611)
    bad_a = 0
    for _ in range(10_000):
        k = rng.randint(2, 10)
        x = C(*[rng.randint(-30, 30) for _ in range(k + 1)])
        y = C(*[rng.randint(-30, 30) for _ in range(k + 1)])
        if k == 2 or rng.random() < 0.3:
            r = Reflection(PAIR, tuple(rng.sample(range(k), 2)))
        else:
            r = Reflection(CREMONA, tuple(rng.sample(range(k), 3)))
        if pair(reflect(x, r), reflect(y, r)) != pair(x, y):
            bad_a += 1

    swept, bad_b = 0, 0
    for k in range(11):
        for a, b in normal_forms(k, -4, -12, 12):
            r = reduce(C(a, *b))
            swept += 1
            if reduce(r) != r or square(r) != -4:
                bad_b += 1

    bad_c = [(k, am) for k in range(8) for am in range(5)
             if sorted((e.a, e.b) for e in enumerate_exceptional(k, am)) != exceptional_box(k, am)]
    ok = bad_a == 0 and bad_b == 0 and not bad_c
    record(8, ok, f"(a) 10000 pairs, {bad_a} bad; (b) {swept} classes, {bad_b} bad; (c) oracle mismatches {bad_c}")


def test_criterion_9_orbit_finding():
    x, y = C(0, 1, 1, 1, 1), C(3, 2, 2, 2, 1)
    v = orbit_equivalent(x, y, a_cap=12, allow_global_sign=True)
    replay = v.equivalent and apply_word(x, v.witness) == y
    report = verify_table(TABLE, a_cap=12)
    found = [f for f in report["orbit_findings"] if f["k"] == 4
             and {tuple([f["x"]["a"]] + f["x"]["b"]), tuple([f["y"]["a"]] + f["y"]["b"])}
             == {(0, 1, 1, 1, 1), (3, 2, 2, 2, 1)}]
    emitted = bool(found) and apply_word(
        C(found[0]["x"]["a"], *found[0]["x"]["b"]),
        [step_from_json(s) for s in found[0]["witness"]]) == C(found[0]["y"]["a"], *found[0]["y"]["b"])
    record(9, replay and emitted, f"status {v.status}, witness length {len(v.witness or ())}, "
                                  f"report finding emitted={emitted}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-rN"]))
