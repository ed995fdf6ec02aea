"""Acceptance suite: eight exact checks, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python tests/test_acceptance.py``.  All comparisons are exact integer
equalities of dimensions computed over Q.
"""
import random
import sys
import time
from math import comb

import pytest

from localduality import BiDegree, Ring, cyclic, direct_sum, free, hilbert_table, reverse
from localduality.cech import CechComplexSlice, local_cohomology, verify_prop1
from localduality.derham import DRComplex, compute_m_bound, dr_cohomology, verify_final_prop
from localduality.groebner import composite_is_zero, free_resolution, minimalize
from localduality.homology import cm_check, ext_dim, selfdual_scan
from localduality.modules import make_presentation
from localduality.sampling import conormal_example, random_presentation, standard_modules
from localduality.verify import cmd_verify_derham, cmd_verify_duality, default_window

R11 = Ring(1, 1)


def corpus():
    for md in (1, 2):
        for name, G in standard_modules(md, md).items():
            yield f"{name} m=d={md}", G


def announce(capsys, n, failures, elapsed, limit, what):
    ok = not failures and elapsed < limit
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {what} ({elapsed:.2f}s, limit {limit}s)"
    if failures:
        line += f"; first failure: {failures[0]}"
    with capsys.disabled():
        print("\n" + line)
    return ok


def timed(fn):
    start = time.perf_counter()
    failures = fn()
    return failures, time.perf_counter() - start


# -- 1 ------------------------------------------------------------------


def check_free_local_cohomology():
    bad = []
    for d in (1, 2, 3):
        S = free(Ring(0, d))
        for k in range(-d - 4, -d + 1):
            deg = BiDegree(0, k)
            for i in range(d + 1):
                want = comb(-k - 1, d - 1) if i == d else 0
                got = local_cohomology(S, i, deg).dim
                if got != want:
                    bad.append(f"d={d} H^{i} at t={k}: {got} != {want}")
    return bad


def test_criterion_1_free_local_cohomology(capsys):
    bad, t = timed(check_free_local_cohomology)
    assert announce(capsys, 1, bad, t, 5, "H^i_X of free S matches binomial counts, d = 1, 2, 3"), bad


# -- 2 ------------------------------------------------------------------


def check_four_term():
    bad = []
    for name, G in corpus():
        w = default_window(G)
        rep = verify_prop1(G, w.xs, w.ts)
        if not rep.passed:
            bad.append(f"{name}: {rep.first_failure()}")
    rng = random.Random(2024)
    for i in range(25):
        md = rng.choice([1, 2])
        G = random_presentation(rng, md, md)
        w = default_window(G)
        rep = verify_prop1(G, w.xs, w.ts)
        if not rep.passed:
            bad.append(f"random #{i}: {rep.first_failure()}")
    return bad


def test_criterion_2_four_term_sequence(capsys):
    bad, t = timed(check_four_term)
    assert announce(capsys, 2, bad, t, 120, "four-term sequence on corpus and 25 random presentations"), bad


# -- 3 ------------------------------------------------------------------


def expected_rows(name, a, k):
    """Hand-derived (G, Gamma_*, D(Ghat), D^1(Ghat)) for the three CM examples."""
    if name == "S/(x1)":
        if a != 0:
            return [0, 0, 0, 0]
        return [0, 1, 0, 1] if k <= -1 else [1, 1, 0, 0]
    if name == "S/(t1)":
        g = int(a >= 0 and k == 0)
        return [g, 0, g, 0]
    # S/(x1, t2) = Q[x2][t1]: H^1 is Q[x2] t1^{<0}, Gamma_* is Q[x2][t1^{+-1}]
    if a < 0:
        return [0, 0, 0, 0]
    return [int(k >= 0), 1, 0, int(k <= -1)]


def check_cm_duality():
    bad = []
    cases = [("S/(x1)", cyclic(R11, "x1")), ("S/(t1)", cyclic(R11, "t1")), ("S/(x1,t2)", conormal_example())]
    for name, G in cases:
        res = cm_check(G)
        if not res.is_cm or res.nonzero != [G.ring.d]:
            bad.append(f"{name}: Ext nonzero in {res.nonzero}")
            continue
        rep = cmd_verify_duality(G, default_window(G))
        if not rep.passed:
            bad.append(f"{name}: {rep.first_failure()}")
        ids = {r.check_id.split(":")[0] for r in rep.records}
        need = {"duality.i", "duality.ii", "duality.iv"} | ({"duality.iii"} if G.ring.d >= 2 else set())
        if not need <= ids:
            bad.append(f"{name}: missing checks {sorted(need - ids)}")
        for a, k, *dims in rep.tables["dims[x,t,G,Gamma,D0,D1]"]:
            want = expected_rows(name, a, k)
            if dims != want:
                bad.append(f"{name} at ({a},{k}): {dims} != {want}")
    return bad


def test_criterion_3_cm_duality(capsys):
    bad, t = timed(check_cm_duality)
    assert announce(capsys, 3, bad, t, 30, "duality checks (i)-(iv) on S/(x1), S/(t1), S/(x1,t2)"), bad


# -- 4 ------------------------------------------------------------------


def check_non_cm_euler():
    bad = []
    G = direct_sum(cyclic(R11, "x1", "t1"), free(R11))
    cases = [("S/(x1,t1)+S", G)]
    rng = random.Random(4)
    while len(cases) < 11:
        md = rng.choice([1, 2])
        H = random_presentation(rng, md, md)
        if not cm_check(H).is_cm:
            cases.append((f"random non-CM #{len(cases)}", H))
    for name, H in cases:
        if cm_check(H).is_cm:
            bad.append(f"{name} is CM")
            continue
        rep = cmd_verify_duality(H, default_window(H))
        if not rep.passed:
            bad.append(f"{name}: {rep.first_failure()}")
        if not any(r.check_id == "duality.spectral_euler" for r in rep.records):
            bad.append(f"{name}: Euler identity not run")
    return bad


def test_criterion_4_non_cm_euler_identity(capsys):
    bad, t = timed(check_non_cm_euler)
    assert announce(capsys, 4, bad, t, 120, "spectral-sequence Euler identity on 11 non-CM modules"), bad


# -- 5 ------------------------------------------------------------------


def check_selfdual():
    bad = []
    xs, ts = range(-3, 4), range(-4, 5)
    for name, G, want in [("S/(t1)", cyclic(R11, "t1"), [1]), ("S/(x1)", cyclic(R11, "x1"), [2])]:
        got = selfdual_scan(G, range(-3, 6), xs, ts).matches
        if got != want:
            bad.append(f"{name}: {got} != {want}")
    return bad


def test_criterion_5_selfduality_weights(capsys):
    bad, t = timed(check_selfdual)
    assert announce(capsys, 5, bad, t, 10, "self-duality weight 1 for S/(t1), 2 for S/(x1)"), bad


# -- 6 ------------------------------------------------------------------


def check_dr_free():
    bad = []
    for d in (1, 2, 3):
        for m in (0, 1):
            S = free(Ring(m, d))
            for a in range(0, 3):
                for k in range(-d - 3, 3):
                    deg = BiDegree(a, k)
                    for j in range(-d, 1):
                        want = len(S.ring.monomials(BiDegree(a, 0))) if (j == 0 and k == -d) else 0
                        got = dr_cohomology(S, j, deg)
                        if got != want:
                            bad.append(f"m={m} d={d} H^{j} at ({a},{k}): {got} != {want}")
    return bad


def test_criterion_6_dr_of_free_is_acyclic(capsys):
    bad, t = timed(check_dr_free)
    assert announce(capsys, 6, bad, t, 10, "DR(S) has cohomology only in degree 0 at t = -d"), bad


# -- 7 ------------------------------------------------------------------


def check_derham():
    bad = []
    for name, G in corpus():
        rep = cmd_verify_derham(G, default_window(G))
        if not rep.passed:
            bad.append(f"{name}: {rep.first_failure()}")
        if not any(r.check_id.startswith("der3") for r in rep.records):
            bad.append(f"{name}: vanishing bound not run")
    for name, G, w in [("S/(x1)", cyclic(R11, "x1"), 2), ("S/(t1)", cyclic(R11, "t1"), 1)]:
        m_bound, n = compute_m_bound(G), w - G.ring.d
        rep = verify_final_prop(G, m_bound, n, range(0, 4), range(-4, 6))
        ks = {r.bidegree[1] for r in rep.records if r.check_id == "final.slice_exact"}
        if not rep.passed:
            bad.append(f"{name}: {rep.first_failure()}")
        if ks != set(range(m_bound - n, 6)):
            bad.append(f"{name}: slices checked {sorted(ks)}")
    return bad


def test_criterion_7_derham_identities(capsys):
    bad, t = timed(check_derham)
    assert announce(capsys, 7, bad, t, 60, "de Rham vanishing, dual Euler and E1 checks on corpus, slice exactness past m_bound - n"), bad


# -- 8 ------------------------------------------------------------------


def engine_checks(G, rng, label, ext_window):
    bad = []
    R = free_resolution(G)
    M = minimalize(R)
    if not (composite_is_zero(R) and composite_is_zero(M)):
        bad.append(f"{label}: d o d != 0 in resolution")
    for q in range(len(M.ranks()) + 1):
        for a in ext_window[0]:
            for b in ext_window[1]:
                deg = BiDegree(a, b)
                e1, e2 = ext_dim(G, q, deg, resolution=R), ext_dim(G, q, deg, resolution=M)
                if e1 != e2:
                    bad.append(f"{label}: Ext^{q} at {deg}: Schreyer {e1}, minimal {e2}")
    for deg in (BiDegree(0, -2), BiDegree(1, 0), BiDegree(2, 1)):
        if not CechComplexSlice(G, deg, 3).dd_is_zero():
            bad.append(f"{label}: Cech d o d != 0 at {deg}")
        if not DRComplex(G).dd_is_zero(deg):
            bad.append(f"{label}: DR d o d != 0 at {deg}")
    cols = list(G.relations.columns)
    rng.shuffle(cols)
    H = make_presentation(G.ring, G.shifts, cols, canonical=False)
    xs, ts = range(0, 3), range(-1, 4)
    base = hilbert_table(G, xs, ts)
    if hilbert_table(H, xs, ts) != base:
        bad.append(f"{label}: pieces change under column permutation")
    if hilbert_table(reverse(G), xs, ts) != base:
        bad.append(f"{label}: pieces change under reverse")
    return bad


def check_engine():
    bad = []
    rng = random.Random(8)
    for name, G in corpus():
        bad += engine_checks(G, rng, name, (range(-4, 2), range(-4, 3)))
    for i in range(100):
        md = rng.choice([1, 2])
        G = random_presentation(rng, md, md)
        bad += engine_checks(G, rng, f"random #{i}", (range(-3, 1), range(-3, 1)))
    return bad


def test_criterion_8_engine_self_consistency(capsys):
    bad, t = timed(check_engine)
    assert announce(capsys, 8, bad, t, 120, "resolution independence, d o d = 0, invariance on corpus + 100 random"), bad


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
