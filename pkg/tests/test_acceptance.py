"""Acceptance criteria 1-9, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are repeated in the pytest
terminal summary.
"""

import math
import time
from fractions import Fraction

import numpy as np

from symplab import atlas, floerdata as fd, invariants as inv
from symplab.calculus import SmoothMap, pullback_two_form
from symplab.cli import run
from symplab.geomcore import make_rng

SEED = 7


def _statuses(ids, samples=1000):
    reports = run(ids, samples=samples, seed=SEED, parallel=False)
    bad = [f"{r.id}={r.status}" for r in reports if r.status != "pass"]
    return reports, bad


def test_criterion_1_symplectomorphisms(acceptance_report):
    maps = ["phi1", "Phi2", "PsiP", "Phi1bar", "psi", "psiP", "ThetaDelta", "ThetaQ", "Thetap", "Psi", "h1"]
    per_map, tol = 1000, 1e-5
    t0 = time.perf_counter()
    worst = {}
    for j, mid in enumerate(maps):
        e = atlas.catalog(2)[mid]
        m = SmoothMap(mid, e.domain, e.codomain, e.fn)
        rng = make_rng(SEED, "acceptance-1", j)
        w = 0.0
        for _ in range(per_map):
            x = e.sampler(rng)
            b = e.domain.tangent_basis(x)
            v = b @ rng.standard_normal(b.shape[1])
            u = b @ rng.standard_normal(b.shape[1])
            v, u = v / np.linalg.norm(v), u / np.linalg.norm(u)
            w = max(w, abs(pullback_two_form(m, e.codomain_form, x, v, u) - e.domain_form(x, v, u)))
        worst[mid] = w
    elapsed = time.perf_counter() - t0
    ok = max(worst.values()) <= tol and elapsed <= 60
    acceptance_report(1, ok, f"{len(maps)} maps x {per_map} triples, worst residual "
                             f"{max(worst.values()):.2e} <= {tol:g}, {elapsed:.1f}s <= 60s")
    assert ok, (worst, elapsed)


def test_criterion_2_torus_equalities(acceptance_report):
    ids = ["thm-1.1-af", "prop-4.1-set-equal", "thm-1.1-fooo", "prop-2.4-cs", "thm-1.2-wu", "prop-3.6-cs"]
    ids += [f"thm-1.3-lift?k={k}&m={m}" for k, m in ((0, 1), (1, 1), (0, 2), (1, 2))]
    reports, bad = _statuses(ids, samples=200)
    worst = max(r.metric for r in reports)
    ok = not bad and worst <= 1e-10
    acceptance_report(2, ok, f"{len(reports)} set equalities, worst residual {worst:.2e} <= 1e-10")
    assert ok, bad


def test_criterion_3_areas(acceptance_report):
    reports, bad = _statuses([f"lemma-3.5-area?alpha={a!r}" for a in (0.25, 1 / 3, 0.5)]
                             + [f"prop-6.5-area?a={a}" for a in (0.1, 0.3, 0.5, 0.7, 0.9)])
    errs = [r.metric for r in reports]
    d_prime = abs(inv.disk_area(inv.d_prime_disk()) - math.pi / 2)
    u1 = abs(inv.disk_area(inv.u_disk(1, 1, 1, 0.5)) - math.pi)
    worst = max(errs + [d_prime, u1])
    ok = not bad and worst <= 1e-6
    acceptance_report(3, ok, f"C_alpha x3, bent-form circles x5, D' and u1 areas, worst error {worst:.2e} <= 1e-6")
    assert ok, (bad, d_prime, u1)


def test_criterion_4_maslov(acceptance_report):
    got = {}
    for k, m in ((0, 1), (1, 1), (0, 2)):
        got[("u1", k, m)] = (inv.maslov_disk(inv.u_disk(1, k, m)), 2 * (k + m))
        got[("u3", k, m)] = (inv.maslov_disk(inv.u_disk(3, k, m)), 0)
        if k > 0:
            got[("u2", k, m)] = (inv.maslov_disk(inv.u_disk(2, k, m)), 0)
    got[("torus",)] = (inv.maslov_disk(inv.standard_torus_disk([1.0, 0.5, 0.7]), n_theta=256, n_rad=64), 2)
    wrong = {k: v for k, v in got.items() if v[0] != v[1]}
    ok = not wrong
    acceptance_report(4, ok, f"{len(got)} Maslov indices integer-exact ({len(wrong)} mismatches)")
    assert ok, wrong


def test_criterion_5_monotone_radii(acceptance_report):
    bad = []
    for m in range(4):
        for k in range(m + 1):
            if k + m == 0:
                continue
            if inv.quadric_monotone_radius(k, m) != 1 - Fraction(1, k + m + 1):
                bad.append(("Q", k, m))
            if inv.projective_monotone_radius(k, m) != 1 - Fraction(2, k + m + 2):
                bad.append(("P", k, m))
    _, bad_min = _statuses(["sec-5-minimal-maslov"])
    ok = not bad and not bad_min
    acceptance_report(5, ok, "exact monotone radii for 0 <= k <= m <= 3 and minimal Maslov numbers")
    assert ok, (bad, bad_min)


def test_criterion_6_displaceability(acceptance_report):
    threshold = [n for n in range(1, 10) if inv.displaceability_criterion(2 * np.pi / (n + 1), np.pi, np.pi)]
    certs = {}
    for kind, k, m in (("Q", 0, 2), ("Q", 0, 3), ("P", 1, 2), ("P", 0, 3)):
        c = inv.displacement_isotopy(kind, k, m, seed=SEED)
        certs[(kind, k, m)] = c.passed and c.area_drift <= 1e-6 and c.min_separation > 0.01
    refused = {(k, m): inv.displacement_isotopy("P", k, m, seed=SEED).refused for k, m in ((1, 1), (0, 2))}
    ok = threshold == list(range(4, 10)) and all(certs.values()) and all(refused.values())
    acceptance_report(6, ok, f"criterion threshold n >= {threshold[0] if threshold else '?'}, "
                             f"{sum(certs.values())}/4 certificates, {sum(refused.values())}/2 refusals")
    assert ok, (threshold, certs, refused)


def test_criterion_7_class_lattice_and_superpotential(acceptance_report):
    five = fd.enumerate_maslov2_positive("CP3_L11")
    only_d = all([c.label() for c in fd.enumerate_maslov2_positive(f"CP{m + 1}_L0{m}")] == ["D"] for m in (2, 3))
    worst = 0.0
    for s in fd.all_sign_vectors():
        for p in fd.critical_points(s):
            worst = max(worst, float(np.linalg.norm(fd.superpotential_grad(s, p))))
    no_crit = not fd.monomial_has_critical_points((0, 0, 1)) and not fd.monomial_has_critical_points((0, 0, -1))
    parity = fd.n_parity_check()
    ok = len(five) == 5 and only_d and worst <= 1e-12 and no_crit and parity == 1
    acceptance_report(7, ok, f"{len(five)} classes in CP^3, only D for m = 2, 3, critical-point gradient "
                             f"{worst:.1e} <= 1e-12 over 32 sign vectors, +-t_D critical-point free, n = {parity}")
    assert ok


def test_criterion_8_moment_maps(acceptance_report):
    reports, bad = _statuses(["sec-7-moment", "prop-6.4-moment", "eq-1-identity", "eq-4-helper", "eq-5-image"])
    tols = {"sec-7-moment": 1e-10, "prop-6.4-moment": 1e-10}
    over = [r.id for r in reports if r.metric > tols.get(r.id, 1e-12)]
    ok = not bad and not over and all(r.samples >= 1000 for r in reports if r.id in tols)
    acceptance_report(8, ok, "moment-map identities and norms <= 1e-10 on 1000 samples; "
                             "three closed-form identities <= 1e-12")
    assert ok, (bad, over)


def test_criterion_9_full_run(acceptance_report):
    t0 = time.perf_counter()
    reports = run(["all"], samples=1000, seed=SEED)
    elapsed = time.perf_counter() - t0
    failed = [r.id for r in reports if r.status != "pass"]
    ok = not failed and elapsed <= 300
    acceptance_report(9, ok, f"run all --seed 7: {len(reports)} checks, {len(failed)} failures, "
                             f"{elapsed:.0f}s <= 300s")
    assert ok, failed
