"""Acceptance criteria, one test per criterion.

Each test prints a PASS/FAIL line; the same lines are collected into the
"acceptance criteria" section of the terminal summary.
"""

import csv
import io
import math

import numpy as np
import pytest

import oracles
from ellipbounds import quadrature as q
from ellipbounds.bounds import BoundFamily as F, bracket_k2
from ellipbounds.cli import main
from ellipbounds.core import (
    Modulus,
    agm,
    complete_e,
    complete_e_series,
    complete_k,
    complete_k_series,
    e_two_param,
    k_two_param,
)
from ellipbounds.lupas import check_lemma, closed_form_bracket, random_catalog_pair, reproduce_theorem_bracket
from ellipbounds.verify import GridSpec, compare_families, evaluate_grid, find_clamp_threshold, verify_family

HALF_PI = math.pi / 2
GRID_999 = np.arange(1, 1000) / 1000


def report(label, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {label}{': ' + detail if detail else ''}")
    assert ok, detail


def rel(x, y):
    return abs(x - y) / abs(y)


@pytest.mark.criterion("AC1 evaluator cross-agreement and golden values")
def test_ac1_evaluators(criterion):
    worst = 0.0
    for r in GRID_999:
        m = Modulus(r)
        k_vals = [complete_k(m), q.complete_k_quad(r)]
        e_vals = [complete_e(m), q.complete_e_quad(r)]
        if r <= 0.9:
            k_vals.append(complete_k_series(m))
            e_vals.append(complete_e_series(m))
        for vals in (k_vals, e_vals):
            worst = max(worst, max(rel(a, b) for a in vals for b in vals))
    golden = max(
        abs(complete_k(0.5) - oracles.K_HALF),
        abs(complete_e(0.5) - oracles.E_HALF),
        abs(complete_k(1 / math.sqrt(2)) - oracles.K_INV_SQRT2),
    )
    report("AC1", worst <= 1e-10 and golden <= 1e-11, f"max pairwise rel {worst:.2e}, golden abs {golden:.2e}")


@pytest.mark.criterion("AC2 E bracket sweep, 1e5 points")
def test_ac2_e_sweep(criterion):
    rep = verify_family(F.E_Eq31, GridSpec.uniform(100_000), tol=1e-13)
    report("AC2", rep.n_violations == 0 and rep.min_slack >= -1e-13,
           f"{rep.n_violations} violations, min slack {rep.min_slack:.3e}")


@pytest.mark.criterion("AC3 K bracket sweep and clamp threshold")
def test_ac3_k_sweep(criterion):
    rep = verify_family(F.K_Eq35, GridSpec.uniform(100_000), tol=1e-13)
    r_star = find_clamp_threshold(F.K_Eq35)
    err = abs(r_star - oracles.r_star_analytic())
    report("AC3", rep.n_violations == 0 and rep.n_clamped > 0 and err <= 1e-10,
           f"{rep.n_violations} violations ({rep.n_clamped} clamped), r* = {r_star:.15f}, |err| {err:.1e}")


@pytest.mark.criterion("AC4 E(r,s) bracket sweep and equality on r = s")
def test_ac4_e2_sweep(criterion):
    rep = verify_family(F.E2_Eq39, GridSpec.log2d(200), tol=1e-13)
    diag = verify_family(F.E2_Eq39, GridSpec.diagonal(200), tol=1e-13)
    # on r = s the bracket collapses onto the value: both slacks vanish
    diag_err = max(max(abs(row.slack_lower), abs(row.slack_upper))
                   for row in evaluate_grid(F.E2_Eq39, GridSpec.diagonal(200)))
    report("AC4", rep.n_violations == 0 and diag.n_violations == 0 and diag_err <= 1e-13,
           f"{rep.n_violations} violations on 200x200, min slack {rep.min_slack:.2e}, diagonal max |slack| {diag_err:.1e}")


@pytest.mark.criterion("AC5 K(r,s) variant adjudication")
def test_ac5_k2_variants(criterion):
    half = GridSpec.log2d(200, upper_half=True)
    derived = verify_family(F.K2_Eq311_derived, half)
    stated = verify_family(F.K2_Eq311_stated, half)
    literal_cert = verify_family(F.K2_Eq311_literal, half)
    literal_br = verify_family(F.K2_Eq313_literal, GridSpec.log2d(50, 0.5, 2.0))
    br = bracket_k2((1, 1), "literal")
    example = abs(br.upper - 0.8862) < 1e-4 and not br.contains(HALF_PI)
    axis = np.geomspace(1e-2, 1e2, 60)
    ordering = all(
        (s * s - r * r) ** 2 <= abs(s * s - r * r) * (s * s + r * r) for r in axis for s in axis if s > r
    )
    ok = (derived.holds and stated.holds and not literal_cert.holds and not literal_br.holds
          and literal_br.violations and example and ordering)
    report("AC5", ok,
           f"derived {derived.verdict}, stated {stated.verdict}, literal cert {literal_cert.n_violations} and "
           f"bracket {literal_br.n_violations} violations; first counterexample {literal_br.violations[0].params}")


@pytest.mark.criterion("AC6 comparison with the logarithmic baseline")
def test_ac6_baseline_comparison(criterion):
    lower = compare_families(F.E_Eq31, F.E_GuoQi, "lower", GridSpec.uniform(100_000))
    middle = compare_families(F.E_Eq31, F.E_GuoQi, "upper", GridSpec.uniform(10_001, 0.25, 0.75))
    full = compare_families(F.E_Eq31, F.E_GuoQi, "upper", GridSpec.uniform(100_000))
    ok = (lower.dominance == "A-dominates" and middle.dominance == "A-dominates"
          and full.dominance == "crossing" and len(full.crossing_points) >= 1)
    report("AC6", ok, f"lower {lower.dominance}, [1/4,3/4] upper {middle.dominance}, "
                      f"full upper crossings {[round(x, 12) for x in full.crossing_points]}")


@pytest.mark.criterion("AC7 Lupas lemma on random catalog pairs")
def test_ac7_lupas(criterion):
    rng = np.random.default_rng(20240601)
    failures = 0
    for _ in range(200):
        f, g, a, b = random_catalog_pair(rng)
        failures += not check_lemma(f, g, a, b).holds
    t = check_lemma(q.identity(), q.identity(), 0.0, 1.0)
    s = check_lemma(q.sin_power(1), q.sin_power(1), 0.0, HALF_PI)
    examples = (
        abs(t.gap - 1 / 12) < 1e-13 and abs(t.radius - 1 / math.pi**2) < 1e-14 and t.holds
        and abs(s.gap - 0.0947) < 1e-4 and abs(s.radius - 0.125) < 1e-13 and s.holds
    )
    report("AC7", failures == 0 and examples, f"{failures} failures in 200 pairs; sin/sin gap {s.gap:.6f}")


@pytest.mark.criterion("AC8 numeric pipeline matches the closed-form E bracket")
def test_ac8_pipeline(criterion):
    worst = 0.0
    inside = True
    for r in np.linspace(0.02, 0.98, 25):
        num = reproduce_theorem_bracket(F.E_Eq31, float(r))
        cf = closed_form_bracket(F.E_Eq31, float(r))
        inside &= cf.lower - 1e-9 <= num.lower and num.upper <= cf.upper + 1e-9
        worst = max(worst, abs(num.lower - cf.lower), abs(num.upper - cf.upper))
    report("AC8", inside and worst <= 1e-9, f"max endpoint difference {worst:.2e}")


@pytest.mark.criterion("AC9 structural identities")
def test_ac9_identities(criterion):
    axis = np.geomspace(1e-2, 1e2, 100)
    agm_err = max(rel(k_two_param(r, s) * agm(r, s), HALF_PI) for r in axis for s in axis)
    red_err = 0.0
    for r in GRID_999:
        m = Modulus(r)
        red_err = max(red_err, rel(k_two_param(1.0, m.r_comp), complete_k(m)),
                      rel(e_two_param(1.0, m.r_comp), complete_e(m)))
    rng = np.random.default_rng(9)
    hom_err = 0.0
    sym = True
    for r, s in 10.0 ** rng.uniform(-2, 2, (500, 2)):
        c = float(10.0 ** rng.uniform(-3, 3))
        hom_err = max(hom_err, rel(c * k_two_param(c * r, c * s), k_two_param(r, s)),
                      rel(e_two_param(c * r, c * s), c * e_two_param(r, s)))
        sym &= k_two_param(r, s) == k_two_param(s, r) and e_two_param(r, s) == e_two_param(s, r)
    ok = agm_err <= 1e-12 and red_err <= 1e-12 and hom_err <= 1e-12 and sym
    report("AC9", ok, f"agm {agm_err:.1e}, reduction {red_err:.1e}, homogeneity {hom_err:.1e}")


def _run(capsys, *argv):
    code = main(list(argv))
    out, _ = capsys.readouterr()
    return code, out


@pytest.mark.criterion("AC10 CLI contract")
def test_ac10_cli(criterion, capsys):
    codes = {
        "ok": _run(capsys, "verify", "--family", "e-eq31", "--points", "1000")[0],
        "violation": _run(capsys, "verify", "--family", "k2-eq313-literal", "--points", "20")[0],
        "usage": _run(capsys, "verify", "--family", "nosuch")[0],
        "domain": _run(capsys, "eval", "--kind", "K", "--r", "1.5")[0],
    }
    code, out = _run(capsys, "sweep", "--family", "k-eq35", "--points", "500")
    header_ok = out.splitlines()[0] == "family,r,s,lower,upper,reference,slack_lower,slack_upper,clamped"
    rows = list(csv.reader(io.StringIO(out)))[1:]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(out.splitlines()[0].split(","))
    for row in rows:
        w.writerow([row[0], *(format(float(x), ".17g") if x else "" for x in row[1:8]), row[8]])
    round_trip = buf.getvalue() == out
    seeded = _run(capsys, "lupas", "--random", "10", "--seed", "5", "--format", "json")
    seeded_again = _run(capsys, "lupas", "--random", "10", "--seed", "5", "--format", "json")
    ok = (codes == {"ok": 0, "violation": 2, "usage": 1, "domain": 1} and code == 0
          and header_ok and round_trip and seeded == seeded_again)
    with capsys.disabled():
        report("AC10", ok, f"exit codes {codes}, header {header_ok}, round trip {round_trip}, "
                           f"seeded rerun identical {seeded == seeded_again}")
