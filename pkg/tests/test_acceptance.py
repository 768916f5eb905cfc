"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` (lines are printed even without -s).
"""

import itertools
import json
import random
import time
from math import isqrt

import pytest

from cyctower import cli
from cyctower.certify import (
    PROVED,
    ArithmeticInvariants,
    euler_char_valuation,
    exceptional_genera,
    is_genus_exceptional,
    lambda_zero_criterion,
    m0_bound,
)
from cyctower.errors import InconsistentInputError
from cyctower.finite_field import primes_in_range
from cyctower.hyperelliptic import (
    LocalData,
    count_points,
    det_mod_p,
    good_odd_primes,
    hasse_witt,
    l_polynomial,
    local_data,
    predicted_count,
    reduce_mod_p,
    torsion_multiple,
)
from cyctower.lambda_algebra import evaluate_at_zero, lambda_invariant, mu_invariant, weierstrass_prepare
from cyctower.records import parse_record
from conftest import EXAMPLE_RECORD, WEIL_RECORDS
from oracles import brute_count_cubic
from test_lambda_algebra import random_prepared

pytestmark = pytest.mark.acceptance

# user-supplied division-field torsion for the example; alpha = 4 * 7 = 28
SIGMA = [{"ell": 2, "torsion_over_division_field": 4}, {"ell": 7, "torsion_over_division_field": 7}]


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance {n}] {'PASS' if ok else 'FAIL'}: {detail}")

    return emit


def example_with_sigma(tmp_path):
    obj = json.loads(EXAMPLE_RECORD.read_text())
    obj["invariants"]["exceptional_primes"] = SIGMA
    path = tmp_path / "example_sigma.json"
    path.write_text(json.dumps(obj))
    return path


def test_1_torsion_multiple_is_14(report):
    curve, _ = parse_record(EXAMPLE_RECORD.read_bytes())
    t0 = time.perf_counter()
    aux = good_odd_primes(curve, 8)
    multiple = torsion_multiple(curve, aux)
    dt = time.perf_counter() - t0
    ok = multiple == 14 and dt < 5
    report(1, ok, f"torsion multiple over {aux} = {multiple} (want 14), {dt:.2f}s (< 5s)")
    assert dt < 5
    assert multiple == 14


def test_2_example_certification(report, tmp_path):
    record = example_with_sigma(tmp_path)
    t0 = time.perf_counter()
    rc = cli.run_cli(["--curve", str(record), "--pmin", "5", "--pmax", "100", "--out", str(tmp_path), "--report", "json"])
    dt = time.perf_counter() - t0
    certs = {c["p"]: c for c in json.loads((tmp_path / "certificates.json").read_text())}
    curve, _ = parse_record(record.read_bytes())
    alpha = 4 * 7
    expected, wrong = [], []
    for p in primes_in_range(5, 100):
        ld = local_data(curve, p)
        if ld.good_reduction and ld.ordinary and not ld.anomalous and 14 % p and p > alpha:
            expected.append(p)
            c = certs[p]
            if c["conclusion"] != "POINTS_STABLE" or not c["conditionality"]:
                wrong.append(p)
    at7 = {ch["name"]: ch["status"] for ch in certs[7]["checks"]}
    seven_ok = certs[7]["conclusion"] == "INCONCLUSIVE" and at7["torsion_prime_to_p"] == "fail"
    ok = rc == 0 and expected and not wrong and seven_ok and dt < 60
    report(
        2,
        ok,
        f"{len(expected)} qualifying primes POINTS_STABLE(conditional), wrong={wrong}; "
        f"p=7 {certs[7]['conclusion']} torsion={at7['torsion_prime_to_p']}; {dt:.2f}s (< 60s)",
    )
    assert ok


def test_3_zeta_oracle(report):
    checked, seen, bad = 0, set(), []
    for path in WEIL_RECORDS:
        curve, _ = parse_record(path.read_bytes())
        for p in (3, 5, 7):
            m = reduce_mod_p(curve, p)
            if not m.good:
                continue
            c1, c2 = l_polynomial(count_points(m, 1), count_points(m, 2), p)
            N3 = brute_count_cubic(list(curve.f_coeffs), list(curve.h_coeffs), p)
            checked += 1
            seen.add(p)
            if predicted_count(c1, c2, p, 3) != N3:
                bad.append((path.stem, p))
    ok = not bad and seen == {3, 5, 7}
    report(3, ok, f"N3 prediction vs F_(p^3) brute force: {checked} (curve, p) pairs, mismatches={bad}")
    assert ok


def test_4_weil_bounds(report):
    checked, violations = 0, []
    for path in WEIL_RECORDS:
        curve, _ = parse_record(path.read_bytes())
        for p in primes_in_range(3, 200):
            ld = local_data(curve, p)
            if not ld.good_reduction:
                continue
            checked += 1
            n = ld.jacobian_order
            # (sqrt p -+ 1)^4 = p^2 + 6p + 1 -+ 4 (p + 1) sqrt p, compared without square roots
            d = n - (p * p + 6 * p + 1)
            within = d * d <= 16 * (p + 1) ** 2 * p
            if ld.c1 * ld.c1 > 16 * p or not within:
                violations.append((path.stem, p))
            # looser envelope through isqrt, independent of the squared comparison
            lo = (p * p + 6 * p + 1) - 4 * (p + 1) * (isqrt(p) + 1)
            hi = (p * p + 6 * p + 1) + 4 * (p + 1) * (isqrt(p) + 1)
            assert lo <= n <= hi
    ok = checked > 0 and not violations
    report(4, ok, f"{checked} good (curve, p) pairs over {len(WEIL_RECORDS)} curves, violations={violations}")
    assert ok


def test_5_ordinary_vs_hasse_witt(report):
    curve, _ = parse_record(EXAMPLE_RECORD.read_bytes())
    checked, bad = 0, []
    for p in primes_in_range(5, 50):
        m = reduce_mod_p(curve, p)
        if not m.good:
            continue
        checked += 1
        if local_data(curve, p).ordinary != (det_mod_p(hasse_witt(m), p) != 0):
            bad.append(p)
    report(5, not bad, f"{checked} good primes in [5, 50], disagreements={bad}")
    assert not bad


def test_6_lambda_algebra_properties(report):
    rng = random.Random(20240601)
    prec_p, prec_x = 8, 20
    round_trip_fail, additivity_fail, v0_fail = 0, 0, 0
    corpus = []
    for p in (5, 7, 13):
        for _ in range(1000):
            f, mu, lam = random_prepared(rng, p, prec_p, prec_x)
            corpus.append((f, mu, lam))
            w = weierstrass_prepare(f)
            if (w.mu, w.lambda_) != (mu, lam) or w.reconstruct() != f:
                round_trip_fail += 1
    for _ in range(1000):
        (f, mf, lf), (g, mg, lg) = rng.sample(corpus, 2)
        if f.p != g.p:
            g, mg, lg = random_prepared(rng, f.p, prec_p, prec_x)
        h = f * g
        if mu_invariant(h) != mf + mg or lambda_invariant(h) != lf + lg:
            additivity_fail += 1
    for f, mu, lam in corpus:
        if (evaluate_at_zero(f)[1] == 0) != (mu == 0 and lam == 0):
            v0_fail += 1
    ok = round_trip_fail == additivity_fail == v0_fail == 0
    report(
        6,
        ok,
        f"round-trips 3x1000 failures={round_trip_fail}; additivity 1000 pairs failures={additivity_fail}; "
        f"v(f(0))=0 <=> mu=lambda=0 failures={v0_fail} (prec_p={prec_p}, prec_x={prec_x})",
    )
    assert ok


def _lambda_side(p, s, c, r, t):
    local = LocalData(p, True, 0, 0, 0, 1, p**r * 2, True, r > 0)
    inv = ArithmeticInvariants(
        rank=0,
        torsion_order=p**t,
        torsion_provenance=PROVED,
        sha_order=p**s,
        sha_provenance=PROVED,
        tamagawa={3: p**c},
    )
    try:
        return lambda_zero_criterion(p, local, inv).ok
    except InconsistentInputError:
        return "inconsistent"


def _ecv_side(p, s, c, r, t):
    try:
        return euler_char_valuation(p, p**s, [p**c], [p**r], p**t) == 0
    except InconsistentInputError:
        return "inconsistent"


def test_7a_ecv_zero_iff_lambda_zero(report):
    p = 5
    cases = list(itertools.product(range(4), repeat=4))
    mismatches = [k for k in cases if _ecv_side(p, *k) != _lambda_side(p, *k)]
    report(
        "7a",
        not mismatches,
        f"{len(cases)} (s, c, r, t) cases, mismatches={mismatches}",
    )
    assert not mismatches


def test_7b_lambda_zero_implies_ecv_zero(report):
    p = 5
    cases = list(itertools.product(range(4), repeat=4))
    bad = [k for k in cases if _lambda_side(p, *k) is True and _ecv_side(p, *k) is not True]
    report("7b", not bad, f"lambda criterion holds => v_p(f(0)) = 0 over {len(cases)} cases, counterexamples={bad}")
    assert not bad


def test_7c_m0_equals_n0_beyond_alpha(report):
    bad = []
    primes = primes_in_range(2, 1009)
    for alpha in range(1, 1001):
        for p in primes:
            if p > alpha:
                for n0 in (0, 3):
                    if m0_bound(n0, alpha, p) != n0:
                        bad.append((n0, alpha, p))
    report("7c", not bad, f"m0_bound(n0, alpha, p) = n0 for alpha <= 1000 < p <= 1009, failures={len(bad)}")
    assert not bad


def test_8_serre_pink_set(report):
    generated = exceptional_genera(10**4)
    disagree = [g for g in range(1, 10**4 + 1) if is_genus_exceptional(g) != (g in generated)]
    head = sorted(generated)[:7]
    small = [g for g in (1, 2, 3, 5) if is_genus_exceptional(g)]
    ok = not disagree and head == [4, 10, 16, 32, 64, 108, 126] and not small
    report(8, ok, f"{len(generated)} exceptional genera <= 10^4 starting {head}; disagreements={disagree}; true on {small}")
    assert ok


def test_9_determinism_across_jobs(report, tmp_path):
    record = example_with_sigma(tmp_path)
    outs = []
    for jobs in (1, 8):
        out = tmp_path / f"jobs{jobs}"
        rc = cli.run_cli(
            ["--curve", str(record), "--pmin", "5", "--pmax", "100", "--out", str(out), "--jobs", str(jobs)]
        )
        assert rc == 0
        outs.append(((out / "certificates.json").read_bytes(), (out / "report.txt").read_bytes()))
    ok = outs[0] == outs[1]
    report(9, ok, "certificates.json and report.txt byte-identical for --jobs 1 and --jobs 8" if ok else "outputs differ")
    assert ok
