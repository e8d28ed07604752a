"""Acceptance criteria 1-10; each test records its outcome and prints one line.

A summary block with one pass/fail line per criterion is printed at the end
of the pytest run (see conftest.pytest_terminal_summary).  Running this file
directly prints the same lines.
"""

import time

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import record
from pentagon_periods import congruence, hecke, reciprocity, sieve, spectrum
from pentagon_periods.golden import GoldenInt, reduce_mod, sign
from pentagon_periods.orbit import census_bytes, census_from_bytes, orbit_enumerate
from pentagon_periods.surface import _exact_target, trace_geodesic

CRITERIA = {
    1: "missing even asymmetric periods <= 4000 are exactly {2, 12, 14, 18}",
    2: "spectrum contains 6, 20, 80",
    3: "family identities for 0 <= m', n' <= 50 and trilinear cross-check to 12",
    4: "congruence orders, index 72, multiplicativity, lifting ratios",
    5: "asymmetric residues mod q are all even residues",
    6: "displayed matrix identities verify exactly",
    7: "sieve censuses equal their oracles; quad fraction decreases",
    8: "reciprocity: symbol -1, no squares, odd squares admissible",
    9: "traced geodesics close with holonomy v and crossings (a, b, c, d)",
    10: "property suites: golden ring, orbit determinism, cache round trip",
}


def line(n, ok, extra=""):
    print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {CRITERIA[n]} {extra}".rstrip())


# ---- 1, 2: spectrum ----------------------------------------------------------


@pytest.fixture(scope="module")
def spec_4000(census_2000):
    t0 = time.time()
    spec = spectrum.spectrum_scan(4000, census=census_2000)
    return spec, time.time() - t0


def test_criterion_1_missing_periods(spec_4000):
    spec, seconds = spec_4000
    missing = spectrum.missing_evens(spec)
    ok = missing == [2, 12, 14, 18]
    record(1, "missing set", ok, missing)
    record(1, "runtime under 5 minutes", seconds < 300, f"{seconds:.1f}s")
    line(1, ok, f"(got {missing})")
    assert ok


def test_criterion_2_fig1_periods(spec_4000):
    spec, _ = spec_4000
    present = {n: spec.contains_asym(n) for n in (6, 20, 80)}
    ok = all(present.values())
    record(2, "6, 20, 80 present", ok, present)
    line(2, ok)
    assert ok


# ---- 3: families ------------------------------------------------------------


@pytest.fixture(scope="module")
def printed_report():
    return spectrum.family_generate_verify(50, raise_on_failure=False)


def _problems(report, fragment):
    return {i: [f for f in r["failures"] if any(fragment in p for p in f["problems"])] for i, r in report.items()}


def test_criterion_3_discriminant_and_residues(printed_report):
    bad = {i: f for i, f in _problems(printed_report, "mod 5").items() if f}
    bad.update({i: f for i, f in _problems(printed_report, "bottom-row").items() if f})
    record(3, "g = 0 mod 5, residues 0..4, bottom-row sum", not bad, bad)
    assert not bad


def test_criterion_3_printed_polynomials(printed_report):
    # The printed family-1 polynomial reads 13n' where the expansion of the
    # trilinear formula gives 15n'; this check is left failing on purpose.
    bad = {i: len(f) for i, f in _problems(printed_report, "polynomial").items() if f}
    first = {i: printed_report[i]["failures"][0] for i in bad}
    record(3, "printed family polynomials", not bad, first)
    line(3, not bad, f"(printed polynomial mismatches: {bad})" if bad else "")
    assert not bad, f"printed polynomials disagree with the trilinear formula: {first}"


def test_criterion_3_derived_polynomials():
    report = spectrum.family_generate_verify(50, families=spectrum.DERIVED_FAMILIES, raise_on_failure=False)
    bad = {i: r["failures"][:1] for i, r in report.items() if r["failures"]}
    record(3, "derived family polynomials", not bad, bad)
    assert not bad


def test_criterion_3_trilinear_cross_check():
    bad = [
        (m, n, k)
        for m in range(13)
        for n in range(13)
        for k in range(13)
        if hecke.trilinear_bottom_row(m, n, k) != hecke.trilinear_bottom_row_product(m, n, k)
    ]
    record(3, "trilinear bottom row vs matrix product", not bad, bad[:5])
    assert not bad


# ---- 4, 5: congruence --------------------------------------------------------


def test_criterion_4_congruence():
    t0 = time.time()
    rep = congruence.index_and_multiplicativity(raise_on_failure=False)
    for name, r in rep["checks"].items():
        record(4, name, r["ok"], (r["got"], r["expected"]))
    amb = {7: 117600, 11: 1742400}
    for p, want in amb.items():
        record(4, f"ambient formula mod {p}", congruence.ambient_order(p) == want, congruence.ambient_order(p))
    lifts = congruence.lifting_ratio_check(slow=True, raise_on_failure=False)
    for name, r in lifts.items():
        record(4, f"lift {name}", r["ok"], r)
    want_ratio = {"3->9": 729, "4->8": 64, "5->25": 15625}
    for name, want in want_ratio.items():
        record(4, f"lift {name} = {want}", lifts[name]["ratio_kernel"] == want, lifts[name]["ratio_kernel"])
    seconds = time.time() - t0
    record(4, "default suite under 5 minutes", seconds < 300, f"{seconds:.1f}s")
    from conftest import ACCEPTANCE

    ok = all(s[1] for s in ACCEPTANCE[4])
    line(4, ok, f"({seconds:.0f}s)")
    assert ok


def test_criterion_5_admissible_residues():
    bad = {}
    for q in (3, 4, 5, 7, 8, 9, 12):
        got = congruence.admissible_residues(q)["asymmetric"]
        if got != congruence.even_residues(q):
            bad[q] = got
    record(5, "residues", not bad, bad)
    line(5, not bad)
    assert not bad


# ---- 6: identities -----------------------------------------------------------


def test_criterion_6_identities():
    results = hecke.displayed_identities()
    failed = [name for name, (_, _, ok) in results.items() if not ok]
    names = set(results)
    expected = {"M_conjugation_48_80phi", "adjoint_g", "adjoint_h", "adjoint_i", "eq_j", "eq_k", "eq_l", "eq_m", "eq_n"}
    commutators = [n for n in names if n.startswith("commutator_")]
    complete = expected <= names and len(commutators) == 9
    record(6, "identities", not failed, failed)
    record(6, "all identities present", complete, sorted(names))
    line(6, not failed and complete)
    assert not failed and complete


# ---- 7: sieve ----------------------------------------------------------------


def _random_forms(rng, count):
    forms = []
    while len(forms) < count:
        A, B, C = (int(x) for x in rng.integers([1, 0, 0], [30, 40, 40]))
        if np.gcd(A, B) == 1:
            forms.append(sieve.QuadraticForm(A, B, C))
    return forms


def test_criterion_7_sieve():
    rng = np.random.default_rng(20)
    X = 10**4
    bad = []
    for form in _random_forms(rng, 20):
        for domain in (sieve.DOMAIN_POS, sieve.DOMAIN_NONNEG):
            census = sieve.quad_unrepresented_census(form, X, domain)
            oracle = sieve.quad_values_bruteforce(form, X, domain)
            got = set(np.flatnonzero(census.represented).tolist())
            if got != {v for v in oracle if v <= X}:
                bad.append((form, domain))
    record(7, "quad census equals double loop on 20 forms", not bad, bad[:3])

    gap = sieve.cubic_layer_census(10**6, 3)
    primes = set(np.flatnonzero(sieve.prime_mask(10**6)).tolist())
    record(7, "layer 1 = {1} + primes", set(gap.unrepresented[1].tolist()) == {1} | primes)
    for k in (2, 3):
        record(7, f"layer {k} equals oracle", gap.checks[f"layer{k}_equals_oracle"])

    form = sieve.QuadraticForm(25, 6, 13)
    fr = [sieve.quad_unrepresented_census(form, x, sieve.DOMAIN_NONNEG).fraction for x in (10**4, 10**5, 10**6)]
    record(7, "(25,6,13) fractions strictly decrease", fr[0] > fr[1] > fr[2], fr)
    from conftest import ACCEPTANCE

    ok = all(s[1] for s in ACCEPTANCE[7])
    line(7, ok, f"(fractions {[round(f, 4) for f in fr]})")
    assert ok


# ---- 8: reciprocity ----------------------------------------------------------


def test_criterion_8_reciprocity():
    N = 10**7
    rep = reciprocity.square_miss_scan(N, raise_on_failure=False)
    record(8, "orbit symbols all -1", rep["symbols"] == [-1], rep["symbols"])
    record(8, "no square orbit coordinate", not rep["coordinate_squares"], rep["coordinate_squares"][:5])
    record(8, "odd squares all = 1 mod 4", rep["odd_squares_all_1_mod_4"])
    record(8, ">= 1580 admissible odd squares missed", rep["odd_squares_admissible"] >= 1580, rep["odd_squares_admissible"])
    lit = reciprocity.poly_value_scan("f-literal", N)
    record(8, "F_literal has no squares", not lit["squares_found"], lit["squares_found"][:5])
    paper = reciprocity.poly_value_scan("f-paper", N)
    from conftest import ACCEPTANCE

    ok = all(s[1] for s in ACCEPTANCE[8])
    line(8, ok, f"(orbit {rep['orbit_size']}, F_paper squares reported: {len(paper['squares_found'])})")
    assert ok


# ---- 9: simulator ------------------------------------------------------------


def test_criterion_9_simulator(census_30, segment_table):
    bad = []
    for v in map(tuple, census_30.vectors.tolist()):
        tr = trace_geodesic(v)
        counts = tr.counters(segment_table)
        ell = sum(v)
        if not (tr.closed and tr.holonomy == _exact_target(v) and tuple(counts) == v and 2 * sum(counts) == 2 * ell):
            bad.append(v)
    record(9, f"{len(census_30)} vectors with l <= 30", not bad, bad[:5])
    line(9, not bad, f"({len(census_30)} vectors)")
    assert not bad


# ---- 10: property suites -----------------------------------------------------

ints = st.integers(-(10**6), 10**6)
golden = st.builds(GoldenInt, ints, ints)
mpmath.mp.dps = 50
PHI_MP = (1 + mpmath.sqrt(5)) / 2


@settings(max_examples=300, deadline=None)
@given(golden, golden, st.integers(2, 64))
def test_criterion_10_golden_ring(x, y, q):
    ok = (x * y).norm() == x.norm() * y.norm()
    ok = ok and (x * y).conj() == x.conj() * y.conj() and (x + y).conj() == x.conj() + y.conj()
    ok = ok and reduce_mod(x * y, q) == reduce_mod(x, q) * reduce_mod(y, q)
    ok = ok and reduce_mod(x + y, q) == reduce_mod(x, q) + reduce_mod(y, q)
    ok = ok and sign(x) == int(mpmath.sign(x.a + x.b * PHI_MP))
    if not ok:
        record(10, "golden ring fuzz", False, (x, y, q))
    assert ok


def test_criterion_10_summary():
    # the hypothesis test above only records failures; this records the pass
    from conftest import ACCEPTANCE

    record(10, "golden ring fuzz", not any(not s[1] for s in ACCEPTANCE.get(10, [])))
    one = orbit_enumerate(300, threads=1)
    four = orbit_enumerate(300, threads=4)
    record(10, "orbit determinism across threads", census_bytes(one) == census_bytes(four))
    data = census_bytes(one)
    record(10, "cache round trip bit-exact", census_bytes(census_from_bytes(data)) == data)
    ok = all(s[1] for s in ACCEPTANCE[10])
    line(10, ok)
    assert ok


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
