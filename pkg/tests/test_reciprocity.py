import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pentagon_periods import reciprocity
from pentagon_periods.errors import DomainError, LemmaViolation, ResourceLimitError
from pentagon_periods.reciprocity import (
    jacobi_array,
    jacobi_symbol,
    lambda_orbit_enumerate,
    poly_value,
    poly_values_mask,
    square_miss_scan,
)
from pentagon_periods.sieve import factorize


def euler_jacobi(a, b):
    """Product of Legendre symbols by Euler's criterion."""
    out = 1
    for p, e in factorize(b).items():
        r = pow(a % p, (p - 1) // 2, p)
        leg = 0 if r == 0 else (1 if r == 1 else -1)
        out *= leg**e
    return out


@pytest.mark.parametrize("a, b, s", [(3, 5, -1), (7, 1, 1), (123, 1, 1), (2, 15, 1), (23, 5, -1)])
def test_jacobi_examples(a, b, s):
    assert jacobi_symbol(a, b) == s


def test_jacobi_domain():
    with pytest.raises(DomainError):
        jacobi_symbol(3, 4)
    with pytest.raises(DomainError):
        jacobi_symbol(3, -5)


@settings(max_examples=500, deadline=None)
@given(st.integers(-(10**6), 10**6), st.integers(0, 10**5))
def test_jacobi_against_euler(a, k):
    b = 2 * k + 1
    assert jacobi_symbol(a, b) == euler_jacobi(a, b)


def test_jacobi_array_matches_scalar():
    rng = np.random.default_rng(1)
    a = rng.integers(0, 10**7, 5000)
    b = 2 * rng.integers(0, 10**7, 5000) + 1
    assert jacobi_array(a, b).tolist() == [jacobi_symbol(int(x), int(y)) for x, y in zip(a, b)]


def _naive_orbit(N, base):
    seen, stack = {base}, [base]
    while stack:
        q1, q2 = stack.pop()
        for w in ((q1 + 4 * q2, q2), (q1, 4 * q1 + q2)):
            if max(w) <= N and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def test_orbit_examples():
    assert lambda_orbit_enumerate(25).as_set() == {(3, 5), (23, 5), (3, 17)}
    for N in (100, 2000, 30000):
        assert lambda_orbit_enumerate(N).as_set() == _naive_orbit(N, (3, 5))
    assert lambda_orbit_enumerate(5000, base=(1, 1), expect_symbol=None).as_set() == _naive_orbit(5000, (1, 1))


def test_orbit_is_a_tree():
    orbit = lambda_orbit_enumerate(10**5)
    assert len(orbit) == len(orbit.as_set())


def test_orbit_errors():
    with pytest.raises(DomainError):
        lambda_orbit_enumerate(4)
    with pytest.raises(ResourceLimitError):
        lambda_orbit_enumerate(10**9)
    with pytest.raises(LemmaViolation):
        lambda_orbit_enumerate(1000, base=(1, 1), expect_symbol=-1)


def test_step_invariance():
    assert reciprocity.step_invariance_sample(2000, np.random.default_rng(7)) == 0


def test_square_scan_small():
    rep = square_miss_scan(10**4)
    assert rep["symbols"] == [-1]
    assert rep["coordinate_squares"] == []
    assert rep["odd_squares"] == 50 and rep["odd_squares_above_1"] == 49
    assert rep["odd_squares_all_1_mod_4"]


def test_control_base_hits_every_odd_square():
    rep = square_miss_scan(10**4, base=(1, 1))
    assert rep["symbols"] == [1]
    orbit = lambda_orbit_enumerate(10**4, base=(1, 1), expect_symbol=None)
    coords = set(orbit.q1.tolist()) | set(orbit.q2.tolist())
    assert set(reciprocity.odd_squares(10**4)) <= coords


def test_poly_point_values():
    assert poly_value("q-paper", 1, 1) == 97
    assert poly_value("f-paper", 1, 1, 1) == 89
    assert poly_value("f-literal", 1, 1, 1) == 301
    with pytest.raises(DomainError):
        poly_value("nope", 1, 1)


def test_f_literal_is_an_orbit_coordinate():
    # second coordinate of [[1,0],[4,1]]^x [[1,4],[0,1]]^y [[1,0],[4,1]]^z (3, 5)
    for x, y, z in [(1, 1, 1), (2, 3, 1), (1, 2, 4)]:
        v = np.array([3, 5])
        for M, e in (([[1, 0], [4, 1]], z), ([[1, 4], [0, 1]], y), ([[1, 0], [4, 1]], x)):
            v = np.linalg.matrix_power(np.array(M), e) @ v
        assert int(v[1]) == poly_value("f-literal", x, y, z)


def _bruteforce_values(which, X, lo):
    vals = set()
    if which in ("q-paper", "coords-literal"):
        for x in range(lo, X + 1):
            if poly_value("q-paper", x, lo) > X:
                break
            for y in range(lo, X + 1):
                v = poly_value("q-paper", x, y)
                if v > X:
                    break
                vals.add(v)
                if x == 0:
                    break
        if which == "coords-literal":
            vals |= {3 + 20 * y for y in range(lo, X + 1) if 3 + 20 * y <= X}
        return vals
    for x in range(lo, X + 1):
        if poly_value(which, x, lo, lo) > X:
            break
        for y in range(lo, X + 1):
            if poly_value(which, x, y, lo) > X:
                break
            for z in range(lo, X + 1):
                v = poly_value(which, x, y, z)
                if v > X:
                    break
                vals.add(v)
                if poly_value(which, x, y, z + 1) == v:
                    break
            if x == 0 and poly_value(which, x, y + 1, lo) == poly_value(which, x, y, lo):
                break
    return vals


@pytest.mark.parametrize("which", reciprocity.POLYS)
@pytest.mark.parametrize("include_zero", [False, True])
def test_masks_match_bruteforce(which, include_zero):
    X = 2000
    mask = poly_values_mask(which, X, include_zero)
    assert set(np.flatnonzero(mask).tolist()) == _bruteforce_values(which, X, 0 if include_zero else 1)


def test_scans():
    lit = reciprocity.poly_value_scan("f-literal", 10**6)
    assert lit["squares_found"] == []
    q = reciprocity.poly_value_scan("q-paper", 10**6)
    assert q["squares_found"] == []
    paper = reciprocity.poly_value_scan("f-paper", 10**5)
    assert paper["squares_found"][:3] == [169, 225, 361]  # reported only: this cubic is not an orbit coordinate


def test_poly_name_spellings():
    assert poly_value("Q_paper", 1, 1) == poly_value("q-paper", 1, 1)
    a = reciprocity.poly_value_scan("F_literal", 5000)
    b = reciprocity.poly_value_scan("f-literal", 5000)
    assert a == b
