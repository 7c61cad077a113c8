"""Interval classification, Levenshtein function, node polynomial, quadrature."""

import math

import numpy as np
import pytest

from sphenergy.levenshtein import (
    dgs_number,
    find_interval,
    interval_for,
    lev_poly_roots,
    lev_value,
    levenshtein_poly,
    quadrature,
    solve_cardinality,
)


def test_find_interval_reference_points():
    assert find_interval(4, 0.5).m == 5
    assert find_interval(5, 0.13285).m == 3
    # s = 0 is the shared endpoint of I_2 and I_3: the smaller index wins
    iv = find_interval(5, 0.0)
    assert (iv.m, iv.tie_with) == (2, 3)


def test_find_interval_ties_at_one_half():
    # 1/2 is an exact interval endpoint for n = 2 and n = 8
    iv2 = find_interval(2, 0.5)
    assert (iv2.m, iv2.tie_with) == (4, 5)
    iv8 = find_interval(8, 0.5)
    assert (iv8.m, iv8.tie_with) == (6, 7)
    # ... but an interior point for n = 5 (right endpoint is 0.50778...)
    iv5 = find_interval(5, 0.5)
    assert (iv5.m, iv5.tie_with) == (5, None)
    assert iv5.hi == pytest.approx(0.5077876295583149, abs=1e-12)


def test_find_interval_covers_line():
    for n in (3, 7):
        last_hi = -1.0
        for m in range(1, 12):
            iv = interval_for(n, m)
            assert iv.lo == pytest.approx(last_hi, abs=1e-12)
            assert iv.lo < iv.hi
            last_hi = iv.hi


def test_find_interval_rejects_bad_separation():
    with pytest.raises(ValueError):
        find_interval(4, 1.0)
    with pytest.raises(ValueError):
        find_interval(4, -1.5)


def test_lev_value_reference_points():
    assert lev_value(4, interval_for(4, 5), 0.5) == pytest.approx(26.0, abs=1e-10)
    for n in (3, 5, 8):
        assert lev_value(n, interval_for(n, 2), 0.0) == pytest.approx(2 * n, abs=1e-10)
    s_star = 0.13285354259858992
    assert lev_value(5, interval_for(5, 3), s_star) == pytest.approx(13.3014, abs=1e-3)


def test_lev_value_at_the_shared_half_endpoint():
    # both interval formulas give the kissing value 240 for n = 8
    assert lev_value(8, interval_for(8, 6), 0.5) == pytest.approx(240.0, abs=1e-8)
    assert lev_value(8, interval_for(8, 7), 0.5) == pytest.approx(240.0, abs=1e-8)


def test_lev_function_monotone_and_continuous():
    for n in (3, 4, 6):
        prev = 0.0
        for s in np.linspace(-0.6, 0.7, 260):
            iv = find_interval(n, float(s))
            val = lev_value(n, iv, float(s))
            assert val > prev
            prev = val
        # adjacent closed forms agree at the junction
        for m in range(1, 8):
            iv, nxt = interval_for(n, m), interval_for(n, m + 1)
            a = lev_value(n, iv, iv.hi)
            b = lev_value(n, nxt, iv.hi)
            assert b == pytest.approx(a, rel=1e-9)


def test_lev_endpoints_are_dgs_numbers():
    for n in (3, 4, 5, 8):
        for m in range(1, 8):
            iv = interval_for(n, m)
            assert lev_value(n, iv, iv.hi) == pytest.approx(
                dgs_number(n, m + 1), rel=1e-8
            )
            if m > 1:
                assert lev_value(n, iv, iv.lo) == pytest.approx(
                    dgs_number(n, m), rel=1e-8
                )


def test_lev_poly_roots_even_reference():
    for n in (3, 5, 8):
        roots = lev_poly_roots(n, interval_for(n, 2), 0.0)
        assert np.allclose(roots, [-1.0, 0.0], atol=1e-13)


def test_lev_poly_roots_ez_reference():
    s_star = 0.13285354259858992
    roots = lev_poly_roots(5, interval_for(5, 3), s_star)
    assert len(roots) == 2
    assert roots[0] == pytest.approx(-0.68069, abs=1e-4)
    assert roots[-1] == s_star  # snapped exactly


def test_lev_poly_roots_ordered_and_topped_by_s():
    rng = np.random.RandomState(31)
    for _ in range(30):
        n = int(rng.randint(3, 9))
        s = float(rng.uniform(-0.2, 0.65))
        iv = find_interval(n, s)
        roots = lev_poly_roots(n, iv, s)
        assert len(roots) == iv.k + iv.eps
        assert all(x < y for x, y in zip(roots, roots[1:]))
        assert roots[-1] == s
        if iv.eps == 1:
            assert roots[0] == -1.0


def test_levenshtein_poly_invariants():
    for n, s in [(4, 0.5), (5, 0.13285354259858992), (6, 0.3), (3, 0.45)]:
        lp = levenshtein_poly(n, find_interval(n, s), s)
        assert len(lp.multiset) == lp.interval.m
        assert all(c > 0 for c in lp.gegen.coeffs)
        grid = np.linspace(-1.0, s, 400)
        assert np.max(lp.gegen(grid)) <= 1e-9 * max(1.0, abs(lp.gegen.at_one()))


def test_levenshtein_poly_antipodal_case():
    # s = 1/sqrt(5), n = 3 sits on the shared endpoint of I_4 and I_5; the
    # odd-side construction pushes its lowest interior node onto -1 exactly,
    # recovering the icosahedron inner-product set {-1, -1/sqrt(5), 1/sqrt(5)}
    s = 1 / math.sqrt(5)
    assert find_interval(3, s).tie_with == 5
    lp = levenshtein_poly(3, interval_for(3, 5), s)
    assert lp.multiset.count(-1.0) == 2
    assert lp.multiset[2] == pytest.approx(-s, abs=1e-12)
    assert lev_value(3, lp.interval, s) == pytest.approx(12.0, abs=1e-9)


def test_quadrature_orthonormal_case_is_exact():
    for n in (3, 5, 8, 10):
        rule = quadrature(n, 0.0)
        assert np.allclose(rule.nodes, [-1.0, 0.0], atol=1e-12)
        assert np.allclose(rule.weights, [1 / (2 * n), (n - 1) / n], atol=1e-12)
        assert rule.N == pytest.approx(2 * n, abs=1e-10)


def test_quadrature_partition_of_unity_and_exactness():
    rng = np.random.RandomState(37)
    for _ in range(25):
        n = int(rng.randint(3, 9))
        s = float(rng.uniform(-0.2, 0.7))
        rule = quadrature(n, s)
        assert 1.0 / rule.N + sum(rule.weights) == pytest.approx(1.0, abs=1e-11)
        assert all(w > 0 for w in rule.weights)
        assert rule.residual < 1e-9


def test_quadrature_ez_residual():
    rule = quadrature(5, 0.13285354259858992)
    assert rule.residual < 1e-10
    assert rule.m == 3


def test_quadrature_rejects_bad_separation():
    with pytest.raises(ValueError):
        quadrature(4, 1.0)


def test_solve_cardinality_reference_points():
    for n in (3, 5, 8):
        r, rule = solve_cardinality(n, 2 * n)
        assert r == pytest.approx(0.0, abs=1e-12)
        assert rule.N == pytest.approx(2 * n, abs=1e-8)
        r, _ = solve_cardinality(n, n + 1)
        assert r == pytest.approx(-1.0 / n, abs=1e-12)


def test_solve_cardinality_two_points():
    r, rule = solve_cardinality(6, 2)
    assert r == -1.0
    assert rule.N == pytest.approx(2.0, abs=1e-12)


def test_solve_cardinality_round_trip():
    rng = np.random.RandomState(41)
    for _ in range(20):
        n = int(rng.randint(3, 9))
        M = float(rng.uniform(2.5, 400.0))
        r, rule = solve_cardinality(n, M)
        assert lev_value(n, rule.interval, r) == pytest.approx(M, rel=1e-9)


def test_solve_cardinality_rejects_small_m():
    with pytest.raises(ValueError):
        solve_cardinality(4, 1.5)
