"""Hermite interpolation, the lambda choice, and the two-sided energy bounds.

Interpolant coefficients are cross-checked against numpy.polyfit on dense
samples, and bound values against independently derived closed forms for
configurations whose energies are known exactly.
"""

import math

import numpy as np
import pytest

from sphenergy.bounds import (
    hermite_interpolant,
    lambda_star,
    optimality_probe,
    strip,
    ulb,
    uub,
)
from sphenergy.bounds import test_functions as lp_test_functions
from sphenergy.errors import InfeasibleClassError
from sphenergy.levenshtein import find_interval, lev_value, levenshtein_poly, quadrature
from sphenergy.orthopoly import gegenbauer_table
from sphenergy.potentials import make_potential

S_EZ = 0.13285354259858992


def monomial_coeffs(n, poly):
    """Recover monomial coefficients of a GegenPoly by dense sampling."""
    grid = np.linspace(-1.0, 1.0, 257)
    return np.polyfit(grid, poly(grid), poly.degree)[::-1]


def test_hermite_two_simple_nodes_is_the_secant():
    pot = make_potential("newton", n=5)
    g = hermite_interpolant(5, pot, (-1.0, 0.0))
    # secant line through (-1, h(-1)) and (0, h(0)): g = h(0) + (h(0)-h(-1)) t
    assert g.degree == 1
    assert g.coeffs[0] == pytest.approx(pot(0.0), abs=1e-14)
    assert g.coeffs[1] == pytest.approx(pot(0.0) - pot(-1.0), abs=1e-14)


def test_hermite_matches_polyfit_oracle():
    pot = make_potential("newton", n=5)
    lp = levenshtein_poly(5, find_interval(5, S_EZ), S_EZ)
    g = hermite_interpolant(5, pot, lp.multiset)
    mono = monomial_coeffs(5, g)
    assert mono == pytest.approx([0.37128, 0.46931, 0.23835], abs=1e-4)


def test_hermite_interpolation_conditions():
    rng = np.random.RandomState(53)
    for _ in range(20):
        n = int(rng.randint(3, 9))
        s = float(rng.uniform(-0.2, 0.6))
        pot = make_potential("riesz", alpha=float(rng.uniform(0.5, 4.0)))
        lp = levenshtein_poly(n, find_interval(n, s), s)
        g = hermite_interpolant(n, pot, lp.multiset)
        seen = set()
        for t in lp.multiset:
            assert g(t) == pytest.approx(pot(t), rel=1e-9)
            if t in seen:
                assert g.deriv(t) == pytest.approx(pot.deriv(t), rel=1e-7)
            seen.add(t)


def test_hermite_rejects_high_multiplicity():
    pot = make_potential("log")
    with pytest.raises(ValueError):
        hermite_interpolant(4, pot, (0.0, 0.0, 0.0))


def test_lambda_star_linear_case():
    # T = {-1, 0}: ell_1 = 1 in the Gegenbauer expansion of t(t+1), so the
    # only candidate ratio is g_1 itself
    pot = make_potential("newton", n=5)
    lp = levenshtein_poly(5, find_interval(5, 0.0), 0.0)
    g = hermite_interpolant(5, pot, lp.multiset)
    choice = lambda_star(g, lp)
    assert choice.argmax == 1
    assert not choice.degenerate
    assert choice.value == pytest.approx(pot(0.0) - pot(-1.0), abs=1e-13)


def test_lambda_star_ez_case():
    pot = make_potential("newton", n=5)
    lp = levenshtein_poly(5, find_interval(5, S_EZ), S_EZ)
    g = hermite_interpolant(5, pot, lp.multiset)
    choice = lambda_star(g, lp)
    assert choice.argmax == 1
    assert choice.value == pytest.approx(0.661, abs=5e-3)


def test_lambda_star_degenerate_for_constant_kernel():
    pot = make_potential("custom", eval_fn=lambda t: 1.0, deriv_fn=lambda t: 0.0)
    lp = levenshtein_poly(5, find_interval(5, 0.0), 0.0)
    g = hermite_interpolant(5, pot, lp.multiset)
    choice = lambda_star(g, lp)
    assert choice.degenerate
    assert choice.value == 0.0


def test_uub_reference_value():
    cert = uub(5, 11, S_EZ, make_potential("newton", n=5))
    assert cert.uub_value == pytest.approx(41.90201357470821, rel=1e-10)
    assert cert.feasibility.passed
    assert cert.lam == pytest.approx(0.6600366207016131, rel=1e-9)


def test_uub_orthonormal_sections_are_exact():
    # s = 0, M = 2n: two antipodal points on each axis, energy known in
    # closed form, and the bound collapses onto it
    for n in (3, 6, 10):
        for pot in (make_potential("newton", n=n), make_potential("gauss", alpha=1.0)):
            cert = uub(n, 2 * n, 0.0, pot)
            exact = 2 * n * (pot(-1.0) + (2 * n - 2) * pot(0.0))
            assert cert.uub_value == pytest.approx(exact, rel=1e-10)


def test_uub_kissing_reference_values():
    cert4 = uub(4, 24, 0.5, make_potential("newton", n=4))
    assert cert4.uub_value == pytest.approx(344.8946, abs=5e-4)
    cert8 = uub(8, 240, 0.5, make_potential("newton", n=8))
    assert cert8.uub_value == pytest.approx(17721.5278, abs=5e-3)


def test_uub_forms_agree():
    rng = np.random.RandomState(59)
    for _ in range(15):
        n = int(rng.randint(3, 9))
        s = float(rng.uniform(-0.2, 0.6))
        iv = find_interval(n, s)
        L = lev_value(n, iv, s)
        M = int(L) if L >= 3 else 2
        cert = uub(n, M, s, make_potential("riesz", alpha=1.0))
        assert cert.quadrature_form == pytest.approx(cert.uub_value, rel=1e-10)


def test_uub_polynomial_touches_kernel_at_nodes():
    cert = uub(5, 11, S_EZ, make_potential("newton", n=5))
    pot = cert.potential
    for t in cert.lev.multiset:
        assert cert.f(t) == pytest.approx(pot(t), rel=1e-9)
    # and majorizes it everywhere else on [-1, s]
    grid = np.linspace(-1.0, S_EZ, 1500)
    assert np.min(cert.f(grid) - pot(grid)) >= -1e-9


def test_uub_interior_coefficients_nonpositive():
    cert = uub(6, 72, 0.5, make_potential("newton", n=6))
    tail = cert.f.coeffs[1:]
    assert np.max(tail) <= 1e-12
    assert cert.feasibility.max_interior_coeff <= 1e-12


def test_uub_infeasible_class():
    with pytest.raises(InfeasibleClassError):
        uub(4, 27, 0.5, make_potential("newton", n=4))


def test_uub_degenerate_constant_kernel():
    pot = make_potential(
        "custom",
        eval_fn=lambda t: np.ones_like(np.asarray(t, dtype=float)),
        deriv_fn=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        label="one",
    )
    cert = uub(5, 11, S_EZ, pot)
    assert cert.degenerate
    assert cert.lam == 0.0
    assert cert.uub_value == pytest.approx(110.0, abs=1e-9)


def test_uub_extra_node_changes_nothing():
    for n, M, s in [(5, 11, S_EZ), (4, 24, 0.5), (3, 12, 0.5)]:
        pot = make_potential("newton", n=n)
        base = uub(n, M, s, pot)
        refined = uub(n, M, s, pot, extra_node=True)
        assert refined.uub_value == pytest.approx(base.uub_value, rel=1e-9)
        # the spare node raises the interpolation degree by one but the
        # quadrature, node polynomial and bound value are untouched
        m = base.lev.interval.m
        assert refined.lev.interval.m == m
        assert base.interpolant.degree == m - 1
        assert refined.interpolant.degree == m


def test_ulb_reference_values():
    assert ulb(5, 11, make_potential("newton", n=5))[0] == pytest.approx(
        37.48408516240197, rel=1e-10
    )
    assert ulb(4, 24, make_potential("newton", n=4))[0] == pytest.approx(
        333.0, abs=1e-9
    )


def test_ulb_simplex_closed_form():
    for n in (3, 5, 8):
        pot = make_potential("riesz", alpha=2.0)
        val, rule = ulb(n, n + 1, pot)
        assert val == pytest.approx(n * (n + 1) * pot(-1.0 / n), rel=1e-10)
        assert rule.nodes == pytest.approx([-1.0 / n], abs=1e-12)


def test_strip_collapses_on_sharp_configurations():
    pot3 = make_potential("newton", n=3)
    es = strip(3, 4, -1.0 / 3.0, pot3)
    assert es.sharp
    assert es.ulb == pytest.approx(es.uub, rel=1e-10)
    assert es.ulb == pytest.approx(7.348469228349534, rel=1e-9)

    es = strip(3, 6, 0.0, pot3)
    assert es.sharp
    assert es.ulb == pytest.approx(19.9705627485, abs=1e-8)


def test_strip_reference_interval():
    es = strip(5, 11, S_EZ, make_potential("newton", n=5))
    assert not es.sharp
    assert es.ulb == pytest.approx(37.484, abs=1e-3)
    assert es.uub == pytest.approx(41.902, abs=1e-3)
    assert es.ulb < es.uub


def test_strip_requires_m_at_most_lev():
    with pytest.raises(InfeasibleClassError):
        strip(4, 27, 0.5, make_potential("newton", n=4))


def test_test_functions_vanish_through_m():
    for n, s in [(5, 0.0), (4, 0.5), (6, 0.3)]:
        rep = lp_test_functions(n, s, 12)
        vals = dict(rep.values)
        for j in range(1, rep.m + 1):
            assert abs(vals[j]) < 1e-9
        assert rep.threshold == 2 * (rep.m // 2 + rep.m % 2) + (1 - rep.m % 2)


def test_test_functions_orthonormal_case():
    rep = lp_test_functions(5, 0.0, 6)
    assert rep.m == 2
    vals = dict(rep.values)
    assert abs(vals[3]) < 1e-12  # vanishes one past m here
    assert vals[4] == pytest.approx(0.3, abs=1e-10)
    assert rep.optimal_in_range


def test_optimality_probe_accepts_reference_case():
    cert = uub(5, 11, S_EZ, make_potential("newton", n=5))
    rep = optimality_probe(cert, trials=100, seed=0)
    assert rep.trials == 100
    assert rep.violations == 0
    assert rep.accepted >= 1
    assert rep.min_margin >= 0.0


def test_uub_grows_with_lambda_when_class_is_slack():
    # with M strictly below the quadrature cardinality the prefactor
    # M(M/L - 1) is negative, so any admissible lambda larger than the
    # optimum can only raise the bound
    n, s = 5, S_EZ
    pot = make_potential("newton", n=n)
    cert = uub(n, 11, s, pot)
    L = cert.quad.N
    M = 11.0
    lev1 = cert.lev.gegen.at_one()
    g1 = cert.interpolant.at_one()
    base = M * (M / L - 1.0) * (g1 - cert.lam * lev1)
    for bump in (0.05, 0.2, 1.0):
        lam = cert.lam + bump
        worse = M * (M / L - 1.0) * (g1 - lam * lev1)
        assert worse > base


def test_moment_identity_on_quadrature():
    # the rule integrates every Gegenbauer polynomial up to its degree of
    # exactness consistently with 1/N + sum rho_i P_j(alpha_i) = delta_j0 / ...
    rule = quadrature(5, S_EZ)
    table = gegenbauer_table(5, 3, np.asarray(rule.nodes))
    for j in range(1, 4):
        val = 1.0 / rule.N + float(np.dot(rule.weights, table[j]))
        assert abs(val) < 1e-10
