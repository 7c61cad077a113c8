"""Universal upper and lower bounds on the energy of spherical codes.

Given a dimension n, a cardinality M and a separation s, the upper bound
comes from the polynomial

    f(t) = -lambda * f_m(t) + g_T(t),

where f_m is the monic Levenshtein node polynomial at (n, s), g_T is the
Hermite interpolant of the potential h on the node multiset T, and lambda
is the smallest multiplier that drives every Gegenbauer coefficient f_i,
i >= 1, to be nonpositive.  Feasibility demands f >= h on [-1, s]
(automatic for absolutely monotone h, checked on a dense grid) and
f_i <= 0 for i >= 1 (checked coefficientwise); then

    E_h(C) <= M (f_0 M - f(1)) = M (M / L_m(n,s) - 1) f(1)
              + M^2 sum_i rho_i h(alpha_i)

for every code C of M points with separation at most s.  The lower bound
evaluates the quadrature at the separation r solving L(n, r) = M; when
M = L_m(n, s) the two bounds collapse and the certificate is sharp.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import CertificationError, InfeasibleClassError
from .levenshtein import (
    LevenshteinPoly,
    QuadratureRule,
    levenshtein_poly,
    quadrature,
    solve_cardinality,
)
from .orthopoly import GegenPoly, _mul_linear, gegenbauer_table
from .potentials import Potential

__all__ = [
    "LambdaChoice",
    "FeasibilityReport",
    "BoundCertificate",
    "EnergyStrip",
    "TestFunctionReport",
    "ProbeReport",
    "hermite_interpolant",
    "lambda_star",
    "uub",
    "ulb",
    "strip",
    "test_functions",
    "optimality_probe",
]

# Grid tolerance for f - h >= 0 and coefficient tolerance for f_i <= 0.
GAP_TOL = 1e-9
COEFF_TOL = 1e-12
DEFAULT_GRID = 2048


def hermite_interpolant(n: int, pot: Potential, nodes) -> GegenPoly:
    """Hermite interpolant of the potential on a node multiset.

    Node multiplicity up to 2 is supported; a doubled node matches the
    first derivative there.  Newton's divided differences supply the
    coefficients, and the Newton form is resynthesized directly over the
    Gegenbauer basis.
    """
    z = np.array(sorted(float(t) for t in nodes), dtype=float)
    if z.size == 0:
        raise ValueError("node multiset must be nonempty")
    if np.max(z) >= 1.0 or np.min(z) < -1.0:
        raise ValueError("interpolation nodes must lie in [-1, 1)")
    counts = Counter(z.tolist())
    if max(counts.values()) > 2:
        raise ValueError("node multiplicity above 2 is not supported")
    d = z.size
    table = np.zeros((d, d))
    table[:, 0] = pot(z)
    for j in range(1, d):
        for i in range(d - j):
            if z[i + j] == z[i]:
                table[i, j] = pot.deriv(z[i])
            else:
                table[i, j] = (table[i + 1, j - 1] - table[i, j - 1]) / (z[i + j] - z[i])
    newton = table[0]
    coeffs = np.array([newton[d - 1]])
    for j in range(d - 2, -1, -1):
        coeffs = _mul_linear(n, coeffs, z[j])
        coeffs[0] += newton[j]
    return GegenPoly(n, coeffs)


class LambdaChoice(NamedTuple):
    value: float
    argmax: int
    degenerate: bool


def lambda_star(g: GegenPoly, lev: LevenshteinPoly) -> LambdaChoice:
    """Smallest multiplier making every interior coefficient of f nonpositive.

    lambda = max over 1 <= i <= deg(g) of g_i / l_i, where l_i > 0 are the
    Gegenbauer coefficients of the node polynomial.  Ties resolve to the
    smallest index.  A constant interpolant, or one whose interior
    coefficients are all nonpositive already, yields the degenerate choice
    lambda = 0 (f = g_T is feasible on its own).
    """
    lcoef = lev.gegen.coeffs
    if g.dim != lev.dim:
        raise ValueError("interpolant and node polynomial live in different dimensions")
    dg = g.degree
    if dg > lcoef.size - 1:
        raise ValueError(f"interpolant degree {dg} exceeds node polynomial degree {lcoef.size - 1}")
    if dg < 1:
        return LambdaChoice(0.0, 0, True)
    ratios = g.coeffs[1 : dg + 1] / lcoef[1 : dg + 1]
    arg = int(np.argmax(ratios)) + 1
    lam = float(ratios[arg - 1])
    if lam <= 0.0:
        return LambdaChoice(0.0, arg, True)
    return LambdaChoice(lam, arg, False)


@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of the two feasibility checks on the bound polynomial."""

    max_interior_coeff: float
    min_gap: float
    grid_size: int
    passed: bool


@dataclass(frozen=True)
class BoundCertificate:
    """Everything needed to restate and recheck an upper-bound computation."""

    dim: int
    M: float
    s: float
    potential: Potential
    quad: QuadratureRule
    lev: LevenshteinPoly
    interpolant: GegenPoly
    lam: float
    lam_argmax: int
    degenerate: bool
    f: GegenPoly
    uub_value: float
    quadrature_form: float
    feasibility: FeasibilityReport


def _feasibility_grid(s: float, nodes: np.ndarray, size: int) -> np.ndarray:
    # Chebyshev-distributed points cluster near both ends of [-1, s], where
    # the gap f - h is smallest; the quadrature nodes (gap exactly zero)
    # are appended explicitly.
    theta = np.linspace(0.0, math.pi, size)
    grid = 0.5 * (s - 1.0) + 0.5 * (s + 1.0) * np.cos(theta)
    return np.unique(np.concatenate([grid, nodes]))


def _check_feasibility(
    f: GegenPoly, pot: Potential, s: float, m: int, nodes: np.ndarray, grid_size: int
) -> FeasibilityReport:
    max_interior = float(np.max(f.coeffs[1 : m + 1]))
    grid = _feasibility_grid(s, nodes, grid_size)
    gap = f(grid) - pot(grid)
    min_gap = float(np.min(gap))
    passed = max_interior <= COEFF_TOL and min_gap >= -GAP_TOL
    return FeasibilityReport(max_interior, min_gap, grid.size, passed)


def uub(
    n: int,
    M: float,
    s: float,
    pot: Potential,
    *,
    extra_node: bool = False,
    grid_size: int = DEFAULT_GRID,
    tol: float = 1e-13,
) -> BoundCertificate:
    """Universal upper bound on E_h for M points with separation at most s.

    Requires M <= L_m(n, s) (a small absolute slack covers the sharp case
    M = L computed in floating point).  ``extra_node`` augments the
    interpolation multiset with the spare simple node (-1 for odd m, a
    doubling of s for even m); by construction this cannot change the
    bound, which the invariant tests exercise.
    """
    M = float(M)
    if not M >= 2.0:
        raise ValueError(f"cardinality must be at least 2, got {M!r}")
    quad = quadrature(n, s, tol)
    L = quad.N
    if M > L + 1e-9:
        raise InfeasibleClassError(
            f"no code class: M = {M:g} exceeds L_{quad.m}({n}, {s:g}) = {L:.12g}"
        )
    lev = levenshtein_poly(n, quad.interval, quad.s, quad.nodes)
    m = quad.m
    multiset = list(lev.multiset)
    if extra_node:
        multiset.append(-1.0 if quad.interval.eps == 0 else float(quad.s))
    g = hermite_interpolant(n, pot, multiset)
    lam, arg, degenerate = lambda_star(g, lev)
    coeffs = np.zeros(m + 1)
    coeffs[: g.coeffs.size] = g.coeffs
    coeffs -= lam * lev.gegen.coeffs
    f = GegenPoly(n, coeffs)

    node_vals = f(quad.nodes)
    h_vals = pot(quad.nodes)
    node_res = float(np.max(np.abs(node_vals - h_vals) / np.maximum(1.0, np.abs(h_vals))))
    if node_res > 1e-10:
        raise CertificationError(f"interpolation residual {node_res:.3e} at the nodes")

    feas = _check_feasibility(f, pot, quad.s, m, quad.nodes, grid_size)
    if not feas.passed:
        raise CertificationError(
            f"feasibility failed: max interior coefficient {feas.max_interior_coeff:.3e}, "
            f"min gap {feas.min_gap:.3e} on {feas.grid_size} points"
        )

    f_one = f.at_one()
    value = M * (float(f.coeffs[0]) * M - f_one)
    quad_form = M * (M / L - 1.0) * f_one + M * M * float(np.dot(quad.weights, h_vals))
    if abs(value - quad_form) > 1e-10 * max(1.0, abs(value)):
        raise CertificationError(
            f"bound forms disagree: {value!r} vs {quad_form!r}"
        )
    return BoundCertificate(
        dim=n,
        M=M,
        s=float(quad.s),
        potential=pot,
        quad=quad,
        lev=lev,
        interpolant=g,
        lam=lam,
        lam_argmax=arg,
        degenerate=degenerate,
        f=f,
        uub_value=value,
        quadrature_form=quad_form,
        feasibility=feas,
    )


def ulb(n: int, M: float, pot: Potential, tol: float = 1e-13) -> tuple[float, QuadratureRule]:
    """Universal lower bound on E_h over all codes of M points in S^{n-1}.

    Solves L(n, r) = M and evaluates M^2 sum_i rho_i h(alpha_i) at the
    resulting quadrature.
    """
    r, rule = solve_cardinality(n, M, tol)
    value = float(M) ** 2 * float(np.dot(rule.weights, pot(rule.nodes)))
    return value, rule


@dataclass(frozen=True)
class EnergyStrip:
    """The interval [ulb, uub] of possible energies for the class (n, M, s)."""

    ulb: float
    uub: float
    sharp: bool
    ulb_rule: QuadratureRule
    uub_cert: BoundCertificate


def strip(n: int, M: float, s: float, pot: Potential, *, grid_size: int = DEFAULT_GRID) -> EnergyStrip:
    """Two-sided energy strip; ``sharp`` flags M = L_m(n, s) within 1e-9."""
    cert = uub(n, M, s, pot, grid_size=grid_size)
    low, rule = ulb(n, M, pot)
    if low > cert.uub_value + 1e-9 * max(1.0, abs(cert.uub_value)):
        raise CertificationError(
            f"strip is inverted: ulb {low!r} exceeds uub {cert.uub_value!r}"
        )
    sharp = abs(cert.quad.N - float(M)) <= 1e-9 * max(1.0, cert.quad.N)
    return EnergyStrip(low, cert.uub_value, sharp, rule, cert)


@dataclass(frozen=True)
class TestFunctionReport:
    """Values R_j = 1/N + sum_i rho_i P_j(alpha_i) and the sign verdict.

    R_j vanishes for 1 <= j <= m by exactness.  Nonnegativity of every
    R_j with j >= 2k + eps certifies that no higher interval index can
    improve the bound at this separation; the verdict covers the computed
    range only.
    """

    dim: int
    s: float
    m: int
    threshold: int
    values: tuple[tuple[int, float], ...]
    optimal_in_range: bool
    first_negative: int | None


def test_functions(n: int, s: float, j_max: int) -> TestFunctionReport:
    if not isinstance(j_max, (int, np.integer)) or j_max < 1:
        raise ValueError(f"j_max must be a positive integer, got {j_max!r}")
    rule = quadrature(n, s)
    table = gegenbauer_table(n, int(j_max), rule.nodes)
    sums = table @ rule.weights + 1.0 / rule.N
    threshold = 2 * rule.interval.k + rule.interval.eps
    values = tuple((j, float(sums[j])) for j in range(1, int(j_max) + 1))
    bad = [j for j, v in values if j >= threshold and v < -1e-9]
    return TestFunctionReport(
        dim=int(n),
        s=float(rule.s),
        m=rule.m,
        threshold=threshold,
        values=values,
        optimal_in_range=not bad,
        first_negative=bad[0] if bad else None,
    )


@dataclass(frozen=True)
class ProbeReport:
    trials: int
    accepted: int
    violations: int
    min_margin: float


def optimality_probe(
    cert: BoundCertificate,
    trials: int = 100,
    seed: int = 0,
    scale: float | None = None,
) -> ProbeReport:
    """Random sanity check that no feasible competitor beats the certificate.

    Draws perturbations F = f - sum_i c_i P_i with c_i >= 0, keeps those
    still above the potential on the feasibility grid (F(1) <= f(1) holds
    automatically), and checks M (F_0 M - F(1)) >= uub - 1e-9 |uub| for
    each survivor.  ``min_margin`` is the smallest observed slack.
    """
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials!r}")
    rng = np.random.default_rng(seed)
    m = cert.quad.m
    grid = _feasibility_grid(cert.s, cert.quad.nodes, DEFAULT_GRID)
    table = gegenbauer_table(cert.dim, m, grid)
    f_vals = cert.f(grid)
    h_vals = cert.potential(grid)
    if scale is None:
        scale = 1e-3 * (1.0 + abs(cert.lam))
    M = cert.M
    f_one = cert.f.at_one()
    f0 = float(cert.f.coeffs[0])
    accepted = violations = 0
    min_margin = math.inf
    tol = 1e-9 * abs(cert.uub_value)
    for _ in range(trials):
        c = rng.uniform(0.0, scale, m + 1)
        pert = c @ table
        if float(np.min(f_vals - pert - h_vals)) < -GAP_TOL:
            continue
        accepted += 1
        bound = M * ((f0 - c[0]) * M - (f_one - float(c.sum())))
        margin = bound - cert.uub_value
        min_margin = min(min_margin, margin)
        if margin < -tol:
            violations += 1
    return ProbeReport(trials, accepted, violations, min_margin)
