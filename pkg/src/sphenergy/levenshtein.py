"""Levenshtein intervals, bound values, node polynomials, and 1/N quadrature.

For each dimension n the half-open range [-1, 1) splits into closed
intervals I_1, I_2, ... whose endpoints are greatest zeros of adjacent
Jacobi polynomials:

    I_{2k-1} = [t_{k-1}^{1,1}, t_k^{1,0}],   I_{2k} = [t_k^{1,0}, t_k^{1,1}],

with t_0^{1,1} = -1 and t_i^{a,b} the greatest zero of
P_i^{(a + (n-3)/2, b + (n-3)/2)}.  A separation s picks the interval index
m = 2k - 1 + eps, the maximal-cardinality value L_m(n, s), and a quadrature

    f_0 = f(1) / L_m(n, s) + sum_i rho_i f(alpha_i)

exact for polynomials of degree at most m.  The nodes alpha_i are the roots
of (t + 1)^eps (Q_k(t) Q_{k-1}(s) - Q_k(s) Q_{k-1}(t)) with
Q_i = P_i^{((n-1)/2, eps + (n-3)/2)}; the largest node is s itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CertificationError, NumericsError
from .orthopoly import (
    GegenPoly,
    JacobiParams,
    eval_gegenbauer,
    eval_jacobi,
    eval_jacobi_deriv,
    gegenbauer_table,
    greatest_zero,
    jacobi_zeros,
    product_to_gegen,
)

__all__ = [
    "IntervalIndex",
    "QuadratureRule",
    "LevenshteinPoly",
    "find_interval",
    "interval_for",
    "lev_value",
    "lev_function",
    "lev_poly_roots",
    "levenshtein_poly",
    "quadrature",
    "solve_cardinality",
    "dgs_number",
]

MAX_INTERVAL = 64

# Absolute slack used when deciding that s sits exactly on a shared
# endpoint of two consecutive intervals.
TIE_TOL = 1e-12


@dataclass(frozen=True)
class IntervalIndex:
    """Interval I_m containing a separation, with m = 2k - 1 + eps."""

    m: int
    k: int
    eps: int
    lo: float
    hi: float
    tie_with: int | None = None


def _check_dim(n) -> int:
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")
    return int(n)


@lru_cache(maxsize=None)
def _interval_endpoints(n: int, m: int) -> tuple[float, float]:
    k = (m + 1) // 2
    inner = JacobiParams((n - 1) / 2.0, (n - 3) / 2.0)  # exponents of t^{1,0}
    outer = JacobiParams((n - 1) / 2.0, (n - 1) / 2.0)  # exponents of t^{1,1}
    if m % 2 == 1:
        return greatest_zero(outer, k - 1), greatest_zero(inner, k)
    return greatest_zero(inner, k), greatest_zero(outer, k)


def interval_for(n: int, m: int) -> IntervalIndex:
    """The interval I_m by index rather than by membership."""
    n = _check_dim(n)
    if not isinstance(m, (int, np.integer)) or not 1 <= m <= MAX_INTERVAL:
        raise ValueError(f"interval index must be in 1..{MAX_INTERVAL}, got {m!r}")
    lo, hi = _interval_endpoints(n, int(m))
    return IntervalIndex(int(m), (m + 1) // 2, (m + 1) % 2, lo, hi)


def find_interval(n: int, s: float) -> IntervalIndex:
    """Locate the interval I_m containing s.

    At a shared endpoint of I_m and I_{m+1} the smaller index wins and the
    tie is recorded in ``tie_with``; by continuity both choices give the
    same maximal cardinality.
    """
    n = _check_dim(n)
    s = float(s)
    if not -1.0 <= s < 1.0:
        raise ValueError(f"separation must lie in [-1, 1), got {s!r}")
    for m in range(1, MAX_INTERVAL + 1):
        lo, hi = _interval_endpoints(n, m)
        if s <= hi + TIE_TOL:
            tie = m + 1 if abs(s - hi) <= TIE_TOL else None
            return IntervalIndex(m, (m + 1) // 2, (m + 1) % 2, lo, hi, tie)
    raise ValueError(f"separation {s} too close to 1: interval index exceeds {MAX_INTERVAL}")


def lev_value(n: int, interval: IntervalIndex, s: float) -> float:
    """The maximal-cardinality value L_m(n, s) on the given interval."""
    n = _check_dim(n)
    s = float(s)
    k, eps = interval.k, interval.eps
    pk = eval_gegenbauer(n, k, s)
    if eps == 0:
        pk_prev = eval_gegenbauer(n, k - 1, s)
        denom = (1.0 - s) * pk
        if denom == 0.0:
            raise NumericsError(f"degenerate denominator in L_{interval.m}({n}, {s})")
        ratio = (pk_prev - pk) / denom
        return math.comb(k + n - 3, k - 1) * ((2 * k + n - 3) / (n - 1) - ratio)
    pk_next = eval_gegenbauer(n, k + 1, s)
    denom = (1.0 - s) * (pk + pk_next)
    if denom == 0.0:
        raise NumericsError(f"degenerate denominator in L_{interval.m}({n}, {s})")
    ratio = (1.0 + s) * (pk - pk_next) / denom
    return math.comb(k + n - 2, k) * ((2 * k + n - 1) / (n - 1) - ratio)


def lev_function(n: int, s: float) -> float:
    """L(n, s): the piecewise maximal cardinality at separation s."""
    return lev_value(n, find_interval(n, s), s)


def dgs_number(n: int, m: int) -> float:
    """Maximal cardinality of an m-distance design bound at interval ends.

    These are the classical closed forms D(n, 2k-1) = 2 C(n+k-2, n-1) and
    D(n, 2k) = C(n+k-1, n-1) + C(n+k-2, n-1); L_m(n, .) climbs from
    D(n, m) to D(n, m+1) across I_m.
    """
    n = _check_dim(n)
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise ValueError(f"index must be a positive integer, got {m!r}")
    k = (m + 1) // 2
    if m % 2 == 1:
        return 2.0 * math.comb(n + k - 2, n - 1)
    return float(math.comb(n + k - 1, n - 1) + math.comb(n + k - 2, n - 1))


def _node_params(n: int, eps: int) -> JacobiParams:
    return JacobiParams((n - 1) / 2.0, eps + (n - 3) / 2.0)


def lev_poly_roots(n: int, interval: IntervalIndex, s: float, tol: float = 1e-13) -> np.ndarray:
    """Distinct quadrature nodes alpha_0 < ... < alpha_{k-1+eps} = s.

    The k roots of Q_k(t) Q_{k-1}(s) - Q_k(s) Q_{k-1}(t) are simple and, by
    the interlacing of Jacobi zeros, exactly one lies in each of the
    brackets (-1, w_1), (w_1, w_2), ..., (w_{k-1}, w_k) formed by the zeros
    w_j of Q_k.  For eps = 1 the node -1 is prepended.
    """
    n = _check_dim(n)
    s = float(s)
    k, eps = interval.k, interval.eps
    p = _node_params(n, eps)
    w = jacobi_zeros(p, k, tol)
    qs = eval_jacobi(p, k, s)
    q_scale = abs(eval_jacobi(p, k, 1.0)) + abs(eval_jacobi(p, k, -1.0))
    if abs(qs) <= 1e-12 * q_scale:
        # s sits on the greatest zero of Q_k (right interval endpoint):
        # the node polynomial collapses to Q_k itself.
        roots = list(w)
    else:
        qs_prev = eval_jacobi(p, k - 1, s)

        def phi(t: float) -> float:
            return eval_jacobi(p, k, t) * qs_prev - qs * eval_jacobi(p, k - 1, t)

        def dphi(t: float) -> float:
            return eval_jacobi_deriv(p, k, t) * qs_prev - qs * eval_jacobi_deriv(p, k - 1, t)

        pts = [-1.0, *w]
        vals = [phi(t) for t in pts]
        scale = max(abs(v) for v in vals) or 1.0
        roots = []
        for j in range(k):
            lo, hi = pts[j], pts[j + 1]
            flo, fhi = vals[j], vals[j + 1]
            if flo == 0.0 or math.copysign(1.0, flo) != math.copysign(1.0, fhi):
                roots.append(_bisect_newton(phi, dphi, lo, hi, flo, fhi, tol))
        if len(roots) == k - 1 and abs(vals[0]) <= 1e-9 * scale:
            # The smallest root has collided with -1 (sharp antipodal case);
            # the bracket scan cannot see a sign change there.
            roots.insert(0, -1.0)
        if len(roots) != k:
            raise NumericsError(
                f"expected {k} node-polynomial roots for (n={n}, m={interval.m}, s={s}), "
                f"found {len(roots)}"
            )
    if abs(roots[-1] - s) > 1e-8:
        raise NumericsError(
            f"largest node {roots[-1]} does not match separation {s} (n={n}, m={interval.m})"
        )
    roots[-1] = s
    if eps == 1:
        roots = [-1.0, *roots]
    out = np.array(roots, dtype=float)
    if np.any(np.diff(out) <= 0):
        raise NumericsError(f"nodes are not strictly increasing: {out}")
    return out


def _bisect_newton(f, df, lo, hi, flo, fhi, tol):
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    a, b, fa = lo, hi, flo
    while b - a > tol:
        mid = 0.5 * (a + b)
        if mid == a or mid == b:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if math.copysign(1.0, fm) == math.copysign(1.0, fa):
            a, fa = mid, fm
        else:
            b = mid
    root = 0.5 * (a + b)
    for _ in range(5):
        d = df(root)
        if d == 0.0:
            break
        step = f(root) / d
        nxt = root - step
        if not (a <= nxt <= b):
            break
        root = nxt
        if abs(step) < 0.25 * tol:
            break
    return root


@dataclass(frozen=True)
class LevenshteinPoly:
    """The monic node polynomial with its interpolation multiset.

    ``multiset`` lists the Hermite nodes with repetition: every interior
    node twice, the endpoints -1 (when present) and s once, for a total of
    m entries.  ``gegen`` expands prod_{t_j in multiset} (t - t_j) over the
    Gegenbauer basis; all of its coefficients are strictly positive.
    """

    dim: int
    s: float
    interval: IntervalIndex
    multiset: tuple[float, ...]
    gegen: GegenPoly


def _node_multiset(interval: IntervalIndex, roots: np.ndarray) -> tuple[float, ...]:
    k, eps = interval.k, interval.eps
    if eps == 0:
        doubled = [r for r in roots[:-1] for _ in range(2)]
    else:
        doubled = [roots[0]] + [r for r in roots[1:-1] for _ in range(2)]
    return tuple(doubled + [float(roots[-1])])


def levenshtein_poly(
    n: int, interval: IntervalIndex, s: float, roots: np.ndarray | None = None
) -> LevenshteinPoly:
    """Build and certify the node polynomial for (n, m, s)."""
    if roots is None:
        roots = lev_poly_roots(n, interval, s)
    multiset = _node_multiset(interval, roots)
    if len(multiset) != interval.m:
        raise NumericsError(
            f"node multiset has {len(multiset)} entries, expected m = {interval.m}"
        )
    poly = product_to_gegen(n, multiset)
    coeffs = poly.coeffs
    if np.any(coeffs <= 0.0):
        raise CertificationError(
            f"node polynomial has nonpositive Gegenbauer coefficients: {coeffs}"
        )
    grid = np.linspace(-1.0, s, 257)
    vals = poly(grid)
    bound = 1e-10 * max(1.0, float(np.max(np.abs(vals))))
    if float(np.max(vals)) > bound:
        raise CertificationError(
            f"node polynomial is positive on [-1, s]: max {float(np.max(vals)):.3e}"
        )
    return LevenshteinPoly(n, float(s), interval, multiset, poly)


@dataclass(frozen=True)
class QuadratureRule:
    """1/N quadrature: f_0 = f(1)/N + sum rho_i f(alpha_i), exact to degree m."""

    dim: int
    interval: IntervalIndex
    s: float
    N: float
    nodes: np.ndarray
    weights: np.ndarray
    residual: float

    @property
    def m(self) -> int:
        return self.interval.m


def quadrature(n: int, s: float, tol: float = 1e-13) -> QuadratureRule:
    """Nodes and weights of the 1/N quadrature at separation s.

    The weights solve the square system sum_i rho_i P_j(alpha_i) =
    delta_{j0} - 1/N for j = 0 .. k-1+eps; exactness for the remaining
    degrees up to m is then verified, along with strict positivity.
    """
    n = _check_dim(n)
    s = float(s)
    interval = find_interval(n, s)
    roots = lev_poly_roots(n, interval, s, tol)
    N = lev_value(n, interval, s)
    q = roots.size  # = k + eps
    table = gegenbauer_table(n, interval.m, roots)
    rhs = np.full(q, -1.0 / N)
    rhs[0] += 1.0
    weights = np.linalg.solve(table[:q], rhs)
    if np.any(weights <= 0.0):
        raise CertificationError(
            f"nonpositive quadrature weight for (n={n}, s={s}): {weights}"
        )
    target = np.full(interval.m + 1, -1.0 / N)
    target[0] += 1.0
    residual = float(np.max(np.abs(table @ weights - target)))
    if residual > 1e-8:
        raise CertificationError(
            f"quadrature exactness residual {residual:.3e} exceeds 1e-8 (n={n}, s={s})"
        )
    return QuadratureRule(n, interval, s, N, roots, weights, residual)


def solve_cardinality(n: int, M: float, tol: float = 1e-13) -> tuple[float, QuadratureRule]:
    """Invert L(n, .) at cardinality M and return the quadrature there.

    L(n, .) is continuous and strictly increasing on [-1, 1) with
    L(n, -1) = 2, so plain bisection applies; the bracket is grown toward
    1 until it straddles M.
    """
    n = _check_dim(n)
    M = float(M)
    if not M >= 2.0:
        raise ValueError(f"cardinality must be at least 2, got {M!r}")
    if M == 2.0:
        return -1.0, quadrature(n, -1.0, tol)
    lo = -1.0
    hi = 0.5
    for _ in range(80):
        try:
            if lev_function(n, hi) >= M:
                break
        except ValueError:
            raise ValueError(f"cardinality {M} needs intervals beyond index {MAX_INTERVAL}") from None
        lo = hi
        hi = 0.5 * (1.0 + hi)
    else:
        raise NumericsError(f"could not bracket cardinality {M} in dimension {n}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if lev_function(n, mid) < M:
            lo = mid
        else:
            hi = mid
    r = 0.5 * (lo + hi)
    return r, quadrature(n, r, tol)
