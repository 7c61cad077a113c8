"""Gegenbauer and Jacobi polynomial machinery.

Every polynomial that the bound pipeline manipulates is stored by its
coefficients in the Gegenbauer basis {P_i^{(n)}} attached to the sphere
S^{n-1}, normalized so that P_i^{(n)}(1) = 1.  Products with linear
factors are expanded with the three-term linearization

    t * P_i = ((i + n - 2) * P_{i+1} + i * P_{i-1}) / (2i + n - 2),

so coefficient arithmetic never leaves the basis; the monomial basis is
not used anywhere.

Jacobi polynomials P_i^{(a,b)} (standard normalization, not rescaled at
t = 1) supply the interval endpoints and quadrature node equations.
Zeros are found by bisection on interlacing brackets followed by a few
safeguarded Newton steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NumericsError

__all__ = [
    "MAX_DEGREE",
    "GegenPoly",
    "JacobiParams",
    "eval_gegenbauer",
    "eval_gegenbauer_deriv",
    "gegenbauer_table",
    "eval_jacobi",
    "eval_jacobi_deriv",
    "jacobi_zeros",
    "greatest_zero",
    "product_to_gegen",
    "gegen_coefficient_integral",
]

# Double precision keeps the recurrences accurate in this range and the
# bound pipeline needs small degrees only.
MAX_DEGREE = 64


def _check_dim(n) -> int:
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")
    return int(n)


def _check_degree(i) -> int:
    if not isinstance(i, (int, np.integer)) or i < 0:
        raise ValueError(f"degree must be a nonnegative integer, got {i!r}")
    if i > MAX_DEGREE:
        raise ValueError(f"degree {i} exceeds the supported maximum {MAX_DEGREE}")
    return int(i)


def gegenbauer_table(n: int, i_max: int, t) -> np.ndarray:
    """Stack P_0^{(n)}(t), ..., P_{i_max}^{(n)}(t) along a new leading axis.

    t may be a scalar or any ndarray; the result has shape (i_max + 1, *t.shape).
    """
    n = _check_dim(n)
    i_max = _check_degree(i_max)
    t = np.asarray(t, dtype=float)
    out = np.empty((i_max + 1,) + t.shape, dtype=float)
    out[0] = 1.0
    if i_max >= 1:
        out[1] = t
    for i in range(1, i_max):
        out[i + 1] = ((2 * i + n - 2) * t * out[i] - i * out[i - 1]) / (i + n - 2)
    return out


def eval_gegenbauer(n: int, i: int, t):
    """P_i^{(n)}(t) by the forward recurrence, normalized so P_i^{(n)}(1) = 1."""
    n = _check_dim(n)
    i = _check_degree(i)
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if i == 0:
        return prev if prev.ndim else float(prev)
    cur = t.copy()
    for j in range(1, i):
        prev, cur = cur, ((2 * j + n - 2) * t * cur - j * prev) / (j + n - 2)
    return cur if cur.ndim else float(cur)


@lru_cache(maxsize=None)
def _jacobi_at_one(a: float, i: int) -> float:
    # P_i^{(a,b)}(1) = binomial(i + a, i), independent of b.
    val = 1.0
    for j in range(1, i + 1):
        val *= (a + j) / j
    return val


def eval_gegenbauer_deriv(n: int, i: int, t):
    """d/dt P_i^{(n)}(t), via the Jacobi derivative identity."""
    n = _check_dim(n)
    i = _check_degree(i)
    t = np.asarray(t, dtype=float)
    if i == 0:
        out = np.zeros_like(t)
        return out if out.ndim else 0.0
    a = (n - 3) / 2.0
    inner = eval_jacobi(JacobiParams(a + 1.0, a + 1.0), i - 1, t)
    scale = 0.5 * (i + n - 2) / _jacobi_at_one(a, i)
    out = scale * np.asarray(inner, dtype=float)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class JacobiParams:
    """Exponent pair (a, b) of a Jacobi weight (1-t)^a (1+t)^b."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > -1.0 and self.b > -1.0):
            raise ValueError(f"Jacobi exponents must exceed -1, got {(self.a, self.b)}")


def eval_jacobi(p: JacobiParams, i: int, t):
    """P_i^{(a,b)}(t) in the standard normalization (not rescaled at t = 1)."""
    i = _check_degree(i)
    a, b = p.a, p.b
    t = np.asarray(t, dtype=float)
    prev = np.ones_like(t)
    if i == 0:
        return prev if prev.ndim else 1.0
    cur = 0.5 * (a - b) + 0.5 * (a + b + 2) * t
    for j in range(2, i + 1):
        s = 2 * j + a + b
        c0 = 2 * j * (j + a + b) * (s - 2)
        c1 = (s - 1) * (a * a - b * b)
        c2 = (s - 1) * s * (s - 2)
        c3 = 2 * (j + a - 1) * (j + b - 1) * s
        prev, cur = cur, ((c1 + c2 * t) * cur - c3 * prev) / c0
    return cur if cur.ndim else float(cur)


def eval_jacobi_deriv(p: JacobiParams, i: int, t):
    """d/dt P_i^{(a,b)}(t) = (i + a + b + 1)/2 * P_{i-1}^{(a+1,b+1)}(t)."""
    i = _check_degree(i)
    t = np.asarray(t, dtype=float)
    if i == 0:
        out = np.zeros_like(t)
        return out if out.ndim else 0.0
    inner = eval_jacobi(JacobiParams(p.a + 1.0, p.b + 1.0), i - 1, t)
    out = 0.5 * (i + p.a + p.b + 1) * np.asarray(inner, dtype=float)
    return out if out.ndim else float(out)


def _refine_zero(p: JacobiParams, i: int, lo: float, hi: float, tol: float) -> float:
    """One simple zero of P_i^{(a,b)} inside (lo, hi), where the signs differ."""
    flo = eval_jacobi(p, i, lo)
    fhi = eval_jacobi(p, i, hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise NumericsError(
            f"no sign change for Jacobi({p.a},{p.b}) degree {i} on [{lo}, {hi}]"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fmid = eval_jacobi(p, i, mid)
        if fmid == 0.0:
            return mid
        if math.copysign(1.0, fmid) == math.copysign(1.0, flo):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
    root = 0.5 * (lo + hi)
    for _ in range(5):
        d = eval_jacobi_deriv(p, i, root)
        if d == 0.0:
            break
        step = eval_jacobi(p, i, root) / d
        nxt = root - step
        if not (lo <= nxt <= hi):
            break
        root = nxt
        if abs(step) < 0.25 * tol:
            break
    return root


@lru_cache(maxsize=None)
def _jacobi_zeros_cached(a: float, b: float, i: int, tol: float) -> tuple[float, ...]:
    if i == 0:
        return ()
    p = JacobiParams(a, b)
    prev = _jacobi_zeros_cached(a, b, i - 1, tol)
    brackets = (-1.0,) + prev + (1.0,)
    return tuple(
        _refine_zero(p, i, brackets[j], brackets[j + 1], tol) for j in range(i)
    )


def jacobi_zeros(p: JacobiParams, i: int, tol: float = 1e-13) -> np.ndarray:
    """All zeros of P_i^{(a,b)} in increasing order.

    Computed degree by degree: the zeros of P_i strictly interlace those of
    P_{i-1}, which gives sign-definite bisection brackets at every step.
    """
    i = _check_degree(i)
    return np.array(_jacobi_zeros_cached(p.a, p.b, i, tol))


def greatest_zero(p: JacobiParams, i: int, tol: float = 1e-13) -> float:
    """Greatest zero of P_i^{(a,b)}; by convention -1 for i = 0."""
    i = _check_degree(i)
    if i == 0:
        return -1.0
    return _jacobi_zeros_cached(p.a, p.b, i, tol)[-1]


@dataclass(frozen=True)
class GegenPoly:
    """A polynomial held as coefficients over {P_i^{(n)}}, index = degree.

    Trailing zero coefficients are allowed; ``degree`` reports the last
    index that is nonzero relative to the coefficient scale.
    """

    dim: int
    coeffs: np.ndarray

    def __post_init__(self):
        _check_dim(self.dim)
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=float)).copy()
        if c.ndim != 1 or c.size == 0:
            raise ValueError("coeffs must be a nonempty 1-D sequence")
        if c.size - 1 > MAX_DEGREE:
            raise ValueError(f"degree {c.size - 1} exceeds the supported maximum {MAX_DEGREE}")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        scale = max(1.0, float(np.max(np.abs(self.coeffs))))
        live = np.nonzero(np.abs(self.coeffs) > 1e-14 * scale)[0]
        return int(live[-1]) if live.size else 0

    def __call__(self, t):
        table = gegenbauer_table(self.dim, self.coeffs.size - 1, t)
        out = np.tensordot(self.coeffs, table, axes=(0, 0))
        return out if np.ndim(out) else float(out)

    def deriv(self, t):
        t_arr = np.asarray(t, dtype=float)
        out = np.zeros_like(t_arr)
        for i in range(1, self.coeffs.size):
            ci = self.coeffs[i]
            if ci != 0.0:
                out = out + ci * np.asarray(eval_gegenbauer_deriv(self.dim, i, t_arr))
        return out if out.ndim else float(out)

    def at_one(self) -> float:
        # P_i^{(n)}(1) = 1 for every i.
        return float(self.coeffs.sum())


def _mul_linear(n: int, coeffs: np.ndarray, root: float) -> np.ndarray:
    """Coefficients of (t - root) * f, staying in the Gegenbauer basis."""
    out = np.zeros(coeffs.size + 1, dtype=float)
    for i, ci in enumerate(coeffs):
        if ci == 0.0:
            continue
        if i == 0:
            out[1] += ci
        else:
            d = 2 * i + n - 2
            out[i + 1] += ci * (i + n - 2) / d
            out[i - 1] += ci * i / d
        out[i] -= ci * root
    return out


def product_to_gegen(n: int, roots) -> GegenPoly:
    """Expand the monic polynomial prod (t - r) over the Gegenbauer basis."""
    n = _check_dim(n)
    roots = [float(r) for r in roots]
    if len(roots) > MAX_DEGREE:
        raise ValueError(f"product degree {len(roots)} exceeds the supported maximum {MAX_DEGREE}")
    coeffs = np.array([1.0])
    for r in roots:
        coeffs = _mul_linear(n, coeffs, r)
    return GegenPoly(n, coeffs)


def _gauss_jacobi_estimate(n: int, f, i: int, order: int) -> float:
    from scipy.special import roots_jacobi

    x, w = roots_jacobi(order, (n - 3) / 2.0, (n - 3) / 2.0)
    pvals = eval_gegenbauer(n, i, x)
    num = float(np.sum(w * np.asarray(f(x), dtype=float) * pvals))
    den = float(np.sum(w * pvals * pvals))
    return num / den


def gegen_coefficient_integral(n: int, f, i: int) -> float:
    """Coefficient of P_i^{(n)} in the expansion of f, by weighted quadrature.

    Integrates f * P_i^{(n)} against (1 - t^2)^{(n-3)/2} on [-1, 1] and divides
    by the same integral of [P_i^{(n)}]^2, using Gauss-Jacobi rules at two
    orders as a convergence check.  f must accept ndarray arguments.  This is
    the slow reference route; the bound pipeline itself never calls it.
    """
    n = _check_dim(n)
    i = _check_degree(i)
    coarse = _gauss_jacobi_estimate(n, f, i, 128)
    fine = _gauss_jacobi_estimate(n, f, i, 192)
    if abs(fine - coarse) > 1e-10 * max(1.0, abs(fine)):
        raise NumericsError(
            f"coefficient integral did not converge: {coarse!r} vs {fine!r} "
            f"(residual {abs(fine - coarse):.3e})"
        )
    return fine
