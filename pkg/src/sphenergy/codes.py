"""Concrete spherical codes: construction, energy, and bound verification.

A code is an M x n array of unit rows.  Energies sum the kernel over
ordered pairs of distinct points; moments sum Gegenbauer values over all
ordered pairs including the diagonal, so the positive-definiteness of the
basis makes every moment nonnegative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import EnergyStrip, strip
from .errors import InfiniteEnergyError
from .levenshtein import QuadratureRule
from .orthopoly import gegenbauer_table
from .potentials import Potential

__all__ = [
    "SphericalCode",
    "DistanceDistribution",
    "DDSolveReport",
    "StripVerdict",
    "load_code",
    "generate",
    "energy",
    "separation",
    "moments",
    "distance_distribution",
    "dd_system_solve",
    "verify_strip",
    "ez_separation",
    "ez_energy_n5",
    "EZ_N5_COSINES",
]

# Inner products of the 11-point dimension-5 code of Ermolaeva and Zinoviev
# beyond its separation, as printed in the source tables, with the pair
# multiplicities (over ordered pairs) attached by the construction.
EZ_N5_COSINES = (-0.22793, -0.553428, -0.89904)
_EZ_N5_MULTIPLICITIES = (70, 20, 10, 10)  # for (s, a, b, c)


class SphericalCode:
    """Unit vectors on S^{n-1}, with the Gram matrix cached.

    Rows must have Euclidean norm within ``norm_tol`` of 1; use
    ``load_code`` to renormalize nearly-unit input.
    """

    def __init__(self, points, norm_tol: float = 1e-9):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.ndim != 2:
            raise ValueError("points must form a 2-D array")
        if pts.shape[1] < 2:
            raise ValueError(f"dimension must be at least 2, got {pts.shape[1]}")
        if pts.shape[0] < 2:
            raise ValueError(f"a code needs at least 2 points, got {pts.shape[0]}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points must be finite")
        norms = np.linalg.norm(pts, axis=1)
        worst = float(np.max(np.abs(norms - 1.0)))
        if worst > norm_tol:
            raise ValueError(f"row norm deviates from 1 by {worst:.3e} (tolerance {norm_tol:g})")
        self.points = pts
        self.dim = int(pts.shape[1])
        self.size = int(pts.shape[0])
        self.norm_tol = float(norm_tol)
        gram = pts @ pts.T
        gram = 0.5 * (gram + gram.T)
        np.clip(gram, -1.0, 1.0, out=gram)
        self.gram = gram


def load_code(path, dim_hint: int | None = None, norm_tol: float = 1e-9) -> SphericalCode:
    """Read a code from a text file: one point per line, comma or whitespace
    separated coordinates, '#' starting a comment.  Rows within norm_tol of
    unit length are renormalized; anything farther off is rejected.
    """
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            fields = text.replace(",", " ").split()
            try:
                rows.append([float(x) for x in fields])
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: cannot parse {text!r}") from None
    if not rows:
        raise ValueError(f"{path}: no points found")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError(f"{path}: rows have inconsistent lengths")
    if dim_hint is not None and width != dim_hint:
        raise ValueError(f"{path}: expected dimension {dim_hint}, found {width}")
    pts = np.asarray(rows, dtype=float)
    norms = np.linalg.norm(pts, axis=1)
    worst = float(np.max(np.abs(norms - 1.0)))
    if worst > norm_tol:
        raise ValueError(f"{path}: row norm deviates from 1 by {worst:.3e} (tolerance {norm_tol:g})")
    return SphericalCode(pts / norms[:, None], norm_tol)


def _simplex(n: int) -> np.ndarray:
    # Vertices of the regular simplex: center the standard basis of
    # R^{n+1} and express the differences in the explicit Helmert basis of
    # the hyperplane orthogonal to (1, ..., 1); no factorization needed,
    # so the output is reproducible to the last bit.
    m = n + 1
    centered = np.eye(m) - 1.0 / m
    helmert = np.zeros((n, m))
    for k in range(1, n + 1):
        helmert[k - 1, :k] = 1.0
        helmert[k - 1, k] = -float(k)
        helmert[k - 1] /= math.sqrt(k * (k + 1.0))
    coords = centered @ helmert.T
    return coords / np.linalg.norm(coords, axis=1)[:, None]


def _icosahedron() -> np.ndarray:
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    base = []
    for u in (1.0, -1.0):
        for v in (phi, -phi):
            base.extend([(0.0, u, v), (u, v, 0.0), (v, 0.0, u)])
    pts = np.array(base) / math.sqrt(1.0 + phi * phi)
    return pts


def _hexagon() -> np.ndarray:
    h = math.sqrt(3.0) / 2.0
    return np.array(
        [(1.0, 0.0), (0.5, h), (-0.5, h), (-1.0, 0.0), (-0.5, -h), (0.5, -h)]
    )


def generate(kind: str, n: int | None = None) -> SphericalCode:
    """Construct a named code: simplex(n), cross_polytope(n), orthonormal(n),
    icosahedron, or hexagon."""
    if kind in ("simplex", "cross_polytope", "orthonormal"):
        if n is None or not isinstance(n, (int, np.integer)) or n < 2:
            raise ValueError(f"{kind} needs an integer dimension n >= 2")
        n = int(n)
        if kind == "simplex":
            return SphericalCode(_simplex(n))
        if kind == "cross_polytope":
            return SphericalCode(np.vstack([np.eye(n), -np.eye(n)]))
        return SphericalCode(np.eye(n))
    if kind == "icosahedron":
        if n not in (None, 3):
            raise ValueError("icosahedron lives in dimension 3")
        return SphericalCode(_icosahedron())
    if kind == "hexagon":
        if n not in (None, 2):
            raise ValueError("hexagon lives in dimension 2")
        return SphericalCode(_hexagon())
    raise ValueError(f"unknown code kind {kind!r}")


def _offdiag(code: SphericalCode) -> np.ndarray:
    iu = np.triu_indices(code.size, k=1)
    return code.gram[iu]


def separation(code: SphericalCode) -> float:
    """Largest off-diagonal inner product."""
    return float(np.max(_offdiag(code)))


def energy(code: SphericalCode, pot: Potential) -> float:
    """Sum of h over ordered pairs of distinct points."""
    vals = _offdiag(code)
    if not pot.finite_at_one and float(np.max(vals)) >= 1.0 - 1e-12:
        raise InfiniteEnergyError(
            "coincident points make the energy diverge for this kernel"
        )
    return 2.0 * float(np.sum(pot(vals)))


def moments(code: SphericalCode, i_max: int) -> np.ndarray:
    """Gegenbauer moments sum_{x,y} P_i(<x,y>) for i = 0..i_max (diagonal
    included, so the zeroth moment is M^2 and all are nonnegative)."""
    table = gegenbauer_table(code.dim, i_max, code.gram)
    return table.sum(axis=(1, 2))


@dataclass(frozen=True)
class DistanceDistribution:
    """Clustered inner products seen from one point, with counts."""

    anchor: int
    entries: tuple[tuple[float, int], ...]


def distance_distribution(
    code: SphericalCode, anchor: int = 0, cluster_tol: float = 1e-7
) -> DistanceDistribution:
    if not 0 <= anchor < code.size:
        raise ValueError(f"anchor {anchor} out of range for {code.size} points")
    row = np.delete(code.gram[anchor], anchor)
    row.sort()
    entries = []
    start = 0
    for i in range(1, row.size + 1):
        if i == row.size or row[i] - row[i - 1] > cluster_tol:
            block = row[start:i]
            entries.append((float(np.mean(block)), int(block.size)))
            start = i
    return DistanceDistribution(anchor, tuple(entries))


@dataclass(frozen=True)
class DDSolveReport:
    """Distance distribution forced by vanishing moments at the quadrature nodes."""

    values: np.ndarray
    predicted: np.ndarray
    rank: int
    unique: bool
    residual: float
    matches_quadrature: bool


def dd_system_solve(n: int, M: float, quad: QuadratureRule, vanishing) -> DDSolveReport:
    """Solve for per-point pair counts A_j at the quadrature nodes.

    Uses one equation 1 + sum_j A_j P_i(alpha_j) = 0 for each index i in
    ``vanishing`` plus the count identity 1 + sum_j A_j = M.  When the
    system determines the A_j uniquely they must equal rho_j L_m(n, s),
    which is reported as a cross-check.
    """
    vanishing = sorted(set(int(i) for i in vanishing))
    if not vanishing:
        raise ValueError("need at least one vanishing moment index")
    if vanishing[0] < 1 or vanishing[-1] > quad.m:
        raise ValueError(f"vanishing indices must lie in 1..{quad.m}, got {vanishing}")
    table = gegenbauer_table(n, vanishing[-1], quad.nodes)
    rows = [table[i] for i in vanishing]
    rows.append(np.ones(quad.nodes.size))
    A = np.vstack(rows)
    b = np.concatenate([-np.ones(len(vanishing)), [float(M) - 1.0]])
    sol, _, rank, _ = np.linalg.lstsq(A, b, rcond=None)
    residual = float(np.linalg.norm(A @ sol - b))
    predicted = quad.weights * quad.N
    unique = rank == quad.nodes.size
    matches = bool(
        unique
        and residual <= 1e-8 * max(1.0, float(M))
        and float(np.max(np.abs(sol - predicted))) <= 1e-6 * max(1.0, quad.N)
    )
    return DDSolveReport(sol, predicted, int(rank), unique, residual, matches)


@dataclass(frozen=True)
class StripVerdict:
    """A code checked against the energy strip of its own class."""

    dim: int
    size: int
    separation: float
    energy: float
    strip: EnergyStrip
    inside: bool
    attains_uub: bool
    attains_ulb: bool
    nodes_cover_products: bool
    moments: np.ndarray


def verify_strip(code: SphericalCode, pot: Potential) -> StripVerdict:
    """Compute E_h(C) and place it inside [ulb, uub] for (n, M, s(C)).

    The attainment diagnostics report whether every off-diagonal inner
    product sits on a quadrature node and include the moments up to m
    (equality in the upper bound requires the moments paired with the
    negative coefficients of f to vanish).
    """
    s = separation(code)
    e = energy(code, pot)
    es = strip(code.dim, code.size, s, pot)
    m = es.uub_cert.quad.m
    tol = 1e-9 * max(1.0, abs(es.uub), abs(es.ulb))
    inside = (es.ulb - tol <= e) and (e <= es.uub + tol)
    nodes = es.uub_cert.quad.nodes
    prods = _offdiag(code)
    dist = np.min(np.abs(prods[:, None] - nodes[None, :]), axis=1)
    return StripVerdict(
        dim=code.dim,
        size=code.size,
        separation=s,
        energy=e,
        strip=es,
        inside=inside,
        attains_uub=abs(e - es.uub) <= tol,
        attains_ulb=abs(e - es.ulb) <= tol,
        nodes_cover_products=bool(np.max(dist) <= 1e-7),
        moments=moments(code, m),
    )


def ez_separation(n: int) -> float:
    """Separation of the (2n + 1)-point construction: the unique root in
    (0, 1/n) of n (n-2)^2 X^3 - n^2 X^2 - n X + 1."""
    if not isinstance(n, (int, np.integer)) or n < 3:
        raise ValueError(f"dimension must be an integer >= 3, got {n!r}")
    c3, c2, c1, c0 = n * (n - 2) ** 2, -(n * n), -n, 1.0

    def f(x: float) -> float:
        return ((c3 * x + c2) * x + c1) * x + c0

    lo, hi = 0.0, 1.0 / n
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if math.copysign(1.0, fm) == math.copysign(1.0, flo):
            lo, flo = mid, fm
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    for _ in range(5):
        d = (3 * c3 * root + 2 * c2) * root + c1
        if d == 0.0:
            break
        root -= f(root) / d
    return root


def ez_energy_n5(pot: Potential) -> float:
    """Energy of the 11-point dimension-5 code, from its inner-product
    distribution (the separation is recomputed from its cubic; the other
    three cosines are the printed fixture values)."""
    cosines = (ez_separation(5),) + EZ_N5_COSINES
    return float(sum(mult * pot(t) for mult, t in zip(_EZ_N5_MULTIPLICITIES, cosines)))
