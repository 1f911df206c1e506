"""Sup-norm errors, moduli of continuity and the explicit error bounds.

Certified bounds use an :class:`AnalyticModulus`, i.e. a Lipschitz constant
``L`` valid on a set containing every point the operator touches, so that
``omega_1(f; delta) <= L delta``.  A :class:`SampledModulus` only sees finitely
many pairs and therefore under-estimates the modulus; it is a diagnostic and
never certifies anything.

Lipschitz constants of the built-in test functions
--------------------------------------------------
``q^k`` on ``||q|| <= r``
    ``u^k - v^k = sum_j u^j (u - v) v^(k-1-j)`` gives ``L = k r^(k-1)``; for a
    right polynomial ``sum q^k c_k`` this sums to ``sum k ||c_k|| r^(k-1)``.
Cassini series
    ``P(q) = (q - x0)^2 + y0^2`` satisfies
    ``P(u) - P(v) = (u - x0)(u - v) + (u - v)(v - x0)``, so with
    ``||q - x0|| <= rho`` and ``||P|| <= B`` the term ``P^k (a + q b)`` has
    constant ``2 k rho B^(k-1) (||a|| + M ||b||) + B^k ||b||``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .approximation import ApproximationReport, circle_points, delayed_mean_operator
from .exceptions import CertificationError, ConfigError
from .geometry import Ball, CassiniCell, CompactDomain, SampleGrid, UnitSphere, cassini_norm_bound
from .quaternion import DEFAULT_UNIT, as_qarray, qnorm
from .slice_functions import CassiniSeries, LaurentPolynomial, RightPolynomial, cassini_to_polynomial, evaluate

__all__ = [
    "AnalyticModulus",
    "SampledModulus",
    "CassiniBound",
    "sup_error",
    "modulus_estimate",
    "sampled_modulus",
    "circle_modulus",
    "dvp_bound",
    "cassini_bound",
    "best_approx_estimate",
    "verify_bound",
    "norm_bound",
    "lipschitz_constant",
]


@dataclass(frozen=True)
class AnalyticModulus:
    """``omega_p(f; delta) <= L delta`` (an upper bound)."""

    L: float
    order: int = 1

    def __post_init__(self):
        if not self.L >= 0:
            raise ConfigError("a Lipschitz constant must be nonnegative")


@dataclass(frozen=True)
class SampledModulus:
    """Largest ``||f(u) - f(v)||`` over sampled pairs (a lower bound)."""

    grid: SampleGrid
    pair_budget: int = 200_000
    seed: int = 0


def _points(grid) -> np.ndarray:
    return as_qarray(getattr(grid, "points", grid)).reshape(-1, 4)


def sup_error(f, p, grid) -> float:
    """``max ||f(q) - p(q)||`` over the grid."""
    pts = _points(grid)
    if len(pts) == 0:
        return 0.0
    return float(np.max(qnorm(evaluate(f, pts) - evaluate(p, pts))))


def sampled_modulus(f, grid, delta: float, pair_budget: int = 200_000, seed: int = 0) -> float:
    """``max ||f(u) - f(v)||`` over grid pairs with ``||u - v|| <= delta``.

    When more than ``pair_budget`` pairs qualify, a seeded random subset is used.
    """
    pts = _points(grid)
    pairs = cKDTree(pts).query_pairs(delta, output_type="ndarray")
    if len(pairs) == 0:
        return 0.0
    if len(pairs) > pair_budget:
        keep = np.random.default_rng(seed).choice(len(pairs), pair_budget, replace=False)
        pairs = pairs[np.sort(keep)]
    vals = evaluate(f, pts)
    return float(np.max(qnorm(vals[pairs[:, 0]] - vals[pairs[:, 1]])))


def modulus_estimate(f, delta: float, modulus) -> float:
    """``L delta`` for an analytic modulus, the sampled value for a sampled one."""
    if not delta > 0:
        raise ValueError("delta must be positive")
    if isinstance(modulus, AnalyticModulus):
        return modulus.L * delta
    if isinstance(modulus, SampledModulus):
        return sampled_modulus(f, modulus.grid, delta, modulus.pair_budget, modulus.seed)
    raise TypeError(f"unknown modulus {modulus!r}")


def circle_modulus(f, grid, delta: float, p: int = 1, steps: int = 8, unit=DEFAULT_UNIT) -> float:
    """Sampled ``p``-th order modulus along slice circles.

    ``max ||sum_k (-1)^(p-k) C(p, k) f(q e^{I_q k h})||`` over grid points ``q``
    and ``h`` in ``(0, delta]`` (``steps`` values).  Diagnostic only.
    """
    if p < 1:
        raise ValueError("modulus order must be at least 1")
    pts = _points(grid)
    hs = delta * np.arange(1, steps + 1) / steps
    worst = 0.0
    for h in hs:
        ang = h * np.arange(p + 1)
        vals = evaluate(f, circle_points(pts, ang, unit))
        w = np.array([(-1) ** (p - k) * math.comb(p, k) for k in range(p + 1)], dtype=float)
        diff = np.einsum("nmk,m->nk", vals, w)
        worst = max(worst, float(np.max(qnorm(diff))))
    return worst


def _certifying_omega(modulus, n: int, f=None, diagnostic: bool = False) -> float:
    if n < 1:
        raise ValueError("n must be at least 1")
    delta = 1.0 / math.sqrt(n)
    if isinstance(modulus, AnalyticModulus):
        if modulus.order != 1:
            raise CertificationError("only first-order moduli certify these bounds")
        return modulus.L * delta
    if not diagnostic:
        raise CertificationError("a sampled modulus gives a diagnostic bound only; pass diagnostic=True")
    return modulus_estimate(f, delta, modulus)


def dvp_bound(R: float, modulus, n: int, f=None, diagnostic: bool = False) -> float:
    """``3 (R + 1) omega_1(f; 1/sqrt(n))`` for the ball ``||q|| <= R``."""
    if R < 0:
        raise ValueError("R must be nonnegative")
    return 3.0 * (R + 1.0) * _certifying_omega(modulus, n, f, diagnostic)


@dataclass(frozen=True)
class CassiniBound:
    stated: float
    proof: float
    M: float


def cassini_bound(x0: float, y0: float, R: float, modulus, n: int, f=None, diagnostic: bool = False) -> CassiniBound:
    """Both forms of the Cassini-cell bound.

    ``stated = 3 (R + 1) omega`` and ``proof = 3 (M + 1) omega`` with
    ``M = sqrt(R^2 + 2|x0| sqrt(R^2 + y0^2) + x0^2 + y0^2)``, the largest norm
    on the cell.  Only the proof form is used for certification.
    """
    omega = _certifying_omega(modulus, n, f, diagnostic)
    M = cassini_norm_bound(x0, y0, R)
    return CassiniBound(3.0 * (R + 1.0) * omega, 3.0 * (M + 1.0) * omega, M)


def norm_bound(d: CompactDomain) -> float:
    """``max ||q||`` over the domain (for starlike completions, over the bounding box)."""
    if isinstance(d, Ball):
        return abs(d.x0) + d.R
    if isinstance(d, CassiniCell):
        return d.M
    if isinstance(d, UnitSphere):
        return 1.0
    xmin, xmax, ymax = d.bbox()
    return math.hypot(max(abs(xmin), abs(xmax)), ymax)


def lipschitz_constant(f, radius: float) -> float:
    """A Lipschitz constant of ``f`` on the ball ``||q|| <= radius``.

    Right polynomials and Cassini series only; other functions have no
    analytic modulus here.
    """
    if isinstance(f, CassiniSeries):
        rho = radius + abs(f.x0)
        return f.lipschitz(rho, rho * rho + f.y0 ** 2, radius)
    if isinstance(f, RightPolynomial):
        return f.lipschitz_on_ball(radius)
    raise CertificationError(f"no analytic Lipschitz constant for {type(f).__name__}")


def best_approx_estimate(f, n: int, grid) -> float:
    """Upper estimate of the best approximation ``E_n(f)`` on the grid.

    Two degree-``<= n`` candidates are measured and the smaller error is
    returned: delayed means of index ``m = (n + 1) // 2`` (degree ``2m - 1``)
    and, for coefficient-based ``f``, plain truncation at degree ``n``.  Any
    polynomial of degree ``<= n`` gives an upper bound, so this is an
    estimate, not the infimum.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    pts = _points(grid)
    if len(pts) == 0:
        raise ValueError("the grid is empty")
    poly = cassini_to_polynomial(f) if isinstance(f, CassiniSeries) else f
    if n == 0:
        const = evaluate(f, np.zeros((1, 4)))[0]
        candidates = [RightPolynomial([const])]
    else:
        candidates = []
        m = (n + 1) // 2
        if isinstance(poly, RightPolynomial):
            candidates.append(delayed_mean_operator(poly, m))
            candidates.append(poly.truncate(n))
        else:
            vals = delayed_mean_operator(f, m, q=pts)
            candidates.append(lambda q, vals=vals: vals)
    errs = []
    for c in candidates:
        approx = c(pts) if callable(c) and not hasattr(c, "_eval") else evaluate(c, pts)
        errs.append(float(np.max(qnorm(evaluate(f, pts) - approx))))
    return min(errs)


def verify_bound(
    f,
    approx,
    domain: CompactDomain,
    modulus,
    n: int,
    grid=None,
    samples: int = 4000,
    seed: int = 0,
    operator: str = "dvp",
    function: str = "f",
    kernel: str | None = None,
) -> ApproximationReport:
    """Measure ``sup ||f - approx||`` on the domain and compare with the bound.

    Balls ``||q - x0|| <= R`` use ``3 (R' + 1) omega`` with ``R' = |x0| + R``
    (the smallest centered ball containing them); Cassini cells use the
    proof form, with the stated form kept in ``extra``.  Other domains get no
    bound.  ``modulus`` must be analytic.
    """
    from .geometry import sample

    t0 = time.perf_counter()
    if grid is None:
        grid = sample(domain, samples, seed=seed)
    err = sup_error(f, approx, grid)
    extra = {}
    if isinstance(domain, CassiniCell):
        b = cassini_bound(domain.x0, domain.y0, domain.R, modulus, n)
        bound = b.proof
        extra = {"stated_bound": b.stated, "M": b.M, "flagged": domain.flagged}
    elif isinstance(domain, Ball):
        bound = dvp_bound(abs(domain.x0) + domain.R, modulus, n)
    else:
        bound = math.nan
    if isinstance(approx, LaurentPolynomial):
        extra["laurent_degrees"] = approx.degrees
    return ApproximationReport(
        operator=operator,
        n=n,
        domain=domain.descriptor,
        function=function,
        kernel=kernel or f"{operator}({n})",
        sup_error=err,
        bound=bound,
        samples=len(_points(grid)),
        seconds=time.perf_counter() - t0,
        extra=extra,
    )
