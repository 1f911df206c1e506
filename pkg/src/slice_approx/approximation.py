"""Convolution operators on slice circles, in quadrature and closed form.

For ``q = x + I_q y`` the operators average ``f`` over the circle
``{q e^{I_q u} : u in [-pi, pi]}`` against a real kernel::

    (1/2pi) * integral f(q e^{I_q u}) K(u) du

Because ``(q e^{I_q u})^l = q^l e^{I_q l u}``, the value at ``q`` of the
convolution of ``sum q^l c_l`` is ``sum q^l rho_l c_l``: the closed form only
rescales coefficients.  Both routes are public; the quadrature route doubles
as an independent check of the closed one.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError
from .kernels import DVP, FejerDelayed, GenJackson, Kernel, default_nodes, multipliers, quadrature_nodes
from .quaternion import DEFAULT_UNIT, Quaternion, as_qarray, qmul, qnorm, slice_decompose_array
from .slice_functions import (
    CassiniSeries,
    LaurentPolynomial,
    RightPolynomial,
    SliceFunction,
    cassini_to_polynomial,
    evaluate,
)

__all__ = [
    "ApproximationReport",
    "circle_points",
    "convolve_pointwise",
    "apply_multipliers",
    "dvp_operator_closed",
    "cassini_operator_closed",
    "generalized_jackson_multipliers",
    "generalized_jackson_closed",
    "generalized_jackson_operator",
    "delayed_mean_operator",
    "laurent_approx_on_sphere",
    "timed",
]


@dataclass
class ApproximationReport:
    """One measured approximation: error, certified bound and their ratio."""

    operator: str
    n: int
    domain: str
    function: str
    kernel: str
    sup_error: float
    bound: float = math.nan
    samples: int = 0
    seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def ratio(self) -> float:
        if self.bound > 0:
            return self.sup_error / self.bound
        return math.nan

    @property
    def certified(self) -> bool:
        return math.isfinite(self.bound)

    @property
    def passed(self) -> bool:
        """``sup_error <= bound``; reports without a bound never fail."""
        return not self.certified or self.sup_error <= self.bound

    @property
    def status(self) -> str:
        if not self.certified:
            return "N/A"
        return "PASS" if self.passed else "FAIL"


def timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    out = fn(*args, **kwargs)
    return out, time.perf_counter() - t0


def circle_points(q, u, unit=DEFAULT_UNIT) -> np.ndarray:
    """``q e^{I_q u}`` for points ``q`` (shape ``(N, 4)``) and angles ``u`` (``(m,)``).

    Returns shape ``(N, m, 4)``.  Real points rotate in the plane of ``unit``.
    """
    q = as_qarray(q).reshape(-1, 4)
    x, y, units = slice_decompose_array(q, default_unit=unit)
    r = np.hypot(x, y)
    t = np.arctan2(y, x)
    ang = t[:, None] + np.asarray(u, dtype=float)[None, :]
    out = units[:, None, :] * (r[:, None] * np.sin(ang))[..., None]
    out[..., 0] = r[:, None] * np.cos(ang)
    return out


def _circle_average(f, q, kernel: Kernel, m: int | None, unit, speeds=(1,)):
    q = as_qarray(q)
    flat = q.reshape(-1, 4)
    if m is None:
        m = default_nodes(kernel.degree * max(speeds) + 64)
    u = quadrature_nodes(m)
    w = kernel(u)
    out = []
    for s in speeds:
        pts = circle_points(flat, s * u, unit)
        vals = evaluate(f, pts)
        out.append(np.einsum("nmk,m->nk", vals, w) / m)
    return out, flat, q.shape


def convolve_pointwise(f, q, kernel: Kernel, m: int | None = None, unit=DEFAULT_UNIT):
    """``(1/2pi) * integral f(q e^{I_q u}) K(u) du`` by the trapezoid rule.

    ``q`` may be a :class:`Quaternion` or an array of points.  At ``q = 0``
    the circle degenerates and the value is exactly ``f(0)``.  Real ``q``
    rotates in the plane of ``unit`` (default ``i``).
    """
    (vals,), flat, shape = _circle_average(f, q, kernel, m, unit)
    zero = np.all(flat == 0.0, axis=1)
    if np.any(zero):
        vals[zero] = evaluate(f, flat[zero])
    out = vals.reshape(shape)
    return Quaternion.from_array(out) if isinstance(q, Quaternion) else out


def apply_multipliers(p: RightPolynomial, rho) -> RightPolynomial:
    """Scale the coefficient of ``q^l`` by ``rho[l]`` and drop powers beyond ``rho``."""
    rho = np.asarray(rho, dtype=float)
    n = min(len(p.coeffs), len(rho))
    out = p.coeffs[:n] * rho[:n, None]
    return RightPolynomial(out if n else np.zeros((1, 4)))


def dvp_operator_closed(f: RightPolynomial, n: int) -> RightPolynomial:
    """``P_n(q) = sum_{l<=n} q^l c_l (n!)^2 / ((n-l)! (n+l)!)``."""
    return apply_multipliers(f, multipliers(DVP(n)))


def cassini_operator_closed(s: CassiniSeries, n: int, kernel: Kernel | None = None) -> RightPolynomial:
    """Closed form of the circle convolution of a Cassini series.

    The series is expanded to ``sum_p q^p a_p`` first; the kernel multiplier
    then acts on the total power ``p``, including the extra ``q`` carried by
    the odd coefficients.  Powers above the kernel degree vanish.
    """
    kernel = DVP(n) if kernel is None else kernel
    return apply_multipliers(cassini_to_polynomial(s), multipliers(kernel))


def generalized_jackson_multipliers(n: int, p: int, length: int) -> np.ndarray:
    """Multipliers ``-sum_{k=1}^{p+1} (-1)^k C(p+1, k) rho_{k l}`` for ``l < length``."""
    k = GenJackson.for_order(n, p)
    rho = multipliers(k)

    def r(j):
        return rho[j] if j < len(rho) else 0.0

    out = np.zeros(length)
    for l in range(length):
        out[l] = -sum((-1) ** kk * math.comb(p + 1, kk) * r(kk * l) for kk in range(1, p + 2))
    return out


def generalized_jackson_closed(f: RightPolynomial, n: int, p: int) -> RightPolynomial:
    """Closed form of :func:`generalized_jackson_operator` on a right polynomial."""
    k = GenJackson.for_order(n, p)
    return apply_multipliers(f, generalized_jackson_multipliers(n, p, min(len(f), k.degree + 1)))


def generalized_jackson_operator(f, q, n: int, p: int, m: int | None = None, unit=DEFAULT_UNIT):
    """Order-``p`` Jackson-type operator evaluated at ``q``.

    ``-sum_{k=1}^{p+1} (-1)^k C(p+1, k) (1/2pi) integral K_{n,r}(u) f(q e^{I_q k u}) du``
    with ``r = ceil((p+2)/2)``.  The alternating sign makes the weights sum to
    one, so constants are reproduced.
    """
    kernel = GenJackson.for_order(n, p)
    speeds = tuple(range(1, p + 2))
    vals, flat, shape = _circle_average(f, q, kernel, m, unit, speeds=speeds)
    out = sum(-((-1) ** k) * math.comb(p + 1, k) * v for k, v in zip(speeds, vals))
    zero = np.all(flat == 0.0, axis=1)
    if np.any(zero):
        out[zero] = evaluate(f, flat[zero])
    out = out.reshape(shape)
    return Quaternion.from_array(out) if isinstance(q, Quaternion) else out


def delayed_mean_operator(f, n: int, q=None, m: int | None = None, unit=DEFAULT_UNIT):
    """Delayed Fejer means ``2 L_{2n}(f) - L_n(f)``.

    Without ``q`` and with a :class:`RightPolynomial` ``f`` the closed form is
    returned (a right polynomial of degree ``<= 2n - 1``); with ``q`` the
    operator is evaluated by quadrature.  Polynomials of degree ``<= n`` are
    reproduced exactly.
    """
    kernel = FejerDelayed(n)
    if q is None:
        if isinstance(f, CassiniSeries):
            f = cassini_to_polynomial(f)
        if not isinstance(f, RightPolynomial):
            raise TypeError("closed-form delayed means need a RightPolynomial; pass q for quadrature")
        return apply_multipliers(f, multipliers(kernel))
    return convolve_pointwise(f, q, kernel, m=m, unit=unit)


def laurent_approx_on_sphere(
    f: SliceFunction,
    n: int,
    kernel: Kernel | None = None,
    m: int | None = None,
    unit=DEFAULT_UNIT,
) -> LaurentPolynomial:
    """Laurent polynomial approximating a slice function on the unit sphere.

    On the slice ``C_unit`` write ``f(cos t + unit sin t) = alpha(t) + unit beta(t)``
    with ``alpha`` even and ``beta`` odd.  Their Fourier coefficients
    ``alpha = sum a_k cos(k t)``, ``beta = sum b_k sin(k t)`` are damped by the
    kernel multipliers (delayed means by default) and rewritten with
    ``cos(k t) = (q^k + q^-k)/2`` and ``I sin(k t) = (q^k - q^-k)/2``.  The
    result is a slice function, so it approximates ``f`` on every slice.
    """
    kernel = FejerDelayed(n) if kernel is None else kernel
    rho = np.asarray(multipliers(kernel))
    deg = len(rho) - 1
    if m is None:
        m = max(1024, 16 * (deg + 1))
    t = quadrature_nodes(m)
    x, y = np.cos(t), np.sin(t)
    try:
        a_t, b_t = f.alpha_beta(x, y, unit)
    except DomainError as exc:
        raise DomainError(f"cannot sample the function on the unit sphere: {exc}") from exc
    ks = np.arange(deg + 1)
    cos_kt = np.cos(np.outer(ks, t))
    sin_kt = np.sin(np.outer(ks, t))
    a = 2.0 * cos_kt @ a_t / m
    a[0] *= 0.5
    b = 2.0 * sin_kt @ b_t / m
    a *= rho[:, None]
    b *= rho[:, None]
    positive = np.zeros((deg + 1, 4))
    negative = np.zeros((deg, 4))
    positive[0] = a[0]
    positive[1:] = 0.5 * (a[1:] + b[1:])
    negative[:] = 0.5 * (a[1:] - b[1:])
    return LaurentPolynomial(positive, negative)
