"""Slice functions and their concrete representations.

A continuous slice function has the form ``f(x + I y) = alpha(x, y) + I beta(x, y)``
with ``alpha`` even and ``beta`` odd in ``y``.  The classes here are the
representations used throughout the package:

* :class:`RightPolynomial` / :class:`PowerSeries`: ``sum_k q^k c_k``
  (coefficients on the right of the powers);
* :class:`LaurentPolynomial`: the same with negative powers;
* :class:`CassiniSeries`: ``sum_k [(q - x0)^2 + y0^2]^k (c_{2k} + q c_{2k+1})``;
* :class:`ClosureSliceFunction`: user-supplied ``(x, y) -> (alpha, beta)``;
* :class:`SphereSliceFunction`: ``alpha(theta), beta(theta)`` on the unit sphere.

Every representation evaluates on arrays shaped ``(..., 4)``; calling with a
:class:`~slice_approx.quaternion.Quaternion` returns a ``Quaternion``.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np
from numpy.polynomial import polynomial as npoly

from .exceptions import DomainError
from .quaternion import (
    DEFAULT_UNIT,
    Quaternion,
    as_qarray,
    qconj,
    qinv,
    qmul,
    qnorm,
    qreal,
    slice_compose,
    slice_decompose_array,
)

__all__ = [
    "SliceFunction",
    "RightPolynomial",
    "PowerSeries",
    "LaurentPolynomial",
    "CassiniSeries",
    "ClosureSliceFunction",
    "SphereSliceFunction",
    "IntrinsicCheck",
    "evaluate",
    "representation_formula",
    "extend_from_slice",
    "is_intrinsic",
    "even_odd_defect",
    "cassini_to_polynomial",
    "to_json",
    "from_json",
    "dump",
    "load",
]


def _coeff_array(coeffs) -> np.ndarray:
    if isinstance(coeffs, np.ndarray) and coeffs.ndim == 2 and coeffs.shape[1] == 4:
        arr = coeffs.astype(float, copy=True)
    else:
        arr = np.array([as_qarray(c) for c in coeffs], dtype=float).reshape(-1, 4)
    arr.setflags(write=False)
    return arr


def _as_quaternion_values(v, shape) -> np.ndarray:
    """Promote real-valued output of a user closure to quaternion arrays."""
    v = np.asarray(v, dtype=float)
    if v.shape == tuple(shape) + (4,):
        return v
    if v.shape[-1:] == (4,):
        return np.broadcast_to(v, tuple(shape) + (4,))
    return qreal(np.broadcast_to(v, shape))


class SliceFunction:
    """Base class.  Subclasses implement :meth:`_eval` on ``(..., 4)`` arrays."""

    def _eval(self, q: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, q):
        arr = as_qarray(q)
        out = self._eval(arr)
        if isinstance(q, (Quaternion, int, float)):
            return Quaternion.from_array(out)
        return out

    def alpha_beta(self, x, y, unit=DEFAULT_UNIT):
        """``(alpha, beta)`` recovered from the slice ``C_unit``."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        u = np.broadcast_to(as_qarray(unit), x.shape + (4,))
        fp = self._eval(slice_compose(x, y, u))
        fm = self._eval(slice_compose(x, -y, u))
        return 0.5 * (fp + fm), 0.5 * qmul(u, fm - fp)


def evaluate(f, q) -> np.ndarray:
    """Evaluate a slice function or a bare array callable on ``(..., 4)`` arrays."""
    q = as_qarray(q)
    if isinstance(f, SliceFunction):
        return f._eval(q)
    return np.asarray(f(q), dtype=float)


def _right_horner(coeffs: np.ndarray, q: np.ndarray) -> np.ndarray:
    # acc <- q * acc + c_k keeps every coefficient to the right of its power
    acc = np.broadcast_to(coeffs[-1], q.shape).copy()
    for c in coeffs[-2::-1]:
        acc = qmul(q, acc)
        acc += c
    return acc


class RightPolynomial(SliceFunction):
    """``p(q) = sum_{k=0}^{N} q^k c_k`` with quaternion coefficients."""

    def __init__(self, coeffs):
        self.coeffs = _coeff_array(coeffs)
        if len(self.coeffs) == 0:
            self.coeffs = _coeff_array(np.zeros((1, 4)))

    @classmethod
    def zero(cls) -> "RightPolynomial":
        return cls(np.zeros((1, 4)))

    @classmethod
    def monomial(cls, k: int, c=1.0) -> "RightPolynomial":
        coeffs = np.zeros((k + 1, 4))
        coeffs[k] = as_qarray(c)
        return cls(coeffs)

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(np.any(self.coeffs != 0.0, axis=1))
        return int(nz[-1]) if len(nz) else 0

    def __len__(self):
        return len(self.coeffs)

    def coefficient(self, k: int) -> Quaternion:
        if 0 <= k < len(self.coeffs):
            return Quaternion.from_array(self.coeffs[k])
        return Quaternion()

    def _eval(self, q):
        return _right_horner(self.coeffs, q)

    def _with(self, coeffs):
        return RightPolynomial(coeffs)

    def truncate(self, n: int) -> "RightPolynomial":
        return self._with(self.coeffs[: n + 1])

    def __add__(self, other):
        if not isinstance(other, RightPolynomial):
            return NotImplemented
        m = max(len(self), len(other))
        a = np.zeros((m, 4))
        a[: len(self)] += self.coeffs
        a[: len(other)] += other.coeffs
        return RightPolynomial(a)

    def __sub__(self, other):
        return self + other.right_mul(-1.0)

    def right_mul(self, lam) -> "RightPolynomial":
        """``p(q) * lam`` for a quaternion or real ``lam``."""
        return self._with(qmul(self.coeffs, as_qarray(lam)))

    def shift(self, a: float) -> "RightPolynomial":
        """The polynomial ``q -> p(q + a)`` for real ``a``."""
        n = len(self.coeffs)
        out = np.zeros((n, 4))
        for k in range(n):
            for j in range(k + 1):
                out[j] += math.comb(k, j) * a ** (k - j) * self.coeffs[k]
        return RightPolynomial(out)

    def lipschitz_on_ball(self, radius: float) -> float:
        """``sum_k k ||c_k|| r^(k-1)``, a Lipschitz constant on ``||q|| <= r``.

        Uses ``u^k - v^k = sum_i u^i (u - v) v^(k-1-i)`` and multiplicativity of
        the norm.
        """
        norms = qnorm(self.coeffs)
        return float(sum(k * norms[k] * radius ** (k - 1) for k in range(1, len(norms))))

    def __repr__(self):
        return f"{type(self).__name__}(degree={self.degree})"


class PowerSeries(RightPolynomial):
    """A truncated power series with a declared radius of validity."""

    def __init__(self, coeffs, radius: float = math.inf):
        super().__init__(coeffs)
        if not radius > 0:
            raise ValueError("radius must be positive")
        self.radius = float(radius)

    def _with(self, coeffs):
        return PowerSeries(coeffs, self.radius)

    def _eval(self, q):
        if math.isfinite(self.radius) and np.any(qnorm(q) > self.radius * (1.0 + 1e-12)):
            raise DomainError(f"power series evaluated outside its radius {self.radius}")
        return super()._eval(q)


class LaurentPolynomial(SliceFunction):
    """``sum_{k=-M}^{N} q^k a_k``.

    ``positive`` holds ``a_0 .. a_N``; ``negative`` holds ``a_{-1} .. a_{-M}``
    (ordered by increasing ``|k|``).
    """

    def __init__(self, positive=(), negative=()):
        self.positive = _coeff_array(positive) if len(positive) else _coeff_array(np.zeros((1, 4)))
        self.negative = _coeff_array(negative) if len(negative) else np.zeros((0, 4))

    @property
    def degrees(self) -> tuple[int, int]:
        """``(M, N)``: highest negative and positive powers present."""
        def top(a):
            nz = np.flatnonzero(np.any(a != 0.0, axis=1))
            return int(nz[-1]) if len(nz) else -1
        return top(self.negative) + 1, max(top(self.positive), 0)

    def _eval(self, q):
        out = _right_horner(self.positive, q)
        if len(self.negative):
            qi = qinv(q)
            out = out + qmul(qi, _right_horner(self.negative, qi))
        return out

    def __repr__(self):
        m, n = self.degrees
        return f"LaurentPolynomial(M={m}, N={n})"


class CassiniSeries(SliceFunction):
    """``sum_{k=k0}^{K} [(q - x0)^2 + y0^2]^k (c_{2k} + q c_{2k+1})``.

    ``pairs[i]`` holds ``(c_{2k}, c_{2k+1})`` for ``k = k0 + i``.  The default
    ``k0 = 1`` follows the usual statement of the expansion; ``k0 = 0`` adds a
    term ``c_0 + q c_1``.
    """

    def __init__(self, x0: float, y0: float, pairs, k0: int = 1):
        if y0 < 0:
            raise ValueError("y0 must be nonnegative")
        self.x0 = float(x0)
        self.y0 = float(y0)
        arr = np.asarray([[as_qarray(a), as_qarray(b)] for a, b in pairs], dtype=float).reshape(-1, 2, 4)
        arr.setflags(write=False)
        self.pairs = arr
        self.k0 = int(k0)

    @property
    def K(self) -> int:
        return self.k0 + len(self.pairs) - 1

    def _center_poly(self, q):
        d = q.copy()
        d[..., 0] -= self.x0
        p = qmul(d, d)
        p[..., 0] += self.y0 ** 2
        return p

    def _eval(self, q):
        if len(self.pairs) == 0:
            return np.zeros_like(q)
        p = self._center_poly(q)
        acc = np.zeros_like(q)
        for a, b in self.pairs[::-1]:
            acc = qmul(p, acc) + a + qmul(q, np.broadcast_to(b, q.shape))
        for _ in range(self.k0):
            acc = qmul(p, acc)
        return acc

    def lipschitz(self, radius: float, power_bound: float, norm_bound: float) -> float:
        """Lipschitz constant from bounds on a set ``S``.

        ``radius`` bounds ``||q - x0||``, ``power_bound`` bounds
        ``||(q - x0)^2 + y0^2||`` and ``norm_bound`` bounds ``||q||`` on ``S``.
        Each term contributes ``2 k rho P^(k-1) (||a|| + M ||b||) + P^k ||b||``.
        """
        total = 0.0
        for i, (a, b) in enumerate(self.pairs):
            k = self.k0 + i
            na, nb = float(np.linalg.norm(a)), float(np.linalg.norm(b))
            if k > 0:
                total += 2 * k * radius * power_bound ** (k - 1) * (na + norm_bound * nb)
            total += power_bound ** k * nb
        return total

    def __repr__(self):
        return f"CassiniSeries(x0={self.x0}, y0={self.y0}, K={self.K})"


class ClosureSliceFunction(SliceFunction):
    """``f(x + I y) = alpha(x, y) + I beta(x, y)`` from a user callable.

    ``alpha_beta(x, y)`` receives arrays and returns ``(alpha, beta)``, each
    real-valued (same shape as ``x``) or quaternion-valued (trailing axis 4).
    Contract: ``alpha`` even and ``beta`` odd in ``y``, so ``beta(x, 0) = 0``.
    """

    def __init__(self, alpha_beta: Callable, name: str = "closure"):
        self._ab = alpha_beta
        self.name = name

    def _eval(self, q):
        x, y, units = slice_decompose_array(q)
        a, b = self._ab(x, y)
        a = _as_quaternion_values(a, x.shape)
        b = _as_quaternion_values(b, x.shape)
        return a + qmul(units, b)

    def __repr__(self):
        return f"ClosureSliceFunction({self.name})"


class SphereSliceFunction(SliceFunction):
    """A slice function on the unit sphere ``||q|| = 1``.

    With ``q = cos(theta) + I sin(theta)``, ``theta`` in ``[0, pi]``, the value
    is ``alpha(theta) + I beta(theta)``; ``alpha`` even and ``beta`` odd.
    """

    def __init__(self, alpha: Callable, beta: Callable, name: str = "sphere", tol: float = 1e-12):
        self.alpha = alpha
        self.beta = beta
        self.name = name
        self.tol = tol

    @classmethod
    def from_trig(cls, alpha_cos, beta_sin, name: str = "sphere-trig") -> "SphereSliceFunction":
        """``alpha = sum a_k cos(k theta)``, ``beta = sum b_k sin(k theta)``."""
        a = _coeff_array(alpha_cos) if len(alpha_cos) else np.zeros((0, 4))
        b = _coeff_array(beta_sin) if len(beta_sin) else np.zeros((0, 4))

        def alpha(t):
            t = np.asarray(t, dtype=float)
            return sum((np.cos(k * t)[..., None] * a[k] for k in range(len(a))), np.zeros(t.shape + (4,)))

        def beta(t):
            t = np.asarray(t, dtype=float)
            return sum((np.sin(k * t)[..., None] * b[k] for k in range(len(b))), np.zeros(t.shape + (4,)))

        f = cls(alpha, beta, name=name)
        f.trig = (a, b)
        return f

    def _eval(self, q):
        if np.any(np.abs(qnorm(q) - 1.0) > self.tol):
            raise DomainError(f"{self.name} is defined on the unit sphere only")
        x, y, units = slice_decompose_array(q)
        theta = np.arctan2(y, x)
        a = _as_quaternion_values(self.alpha(theta), x.shape)
        b = _as_quaternion_values(self.beta(theta), x.shape)
        return a + qmul(units, b)

    def __repr__(self):
        return f"SphereSliceFunction({self.name})"


# operations ---------------------------------------------------------------


def representation_formula(f_plus, f_minus, J, I):
    """``1/2 [f_plus + f_minus] + I * 1/2 [J (f_minus - f_plus)]``.

    ``f_plus = f(x + J y)`` and ``f_minus = f(x - J y)``; the result is
    ``f(x + I y)`` for any slice function ``f``.  Accepts quaternions or arrays.
    """
    scalar = all(isinstance(v, Quaternion) for v in (f_plus, f_minus, J, I))
    fp, fm, j, i = (as_qarray(v) for v in (f_plus, f_minus, J, I))
    out = 0.5 * (fp + fm) + qmul(i, 0.5 * qmul(j, fm - fp))
    return Quaternion.from_array(out) if scalar else out


def extend_from_slice(g: Callable, J=DEFAULT_UNIT, name: str = "extension") -> ClosureSliceFunction:
    """Extend a function on the plane ``C_J`` to an axially symmetric set.

    ``g`` receives complex arrays ``z = x + 1j*y`` standing for ``x + J y`` and
    returns either complex values (read as ``a + b J``) or quaternion arrays.
    """
    j = as_qarray(J)

    def lift(z):
        v = g(z)
        if np.iscomplexobj(v) or np.ndim(v) == np.ndim(z):
            v = np.asarray(v, dtype=complex)
            return qreal(v.real) + v.imag[..., None] * j
        return np.asarray(v, dtype=float)

    def alpha_beta(x, y):
        z = x + 1j * y
        gp, gm = lift(z), lift(np.conj(z))
        return 0.5 * (gp + gm), 0.5 * qmul(np.broadcast_to(j, gp.shape), gm - gp)

    return ClosureSliceFunction(alpha_beta, name=name)


class IntrinsicCheck(NamedTuple):
    ok: bool
    defect: float


def is_intrinsic(f, samples, tol: float = 1e-12) -> IntrinsicCheck:
    """Sampled test of ``f(conj q) == conj(f(q))``; reports the worst defect."""
    q = as_qarray(getattr(samples, "points", samples))
    defect = float(np.max(qnorm(evaluate(f, qconj(q)) - qconj(evaluate(f, q)))))
    return IntrinsicCheck(defect <= tol, defect)


def even_odd_defect(f, samples, unit=DEFAULT_UNIT) -> float:
    """Worst violation of ``alpha(x,-y) = alpha(x,y)``, ``beta(x,-y) = -beta(x,y)``."""
    q = as_qarray(getattr(samples, "points", samples))
    x, y, _ = slice_decompose_array(q)
    a1, b1 = f.alpha_beta(x, y, unit)
    a2, b2 = f.alpha_beta(x, -y, unit)
    return float(max(np.max(qnorm(a1 - a2)), np.max(qnorm(b1 + b2))))


def cassini_to_polynomial(s: CassiniSeries) -> RightPolynomial:
    """Expand a Cassini series into a right polynomial of degree ``2K + 1``.

    ``(q - x0)^2 + y0^2`` has real coefficients, so its powers commute with
    everything and the coefficient of ``q^p`` in ``P^k (a + q b)`` is
    ``P^k[p] a + P^k[p-1] b``.
    """
    if len(s.pairs) == 0:
        return RightPolynomial.zero()
    base = np.array([s.x0 ** 2 + s.y0 ** 2, -2.0 * s.x0, 1.0])
    out = np.zeros((2 * s.K + 2, 4))
    for i, (a, b) in enumerate(s.pairs):
        pk = npoly.polypow(base, s.k0 + i)
        out[: len(pk)] += pk[:, None] * a
        out[1 : len(pk) + 1] += pk[:, None] * b
    return RightPolynomial(out)


# serialization ------------------------------------------------------------


def _qlist(a) -> list:
    return [[float(v) for v in row] for row in np.asarray(a).reshape(-1, 4)]


def to_json(f: SliceFunction) -> str:
    """Serialize coefficient-based representations as JSON text.

    Floats are written with ``repr`` precision, so a round trip is exact.
    """
    if isinstance(f, PowerSeries):
        d = {"kind": "power_series", "coefficients": _qlist(f.coeffs), "radius": f.radius}
        if not math.isfinite(f.radius):
            d["radius"] = None
    elif isinstance(f, RightPolynomial):
        d = {"kind": "polynomial", "coefficients": _qlist(f.coeffs)}
    elif isinstance(f, LaurentPolynomial):
        d = {"kind": "laurent", "positive": _qlist(f.positive), "negative": _qlist(f.negative)}
    elif isinstance(f, CassiniSeries):
        d = {
            "kind": "cassini",
            "x0": f.x0,
            "y0": f.y0,
            "k0": f.k0,
            "pairs": [[_qlist(a)[0], _qlist(b)[0]] for a, b in f.pairs],
        }
    elif isinstance(f, SphereSliceFunction) and hasattr(f, "trig"):
        d = {"kind": "sphere_trig", "alpha_cos": _qlist(f.trig[0]), "beta_sin": _qlist(f.trig[1])}
    else:
        raise TypeError(f"{type(f).__name__} has no coefficient serialization")
    return json.dumps(d)


def from_json(text: str) -> SliceFunction:
    d = json.loads(text)
    kind = d.get("kind")
    if kind == "polynomial":
        return RightPolynomial(d["coefficients"])
    if kind == "power_series":
        r = d.get("radius")
        return PowerSeries(d["coefficients"], math.inf if r is None else r)
    if kind == "laurent":
        return LaurentPolynomial(d.get("positive", []), d.get("negative", []))
    if kind == "cassini":
        pairs = [(a, b) for a, b in d["pairs"]]
        return CassiniSeries(d["x0"], d["y0"], pairs, k0=d.get("k0", 1))
    if kind == "sphere_trig":
        return SphereSliceFunction.from_trig(d.get("alpha_cos", []), d.get("beta_sin", []))
    raise ValueError(f"unknown slice function kind {kind!r}")


def dump(f: SliceFunction, path) -> None:
    Path(path).write_text(to_json(f) + "\n")


def load(path) -> SliceFunction:
    return from_json(Path(path).read_text())
