"""Trigonometric kernels and their Fourier multipliers.

All kernels are normalized so that ``(1/2pi) * integral_{-pi}^{pi} K(u) du = 1``
and expand as ``K(u) = 1 + 2 * sum_j rho_j cos(j u)``.  Convolving a slice
function along the circle ``{q e^{I_q u}}`` with ``K`` multiplies the
coefficient of ``q^j`` by ``rho_j``, which is what makes the closed-form
operators in :mod:`slice_approx.approximation` possible.

Variants
--------
``DVP(n)``
    de la Vallee-Poussin, ``(n!)^2/(2n)! * (2 cos(u/2))^(2n)``, degree ``n``.
``GenJackson(n, r)``
    ``(sin(n u/2) / sin(u/2))^(2r) / lambda``, degree ``r (n - 1)``.  The
    constant ``lambda`` is fixed by quadrature.
``Jackson(n)``
    ``GenJackson(n, 2)``.
``FejerDelayed(n)``
    ``2 F_{2n} - F_n`` with Fejer kernels ``F_m = (1/m) (sin(m u/2)/sin(u/2))^2``,
    degree ``2n - 1``.  Signed; reproduces every ``cos(j u)`` with ``j <= n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "Kernel",
    "DVP",
    "GenJackson",
    "Jackson",
    "FejerDelayed",
    "eval_kernel",
    "dvp_multiplier",
    "multipliers",
    "quadrature_nodes",
    "quadrature_periodic",
    "default_nodes",
    "jackson_closed_constant",
]


def quadrature_nodes(m: int) -> np.ndarray:
    """``m`` equispaced nodes ``-pi + 2 pi k / m`` on one period."""
    if m < 2:
        raise ValueError(f"periodic quadrature needs m >= 2 nodes, got {m}")
    return -np.pi + 2.0 * np.pi * np.arange(m) / m


def quadrature_periodic(g, m: int):
    """Mean value ``(1/2pi) * integral g`` over one period by the trapezoid rule.

    ``g`` is called once on the node array and may return shape ``(m,)`` or
    ``(m, ...)`` (e.g. quaternion values ``(m, 4)``).  Exact for trigonometric
    polynomials of degree ``< m``.
    """
    u = quadrature_nodes(m)
    vals = np.asarray(g(u), dtype=float)
    if vals.ndim == 0:
        vals = np.broadcast_to(vals, (m,))
    return vals.mean(axis=0)


def default_nodes(degree: int) -> int:
    return max(256, 8 * int(degree))


def dvp_multiplier(n: int, j: int) -> float:
    """``(n!)^2 / ((n-j)! (n+j)!)`` as the running product ``prod (n-s)/(n+s+1)``."""
    if j < 0:
        raise ValueError("multiplier index must be nonnegative")
    if j > n:
        return 0.0
    rho = 1.0
    for s in range(j):
        rho *= (n - s) / (n + s + 1)
    return rho


def _dirichlet_ratio(n: int, u: np.ndarray) -> np.ndarray:
    # sin(n u/2) / sin(u/2) on [-pi, pi]; the removable singularity at u = 0 equals n
    u = np.asarray(u, dtype=float)
    s = np.sin(u / 2.0)
    near = np.abs(s) < 1e-8
    out = np.empty_like(u)
    out[~near] = np.sin(n * u[~near] / 2.0) / s[~near]
    out[near] = float(n)
    return out


@dataclass(frozen=True)
class Kernel:
    """Base class; subclasses define ``degree``, ``_raw`` and ``variant``."""

    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"kernel degree parameter must be a positive integer, got {self.n}")

    variant = "kernel"
    nonnegative = True

    @property
    def degree(self) -> int:
        raise NotImplementedError

    def __call__(self, u):
        return eval_kernel(self, u)

    def multipliers(self) -> np.ndarray:
        return multipliers(self)

    def rho(self, j: int) -> float:
        table = multipliers(self)
        j = abs(int(j))
        return float(table[j]) if j < len(table) else 0.0

    @property
    def label(self) -> str:
        return f"{self.variant}({self.n})"


@dataclass(frozen=True)
class DVP(Kernel):
    variant = "dvp"

    @property
    def degree(self) -> int:
        return self.n

    def _eval(self, u):
        n = self.n
        c = np.clip(2.0 * np.cos(np.asarray(u, dtype=float) / 2.0), 0.0, None)
        if n <= 500:
            return c ** (2 * n) / float(math.comb(2 * n, n))
        with np.errstate(divide="ignore"):
            logc = np.log(c)
        log_binom = math.lgamma(2 * n + 1) - 2.0 * math.lgamma(n + 1)
        return np.exp(2 * n * logc - log_binom)


@dataclass(frozen=True)
class GenJackson(Kernel):
    r: int = 2

    variant = "genjackson"

    def __post_init__(self):
        super().__post_init__()
        if int(self.r) != self.r or self.r < 1:
            raise ValueError(f"kernel power r must be a positive integer, got {self.r}")

    @classmethod
    def for_order(cls, n: int, p: int) -> "GenJackson":
        """Kernel used by the order-``p`` operator: ``r = ceil((p + 2) / 2)``."""
        if p < 0:
            raise ValueError("order p must be nonnegative")
        return cls(n, -(-(p + 2) // 2))

    @property
    def degree(self) -> int:
        return self.r * (self.n - 1)

    def _raw(self, u):
        return _dirichlet_ratio(self.n, u) ** (2 * self.r)

    def _eval(self, u):
        return self._raw(u) / _normalizer(self)

    @property
    def label(self) -> str:
        return f"{self.variant}({self.n},{self.r})"


@dataclass(frozen=True)
class Jackson(GenJackson):
    r: int = 2

    variant = "jackson"

    def __post_init__(self):
        super().__post_init__()
        if self.r != 2:
            raise ValueError("the Jackson kernel has r = 2; use GenJackson for other powers")

    @property
    def label(self) -> str:
        return f"{self.variant}({self.n})"


@dataclass(frozen=True)
class FejerDelayed(Kernel):
    variant = "fejer-delayed"
    nonnegative = False

    @property
    def degree(self) -> int:
        return 2 * self.n - 1

    def _eval(self, u):
        n = self.n
        f2n = _dirichlet_ratio(2 * n, u) ** 2 / (2 * n)
        fn = _dirichlet_ratio(n, u) ** 2 / n
        return 2.0 * f2n - fn


def jackson_closed_constant(n: int) -> float:
    """Prefactor ``3 / (2n (2n^2 + 1))`` times ``2`` (the ``1/pi`` vs ``1/2pi`` convention)."""
    return 2.0 * 3.0 / (2.0 * n * (2.0 * n * n + 1.0))


@lru_cache(maxsize=None)
def _normalizer(k: GenJackson) -> float:
    m = default_nodes(2 * k.degree + 2)
    return float(quadrature_periodic(k._raw, m))


def eval_kernel(k: Kernel, u):
    """Normalized kernel values at ``u`` (scalar or array)."""
    out = k._eval(np.atleast_1d(np.asarray(u, dtype=float)))
    return float(out[0]) if np.ndim(u) == 0 else out


@lru_cache(maxsize=None)
def _multiplier_table(k: Kernel) -> np.ndarray:
    if isinstance(k, DVP):
        table = np.array([dvp_multiplier(k.n, j) for j in range(k.n + 1)])
    elif isinstance(k, FejerDelayed):
        j = np.arange(k.degree + 1)
        n = k.n
        table = 2.0 * np.maximum(0.0, 1.0 - j / (2.0 * n)) - np.maximum(0.0, 1.0 - j / n)
        table[: n + 1] = 1.0
    else:
        d = k.degree
        m = default_nodes(2 * d + 2)
        u = quadrature_nodes(m)
        vals = k(u)
        table = np.array([np.mean(vals * np.cos(j * u)) for j in range(d + 1)])
    table.setflags(write=False)
    return table


def multipliers(k: Kernel) -> np.ndarray:
    """``rho_0 .. rho_degree`` (read-only); ``rho_j = 0`` beyond the degree."""
    return _multiplier_table(k)
