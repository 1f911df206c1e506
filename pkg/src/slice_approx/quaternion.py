"""Quaternion arithmetic and slice coordinates.

Two layers live here:

* :class:`Quaternion`, an immutable scalar value with operator overloading,
  convenient for tests and small computations;
* array functions (:func:`qmul`, :func:`qconj`, :func:`qnorm`, ...) acting on
  ``numpy`` arrays whose last axis has length 4, ordered ``(w, x, y, z)`` for
  ``w + x i + y j + z k``.  Everything downstream evaluates on these arrays.

Every non-real quaternion ``q`` sits in exactly one complex plane
``C_I = {x + I y}`` where ``I`` is the normalized imaginary part of ``q``.
:func:`slice_decompose` returns ``(x, y, I)`` with ``y >= 0``.  Real inputs get
a canonical default unit, ``i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .exceptions import DomainError

__all__ = [
    "Quaternion",
    "SliceCoords",
    "ONE",
    "I",
    "J",
    "K",
    "DEFAULT_UNIT",
    "as_qarray",
    "qmul",
    "qconj",
    "qnorm",
    "qinv",
    "qreal",
    "imag_unit",
    "is_imag_unit",
    "slice_decompose",
    "slice_decompose_array",
    "slice_compose",
    "exp_I",
]


@dataclass(frozen=True, slots=True)
class Quaternion:
    """An immutable quaternion ``w + x i + y j + z k``."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        for name in ("w", "x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = np.asarray(a, dtype=float)
        if a.shape != (4,):
            raise ValueError(f"expected shape (4,), got {a.shape}")
        return cls(*a.tolist())

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.to_array(), dtype=dtype)

    def __iter__(self):
        return iter((self.w, self.x, self.y, self.z))

    @property
    def real(self) -> float:
        return self.w

    @property
    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.x, self.y, self.z)

    @property
    def is_real(self) -> bool:
        return self.x == 0.0 and self.y == 0.0 and self.z == 0.0

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    __radd__ = __add__

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return Quaternion(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)

    def __rsub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            s = float(other)
            return Quaternion(self.w * s, self.x * s, self.y * s, self.z * s)
        o = _coerce(other)
        if o is None:
            return NotImplemented
        a0, a1, a2, a3 = self.w, self.x, self.y, self.z
        b0, b1, b2, b3 = o.w, o.x, o.y, o.z
        return Quaternion(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self * other
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            if other == 0:
                raise ZeroDivisionError("quaternion division by zero")
            return self * (1.0 / other)
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def norm(self) -> float:
        return math.sqrt(self.norm2())

    __abs__ = norm

    def inverse(self) -> "Quaternion":
        n2 = self.norm2()
        if n2 == 0.0:
            raise DomainError("the zero quaternion has no inverse")
        return self.conj() * (1.0 / n2)

    def isclose(self, other, tol: float = 1e-12) -> bool:
        return (self - _coerce(other)).norm() <= tol

    def __repr__(self):
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"


def _coerce(v) -> Quaternion | None:
    if isinstance(v, Quaternion):
        return v
    if isinstance(v, (int, float, np.floating, np.integer)):
        return Quaternion(float(v))
    return None


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)
DEFAULT_UNIT = I

QLike = Union[Quaternion, float, complex, np.ndarray]


class SliceCoords(NamedTuple):
    """``q = x + unit * y`` with ``y >= 0``."""

    x: float
    y: float
    unit: Quaternion

    def compose(self) -> Quaternion:
        return Quaternion(self.x) + self.unit * self.y


# array layer --------------------------------------------------------------


def as_qarray(q) -> np.ndarray:
    """Convert ``q`` to a float array with trailing axis of length 4.

    Accepts a :class:`Quaternion`, a real scalar, a complex scalar or array
    (read as ``x + i y``), a sequence of quaternions, or an array already
    shaped ``(..., 4)``.
    """
    if isinstance(q, Quaternion):
        return q.to_array()
    if isinstance(q, (int, float, np.integer, np.floating)):
        return np.array([float(q), 0.0, 0.0, 0.0])
    if isinstance(q, (list, tuple)) and q and isinstance(q[0], Quaternion):
        return np.stack([p.to_array() for p in q])
    a = np.asarray(q)
    if np.iscomplexobj(a):
        out = np.zeros(a.shape + (4,))
        out[..., 0] = a.real
        out[..., 1] = a.imag
        return out
    a = a.astype(float, copy=False)
    if a.ndim == 0:
        return np.array([float(a), 0.0, 0.0, 0.0])
    if a.shape[-1] != 4:
        raise ValueError(f"quaternion arrays need a trailing axis of length 4, got {a.shape}")
    return a


def qmul(p, q) -> np.ndarray:
    """Hamilton product of broadcastable quaternion arrays."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    a0, a1, a2, a3 = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    b0, b1, b2, b3 = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def qconj(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def qnorm(q) -> np.ndarray:
    return np.linalg.norm(np.asarray(q, dtype=float), axis=-1)


def qinv(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    n2 = np.sum(q * q, axis=-1)
    if np.any(n2 == 0.0):
        raise DomainError("the zero quaternion has no inverse")
    return qconj(q) / n2[..., None]


def qreal(x) -> np.ndarray:
    """Embed real values as quaternions."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape + (4,))
    out[..., 0] = x
    return out


def imag_unit(x: float, y: float, z: float) -> Quaternion:
    """The unit purely imaginary quaternion along ``(x, y, z)``."""
    n = math.sqrt(x * x + y * y + z * z)
    if n == 0.0:
        raise DomainError("a zero vector has no direction")
    return Quaternion(0.0, x / n, y / n, z / n)


def is_imag_unit(q: Quaternion, tol: float = 1e-12) -> bool:
    return abs(q.w) <= tol and abs(q.norm() - 1.0) <= tol


def slice_decompose(q: Quaternion, default_unit: Quaternion = DEFAULT_UNIT) -> SliceCoords:
    """Write ``q = x + I_q y`` with ``y >= 0``; real ``q`` gets ``default_unit``."""
    q = _coerce(q) if not isinstance(q, Quaternion) else q
    y = math.sqrt(q.x * q.x + q.y * q.y + q.z * q.z)
    if y == 0.0:
        return SliceCoords(q.w, 0.0, default_unit)
    return SliceCoords(q.w, y, Quaternion(0.0, q.x / y, q.y / y, q.z / y))


def slice_decompose_array(q, default_unit=DEFAULT_UNIT):
    """Vectorized :func:`slice_decompose`.

    Returns ``(x, y, units)`` with ``x, y`` of shape ``q.shape[:-1]`` and
    ``units`` of shape ``q.shape``.
    """
    q = as_qarray(q)
    shape = q.shape[:-1]
    flat = q.reshape(-1, 4)
    y = np.linalg.norm(flat[:, 1:], axis=1)
    units = np.empty_like(flat)
    units[:] = as_qarray(default_unit)
    nz = y > 0.0
    units[nz, 0] = 0.0
    units[nz, 1:] = flat[nz, 1:] / y[nz, None]
    x = flat[:, 0].reshape(shape)
    y = y.reshape(shape)
    units = units.reshape(q.shape)
    return x, y, units


def slice_compose(x, y, units) -> np.ndarray:
    """Inverse of :func:`slice_decompose_array`: ``x + units * y``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.asarray(units, dtype=float) * y[..., None]
    out = out.copy()
    out[..., 0] += x
    return out


def exp_I(unit, u):
    """``cos(u) + unit * sin(u)``.

    With a :class:`Quaternion` unit and scalar ``u`` a :class:`Quaternion` is
    returned; otherwise an array broadcast over ``unit[..., :]`` and ``u``.
    """
    if isinstance(unit, Quaternion) and np.ndim(u) == 0:
        c, s = math.cos(u), math.sin(u)
        return Quaternion(c, unit.x * s, unit.y * s, unit.z * s)
    unit = as_qarray(unit)
    u = np.asarray(u, dtype=float)
    out = unit * np.sin(u)[..., None]
    out[..., 0] = np.cos(u)
    return out
