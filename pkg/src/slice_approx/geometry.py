"""Axially symmetric compact domains, samplers and example boundary curves.

Every domain here is axially symmetric, so membership of ``q = x + I y``
depends only on the planar point ``x + i |y|``; each class implements the
planar test and the quaternionic one follows.

Sampling is stratified over slice coordinates: planar points in the upper
half of the cross-section (interior by rejection, boundary by
parametrization), imaginary units from a Fibonacci lattice on the 2-sphere,
and each ``x + I y`` is emitted together with its companion ``x - I y``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from .exceptions import BranchError, ConfigError
from .quaternion import as_qarray, qmul, qnorm, slice_compose, slice_decompose_array

__all__ = [
    "CompactDomain",
    "Ball",
    "CassiniCell",
    "UnitSphere",
    "StarlikeCompletion",
    "SampleGrid",
    "StarlikeResult",
    "contains",
    "sample",
    "fibonacci_units",
    "hypocycloid",
    "lemniscate",
    "semidisk",
    "semidisk_residual",
    "example_boundary",
    "hypocycloid_domain",
    "lemniscate_domain",
    "semidisk_domain",
    "starlike_check",
    "branch_angles",
    "cassini_norm_bound",
]


def cassini_norm_bound(x0: float, y0: float, R: float) -> float:
    """``M`` with ``||q|| <= M`` on the closed Cassini cell.

    ``M^2 = R^2 + 2 |x0| sqrt(R^2 + y0^2) + x0^2 + y0^2``.
    """
    return math.sqrt(R * R + 2.0 * abs(x0) * math.sqrt(R * R + y0 * y0) + x0 * x0 + y0 * y0)


class CompactDomain:
    """Base class for axially symmetric compact sets."""

    name = "domain"

    def contains_planar(self, x, y, strict: bool = False, tol: float = 1e-12) -> np.ndarray:
        raise NotImplementedError

    def contains(self, q, strict: bool = False, tol: float = 1e-12):
        """Membership of quaternions ``q`` (closure unless ``strict``)."""
        arr = as_qarray(q)
        x, y, _ = slice_decompose_array(arr)
        out = self.contains_planar(x, y, strict=strict, tol=tol)
        return bool(out) if np.ndim(out) == 0 else out

    # sampler hooks -------------------------------------------------------

    def bbox(self) -> tuple[float, float, float]:
        """``(xmin, xmax, ymax)`` of the upper half cross-section."""
        raise NotImplementedError

    def real_segment(self) -> tuple[float, float] | None:
        """The closed interval ``domain ∩ R`` if it is a nonempty segment."""
        raise NotImplementedError

    def boundary_points(self, count: int) -> np.ndarray:
        """``count`` complex points on the boundary of the upper half cross-section."""
        raise NotImplementedError

    def real_points(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Up to ``count`` real points of the domain: segment ends, then uniform draws."""
        seg = self.real_segment()
        if seg is None or count <= 0:
            return np.zeros(0)
        a, b = seg
        if a == b:
            return np.array([a])
        return np.concatenate([[a, b], rng.uniform(a, b, max(0, count - 2))])[:count]

    @property
    def descriptor(self) -> str:
        return self.name

    @property
    def flagged(self) -> bool:
        return False


@dataclass(frozen=True)
class Ball(CompactDomain):
    """``||q - x0|| <= R`` with real center."""

    x0: float = 0.0
    R: float = 1.0

    name = "ball"

    def __post_init__(self):
        if not self.R > 0:
            raise ConfigError("ball radius must be positive")

    def contains_planar(self, x, y, strict=False, tol=1e-12):
        d = np.hypot(np.asarray(x) - self.x0, y)
        return d < self.R if strict else d <= self.R * (1.0 + tol)

    def bbox(self):
        return self.x0 - self.R, self.x0 + self.R, self.R

    def real_segment(self):
        return self.x0 - self.R, self.x0 + self.R

    def boundary_points(self, count):
        t = np.pi * (np.arange(count) + 0.5) / count
        return self.x0 + self.R * np.exp(1j * t)

    @property
    def descriptor(self):
        return f"ball(x0={self.x0:g},R={self.R:g})"


@dataclass(frozen=True)
class CassiniCell(CompactDomain):
    """``||(q - x0)^2 + y0^2|| <= R^2``.

    With ``y0 = 0`` this is the ball of radius ``R`` about ``x0``.  Cells with
    ``y0 >= R`` have cross-sections that touch or miss the real axis; they are
    accepted but :attr:`flagged`.
    """

    x0: float = 0.0
    y0: float = 1.0
    R: float = 1.0

    name = "cassini"

    def __post_init__(self):
        if not self.R > 0:
            raise ConfigError("Cassini cell radius must be positive")
        if self.y0 < 0:
            raise ConfigError("Cassini cell needs y0 >= 0")

    def _value(self, x, y):
        z = (np.asarray(x) - self.x0) + 1j * np.asarray(y)
        return np.abs(z * z + self.y0 ** 2)

    def contains_planar(self, x, y, strict=False, tol=1e-12):
        v = self._value(x, y)
        r2 = self.R ** 2
        return v < r2 if strict else v <= r2 * (1.0 + tol)

    def contains(self, q, strict=False, tol=1e-12):
        # direct quaternionic form, independent of slice decomposition
        arr = as_qarray(q)
        d = arr.copy()
        d[..., 0] -= self.x0
        p = qmul(d, d)
        p[..., 0] += self.y0 ** 2
        v = qnorm(p)
        r2 = self.R ** 2
        out = v < r2 if strict else v <= r2 * (1.0 + tol)
        return bool(out) if np.ndim(out) == 0 else out

    @property
    def M(self) -> float:
        return cassini_norm_bound(self.x0, self.y0, self.R)

    def bbox(self):
        rho = math.sqrt(self.R ** 2 + self.y0 ** 2)
        return self.x0 - rho, self.x0 + rho, rho

    def real_segment(self):
        if self.y0 > self.R:
            return None
        h = math.sqrt(self.R ** 2 - self.y0 ** 2)
        return self.x0 - h, self.x0 + h

    def boundary_points(self, count):
        # z = x0 + sqrt(R^2 e^{i phi} - y0^2) on both branches, folded to y >= 0
        k = max(1, count // 2)
        phi = 2.0 * np.pi * (np.arange(k) + 0.5) / k
        w = np.sqrt(self.R ** 2 * np.exp(1j * phi) - self.y0 ** 2)
        z = np.concatenate([self.x0 + w, self.x0 - w])
        z = np.where(z.imag < 0, np.conj(z), z)
        z = np.unique(np.round(z, 15))
        idx = np.linspace(0, len(z) - 1, count).round().astype(int)
        return z[idx]

    @property
    def flagged(self):
        return self.y0 >= self.R

    @property
    def descriptor(self):
        return f"cassini(x0={self.x0:g},y0={self.y0:g},R={self.R:g})"


@dataclass(frozen=True)
class UnitSphere(CompactDomain):
    """``||q|| = 1``."""

    name = "sphere"

    def contains_planar(self, x, y, strict=False, tol=1e-12):
        if strict:
            return np.zeros(np.shape(x), dtype=bool)
        return np.abs(np.hypot(x, y) - 1.0) <= tol

    def bbox(self):
        return -1.0, 1.0, 1.0

    def real_segment(self):
        return None

    def real_points(self, count, rng):
        return np.array([1.0, -1.0])[: max(0, min(count, 2))]

    def boundary_points(self, count):
        t = np.pi * (np.arange(count) + 0.5) / count
        return np.exp(1j * t)

    @property
    def descriptor(self):
        return "sphere"


@dataclass(frozen=True, eq=False)
class StarlikeCompletion(CompactDomain):
    """Axially symmetric completion of a planar region ``G`` symmetric about ``R``.

    ``boundary(theta)`` parametrizes the boundary of ``G`` for ``theta`` in
    ``[0, 2 pi)``.  Membership uses ``inside(z)`` when given, otherwise an
    even-odd test against the boundary polygon with ``vertices`` points plus a
    distance tolerance to the polygon edges.
    """

    boundary: Callable
    label: str = "starlike"
    inside: Callable | None = None
    vertices: int = 2048
    exclude: tuple = ()
    _poly: np.ndarray = field(init=False, repr=False)

    name = "starlike"

    def __post_init__(self):
        theta = 2.0 * np.pi * np.arange(self.vertices) / self.vertices
        keep = np.ones_like(theta, dtype=bool)
        for a, b in self.exclude:
            keep &= ~((theta >= a) & (theta <= b))
        object.__setattr__(self, "_theta", theta[keep])
        object.__setattr__(self, "_poly", np.asarray(self.boundary(theta[keep]), dtype=complex))

    def _polygon_contains(self, z, tol):
        z = np.asarray(z, dtype=complex).ravel()
        v1 = self._poly
        v2 = np.roll(v1, -1)
        out = np.zeros(z.shape, dtype=bool)
        chunk = 1024
        for s in range(0, len(z), chunk):
            px = z[s : s + chunk].real[:, None]
            py = z[s : s + chunk].imag[:, None]
            x1, y1, x2, y2 = v1.real, v1.imag, v2.real, v2.imag
            cond = (y1 > py) != (y2 > py)
            with np.errstate(divide="ignore", invalid="ignore"):
                xi = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
            inside = np.count_nonzero(cond & (px < xi), axis=1) % 2 == 1
            if tol > 0 and not np.all(inside):
                miss = ~inside
                inside[miss] = _segment_distance(z[s : s + chunk][miss], v1, v2) <= tol
            out[s : s + chunk] = inside
        return out

    def contains_planar(self, x, y, strict=False, tol=1e-9):
        x = np.asarray(x, dtype=float)
        z = x + 1j * np.abs(np.asarray(y, dtype=float))
        if self.inside is not None:
            return self.inside(z, strict=strict, tol=tol)
        res = self._polygon_contains(z, 0.0 if strict else tol).reshape(np.shape(z))
        return res

    def contains(self, q, strict=False, tol=1e-9):
        return super().contains(q, strict=strict, tol=tol)

    def bbox(self):
        p = self._poly
        return float(p.real.min()), float(p.real.max()), float(np.abs(p.imag).max())

    def real_segment(self):
        xmin, xmax, _ = self.bbox()
        xs = np.linspace(xmin, xmax, 4001)
        ok = self.contains_planar(xs, np.zeros_like(xs))
        if not np.any(ok):
            return None
        return float(xs[ok].min()), float(xs[ok].max())

    def boundary_points(self, count):
        upper = self._poly[self._poly.imag >= 0]
        idx = np.linspace(0, len(upper) - 1, count).round().astype(int)
        return upper[idx]

    @property
    def descriptor(self):
        return self.label


def _segment_distance(z, v1, v2) -> np.ndarray:
    d = v2 - v1
    L2 = np.abs(d) ** 2
    L2 = np.where(L2 == 0, 1.0, L2)
    t = np.clip(((z[:, None] - v1) * np.conj(d)).real / L2, 0.0, 1.0)
    return np.min(np.abs(z[:, None] - (v1 + t * d)), axis=1)


def contains(d: CompactDomain, q, strict: bool = False):
    return d.contains(q, strict=strict)


# sampling -----------------------------------------------------------------


@dataclass
class SampleGrid:
    """Sample points plus the metadata needed to regenerate them."""

    points: np.ndarray
    domain: str
    count: int
    seed: int
    strata: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


def fibonacci_units(count: int, offset: float = 0.0) -> np.ndarray:
    """``count`` unit imaginary quaternions on a Fibonacci lattice of the 2-sphere."""
    k = np.arange(count) + 0.5
    zc = 1.0 - 2.0 * k / count
    r = np.sqrt(np.clip(1.0 - zc * zc, 0.0, None))
    golden = np.pi * (3.0 - math.sqrt(5.0))
    phi = golden * np.arange(count) + 2.0 * np.pi * offset
    out = np.zeros((count, 4))
    out[:, 1] = r * np.cos(phi)
    out[:, 2] = r * np.sin(phi)
    out[:, 3] = zc
    out /= np.linalg.norm(out, axis=1, keepdims=True)
    return out


def _interior_planar(d: CompactDomain, count: int, rng: np.random.Generator) -> np.ndarray:
    if count == 0:
        return np.zeros(0, dtype=complex)
    xmin, xmax, ymax = d.bbox()
    got: list[np.ndarray] = []
    have = 0
    for _ in range(200):
        batch = max(64, 4 * (count - have))
        x = rng.uniform(xmin, xmax, batch)
        y = rng.uniform(0.0, ymax, batch)
        ok = d.contains_planar(x, y, strict=True)
        got.append((x + 1j * y)[ok])
        have += int(ok.sum())
        if have >= count:
            break
    if have < count:
        raise ConfigError(f"could not sample the interior of {d.descriptor}: empty cross-section?")
    return np.concatenate(got)[:count]


def sample(
    d: CompactDomain,
    count: int,
    seed: int = 0,
    boundary_fraction: float = 0.25,
    real_fraction: float = 0.05,
) -> SampleGrid:
    """Deterministic stratified sample of ``count`` points of ``d``.

    Strata: real-axis points (including the ends of ``d ∩ R``), boundary pairs,
    interior pairs.  Each stratum draws from its own child of
    ``SeedSequence(seed)``, so results are bit-reproducible.  Every
    ``x + I y`` comes with ``x - I y``; only when the domain misses the real axis and
    ``count`` is odd is the last companion dropped.
    """
    if count <= 0:
        raise ConfigError("sample count must be positive")
    ss_real, ss_int, ss_units = np.random.SeedSequence(seed).spawn(3)
    want = min(count, max(2, int(round(real_fraction * count))))
    reals = d.real_points(want, np.random.default_rng(ss_real))
    if (count - len(reals)) % 2:
        # keep the pair count whole: drop a real point, or repeat a lone one
        if len(reals) > 1:
            reals = reals[:-1]
        elif len(reals) == 1 and count > 1:
            reals = np.repeat(reals, 2)
    n_real = len(reals)
    n_pairs = (count - n_real + 1) // 2
    n_bnd = n_pairs if isinstance(d, UnitSphere) else int(round(boundary_fraction * n_pairs))
    n_int = n_pairs - n_bnd

    planar = np.concatenate(
        [
            d.boundary_points(n_bnd) if n_bnd else np.zeros(0, complex),
            _interior_planar(d, n_int, np.random.default_rng(ss_int)),
        ]
    )
    offset = float(np.random.default_rng(ss_units).uniform())
    units = fibonacci_units(n_pairs, offset)
    plus = slice_compose(planar.real, planar.imag, units)
    minus = slice_compose(planar.real, -planar.imag, units)
    pairs = np.stack([plus, minus], axis=1).reshape(-1, 4)
    real_pts = np.zeros((n_real, 4))
    real_pts[:, 0] = reals
    pts = np.concatenate([real_pts, pairs])[:count]
    strata = {"real": n_real, "boundary_pairs": n_bnd, "interior_pairs": n_int}
    return SampleGrid(pts, d.descriptor, count, seed, strata)


# example boundaries -------------------------------------------------------


def hypocycloid(m: int, theta):
    """``e^{i t} + e^{-(m-1) i t} / (m - 1)``, the ``m``-cusped hypocycloid."""
    if m < 3:
        raise ValueError("the hypocycloid needs m >= 3 cusps")
    t = np.asarray(theta, dtype=float)
    return np.exp(1j * t) + np.exp(-1j * (m - 1) * t) / (m - 1)


def lemniscate(m: int, w, tol: float = 1e-12):
    """``w (1 + w^-m)^(1/m)`` on the principal branch.

    Points of ``|w| = 1`` map onto ``|z^m - 1| = 1``.  The branch points
    ``w^m = -1`` raise :class:`BranchError`.
    """
    if m < 2:
        raise ValueError("the lemniscate needs m >= 2 leaves")
    w = np.asarray(w, dtype=complex)
    rad = 1.0 + w ** (-m)
    if np.any(np.abs(rad) <= tol):
        raise BranchError("lemniscate map evaluated at a branch point w^m = -1")
    return w * rad ** (1.0 / m)


def semidisk(w, branch: str = "principal", normalized: bool = False, tol: float = 1e-12):
    """The semidisk exterior map evaluated at ``w``.

    ``(2(w^3 - 1) + 3(w^2 - w) + 2 (w^2 + w + 1)^(3/2)) / (w (w + 1) sqrt 3)``.

    ``branch="principal"`` takes the principal branch of ``(w^2 + w + 1)^(3/2)``;
    ``branch="exterior"`` takes ``(w sqrt(1 + 1/w + 1/w^2))^3``, the branch
    continuous on ``|w| > 1`` and asymptotic to ``w^3``.  ``normalized``
    divides by 3, which puts the image of ``|w| = 1`` on the unit semidisk
    boundary.  Branch points and the pole at ``w = -1`` raise
    :class:`BranchError`.
    """
    w = np.asarray(w, dtype=complex)
    quad = w * w + w + 1.0
    if np.any(np.abs(quad) <= tol):
        raise BranchError("semidisk map evaluated at a branch point w^2 + w + 1 = 0")
    if np.any(np.abs(w * (w + 1.0)) <= tol):
        raise BranchError("semidisk map evaluated at w = 0 or w = -1")
    if branch == "principal":
        s = quad ** 1.5
    elif branch == "exterior":
        s = (w * np.sqrt(1.0 + 1.0 / w + 1.0 / (w * w))) ** 3
    else:
        raise ValueError(f"unknown branch {branch!r}")
    z = (2.0 * (w ** 3 - 1.0) + 3.0 * (w * w - w) + 2.0 * s) / (w * (w + 1.0) * math.sqrt(3.0))
    return z / 3.0 if normalized else z


def semidisk_residual(z) -> np.ndarray:
    """Distance from ``z`` to the boundary of ``{|z| <= 1, Re z >= 0}``."""
    z = np.asarray(z, dtype=complex)
    arc = np.where(z.real >= 0, np.abs(np.abs(z) - 1.0), np.abs(z - 1j * np.sign(z.imag + 0.0)))
    seg = np.where(np.abs(z.imag) <= 1.0, np.abs(z.real), np.abs(z - 1j * np.sign(z.imag)))
    return np.minimum(arc, seg)


def example_boundary(variant: str, t, m: int | None = None, **kwargs):
    """Boundary points of the example regions as complex ``x + i y``.

    ``variant`` is ``"hypocycloid"`` (``t`` = angle), ``"lemniscate"`` or
    ``"semidisk"`` (``t`` = angle of ``w = e^{i t}`` on the unit circle).
    """
    t = np.asarray(t, dtype=float)
    if variant == "hypocycloid":
        return hypocycloid(3 if m is None else m, t)
    if variant == "lemniscate":
        return lemniscate(2 if m is None else m, np.exp(1j * t), **kwargs)
    if variant == "semidisk":
        return semidisk(np.exp(1j * t), **kwargs)
    raise ValueError(f"unknown boundary variant {variant!r}")


def hypocycloid_domain(m: int = 3, vertices: int = 2048) -> StarlikeCompletion:
    return StarlikeCompletion(lambda t: hypocycloid(m, t), label=f"hypocycloid(m={m})", vertices=vertices)


def lemniscate_domain(m: int = 2, vertices: int = 2048) -> StarlikeCompletion:
    def inside(z, strict=False, tol=1e-9):
        v = np.abs(z ** m - 1.0)
        return v < 1.0 if strict else v <= 1.0 + tol

    def curve(t):
        # exact boundary points; the branch points w^m = -1 map to z = 0
        w = np.exp(1j * np.asarray(t))
        rad = 1.0 + w ** (-m)
        safe = np.abs(rad) > 1e-12
        z = np.zeros_like(w)
        z[safe] = w[safe] * rad[safe] ** (1.0 / m)
        return z

    return StarlikeCompletion(curve, label=f"lemniscate(m={m})", inside=inside, vertices=vertices)


def semidisk_domain(vertices: int = 2048) -> StarlikeCompletion:
    def inside(z, strict=False, tol=1e-9):
        if strict:
            return (np.abs(z) < 1.0) & (z.real > 0)
        return (np.abs(z) <= 1.0 + tol) & (z.real >= -tol)

    def curve(t):
        # arc from -i to i, then the segment back down the imaginary axis
        s = np.asarray(t, dtype=float) / (2.0 * np.pi) * (np.pi + 2.0)
        return np.where(s < np.pi, np.exp(1j * (s - np.pi / 2.0)), 1j * (1.0 - (s - np.pi)))

    return StarlikeCompletion(curve, label="semidisk", inside=inside, vertices=vertices)


class StarlikeResult(NamedTuple):
    ok: bool
    witness: np.ndarray | None
    t: float | None
    checked: int


def starlike_check(d: CompactDomain, center: float = 0.0, samples=None, segments: int = 50, seed: int = 0) -> StarlikeResult:
    """Check that segments from a real ``center`` to sampled points stay in ``d``.

    ``samples`` is a :class:`SampleGrid`, an array of points or a count
    (default 1000).  Reports the first failing point and segment parameter.
    """
    if samples is None:
        samples = 1000
    if isinstance(samples, int):
        samples = sample(d, samples, seed=seed)
    pts = as_qarray(getattr(samples, "points", samples)).reshape(-1, 4)
    c = np.array([center, 0.0, 0.0, 0.0])
    ts = np.linspace(0.0, 1.0, segments)
    seg = ts[None, :, None] * pts[:, None, :] + (1.0 - ts)[None, :, None] * c
    inside = np.asarray(d.contains(seg.reshape(-1, 4))).reshape(len(pts), segments)
    if inside.all():
        return StarlikeResult(True, None, None, len(pts) * segments)
    i, k = np.argwhere(~inside)[0]
    return StarlikeResult(False, pts[i], float(ts[k]), len(pts) * segments)


def branch_angles(variant: str, m: int | None = None) -> np.ndarray:
    """Angles ``t`` in ``[-pi, pi)`` where ``w = e^{i t}`` hits a branch point or pole."""
    if variant == "hypocycloid":
        return np.zeros(0)
    if variant == "lemniscate":
        m = 2 if m is None else m
        t = (2 * np.arange(m) + 1) * np.pi / m
    elif variant == "semidisk":
        t = np.array([2 * np.pi / 3, -2 * np.pi / 3, np.pi])
    else:
        raise ValueError(f"unknown boundary variant {variant!r}")
    return np.mod(t + np.pi, 2 * np.pi) - np.pi
