"""Hyperbolic geometry of the unit disk and of round regions.

Conventions used throughout the package: the disk density is
lambda(z) = 1/(1 - |z|^2), so rho(0, r) = atanh(r); a half-plane carries the
density 1/(2 dist(z, boundary)).  Geodesics of the disk are diameters or arcs
of circles orthogonal to the unit circle.  Points closer than ``BOUNDARY_TOL``
to a boundary are rejected rather than clamped: the metric blows up there and
silent clamping hides bugs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

from scipy.integrate import quad

from .errors import ConstructionError, DomainError

BOUNDARY_TOL = 1e-12

#: Sentinel for the point at infinity on the Riemann sphere.
AT_INFINITY = complex(math.inf, math.inf)

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def is_at_infinity(z: complex) -> bool:
    return not (math.isfinite(z.real) and math.isfinite(z.imag))


def require_disk_point(z: complex, name: str = "z") -> complex:
    """Validate that z lies strictly inside the unit disk (with tolerance)."""
    z = complex(z)
    if is_at_infinity(z):
        raise DomainError(f"{name} must be a finite point, got {z}")
    if abs(z) >= 1.0 - BOUNDARY_TOL:
        raise DomainError(f"{name}={z} is not strictly inside the unit disk")
    return z


def disk_distance(z: complex, w: complex) -> float:
    """Hyperbolic distance in the unit disk: (1/2) log((1+|T|)/(1-|T|)).

    T = (z - w)/(1 - z conj(w)) is the standard automorphism invariant.
    """
    z = require_disk_point(z, "z")
    w = require_disk_point(w, "w")
    # quotient of moduli rather than modulus of the quotient: the two
    # denominators for (z, w) and (w, z) are conjugates, so this form is
    # exactly symmetric in floating point
    t = abs(z - w) / abs(1.0 - z * w.conjugate())
    if t >= 1.0:
        raise DomainError("points too close to the boundary to resolve")
    return math.atanh(t)


# ---------------------------------------------------------------------------
# Moebius maps


@dataclass(frozen=True)
class MoebiusMap:
    """z -> (a z + b)/(c z + d) with ad - bc != 0."""

    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        scale = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        if scale == 0.0 or abs(self.a * self.d - self.b * self.c) <= 1e-14 * scale * scale:
            raise ConstructionError("degenerate Moebius map: ad - bc ~ 0")

    def __call__(self, z: complex) -> complex:
        return apply_mobius(self, z)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """self after other, i.e. (self.compose(other))(z) = self(other(z))."""
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def derivative(self, z: complex) -> complex:
        den = self.c * z + self.d
        return (self.a * self.d - self.b * self.c) / (den * den)


#: Cayley map of the disk onto the right half-plane, 0 -> 1.
CAYLEY = MoebiusMap(1.0, 1.0, -1.0, 1.0)


def apply_mobius(m: MoebiusMap, z: complex) -> complex:
    """Evaluate m at z; the pole maps to the AT_INFINITY sentinel."""
    if is_at_infinity(z):
        if m.c == 0:
            return AT_INFINITY
        return m.a / m.c
    den = m.c * z + m.d
    if den == 0:
        return AT_INFINITY
    return (m.a * z + m.b) / den


def disk_automorphism(zero_image: complex, rotation: complex = 1.0 + 0j) -> MoebiusMap:
    """The automorphism z -> (rotation*z + zero_image)/(1 + conj(zero_image)*rotation*z)."""
    zero_image = require_disk_point(zero_image, "zero_image")
    return MoebiusMap(rotation, zero_image, zero_image.conjugate() * rotation, 1.0)


# ---------------------------------------------------------------------------
# Geodesics of the disk


@dataclass(frozen=True)
class Diameter:
    """The diameter {s * exp(i*angle) : -1 < s < 1}."""

    angle: float


@dataclass(frozen=True)
class OrthoCircle:
    """Arc of the circle |z - center| = radius, orthogonal to the unit circle."""

    center: complex
    radius: float

    def __post_init__(self):
        if self.radius <= 0.0:
            raise ConstructionError("OrthoCircle radius must be positive")
        lhs = abs(self.center) ** 2
        rhs = 1.0 + self.radius**2
        if abs(lhs - rhs) > 1e-12 * max(1.0, rhs):
            raise ConstructionError(
                f"circle (center={self.center}, radius={self.radius}) is not orthogonal to the unit circle"
            )

    def point_at(self, u: float) -> complex:
        """Point at angle u measured from the direction opposite the center."""
        return self.center + self.radius * cmath.exp(1j * (cmath.phase(self.center) + u))

    def disk_param_range(self) -> tuple[float, float]:
        """Open parameter interval (u_lo, u_hi) of the part inside the disk."""
        a0 = math.acos(max(-1.0, min(1.0, -self.radius / abs(self.center))))
        return a0, 2.0 * math.pi - a0

    def boundary_endpoints(self) -> tuple[complex, complex]:
        u_lo, u_hi = self.disk_param_range()
        return self.point_at(u_lo), self.point_at(u_hi)


GeodesicArc = Union[Diameter, OrthoCircle]


def perpendicular_geodesic(x: float) -> GeodesicArc:
    """Geodesic of the disk crossing the real axis orthogonally at x."""
    if not -1.0 < x < 1.0:
        raise DomainError(f"x={x} must lie in (-1, 1)")
    if x == 0.0:
        return Diameter(math.pi / 2.0)
    c = (x * x + 1.0) / (2.0 * x)
    r = math.sqrt(max(c * c - 1.0, 0.0))
    return OrthoCircle(complex(c, 0.0), r)


def geodesic_through(z: complex, w: complex) -> GeodesicArc:
    """The geodesic of the disk through two distinct interior points."""
    z = require_disk_point(z, "z")
    w = require_disk_point(w, "w")
    if z == w:
        raise ConstructionError("need two distinct points")
    cross = z.real * w.imag - z.imag * w.real
    if abs(cross) <= 1e-15 * max(abs(z) * abs(w), 1e-30):
        anchor = z if abs(z) >= abs(w) else w
        if anchor == 0:
            raise ConstructionError("need two distinct points")
        return Diameter(cmath.phase(anchor) % math.pi)
    az = abs(z) ** 2 + 1.0
    aw = abs(w) ** 2 + 1.0
    det = 2.0 * cross
    cx = (az * w.imag - aw * z.imag) / det
    cy = (aw * z.real - az * w.real) / det
    c = complex(cx, cy)
    r = math.sqrt(max(abs(c) ** 2 - 1.0, 0.0))
    return OrthoCircle(c, r)


def foot_on_diameter(z: complex) -> float:
    """Hyperbolic projection of z onto the real diameter (-1, 1).

    Closed form: the geodesic through z orthogonal to the reals is a circle
    with real center c = (|z|^2+1)/(2 Re z); the foot is the root of
    c -+ sqrt(c^2-1) lying inside the disk.
    """
    z = require_disk_point(z)
    if z.imag == 0.0:
        return z.real
    if z.real == 0.0:
        return 0.0
    c = (abs(z) ** 2 + 1.0) / (2.0 * z.real)
    r = math.sqrt(max(c * c - 1.0, 0.0))
    return c - math.copysign(r, c)


def _golden_min(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-13) -> float:
    """Golden-section minimizer for a strictly quasi-convex objective."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def project_to_geodesic(z: complex, g: GeodesicArc) -> complex:
    """Point of g with least hyperbolic distance from z.

    Diameters use the closed-form foot; arcs are bracketed on a 64-point
    angular grid and refined by golden section (the restricted distance is
    strictly quasi-convex, so bracketing is safe).
    """
    z = require_disk_point(z)
    if isinstance(g, Diameter):
        rot = cmath.exp(1j * g.angle)
        return rot * foot_on_diameter(z / rot)
    if abs(abs(z - g.center) - g.radius) <= 1e-13:
        return z

    u_lo, u_hi = g.disk_param_range()
    margin = 1e-12 * (u_hi - u_lo)
    u_lo += margin
    u_hi -= margin

    def objective(u: float) -> float:
        p = g.point_at(u)
        if abs(p) >= 1.0 - BOUNDARY_TOL:
            return math.inf
        try:
            return disk_distance(z, p)
        except DomainError:
            # both points jammed against the boundary: unresolvable, so "far"
            return math.inf


    n_grid = 64
    us = [u_lo + (u_hi - u_lo) * k / (n_grid - 1) for k in range(n_grid)]
    vals = [objective(u) for u in us]
    i_min = min(range(n_grid), key=vals.__getitem__)
    lo = us[i_min - 1] if i_min > 0 else u_lo
    hi = us[i_min + 1] if i_min < n_grid - 1 else u_hi
    u_star = _golden_min(objective, lo, hi)
    return g.point_at(u_star)


# ---------------------------------------------------------------------------
# Round regions: disks and half-planes


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        if self.radius <= 0.0:
            raise ConstructionError("Disk radius must be positive")


@dataclass(frozen=True)
class HalfPlane:
    """Open half-plane given by a boundary point and the unit inward normal."""

    boundary_point: complex
    inward_normal: complex

    def __post_init__(self):
        if abs(abs(self.inward_normal) - 1.0) > 1e-14:
            raise ConstructionError("inward_normal must have unit modulus")


RoundRegion = Union[Disk, HalfPlane]

UNIT_DISK = Disk(0j, 1.0)
RIGHT_HALF_PLANE = HalfPlane(0j, 1.0 + 0j)
UPPER_HALF_PLANE = HalfPlane(0j, 1j)


def region_interior_gap(region: RoundRegion, z: complex) -> float:
    """Signed distance from z to the boundary; positive inside."""
    if isinstance(region, HalfPlane):
        return ((z - region.boundary_point) * region.inward_normal.conjugate()).real
    return region.radius - abs(z - region.center)


def region_density(region: RoundRegion, z: complex) -> float:
    """Hyperbolic density of a disk or half-plane at z.

    Half-planes: 1/(2 dist(z, boundary)).  Disks: the Moebius pullback of the
    unit-disk density, R/(R^2 - |z - c|^2).
    """
    z = complex(z)
    gap = region_interior_gap(region, z)
    scale = region.radius if isinstance(region, Disk) else 1.0
    if gap <= BOUNDARY_TOL * max(scale, abs(z)):
        raise DomainError(f"z={z} is not interior to {region}")
    if isinstance(region, HalfPlane):
        return 1.0 / (2.0 * gap)
    rho = abs(z - region.center)
    return region.radius / (region.radius**2 - rho * rho)


def region_distance(region: RoundRegion, z: complex, w: complex) -> float:
    """Hyperbolic distance in a disk or half-plane via the sinh^2 identity.

    Inverts sinh^2(rho) = |z - w|^2 lambda(z) lambda(w), which holds exactly
    in any disk or half-plane.
    """
    lam_z = region_density(region, z)
    lam_w = region_density(region, w)
    s2 = abs(z - w) ** 2 * lam_z * lam_w
    return math.asinh(math.sqrt(s2))


def density_of(region: RoundRegion) -> Callable[[complex], float]:
    """Density of `region` as a single-argument callable."""

    def lam(z: complex) -> float:
        return region_density(region, z)

    return lam


def integrate_density_along(
    path: Sequence[complex], density: Callable[[complex], float], tol: float = 1e-10
) -> float:
    """Adaptive quadrature of a conformal density along a polyline.

    Oracle-grade plumbing: segments are integrated with scipy's adaptive
    quadrature to absolute tolerance `tol`.  Domain errors raised by the
    density (path touching the boundary) propagate.
    """
    pts = [complex(p) for p in path]
    if len(pts) < 2:
        return 0.0
    total = 0.0
    seg_tol = tol / max(1, len(pts) - 1)
    for p, q in zip(pts[:-1], pts[1:]):
        if p == q:
            continue
        step = q - p
        speed = abs(step)

        def integrand(t: float, p=p, step=step, speed=speed) -> float:
            return density(p + t * step) * speed

        val, _ = quad(integrand, 0.0, 1.0, epsabs=seg_tol, epsrel=1e-12, limit=200)
        total += val
    return total
