"""Explicit Riemann maps onto the supported Koenigs domains.

A map handle is a chain of invertible primitive links (affine maps, the
Cayley map, the exponential strip map, the slit square root, and disk
automorphisms).  ``build_koenigs`` composes a raw chain from the disk onto
the requested domain and post-composes a disk automorphism so that the map
sends 0 to 0 and the boundary point 1 to the prime end reached by the
positive real axis.

Links propagate a point-at-infinity sentinel so that pullbacks of very large
axis points degrade gracefully to the correct boundary point instead of
overflowing.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Union

from .domains import (
    DomainDescriptor,
    HalfPlaneDom,
    SlitPlane,
    StripDom,
    contains,
    dist_to_boundary,
)
from .errors import ConstructionError, DomainError, NumericError, UnsupportedDomainError
from .hyperbolic import (
    AT_INFINITY,
    BOUNDARY_TOL,
    MoebiusMap,
    apply_mobius,
    disk_distance,
    is_at_infinity,
    region_distance,
    RIGHT_HALF_PLANE,
)

_EXP_OVERFLOW = 700.0


@dataclass(frozen=True)
class Affine:
    """z -> a z + b with a != 0."""

    a: complex
    b: complex = 0j

    def __post_init__(self):
        if self.a == 0:
            raise ConstructionError("affine map needs a != 0")

    def fwd(self, z: complex) -> complex:
        if is_at_infinity(z):
            return AT_INFINITY
        return self.a * z + self.b

    def inv(self, w: complex) -> complex:
        if is_at_infinity(w):
            return AT_INFINITY
        return (w - self.b) / self.a

    def dfwd(self, z: complex) -> complex:
        return self.a


class Cayley:
    """Unit disk -> right half-plane, z -> (1+z)/(1-z); sends 0 to 1."""

    def fwd(self, z: complex) -> complex:
        if is_at_infinity(z):
            return -1.0 + 0j
        if z == 1.0:
            return AT_INFINITY
        return (1.0 + z) / (1.0 - z)

    def inv(self, w: complex) -> complex:
        if is_at_infinity(w):
            return 1.0 + 0j
        if w == -1.0:
            return AT_INFINITY
        return (w - 1.0) / (w + 1.0)

    def dfwd(self, z: complex) -> complex:
        return 2.0 / (1.0 - z) ** 2


class ExpStrip:
    """Canonical strip {0 < Im < pi} -> upper half-plane, z -> exp(z)."""

    def fwd(self, z: complex) -> complex:
        if is_at_infinity(z) or z.real > _EXP_OVERFLOW:
            return AT_INFINITY
        return cmath.exp(z)

    def inv(self, w: complex) -> complex:
        if is_at_infinity(w):
            return AT_INFINITY
        if w == 0:
            raise DomainError("log of zero in strip map")
        return cmath.log(w)

    def dfwd(self, z: complex) -> complex:
        return cmath.exp(z)


class SlitSqrt:
    """Plane minus {Re z <= 0, Im z = -1} -> right half-plane, z -> sqrt(z + i).

    The branch cut runs exactly along the removed slit; evaluation within
    1e-12 of the cut is rejected, branch flips being the dominant bug class.
    """

    def fwd(self, z: complex) -> complex:
        if is_at_infinity(z):
            return AT_INFINITY
        u = z + 1j
        if u.real <= 0.0 and abs(u.imag) <= 1e-12 * max(1.0, abs(u.real)):
            raise DomainError(f"z={z} lies on (or within 1e-12 of) the slit")
        return cmath.sqrt(u)

    def inv(self, w: complex) -> complex:
        if is_at_infinity(w):
            return AT_INFINITY
        return w * w - 1j

    def dfwd(self, z: complex) -> complex:
        return 0.5 / cmath.sqrt(z + 1j)


def slit_sqrt_forward(z: complex) -> complex:
    """Branch of sqrt(z + i) with positive real part, cut along the slit."""
    return SlitSqrt().fwd(complex(z))


class _MoebiusLink:
    """A Moebius map as a chain link."""

    def __init__(self, m: MoebiusMap):
        self.m = m
        self.m_inv = m.inverse()

    def fwd(self, z: complex) -> complex:
        return apply_mobius(self.m, z)

    def inv(self, w: complex) -> complex:
        return apply_mobius(self.m_inv, w)

    def dfwd(self, z: complex) -> complex:
        return self.m.derivative(z)


Link = Union[Affine, Cayley, ExpStrip, SlitSqrt, _MoebiusLink]


@dataclass(frozen=True)
class MapHandle:
    """Composition chain; each entry is (link, inverted)."""

    links: tuple[tuple[Link, bool], ...]

    def forward(self, z: complex) -> complex:
        for link, inverted in self.links:
            z = link.inv(z) if inverted else link.fwd(z)
        return z

    def inverse(self, w: complex) -> complex:
        for link, inverted in reversed(self.links):
            w = link.fwd(w) if inverted else link.inv(w)
        return w

    def derivative(self, z: complex) -> complex:
        """d(forward)/dz by the chain rule."""
        deriv = 1.0 + 0j
        for link, inverted in self.links:
            if inverted:
                z_next = link.inv(z)
                deriv /= link.dfwd(z_next)
                z = z_next
            else:
                deriv *= link.dfwd(z)
                z = link.fwd(z)
        return deriv


@dataclass(frozen=True)
class KoenigsMap:
    """Normalized Riemann map h: disk -> domain with h(0) = 0, h(1) = P_inf."""

    domain: DomainDescriptor
    handle: MapHandle
    normalization: MoebiusMap


def map_forward(k: KoenigsMap, z: complex) -> complex:
    """Evaluate h(z) for z strictly inside the disk."""
    z = complex(z)
    if abs(z) >= 1.0 - BOUNDARY_TOL:
        raise DomainError(f"z={z} too close to the unit circle")
    return k.handle.forward(z)


def _coordinate_scale(d: DomainDescriptor) -> float:
    """Magnitude of the coordinates the map chain works with; sets the
    attainable absolute accuracy in domain space."""
    if isinstance(d, HalfPlaneDom):
        return max(1.0, abs(d.boundary_height))
    if isinstance(d, StripDom):
        return max(1.0, -d.y_low, d.y_high)
    if isinstance(d, SlitPlane):
        return max(1.0, max(abs(a) + b for a, b in d.slits))
    return 1.0


def map_inverse(k: KoenigsMap, w: complex, newton_tol: float = 1e-12, max_iter: int = 50) -> complex:
    """Evaluate h^{-1}(w), closed form link by link with a Newton fallback."""
    w = complex(w)
    if not contains(k.domain, w):
        raise DomainError(f"w={w} is not in the Koenigs domain")
    if dist_to_boundary(k.domain, w) < 1e-12:
        raise DomainError(f"w={w} within 1e-12 of the domain boundary")
    z = k.handle.inverse(w)
    if is_at_infinity(z):
        raise NumericError(f"inverse of w={w} escaped to infinity")
    if abs(z) >= 1.0 - BOUNDARY_TOL:
        # Pullback of a far-out axis point; exact to the working precision but
        # not refinable (the forward map is singular there).
        return z
    scale = max(_coordinate_scale(k.domain), abs(w))

    def acceptable(residual: float, deriv: float) -> bool:
        # accept either w-space accuracy or z-space accuracy 1e-14: near the
        # boundary |h'| blows up and the w residual floor is |h'| * ulp(z)
        return residual <= newton_tol * scale or residual <= 1e-14 * deriv

    deriv = abs(k.handle.derivative(z))
    residual = abs(k.handle.forward(z) - w)
    if acceptable(residual, deriv):
        return z
    for _ in range(max_iter):
        f = k.handle.forward(z) - w
        residual = abs(f)
        dh = k.handle.derivative(z)
        if acceptable(residual, abs(dh)):
            return z
        z = z - f / dh
    raise NumericError(f"Newton refinement stalled at residual {residual:.3e} for w={w}")


def domain_distance(k: KoenigsMap, w1: complex, w2: complex) -> float:
    """Hyperbolic distance of the domain: disk distance of the pullbacks."""
    return disk_distance(map_inverse(k, w1), map_inverse(k, w2))


def pullback_density(k: KoenigsMap, w: complex) -> float:
    """Hyperbolic density of the domain at w, pulled back through the map."""
    z = map_inverse(k, w)
    lam_disk = 1.0 / (1.0 - abs(z) ** 2)
    return lam_disk / abs(k.handle.derivative(z))


# ---------------------------------------------------------------------------
# Construction


def _raw_chain(d: DomainDescriptor) -> tuple[tuple[Link, bool], ...]:
    if isinstance(d, HalfPlaneDom):
        if d.side == "above":
            if d.boundary_height >= 0.0:
                raise ConstructionError("half-plane must contain 0: need boundary_height < 0")
            turn = 1j  # right half-plane -> upper half-plane
        else:
            if d.boundary_height <= 0.0:
                raise ConstructionError("half-plane must contain 0: need boundary_height > 0")
            turn = -1j
        return ((Cayley(), False), (Affine(turn), False), (Affine(1.0, 1j * d.boundary_height), False))
    if isinstance(d, StripDom):
        scale = (d.y_high - d.y_low) / math.pi
        return (
            (Cayley(), False),
            (Affine(1j), False),
            (ExpStrip(), True),  # upper half-plane -> canonical strip via log
            (Affine(scale, 1j * d.y_low), False),
        )
    if isinstance(d, SlitPlane):
        if len(d.slits) != 1:
            raise UnsupportedDomainError(
                "no explicit Riemann map for multi-slit planes; only the single-slit base case is supported"
            )
        a0, b0 = d.slits[0]
        return (
            (Cayley(), False),
            (SlitSqrt(), True),  # right half-plane -> slit plane via w^2 - i
            (Affine(complex(b0), complex(a0)), False),
        )
    raise UnsupportedDomainError(
        f"no explicit Riemann map for {type(d).__name__}; distances there are bounded via quasihyperbolic estimates"
    )


def _prime_end_pullback(raw: MapHandle) -> complex:
    """Unit-modulus pullback of the prime end reached by x -> +infinity.

    Evaluated at x = 1e6 with a Richardson check at 1e5 (the argument decays
    like 1/x for every supported chain).
    """
    args = []
    for x in (1e5, 1e6):
        z = raw.inverse(complex(x))
        if is_at_infinity(z):
            raise NumericError("prime-end pullback escaped to infinity")
        args.append(cmath.phase(z))
    if abs(args[1] - args[0]) > 1e-3:
        raise NumericError(f"prime-end pullback did not stabilize: args {args}")
    arg_star = (10.0 * args[1] - args[0]) / 9.0
    return cmath.exp(1j * arg_star)


def build_koenigs(d: DomainDescriptor) -> KoenigsMap:
    """Normalized Riemann map handle for a supported descriptor.

    Supported: horizontal half-planes, strips, and single-slit planes.  The
    normalizing disk automorphism sends 0 to the pullback of 0 and 1 to the
    pullback of the prime end at +infinity.
    """
    if not contains(d, 0):
        raise ConstructionError("the Koenigs domain must contain 0")
    raw = MapHandle(_raw_chain(d))
    z0 = raw.inverse(0j)
    if is_at_infinity(z0) or abs(z0) >= 1.0:
        raise NumericError(f"pullback of 0 landed at {z0}")
    zeta = _prime_end_pullback(raw)
    rot = (zeta - z0) / (1.0 - z0.conjugate() * zeta)
    rot /= abs(rot)
    sigma = MoebiusMap(rot, z0, z0.conjugate() * rot, 1.0)
    handle = MapHandle(((_MoebiusLink(sigma), False),) + raw.links)
    origin = handle.forward(0j)
    if abs(origin) > 1e-10:
        raise NumericError(f"normalization failed: h(0) = {origin}")
    return KoenigsMap(domain=d, handle=handle, normalization=sigma)


# ---------------------------------------------------------------------------
# Stable axis distances (no disk pullback, safe for very large abscissae)


def _strip_ray_distance(delta: float, theta: float) -> float:
    """Hyperbolic distance between two points of a ray arg = theta in the
    upper half-plane whose log-coordinates differ by delta."""
    x = 0.5 * abs(delta)
    s = math.sin(theta)
    if x > 20.0:
        # asinh(sinh(x)/s) = x - log(s) + O(e^{-2x}); the tail is below 1 ulp here
        return x - math.log(s)
    return math.asinh(math.sinh(x) / s)


def axis_distance(k: KoenigsMap, x1: float, x2: float) -> float:
    """rho_Omega(x1, x2) for real axis points, stable for large separations.

    Strips route through the exponential map in log coordinates; half-planes
    use the sinh^2 identity directly; single slits push to the right
    half-plane by the square-root map.
    """
    d = k.domain
    if x1 == x2:
        return 0.0
    if isinstance(d, StripDom):
        width = d.y_high - d.y_low
        theta = math.pi * (0.0 - d.y_low) / width
        delta = math.pi * (x2 - x1) / width
        return _strip_ray_distance(delta, theta)
    if isinstance(d, HalfPlaneDom):
        gap = abs(d.boundary_height)
        return math.asinh(abs(x2 - x1) / (2.0 * gap))
    if isinstance(d, SlitPlane) and len(d.slits) == 1:
        a0, b0 = d.slits[0]
        u1 = slit_sqrt_forward((x1 - a0) / b0)
        u2 = slit_sqrt_forward((x2 - a0) / b0)
        return region_distance(RIGHT_HALF_PLANE, u1, u2)
    raise UnsupportedDomainError(f"no stable axis distance for {type(d).__name__}")
