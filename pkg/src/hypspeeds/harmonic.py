"""Harmonic measure: disk closed forms, geodesic cuts, and first-hit Monte Carlo.

The Monte Carlo engine is walk-on-spheres: each walk repeatedly jumps to a
uniform point of the largest circle centered at the current position that
avoids both the obstacle and the unit circle, absorbing once within ``eps``
of either.  The absorption layer gives an O(eps) bias, dominated by the
sampling error at the sample counts used here.  Obstacle proximity is
checked before boundary proximity, so walks landing near the junction of the
obstacle with the boundary count as hits.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .conformal import map_forward, map_inverse
from .domains import contains
from .errors import DomainError, NumericError, ParameterError
from .hyperbolic import perpendicular_geodesic, require_disk_point
from .seeding import sample_uniforms
from .semigroup import SemigroupModel, log_one_minus_pi_sq, speeds

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ArcOnCircle:
    """Boundary arc {exp(i t): theta1 <= t <= theta2} with theta2 <= theta1 + 2 pi."""

    theta1: float
    theta2: float

    def __post_init__(self):
        if not self.theta1 < self.theta2 <= self.theta1 + TWO_PI:
            raise DomainError(f"need theta1 < theta2 <= theta1 + 2 pi, got ({self.theta1}, {self.theta2})")

    @property
    def length(self) -> float:
        return self.theta2 - self.theta1

    def contains_angle(self, theta) -> np.ndarray:
        return np.mod(np.asarray(theta) - self.theta1, TWO_PI) <= self.length


@dataclass(frozen=True)
class HMEstimate:
    """Monte Carlo harmonic-measure value with its binomial standard error."""

    value: float
    std_error: float
    n_samples: int
    seed: int


def _binomial_estimate(hits: int, n: int, seed: int) -> HMEstimate:
    value = hits / n
    return HMEstimate(value=value, std_error=math.sqrt(value * (1.0 - value) / n), n_samples=n, seed=seed)


# ---------------------------------------------------------------------------
# Closed forms


def disk_arc_measure(z: complex, arc: ArcOnCircle) -> float:
    """Poisson integral of the arc indicator at z; from 0 it is length/(2 pi)."""
    z = require_disk_point(z)
    if arc.length >= TWO_PI - 1e-15:
        return 1.0
    e1 = cmath.exp(1j * arc.theta1)
    e2 = cmath.exp(1j * arc.theta2)
    t1 = (e1 - z) / (1.0 - z.conjugate() * e1)
    t2 = (e2 - z) / (1.0 - z.conjugate() * e2)
    return ((cmath.phase(t2) - cmath.phase(t1)) % TWO_PI) / TWO_PI


def geodesic_cut_measure(pi_t: float) -> tuple[ArcOnCircle, float]:
    """Measure from 0 of the boundary arc cut off toward 1 by the geodesic
    crossing the axis orthogonally at pi_t.

    Returns the arc and the value (1/pi) arctan((1 - pi_t^2)/(2 pi_t)); the
    geometric arc computation must agree with the closed form to 1e-10.
    """
    if not 0.0 < pi_t < 1.0:
        raise DomainError(f"pi_t must lie in (0, 1), got {pi_t}")
    gamma = perpendicular_geodesic(pi_t)
    end_lo, end_hi = gamma.boundary_endpoints()
    theta = abs(cmath.phase(end_lo))
    if abs(theta - abs(cmath.phase(end_hi))) > 1e-12:
        raise NumericError("geodesic endpoints lost conjugate symmetry")
    geometric = theta / math.pi
    closed = math.atan((1.0 - pi_t) * (1.0 + pi_t) / (2.0 * pi_t)) / math.pi
    if abs(geometric - closed) > 1e-10:
        raise NumericError(f"arc measure {geometric} disagrees with closed form {closed}")
    return ArcOnCircle(-theta, theta), closed


# ---------------------------------------------------------------------------
# Monte Carlo


def mc_disk_arc(z: complex, arc: ArcOnCircle, n: int, seed: int = 0) -> HMEstimate:
    """Estimate the arc measure from z by sampling the exact exit law.

    The exit position of Brownian motion from z is the image of a uniform
    boundary point under the disk automorphism sending 0 to z.
    """
    z = require_disk_point(z)
    if n <= 0:
        raise ParameterError("need n > 0 samples")
    u = sample_uniforms(seed, np.arange(n, dtype=np.uint64), 0)
    pts = np.exp(2j * math.pi * u)
    if z != 0:
        pts = (pts + z) / (1.0 + z.conjugate() * pts)
    hits = int(arc.contains_angle(np.angle(pts)).sum())
    return _binomial_estimate(hits, n, seed)


def _simplify_polyline(verts: np.ndarray, tol: float = 1e-6) -> np.ndarray:
    """Drop vertices that deviate less than `tol` from the local chord.

    Orbit-tail polylines are resolved far below the walk absorption layer, so
    collapsing straight runs changes distances by at most `tol` while cutting
    the per-step cost dramatically.
    """
    if verts.size <= 2:
        return verts
    keep = [0]
    anchor = 0
    for j in range(2, verts.size):
        chord = verts[j] - verts[anchor]
        span = abs(chord)
        run = verts[anchor + 1 : j]
        if span == 0.0:
            dev = np.abs(run - verts[anchor]).max()
        else:
            rel = run - verts[anchor]
            t = np.clip((rel * chord.conjugate()).real / (span * span), 0.0, 1.0)
            dev = np.abs(rel - t * chord).max()
        if dev > tol:
            anchor = j - 1
            keep.append(anchor)
    keep.append(verts.size - 1)
    return verts[np.asarray(keep)]


def _polyline_segments(verts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    starts, steps = verts[:-1], np.diff(verts)
    keep = np.abs(steps) > 0.0
    return starts[keep], steps[keep]


def _dist_to_segments(p: np.ndarray, starts: np.ndarray, steps: np.ndarray) -> np.ndarray:
    rel = p[:, None] - starts[None, :]
    t = np.clip((rel * np.conj(steps)).real / np.abs(steps) ** 2, 0.0, 1.0)
    return np.abs(rel - t * steps[None, :]).min(axis=1)


def mc_first_hit(
    obstacle,
    z0: complex,
    n: int,
    eps: float = 1e-4,
    seed: int = 0,
    chunk: int = 8192,
    max_steps: int = 10_000,
) -> HMEstimate:
    """Walk-on-spheres estimate of the probability that Brownian motion from
    z0 hits the obstacle polyline before the unit circle.

    Deterministic given (seed, n): per-sample streams are derived from the
    seed and the sample index, so the chunk size (the parallel-partition
    knob) cannot change the result.
    """
    verts = np.asarray([complex(v) for v in obstacle], dtype=complex)
    if n <= 0:
        raise ParameterError("need n > 0 samples")
    if eps <= 0.0:
        raise ParameterError("eps must be positive")
    if verts.size == 0:
        return HMEstimate(0.0, 0.0, n, seed)
    if verts.size == 1:
        raise ParameterError("obstacle must be empty or a polyline with >= 2 vertices")
    if np.any(np.abs(verts) > 1.0 + 1e-12):
        raise ParameterError("obstacle vertices must lie in the closed unit disk")
    starts, steps = _polyline_segments(_simplify_polyline(verts))
    if starts.size == 0:
        raise ParameterError("obstacle polyline has zero length")
    z0 = complex(z0)
    start_gap = float(_dist_to_segments(np.asarray([z0]), starts, steps)[0])
    if start_gap <= 10.0 * eps:
        raise ParameterError(f"start point within {start_gap:.2e} of the obstacle; eps={eps} too coarse")
    if 1.0 - abs(z0) <= 10.0 * eps:
        raise ParameterError("start point too close to the unit circle for this eps")

    hits = 0
    for lo in range(0, n, chunk):
        m = min(chunk, n - lo)
        idx = np.arange(lo, lo + m, dtype=np.uint64)
        pos = np.full(m, z0, dtype=complex)
        alive = np.arange(m)
        step_no = 0
        while alive.size and step_no < max_steps:
            p = pos[alive]
            d_obs = _dist_to_segments(p, starts, steps)
            d_bnd = 1.0 - np.abs(p)
            hit = d_obs <= eps
            miss = ~hit & (d_bnd <= eps)
            hits += int(hit.sum())
            cont = ~(hit | miss)
            alive = alive[cont]
            if alive.size:
                radius = np.minimum(d_obs[cont], d_bnd[cont])
                u = sample_uniforms(seed, idx[alive], step_no)
                pos[alive] = pos[alive] + radius * np.exp(2j * math.pi * u)
            step_no += 1
        # walks that never absorbed within max_steps count as misses
    return _binomial_estimate(hits, n, seed)


def semidisk_bisection_check(
    t0: float,
    n: int,
    seed: int = 0,
    eps: float = 1e-4,
    chunk: int = 8192,
    max_steps: int = 10_000,
) -> tuple[HMEstimate, HMEstimate]:
    """Exit-side estimates from -i t0 in the lower half-disk.

    Returns the measures of the two diameter halves (-1, 0] and [0, 1); by
    the reflection symmetry in the imaginary axis their true values coincide.
    """
    if not 0.0 < t0 < 1.0:
        raise DomainError(f"t0 must lie in (0, 1), got {t0}")
    if min(t0, 1.0 - t0) <= 10.0 * eps:
        raise ParameterError("start point too close to the semidisk boundary for this eps")
    left = right = 0
    for lo in range(0, n, chunk):
        m = min(chunk, n - lo)
        idx = np.arange(lo, lo + m, dtype=np.uint64)
        pos = np.full(m, -1j * t0, dtype=complex)
        alive = np.arange(m)
        step_no = 0
        while alive.size and step_no < max_steps:
            p = pos[alive]
            d_diam = np.abs(p.imag)
            d_arc = 1.0 - np.abs(p)
            on_diam = d_diam <= eps
            on_arc = ~on_diam & (d_arc <= eps)
            left += int((on_diam & (p.real < 0.0)).sum())
            right += int((on_diam & (p.real >= 0.0)).sum())
            cont = ~(on_diam | on_arc)
            alive = alive[cont]
            if alive.size:
                radius = np.minimum(d_diam[cont], d_arc[cont])
                u = sample_uniforms(seed, idx[alive], step_no)
                pos[alive] = pos[alive] + radius * np.exp(2j * math.pi * u)
            step_no += 1
    return _binomial_estimate(left, n, seed), _binomial_estimate(right, n, seed)


# ---------------------------------------------------------------------------
# Obstacles from orbits and the two boundary checks


def discretize_orbit_tail(
    m: SemigroupModel,
    t: float,
    spacing: float = 5e-4,
    stop_radius: float = 5e-4,
    max_vertices: int = 20_000,
) -> np.ndarray:
    """Polyline through h^{-1}([t, infinity)), resolved to `spacing` in the disk.

    The parameter step adapts so adjacent vertices stay within `spacing`; the
    final vertex is the Denjoy-Wolff point 1 itself, closing the obstacle to
    the boundary.
    """
    if t <= 0.0:
        raise DomainError("the orbit tail obstacle needs t > 0")
    k = m.koenigs
    z = map_inverse(k, complex(t))
    verts = [z]
    tau = float(t)
    dtau = 0.01 * max(1.0, t)
    while abs(z - 1.0) > stop_radius and len(verts) < max_vertices:
        while True:
            z_next = map_inverse(k, complex(tau + dtau))
            gap = abs(z_next - z)
            if gap <= spacing or dtau <= 1e-12 * max(1.0, tau):
                break
            dtau *= 0.5
        tau += dtau
        z = z_next
        verts.append(z)
        if gap < 0.3 * spacing:
            dtau *= 1.8
    verts.append(1.0 + 0j)
    return np.asarray(verts, dtype=complex)


@dataclass(frozen=True)
class ProjectionBoundResult:
    t: float
    estimate: HMEstimate
    lower_bound: float
    passed: bool


def projection_bound_check(m: SemigroupModel, t: float, n: int, seed: int = 0, eps: float = 1e-4) -> ProjectionBoundResult:
    """Check the projection lower bound for the orbit-tail hitting probability.

    The first-hit probability of the obstacle h^{-1}([t, inf)) from 0 must be
    at least (1/(2 pi)) arctan((1 - pi_t^2)/(2 pi_t)), up to 3 sigma.
    """
    obstacle = discretize_orbit_tail(m, t)
    est = mc_first_hit(obstacle, 0j, n, eps=eps, seed=seed)
    pi_t = speeds(m, t).pi_t
    rhs = math.atan((1.0 - pi_t) * (1.0 + pi_t) / (2.0 * pi_t)) / (2.0 * math.pi)
    return ProjectionBoundResult(t=t, estimate=est, lower_bound=rhs, passed=est.value >= rhs - 3.0 * est.std_error)


# ---------------------------------------------------------------------------
# Nested-domain speed comparison


@dataclass(frozen=True)
class NestedSpeedRow:
    t: float
    v_o: float
    v_o_tilde: float
    diff: float
    ratio: float


@dataclass
class NestedSpeedReport:
    rows: list[NestedSpeedRow] = field(default_factory=list)
    tail_min_diff: float = math.inf
    tail_min_ratio: float = math.inf
    n_inclusion_checked: int = 0

    @property
    def min_diff(self) -> float:
        return min(r.diff for r in self.rows)


def theorem4_scan(
    m: SemigroupModel,
    m_tilde: SemigroupModel,
    t_grid,
    n_inclusion: int = 1000,
    seed: int = 0,
    tail_fraction: float = 0.5,
) -> NestedSpeedReport:
    """Compare orthogonal speeds of nested models: rows of v_o - v_o_tilde and
    the squared-gap ratio (1 - pi_tilde^2)/(1 - pi^2), with tail minima.

    The inclusion of the first Koenigs domain in the second is verified on
    `n_inclusion` sampled points before scanning.
    """
    idx = np.arange(n_inclusion, dtype=np.uint64)
    u_r = sample_uniforms(seed, idx, 0)
    u_a = sample_uniforms(seed, idx, 1)
    for r, a in zip(np.sqrt(u_r) * 0.95, TWO_PI * u_a):
        w = map_forward(m.koenigs, r * cmath.exp(1j * a))
        if not contains(m_tilde.koenigs.domain, w):
            raise DomainError(f"inclusion check failed: {w} escapes the enclosing domain")
    report = NestedSpeedReport(n_inclusion_checked=n_inclusion)
    grid = [float(t) for t in t_grid]
    for t in grid:
        v = speeds(m, t).v_o
        v_t = speeds(m_tilde, t).v_o
        log_gap = log_one_minus_pi_sq(m, t)
        log_gap_t = log_one_minus_pi_sq(m_tilde, t)
        arg = log_gap_t - log_gap
        ratio = math.inf if arg > 700.0 else math.exp(arg)
        report.rows.append(NestedSpeedRow(t=t, v_o=v, v_o_tilde=v_t, diff=v - v_t, ratio=ratio))
    tail = report.rows[int(len(report.rows) * tail_fraction):] or report.rows
    report.tail_min_diff = min(r.diff for r in tail)
    report.tail_min_ratio = min(r.ratio for r in tail)
    return report
