"""Finite positive measures on the closed unit disk.

A measure is a sum of four kinds of components: atoms inside the disk, an
absolutely continuous boundary part (grid samples or a closed-form power
density), singular boundary atoms, and radial line densities (1-t)^-beta
along a ray.  Window and arc masses are exact wherever a closed form exists;
power-type arc integrals go through incomplete-beta special functions, so the
singular examples are not quadrature-limited near their singularity.

Angles are radians; arcs are handled internally as normalized spans
(m(circle) = 1), matching the window definition 1 - |z| <= m(I)/2.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import betainc, beta as beta_fn

from .circle import grid_angles
from .errors import AdmissibilityError, ConfigurationError, DomainError, WeightingError

TWO_PI = 2.0 * np.pi

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


def _gl_integrate(fn, lo, hi):
    """Fixed-order Gauss-Legendre on [lo, hi] (vectorized endpoints allowed)."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    mid = 0.5 * (hi + lo)
    rad = 0.5 * (hi - lo)
    nodes = mid[..., None] + rad[..., None] * _GL_NODES
    vals = fn(nodes)
    return np.sum(vals * _GL_WEIGHTS, axis=-1) * rad


# ---------------------------------------------------------------------------
# exact integrals of |1 - e^(it)|^gamma over arcs
# ---------------------------------------------------------------------------


def _sin_power_primitive(gamma, phi):
    """F(phi) = integral_0^phi (2 sin(u/2))^gamma du for phi in [0, 2*pi], gamma > -1."""
    phi = np.asarray(phi, dtype=float)
    a = 0.5 * (gamma + 1.0)
    coeff = 2.0 ** gamma * beta_fn(a, 0.5)
    base = np.clip(phi, 0.0, np.pi)
    out = coeff * betainc(a, 0.5, np.sin(base / 2.0) ** 2)
    full = 2.0 * coeff  # F(pi) doubled
    over = phi > np.pi
    if np.any(over):
        reflected = coeff * betainc(a, 0.5, np.sin(np.clip(TWO_PI - phi, 0, np.pi) / 2.0) ** 2)
        out = np.where(over, full - reflected, out)
    return out


def _sin_power_segment(gamma, lo, hi):
    """Integral of (2 sin(u/2))^gamma over [lo, hi] with 0 < lo <= hi <= pi.

    Valid for any real gamma (the interval stays away from the singularity);
    exponents <= -1 are lifted with the reduction
    int sin^g = [cos v sin^(g+1) v]/(g+1) + (g+2)/(g+1) int sin^(g+2).
    """
    v1 = np.asarray(lo, dtype=float) / 2.0
    v2 = np.asarray(hi, dtype=float) / 2.0

    def sin_int(g, x1, x2):
        if g > -1.0:
            a = 0.5 * (g + 1.0)
            c = 0.5 * beta_fn(a, 0.5)
            return c * (betainc(a, 0.5, np.sin(x2) ** 2) - betainc(a, 0.5, np.sin(x1) ** 2))
        boundary = (np.cos(x2) * np.sin(x2) ** (g + 1) - np.cos(x1) * np.sin(x1) ** (g + 1))
        return (boundary + (g + 2.0) * sin_int(g + 2.0, x1, x2)) / (g + 1.0)

    return 2.0 ** (gamma + 1) * sin_int(gamma, v1, v2)


class PowerArcWeight:
    """Boundary weight scale * |1 - e^(i(t - t0))|^gamma with exact arc integrals.

    Integrals are taken against normalized Lebesgue measure dm = dt/(2*pi).
    For gamma <= -1 an arc whose closure contains the singular angle has
    infinite integral, and that infinity is returned as such.
    """

    def __init__(self, gamma, scale=1.0, angle=0.0):
        if scale < 0:
            raise DomainError("weight scale must be nonnegative")
        self.gamma = float(gamma)
        self.scale = float(scale)
        self.angle = float(angle) % TWO_PI

    @property
    def integrable(self):
        return self.gamma > -1.0

    def values(self, t):
        rel = np.asarray(t, dtype=float) - self.angle
        base = np.abs(2.0 * np.sin(rel / 2.0))
        with np.errstate(divide="ignore"):
            return self.scale * base ** self.gamma

    def total(self):
        if not self.integrable:
            return np.inf
        return self.scale * float(_sin_power_primitive(self.gamma, TWO_PI)) / TWO_PI

    def arc_integral(self, start, length):
        """Integral over the arc of normalized length starting at angle `start` (radians)."""
        start = np.asarray(start, dtype=float)
        length = float(length)
        if length >= 1.0 - 1e-15:
            return np.full(start.shape, self.total()) if start.shape else self.total()
        span = length * TWO_PI
        x1 = (start - self.angle) % TWO_PI
        x2 = x1 + span
        if self.integrable:
            out = _sin_power_primitive(self.gamma, np.minimum(x2, TWO_PI)) - _sin_power_primitive(
                self.gamma, x1
            )
            wrap = x2 > TWO_PI
            if np.any(wrap):
                out = out + np.where(wrap, _sin_power_primitive(self.gamma, x2 - TWO_PI), 0.0)
            return self.scale * out / TWO_PI
        # non-integrable exponent: finite only strictly away from the singularity
        eps = 1e-12
        contains = (x1 <= eps) | (x2 >= TWO_PI - eps)
        out = np.full(np.shape(x1), np.inf)
        away = ~contains
        if np.any(away):
            a_lo = np.where(away, x1, 1.0)
            a_hi = np.where(away, x2, 2.0)
            out_away = np.zeros_like(a_lo)
            left = np.minimum(a_hi, np.pi)
            seg1 = left > a_lo
            if np.any(seg1):
                out_away[seg1] = _sin_power_segment(
                    self.gamma, a_lo[seg1], left[seg1]
                )
            seg2 = a_hi > np.pi
            if np.any(seg2):
                lo2 = np.maximum(a_lo, np.pi)
                out_away[seg2] += _sin_power_segment(
                    self.gamma, (TWO_PI - a_hi)[seg2], (TWO_PI - lo2)[seg2]
                )
            out = np.where(away, out_away, out)
        return self.scale * out / TWO_PI

    def reciprocal(self):
        return PowerArcWeight(-self.gamma, 1.0 / self.scale, self.angle)


class GridArcWeight:
    """Piecewise-constant boundary weight given by grid samples (exact arc sums)."""

    def __init__(self, values):
        v = np.asarray(values, dtype=float)
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise DomainError("grid weight must be nonnegative and finite")
        self.grid = v
        self._prefix = np.concatenate([[0.0], np.cumsum(v)]) / v.size

    def values(self, t):
        idx = (np.floor(np.asarray(t, dtype=float) / TWO_PI * self.grid.size).astype(int)
               % self.grid.size)
        return self.grid[idx]

    def total(self):
        return float(np.mean(self.grid))

    def _cum(self, x):
        n = self.grid.size
        pos = np.asarray(x, dtype=float) * n
        idx = np.clip(np.floor(pos).astype(int), 0, n)
        frac = pos - idx
        base = self._prefix[idx]
        inside = idx < n
        return base + np.where(inside, frac * self.grid[np.minimum(idx, n - 1)] / n, 0.0)

    def arc_integral(self, start, length):
        start = np.asarray(start, dtype=float) / TWO_PI % 1.0
        end = start + float(length)
        out = self._cum(np.minimum(end, 1.0)) - self._cum(start)
        wrap = end > 1.0
        if np.any(wrap):
            out = out + np.where(wrap, self._cum(end - 1.0), 0.0)
        return out

    def reciprocal(self):
        if np.any(self.grid <= 0):
            raise DomainError("weight vanishes on the grid; reciprocal undefined")
        return GridArcWeight(1.0 / self.grid)


class PiecewiseBoundaryWeight:
    """Boundary weight built from constant plateaus and cubic smoothstep joins.

    Exact arc integrals: constant pieces and the smoothstep antiderivative in
    closed form, reciprocal-of-smoothstep portions by fixed Gauss-Legendre
    (the integrand is smooth).  This is what makes Muckenhoupt products on
    arcs far narrower than any practical grid cell trustworthy.

    Pieces are (t_lo, t_hi, v0, v1): value v0 + (v1 - v0) s((t-lo)/(hi-lo))
    with s(x) = 3x^2 - 2x^3; a constant piece has v0 == v1.  Pieces must
    partition [0, 2*pi).
    """

    def __init__(self, pieces, reciprocal=False):
        self.pieces = [(float(a), float(b), float(v0), float(v1)) for a, b, v0, v1 in pieces]
        self.pieces.sort()
        lo = np.array([p[0] for p in self.pieces])
        hi = np.array([p[1] for p in self.pieces])
        if abs(lo[0]) > 1e-12 or abs(hi[-1] - TWO_PI) > 1e-12 or np.any(
            np.abs(hi[:-1] - lo[1:]) > 1e-12
        ):
            raise ConfigurationError("pieces must partition [0, 2*pi)")
        if min(min(p[2], p[3]) for p in self.pieces) <= 0:
            raise DomainError("piecewise weight must be strictly positive")
        self._reciprocal = bool(reciprocal)
        self._lo = lo
        self._hi = hi
        self._v0 = np.array([p[2] for p in self.pieces])
        self._v1 = np.array([p[3] for p in self.pieces])
        piece_ints = self._partial_integrals(
            np.arange(len(self.pieces)), self._hi
        )
        self._prefix = np.concatenate([[0.0], np.cumsum(piece_ints)])

    def _raw_values(self, t):
        t = np.asarray(t, dtype=float) % TWO_PI
        idx = np.clip(np.searchsorted(self._hi, t, side="right"), 0, len(self.pieces) - 1)
        lo = self._lo[idx]
        width = np.maximum(self._hi[idx] - lo, 1e-300)
        x = np.clip((t - lo) / width, 0.0, 1.0)
        s = 3.0 * x**2 - 2.0 * x**3
        return self._v0[idx] + (self._v1[idx] - self._v0[idx]) * s

    def values(self, t):
        v = self._raw_values(t)
        return 1.0 / v if self._reciprocal else v

    def _partial_integrals(self, idx, upto):
        """Vectorized integral over [lo_i, min(upto, hi_i)] of piece i = idx[j]."""
        idx = np.atleast_1d(idx)
        upto = np.atleast_1d(np.asarray(upto, dtype=float))
        lo = self._lo[idx]
        hi = np.minimum(upto, self._hi[idx])
        v0 = self._v0[idx]
        v1 = self._v1[idx]
        width = np.maximum(self._hi[idx] - lo, 1e-300)
        out = np.zeros(idx.shape)
        const = v0 == v1
        span = np.maximum(hi - lo, 0.0)
        if np.any(const):
            val = v0[const] if not self._reciprocal else 1.0 / v0[const]
            out[const] = val * span[const]
        step = ~const & (span > 0)
        if np.any(step):
            if not self._reciprocal:
                x = np.clip((hi[step] - lo[step]) / width[step], 0.0, 1.0)
                out[step] = width[step] * (
                    v0[step] * x + (v1[step] - v0[step]) * (x**3 - 0.5 * x**4)
                )
            else:
                out[step] = _gl_integrate(
                    lambda t: 1.0 / self._raw_values(t), lo[step], hi[step]
                )
        return out

    def _cum(self, t):
        t = np.clip(np.asarray(t, dtype=float), 0.0, TWO_PI)
        idx = np.clip(np.searchsorted(self._hi, t, side="right"), 0, len(self.pieces) - 1)
        partial = self._partial_integrals(idx, t)
        return self._prefix[idx] + partial

    def total(self):
        return float(self._prefix[-1]) / TWO_PI

    def arc_integral(self, start, length):
        start = np.asarray(start, dtype=float) % TWO_PI
        end = start + float(length) * TWO_PI
        out = self._cum(np.minimum(end, TWO_PI)) - self._cum(start)
        wrap = end > TWO_PI
        if np.any(wrap):
            out = out + np.where(wrap, self._cum(end - TWO_PI), 0.0)
        out = out / TWO_PI
        return out if np.shape(start) else float(out)

    def reciprocal(self):
        return PiecewiseBoundaryWeight(self.pieces, reciprocal=not self._reciprocal)


def as_arc_weight(w):
    if isinstance(w, (PowerArcWeight, GridArcWeight, PiecewiseBoundaryWeight)):
        return w
    if hasattr(w, "arc_integral"):
        return w
    return GridArcWeight(np.asarray(w, dtype=float))


# ---------------------------------------------------------------------------
# measure components
# ---------------------------------------------------------------------------


class DiskAtoms:
    def __init__(self, points, weights):
        self.points = np.asarray(points, dtype=complex)
        self.weights = np.asarray(weights, dtype=float)
        if np.any(self.weights < 0):
            raise DomainError("atom weights must be nonnegative")
        if self.points.size and np.max(np.abs(self.points)) >= 1.0:
            raise DomainError("disk atoms must lie strictly inside the disk")

    def mass(self):
        return float(np.sum(self.weights))

    def window_mass(self, start, length):
        if self.points.size == 0:
            return np.zeros(np.shape(start))
        x = (np.angle(self.points) / TWO_PI) % 1.0
        deep_enough = (1.0 - np.abs(self.points)) <= length / 2.0 + 1e-15
        rel = (x[None, :] - np.atleast_1d(start)[:, None]) % 1.0
        inside = (rel < length) & deep_enough[None, :]
        out = inside @ self.weights
        return out if np.shape(start) else float(out[0])

    def arc_mass(self, start, length):
        return np.zeros(np.shape(start)) if np.shape(start) else 0.0

    def l2(self, fn):
        if self.points.size == 0:
            return 0.0
        return float(np.sum(self.weights * np.abs(fn.interior(self.points)) ** 2))

    def weighted(self, weight):
        w = weight.point(self.points) if self.points.size else np.array([])
        _check_weight_values(w)
        new_w = self.weights * np.asarray(w, dtype=float)
        keep = new_w > 0
        return DiskAtoms(self.points[keep], new_w[keep])

    def scaled(self, t):
        return DiskAtoms(self.points, self.weights * t)

    def to_json(self):
        return [[float(p.real), float(p.imag), float(w)]
                for p, w in zip(self.points, self.weights)]


class BoundaryAC:
    """Absolutely continuous boundary part h dm, backed by an arc-weight object."""

    def __init__(self, weight):
        self.weight = as_arc_weight(weight)

    def mass(self):
        return self.weight.total()

    def window_mass(self, start, length):
        return self.weight.arc_integral(np.asarray(start) * TWO_PI, length)

    arc_mass = window_mass

    def grid_values(self, n):
        return np.asarray(self.weight.values(grid_angles(n)), dtype=float)

    def l2(self, fn):
        if isinstance(self.weight, GridArcWeight):
            n = self.weight.grid.size
            vals = fn.boundary_grid(n)
            return float(np.mean(self.weight.grid * np.abs(vals) ** 2))
        if isinstance(self.weight, PowerArcWeight):
            return _power_l2(self.weight, fn)
        raise AdmissibilityError("no L2 rule for this boundary density type")

    def weighted(self, weight):
        if isinstance(self.weight, GridArcWeight):
            n = self.weight.grid.size
            w = np.asarray(weight.boundary(grid_angles(n)), dtype=float)
            _check_weight_values(w)
            return BoundaryAC(GridArcWeight(self.weight.grid * w))
        if isinstance(self.weight, PowerArcWeight):
            return BoundaryAC(_QuadArcWeight(self.weight, weight.boundary))
        if isinstance(self.weight, _QuadArcWeight):
            first = self.weight.correction
            extra = weight.boundary
            combined = lambda t: np.asarray(first(t), dtype=float) * np.asarray(
                extra(t), dtype=float
            )
            return BoundaryAC(_QuadArcWeight(self.weight.base, combined))
        return BoundaryAC(_QuadArcWeight(self.weight, weight.boundary))

    def scaled(self, t):
        if isinstance(self.weight, GridArcWeight):
            return BoundaryAC(GridArcWeight(self.weight.grid * t))
        if isinstance(self.weight, PowerArcWeight):
            return BoundaryAC(PowerArcWeight(self.weight.gamma, self.weight.scale * t,
                                             self.weight.angle))
        raise ConfigurationError("cannot scale this density type")

    def to_json(self):
        if isinstance(self.weight, GridArcWeight):
            return {"grid": [float(v) for v in self.weight.grid]}
        if isinstance(self.weight, PowerArcWeight):
            return {"power": {"beta": -self.weight.gamma, "scale": self.weight.scale,
                              "singularity_angle": self.weight.angle}}
        raise ConfigurationError("cannot serialize a runtime-weighted density")


class _QuadArcWeight:
    """Power density times a smooth correction; arc integrals by local quadrature.

    A cumulative table on a partition refined geometrically toward the
    singular angle makes batched scan queries cheap; the two singular end
    pieces absorb the power exactly through the substitution v = u^(1+gamma).
    """

    _EPS = 1e-9

    def __init__(self, base, correction):
        if not base.integrable:
            raise WeightingError("cannot weight a non-integrable boundary density")
        self.base = base
        self.correction = correction
        right = np.geomspace(self._EPS, np.pi, 120)
        left = TWO_PI - np.geomspace(self._EPS, np.pi, 120)[::-1]
        self._breaks = np.unique(np.concatenate([[0.0], right, left[1:], [TWO_PI]]))
        pieces = self._segment_integrals(self._breaks[:-1], self._breaks[1:])
        self._prefix = np.concatenate([[0.0], np.cumsum(pieces)])

    def _density_rel(self, u):
        """Density at singularity-relative angle u in (0, 2*pi), without the scale."""
        u = np.asarray(u, dtype=float)
        t = (self.base.angle + u) % TWO_PI
        base = np.abs(2.0 * np.sin(u / 2.0)) ** self.base.gamma
        return base * np.asarray(self.correction(t), dtype=float)

    def _segment_integrals(self, lo, hi):
        """Vectorized integrals over relative segments [lo, hi] in [0, 2*pi]."""
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        out = np.zeros(lo.shape)
        gamma = self.base.gamma
        onep = 1.0 + gamma

        near_zero = lo < self._EPS / 2
        near_full = hi > TWO_PI - self._EPS / 2
        plain = ~near_zero & ~near_full

        if np.any(plain):
            out[plain] = _gl_integrate(self._density_rel, lo[plain], hi[plain])

        def h_right(v):
            u = v ** (1.0 / onep)
            ratio = np.where(u == 0, 1.0, np.abs(2.0 * np.sin(u / 2.0)) / np.where(u == 0, 1.0, u))
            t = (self.base.angle + u) % TWO_PI
            return ratio**gamma * np.asarray(self.correction(t), dtype=float)

        def h_left(v):
            u = v ** (1.0 / onep)
            ratio = np.where(u == 0, 1.0, np.abs(2.0 * np.sin(u / 2.0)) / np.where(u == 0, 1.0, u))
            t = (self.base.angle - u) % TWO_PI
            return ratio**gamma * np.asarray(self.correction(t), dtype=float)

        if np.any(near_zero):
            out[near_zero] = (
                _gl_integrate(h_right, lo[near_zero] ** onep, hi[near_zero] ** onep) / onep
            )
        if np.any(near_full):
            out[near_full] = (
                _gl_integrate(
                    h_left, (TWO_PI - hi[near_full]) ** onep, (TWO_PI - lo[near_full]) ** onep
                )
                / onep
            )
        return self.base.scale * out

    def _cum(self, rel):
        rel = np.clip(np.atleast_1d(np.asarray(rel, dtype=float)), 0.0, TWO_PI)
        idx = np.clip(
            np.searchsorted(self._breaks, rel, side="right") - 1, 0, self._breaks.size - 2
        )
        partial = self._segment_integrals(self._breaks[idx], np.maximum(rel, self._breaks[idx]))
        return self._prefix[idx] + partial

    def values(self, t):
        rel = (np.asarray(t, dtype=float) - self.base.angle) % TWO_PI
        return self._density_rel(rel) * self.base.scale

    def total(self):
        return float(self._prefix[-1]) / TWO_PI

    def arc_integral(self, start, length):
        start = np.asarray(start, dtype=float)
        span = float(length) * TWO_PI
        x1 = (start - self.base.angle) % TWO_PI
        x2 = x1 + span
        out = self._cum(np.minimum(x2, TWO_PI)) - self._cum(x1)
        wrap = x2 > TWO_PI
        if np.any(wrap):
            out = out + np.where(wrap, self._cum(np.maximum(x2 - TWO_PI, 0.0)), 0.0)
        out = out / TWO_PI
        return out if np.shape(start) else float(out[0])


def _power_l2(weight, fn, focus=()):
    """Integral of |f|^2 against a power boundary density by singularity-aware quadrature."""
    t0 = weight.angle
    gamma = weight.gamma

    def integrand(t):
        vals = np.abs(fn.boundary_angles(np.atleast_1d(t))) ** 2
        base = np.abs(2.0 * np.sin((np.atleast_1d(t) - t0) / 2.0)) ** gamma
        return (vals * base)[0] if np.isscalar(t) else vals * base

    points = sorted({t0 % TWO_PI, *[float(f) % TWO_PI for f in getattr(fn, "focus_angles", ())]})
    val = quad(
        integrand, 0.0, TWO_PI, points=points, limit=400, epsabs=1e-12, epsrel=1e-10,
        full_output=True,
    )[0]
    return weight.scale * val / TWO_PI


class SingularAtoms:
    def __init__(self, angles, weights):
        self.angles = np.asarray(angles, dtype=float) % TWO_PI
        self.weights = np.asarray(weights, dtype=float)
        if np.any(self.weights < 0):
            raise DomainError("atom weights must be nonnegative")

    def mass(self):
        return float(np.sum(self.weights))

    def window_mass(self, start, length):
        if self.angles.size == 0:
            return np.zeros(np.shape(start))
        x = self.angles / TWO_PI
        rel = (x[None, :] - np.atleast_1d(start)[:, None]) % 1.0
        inside = rel < length
        out = inside @ self.weights
        return out if np.shape(start) else float(out[0])

    arc_mass = window_mass

    def l2(self, fn):
        if self.angles.size == 0:
            return 0.0
        vals = fn.boundary_angles(self.angles)
        return float(np.sum(self.weights * np.abs(vals) ** 2))

    def weighted(self, weight):
        w = np.asarray(weight.boundary(self.angles), dtype=float) if self.angles.size else np.array([])
        _check_weight_values(w)
        new_w = self.weights * w
        keep = new_w > 0
        return SingularAtoms(self.angles[keep], new_w[keep])

    def scaled(self, t):
        return SingularAtoms(self.angles, self.weights * t)

    def to_json(self):
        return [[float(a), float(w)] for a, w in zip(self.angles, self.weights)]


class RadialPower:
    """Density scale * (1-t)^-beta dt along the ray of the given angle, t in [r0, 1).

    beta < 1 keeps the mass finite.  Window masses have the closed form
    d^(1-beta)/(1-beta); a correction factor (e.g. |a|^2 along the ray) is
    absorbed exactly by the substitution v = (1-t)^(1-beta).
    """

    def __init__(self, angle=0.0, beta=0.5, scale=1.0, r0=0.0, correction=None):
        if beta >= 1.0:
            raise DomainError(
                f"radial exponent beta = {beta} >= 1 gives an infinite measure"
            )
        if not 0.0 <= r0 < 1.0:
            raise DomainError("radial support must start inside [0, 1)")
        self.angle = float(angle) % TWO_PI
        self.beta = float(beta)
        self.scale = float(scale)
        self.r0 = float(r0)
        self.correction = correction

    def _depth_mass(self, depth):
        """Mass of the slice 1 - d <= t < 1 (closed form, or substituted quadrature)."""
        e = np.minimum(np.asarray(depth, dtype=float), 1.0 - self.r0)
        e = np.maximum(e, 0.0)
        onem = 1.0 - self.beta
        if self.correction is None:
            return self.scale * e ** onem / onem
        corr = self.correction
        beta = self.beta

        def h(v):
            t = 1.0 - v ** (1.0 / onem)
            return np.asarray(corr(t), dtype=float)

        return self.scale * _gl_integrate(h, np.zeros_like(e), e ** onem) / onem

    def quadrature_depth_mass(self, depth):
        """Independent quadrature route for the same slice (adaptive, weight-aware)."""
        e = min(float(depth), 1.0 - self.r0)
        if e <= 0:
            return 0.0
        corr = self.correction or (lambda t: np.ones_like(np.asarray(t, dtype=float)))
        val, _ = quad(
            lambda t: float(np.asarray(corr(t), dtype=float)),
            1.0 - e,
            1.0,
            weight="alg",
            wvar=(0.0, -self.beta),
            epsabs=1e-13,
            epsrel=1e-12,
        )
        return self.scale * val

    def mass(self):
        return float(self._depth_mass(1.0 - self.r0))

    def window_mass(self, start, length):
        x = (self.angle / TWO_PI) % 1.0
        rel = (x - np.asarray(start, dtype=float)) % 1.0
        inside = rel < length
        m = self._depth_mass(length / 2.0)
        return np.where(inside, m, 0.0) if np.shape(start) else (float(m) if inside else 0.0)

    def arc_mass(self, start, length):
        return np.zeros(np.shape(start)) if np.shape(start) else 0.0

    def l2(self, fn):
        """Integral of |f|^2 over the ray, by dyadic shells in s = 1 - t.

        On each shell [d 2^(-k-1), d 2^(-k)] the integrand s^-beta |f|^2 has
        bounded variation, so fixed Gauss-Legendre is accurate; shells whose
        contributions stop decaying expose a divergent integral, returned as
        +inf, and a decaying tail is closed by geometric extrapolation.
        """
        direction = np.exp(1j * self.angle)
        corr = self.correction
        beta = self.beta

        def h(s):
            t = 1.0 - s
            vals = np.abs(fn.interior(t * direction)) ** 2 * s ** (-beta)
            if corr is not None:
                vals = vals * np.asarray(corr(t), dtype=float)
            return vals

        d0 = 1.0 - self.r0
        edges = d0 * 0.5 ** np.arange(0, 45)
        shells = _gl_integrate(h, edges[1:], edges[:-1])
        if np.any(~np.isfinite(shells)):
            return np.inf
        tail = shells[-6:]
        if tail[-1] > 0 and np.all(tail[1:] >= 0.9 * tail[:-1]):
            return np.inf
        total = float(np.sum(shells))
        if shells[-1] > 0 and shells[-2] > shells[-1]:
            ratio = shells[-1] / shells[-2]
            total += shells[-1] * ratio / max(1.0 - ratio, 1e-3)
        return self.scale * total

    def weighted(self, weight):
        direction = np.exp(1j * self.angle)
        new = lambda t: np.asarray(weight.point(np.asarray(t) * direction), dtype=float)
        if self.correction is not None:
            old = self.correction
            prev = new
            new = lambda t: np.asarray(old(t), dtype=float) * prev(t)
        probe = new(np.linspace(self.r0, 1.0 - 1e-9, 64))
        _check_weight_values(probe)
        return RadialPower(self.angle, self.beta, self.scale, self.r0, new)

    def scaled(self, t):
        return RadialPower(self.angle, self.beta, self.scale * t, self.r0, self.correction)

    def to_json(self):
        if self.correction is not None:
            raise ConfigurationError("cannot serialize a runtime-weighted radial density")
        return {"angle": self.angle, "power_beta": self.beta, "scale": self.scale}


def _check_weight_values(w):
    w = np.asarray(w, dtype=float)
    if w.size and (np.any(~np.isfinite(w)) or np.any(w < 0)):
        raise WeightingError("weight must be finite and nonnegative on the carrier")


# ---------------------------------------------------------------------------
# windows and the measure itself
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ArcWindow:
    """Open arc given by center angle (radians) and normalized length in (0, 1]."""

    center: float
    length: float

    def __post_init__(self):
        if not 0.0 < self.length <= 1.0:
            raise DomainError("arc length must be normalized into (0, 1]")

    @property
    def start(self):
        """Normalized start position in [0, 1)."""
        return (self.center / TWO_PI - self.length / 2.0) % 1.0

    @property
    def depth(self):
        return self.length / 2.0

    def contains_angle(self, t):
        rel = ((np.asarray(t, dtype=float) / TWO_PI) - self.start) % 1.0
        return rel < self.length

    def contains_point(self, z):
        z = np.asarray(z, dtype=complex)
        return self.contains_angle(np.angle(z)) & (1.0 - np.abs(z) <= self.depth + 1e-15)

    @classmethod
    def from_span(cls, start, length):
        center = (start + length / 2.0) * TWO_PI
        return cls(center, length)


class FunctionOnDisk:
    """Adapter handing a function's interior and declared boundary values to measures."""

    def __init__(self, interior, boundary_angles=None, boundary_grid=None, focus_angles=()):
        self.interior = interior
        self._boundary_angles = boundary_angles
        self._boundary_grid = boundary_grid
        self.focus_angles = tuple(focus_angles)

    @property
    def has_boundary_values(self):
        return self._boundary_angles is not None or self._boundary_grid is not None

    def boundary_angles(self, t):
        if self._boundary_angles is None:
            raise AdmissibilityError("function has no declared boundary values")
        return self._boundary_angles(np.asarray(t, dtype=float))

    def boundary_grid(self, n):
        if self._boundary_grid is not None:
            return self._boundary_grid(n)
        return self.boundary_angles(grid_angles(n))


class DiskMeasure:
    """Finite positive Borel measure on the closed disk, in component form."""

    def __init__(self, disk_atoms=None, ac=None, singular_atoms=None, radial=(), label=None):
        self.disk_atoms = disk_atoms or DiskAtoms([], [])
        self.ac = ac
        self.singular_atoms = singular_atoms or SingularAtoms([], [])
        self.radial = list(radial)
        self.label = label
        total = self.total_mass()
        if not np.isfinite(total):
            raise DomainError("measure must be finite")

    # -- constructors ---------------------------------------------------------

    @classmethod
    def lebesgue(cls, label="lebesgue"):
        return cls(ac=BoundaryAC(PowerArcWeight(0.0, 1.0, 0.0)), label=label)

    @classmethod
    def from_density_grid(cls, values, label=None):
        return cls(ac=BoundaryAC(GridArcWeight(values)), label=label)

    @classmethod
    def boundary_power(cls, beta, scale=1.0, angle=0.0, label=None):
        """d mu = scale |1 - e^(i(t-angle))|^-beta dm; beta < 1 for finiteness."""
        if beta >= 1.0:
            raise DomainError(f"boundary exponent beta = {beta} >= 1 gives an infinite measure")
        return cls(ac=BoundaryAC(PowerArcWeight(-beta, scale, angle)), label=label)

    @classmethod
    def radial_power(cls, beta, scale=1.0, angle=0.0, r0=0.0, label=None):
        return cls(radial=[RadialPower(angle, beta, scale, r0)], label=label)

    @classmethod
    def point_mass(cls, z, weight=1.0, label=None):
        z = complex(z)
        if abs(z) < 1.0:
            return cls(disk_atoms=DiskAtoms([z], [weight]), label=label)
        return cls(singular_atoms=SingularAtoms([np.angle(z)], [weight]), label=label)

    # -- structure ------------------------------------------------------------

    def components(self):
        out = [self.disk_atoms, self.singular_atoms]
        if self.ac is not None:
            out.append(self.ac)
        out.extend(self.radial)
        return out

    def total_mass(self):
        return float(sum(c.mass() for c in self.components()))

    def window_mass(self, window):
        if isinstance(window, ArcWindow):
            start, length = window.start, window.length
        else:
            start, length = window
        return float(sum(np.asarray(c.window_mass(start, length)) for c in self.components()))

    def batch_window_masses(self, starts, length):
        starts = np.asarray(starts, dtype=float)
        out = np.zeros(starts.shape)
        for c in self.components():
            out = out + np.asarray(c.window_mass(starts, length))
        return out

    def arc_mass(self, window):
        if isinstance(window, ArcWindow):
            start, length = window.start, window.length
        else:
            start, length = window
        return float(sum(np.asarray(c.arc_mass(start, length)) for c in self.components()))

    def ac_grid(self, n):
        """Values of d(mu|T)/dm on the n-point grid (zero when there is no a.c. part)."""
        if self.ac is None:
            return np.zeros(n)
        with np.errstate(divide="ignore"):
            return np.asarray(self.ac.weight.values(grid_angles(n)), dtype=float)

    def preferred_grid_size(self):
        if self.ac is not None and isinstance(self.ac.weight, GridArcWeight):
            return self.ac.weight.grid.size
        return None

    def carried_on_boundary(self):
        return (self.ac is not None and self.ac.mass() > 0) or self.singular_atoms.mass() > 0

    # -- operations -------------------------------------------------------------

    def l2_norm(self, fn):
        """L2(mu) norm of the adapted function; may legitimately be +inf."""
        if not isinstance(fn, FunctionOnDisk):
            raise AdmissibilityError("l2_norm expects a FunctionOnDisk adapter")
        boundary_needed = self.carried_on_boundary()
        if boundary_needed and not fn.has_boundary_values:
            raise AdmissibilityError(
                "measure charges the boundary but the function declares no boundary values"
            )
        total = 0.0
        for c in self.components():
            total += c.l2(fn)
            if not np.isfinite(total):
                return np.inf
        return float(np.sqrt(total))

    def weighted(self, weight):
        """Componentwise reweighting d(nu) = w d(mu)."""
        return DiskMeasure(
            disk_atoms=self.disk_atoms.weighted(weight),
            ac=self.ac.weighted(weight) if self.ac is not None else None,
            singular_atoms=self.singular_atoms.weighted(weight),
            radial=[r.weighted(weight) for r in self.radial],
            label=self.label,
        )

    def scaled(self, t):
        if t < 0:
            raise DomainError("scale must be nonnegative")
        return DiskMeasure(
            disk_atoms=self.disk_atoms.scaled(t),
            ac=self.ac.scaled(t) if self.ac is not None else None,
            singular_atoms=self.singular_atoms.scaled(t),
            radial=[r.scaled(t) for r in self.radial],
            label=self.label,
        )

    def plus(self, other):
        if (self.ac is not None) and (other.ac is not None):
            raise ConfigurationError("cannot merge two a.c. parts; combine densities first")
        return DiskMeasure(
            disk_atoms=DiskAtoms(
                np.concatenate([self.disk_atoms.points, other.disk_atoms.points]),
                np.concatenate([self.disk_atoms.weights, other.disk_atoms.weights]),
            ),
            ac=self.ac if self.ac is not None else other.ac,
            singular_atoms=SingularAtoms(
                np.concatenate([self.singular_atoms.angles, other.singular_atoms.angles]),
                np.concatenate([self.singular_atoms.weights, other.singular_atoms.weights]),
            ),
            radial=self.radial + other.radial,
            label=self.label or other.label,
        )

    # -- serialization ------------------------------------------------------------

    def to_json(self):
        doc = {
            "disk_atoms": self.disk_atoms.to_json(),
            "ac_density": self.ac.to_json() if self.ac is not None else None,
            "singular_atoms": self.singular_atoms.to_json(),
            "radial": [r.to_json() for r in self.radial],
        }
        if self.label:
            doc["label"] = self.label
        return doc

    @classmethod
    def from_json(cls, doc):
        atoms = doc.get("disk_atoms") or []
        disk = DiskAtoms([complex(a[0], a[1]) for a in atoms], [a[2] for a in atoms])
        ac_doc = doc.get("ac_density")
        ac = None
        if ac_doc:
            if "grid" in ac_doc:
                ac = BoundaryAC(GridArcWeight(np.asarray(ac_doc["grid"], dtype=float)))
            elif "power" in ac_doc:
                p = ac_doc["power"]
                beta = float(p["beta"])
                if beta >= 1.0:
                    raise DomainError("boundary power beta >= 1 gives an infinite measure")
                ac = BoundaryAC(
                    PowerArcWeight(-beta, float(p.get("scale", 1.0)),
                                   float(p.get("singularity_angle", 0.0)))
                )
            else:
                raise ConfigurationError(f"unknown ac_density form: {sorted(ac_doc)}")
        sing = doc.get("singular_atoms") or []
        singular = SingularAtoms([s[0] for s in sing], [s[1] for s in sing])
        radial = [
            RadialPower(float(r.get("angle", 0.0)), float(r["power_beta"]),
                        float(r.get("scale", 1.0)), float(r.get("r0", 0.0)))
            for r in (doc.get("radial") or [])
        ]
        return cls(disk_atoms=disk, ac=ac, singular_atoms=singular, radial=radial,
                   label=doc.get("label"))


class PairWeight:
    """Bundle of boundary/point callables used by DiskMeasure.weighted."""

    def __init__(self, boundary, point):
        self.boundary = boundary
        self.point = point

    @classmethod
    def constant(cls, c):
        return cls(lambda t: np.full(np.shape(t), float(c)),
                   lambda z: np.full(np.shape(z), float(c)))


def window_mass(measure, window):
    """Mass of the Carleson window over the arc."""
    return measure.window_mass(window)


def weight_measure(measure, weight):
    """d(nu) = w d(mu) with w a PairWeight (boundary and interior callables)."""
    return measure.weighted(weight)


def l2mu_norm(fn, measure):
    """L2(mu) norm of an adapted function; +inf is a legal value."""
    return measure.l2_norm(fn)
