"""Spatial reconstruction: MC-limited slopes (order 2) and WENO (order 3).

All slopes and curvatures are undivided, i.e. measured per zone index. At
order 3 each zone carries the polynomial

    u0 + ux*xi + uy*eta + uz*zeta
       + uxx*(xi**2 - 1/12) + uyy*(eta**2 - 1/12) + uzz*(zeta**2 - 1/12)
       + uxy*xi*eta + uyz*eta*zeta + uzx*zeta*xi

on the unit zone ``xi, eta, zeta in [-1/2, 1/2]``, so every mode but the
average integrates to zero over the zone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConfigurationError
from .mesh import AVG, CURV, NVAR, SLOPE, XY, YZ, ZX, ModalState, PatchGeometry, array_axis


@dataclass(frozen=True)
class LimiterConfig:
    compression_factor_density: float = 2.0
    compression_factor_other: float = 1.5
    weno_epsilon: float = 1e-12
    weno_linear_weights: tuple[float, float, float] = (0.25, 0.5, 0.25)

    def __post_init__(self):
        for cf in (self.compression_factor_density, self.compression_factor_other):
            if not 1.0 <= cf <= 2.0:
                raise ConfigurationError(f"compression factor {cf} outside [1, 2]")
        w = self.weno_linear_weights
        if len(w) != 3 or min(w) < 0.0 or abs(sum(w) - 1.0) > 1e-14:
            raise ConfigurationError(f"WENO linear weights {w} must be 3 nonnegative values summing to 1")
        if not self.weno_epsilon > 0.0:
            raise ConfigurationError("weno_epsilon must be positive")

    @property
    def compression_factors(self) -> np.ndarray:
        cf = np.full(NVAR, self.compression_factor_other)
        cf[0] = self.compression_factor_density
        return cf


DEFAULT_LIMITER = LimiterConfig()


def mc_limiter(a, b, cfac):
    """Monotonized-central limiter with compression factor ``cfac``.

    Returns ``min(|a+b|/2, cfac|a|, cfac|b|)`` carrying the common sign of
    ``a`` and ``b``, and zero when they disagree in sign.
    """
    mag = np.minimum(np.minimum(0.5 * np.abs(a + b), cfac * np.abs(a)), cfac * np.abs(b))
    # Fortran SIGN(0.5, x): +0.5 for x >= 0
    return mag * (np.where(a >= 0.0, 0.5, -0.5) + np.where(b >= 0.0, 0.5, -0.5))


def _shift(region, ax, k):
    sl = region[ax]
    out = list(region)
    out[ax] = slice(sl.start + k, sl.stop + k)
    return tuple(out)


def _bounds(region):
    return np.array([[r.start, r.stop] for r in region], dtype=np.int64)


@njit(cache=True)
def _mc_kernel(v, bounds, cfac):
    """MC slopes of mode 0 along all three axes over ``bounds`` (z, y, x)."""
    for k in range(bounds[0, 0], bounds[0, 1]):
        for j in range(bounds[1, 0], bounds[1, 1]):
            for i in range(bounds[2, 0], bounds[2, 1]):
                for n in range(v.shape[3]):
                    c = v[k, j, i, n, 0]
                    cf = cfac[n]
                    for axis in range(3):
                        if axis == 0:
                            up, dn = v[k, j, i + 1, n, 0], v[k, j, i - 1, n, 0]
                        elif axis == 1:
                            up, dn = v[k, j + 1, i, n, 0], v[k, j - 1, i, n, 0]
                        else:
                            up, dn = v[k + 1, j, i, n, 0], v[k - 1, j, i, n, 0]
                        a = up - c
                        b = c - dn
                        mag = min(0.5 * abs(a + b), cf * abs(a), cf * abs(b))
                        sa = 0.5 if a >= 0.0 else -0.5
                        sb = 0.5 if b >= 0.0 else -0.5
                        v[k, j, i, n, 1 + axis] = mag * (sa + sb)


@njit(cache=True)
def _weno_point(um2, um1, u0, up1, up2, eps, g_l, g_c, g_r):
    a_l = 0.5 * (3.0 * u0 - 4.0 * um1 + um2)
    c_l = 0.5 * (um2 - 2.0 * um1 + u0)
    a_c = 0.5 * (up1 - um1)
    c_c = 0.5 * (up1 - 2.0 * u0 + um1)
    a_r = 0.5 * (-3.0 * u0 + 4.0 * up1 - up2)
    c_r = 0.5 * (u0 - 2.0 * up1 + up2)
    b_l = eps + a_l * a_l + (13.0 / 3.0) * c_l * c_l
    b_c = eps + a_c * a_c + (13.0 / 3.0) * c_c * c_c
    b_r = eps + a_r * a_r + (13.0 / 3.0) * c_r * c_r
    w_l = g_l / (b_l * b_l)
    w_c = g_c / (b_c * b_c)
    w_r = g_r / (b_r * b_r)
    norm = 1.0 / (w_l + w_c + w_r)
    return (w_l * a_l + w_c * a_c + w_r * a_r) * norm, (w_l * c_l + w_c * c_c + w_r * c_r) * norm


@njit(cache=True)
def _slope_kernel(u, ax, bounds, eps, g_l, g_c, g_r, slope, curv):
    """WENO slope and curvature along array axis ``ax`` of a ``(z, y, x, var)`` field."""
    dk = 1 if ax == 0 else 0
    dj = 1 if ax == 1 else 0
    di = 1 if ax == 2 else 0
    for k in range(bounds[0, 0], bounds[0, 1]):
        for j in range(bounds[1, 0], bounds[1, 1]):
            for i in range(bounds[2, 0], bounds[2, 1]):
                for n in range(u.shape[3]):
                    s, c = _weno_point(
                        u[k - 2 * dk, j - 2 * dj, i - 2 * di, n],
                        u[k - dk, j - dj, i - di, n], u[k, j, i, n],
                        u[k + dk, j + dj, i + di, n],
                        u[k + 2 * dk, j + 2 * dj, i + 2 * di, n],
                        eps, g_l, g_c, g_r)
                    slope[k, j, i, n] = s
                    curv[k, j, i, n] = c


@njit(cache=True)
def _o3_kernel(v, ring, eps, g_l, g_c, g_r, sx, sy, sz, curv):
    """Slope, curvature and cross modes of each ring zone, written in one sweep.

    ``sx``, ``sy``, ``sz`` hold the slopes along x, y, z two zones beyond the
    ring in the direction their cross mode differentiates them. The axes are
    spelled out: a runtime axis index here costs a factor of three.
    """
    for k in range(ring[0, 0], ring[0, 1]):
        for j in range(ring[1, 0], ring[1, 1]):
            for i in range(ring[2, 0], ring[2, 1]):
                for n in range(v.shape[3]):
                    v[k, j, i, n, SLOPE[0]] = sx[k, j, i, n]
                    v[k, j, i, n, SLOPE[1]] = sy[k, j, i, n]
                    v[k, j, i, n, SLOPE[2]] = sz[k, j, i, n]
                    v[k, j, i, n, CURV[0]] = curv[0, k, j, i, n]
                    v[k, j, i, n, CURV[1]] = curv[1, k, j, i, n]
                    v[k, j, i, n, CURV[2]] = curv[2, k, j, i, n]
                    # cross modes: x of the y-slope, y of the z-slope, z of the x-slope
                    v[k, j, i, n, XY] = _weno_point(
                        sy[k, j, i - 2, n], sy[k, j, i - 1, n], sy[k, j, i, n],
                        sy[k, j, i + 1, n], sy[k, j, i + 2, n], eps, g_l, g_c, g_r)[0]
                    v[k, j, i, n, YZ] = _weno_point(
                        sz[k, j - 2, i, n], sz[k, j - 1, i, n], sz[k, j, i, n],
                        sz[k, j + 1, i, n], sz[k, j + 2, i, n], eps, g_l, g_c, g_r)[0]
                    v[k, j, i, n, ZX] = _weno_point(
                        sx[k - 2, j, i, n], sx[k - 1, j, i, n], sx[k, j, i, n],
                        sx[k + 1, j, i, n], sx[k + 2, j, i, n], eps, g_l, g_c, g_r)[0]


def limit_patch_o2(modal: ModalState, geom: PatchGeometry, cfg: LimiterConfig = DEFAULT_LIMITER):
    """Fill the three linear modes on the active zones plus one ring."""
    _mc_kernel(modal.values, _bounds(geom.ring(1)), cfg.compression_factors)
    return modal


def limit_patch_o2_arrays(modal: ModalState, geom: PatchGeometry,
                          cfg: LimiterConfig = DEFAULT_LIMITER):
    """Array formulation of :func:`limit_patch_o2`, kept as a cross-check."""
    v = modal.values
    u = v[..., AVG]
    region = geom.ring(1)
    cfac = cfg.compression_factors
    centre = u[region]
    for axis in range(3):
        ax = array_axis(axis)
        fwd = u[_shift(region, ax, 1)] - centre
        bwd = centre - u[_shift(region, ax, -1)]
        v[region + (slice(None), SLOPE[axis])] = mc_limiter(fwd, bwd, cfac)
    return modal


def weno3(u, ax, region, cfg: LimiterConfig = DEFAULT_LIMITER):
    """Third-order WENO slope and curvature along array axis ``ax``.

    ``u`` holds zone averages; ``region`` selects the target zones and must
    leave two zones of valid data on each side along ``ax``. Returns the
    undivided linear and quadratic coefficients on ``region``.
    """
    um2 = u[_shift(region, ax, -2)]
    um1 = u[_shift(region, ax, -1)]
    u0 = u[region]
    up1 = u[_shift(region, ax, 1)]
    up2 = u[_shift(region, ax, 2)]

    a_l = 0.5 * (3.0 * u0 - 4.0 * um1 + um2)
    c_l = 0.5 * (um2 - 2.0 * um1 + u0)
    a_c = 0.5 * (up1 - um1)
    c_c = 0.5 * (up1 - 2.0 * u0 + um1)
    a_r = 0.5 * (-3.0 * u0 + 4.0 * up1 - up2)
    c_r = 0.5 * (u0 - 2.0 * up1 + up2)

    eps = cfg.weno_epsilon
    g_l, g_c, g_r = cfg.weno_linear_weights
    w_l = g_l / (eps + a_l * a_l + (13.0 / 3.0) * c_l * c_l) ** 2
    w_c = g_c / (eps + a_c * a_c + (13.0 / 3.0) * c_c * c_c) ** 2
    w_r = g_r / (eps + a_r * a_r + (13.0 / 3.0) * c_r * c_r) ** 2
    norm = 1.0 / (w_l + w_c + w_r)
    slope = (w_l * a_l + w_c * a_c + w_r * a_r) * norm
    curv = (w_l * c_l + w_c * c_c + w_r * c_r) * norm
    return slope, curv


def _widen(region, ax, k):
    out = list(region)
    out[ax] = slice(region[ax].start - k, region[ax].stop + k)
    return tuple(out)


def reconstruct_patch_o3(modal: ModalState, geom: PatchGeometry,
                         cfg: LimiterConfig = DEFAULT_LIMITER):
    """Fill linear, quadratic and cross modes on the active zones plus one ring."""
    if geom.ghost < 3:
        raise ConfigurationError("order-3 reconstruction needs ghost width 3")
    v = modal.values
    u = np.ascontiguousarray(v[..., AVG])
    ring = geom.ring(1)
    # slopes are needed two zones beyond the ring in the direction the
    # cross mode differentiates them: y-slope along x, z along y, x along z
    slopes = np.empty((3,) + u.shape)
    curv = np.empty((3,) + u.shape)
    eps = cfg.weno_epsilon
    g = cfg.weno_linear_weights
    for a in range(3):
        wide = _widen(ring, array_axis((a + 2) % 3), 2)
        _slope_kernel(u, array_axis(a), _bounds(wide), eps, *g, slopes[a], curv[a])
    _o3_kernel(v, _bounds(ring), eps, *g, slopes[0], slopes[1], slopes[2], curv)
    return modal


def reconstruct_patch_o3_arrays(modal: ModalState, geom: PatchGeometry,
                                cfg: LimiterConfig = DEFAULT_LIMITER):
    """Array formulation of :func:`reconstruct_patch_o3`, kept as a cross-check."""
    if geom.ghost < 3:
        raise ConfigurationError("order-3 reconstruction needs ghost width 3")
    v = modal.values
    u = v[..., AVG]
    ring = geom.ring(1)
    for axis in range(3):
        slope, curv = weno3(u, array_axis(axis), ring, cfg)
        v[ring + (slice(None), SLOPE[axis])] = slope
        v[ring + (slice(None), CURV[axis])] = curv

    # cross mode = derivative along `along` of the slope along `of`
    for target, along, of in ((XY, 0, 1), (YZ, 1, 2), (ZX, 2, 0)):
        ax = array_axis(along)
        wide = list(ring)
        wide[ax] = slice(ring[ax].start - 2, ring[ax].stop + 2)
        slope_of, _ = weno3(u, array_axis(of), tuple(wide), cfg)
        inner = [slice(None)] * 3
        inner[ax] = slice(2, slope_of.shape[ax] - 2)
        v[ring + (slice(None), target)] = weno3(slope_of, ax, tuple(inner), cfg)[0]
    return modal


def reconstruct(modal: ModalState, geom: PatchGeometry, cfg: LimiterConfig = DEFAULT_LIMITER):
    if modal.order == 2:
        return limit_patch_o2(modal, geom, cfg)
    return reconstruct_patch_o3(modal, geom, cfg)
