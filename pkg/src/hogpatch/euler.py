"""Ideal-gas Euler equations: closure, directional fluxes, signal speeds.

Every function takes arrays whose last axis holds the conserved variables
``(rho, mx, my, mz, E)`` (or primitives ``(rho, u, v, w, p)``); leading axes
are arbitrary so the same code serves a single zone and a whole patch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConfigurationError, UnphysicalStateError


@dataclass(frozen=True)
class GasModel:
    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ConfigurationError(f"gamma must exceed 1, got {self.gamma}")


AIR = GasModel()


def check_physical(rho, p, context=None):
    """Raise if any density or pressure is non-positive (or NaN)."""
    ok = (rho > 0.0) & (p > 0.0)
    if not ok.all():
        bad = np.unravel_index(np.argmin(ok), np.shape(ok))
        raise UnphysicalStateError(
            f"non-positive density or pressure (rho={np.asarray(rho)[bad]!r}, "
            f"p={np.asarray(p)[bad]!r})", location=bad, context=context)


def pressure(u, gas: GasModel = AIR):
    rho = u[..., 0]
    # a zero density yields inf/nan here; check_physical reports it
    with np.errstate(divide="ignore", invalid="ignore"):
        kinetic = 0.5 * (u[..., 1] ** 2 + u[..., 2] ** 2 + u[..., 3] ** 2) / rho
    return (gas.gamma - 1.0) * (u[..., 4] - kinetic)


def cons_to_prim(u, gas: GasModel = AIR, context=None):
    u = np.asarray(u, dtype=float)
    rho = u[..., 0]
    p = pressure(u, gas)
    check_physical(rho, p, context)
    w = np.empty_like(u)
    w[..., 0] = rho
    w[..., 1:4] = u[..., 1:4] / rho[..., None]
    w[..., 4] = p
    return w


def prim_to_cons(w, gas: GasModel = AIR):
    w = np.asarray(w, dtype=float)
    rho = w[..., 0]
    vel = w[..., 1:4]
    u = np.empty_like(w)
    u[..., 0] = rho
    u[..., 1:4] = rho[..., None] * vel
    u[..., 4] = w[..., 4] / (gas.gamma - 1.0) + 0.5 * rho * np.sum(vel * vel, axis=-1)
    return u


def flux_and_speeds(u, axis: int, gas: GasModel = AIR, context=None):
    """Physical flux along ``axis`` plus normal velocity and sound speed."""
    rho = u[..., 0]
    p = pressure(u, gas)
    check_physical(rho, p, context)
    vn = u[..., 1 + axis] / rho
    f = u * vn[..., None]
    f[..., 1 + axis] += p
    f[..., 4] += p * vn
    c = np.sqrt(gas.gamma * p / rho)
    return f, vn, c


def physical_flux(u, axis: int, gas: GasModel = AIR, context=None):
    """Euler flux along ``axis`` (0=x, 1=y, 2=z)."""
    return flux_and_speeds(np.asarray(u, dtype=float), axis, gas, context)[0]


def sound_speed(u, gas: GasModel = AIR):
    rho = u[..., 0]
    p = pressure(u, gas)
    check_physical(rho, p)
    return np.sqrt(gas.gamma * p / rho)


def max_signal_speed(u, axis: int, gas: GasModel = AIR):
    """``|v_axis| + c``, the fastest signal speed along ``axis``."""
    u = np.asarray(u, dtype=float)
    return np.abs(u[..., 1 + axis] / u[..., 0]) + sound_speed(u, gas)


def eval_tstep_ptwise(u, cfl, dx, dy, dz, gas: GasModel = AIR):
    """Largest stable timestep per zone: ``cfl / sum_a(s_a / d_a)``."""
    u = np.asarray(u, dtype=float)
    rho = u[..., 0]
    c = sound_speed(u, gas)
    inv = ((np.abs(u[..., 1]) / rho + c) / dx
           + (np.abs(u[..., 2]) / rho + c) / dy
           + (np.abs(u[..., 3]) / rho + c) / dz)
    return cfl / inv


# --- compiled single-point helpers used by the zone and face loops ---------

@njit(cache=True)
def flux_point(u, axis, gamma, f):
    """Flux of one conserved state into ``f``; returns (ok, v_normal, c)."""
    rho = u[0]
    p = (gamma - 1.0) * (u[4] - 0.5 * (u[1] ** 2 + u[2] ** 2 + u[3] ** 2) / rho)
    if not (rho > 0.0 and p > 0.0):
        return False, 0.0, 0.0
    vn = u[1 + axis] / rho
    for k in range(5):
        f[k] = u[k] * vn
    f[1 + axis] += p
    f[4] += p * vn
    return True, vn, np.sqrt(gamma * p / rho)
