"""Approximate Riemann solvers returning upwind face fluxes.

A solver is a function ``(left, right, axis, gas, stats) -> flux`` acting on
``(..., 5)`` arrays of conserved face states. New kinds (HLLC, ...) are added
through :func:`register_solver` without touching the corrector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import ConfigurationError
from .euler import AIR, GasModel, flux_and_speeds, flux_point


@dataclass
class RiemannStats:
    """Counters shared by a run: face solves performed and degenerate HLL fans."""

    face_solves: int = 0
    degenerate_fans: int = 0

    def merge(self, other: "RiemannStats") -> None:
        self.face_solves += other.face_solves
        self.degenerate_fans += other.degenerate_fans


def _count(stats, left):
    if stats is not None:
        stats.face_solves += left.size // left.shape[-1]


def rusanov_flux(left, right, axis: int, gas: GasModel = AIR, stats=None):
    """Local Lax-Friedrichs flux with the larger of the two signal speeds."""
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    fl, vl, cl = flux_and_speeds(left, axis, gas, "riemann left state")
    fr, vr, cr = flux_and_speeds(right, axis, gas, "riemann right state")
    smax = np.maximum(np.abs(vl) + cl, np.abs(vr) + cr)
    _count(stats, left)
    return 0.5 * (fl + fr) - 0.5 * smax[..., None] * (right - left)


def hll_flux(left, right, axis: int, gas: GasModel = AIR, stats=None):
    """HLL flux with Davis wave-speed bounds."""
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    fl, vl, cl = flux_and_speeds(left, axis, gas, "riemann left state")
    fr, vr, cr = flux_and_speeds(right, axis, gas, "riemann right state")
    sl = np.minimum(vl - cl, vr - cr)
    sr = np.maximum(vl + cl, vr + cr)
    _count(stats, left)

    width = sr - sl
    degenerate = width <= 0.0
    if degenerate.any():
        if stats is not None:
            stats.degenerate_fans += int(np.count_nonzero(degenerate))
        width = np.where(degenerate, 1.0, width)
    sl_ = sl[..., None]
    sr_ = sr[..., None]
    fan = (sr_ * fl - sl_ * fr + sl_ * sr_ * (right - left)) / width[..., None]
    out = np.where(sl_ >= 0.0, fl, np.where(sr_ <= 0.0, fr, fan))
    if degenerate.any():
        out = np.where(degenerate[..., None], 0.5 * (fl + fr), out)
    return out


_SOLVERS = {"rusanov": rusanov_flux, "hll": hll_flux}


def register_solver(name: str, func) -> None:
    _SOLVERS[name] = func


def get_solver(name: str):
    try:
        return _SOLVERS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown Riemann solver {name!r}; known: {sorted(_SOLVERS)}") from None


def available_solvers() -> list[str]:
    return sorted(_SOLVERS)


# --- compiled single-face solvers used by the corrector's face loop --------

KERNEL_KINDS = {"rusanov": 0, "hll": 1}
OK, UNPHYSICAL, DEGENERATE = 0, 1, 2


@njit(cache=True)
def riemann_point(kind, ul, ur, axis, gamma, fl, fr, out):
    """Flux for one face into ``out``; returns OK, UNPHYSICAL or DEGENERATE."""
    ok_l, vl, cl = flux_point(ul, axis, gamma, fl)
    ok_r, vr, cr = flux_point(ur, axis, gamma, fr)
    if not (ok_l and ok_r):
        return UNPHYSICAL
    if kind == 0:
        smax = max(abs(vl) + cl, abs(vr) + cr)
        for k in range(5):
            out[k] = 0.5 * (fl[k] + fr[k]) - 0.5 * smax * (ur[k] - ul[k])
        return OK
    sl = min(vl - cl, vr - cr)
    sr = max(vl + cl, vr + cr)
    if sr - sl <= 0.0:
        for k in range(5):
            out[k] = 0.5 * (fl[k] + fr[k])
        return DEGENERATE
    if sl >= 0.0:
        for k in range(5):
            out[k] = fl[k]
    elif sr <= 0.0:
        for k in range(5):
            out[k] = fr[k]
    else:
        for k in range(5):
            out[k] = (sr * fl[k] - sl * fr[k] + sl * sr * (ur[k] - ul[k])) / (sr - sl)
    return OK
