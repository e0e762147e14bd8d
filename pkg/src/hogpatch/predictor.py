"""ADER predictor (temporal mode) and SSP Runge-Kutta stages.

The temporal mode stores ``dt`` times the zone's rate of change, so the
corrector can add half of it to obtain mid-step face states.
"""

from __future__ import annotations

from enum import Enum

import numpy as np
from numba import njit

from .corrector import face_extrapolation, make_du_dt, make_fluxes
from .errors import ConfigurationError, UnphysicalStateError
from .euler import AIR, GasModel, check_physical, flux_point, physical_flux, pressure
from .profiling import null_timer
from .mesh import AVG, ModalState, PatchGeometry, SkinnyState
from .reconstruction import DEFAULT_LIMITER, reconstruct


class IntegratorChoice(str, Enum):
    ADER = "ader"
    RK2 = "rk2"
    RK3 = "rk3"


# (weight of U^n, weight of the stage update) for each Shu-Osher stage
STAGE_COEFFICIENTS = {
    IntegratorChoice.ADER: ((0.0, 1.0),),
    IntegratorChoice.RK2: ((0.0, 1.0), (0.5, 0.5)),
    IntegratorChoice.RK3: ((0.0, 1.0), (0.75, 0.25), (1.0 / 3.0, 2.0 / 3.0)),
}


def integrator(kind) -> IntegratorChoice:
    try:
        return IntegratorChoice(kind)
    except ValueError:
        raise ConfigurationError(f"unknown integrator {kind!r}") from None


def _flux_divergence(zone, spacing, gas, shift=None):
    total = 0.0
    for axis in range(3):
        east = face_extrapolation(zone, axis, +1)
        west = face_extrapolation(zone, axis, -1)
        if shift is not None:
            east += shift
            west += shift
        total = total + (physical_flux(east, axis, gas, "predictor")
                         - physical_flux(west, axis, gas, "predictor")) / spacing[axis]
    return total


def temporal_mode(zone, dt, dx, dy, dz, gas: GasModel = AIR):
    """Predicted full-step change of the zone average for a ``(..., 5, M)`` block.

    The temporal mode of ``zone`` is ignored. At order 3 (M = 11) the
    face fluxes are re-evaluated once with the face states advanced by half
    the first estimate.
    """
    spacing = (dx, dy, dz)
    n_modes = zone.shape[-1]
    work = zone.copy()
    work[..., n_modes - 1] = 0.0
    change = -dt * _flux_divergence(work, spacing, gas)
    if n_modes > 5:
        change = -dt * _flux_divergence(work, spacing, gas, shift=0.5 * change)
    return change


def predictor_ptwise(zone, dt, dx, dy, dz, gas: GasModel = AIR):
    """Return a copy of the zone block with its temporal mode filled."""
    out = np.array(zone, dtype=float)
    out[..., -1] = temporal_mode(out, dt, dx, dy, dz, gas)
    return out


@njit(cache=True)
def _face_divergence(v, k, j, i, spacing, gamma, shift, east, west, fe, fw, total):
    """Accumulate sum_a (F(east_a) - F(west_a)) / d_a into ``total``; False if unphysical."""
    n_modes = v.shape[4]
    for n in range(5):
        total[n] = 0.0
    for axis in range(3):
        for n in range(5):
            base = v[k, j, i, n, 0] + 0.0
            if n_modes > 5:
                base += v[k, j, i, n, 4 + axis] / 6.0
            half = 0.5 * v[k, j, i, n, 1 + axis]
            east[n] = base + half + shift[n]
            west[n] = base - half + shift[n]
        ok_e, _, _ = flux_point(east, axis, gamma, fe)
        ok_w, _, _ = flux_point(west, axis, gamma, fw)
        if not (ok_e and ok_w):
            return False
        for n in range(5):
            total[n] = total[n] + (fe[n] - fw[n]) / spacing[axis]
    return True


@njit(cache=True)
def _predict_kernel(v, bounds, dt, spacing, gamma):
    n_modes = v.shape[4]
    tm = n_modes - 1
    east = np.empty(5)
    west = np.empty(5)
    fe = np.empty(5)
    fw = np.empty(5)
    total = np.empty(5)
    shift = np.zeros(5)
    status = np.zeros(4, dtype=np.int64)
    for k in range(bounds[0, 0], bounds[0, 1]):
        for j in range(bounds[1, 0], bounds[1, 1]):
            for i in range(bounds[2, 0], bounds[2, 1]):
                for n in range(5):
                    shift[n] = 0.0
                ok = _face_divergence(v, k, j, i, spacing, gamma, shift,
                                      east, west, fe, fw, total)
                if ok and n_modes > 5:
                    for n in range(5):
                        shift[n] = 0.5 * (-dt * total[n])
                    ok = _face_divergence(v, k, j, i, spacing, gamma, shift,
                                          east, west, fe, fw, total)
                if not ok:
                    status[0] = 1
                    status[1] = k
                    status[2] = j
                    status[3] = i
                    return status
                for n in range(5):
                    v[k, j, i, n, tm] = -dt * total[n]
    return status


def predict_patch(modal: ModalState, dt: float, geom: PatchGeometry, gas: GasModel = AIR):
    """Fill the temporal mode on the active zones plus one ring."""
    bounds = np.array([[r.start, r.stop] for r in geom.ring(1)], dtype=np.int64)
    status = _predict_kernel(modal.values, bounds, float(dt), np.array(geom.spacing, dtype=float),
                             gas.gamma)
    if status[0]:
        raise UnphysicalStateError("unphysical face state in predictor",
                                   location=tuple(int(i) for i in status[1:]),
                                   context="predictor")
    return modal


def predict_patch_arrays(modal: ModalState, dt: float, geom: PatchGeometry, gas: GasModel = AIR):
    """Array formulation of :func:`predict_patch`, kept as a cross-check."""
    ring = geom.ring(1)
    block = modal.values[ring]
    try:
        change = temporal_mode(block, dt, geom.dx, geom.dy, geom.dz, gas)
    except UnphysicalStateError as exc:
        loc = None
        if exc.location is not None:
            loc = tuple(int(i) + r.start for i, r in zip(exc.location, ring))
        raise UnphysicalStateError("unphysical face state in predictor",
                                   location=loc, context="predictor") from exc
    modal.values[ring + (slice(None), modal.time_mode)] = change
    return modal


def rk_substep(modal: ModalState, skinny: SkinnyState, u_start, stage: int, kind,
               dt: float, geom: PatchGeometry, gas: GasModel = AIR, solver="hll",
               stats=None, limiter=DEFAULT_LIMITER, timer=null_timer):
    """One Shu-Osher stage on a boundary-filled modal state.

    ``u_start`` is the active-zone state at the beginning of the step. The
    new stage value ``a * u_start + b * (u + dt L(u))`` is written to mode 0
    and the skinny state; it is also returned.
    """
    kind = integrator(kind)
    if kind is IntegratorChoice.ADER:
        raise ConfigurationError("rk_substep requires rk2 or rk3")
    a, b = STAGE_COEFFICIENTS[kind][stage]
    with timer("reconstruct"):
        reconstruct(modal, geom, limiter)
    modal.values[..., modal.time_mode] = 0.0
    with timer("flux"):
        fluxes = make_fluxes(modal, geom, solver, gas, stats)
    with timer("rate"):
        rate = make_du_dt(fluxes, dt, geom)
    with timer("update"):
        act = geom.active()
        avg = modal.values[act + (slice(None), AVG)]
        new = b * (avg + rate.du_dt)
        if a != 0.0:
            new += a * u_start
        avg[...] = new
        skinny.values[act] = new
        check_physical(new[..., 0], pressure(new, gas), "rk stage")
    return new
