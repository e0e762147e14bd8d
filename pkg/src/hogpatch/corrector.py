"""Face fluxes, flux differencing and the conservative update."""

from __future__ import annotations

import numpy as np
from numba import njit

from .errors import UnphysicalStateError
from .euler import AIR, GasModel, eval_tstep_ptwise, pressure, check_physical
from .mesh import (AVG, CURV, SLOPE, FaceFluxField, ModalState, PatchGeometry,
                   RateField, SkinnyState, TimeState, AXIS_NAMES, array_axis)
from .riemann import DEGENERATE, KERNEL_KINDS, UNPHYSICAL, get_solver, riemann_point

DT_SEED = 1.0e32


def face_extrapolation(zone, axis: int, side: int):
    """Space-time face value of a zone block on its ``side`` (+1/-1) face.

    ``zone`` is ``(..., 5, M)``; the result is mode 0 plus half the normal
    slope (signed), the normal curvature at order 3, and half the temporal
    mode, i.e. the face average at mid-step.
    """
    n_modes = zone.shape[-1]
    out = zone[..., AVG] + 0.5 * zone[..., n_modes - 1]
    if n_modes > 5:
        out += zone[..., CURV[axis]] / 6.0
    if side > 0:
        out += 0.5 * zone[..., SLOPE[axis]]
    else:
        out -= 0.5 * zone[..., SLOPE[axis]]
    return out


@njit(cache=True)
def _flux_loop(v, axis, g, kind, gamma, out):
    """Face loop: extrapolate both neighbours, solve, store. Returns status."""
    n_modes = v.shape[4]
    tm = n_modes - 1
    slope = 1 + axis
    curv = 4 + axis
    ul = np.empty(5)
    ur = np.empty(5)
    fl = np.empty(5)
    fr = np.empty(5)
    f = np.empty(5)
    status = np.zeros(5, dtype=np.int64)  # code, k, j, i, degenerate count
    nk, nj, ni = out.shape[0], out.shape[1], out.shape[2]
    dk = 1 if axis == 2 else 0
    dj = 1 if axis == 1 else 0
    di = 1 if axis == 0 else 0
    for k in range(nk):
        for j in range(nj):
            for i in range(ni):
                kr, jr, ir = k + g, j + g, i + g
                kl, jl, il = kr - dk, jr - dj, ir - di
                for n in range(5):
                    a = v[kl, jl, il, n, 0] + 0.5 * v[kl, jl, il, n, tm]
                    b = v[kr, jr, ir, n, 0] + 0.5 * v[kr, jr, ir, n, tm]
                    if n_modes > 5:
                        a += v[kl, jl, il, n, curv] / 6.0
                        b += v[kr, jr, ir, n, curv] / 6.0
                    ul[n] = a + 0.5 * v[kl, jl, il, n, slope]
                    ur[n] = b - 0.5 * v[kr, jr, ir, n, slope]
                code = riemann_point(kind, ul, ur, axis, gamma, fl, fr, f)
                if code == UNPHYSICAL:
                    status[0] = UNPHYSICAL
                    status[1] = k
                    status[2] = j
                    status[3] = i
                    return status
                if code == DEGENERATE:
                    status[4] += 1
                for n in range(5):
                    out[k, j, i, n] = f[n]
    return status


def _face_shape(geom, axis):
    shape = list(geom.active_shape)
    shape[array_axis(axis)] += 1
    return tuple(shape) + (5,)


def make_flux_axis(modal: ModalState, axis: int, geom: PatchGeometry, solver="hll",
                   gas: GasModel = AIR, stats=None) -> np.ndarray:
    """Riemann fluxes on every face along ``axis`` bounding an active zone.

    Returns an array with one more face than zones along ``axis`` and the
    active range transversally. Built-in solvers run in a compiled face
    loop; any other registered solver goes through the array path.
    """
    if isinstance(solver, str) and solver in KERNEL_KINDS:
        out = np.empty(_face_shape(geom, axis))
        status = _flux_loop(modal.values, axis, geom.ghost, KERNEL_KINDS[solver],
                            gas.gamma, out)
        if status[0] == UNPHYSICAL:
            raise UnphysicalStateError(
                "unphysical face state", location=tuple(status[1:4]),
                context=f"{AXIS_NAMES[axis]}-face flux")
        if stats is not None:
            stats.face_solves += out.size // 5
            stats.degenerate_fans += int(status[4])
        return out
    return _make_flux_axis_arrays(modal, axis, geom, solver, gas, stats)


def _make_flux_axis_arrays(modal, axis, geom, solver, gas, stats):
    solve = get_solver(solver) if isinstance(solver, str) else solver
    v = modal.values
    g = geom.ghost
    ax = array_axis(axis)
    n = geom.n[axis]
    left = list(geom.active())
    right = list(geom.active())
    left[ax] = slice(g - 1, g + n)
    right[ax] = slice(g, g + n + 1)
    u_l = face_extrapolation(v[tuple(left)], axis, +1)
    u_r = face_extrapolation(v[tuple(right)], axis, -1)
    try:
        return solve(u_l, u_r, axis, gas, stats)
    except UnphysicalStateError as exc:
        raise UnphysicalStateError(
            "unphysical face state", location=exc.location,
            context=f"{AXIS_NAMES[axis]}-face flux ({exc.context})") from exc


def make_fluxes(modal: ModalState, geom: PatchGeometry, solver="hll", gas: GasModel = AIR,
                stats=None) -> FaceFluxField:
    return FaceFluxField(*(make_flux_axis(modal, a, geom, solver, gas, stats) for a in range(3)))


def make_du_dt(fluxes: FaceFluxField, dt: float, geom: PatchGeometry) -> RateField:
    """``-dt * div(F)`` on the active zones (the stored rate is dt-scaled)."""
    fx, fy, fz = fluxes.flux_x, fluxes.flux_y, fluxes.flux_z
    du = (-dt) * (fx[:, :, 1:] - fx[:, :, :-1]) / geom.dx
    du -= dt * (fy[:, 1:] - fy[:, :-1]) / geom.dy
    du -= dt * (fz[1:] - fz[:-1]) / geom.dz
    return RateField(du)


def next_timestep(u_active, time: TimeState, geom: PatchGeometry, gas: GasModel = AIR) -> float:
    """Min-reduction of the pointwise CFL estimate, seeded with ``DT_SEED``."""
    dt1 = eval_tstep_ptwise(u_active, time.cfl, geom.dx, geom.dy, geom.dz, gas)
    return float(min(DT_SEED, dt1.min()))


def update_u_timestep(modal: ModalState, skinny: SkinnyState, rate: RateField,
                      time: TimeState, geom: PatchGeometry, gas: GasModel = AIR,
                      step=None) -> float:
    """Add the rate to mode 0, refresh the skinny state, return ``dt_next``."""
    act = geom.active()
    avg = modal.values[act + (slice(None), AVG)]
    avg += rate.du_dt
    skinny.values[act] = avg
    try:
        check_physical(avg[..., 0], pressure(avg, gas), "update")
    except UnphysicalStateError as exc:
        raise UnphysicalStateError("unphysical updated state", location=exc.location,
                                   context="update", step=step) from exc
    time.dt_next = next_timestep(avg, time, geom, gas)
    return time.dt_next
