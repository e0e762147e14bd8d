"""Initial conditions: isentropic vortex, Sod tube, constant state."""

from __future__ import annotations

import math
import warnings

import numpy as np

from ..errors import ConfigurationError
from ..euler import AIR, GasModel, prim_to_cons
from ..mesh import NVAR, PatchGeometry, SkinnyState

VORTEX_STRENGTH = 5.0
VORTEX_FREE_STREAM = (1.0, 1.0, 1.0, 0.0, 1.0)  # rho, u, v, w, p
VORTEX_BOX = ((-5.0, -5.0, -5.0), (5.0, 5.0, 5.0))
SOD_LEFT = (1.0, 0.0, 0.0, 0.0, 1.0)
SOD_RIGHT = (0.125, 0.0, 0.0, 0.0, 0.1)
SOD_BOX = ((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))
CONSTANT_STATE = (1.0, 0.3, -0.2, 0.1, 1.0)
CONSTANT_BOX = ((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))

BOXES = {"vortex": VORTEX_BOX, "sod": SOD_BOX, "constant": CONSTANT_BOX}
BOUNDARIES = {"vortex": "periodic", "sod": "outflow", "constant": "periodic"}


class VortexDomainWarning(RuntimeWarning):
    """The vortex perturbation has not decayed at the domain boundary."""


def vortex_primitives(x, y, gas: GasModel = AIR, strength=VORTEX_STRENGTH):
    """Primitive state of the isentropic vortex at offsets ``(x, y)`` from its centre."""
    rho0, u0, v0, w0, p0 = VORTEX_FREE_STREAM
    g = gas.gamma
    r2 = x * x + y * y
    du = strength / (2.0 * math.pi) * np.exp(0.5 * (1.0 - r2))
    temp = p0 / rho0 - (g - 1.0) * strength ** 2 / (8.0 * g * math.pi ** 2) * np.exp(1.0 - r2)
    rho = temp ** (1.0 / (g - 1.0))
    w = np.empty(np.broadcast(x, y).shape + (NVAR,))
    w[..., 0] = rho
    w[..., 1] = u0 - du * y
    w[..., 2] = v0 + du * x
    w[..., 3] = w0
    w[..., 4] = rho * temp
    return w


def _sample_points(order):
    """Abscissae (in zone units, centred) and weights per axis."""
    if order >= 3:
        h = 0.5 / math.sqrt(3.0)
        return np.array([-h, h]), np.array([0.5, 0.5])
    return np.array([0.0]), np.array([1.0])


def _zone_average(geom: PatchGeometry, order, pointwise):
    """Average ``pointwise(x, y, z) -> cons`` over the active zones by tensor Gauss."""
    z, y, x = geom.centers()
    pts, wts = _sample_points(order)
    out = np.zeros(geom.active_shape + (NVAR,))
    for pz, wz in zip(pts, wts):
        for py, wy in zip(pts, wts):
            for px, wx in zip(pts, wts):
                out += (wx * wy * wz) * pointwise(x + px * geom.dx, y + py * geom.dy,
                                                  z + pz * geom.dz)
    return out


def _wrap(d, length):
    return (d + 0.5 * length) % length - 0.5 * length


def vortex_state(geom: PatchGeometry, t=0.0, gas: GasModel = AIR, order=2,
                 box=VORTEX_BOX, strength=VORTEX_STRENGTH):
    """Active-zone conserved averages of the vortex advected to time ``t``."""
    lo, hi = np.asarray(box[0], float), np.asarray(box[1], float)
    length = hi - lo
    centre = 0.5 * (lo + hi)
    _, u0, v0, _, _ = VORTEX_FREE_STREAM
    cx = centre[0] + u0 * t
    cy = centre[1] + v0 * t

    def pointwise(x, y, z):
        dx = _wrap(x - cx, length[0])
        dy = _wrap(y - cy, length[1])
        w = vortex_primitives(np.broadcast_to(dx, np.broadcast(dx, dy, z).shape),
                              np.broadcast_to(dy, np.broadcast(dx, dy, z).shape), gas, strength)
        return prim_to_cons(w, gas)

    return _zone_average(geom, order, pointwise)


def _check_vortex_tail(box, strength):
    half = 0.5 * min(box[1][0] - box[0][0], box[1][1] - box[0][1])
    tail = strength / (2.0 * math.pi) * half * math.exp(0.5 * (1.0 - half * half))
    if tail > 1e-10:
        warnings.warn(f"vortex velocity perturbation is {tail:.2e} at the domain boundary",
                      VortexDomainWarning, stacklevel=3)


def init_isentropic_vortex(geom: PatchGeometry, gas: GasModel = AIR, order=2,
                           box=VORTEX_BOX, strength=VORTEX_STRENGTH) -> SkinnyState:
    """Skinny state holding the vortex zone averages (ghosts left at zero).

    Zone averages use the zone midpoint at order 2 and a 2x2x2 Gauss rule at
    order 3.
    """
    _check_vortex_tail(box, strength)
    skinny = SkinnyState.zeros(geom)
    skinny.values[geom.active()] = vortex_state(geom, 0.0, gas, order, box, strength)
    return skinny


def exact_vortex(geom: PatchGeometry, gas: GasModel = AIR, t=0.0, order=2,
                 box=VORTEX_BOX, strength=VORTEX_STRENGTH) -> SkinnyState:
    """The initial vortex translated by the free stream over ``t``, periodically wrapped."""
    skinny = SkinnyState.zeros(geom)
    skinny.values[geom.active()] = vortex_state(geom, t, gas, order, box, strength)
    return skinny


def vortex_crossing_time(box=VORTEX_BOX):
    """Time after which the free stream brings the vortex back to its start."""
    _, u0, v0, _, _ = VORTEX_FREE_STREAM
    lx = box[1][0] - box[0][0]
    ly = box[1][1] - box[0][1]
    return max(lx / abs(u0), ly / abs(v0))


def sod_state(geom: PatchGeometry, gas: GasModel = AIR, interface=0.5):
    z, y, x = geom.centers()
    left = prim_to_cons(np.array(SOD_LEFT), gas)
    right = prim_to_cons(np.array(SOD_RIGHT), gas)
    mask = np.broadcast_to((x < interface)[..., None], geom.active_shape + (NVAR,))
    return np.where(mask, left, right)


def constant_state(geom: PatchGeometry, gas: GasModel = AIR, prim=CONSTANT_STATE):
    cons = prim_to_cons(np.array(prim, dtype=float), gas)
    return np.broadcast_to(cons, geom.active_shape + (NVAR,)).copy()


def initial_state(problem: str, geom: PatchGeometry, gas: GasModel = AIR, order=2):
    """Active-zone conserved averages for a named problem."""
    if problem == "vortex":
        _check_vortex_tail(VORTEX_BOX, VORTEX_STRENGTH)
        return vortex_state(geom, 0.0, gas, order)
    if problem == "sod":
        return sod_state(geom, gas)
    if problem == "constant":
        return constant_state(geom, gas)
    raise ConfigurationError(f"unknown problem {problem!r}")


def exact_state(problem: str, geom: PatchGeometry, t, gas: GasModel = AIR, order=2):
    """Reference solution at ``t``, or ``None`` when none is available."""
    if problem == "vortex":
        return vortex_state(geom, t, gas, order)
    if problem == "constant":
        return constant_state(geom, gas)
    return None
