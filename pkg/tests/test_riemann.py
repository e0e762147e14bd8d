import numpy as np
import pytest

from hogpatch import riemann
from hogpatch.corrector import make_flux_axis
from hogpatch.errors import ConfigurationError, UnphysicalStateError
from hogpatch.euler import AIR, physical_flux, prim_to_cons
from hogpatch.riemann import (KERNEL_KINDS, OK, UNPHYSICAL, RiemannStats, available_solvers,
                              get_solver, hll_flux, register_solver, riemann_point, rusanov_flux)

from conftest import random_states, vortex_patch

SOLVERS = [rusanov_flux, hll_flux]
SOD_L = prim_to_cons(np.array([1.0, 0.0, 0.0, 0.0, 1.0]))
SOD_R = prim_to_cons(np.array([0.125, 0.0, 0.0, 0.0, 0.1]))


def _scalar_flux_x(rho, u, p, g=1.4):
    e = p / (g - 1) + 0.5 * rho * u * u
    return [rho * u, rho * u * u + p, 0.0, 0.0, u * (e + p)], e


@pytest.mark.parametrize("solver", SOLVERS)
@pytest.mark.parametrize("axis", [0, 1, 2])
def test_consistency_on_random_states(solver, axis, rng):
    u = random_states(rng, 1000)
    f = solver(u, u, axis)
    ref = physical_flux(u, axis)
    scale = np.abs(ref).max(axis=-1, keepdims=True)
    assert np.max(np.abs(f - ref) / scale) <= 1e-13


@pytest.mark.parametrize("solver", SOLVERS)
def test_reflection_flips_mass_flux(solver, rng):
    left, right = random_states(rng, 50), random_states(rng, 50)
    f = solver(left, right, 0)

    def mirror(u):
        m = u.copy()
        m[..., 1] *= -1.0
        return m

    g = solver(mirror(right), mirror(left), 0)
    assert np.allclose(g[:, 0], -f[:, 0], rtol=1e-13, atol=1e-14)


def test_rusanov_sod_against_scalar_formula():
    fl, el = _scalar_flux_x(1.0, 0.0, 1.0)
    fr, er = _scalar_flux_x(0.125, 0.0, 0.1)
    smax = max(np.sqrt(1.4 * 1.0 / 1.0), np.sqrt(1.4 * 0.1 / 0.125))
    left = [1.0, 0.0, 0.0, 0.0, el]
    right = [0.125, 0.0, 0.0, 0.0, er]
    expected = [0.5 * (a + b) - 0.5 * smax * (r - l) for a, b, l, r in zip(fl, fr, left, right)]
    assert np.allclose(rusanov_flux(SOD_L, SOD_R, 0), expected, rtol=1e-14, atol=1e-15)


def test_hll_sod_against_scalar_formula():
    fl, el = _scalar_flux_x(1.0, 0.0, 1.0)
    fr, er = _scalar_flux_x(0.125, 0.0, 0.1)
    cl, cr = np.sqrt(1.4), np.sqrt(1.4 * 0.1 / 0.125)
    sl, sr = min(-cl, -cr), max(cl, cr)
    left = [1.0, 0.0, 0.0, 0.0, el]
    right = [0.125, 0.0, 0.0, 0.0, er]
    expected = [(sr * a - sl * b + sl * sr * (r - l)) / (sr - sl)
                for a, b, l, r in zip(fl, fr, left, right)]
    assert np.allclose(hll_flux(SOD_L, SOD_R, 0), expected, rtol=1e-14, atol=1e-15)


def test_hll_is_less_dissipative_than_rusanov_on_sod():
    centre = 0.5 * (physical_flux(SOD_L, 0) + physical_flux(SOD_R, 0))
    d_hll = abs(hll_flux(SOD_L, SOD_R, 0)[0] - centre[0])
    d_rus = abs(rusanov_flux(SOD_L, SOD_R, 0)[0] - centre[0])
    assert d_hll <= d_rus


@pytest.mark.parametrize("sign, side", [(1.0, "left"), (-1.0, "right")])
def test_hll_supersonic_upwinding(sign, side):
    left = prim_to_cons(np.array([1.0, sign * 3.0, 0.1, 0.0, 1.0]))
    right = prim_to_cons(np.array([0.8, sign * 2.8, -0.2, 0.0, 0.9]))
    expected = physical_flux(left if side == "left" else right, 0)
    assert np.array_equal(hll_flux(left, right, 0), expected)


def test_face_counter(rng):
    stats = RiemannStats()
    u = random_states(rng, 12).reshape(3, 4, 5)
    hll_flux(u, u, 1, stats=stats)
    rusanov_flux(u, u, 1, stats=stats)
    assert stats.face_solves == 24 and stats.degenerate_fans == 0


def test_degenerate_fan_falls_back_to_average(monkeypatch):
    # physical states always open the fan; fake zero sound speeds to close it
    def no_sound(u, axis, gas, context=None):
        f = physical_flux(u, axis, gas)
        return f, np.zeros(u.shape[:-1]), np.zeros(u.shape[:-1])

    monkeypatch.setattr(riemann, "flux_and_speeds", no_sound)
    state = prim_to_cons(np.array([[1.0, 0.0, 0.0, 0.0, 1.0], [2.0, 0.0, 0.0, 0.0, 1.0]]))
    stats = RiemannStats()
    out = hll_flux(state[:1], state[1:], 0, stats=stats)
    ref = 0.5 * (physical_flux(state[:1], 0) + physical_flux(state[1:], 0))
    assert np.array_equal(out, ref)
    assert stats.degenerate_fans == 1


def test_unphysical_face_state_raises():
    bad = np.array([[1.0, 2.0, 0.0, 0.0, 1.0]])
    for solver in SOLVERS:
        with pytest.raises(UnphysicalStateError):
            solver(bad, SOD_L[None], 0)


@pytest.mark.parametrize("name", ["rusanov", "hll"])
def test_compiled_point_solver_matches_array_solver(name, rng):
    left, right = random_states(rng, 300), random_states(rng, 300)
    fl, fr, out = np.empty(5), np.empty(5), np.empty(5)
    solver = get_solver(name)
    for axis in range(3):
        ref = solver(left, right, axis)
        for k in range(300):
            code = riemann_point(KERNEL_KINDS[name], left[k], right[k], axis, AIR.gamma, fl, fr, out)
            assert code == OK
            assert np.array_equal(out, ref[k])
    bad = np.array([1.0, 2.0, 0.0, 0.0, 1.0])
    assert riemann_point(KERNEL_KINDS[name], bad, left[0], 0, AIR.gamma, fl, fr, out) == UNPHYSICAL


def test_registry():
    assert {"rusanov", "hll"} <= set(available_solvers())
    with pytest.raises(ConfigurationError):
        get_solver("exact")


def test_registered_solver_is_used_by_the_corrector():
    calls = []

    def central(left, right, axis, gas=AIR, stats=None):
        calls.append(left.shape)
        return 0.5 * (physical_flux(left, axis, gas) + physical_flux(right, axis, gas))

    register_solver("central-test", central)
    try:
        g, m, _ = vortex_patch(2, 6)
        f = make_flux_axis(m, 0, g, "central-test")
        assert calls and f.shape == (6, 6, 7, 5)
    finally:
        riemann._SOLVERS.pop("central-test")
