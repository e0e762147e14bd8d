import numpy as np
import pytest

from hogpatch.corrector import make_du_dt, make_fluxes, update_u_timestep
from hogpatch.errors import ConfigurationError, UnphysicalStateError
from hogpatch.euler import prim_to_cons
from hogpatch.mesh import ModalState, TimeState
from hogpatch.predictor import (STAGE_COEFFICIENTS, IntegratorChoice, integrator, predict_patch,
                                predict_patch_arrays, predictor_ptwise, rk_substep, temporal_mode)

from conftest import vortex_patch
from oracles import fine_grid_zone_change, random_linear_stencils


def zone(m0, slopes=None, n_modes=5):
    z = np.zeros((5, n_modes))
    z[:, 0] = m0
    if slopes is not None:
        for axis, s in slopes.items():
            z[:, 1 + axis] = s
    return z


def test_locally_constant_zone_has_zero_temporal_mode():
    m0 = prim_to_cons(np.array([1.2, 0.4, -0.3, 0.2, 0.9]))
    for n in (5, 11):
        out = predictor_ptwise(zone(m0, n_modes=n), 0.1, 0.5, 0.5, 0.5)
        assert np.all(out[:, -1] == 0.0)
        assert np.array_equal(out[:, 0], m0)


def test_advected_density_slope():
    # u = 1, constant p, v, w: rho slope s implies mx slope s and E slope s/2
    s, dt, dx = 0.01, 0.05, 0.25
    m0 = prim_to_cons(np.array([1.0, 1.0, 0.0, 0.0, 1.0]))
    slope = np.array([s, s, 0.0, 0.0, 0.5 * s])
    out = predictor_ptwise(zone(m0, {0: slope}), dt, dx, 1.0, 1.0)
    assert out[0, -1] == pytest.approx(-dt * 1.0 * s / dx, rel=1e-13)


def test_predictor_ptwise_leaves_other_modes_and_input_alone(rng):
    m0 = prim_to_cons(np.array([1.0, 0.2, 0.1, 0.0, 1.0]))
    z = zone(m0, {a: 1e-3 * rng.normal(size=5) for a in range(3)})
    z[:, -1] = 123.0
    before = z.copy()
    out = predictor_ptwise(z, 0.1, 1.0, 1.0, 1.0)
    assert np.array_equal(z, before)
    assert np.array_equal(out[:, :-1], z[:, :-1])
    assert np.all(out[:, -1] != 123.0)


def test_temporal_mode_ignores_incoming_temporal_mode(rng):
    m0 = prim_to_cons(np.array([1.0, 0.2, 0.1, 0.0, 1.0]))
    z = zone(m0, {0: 1e-2 * rng.normal(size=5)}, n_modes=11)
    a = temporal_mode(z, 0.1, 1, 1, 1)
    z[:, -1] = 5.0
    assert np.array_equal(a, temporal_mode(z, 0.1, 1, 1, 1))


def test_o2_temporal_mode_is_linear_in_dt(rng):
    m0 = prim_to_cons(np.array([1.0, 0.3, -0.4, 0.1, 1.5]))
    z = zone(m0, {a: 1e-2 * rng.normal(size=5) for a in range(3)})
    t1 = temporal_mode(z, 0.1, 1.0, 1.0, 1.0)
    t2 = temporal_mode(z, 0.2, 1.0, 1.0, 1.0)
    assert np.allclose(t2, 2.0 * t1, rtol=4e-16, atol=0)


@pytest.mark.parametrize("order", [2, 3])
def test_predictor_matches_fine_grid_oracle_to_second_order(order, rng):
    m0, s = random_linear_stencils(rng, 100)
    n_modes = 5 if order == 2 else 11
    for axis in range(3):
        errors = []
        for dt in (0.08, 0.04, 0.02):
            z = np.zeros((100, 5, n_modes))
            z[..., 0] = m0
            z[..., 1 + axis] = s
            change = temporal_mode(z, dt, 1.0, 1.0, 1.0)
            ref = fine_grid_zone_change(m0, s, axis, dt)
            errors.append(np.abs(change - ref).max(axis=1).sum())
        for coarse, fine in zip(errors, errors[1:]):
            assert 3.0 <= coarse / fine <= 5.0


@pytest.mark.parametrize("order", [2, 3])
def test_predict_patch_constant_field(order):
    g, m, _ = vortex_patch(order, 6, reconstructed=False)
    m.values[..., 0] = prim_to_cons(np.array([1.0, 0.5, 0.5, 0.0, 1.0]))
    m.values[..., 1:] = 0.0
    predict_patch(m, 0.1, g)
    assert np.all(m.values[..., -1] == 0.0)


@pytest.mark.parametrize("order", [2, 3])
def test_predict_patch_matches_zone_by_zone_in_any_order(order, rng):
    g, m, _ = vortex_patch(order, 6)
    ref = ModalState(m.values.copy(), order)
    predict_patch(ref, 0.05, g)
    ring = g.ring(1)
    idx = [(k, j, i) for k in range(ring[0].start, ring[0].stop)
           for j in range(ring[1].start, ring[1].stop)
           for i in range(ring[2].start, ring[2].stop)]
    out = m.values.copy()
    for n in rng.permutation(len(idx)):
        k, j, i = idx[n]
        out[k, j, i] = predictor_ptwise(m.values[k, j, i], 0.05, g.dx, g.dy, g.dz)
    assert np.allclose(out[ring], ref.values[ring], rtol=1e-14, atol=1e-15)


@pytest.mark.parametrize("order", [2, 3])
def test_compiled_predictor_matches_array_path(order):
    g, m, _ = vortex_patch(order, 6)
    a = ModalState(m.values.copy(), order)
    b = ModalState(m.values.copy(), order)
    predict_patch(a, 0.05, g)
    predict_patch_arrays(b, 0.05, g)
    assert np.array_equal(a.values, b.values)


def test_predictor_is_local_to_each_zone(rng):
    g, m, _ = vortex_patch(3, 6)
    a = ModalState(m.values.copy(), 3)
    predict_patch(a, 0.05, g)
    target = (4, 5, 3)
    b = ModalState(m.values.copy(), 3)
    keep = b.values[target].copy()
    b.values[..., :-1] *= 1.0 + 1e-3 * rng.random(b.values[..., :-1].shape)
    b.values[target] = keep
    predict_patch(b, 0.05, g)
    assert np.array_equal(a.values[target], b.values[target])


@pytest.mark.parametrize("order, tol", [(2, 1e-14), (3, 5e-2)])
def test_vortex_temporal_mode_scales_with_dt(order, tol):
    g, m, _ = vortex_patch(order, 8)
    a = ModalState(m.values.copy(), order)
    b = ModalState(m.values.copy(), order)
    predict_patch(a, 0.02, g)
    predict_patch(b, 0.01, g)
    ratio = np.abs(a.values[..., -1]).max() / np.abs(b.values[..., -1]).max()
    assert ratio == pytest.approx(2.0, rel=tol)


def test_unphysical_face_state_reports_zone():
    g, m, _ = vortex_patch(2, 6)
    m.values[4, 4, 4, 0, 1] = 10.0 * m.values[4, 4, 4, 0, 0]  # face density < 0
    with pytest.raises(UnphysicalStateError) as info:
        predict_patch(m, 0.05, g)
    assert info.value.location == (4, 4, 4)


def test_integrator_choices():
    assert integrator("rk3") is IntegratorChoice.RK3
    with pytest.raises(ConfigurationError):
        integrator("rk4")
    assert STAGE_COEFFICIENTS[IntegratorChoice.RK2] == ((0.0, 1.0), (0.5, 0.5))
    rk3 = STAGE_COEFFICIENTS[IntegratorChoice.RK3]
    assert rk3[1] == (0.75, 0.25) and rk3[2] == (1.0 / 3.0, 2.0 / 3.0)


def test_rk_substep_rejects_ader():
    g, m, s = vortex_patch(2, 4)
    with pytest.raises(ConfigurationError):
        rk_substep(m, s, None, 0, "ader", 0.1, g)


@pytest.mark.parametrize("kind", ["rk2", "rk3"])
def test_rk_on_uniform_state_is_identity(kind):
    g, m, s = vortex_patch(2, 4, reconstructed=False)
    state = prim_to_cons(np.array([1.0, 0.7, -0.1, 0.3, 2.0]))
    s.values[...] = state
    m.values[..., 0] = state
    u0 = s.values[g.active()].copy()
    for stage in range(len(STAGE_COEFFICIENTS[integrator(kind)])):
        new = rk_substep(m, s, u0, stage, kind, 0.05, g)
    assert np.allclose(new, u0, rtol=1e-15, atol=0)


@pytest.mark.parametrize("order", [2, 3])
def test_first_rk_stage_is_corrector_with_zero_temporal_mode(order):
    g, m, s = vortex_patch(order, 6, reconstructed=False)
    a = ModalState(m.values.copy(), order)
    sa = s.copy()
    u0 = s.values[g.active()].copy()
    rk_substep(a, sa, u0, 0, "rk2", 0.05, g)

    from hogpatch.reconstruction import reconstruct
    b = ModalState(m.values.copy(), order)
    sb = s.copy()
    reconstruct(b, g)
    b.values[..., -1] = 0.0
    rate = make_du_dt(make_fluxes(b, g), 0.05, g)
    update_u_timestep(b, sb, rate, TimeState(0.05, 0.5), g)
    assert np.array_equal(sa.values[g.active()], sb.values[g.active()])
