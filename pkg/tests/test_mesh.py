import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hogpatch.errors import ConfigurationError
from hogpatch.mesh import (FaceFluxField, ModalState, PatchGeometry, RateField, SkinnyState,
                           TimeState, ghost_width, modal_to_skinny, n_modes, skinny_to_modal,
                           time_mode, zone_count)


def geom(order=2, n=(6, 5, 4)):
    return PatchGeometry.for_order(order, *n, (0.0, 0.0, 0.0), (1.0, 1.0, 1.0))


def test_ghost_width_follows_order():
    assert ghost_width(2) == 2
    assert ghost_width(3) == 3
    with pytest.raises(ConfigurationError):
        ghost_width(4)


def test_mode_counts():
    assert n_modes(2) == 5 and time_mode(2) == 4
    assert n_modes(3) == 11 and time_mode(3) == 10


@pytest.mark.parametrize("kw", [dict(nx=3), dict(dx=0.0), dict(dz=-1.0)])
def test_geometry_rejects_bad_sizes(kw):
    base = dict(nx=4, ny=4, nz=4, ghost=2, dx=1.0, dy=1.0, dz=1.0)
    base.update(kw)
    with pytest.raises(ConfigurationError):
        PatchGeometry(**base)


def test_zone_count_examples():
    g = PatchGeometry.for_order(2, 48, 48, 48, (0, 0, 0), (1, 1, 1))
    assert zone_count(g, include_ghost=False) == 110_592
    assert zone_count(g, include_ghost=True) == 140_608
    g = PatchGeometry.for_order(3, 4, 4, 4, (0, 0, 0), (1, 1, 1))
    assert zone_count(g, include_ghost=True) == 1000


@given(st.integers(4, 20), st.integers(4, 20), st.integers(4, 20), st.sampled_from([2, 3]))
def test_ghost_shell_volume(nx, ny, nz, order):
    g = PatchGeometry.for_order(order, nx, ny, nz, (0, 0, 0), (1, 1, 1))
    w = order
    shell = ((nx + 2 * w) * (ny + 2 * w) * (nz + 2 * w)) - nx * ny * nz
    assert zone_count(g, True) - zone_count(g, False) == shell


def test_layout_shapes():
    g = geom(3)
    m = ModalState.zeros(g, 3)
    assert m.values.shape == (10, 11, 12, 5, 11)
    assert SkinnyState.zeros(g).values.shape == m.values.shape[:4]
    f = FaceFluxField.zeros(g)
    assert f.flux_x.shape == (4, 5, 7, 5)
    assert f.flux_y.shape == (4, 6, 6, 5)
    assert f.flux_z.shape == (5, 5, 6, 5)


def test_modal_state_rejects_wrong_mode_count():
    with pytest.raises(ConfigurationError):
        ModalState(np.zeros((8, 8, 8, 5, 5)), 3)


def test_skinny_to_modal_zero_copy_leaves_other_modes():
    g = geom()
    m = ModalState.zeros(g, 2)
    m.values[..., 1:] = 7.0
    m.values[..., 0] = 3.0
    skinny_to_modal(SkinnyState.zeros(g), m)
    assert np.all(m.values[..., 0] == 0.0)
    assert np.all(m.values[..., 1:] == 7.0)


def test_skinny_to_modal_constant_density():
    g = geom()
    s = SkinnyState.zeros(g)
    s.values[..., 0] = 1.4
    m = ModalState.zeros(g, 2)
    skinny_to_modal(s, m)
    assert np.all(m.values[..., 0, 0] == 1.4)


def test_skinny_to_modal_shape_mismatch():
    with pytest.raises(ConfigurationError):
        skinny_to_modal(SkinnyState.zeros(geom(2)), ModalState.zeros(geom(3), 3))


def test_modal_to_skinny_ignores_higher_modes(rng):
    g = geom()
    m = ModalState.zeros(g, 2)
    m.values[..., 0] = rng.normal(size=m.values.shape[:4])
    a = modal_to_skinny(m).values.copy()
    m.values[..., 1:] = rng.normal(size=m.values[..., 1:].shape)
    b = modal_to_skinny(m).values
    assert np.array_equal(a, b)


def test_modal_to_skinny_with_geometry_keeps_ghosts(rng):
    g = geom()
    m = ModalState.zeros(g, 2)
    m.values[..., 0] = rng.normal(size=m.values.shape[:4])
    s = SkinnyState.zeros(g)
    s.values[...] = -9.0
    modal_to_skinny(m, s, g)
    assert np.array_equal(s.values[g.active()], m.values[g.active() + (slice(None), 0)])
    mask = np.ones(g.total_shape, bool)
    mask[g.active()] = False
    assert np.all(s.values[mask] == -9.0)


@settings(max_examples=25)
@given(st.sampled_from([2, 3]), st.integers(0, 2**32 - 1))
def test_mode0_round_trip_bit_exact(order, seed):
    g = geom(order)
    r = np.random.default_rng(seed)
    m = ModalState.zeros(g, order)
    m.values[...] = r.normal(size=m.values.shape) * 10.0 ** r.integers(-8, 8)
    other = ModalState.zeros(g, order)
    skinny_to_modal(modal_to_skinny(m), other)
    assert np.array_equal(other.values[..., 0], m.values[..., 0])


@settings(max_examples=25)
@given(st.integers(1, 10), st.floats(-1e6, 1e6, allow_nan=False))
def test_writing_higher_modes_never_touches_mode0(k, value):
    g = geom(3)
    m = ModalState.zeros(g, 3)
    m.values[..., 0] = np.arange(m.values[..., 0].size).reshape(m.values.shape[:4])
    before = m.values[..., 0].tobytes()
    m.mode(k)[...] = value
    assert m.values[..., 0].tobytes() == before


def test_rate_field_and_time_state():
    g = geom()
    assert RateField.zeros(g).du_dt.shape == g.active_shape + (5,)
    t = TimeState(dt=0.1, cfl=0.5)
    assert t.dt_next == 1e32
    for bad in (dict(dt=0.0, cfl=0.5), dict(dt=0.1, cfl=1.0), dict(dt=0.1, cfl=0.0)):
        with pytest.raises(ConfigurationError):
            TimeState(**bad)


def test_centers_are_zone_midpoints():
    g = PatchGeometry.for_order(2, 4, 4, 4, (-1.0, 0.0, 2.0), (1.0, 2.0, 4.0))
    z, y, x = g.centers()
    assert np.allclose(x.ravel(), [-0.75, -0.25, 0.25, 0.75])
    assert np.allclose(y.ravel(), [0.25, 0.75, 1.25, 1.75])
    assert np.allclose(z.ravel(), [2.25, 2.75, 3.25, 3.75])
