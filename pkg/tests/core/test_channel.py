import numpy as np
import pytest

from airs_relay.beamform import conjugate_phases
from airs_relay.channel import (
    ArrayGeometry,
    PhaseProfile,
    RadioParams,
    array_gain,
    cascaded_path_loss,
    path_gain_airs_dest,
    path_gain_source_airs,
    snr,
    snr_map,
    snr_separable,
    to_db,
    worst_snr,
)
from airs_relay.exceptions import InvalidInputError
from airs_relay.geometry import Placement, TargetArea, area_grid

H = 100.0


@pytest.mark.parametrize("kwargs", [
    {'tx_power': 1.0, 'noise_power': 0.0, 'ref_gain': 1.0},
    {'tx_power': 1.0, 'noise_power': 1.0, 'ref_gain': 0.0},
    {'tx_power': -1.0, 'noise_power': 1.0, 'ref_gain': 1.0},
    {'tx_power': 1.0, 'noise_power': 1.0, 'ref_gain': 1.0, 'wavelength_ratio_x': 0.5},
    {'tx_power': 1.0, 'noise_power': 1.0, 'ref_gain': 1.0, 'wavelength_ratio_y': 0.0},
])
def test_radio_params_validation(kwargs):
    with pytest.raises(InvalidInputError):
        RadioParams(**kwargs)


def test_default_radio_budget(rp):
    assert rp.snr_scale == pytest.approx(1e13, rel=1e-9)
    assert rp.ref_gain == pytest.approx(1e-4, rel=1e-12)
    assert rp.wavelength == pytest.approx(0.1249, abs=1e-4)


def test_array_geometry_validation():
    with pytest.raises(InvalidInputError):
        ArrayGeometry(0, 1)
    with pytest.raises(InvalidInputError):
        ArrayGeometry(4, 1, 0)
    geo = ArrayGeometry(20, 20)
    assert geo.n_elements == 400 and not geo.is_ula


def test_phase_profile_wraps_into_range():
    p = PhaseProfile(np.array([-0.5, 7.0, 2 * np.pi, -1e-18]))
    assert np.all((p.theta >= 0) & (p.theta < 2 * np.pi))
    assert p.isclose(PhaseProfile(np.array([2 * np.pi - 0.5, 7.0 - 2 * np.pi, 0.0, 0.0])))


def test_phase_profile_common_phase():
    theta = np.linspace(0.0, 3.0, 6)
    shifted = PhaseProfile(theta + 0.7)
    assert not shifted.isclose(PhaseProfile(theta))
    assert shifted.isclose(PhaseProfile(theta), ignore_common_phase=True)
    assert not shifted.isclose(PhaseProfile(theta[:5]))


def test_phase_profile_identity_semantics():
    p = PhaseProfile(np.zeros(4), amplitudes=np.ones(4))
    assert p == p
    assert p != PhaseProfile(np.zeros(4))
    assert len({p, p}) == 1


def test_phase_profile_grid_layout():
    p = PhaseProfile.separable([0.0, 1.0], [0.0, 0.1, 0.2])
    geo = ArrayGeometry(2, 3)
    assert p.grid(geo)[1, 2] == pytest.approx(1.2)
    # flat index (nx - 1) * Ny + ny
    assert p.theta[1 * 3 + 2] == pytest.approx(1.2)


def test_path_gains(rp):
    assert path_gain_source_airs(Placement(0, 0, H), rp) == pytest.approx(1e-8)
    assert path_gain_source_airs(Placement(500, 0, H), rp) == pytest.approx(3.846e-10, rel=1e-3)
    assert path_gain_airs_dest(Placement(10.1, 0, H), (1000, 0), rp) == pytest.approx(1.0102e-10, rel=1e-4)
    assert path_gain_airs_dest(Placement(300, 20, H), (300, 20), rp) == pytest.approx(rp.ref_gain / H ** 2)


def test_path_gain_decreases_with_distance(rp):
    gains = [path_gain_source_airs(Placement(x, 0, H), rp) for x in (0, 100, 500, 2000)]
    assert gains == sorted(gains, reverse=True)


def test_array_gain_broadside_and_offset(unit_rp):
    geo = ArrayGeometry(4, 1)
    q = Placement(0, 0, H)
    zeros = PhaseProfile(np.zeros(4))
    assert array_gain(q, (0, 0), zeros, geo, unit_rp) == pytest.approx(16.0)
    # offset 0.5 in spatial frequency: Phi_T = 0.5 at w_x = H / sqrt(3)
    w = (H / np.sqrt(3.0), 0.0)
    expected = (np.sin(4 * np.pi * 0.05) / np.sin(np.pi * 0.05)) ** 2
    assert array_gain(q, w, zeros, geo, unit_rp) == pytest.approx(expected, rel=1e-9)
    assert expected == pytest.approx(14.118, abs=1e-3)


def test_array_gain_length_mismatch(unit_rp):
    with pytest.raises(InvalidInputError):
        array_gain(Placement(0, 0, H), (10, 0), PhaseProfile(np.zeros(3)), ArrayGeometry(4, 1), unit_rp)


def test_conjugate_phases_reach_full_gain(unit_rp):
    rng = np.random.default_rng(1)
    for _ in range(100):
        geo = ArrayGeometry(int(rng.integers(1, 24)), int(rng.integers(1, 24)))
        q = Placement(*rng.uniform(-1000, 1000, 2), rng.uniform(10, 300))
        w = tuple(rng.uniform(-2000, 2000, 2))
        gain = array_gain(q, w, conjugate_phases(q, w, geo, unit_rp), geo, unit_rp)
        assert gain == pytest.approx(geo.n_elements ** 2, rel=1e-9)


def test_array_gain_never_exceeds_n_squared(unit_rp):
    rng = np.random.default_rng(5)
    geo = ArrayGeometry(6, 5)
    for _ in range(50):
        phases = PhaseProfile(rng.uniform(0, 2 * np.pi, geo.n_elements))
        w = tuple(rng.uniform(0, 1500, 2))
        assert array_gain(Placement(100, 0, H), w, phases, geo, unit_rp) <= geo.n_elements ** 2 + 1e-9


def test_snr_single_location_reference_values(rp):
    geo = ArrayGeometry(225, 1, 64)
    w = (1000.0, 0.0)
    q = Placement(10.1, 0.0, H)
    value = snr(q, w, conjugate_phases(q, w, geo, rp), geo, rp)
    assert to_db(value) == pytest.approx(15.1, abs=0.05)

    geo = ArrayGeometry(580, 1, 64)
    q = Placement(500.0, 0.0, H)
    value = snr(q, w, conjugate_phases(q, w, geo, rp), geo, rp)
    assert to_db(value) == pytest.approx(15.0, abs=0.1)


def test_snr_zero_power():
    rp = RadioParams(tx_power=0.0, noise_power=1e-14, ref_gain=1e-4)
    geo = ArrayGeometry(8, 1)
    q = Placement(0, 0, H)
    assert snr(q, (500, 0), PhaseProfile(np.zeros(8)), geo, rp) == 0.0


def test_snr_invariant_to_common_phase(rp):
    rng = np.random.default_rng(9)
    geo = ArrayGeometry(8, 4)
    theta = rng.uniform(0, 2 * np.pi, geo.n_elements)
    q, w = Placement(50, 10, H), (800, -120)
    base = snr(q, w, PhaseProfile(theta), geo, rp)
    assert snr(q, w, PhaseProfile(theta + 1.234), geo, rp) == pytest.approx(base, rel=1e-10)


def test_separable_factorization(rp):
    rng = np.random.default_rng(2)
    geo = ArrayGeometry(8, 8)
    for _ in range(100):
        tx = rng.uniform(0, 2 * np.pi, 8)
        ty = rng.uniform(0, 2 * np.pi, 8)
        q = Placement(*rng.uniform(-500, 1000, 2), H)
        w = tuple(rng.uniform(0, 2000, 2))
        combined = snr(q, w, PhaseProfile.separable(tx, ty), geo, rp)
        assert snr_separable(q, w, tx, ty, geo, rp) == pytest.approx(combined, rel=1e-10)


def test_separable_conjugate_gives_full_gain(rp):
    geo = ArrayGeometry(6, 4, 64)
    q, w = Placement(20, 0, H), (900, 150)
    grid = conjugate_phases(q, w, geo, rp).grid(geo)
    tx = grid[:, 0]
    ty = grid[0, :] - grid[0, 0]
    expected = rp.snr_scale * rp.ref_gain ** 2 * 64 * geo.n_elements ** 2 / cascaded_path_loss(q, w)
    assert snr_separable(q, w, tx, ty, geo, rp) == pytest.approx(expected, rel=1e-9)


def test_separable_null_along_y(rp):
    geo = ArrayGeometry(4, 16)
    q = Placement(0.0, 0.0, H)
    # Omega_T = 1 / (Ny dy) = 0.625 with Omega_R = 0
    wy = H * np.sqrt(0.390625 / 0.609375)
    null = snr_separable(q, (0.0, wy), np.zeros(4), np.zeros(16), geo, rp)
    peak = snr_separable(q, (0.0, 0.0), np.zeros(4), np.zeros(16), geo, rp)
    assert null < 1e-20 * peak


def test_separable_length_mismatch(rp):
    with pytest.raises(InvalidInputError):
        snr_separable(Placement(0, 0, H), (1, 0), np.zeros(3), np.zeros(2), ArrayGeometry(4, 2), rp)


def test_worst_snr_is_grid_minimum(rp):
    geo = ArrayGeometry(16, 1)
    area = TargetArea(1000.0, 400.0, 200.0)
    q = Placement(0.0, 0.0, H)
    phases = conjugate_phases(q, (1000.0, 0.0), geo, rp)
    value, point = worst_snr(q, area, phases, geo, rp, (21, 11))
    wx, wy = area_grid(area, 21, 11)
    values = snr_map(q, wx, wy, phases, geo, rp)
    assert value == pytest.approx(values.min())
    assert snr(q, point, phases, geo, rp) == pytest.approx(value, rel=1e-12)
