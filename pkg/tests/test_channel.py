from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from irsuavlab.channel import (
    TWO_PI,
    ChannelParams,
    PhaseStrategy,
    ScenarioGeometry,
    align_phases,
    best_ue,
    channel_irs_ue,
    channel_uav_irs,
    circular_distance,
    composite_gain,
    data_rate,
    dist_irs_ue,
    dist_uav_irs,
    element_phases,
    irs_ue_matrix,
    jain_fairness,
    optimize_phases,
    quantize_phases,
    random_phases,
    stack_channels,
    uav_irs_stacked,
    ue_rates,
    unstack_channels,
)
from irsuavlab.config import load_config
from irsuavlab.exceptions import ChannelError, ConfigError


@pytest.fixture()
def geom() -> ScenarioGeometry:
    return load_config({}).geometry()


@pytest.fixture()
def params() -> ChannelParams:
    return load_config({}).channel_params()


def _unit_params() -> ChannelParams:
    return ChannelParams(tx_power=1.0, noise_power=1.0)


def _random_channel(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.normal(size=size) + 1j * rng.normal(size=size)


def _brute_force_rate(h_ui, h_ie, theta, params: ChannelParams) -> float:
    total = 0j
    for a, b, t in zip(h_ui, h_ie, theta):
        total += b.conjugate() * cmath.exp(1j * t) * a
    return math.log2(1.0 + params.tx_power * abs(total) ** 2 / params.noise_power)


# ----- Geometry -----

def test_dist_uav_irs_examples(geom):
    assert dist_uav_irs((10, 10), 0, geom) == pytest.approx(math.sqrt(18200), rel=1e-12)
    assert dist_uav_irs((100, 0), 0, geom) == pytest.approx(100.0, rel=1e-12)

    flat = ScenarioGeometry(200.0, 600.0, 200.0, ((0.0, 0.0, 200.0),), ((0.0, 0.0),), 4)
    assert dist_uav_irs((3, 4), 0, flat) == pytest.approx(5.0, rel=1e-12)


def test_dist_irs_ue_examples(geom):
    assert dist_irs_ue(0, 0, geom) == pytest.approx(math.sqrt(12500), rel=1e-12)
    # IRS (300,200,100) and UE (300,150)
    assert dist_irs_ue(4, 4, geom) == pytest.approx(math.sqrt(12500), rel=1e-12)

    below = ScenarioGeometry(200.0, 600.0, 200.0, ((0.0, 0.0, 100.0),), ((0.0, 0.0),), 4)
    assert dist_irs_ue(0, 0, below) == pytest.approx(100.0)


def test_geometry_rejects_positions_outside_area():
    with pytest.raises(ConfigError):
        ScenarioGeometry(200.0, 600.0, 200.0, ((700.0, 0.0, 100.0),), ((0.0, 0.0),), 4)
    with pytest.raises(ConfigError):
        ScenarioGeometry(200.0, 600.0, 200.0, ((0.0, 0.0, 100.0),), ((0.0, 250.0),), 4)


# ----- Channels -----

def test_uav_irs_channel_magnitude_and_phases(geom, params):
    h = channel_uav_irs((10, 10), 0, geom, params)
    d = math.sqrt(18200)
    assert h.shape == (20,)
    np.testing.assert_allclose(np.abs(h), math.sqrt(1e-3) / d, rtol=1e-12)
    assert abs(math.sqrt(1e-3 / 18200) - 2.344e-4) < 1e-6
    assert h[0].imag == 0.0 and h[0].real > 0
    m = np.arange(20)
    expected = math.sqrt(1e-3) / d * np.exp(-1j * math.pi * m * (90 / d))
    np.testing.assert_allclose(h, expected, rtol=1e-12)


def test_uav_above_irs_gives_constant_real_vector(geom, params):
    h = channel_uav_irs((100, 40), 0, geom, params)
    np.testing.assert_allclose(h, np.full(20, h[0]))
    assert np.all(h.imag == 0.0)


def test_irs_ue_channel_magnitude(geom, params):
    h = channel_irs_ue(0, 0, geom, params)
    d = math.sqrt(12500)
    np.testing.assert_allclose(np.abs(h), math.sqrt(1e-3 / d**2.8), rtol=1e-12)
    # UE sits at the IRS x coordinate: zero angle, all entries real positive
    assert np.all(h.imag == 0.0) and np.all(h.real > 0)


def test_beta_two_matches_uav_form(geom):
    p2 = ChannelParams(ue_path_exponent=2.0)
    h = channel_irs_ue(0, 1, geom, p2)
    d = dist_irs_ue(0, 1, geom)
    np.testing.assert_allclose(np.abs(h), math.sqrt(1e-3) / d, rtol=1e-12)


def test_stack_and_unstack():
    rng = np.random.default_rng(0)
    one = _random_channel(rng, 20)
    np.testing.assert_array_equal(stack_channels([one]), one)

    two = _random_channel(rng, 20)
    stacked = stack_channels([one, two])
    assert stacked.shape == (40,)
    np.testing.assert_array_equal(stacked[:20], one)
    back = unstack_channels(stacked, 2)
    np.testing.assert_array_equal(back[0], one)
    np.testing.assert_array_equal(back[1], two)


def test_stack_rejects_length_mismatch():
    with pytest.raises(ChannelError):
        stack_channels([np.ones(4), np.ones(5)])
    with pytest.raises(ChannelError):
        unstack_channels(np.ones(5), 2)


def test_irs_ue_matrix_shape(geom, params):
    h = irs_ue_matrix(geom, params)
    assert h.shape == (6, 120)
    np.testing.assert_array_equal(h[2, 20:40], channel_irs_ue(1, 2, geom, params))


# ----- Phases -----

def test_element_phases_examples():
    assert element_phases([1 + 0j])[0] == 0.0
    assert element_phases([-1j])[0] == pytest.approx(3 * math.pi / 2)
    with pytest.raises(ChannelError):
        element_phases([1 + 0j, 0j])

    rng = np.random.default_rng(1)
    v = _random_channel(rng, 50)
    phi = element_phases(v)
    assert np.all((phi >= 0) & (phi < TWO_PI))
    np.testing.assert_allclose(np.abs(v) * np.exp(1j * phi), v, rtol=1e-12)


def test_align_phases_on_real_channels_is_zero():
    np.testing.assert_array_equal(align_phases(np.ones(8), np.full(8, 2.0)), np.zeros(8))


def test_align_phases_single_element():
    h_ui = np.array([cmath.exp(1j * 1.0)])
    h_ie = np.array([cmath.exp(1j * 0.5)])
    theta = align_phases(h_ui, h_ie)
    assert theta[0] == pytest.approx(TWO_PI - 0.5)
    gain = composite_gain(h_ui, h_ie, theta)
    assert gain.real == pytest.approx(1.0)
    assert gain.imag == pytest.approx(0.0, abs=1e-12)
    # the phase sum leaves the single path rotated by 2 * omega_ui
    summed = composite_gain(h_ui, h_ie, np.array([1.5]))
    assert cmath.phase(summed) == pytest.approx(2.0)


def test_align_phases_makes_paths_coherent():
    rng = np.random.default_rng(2)
    h_ui = _random_channel(rng, 8)  # K=2, M=4
    h_ie = _random_channel(rng, 8)
    gain = composite_gain(h_ui, h_ie, align_phases(h_ui, h_ie))
    assert abs(gain) == pytest.approx(float(np.sum(np.abs(h_ui) * np.abs(h_ie))), rel=1e-12)


def test_align_phases_length_mismatch():
    with pytest.raises(ChannelError):
        align_phases(np.ones(4), np.ones(5))


def test_quantize_examples():
    step = math.pi / 6
    assert quantize_phases([0.3], 12)[0] == pytest.approx(step)
    assert quantize_phases([6.2], 12)[0] == 0.0
    on_grid = np.arange(12) * (TWO_PI / 12)
    np.testing.assert_array_equal(quantize_phases(on_grid, 12), on_grid)


def test_quantize_error_bound():
    rng = np.random.default_rng(3)
    for levels in (1, 2, 5, 12, 64):
        theta = rng.uniform(0, TWO_PI, 2000)
        q = quantize_phases(theta, levels)
        assert np.all(circular_distance(theta, q) <= math.pi / levels + 1e-12)
        grid = np.round(q / (TWO_PI / levels))
        np.testing.assert_allclose(q, grid * (TWO_PI / levels))


def test_optimize_phases_dispatch():
    rng = np.random.default_rng(4)
    h_ui, h_ie = _random_channel(rng, 6), _random_channel(rng, 6)
    aligned = align_phases(h_ui, h_ie)
    np.testing.assert_array_equal(optimize_phases(h_ui, h_ie, PhaseStrategy.continuous()), aligned)
    np.testing.assert_array_equal(
        optimize_phases(h_ui, h_ie, PhaseStrategy.quantized(12)), quantize_phases(aligned, 12)
    )
    r = optimize_phases(h_ui, h_ie, PhaseStrategy.random(), np.random.default_rng(9))
    np.testing.assert_array_equal(r, random_phases(6, np.random.default_rng(9)))
    with pytest.raises(ChannelError):
        optimize_phases(h_ui, h_ie, PhaseStrategy.random())
    with pytest.raises(ConfigError):
        PhaseStrategy.quantized(0)


# ----- Rate -----

def test_zero_channels_give_zero_rate(params):
    assert data_rate(np.zeros(4), np.zeros(4), np.zeros(4), params) == 0.0


def test_aligned_rate_closed_form():
    params = ChannelParams(tx_power=0.01, noise_power=1e-10)
    rng = np.random.default_rng(5)
    a, b = 2e-4, 3e-5
    h_ui = a * np.exp(1j * rng.uniform(0, TWO_PI, 20))
    h_ie = b * np.exp(1j * rng.uniform(0, TWO_PI, 20))
    rate = data_rate(h_ui, h_ie, align_phases(h_ui, h_ie), params)
    expected = math.log2(1 + 0.01 * (20 * a * b) ** 2 / 1e-10)
    assert rate == pytest.approx(expected, rel=1e-9)


def test_rate_matches_brute_force_oracle():
    params = _unit_params()
    rng = np.random.default_rng(6)
    for _ in range(1000):
        size = int(rng.integers(1, 12))
        h_ui, h_ie = _random_channel(rng, size), _random_channel(rng, size)
        theta = rng.uniform(0, TWO_PI, size)
        assert data_rate(h_ui, h_ie, theta, params) == pytest.approx(
            _brute_force_rate(h_ui, h_ie, theta, params), rel=1e-9
        )


def test_beamforming_dominance():
    params = _unit_params()
    rng = np.random.default_rng(7)
    quantized, unoptimized = [], []
    for _ in range(1000):
        h_ui, h_ie = _random_channel(rng, 8), _random_channel(rng, 8)
        aligned = align_phases(h_ui, h_ie)
        best = data_rate(h_ui, h_ie, aligned, params)
        q = data_rate(h_ui, h_ie, quantize_phases(aligned, 12), params)
        r = data_rate(h_ui, h_ie, random_phases(8, rng), params)
        assert best >= q - 1e-12
        assert best >= r - 1e-12
        quantized.append(q)
        unoptimized.append(r)
    assert np.mean(quantized) >= np.mean(unoptimized)


def test_rate_increases_with_power():
    rng = np.random.default_rng(8)
    h_ui, h_ie = _random_channel(rng, 4), _random_channel(rng, 4)
    theta = align_phases(h_ui, h_ie)
    low = data_rate(h_ui, h_ie, theta, ChannelParams(tx_power=0.01))
    high = data_rate(h_ui, h_ie, theta, ChannelParams(tx_power=0.02))
    assert high > low


def test_ue_rates_match_per_ue_aligned_rate(geom, params):
    h_ui = uav_irs_stacked((10, 10), geom, params)
    h_ie = irs_ue_matrix(geom, params)
    rates = ue_rates(h_ui, h_ie, params, PhaseStrategy.continuous())
    assert rates.shape == (6,)
    for n in range(6):
        expected = data_rate(h_ui, h_ie[n], align_phases(h_ui, h_ie[n]), params)
        assert rates[n] == pytest.approx(expected, rel=1e-12)


# ----- Fairness & scheduling -----

def test_jain_examples():
    assert jain_fairness([5] * 6) == pytest.approx(1.0)
    assert jain_fairness([10, 0, 0, 0, 0, 0]) == pytest.approx(1 / 6)
    assert jain_fairness([2, 1, 0]) == pytest.approx(0.6)
    assert jain_fairness([0, 0, 0]) == 0.0


def test_jain_bounds_and_permutation():
    rng = np.random.default_rng(10)
    for _ in range(10_000):
        n = int(rng.integers(1, 10))
        c = rng.integers(0, 20, size=n)
        c[int(rng.integers(n))] += 1
        f = jain_fairness(c)
        assert 1.0 / n - 1e-12 <= f <= 1.0 + 1e-12
    c = [3, 0, 7, 1]
    assert jain_fairness(c) == pytest.approx(jain_fairness(c[::-1]))


def test_best_ue_ties_go_to_lowest_index():
    assert best_ue([1.0, 2.0, 0.5]) == 1
    assert best_ue([0.7, 0.7, 0.7]) == 0
    assert best_ue([0.1]) == 0
