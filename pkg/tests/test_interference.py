import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from radarlte.interference import (
    SYMBOL_DURATION_S,
    RadarInterferenceMapper,
    ResourceGrid,
    coupling_gain,
    overlay_radar_interference,
    spectral_weights,
    symbol_overlap_fractions,
)
from radarlte.network import Cell, build_layout
from radarlte.propagation import PropagationParams, itm_loss_db
from radarlte.radar import PulseEvent, RadarConfig, emitted_eirp_dbm, pulse_train

TAU = 78e-6


def radar_elevation_deg(d_km, prop=PropagationParams()):
    return math.degrees(math.atan2(prop.radar_antenna_height_m - 25.0, d_km * 1e3))


def facing_cell(**kw):
    # centre site, sector pointing at a ship due north (+y)
    return Cell(0, 0, (0.0, 0.0), 90.0, **kw)


# --- coupling -----------------------------------------------------------------

def test_main_beam_50km_peak_gain():
    r = RadarConfig(bearing_deg=90.0)
    c = coupling_gain(r, 270.0, facing_cell(), 50.0)
    assert c.radar_off_boresight_deg == pytest.approx(0.0, abs=1e-9)
    assert c.enb_gain_toward_radar_db == pytest.approx(17.0)
    el_loss = 126.0 - emitted_eirp_dbm(r, 0.0, radar_elevation_deg(50.0))
    assert 0.0 <= el_loss < 0.1
    assert c.received_pulse_power_dbm == pytest.approx(126.0 - el_loss - itm_loss_db(50.0) + 17.0, abs=1e-9)
    assert c.received_pulse_power_dbm == pytest.approx(-12.0, abs=5.0)


def test_main_beam_200km():
    r = RadarConfig()
    c = coupling_gain(r, 270.0, facing_cell(), 200.0)
    eirp = emitted_eirp_dbm(r, 0.0, radar_elevation_deg(200.0))
    assert c.received_pulse_power_dbm == pytest.approx(eirp - itm_loss_db(200.0) + 17.0, abs=1e-9)
    assert c.received_pulse_power_dbm == pytest.approx(-57.0, abs=5.0)


def test_backlobe_is_fifty_db_down():
    cell = facing_cell()
    main = coupling_gain(RadarConfig(), 270.0, cell, 50.0)
    for off in (6.04, 20.0, 180.0):
        back = coupling_gain(RadarConfig(), 270.0 + off, cell, 50.0)
        # the small elevation offset trims the main beam only
        assert main.received_pulse_power_dbm - back.received_pulse_power_dbm == pytest.approx(50.0, abs=0.05)


def test_geometric_elevation_discrimination():
    cell = facing_cell()
    geo = coupling_gain(RadarConfig(), 270.0, cell, 50.0, enb_elevation="geometric")
    # a horizon target seen through a 12 deg downtilt
    assert geo.enb_gain_toward_radar_db == pytest.approx(17.0 - 12 * (12.0 / 10.0) ** 2, abs=0.1)


def test_pattern_off_is_peak_gain():
    cell = Cell(1, 0, (0.0, 0.0), 210.0)
    c = coupling_gain(RadarConfig(), 270.0, cell, 50.0, apply_enb_pattern=False)
    assert c.enb_gain_toward_radar_db == 17.0


def test_coupling_invariant():
    c = coupling_gain(RadarConfig(), 123.0, Cell(4, 1, (500.0, 0.0), 330.0), 75.0)
    assert c.received_pulse_power_dbm == pytest.approx(
        c.enb_gain_toward_radar_db - c.path_loss_db
        + emitted_eirp_dbm(RadarConfig(), c.radar_off_boresight_deg,
                           radar_elevation_deg(math.hypot(500.0, 75e3) / 1e3)),
        abs=1e-9)


def test_distance_must_be_positive():
    with pytest.raises(ValueError):
        coupling_gain(RadarConfig(), 0.0, facing_cell(), 0.0)


# --- spectral weights -----------------------------------------------------------

def sinc2(u):
    return 1.0 if u == 0 else (math.sin(math.pi * u) / (math.pi * u)) ** 2


def quad_bin(k, tau=TAU, df=15e3):
    a, b = (k - 0.5) * df * tau, (k + 0.5) * df * tau
    return quad(sinc2, a, b, limit=200)[0]


def test_center_weight_against_quadrature():
    w = spectral_weights(TAU)
    total = sum(quad_bin(k) for k in range(-300, 300))
    oracle = quad_bin(0) / total
    assert w[300] == pytest.approx(oracle, abs=1e-9)
    assert w[300] == pytest.approx(0.82, abs=0.02)


def test_bins_against_quadrature():
    w = spectral_weights(TAU)
    total = sum(quad_bin(k) for k in range(-300, 300))
    for k in (1, 2, 5, 17, 120, 299):
        assert w[300 + k] == pytest.approx(quad_bin(k) / total, rel=1e-6)


@given(st.floats(1e-6, 4e-4), st.integers(24, 1200), st.data())
def test_weights_normalized_and_symmetric(tau, n, data):
    c = data.draw(st.integers(0, n - 1))
    w = spectral_weights(tau, 15e3, n, c)
    assert w.sum() == pytest.approx(1.0, abs=1e-9)
    assert np.all(w >= 0)
    m = min(c, n - 1 - c)
    assert np.allclose(w[c - m:c], w[c + 1:c + m + 1][::-1], rtol=1e-9, atol=1e-15)


def test_weights_bad_args():
    with pytest.raises(ValueError):
        spectral_weights(0.0)
    with pytest.raises(ValueError):
        spectral_weights(TAU, 15e3, 600, 600)


# --- temporal overlap -------------------------------------------------------------

def test_aligned_pulse():
    f = symbol_overlap_fractions(3 * SYMBOL_DURATION_S, TAU, 0.0)
    assert f[3] == pytest.approx(1.0)
    assert f[4] == pytest.approx(6.6 / 71.4, abs=1e-9)
    assert f[4] == pytest.approx(0.092, abs=1e-3)
    assert np.count_nonzero(f) == 2


def test_consecutive_pulses_seven_symbols_apart():
    f1 = symbol_overlap_fractions(0.0, TAU, 0.0)
    f2 = symbol_overlap_fractions(0.5e-3, TAU, 0.0)
    assert int(np.argmax(f2)) - int(np.argmax(f1)) == 7


def test_pulse_outside_tti():
    assert not symbol_overlap_fractions(2e-3, TAU, 0.0).any()
    assert not symbol_overlap_fractions(-1e-3, TAU, 0.0).any()


def brute_force_overlap(p0, tau, t0, ts=SYMBOL_DURATION_S, n=14):
    # direct interval intersection, one symbol at a time, in integer picoseconds
    ps = lambda x: round(x * 1e12)
    a, b = ps(p0), ps(p0 + tau)
    out = []
    for s in range(n):
        lo, hi = ps(t0 + s * ts), ps(t0 + (s + 1) * ts)
        out.append(max(0, min(b, hi) - max(a, lo)) / ps(ts))
    return np.array(out)


@given(st.floats(-2e-4, 1.1e-3), st.floats(1e-6, 1.4e-4))
def test_overlap_matches_brute_force(p0, tau):
    f = symbol_overlap_fractions(p0, tau, 0.0)
    assert np.allclose(f, brute_force_overlap(p0, tau, 0.0), atol=1e-7)
    assert np.all((f >= 0) & (f <= 1))


@given(st.floats(-2e-4, 1.1e-3), st.floats(1e-6, 1.4e-4))
def test_overlap_accounts_for_time_inside_tti(p0, tau):
    f = symbol_overlap_fractions(p0, tau, 0.0)
    inside = max(0.0, min(p0 + tau, 14 * SYMBOL_DURATION_S) - max(p0, 0.0))
    assert f.sum() * SYMBOL_DURATION_S == pytest.approx(inside, abs=1e-12)


def test_overlap_brute_force_precision():
    rng = np.random.default_rng(0)
    for p0 in rng.uniform(0, 1e-3, 200):
        # same arithmetic in a different order: start relative to each symbol
        f = symbol_overlap_fractions(p0, TAU, 0.0)
        ref = np.array([max(0.0, min(p0 + TAU - s * SYMBOL_DURATION_S, SYMBOL_DURATION_S)
                             - max(p0 - s * SYMBOL_DURATION_S, 0.0)) / SYMBOL_DURATION_S for s in range(14)])
        assert np.max(np.abs(f - ref)) <= 1e-12


@given(st.floats(0.0, 1e-3))
def test_short_pulse_touches_at_most_three_symbols(p0):
    # tau < 2 symbols: two in general, three when it straddles a whole symbol
    f = symbol_overlap_fractions(p0, TAU, 0.0)
    assert np.count_nonzero(f) <= 3
    assert np.count_nonzero(f > 1e-9) <= 2 or TAU > SYMBOL_DURATION_S


def test_free_running_clock_touches_two_symbols_per_pulse():
    cfg = RadarConfig()
    for tti in range(20):
        for p in pulse_train(cfg, tti * 1e-3, (tti + 1) * 1e-3):
            assert np.count_nonzero(symbol_overlap_fractions(p.start_s, p.duration_s, tti * 1e-3)) == 2


# --- grid overlay ---------------------------------------------------------------------

def pulse(t):
    return PulseEvent(t, TAU, 0.0, 0, 0)


def test_no_pulses_leaves_grid_unchanged():
    g = ResourceGrid.empty(0)
    overlay_radar_interference(g, [], 1.0, spectral_weights(TAU), 0.0)
    assert not g.radar_interference_mw.any()


def test_aligned_pulse_support():
    w = spectral_weights(TAU)
    g = overlay_radar_interference(ResourceGrid.empty(0), [pulse(0.0)], 2.0, w, 0.0)
    rows = np.flatnonzero(g.radar_interference_mw.any(axis=1))
    assert rows.tolist() == [0, 1]
    assert np.count_nonzero(g.radar_interference_mw[0]) == np.count_nonzero(w)


@given(st.floats(-1e-4, 1.05e-3), st.floats(1e-6, 1.0))
def test_energy_conservation(t, p_mw):
    w = spectral_weights(TAU)
    g = overlay_radar_interference(ResourceGrid.empty(0), [pulse(t)], p_mw, w, 0.0)
    inside = max(0.0, min(t + TAU, 14 * SYMBOL_DURATION_S) - max(t, 0.0))
    energy = g.radar_interference_mw.sum() * SYMBOL_DURATION_S
    assert energy == pytest.approx(p_mw * inside, rel=1e-6, abs=1e-18)


@settings(max_examples=20)
@given(st.floats(50.0, 150.0), st.floats(1.0, 100.0), st.integers(0, 30))
def test_grid_monotone_in_distance(d, extra, tti):
    layout = build_layout()
    prop = PropagationParams()
    cfg = RadarConfig()
    t0 = tti * 1e-3
    pulses = pulse_train(cfg, t0 - TAU, t0 + 1e-3)
    near = RadarInterferenceMapper(cfg, layout, d, prop, 600).grids(tti, t0, pulses)
    far = RadarInterferenceMapper(cfg, layout, d + extra, prop, 600).grids(tti, t0, pulses)
    assert np.all(far <= near * (1 + 1e-12))
