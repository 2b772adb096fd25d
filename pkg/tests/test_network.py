import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from radarlte.antennas import SectorPatternParams
from radarlte.network import (
    PowerControl,
    attach_users,
    build_layout,
    drop_users,
    layout_rows,
    move_users,
    uplink_tx_power_dbm,
    wrap_into_cluster,
    wrapped_distance,
    wrapped_vectors,
)
from radarlte.propagation import PropagationParams

LAYOUT = build_layout()


def pairwise(sites):
    d = np.hypot(*(sites[:, None, :] - sites[None, :, :]).transpose(2, 0, 1))
    return d[np.triu_indices(len(sites), 1)]


def test_site_distances():
    d = np.round(pairwise(LAYOUT.sites), 2)
    assert set(d.tolist()) == {500.0, 866.03, 1000.0}


def test_site_distances_scale():
    d = pairwise(build_layout(1000.0).sites)
    assert np.allclose(np.sort(d), 2 * np.sort(pairwise(LAYOUT.sites)))


def test_cells_and_azimuths():
    assert LAYOUT.n_cells == 21
    for s in range(7):
        az = sorted(c.azimuth_deg for c in LAYOUT.cells if c.site_id == s)
        assert az == [90.0, 210.0, 330.0]
    assert all(c.n_subcarriers == 12 * c.n_rb for c in LAYOUT.cells)


def test_extent_fits_the_plotted_area():
    x0, x1, y0, y1 = LAYOUT.area_extent_m
    assert x1 - x0 == pytest.approx(1500.0)
    assert y1 - y0 == pytest.approx(2 * (433.0127 + 288.6751), abs=1e-3)
    assert max(x1 - x0, y1 - y0) <= 1600.0


def test_wrap_offsets_tile_the_plane():
    # each translation maps the cluster onto a neighbour without overlap:
    # translated sites stay at least one ISD from every original site
    for off in LAYOUT.wraparound_offsets:
        assert np.hypot(*off) == pytest.approx(500 * math.sqrt(7))
        moved = LAYOUT.sites + off
        d = np.hypot(*(moved[:, None, :] - LAYOUT.sites[None, :, :]).transpose(2, 0, 1))
        assert d.min() >= 500.0 - 1e-6


def test_drop_defaults():
    ues = drop_users(LAYOUT, 10, 0.8, np.random.default_rng(1))
    assert len(ues) == 210
    assert np.bincount([u.serving_cell for u in ues], minlength=21).tolist() == [10] * 21
    for u in ues:
        v = wrapped_vectors(LAYOUT, u.pos[None, :])[0]
        assert np.hypot(*v.T).min() >= 25.0
        assert 0.0 <= u.heading_deg < 360.0
        assert u.speed_mps == pytest.approx(3 / 3.6)


def test_drop_all_outdoor():
    ues = drop_users(LAYOUT, 2, 0.0, np.random.default_rng(2))
    assert not any(u.indoor for u in ues)


def test_indoor_fraction_binomial():
    ues = drop_users(LAYOUT, 477, 0.8, np.random.default_rng(3), shadowing=False)
    frac = np.mean([u.indoor for u in ues])
    assert len(ues) >= 10_000
    assert frac == pytest.approx(0.8, abs=0.01)


def test_attach_to_boresight_cell():
    ues = drop_users(LAYOUT, 1, 0.0, np.random.default_rng(4), shadowing=False)
    u = ues[0]
    u.pos = np.array([0.0, 100.0])  # 100 m out along the 90 deg sector of the centre site
    u.los = np.ones(7, bool)
    u.shadowing_db = np.zeros(21)
    attach_users([u], LAYOUT)
    assert u.serving_cell == 0


def test_attach_deterministic_without_shadowing():
    a = drop_users(LAYOUT, 2, 0.5, np.random.default_rng(5), shadowing=False)
    before = [u.serving_cell for u in a]
    attach_users(a, LAYOUT)
    assert [u.serving_cell for u in a] == before


def test_attachment_invariant_under_global_offset():
    ues = drop_users(LAYOUT, 2, 0.5, np.random.default_rng(6))
    before = [u.serving_cell for u in ues]
    for u in ues:
        u.shadowing_db = u.shadowing_db + 7.5
    attach_users(ues, LAYOUT)
    assert [u.serving_cell for u in ues] == before


pts = st.tuples(st.floats(-900, 900), st.floats(-900, 900)).map(np.array)


@given(pts, pts)
def test_wrapped_distance_symmetric_and_short(a, b):
    d_ab = wrapped_distance(LAYOUT, a, b)
    assert d_ab == pytest.approx(wrapped_distance(LAYOUT, b, a), abs=1e-6)
    assert d_ab <= np.hypot(*(a - b)) + 1e-9


@given(st.floats(-5000, 5000), st.floats(-5000, 5000))
@settings(max_examples=40)
def test_wrap_into_cluster_lands_inside(x, y):
    p = wrap_into_cluster(LAYOUT, np.array([[x, y]]))[0]
    d = np.hypot(*(LAYOUT.sites - p).T).min()
    assert d <= 500 / math.sqrt(3) + 1e-6


def test_mobility():
    ues = drop_users(LAYOUT, 1, 0.8, np.random.default_rng(7))
    start = np.array([u.pos.copy() for u in ues])
    move_users(ues, 0.0, LAYOUT)
    assert np.array_equal(start, np.array([u.pos for u in ues]))
    move_users(ues, 1.0)
    step = np.hypot(*(np.array([u.pos for u in ues]) - start).T)
    assert np.allclose(step, 3 / 3.6)
    n = len(ues)
    for _ in range(5):
        move_users(ues, 1.0, LAYOUT)
    assert len(ues) == n
    with pytest.raises(ValueError):
        move_users(ues, -1.0)


def test_five_second_displacement():
    ues = drop_users(LAYOUT, 1, 0.8, np.random.default_rng(8))
    start = np.array([u.pos.copy() for u in ues])
    move_users(ues, 5.0)
    assert np.allclose(np.hypot(*(np.array([u.pos for u in ues]) - start).T), 4.1667, atol=1e-3)


def test_power_control():
    pc = PowerControl()
    assert uplink_tx_power_dbm(1, 200.0, pc) == 23.0
    assert uplink_tx_power_dbm(1, 120.0, PowerControl(alpha=0.0)) == pytest.approx(-82.0)
    a = uplink_tx_power_dbm(2, 100.0, pc)
    b = uplink_tx_power_dbm(4, 100.0, pc)
    assert b - a == pytest.approx(10 * math.log10(2))
    with pytest.raises(ValueError):
        uplink_tx_power_dbm(0, 100.0, pc)


@given(st.integers(1, 100), st.floats(40.0, 250.0))
def test_power_never_above_cap(n, pl):
    assert uplink_tx_power_dbm(n, pl) <= 23.0


def test_layout_rows():
    rows = layout_rows(LAYOUT)
    assert len(rows) == 7 + 21
    assert rows[0][0] == "site" and rows[7][0] == "cell"
