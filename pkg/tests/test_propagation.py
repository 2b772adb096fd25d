import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from radarlte.itm import ITMDomainError
from radarlte.propagation import (
    PropagationDomainError,
    PropagationParams,
    fspl_db,
    itm_loss_db,
    los_horizon_km,
    radar_path_loss_db,
    sample_shadowing_db,
    uma_los_probability,
    uma_pathloss_db,
)


def test_fspl_anchor():
    assert fspl_db(3500.0, 10.0) == pytest.approx(123.33, abs=0.01)


@given(st.floats(20.0, 20000.0), st.floats(0.01, 1000.0))
def test_fspl_twenty_db_per_decade(f, r):
    assert fspl_db(f, 10 * r) - fspl_db(f, r) == pytest.approx(20.0, abs=1e-9)
    assert fspl_db(10 * f, r) - fspl_db(f, r) == pytest.approx(20.0, abs=1e-9)


def test_fspl_domain():
    with pytest.raises(PropagationDomainError):
        fspl_db(3500.0, 0.0)


def test_horizon():
    assert los_horizon_km(50.0, 25.0) == pytest.approx(49.49, abs=0.01)


def test_radar_path_switches_at_horizon():
    p = PropagationParams()
    h = los_horizon_km(p.radar_antenna_height_m, p.lte_antenna_height_m)
    assert radar_path_loss_db(h - 0.01, p) == pytest.approx(fspl_db(3500.0, h - 0.01))
    assert radar_path_loss_db(h + 0.01, p) == itm_loss_db(h + 0.01, p)


@pytest.mark.parametrize("d,anchor", [(50, 155), (100, 188), (150, 193), (200, 200)])
def test_itm_anchor_within_five_db(d, anchor):
    assert abs(itm_loss_db(d) - anchor) <= 5.0


def test_itm_below_one_km():
    with pytest.raises(ITMDomainError):
        itm_loss_db(0.5)


def test_invalid_refractivity():
    from radarlte.propagation import ItmParams
    with pytest.raises(ITMDomainError):
        ItmParams(surface_refractivity=200.0)


def test_los_probability_limits():
    assert uma_los_probability(10.0) == pytest.approx(1.0)
    d = 500.0
    expected = 18 / d * (1 - math.exp(-d / 63)) + math.exp(-d / 63)
    assert uma_los_probability(d) == pytest.approx(expected)


def test_uma_breakpoint_and_values():
    p = PropagationParams()
    d_bp = 4 * 24 * 0.5 * 3.5e9 / 299_792_458.0
    assert d_bp == pytest.approx(560.4, abs=0.1)
    # LoS below the breakpoint: 22 log d + 28 + 20 log fc
    assert uma_pathloss_db(100.0, True, p) == pytest.approx(22 * 2 + 28 + 20 * math.log10(3.5))
    # both LoS branches meet near the breakpoint (within 1 dB)
    lo = uma_pathloss_db(d_bp - 1e-6, True, p)
    hi = uma_pathloss_db(d_bp + 1e-6, True, p)
    assert abs(lo - hi) < 1.0


def test_uma_indoor_penetration():
    p = PropagationParams()
    assert uma_pathloss_db(200.0, False, p, indoor=True) - uma_pathloss_db(200.0, False, p) == pytest.approx(20.0)


def test_uma_minimum_distance():
    with pytest.raises(PropagationDomainError):
        uma_pathloss_db(10.0, True)


@given(st.floats(25.0, 5000.0), st.floats(1.0, 2.0))
def test_uma_monotone(d, k):
    for los in (True, False):
        assert uma_pathloss_db(d * k, los) >= uma_pathloss_db(d, los) - 1e-9


def test_shadowing_sigma():
    rng = np.random.default_rng(0)
    los = np.tile([True, False], 20000)
    s = sample_shadowing_db(los, rng)
    assert np.std(s[los]) == pytest.approx(4.0, rel=0.03)
    assert np.std(s[~los]) == pytest.approx(6.0, rel=0.03)
    assert abs(np.mean(s)) < 0.1
