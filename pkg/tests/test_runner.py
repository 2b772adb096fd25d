import os

import numpy as np
import pytest

from radarlte.config import ConfigError
from radarlte.metrics import loss_fraction
from radarlte.runner import designated_cell, make_streams, run_scenario, simulate, sweep_distances
from radarlte.network import build_layout

from conftest import replace

FILES = ("throughput_per_ue.csv", "throughput_cdf.csv", "sinr_grid.csv", "summary.txt")


def test_run_scenario_writes_outputs(short_cfg):
    r = run_scenario(short_cfg, 50.0)
    d = short_cfg.output_dir / "d50km"
    for f in FILES:
        assert (d / f).exists()
    assert r.scenario_label == "d50km" and r.seed_used == 7
    assert len(r.per_ue_throughput) == 210
    assert r.mean_throughput == pytest.approx(np.mean(r.throughputs))
    assert r.cdf_points[-1][1] == 1.0
    assert (d / "throughput_per_ue.csv").read_text().startswith("ue_id,mean_throughput_bps\n")
    assert "distance_km: 50" in (d / "summary.txt").read_text()


def test_byte_identical_reruns(short_cfg, tmp_path):
    a = run_scenario(short_cfg, 50.0, tmp_path / "a")
    b = run_scenario(short_cfg, 50.0, tmp_path / "b")
    for f in FILES:
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
    assert a.per_ue_throughput == b.per_ue_throughput


def test_baseline_seed_42_byte_identical(short_cfg, tmp_path):
    cfg = replace(short_cfg, seed=42)
    run_scenario(cfg, None, tmp_path / "a")
    run_scenario(cfg, None, tmp_path / "b")
    assert (tmp_path / "a" / "throughput_per_ue.csv").read_bytes() == (tmp_path / "b" / "throughput_per_ue.csv").read_bytes()


def test_seed_changes_results(short_cfg, tmp_path):
    a = run_scenario(short_cfg, None, tmp_path / "a")
    b = run_scenario(replace(short_cfg, seed=8), None, tmp_path / "b")
    assert a.per_ue_throughput != b.per_ue_throughput


@pytest.mark.skipif(os.geteuid() == 0, reason="root ignores directory permissions")
def test_unwritable_dir_fails_before_simulating(short_cfg, tmp_path, monkeypatch):
    locked = tmp_path / "locked"
    locked.mkdir()
    locked.chmod(0o500)
    called = []
    monkeypatch.setattr("radarlte.runner.simulate", lambda *a, **k: called.append(1))
    with pytest.raises(OSError):
        run_scenario(short_cfg, None, locked / "x")
    assert not called


def test_output_path_is_a_file_fails_before_simulating(short_cfg, tmp_path, monkeypatch):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    called = []
    monkeypatch.setattr("radarlte.runner.simulate", lambda *a, **k: called.append(1))
    with pytest.raises(OSError):
        run_scenario(short_cfg, None, blocker / "x")
    assert not called


def test_baseline_has_no_radar(short_cfg):
    sim = simulate(short_cfg, None, n_tti=10)
    assert sim.mapper is None
    assert all(sim.radar_grids(t) is None for t in range(10))
    assert not any(r.any() for r in sim.capture.radar_mw)


def test_distance_must_be_positive(short_cfg):
    with pytest.raises(ConfigError):
        simulate(short_cfg, 0.0)


def test_scenarios_share_the_drop(short_cfg):
    a = simulate(short_cfg, None, n_tti=1)
    b = simulate(short_cfg, 200.0, n_tti=1)
    np.testing.assert_array_equal(a.serving, b.serving)
    np.testing.assert_array_equal(a.shadow, b.shadow)
    np.testing.assert_array_equal(a.pos, b.pos)


def test_streams_are_named_and_independent():
    s = make_streams(1, 21)
    assert {"drop", "shadowing", "mobility", "scheduler", "decode:0", "decode:20"} <= set(s)
    assert s["drop"].random() != s["mobility"].random()


def test_designated_cell_faces_radar():
    layout = build_layout()
    assert layout.cells[designated_cell(layout, 90.0)].azimuth_deg == 90.0
    assert layout.cells[designated_cell(layout, 200.0)].azimuth_deg == 210.0


def test_loss_ordering_one_second(short_cfg):
    cfg = replace(short_cfg, sim_duration_s=1.0)
    base = simulate(cfg, None).mean_throughput_bps().mean()
    near = simulate(cfg, 50.0).mean_throughput_bps().mean()
    far = simulate(cfg, 200.0).mean_throughput_bps().mean()
    assert near < base
    assert abs(loss_fraction(base, far)) < 0.05


def test_sweep(short_cfg):
    cfg = replace(short_cfg, radar_distances_km=(200.0, 50.0))
    summary, reports = sweep_distances(cfg)
    assert [r.scenario_label for r in reports] == ["baseline", "d200km", "d50km"]
    assert [e.distance_km for e in summary.per_distance] == [50.0, 200.0]
    text = (cfg.output_dir / "sweep_summary.csv").read_text().splitlines()
    assert text[0] == "distance_km,mean_throughput_bps,loss_fraction"
    assert len(text) == 3


def test_sweep_parallel_matches_serial(short_cfg, tmp_path):
    cfg = replace(short_cfg, radar_distances_km=(50.0,), sim_duration_s=0.02)
    s1, _ = sweep_distances(replace(cfg, output_dir=tmp_path / "s"))
    s2, _ = sweep_distances(replace(cfg, output_dir=tmp_path / "p"), workers=2)
    assert (tmp_path / "s" / "sweep_summary.csv").read_bytes() == (tmp_path / "p" / "sweep_summary.csv").read_bytes()


def test_sweep_validation(short_cfg):
    with pytest.raises(ConfigError):
        sweep_distances(replace(short_cfg, radar_distances_km=()))
    with pytest.raises(ConfigError):
        sweep_distances(replace(short_cfg, baseline_enabled=False))
