"""Throughput aggregation, CDFs, baseline-relative loss and CSV writers."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

CDF_POINTS = 101
DOMINANCE_EPS = 0.05


def fmt(x) -> str:
    """Six significant digits, the precision of every CSV this package writes."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.6g}"


@dataclass
class ScenarioReport:
    scenario_label: str
    seed_used: int
    distance_km: float | None
    per_ue_throughput: list[tuple[int, float]]
    cdf_points: list[tuple[float, float]]
    sinr_dump_path: Path | None = None
    stats: dict[str, float] = field(default_factory=dict)

    @property
    def mean_throughput(self) -> float:
        if not self.per_ue_throughput:
            return 0.0
        return float(np.mean([t for _, t in self.per_ue_throughput]))

    @property
    def throughputs(self) -> np.ndarray:
        return np.array([t for _, t in self.per_ue_throughput], dtype=float)


@dataclass(frozen=True)
class SweepEntry:
    distance_km: float
    mean_throughput_bps: float
    loss_fraction: float
    cdf_path: Path | None = None


@dataclass
class SweepSummary:
    baseline_mean: float
    per_distance: list[SweepEntry]

    def __post_init__(self):
        self.per_distance = sorted(self.per_distance, key=lambda e: e.distance_km)

    def losses(self) -> dict[float, float]:
        return {e.distance_km: e.loss_fraction for e in self.per_distance}


def throughput_cdf(values, n_points: int = CDF_POINTS) -> list[tuple[float, float]]:
    """Empirical CDF sampled at ``n_points`` evenly spaced quantile levels.

    Each point is ``(v, F(v))`` with ``v`` an observed value (inverted-CDF
    quantile) and ``F`` the fraction of samples ``<= v``; the last point is
    ``(max, 1.0)``.
    """
    x = np.sort(np.asarray(values, dtype=float))
    if x.size == 0:
        raise ValueError("throughput_cdf needs at least one value")
    if n_points < 2:
        raise ValueError("n_points must be >= 2")
    q = np.linspace(0.0, 1.0, n_points)
    v = np.quantile(x, q, method="inverted_cdf")
    frac = np.searchsorted(x, v, side="right") / x.size
    return [(float(a), float(b)) for a, b in zip(v, frac)]


def ecdf(values, probes) -> np.ndarray:
    """Fraction of ``values`` at or below each probe."""
    x = np.sort(np.asarray(values, dtype=float))
    if x.size == 0:
        raise ValueError("ecdf needs at least one value")
    return np.searchsorted(x, np.asarray(probes, dtype=float), side="right") / x.size


def cdf_on_grid(values, probes) -> list[tuple[float, float]]:
    probes = np.asarray(probes, dtype=float)
    return [(float(p), float(f)) for p, f in zip(probes, ecdf(values, probes))]


def loss_fraction(baseline, scenario) -> float:
    """``1 - scenario_mean / baseline_mean``; accepts reports or plain means."""
    b = baseline.mean_throughput if isinstance(baseline, ScenarioReport) else float(baseline)
    s = scenario.mean_throughput if isinstance(scenario, ScenarioReport) else float(scenario)
    if b == 0:
        raise ValueError("baseline mean throughput is zero")
    return 1.0 - s / b


def dominance_check(cdf_a, cdf_b, eps: float = DOMINANCE_EPS) -> tuple[bool, float]:
    """Is ``a`` stochastically worse than ``b`` up to ``eps``?

    Both CDFs are ``(probe, fraction)`` sequences on the same probe grid.
    Returns the verdict ``all(F_a >= F_b - eps)`` and the largest amount
    by which ``F_b`` exceeds ``F_a`` (0 when never).
    """
    a = np.asarray(cdf_a, dtype=float).reshape(-1, 2)
    b = np.asarray(cdf_b, dtype=float).reshape(-1, 2)
    if a.shape != b.shape or not np.array_equal(a[:, 0], b[:, 0]):
        raise ValueError("CDFs must share the same probe grid")
    violation = float(max(0.0, np.max(b[:, 1] - a[:, 1])))
    return bool(np.all(a[:, 1] >= b[:, 1] - eps)), violation


# --- writers -------------------------------------------------------------------

def _write_rows(path: Path, header: list[str], rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(x) for x in r])
    return path


def write_per_ue(path, report: ScenarioReport) -> Path:
    return _write_rows(path, ["ue_id", "mean_throughput_bps"], report.per_ue_throughput)


def write_cdf(path, cdf_points) -> Path:
    return _write_rows(path, ["throughput_bps", "cum_fraction"], cdf_points)


def write_sweep_table(path, summary: SweepSummary) -> Path:
    rows = [(e.distance_km, e.mean_throughput_bps, e.loss_fraction) for e in summary.per_distance]
    return _write_rows(path, ["distance_km", "mean_throughput_bps", "loss_fraction"], rows)


def sinr_grid_dump(ttis, grids_db, path, window: tuple[int, int] | None = None) -> Path:
    """Write ``tti,symbol,subcarrier,sinr_db`` rows for one cell.

    ``grids_db`` holds one (symbol, subcarrier) array per TTI; NaN marks
    resource elements without a scheduled UE and is skipped.
    """
    def rows():
        for tti, g in zip(ttis, grids_db):
            if window is not None and not window[0] <= tti < window[1]:
                continue
            s_idx, k_idx = np.nonzero(np.isfinite(g) | np.isneginf(g))
            for s, k in zip(s_idx.tolist(), k_idx.tolist()):
                yield (tti, s, k, g[s, k])
    return _write_rows(path, ["tti", "symbol", "subcarrier", "sinr_db"], rows())


def read_sinr_dump(path) -> dict[int, np.ndarray]:
    """Inverse of :func:`sinr_grid_dump`: tti -> (14, n_sc) array, NaN where absent."""
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    out: dict[int, np.ndarray] = {}
    if data.size == 0:
        return out
    n_sym = int(data[:, 1].max()) + 1
    n_sc = int(data[:, 2].max()) + 1
    for tti in np.unique(data[:, 0]).astype(int):
        rows = data[data[:, 0] == tti]
        g = np.full((max(n_sym, 14), n_sc), np.nan)
        g[rows[:, 1].astype(int), rows[:, 2].astype(int)] = rows[:, 3]
        out[int(tti)] = g
    return out
