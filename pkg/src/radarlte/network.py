"""Hexagonal 7-site / 21-cell layout with wrap-around, UE drop, attachment and mobility."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .antennas import SectorPatternParams, sector_composite_gain_db
from .propagation import (
    MIN_UE_DISTANCE_M,
    PropagationParams,
    uma_los_probability,
    uma_pathloss_db,
)

SECTOR_AZIMUTHS_DEG = (90.0, 210.0, 330.0)
N_SITES = 7


@dataclass(frozen=True)
class Cell:
    cell_id: int
    site_id: int
    site_pos: tuple[float, float]
    azimuth_deg: float
    antenna: SectorPatternParams = field(default_factory=SectorPatternParams)
    height_m: float = 25.0
    noise_figure_db: float = 5.0
    carrier_bandwidth_hz: float = 10e6
    n_rb: int = 50
    n_subcarriers: int = 600

    def __post_init__(self):
        if self.n_subcarriers != 12 * self.n_rb:
            raise ValueError("n_subcarriers must equal 12 * n_rb")


@dataclass(frozen=True)
class NetworkLayout:
    isd_m: float
    sites: np.ndarray  # (7, 2)
    cells: tuple[Cell, ...]
    wraparound_offsets: np.ndarray  # (6, 2)

    @property
    def n_cells(self) -> int:
        return len(self.cells)

    @property
    def cell_site(self) -> np.ndarray:
        return np.array([c.site_id for c in self.cells])

    @property
    def cell_azimuth(self) -> np.ndarray:
        return np.array([c.azimuth_deg for c in self.cells])

    @property
    def image_offsets(self) -> np.ndarray:
        """Zero shift followed by the six cluster translations, shape (7, 2)."""
        return np.vstack([np.zeros((1, 2)), self.wraparound_offsets])

    @property
    def area_extent_m(self) -> tuple[float, float, float, float]:
        """Bounding box (x0, x1, y0, y1) of the union of the site hexagons."""
        r = self.isd_m / math.sqrt(3.0)
        xs, ys = self.sites[:, 0], self.sites[:, 1]
        hx = r * math.sqrt(3.0) / 2.0  # flat sides face +/- x
        return (xs.min() - hx, xs.max() + hx, ys.min() - r, ys.max() + r)


@dataclass
class UserTerminal:
    ue_id: int
    pos: np.ndarray
    height_m: float = 1.5
    indoor: bool = False
    speed_mps: float = 3.0 / 3.6
    heading_deg: float = 0.0
    serving_cell: int = -1
    shadowing_db: np.ndarray | None = None  # per cell
    los: np.ndarray | None = None  # per site
    tx_power_max_dbm: float = 23.0


@dataclass(frozen=True)
class PowerControl:
    p0_dbm: float = -82.0
    alpha: float = 0.8
    p_max_dbm: float = 23.0


def build_layout(isd_m: float = 500.0, antenna: SectorPatternParams = SectorPatternParams(),
                 n_rb: int = 50, noise_figure_db: float = 5.0, height_m: float = 25.0) -> NetworkLayout:
    if isd_m <= 0:
        raise ValueError("isd_m must be > 0")
    angles = np.radians(np.arange(6) * 60.0)
    ring = isd_m * np.column_stack([np.cos(angles), np.sin(angles)])
    sites = np.vstack([np.zeros((1, 2)), ring])
    # 7-site cluster tiling vector (2 a1 + a2) and its 60 deg rotations
    base = isd_m * np.array([2.5, math.sqrt(3.0) / 2.0])
    offsets = []
    for k in range(6):
        a = math.radians(60.0 * k)
        rot = np.array([[math.cos(a), -math.sin(a)], [math.sin(a), math.cos(a)]])
        offsets.append(rot @ base)
    bw = 180e3 * n_rb / 0.9
    cells = []
    for s in range(N_SITES):
        for az in SECTOR_AZIMUTHS_DEG:
            cells.append(
                Cell(
                    cell_id=len(cells),
                    site_id=s,
                    site_pos=(float(sites[s, 0]), float(sites[s, 1])),
                    azimuth_deg=az,
                    antenna=antenna,
                    height_m=height_m,
                    noise_figure_db=noise_figure_db,
                    carrier_bandwidth_hz=bw,
                    n_rb=n_rb,
                    n_subcarriers=12 * n_rb,
                )
            )
    return NetworkLayout(isd_m, sites, tuple(cells), np.array(offsets))


def wrapped_vectors(layout: NetworkLayout, points: np.ndarray) -> np.ndarray:
    """Shortest displacement site -> point over wrap-around images, shape (n_pts, 7, 2)."""
    pts = np.atleast_2d(points)
    # (n, site, image, 2)
    images = layout.sites[None, :, None, :] + layout.image_offsets[None, None, :, :]
    delta = pts[:, None, None, :] - images
    dist = np.hypot(delta[..., 0], delta[..., 1])
    best = np.argmin(dist, axis=2)
    n_idx, s_idx = np.meshgrid(np.arange(pts.shape[0]), np.arange(N_SITES), indexing="ij")
    return delta[n_idx, s_idx, best]


def wrapped_distance(layout: NetworkLayout, a: np.ndarray, b: np.ndarray) -> float:
    """Distance between two points using the closest wrap-around image of ``b``."""
    images = np.asarray(b)[None, :] + layout.image_offsets
    return float(np.min(np.hypot(*(images - np.asarray(a)[None, :]).T)))


def wrap_into_cluster(layout: NetworkLayout, points: np.ndarray) -> np.ndarray:
    """Map points back into the central cluster by removing cluster translations."""
    pts = np.atleast_2d(np.asarray(points, dtype=float)).copy()
    # each pass removes one cluster translation; far points need several
    for _ in range(64):
        images = layout.sites[None, :, None, :] + layout.image_offsets[None, None, :, :]
        dist = np.hypot(*(pts[:, None, None, :] - images).transpose(3, 0, 1, 2))
        flat = dist.reshape(pts.shape[0], -1)
        best_image = np.argmin(flat, axis=1) % layout.image_offsets.shape[0]
        shift = layout.image_offsets[best_image]
        if not np.any(best_image):
            break
        pts -= shift
    return pts


@dataclass(frozen=True)
class LinkGeometry:
    distance_m: np.ndarray  # (n_ue, n_cells), 2-D, clipped to the UMa minimum
    az_off_deg: np.ndarray  # (n_ue, n_cells)
    el_off_deg: np.ndarray  # (n_ue, n_cells) depression below horizon


def link_geometry(layout: NetworkLayout, positions: np.ndarray, ue_height_m: float = 1.5) -> LinkGeometry:
    vec = wrapped_vectors(layout, positions)  # (n, site, 2)
    site = layout.cell_site
    v = vec[:, site, :]  # (n, cell, 2)
    d = np.hypot(v[..., 0], v[..., 1])
    bearing = np.degrees(np.arctan2(v[..., 1], v[..., 0]))
    az_off = bearing - layout.cell_azimuth[None, :]
    h = layout.cells[0].height_m - ue_height_m
    el = np.degrees(np.arctan2(h, np.maximum(d, 1e-9)))
    return LinkGeometry(np.maximum(d, MIN_UE_DISTANCE_M), az_off, el)


def coupling_loss_db(layout: NetworkLayout, geom: LinkGeometry, los: np.ndarray, indoor: np.ndarray,
                     shadowing_db: np.ndarray, prop: PropagationParams) -> np.ndarray:
    """Path loss + shadowing - eNB antenna gain, per (UE, cell), dB."""
    los_cell = los[:, layout.cell_site]
    pl = uma_pathloss_db(geom.distance_m, los_cell, prop, indoor[:, None])
    ant = layout.cells[0].antenna
    g = ant.peak_gain_dbi + sector_composite_gain_db(geom.az_off_deg, geom.el_off_deg, ant)
    return pl + shadowing_db - g


def _sample_point_in_cluster(layout: NetworkLayout, rng: np.random.Generator) -> np.ndarray:
    r = layout.isd_m / math.sqrt(3.0)
    while True:
        s = rng.integers(N_SITES)
        x, y = rng.uniform(-r, r, size=2)
        # hexagon with vertices at 30 + 60k deg, circumradius r
        ax, ay = abs(x), abs(y)
        if ay <= r * math.sqrt(3.0) / 2.0 and ay <= math.sqrt(3.0) * (r - ax):
            # vertex-on-x hexagon; rotate 30 deg for this lattice's Voronoi cell
            c, si = math.cos(math.pi / 6), math.sin(math.pi / 6)
            p = np.array([c * x - si * y, si * x + c * y]) + layout.sites[s]
            if math.hypot(*(p - layout.sites[s])) >= MIN_UE_DISTANCE_M:
                return p


def drop_users(layout: NetworkLayout, per_cell: int, indoor_fraction: float, rng: np.random.Generator,
               prop: PropagationParams = PropagationParams(), speed_kmh: float = 3.0,
               tx_power_max_dbm: float = 23.0, shadowing: bool = True,
               shadow_rng: np.random.Generator | None = None) -> list[UserTerminal]:
    """Drop exactly ``per_cell`` UEs into every cell.

    Candidates are uniform over the cluster; each is attached to its best
    cell and re-dropped when that cell is already full.
    """
    if per_cell < 1:
        raise ValueError("per_cell must be >= 1")
    shadow_rng = rng if shadow_rng is None else shadow_rng
    counts = np.zeros(layout.n_cells, dtype=int)
    ues: list[UserTerminal] = []
    max_tries = 2000 * per_cell * layout.n_cells
    tries = 0
    while len(ues) < per_cell * layout.n_cells:
        tries += 1
        if tries > max_tries:
            raise RuntimeError("could not fill every cell; check layout parameters")
        pos = _sample_point_in_cluster(layout, rng)
        indoor = bool(rng.random() < indoor_fraction)
        heading = float(rng.uniform(0.0, 360.0))
        geom = link_geometry(layout, pos[None, :], prop.ue_antenna_height_m)
        d_site = geom.distance_m[0, ::3]
        los = rng.random(N_SITES) < uma_los_probability(d_site)
        if shadowing:
            sigma = np.where(los[layout.cell_site], prop.uma.sigma_los_db, prop.uma.sigma_nlos_db)
            shadow = shadow_rng.standard_normal(layout.n_cells) * sigma
        else:
            shadow = np.zeros(layout.n_cells)
        cl = coupling_loss_db(layout, geom, los[None, :], np.array([indoor]), shadow[None, :], prop)[0]
        serving = int(np.argmin(cl))
        if counts[serving] >= per_cell:
            continue
        counts[serving] += 1
        ues.append(
            UserTerminal(
                ue_id=len(ues),
                pos=pos,
                height_m=prop.ue_antenna_height_m,
                indoor=indoor,
                speed_mps=speed_kmh / 3.6,
                heading_deg=heading,
                serving_cell=serving,
                shadowing_db=shadow,
                los=los,
                tx_power_max_dbm=tx_power_max_dbm,
            )
        )
    return ues


def attach_users(ues: list[UserTerminal], layout: NetworkLayout, prop: PropagationParams = PropagationParams()) -> dict[int, int]:
    """Serving cell = highest received reference power (lowest coupling loss) over wrap-around images."""
    if not ues:
        return {}
    pos = np.array([u.pos for u in ues])
    geom = link_geometry(layout, pos, prop.ue_antenna_height_m)
    los = np.array([u.los if u.los is not None else np.ones(N_SITES, bool) for u in ues])
    shadow = np.array([u.shadowing_db if u.shadowing_db is not None else np.zeros(layout.n_cells) for u in ues])
    indoor = np.array([u.indoor for u in ues])
    cl = coupling_loss_db(layout, geom, los, indoor, shadow, prop)
    serving = np.argmin(cl, axis=1)
    out = {}
    for u, s in zip(ues, serving):
        u.serving_cell = int(s)
        out[u.ue_id] = int(s)
    return out


def move_users(ues: list[UserTerminal], dt_s: float, layout: NetworkLayout | None = None) -> list[UserTerminal]:
    """Straight-line motion; UEs leaving the cluster re-enter through the wrap-around."""
    if dt_s < 0:
        raise ValueError("dt_s must be >= 0")
    if dt_s == 0 or not ues:
        return ues
    pos = np.array([u.pos for u in ues], dtype=float)
    pos = move_positions(pos, np.array([u.heading_deg for u in ues]), np.array([u.speed_mps for u in ues]), dt_s, layout)
    for u, p in zip(ues, pos):
        u.pos = p
    return ues


def move_positions(pos: np.ndarray, heading_deg: np.ndarray, speed_mps: np.ndarray, dt_s: float,
                   layout: NetworkLayout | None = None) -> np.ndarray:
    h = np.radians(heading_deg)
    step = (speed_mps * dt_s)[:, None] * np.column_stack([np.cos(h), np.sin(h)])
    out = pos + step
    if layout is not None:
        out = wrap_into_cluster(layout, out)
    return out


def uplink_tx_power_dbm(n_rb_granted, pathloss_db, pc: PowerControl = PowerControl()):
    """Open-loop fractional power control, capped at the UE maximum."""
    n = np.asarray(n_rb_granted, dtype=float)
    if np.any(n < 1):
        raise ValueError("n_rb_granted must be >= 1")
    out = np.minimum(pc.p_max_dbm, pc.p0_dbm + 10.0 * np.log10(n) + pc.alpha * np.asarray(pathloss_db, dtype=float))
    return out if out.ndim else float(out)


def layout_rows(layout: NetworkLayout, ues: list[UserTerminal] | None = None) -> list[tuple]:
    """Rows ``entity,id,x_m,y_m,azimuth_deg`` for the layout dump."""
    rows = [("site", i, x, y, "") for i, (x, y) in enumerate(layout.sites)]
    rows += [("cell", c.cell_id, c.site_pos[0], c.site_pos[1], c.azimuth_deg) for c in layout.cells]
    for u in ues or []:
        rows.append(("ue", u.ue_id, u.pos[0], u.pos[1], u.heading_deg))
    return rows
