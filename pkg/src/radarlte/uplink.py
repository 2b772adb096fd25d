"""TTI-level TDD uplink: scheduling, per-RE SINR, link adaptation, HARQ and throughput."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import TTI_S, LteConfig
from .interference import SYMBOL_DURATION_S, SYMBOLS_PER_TTI, SUBCARRIER_SPACING_HZ, RadarInterferenceMapper
from .network import (
    NetworkLayout,
    PowerControl,
    UserTerminal,
    coupling_loss_db,
    link_geometry,
    move_positions,
    uplink_tx_power_dbm,
)
from .propagation import PropagationParams, uma_pathloss_db
from .radar import RadarConfig, pulse_train

THERMAL_NOISE_DBM_HZ = -174.0
RB_BANDWIDTH_HZ = 180e3


@dataclass(frozen=True)
class McsEntry:
    index: int
    spectral_efficiency: float
    snr_threshold_db: float
    modulation_order: int
    beta: float


_CQI_EFF = (0.1523, 0.2344, 0.3770, 0.6016, 0.8770, 1.1758, 1.4766, 1.9141,
            2.4063, 2.7305, 3.3223, 3.9023, 4.5234, 5.1152, 5.5547)
_CQI_SNR = (-6.7, -4.7, -2.3, 0.2, 2.4, 4.3, 5.9, 8.1, 10.3, 11.7, 14.1, 16.3, 18.7, 21.0, 22.7)


def build_mcs_table(beta_step: float = 0.25) -> tuple[McsEntry, ...]:
    """15-entry table: CQI efficiencies, 10 % BLER thresholds, EESM beta ``1 + step (i - 1)``."""
    out = []
    for i, (eff, thr) in enumerate(zip(_CQI_EFF, _CQI_SNR), start=1):
        mod = 2 if i <= 6 else 4 if i <= 9 else 6
        out.append(McsEntry(i, eff, thr, mod, 1.0 + beta_step * (i - 1)))
    return tuple(out)


MCS_TABLE = build_mcs_table()


@dataclass(frozen=True)
class TddFrameConfig:
    pattern: str = "DSUUU"
    symbol_duration_s: float = SYMBOL_DURATION_S
    symbols_per_tti: int = SYMBOLS_PER_TTI

    def subframe_type(self, tti: int) -> str:
        return self.pattern[tti % len(self.pattern)]

    def is_uplink(self, tti: int) -> bool:
        return self.subframe_type(tti) == "U"

    @property
    def ul_fraction(self) -> float:
        return self.pattern.count("U") / len(self.pattern)

    def next_uplink(self, tti: int) -> int:
        """First uplink subframe at or after ``tti``."""
        if "U" not in self.pattern:
            raise ValueError("pattern has no uplink subframe")
        t = tti
        while not self.is_uplink(t):
            t += 1
        return t


@dataclass
class HarqProcess:
    payload_bits: int
    rb_allocation: tuple[int, int]  # (first RB, RB count)
    mcs: McsEntry
    tx_count: int = 0
    accumulated_sinr_linear: float = 0.0
    next_tx_tti: int = -1
    closed: bool = False


def noise_per_subcarrier_dbm(noise_figure_db: float = 5.0, spacing_hz: float = SUBCARRIER_SPACING_HZ) -> float:
    return THERMAL_NOISE_DBM_HZ + 10.0 * math.log10(spacing_hz) + noise_figure_db


def db2lin(x):
    return 10.0 ** (np.asarray(x, dtype=float) / 10.0)


def lin2db(x):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(x)


def effective_sinr_db(sinr_db, beta: float) -> float:
    """EESM: ``-beta ln(mean exp(-sinr / beta))`` over all resource elements, in dB."""
    g = db2lin(sinr_db).ravel()
    if g.size == 0:
        raise ValueError("empty allocation")
    if beta <= 0:
        raise ValueError("beta must be > 0")
    x = -g / beta
    # log-mean-exp, stable for large SINR
    m = x.max()
    lme = m + math.log(np.mean(np.exp(x - m)))
    return float(lin2db(-beta * lme))


def select_mcs(measured_db: float | None, olla_offset_db: float = 0.0,
               table: tuple[McsEntry, ...] = MCS_TABLE) -> McsEntry:
    """Highest MCS whose threshold is at or below the adjusted measurement; MCS 1 on cold start."""
    if measured_db is None:
        return table[0]
    target = measured_db + olla_offset_db
    best = table[0]
    for m in table:
        if m.snr_threshold_db <= target:
            best = m
    return best


def link_adaptation(measured_history: list[float], olla_offset_db: float,
                    table: tuple[McsEntry, ...] = MCS_TABLE) -> McsEntry:
    """MCS from the most recent effective-SINR measurement plus the OLLA offset."""
    return select_mcs(measured_history[-1] if measured_history else None, olla_offset_db, table)


def olla_update(offset_db: float, success: bool, step_down_db: float = 0.5, bler_target: float = 0.1,
                clamp_db: float = 10.0) -> float:
    """Step down on failure, up by ``step * target / (1 - target)`` on success."""
    up = step_down_db * bler_target / (1.0 - bler_target)
    new = offset_db + up if success else offset_db - step_down_db
    return min(max(new, -clamp_db), clamp_db)


def block_error_probability(eff_sinr_db: float, mcs: McsEntry, slope_db: float = 0.5) -> float:
    z = (mcs.snr_threshold_db - eff_sinr_db) / slope_db
    # logistic, written to avoid overflow in either tail
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


def decode_outcome(eff_sinr_db: float, mcs: McsEntry, rng: np.random.Generator, slope_db: float = 0.5) -> bool:
    """True on successful decode."""
    return bool(rng.random() >= block_error_probability(eff_sinr_db, mcs, slope_db))


def harq_combine(proc: HarqProcess, eff_sinr_db: float) -> float:
    """Chase-combine one more transmission; returns the combined SINR in dB."""
    proc.tx_count += 1
    proc.accumulated_sinr_linear += float(db2lin(eff_sinr_db))
    return float(lin2db(proc.accumulated_sinr_linear))


def harq_step(proc: HarqProcess, success: bool, tti: int = 0, frame: TddFrameConfig = TddFrameConfig(),
              max_tx: int = 4, rtt_tti: int = 4) -> tuple[HarqProcess, int]:
    """Close the process on success or after ``max_tx`` attempts; else schedule the retransmission.

    Returns the process and the bits delivered by this step.
    """
    if proc.closed:
        raise ValueError("HARQ process already closed")
    if proc.tx_count > max_tx:
        raise ValueError("tx_count exceeds max_tx")
    if success:
        proc.closed = True
        return proc, proc.payload_bits
    if proc.tx_count >= max_tx:
        proc.closed = True
        return proc, 0
    proc.next_tx_tti = frame.next_uplink(tti + rtt_tti)
    return proc, 0


def split_contiguous(free_start: int, free_len: int, k: int) -> list[tuple[int, int]]:
    """Split ``free_len`` RBs into ``k`` contiguous chunks differing in size by at most one."""
    k = min(k, free_len)
    base, extra = divmod(free_len, k) if k else (0, 0)
    out, s = [], free_start
    for i in range(k):
        n = base + (1 if i < extra else 0)
        out.append((s, n))
        s += n
    return out


def schedule_tti(candidates: list[int], pf_metric: np.ndarray, n_rb: int, rng: np.random.Generator,
                 retx: list[tuple[int, int]] | None = None, max_ues: int = 5,
                 is_uplink: bool = True) -> dict[int, tuple[int, int]]:
    """Proportional-fair RB allocation for one cell.

    Parameters
    ----------
    candidates
        UE ids eligible for a new grant.
    pf_metric
        Instantaneous-rate / average-rate metric aligned with ``candidates``.
    retx
        ``(ue, n_rb)`` pending retransmissions.  They are placed first, from
        the lowest RB upward, and keep their original size.
    max_ues
        Cap on new grants per TTI.

    Returns
    -------
    dict
        ue -> (first RB, RB count).  Allocations are contiguous and disjoint.
    """
    if not is_uplink:
        return {}
    alloc: dict[int, tuple[int, int]] = {}
    nxt = 0
    for ue, n in retx or []:
        if nxt + n <= n_rb:
            alloc[ue] = (nxt, n)
            nxt += n
    free = n_rb - nxt
    cands = [u for u in candidates if u not in alloc]
    if free <= 0 or not cands:
        return alloc
    metric = np.asarray(pf_metric, dtype=float)[[candidates.index(u) for u in cands]]
    # random tie-break key, then highest metric first
    ties = rng.random(len(cands))
    order = np.lexsort((ties, -metric))
    chosen = [cands[i] for i in order[: min(max_ues, free)]]
    chunks = split_contiguous(nxt, free, len(chosen))
    perm = rng.permutation(len(chunks))
    for ue, j in zip(chosen, perm):
        alloc[ue] = chunks[j]
    return alloc


def per_re_sinr(signal_mw, noise_mw: float, cell_interference_mw, radar_mw) -> np.ndarray:
    """``S / (N + I_cell + I_radar)`` in dB; S and I_cell per subcarrier, I_radar per (symbol, subcarrier)."""
    s = np.asarray(signal_mw, dtype=float)
    i = np.asarray(cell_interference_mw, dtype=float)
    r = np.asarray(radar_mw, dtype=float)
    return lin2db(s / (noise_mw + i + r))


@dataclass
class SinrCapture:
    """SINR of one cell over a TTI window, with and without the radar term."""
    cell: int
    window: tuple[int, int]
    ttis: list[int] = field(default_factory=list)
    sinr_db: list[np.ndarray] = field(default_factory=list)
    sinr_no_radar_db: list[np.ndarray] = field(default_factory=list)
    radar_mw: list[np.ndarray] = field(default_factory=list)

    def wants(self, tti: int) -> bool:
        return self.window[0] <= tti < self.window[1]


class UplinkSimulation:
    """State of one scenario; call :meth:`step_tti` once per millisecond."""

    def __init__(self, layout: NetworkLayout, ues: list[UserTerminal], lte: LteConfig, prop: PropagationParams,
                 radar: RadarConfig | None, distance_km: float | None, streams: dict[str, np.random.Generator],
                 sinr_cell: int = 0):
        self.layout = layout
        self.ues = ues
        self.lte = lte
        self.prop = prop
        self.frame = TddFrameConfig(lte.tdd_pattern)
        self.table = build_mcs_table(lte.eesm_beta_step)
        self.pc = PowerControl(lte.p0_dbm, lte.alpha, lte.ue_max_power_dbm)
        self.n_rb = lte.n_rb
        self.n_sc = lte.n_subcarriers
        self.noise_mw = float(db2lin(noise_per_subcarrier_dbm(lte.enb_noise_figure_db)))
        self.sched_rng = streams["scheduler"]
        self.decode_rng = [streams[f"decode:{c}"] for c in range(layout.n_cells)]
        self.radar = radar
        self.mapper = None
        if radar is not None and distance_km is not None:
            self.mapper = RadarInterferenceMapper(radar, layout, distance_km, prop, self.n_sc,
                                                  lte.radar_center_offset, lte.apply_enb_pattern,
                                                  lte.enb_elevation)
        n = len(ues)
        self.tti = 0
        self.pos = np.array([u.pos for u in ues], dtype=float).reshape(n, 2)
        self.heading = np.array([u.heading_deg for u in ues], dtype=float)
        self.speed = np.array([u.speed_mps for u in ues], dtype=float)
        self.serving = np.array([u.serving_cell for u in ues], dtype=int)
        self.indoor = np.array([u.indoor for u in ues], dtype=bool)
        self.los = np.array([u.los for u in ues], dtype=bool).reshape(n, len(layout.sites))
        self.shadow = np.array([u.shadowing_db for u in ues], dtype=float).reshape(n, layout.n_cells)
        self.cell_ues = [np.flatnonzero(self.serving == c).tolist() for c in range(layout.n_cells)]
        self.delivered_bits = np.zeros(n)
        self.granted_bits = np.zeros(n)
        self.avg_rate = np.ones(n)
        self.olla = np.zeros(n)
        self.measured: list[float | None] = [None] * n
        self.harq: list[HarqProcess | None] = [None] * n
        self.n_first_tx = np.zeros(n, dtype=int)
        self.n_first_fail = np.zeros(n, dtype=int)
        self.ul_grants = 0
        self.non_ul_grants = 0
        self.capture = SinrCapture(sinr_cell, lte.sinr_window_tti)
        self.allocation_log: list[dict[int, tuple[int, int]]] = []
        self.log_allocations = False
        self._tti_delivered = np.zeros(n)
        self._decode_u = np.zeros(n)

    # -- helpers -------------------------------------------------------------
    def _link_state(self):
        """Linear gains (cell, ue) and serving path loss for power control."""
        if not self.ues:
            return np.zeros((self.layout.n_cells, 0)), np.zeros(0)
        geom = link_geometry(self.layout, self.pos, self.prop.ue_antenna_height_m)
        cl = coupling_loss_db(self.layout, geom, self.los, self.indoor, self.shadow, self.prop)
        idx = np.arange(len(self.ues))
        los_serv = self.los[idx, self.layout.cell_site[self.serving]]
        pl = uma_pathloss_db(geom.distance_m[idx, self.serving], los_serv, self.prop, self.indoor)
        pl = pl + self.shadow[idx, self.serving]
        return db2lin(-cl).T, pl

    def radar_grids(self, tti: int) -> np.ndarray | None:
        if self.mapper is None:
            return None
        t0 = tti * TTI_S
        # include pulses that started in the previous TTI and spill over
        pulses = pulse_train(self.radar, t0 - self.radar.pulse_width_s, t0 + TTI_S)
        return self.mapper.grids(tti, t0, pulses)

    # -- main loop -----------------------------------------------------------
    def step_tti(self) -> "UplinkSimulation":
        tti = self.tti
        if self.frame.is_uplink(tti) and self.ues:
            self._uplink_tti(tti)
        self.tti += 1
        if self.ues:
            self.pos = move_positions(self.pos, self.heading, self.speed, TTI_S, self.layout)
        return self

    def run(self, n_tti: int) -> "UplinkSimulation":
        for _ in range(n_tti):
            self.step_tti()
        return self

    def _uplink_tti(self, tti: int) -> None:
        lte = self.lte
        n_ue = len(self.ues)
        allocs: dict[int, tuple[int, int]] = {}
        # fixed consumption per cell and TTI keeps the streams aligned across
        # paired scenarios (common random numbers)
        for c, members in enumerate(self.cell_ues):
            self._decode_u[members] = self.decode_rng[c].random(len(members))
        sched_seeds = self.sched_rng.integers(0, 2**63, size=len(self.cell_ues))
        for c, members in enumerate(self.cell_ues):
            retx = [(u, self.harq[u].rb_allocation[1]) for u in members
                    if self.harq[u] is not None and self.harq[u].next_tx_tti == tti]
            busy = {u for u in members if self.harq[u] is not None}
            cands = [u for u in members if u not in busy]
            metric = np.array([self._inst_rate(u) / self.avg_rate[u] for u in cands])
            a = schedule_tti(cands, metric, self.n_rb, np.random.default_rng(sched_seeds[c]), retx,
                             lte.max_ues_per_tti)
            # a retransmission that did not fit waits for the next uplink subframe
            for u, _ in retx:
                if u not in a:
                    self.harq[u].next_tx_tti = self.frame.next_uplink(tti + 1)
            allocs.update(a)
        self.ul_grants += len(allocs)
        if self.log_allocations:
            self.allocation_log.append(dict(allocs))

        gains, pl = self._link_state()
        if not allocs:
            self._update_pf_average()
            return
        ues = np.array(sorted(allocs), dtype=int)
        rb0 = np.array([allocs[u][0] for u in ues])
        nrb = np.array([allocs[u][1] for u in ues])
        p_mw = db2lin(uplink_tx_power_dbm(nrb, pl[ues], self.pc))
        # new transmissions pick their MCS now; retransmissions keep theirs
        procs = []
        for u, n in zip(ues.tolist(), nrb.tolist()):
            proc = self.harq[u]
            if proc is None:
                mcs = select_mcs(self.measured[u], self.olla[u], self.table)
                proc = HarqProcess(int(round(mcs.spectral_efficiency * n * RB_BANDWIDTH_HZ * TTI_S)),
                                   allocs[u], mcs)
                self.harq[u] = proc
                self.granted_bits[u] += proc.payload_bits
                procs.append((proc, True))
            else:
                procs.append((proc, False))

        # transmit PSD per subcarrier and the cell x subcarrier owner map
        n_cells = self.layout.n_cells
        psd = np.zeros((n_ue, self.n_sc))
        owner = -np.ones((n_cells, self.n_sc), dtype=int)
        beta_re = np.ones((n_cells, self.n_sc))
        for i, u in enumerate(ues.tolist()):
            sl = slice(rb0[i] * 12, (rb0[i] + nrb[i]) * 12)
            psd[u, sl] = p_mw[i] / (12 * nrb[i])
            owner[self.serving[u], sl] = u
            beta_re[self.serving[u], sl] = procs[i][0].mcs.beta
        rx = gains @ psd  # (cell, subcarrier)
        has = owner >= 0
        safe_owner = np.where(has, owner, 0)
        sig = np.where(has, gains[np.arange(n_cells)[:, None], safe_owner] * psd[safe_owner, np.arange(self.n_sc)[None, :]], 0.0)
        icell = np.maximum(rx - sig, 0.0)
        base = self.noise_mw + icell  # (cell, sc)
        radar = self.radar_grids(tti)

        if self.capture.wants(tti):
            self._capture(tti, sig, base, radar, has)

        cell_of = self.serving[ues]
        # EESM for every allocation at once: per-RE exp(-sinr/beta), summed over
        # symbols, then over each allocation's subcarrier span
        if radar is None:
            x = np.exp(-np.minimum(sig / base / beta_re, 700.0)) * SYMBOLS_PER_TTI
        else:
            hit = np.flatnonzero(radar.any(axis=(0, 2)))
            x = np.exp(-np.minimum(sig / base / beta_re, 700.0)) * (SYMBOLS_PER_TTI - hit.size)
            if hit.size:
                g = sig[:, None, :] / (base[:, None, :] + radar[:, hit, :])
                x = x + np.exp(-np.minimum(g / beta_re[:, None, :], 700.0)).sum(axis=1)
        label = np.full((n_cells, self.n_sc), len(ues))
        for i in range(len(ues)):
            label[cell_of[i], rb0[i] * 12:(rb0[i] + nrb[i]) * 12] = i
        seg = np.bincount(label.ravel(), weights=x.ravel(), minlength=len(ues) + 1)[: len(ues)]
        n_re = SYMBOLS_PER_TTI * 12 * nrb
        betas = np.array([p.mcs.beta for p, _ in procs])
        with np.errstate(divide="ignore"):
            eff_db = 10.0 * np.log10(-betas * np.log(np.maximum(seg / n_re, 1e-300)))

        for i, u in enumerate(ues.tolist()):
            self._decode(u, tti, procs[i][0], procs[i][1], float(eff_db[i]))
        self._update_pf_average()

    def _update_pf_average(self) -> None:
        # PF average over delivered rate; updated every uplink TTI for every UE
        a = 1.0 / self.lte.pf_time_constant_tti
        self.avg_rate = (1.0 - a) * self.avg_rate + a * self._tti_delivered / TTI_S
        self._tti_delivered[:] = 0.0

    def _capture(self, tti, sig, base, radar, has) -> None:
        c = self.capture.cell
        r = radar[c] if radar is not None else np.zeros((SYMBOLS_PER_TTI, self.n_sc))
        s = np.where(has[c], sig[c], np.nan)
        with np.errstate(divide="ignore", invalid="ignore"):
            self.capture.ttis.append(tti)
            self.capture.sinr_db.append(lin2db(s[None, :] / (base[c][None, :] + r)))
            self.capture.sinr_no_radar_db.append(np.broadcast_to(lin2db(s / base[c]), r.shape).copy())
            self.capture.radar_mw.append(r.copy())

    def _inst_rate(self, u: int) -> float:
        m = select_mcs(self.measured[u], self.olla[u], self.table)
        return m.spectral_efficiency * RB_BANDWIDTH_HZ

    def _decode(self, u: int, tti: int, proc: HarqProcess, first: bool, eff: float) -> None:
        lte = self.lte
        combined = harq_combine(proc, eff)
        ok = bool(self._decode_u[u] >= block_error_probability(combined, proc.mcs, lte.bler_slope_db))
        # link adaptation measures the single-shot effective SINR
        self.measured[u] = eff
        if first:
            self.n_first_tx[u] += 1
            self.n_first_fail[u] += not ok
            self.olla[u] = olla_update(self.olla[u], ok, lte.olla_step_down_db, lte.bler_target, lte.olla_clamp_db)
        proc, bits = harq_step(proc, ok, tti, self.frame, lte.max_harq_tx, lte.harq_rtt_tti)
        if proc.closed:
            self.harq[u] = None
        if bits:
            self.delivered_bits[u] += bits
            self._tti_delivered[u] += bits

    # -- results -------------------------------------------------------------
    def mean_throughput_bps(self) -> np.ndarray:
        """Per-UE delivered bits divided by the simulated time."""
        t = max(self.tti, 1) * TTI_S
        return self.delivered_bits / t
