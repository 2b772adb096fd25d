"""Longley-Rice Irregular Terrain Model, area prediction mode.

Python port of the ITS ITM version 1.2.2 routines needed for area
predictions: ``qlrps``/``qlra`` preparation, the ``lrprop`` reference
attenuation (line of sight, diffraction and troposcatter ranges) and the
``avar`` variability quantiles.

Distances are in meters internally, as in the reference code.  The public
entry point is :func:`area_loss_db`, which works in kilometers.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import IntEnum
from statistics import NormalDist

THIRD = 1.0 / 3.0


class Climate(IntEnum):
    EQUATORIAL = 1
    CONTINENTAL_SUBTROPICAL = 2
    MARITIME_SUBTROPICAL = 3
    DESERT = 4
    CONTINENTAL_TEMPERATE = 5
    MARITIME_TEMPERATE_LAND = 6
    MARITIME_TEMPERATE_SEA = 7


class Variability(IntEnum):
    SINGLE_MESSAGE = 0
    INDIVIDUAL = 1
    MOBILE = 2
    BROADCAST = 3


class Polarization(IntEnum):
    HORIZONTAL = 0
    VERTICAL = 1


class Siting(IntEnum):
    RANDOM = 0
    CAREFUL = 1
    VERY_CAREFUL = 2


class ITMDomainError(ValueError):
    """Raised when an input lies outside the ITM validity range."""


@dataclass
class _Prop:
    hg: list[float]
    dh: float
    wn: float = 0.0
    ens: float = 0.0
    gme: float = 0.0
    zgnd: complex = 0j
    he: list[float] = field(default_factory=lambda: [0.0, 0.0])
    dl: list[float] = field(default_factory=lambda: [0.0, 0.0])
    the: list[float] = field(default_factory=lambda: [0.0, 0.0])
    dist: float = 0.0
    aref: float = 0.0
    kwx: int = 0
    mdp: int = 1


@dataclass
class _PropA:
    dlsa: float = 0.0
    dx: float = 0.0
    ael: float = 0.0
    ak1: float = 0.0
    ak2: float = 0.0
    aed: float = 0.0
    emd: float = 0.0
    aes: float = 0.0
    ems: float = 0.0
    dls: list[float] = field(default_factory=lambda: [0.0, 0.0])
    dla: float = 0.0
    tha: float = 0.0


def _dim(x: float, y: float) -> float:
    return x - y if x > y else 0.0


def aknfe(v2: float) -> float:
    """Knife-edge diffraction attenuation for squared Fresnel parameter ``v2``."""
    if v2 < 5.76:
        return 6.02 + 9.11 * math.sqrt(v2) - 1.27 * v2
    return 12.953 + 4.343 * math.log(v2)


def fht(x: float, pk: float) -> float:
    """Height-gain function for smooth-earth diffraction."""
    if x < 200.0:
        w = -math.log(pk)
        if pk < 1e-5 or x * w**3 > 5495.0:
            fhtv = -117.0
            if x > 1.0:
                fhtv = 17.372 * math.log(x) + fhtv
        else:
            fhtv = 2.5e-5 * x * x / pk - 8.686 * w - 15.0
    else:
        fhtv = 0.05751 * x - 4.343 * math.log(x)
        if x < 2000.0:
            w = 0.0134 * x * math.exp(-0.005 * x)
            fhtv = (1.0 - w) * fhtv + w * (17.372 * math.log(x) - 117.0)
    return fhtv


_H0_A = (25.0, 80.0, 177.0, 395.0, 705.0)
_H0_B = (24.0, 45.0, 68.0, 80.0, 105.0)


def h0f(r: float, et: float) -> float:
    """Scatter frequency-gain function H0."""
    it = int(et)
    if it <= 0:
        it, q = 1, 0.0
    elif it >= 5:
        it, q = 5, 0.0
    else:
        q = et - it
    x = (1.0 / r) ** 2
    h0 = 4.343 * math.log((_H0_A[it - 1] * x + _H0_B[it - 1]) * x + 1.0)
    if q != 0.0:
        h0 = (1.0 - q) * h0 + q * 4.343 * math.log((_H0_A[it] * x + _H0_B[it]) * x + 1.0)
    return h0


def ahd(td: float) -> float:
    """Attenuation function F(theta*d) for troposcatter."""
    if td <= 10e3:
        a, b, c = 133.4, 0.332e-3, -4.343
    elif td <= 70e3:
        a, b, c = 104.6, 0.212e-3, -1.086
    else:
        a, b, c = 71.8, 0.157e-3, 2.171
    return a + b * td + c * math.log(td)


def _curve(c1: float, c2: float, x1: float, x2: float, x3: float, de: float) -> float:
    return (c1 + c2 / (1.0 + ((de - x2) / x3) ** 2)) * (de / x1) ** 2 / (1.0 + (de / x1) ** 2)


class _Lrprop:
    """Reference attenuation engine; holds the per-prediction state of ITM's statics."""

    def __init__(self, prop: _Prop):
        self.prop = prop
        self.pa = _PropA()
        self._setup()

    # diffraction ---------------------------------------------------------
    def _adiff_init(self) -> None:
        p, pa = self.prop, self.pa
        q = p.hg[0] * p.hg[1]
        qk = p.he[0] * p.he[1] - q
        if p.mdp < 0:
            q += 10.0
        self._wd1 = math.sqrt(1.0 + qk / q)
        self._xd1 = pa.dla + pa.tha / p.gme
        q = (1.0 - 0.8 * math.exp(-pa.dlsa / 50e3)) * p.dh
        q *= 0.78 * math.exp(-((q / 16.0) ** 0.25))
        self._afo = min(15.0, 2.171 * math.log(1.0 + 4.77e-4 * p.hg[0] * p.hg[1] * p.wn * q))
        self._qk = 1.0 / abs(p.zgnd)
        self._aht = 20.0
        self._xht = 0.0
        for j in range(2):
            a = 0.5 * p.dl[j] ** 2 / p.he[j]
            wa = (a * p.wn) ** THIRD
            pk = self._qk / wa
            q = (1.607 - pk) * 151.0 * wa * p.dl[j] / a
            self._xht += q
            self._aht += fht(q, pk)

    def adiff(self, d: float) -> float:
        p, pa = self.prop, self.pa
        th = pa.tha + d * p.gme
        ds = d - pa.dla
        q = 0.0795775 * p.wn * ds * th**2
        adiffv = aknfe(q * p.dl[0] / (ds + p.dl[0])) + aknfe(q * p.dl[1] / (ds + p.dl[1]))
        a = ds / th
        wa = (a * p.wn) ** THIRD
        pk = self._qk / wa
        q = (1.607 - pk) * 151.0 * wa * th + self._xht
        ar = 0.05751 * q - 4.343 * math.log(q) - self._aht
        q = (self._wd1 + self._xd1 / d) * min((1.0 - 0.8 * math.exp(-d / 50e3)) * p.dh * p.wn, 6283.2)
        wd = 25.1 / (25.1 + math.sqrt(q))
        return ar * wd + (1.0 - wd) * adiffv + self._afo

    # troposcatter --------------------------------------------------------
    def _ascat_init(self) -> None:
        p = self.prop
        ad = p.dl[0] - p.dl[1]
        rr = p.he[1] / p.he[0]
        if ad < 0.0:
            ad, rr = -ad, 1.0 / rr
        self._ad, self._rr = ad, rr
        self._etq = (5.67e-6 * p.ens - 2.32e-3) * p.ens + 0.031
        self._h0s = -15.0

    def ascat(self, d: float) -> float:
        p, pa = self.prop, self.pa
        if self._h0s > 15.0:
            h0 = self._h0s
        else:
            th = p.the[0] + p.the[1] + d * p.gme
            r2 = 2.0 * p.wn * th
            r1 = r2 * p.he[0]
            r2 *= p.he[1]
            if r1 < 0.2 and r2 < 0.2:
                return 1001.0
            ad, rr = self._ad, self._rr
            ss = (d - ad) / (d + ad)
            q = rr / ss
            ss = max(0.1, ss)
            q = min(max(0.1, q), 10.0)
            z0 = (d - ad) * (d + ad) * th * 0.25 / d
            et = (self._etq * math.exp(-(min(1.7, z0 / 8.0e3) ** 6)) + 1.0) * z0 / 1.7556e3
            ett = max(et, 1.0)
            h0 = (h0f(r1, ett) + h0f(r2, ett)) * 0.5
            h0 += min(h0, (1.38 - math.log(ett)) * math.log(ss) * math.log(q) * 0.49)
            h0 = _dim(h0, 0.0)
            if et < 1.0:
                h0 = et * h0 + (1.0 - et) * 4.343 * math.log(
                    ((1.0 + 1.4142 / r1) * (1.0 + 1.4142 / r2)) ** 2 * (r1 + r2) / (r1 + r2 + 2.8284)
                )
            if h0 > 15.0 and self._h0s >= 0.0:
                h0 = self._h0s
        self._h0s = h0
        th = pa.tha + d * p.gme
        return (
            ahd(th * d)
            + 4.343 * math.log(47.7 * p.wn * th**4)
            - 0.1 * (p.ens - 301.0) * math.exp(-th * d / 40e3)
            + h0
        )

    # line of sight -------------------------------------------------------
    def _alos_init(self) -> None:
        p, pa = self.prop, self.pa
        self._wls = 0.021 / (0.021 + p.wn * p.dh / max(10e3, pa.dlsa))

    def alos(self, d: float) -> float:
        p, pa = self.prop, self.pa
        q = (1.0 - 0.8 * math.exp(-d / 50e3)) * p.dh
        s = 0.78 * q * math.exp(-((q / 16.0) ** 0.25))
        q = p.he[0] + p.he[1]
        sps = q / math.sqrt(d * d + q * q)
        r = (sps - p.zgnd) / (sps + p.zgnd) * math.exp(-min(10.0, p.wn * s * sps))
        q = abs(r) ** 2
        if q < 0.25 or q < sps:
            r = r * math.sqrt(sps / q)
        alosv = pa.emd * d + pa.aed
        q = p.wn * p.he[0] * p.he[1] * 2.0 / d
        if q > 1.57:
            q = 3.14 - 2.4649 / q
        return (-4.343 * math.log(abs(complex(math.cos(q), -math.sin(q)) + r) ** 2) - alosv) * self._wls + alosv

    # setup + evaluation --------------------------------------------------
    def _setup(self) -> None:
        p, pa = self.prop, self.pa
        for j in range(2):
            pa.dls[j] = math.sqrt(2.0 * p.he[j] / p.gme)
        pa.dlsa = pa.dls[0] + pa.dls[1]
        pa.dla = p.dl[0] + p.dl[1]
        pa.tha = max(p.the[0] + p.the[1], -pa.dla * p.gme)
        if p.wn < 0.838 or p.wn > 210.0:
            p.kwx = max(p.kwx, 1)
        for j in range(2):
            if p.hg[j] < 1.0 or p.hg[j] > 1000.0:
                p.kwx = max(p.kwx, 1)
            if abs(p.the[j]) > 200e-3 or p.dl[j] < 0.1 * pa.dls[j] or p.dl[j] > 3.0 * pa.dls[j]:
                p.kwx = max(p.kwx, 3)
        if (
            p.ens < 250.0
            or p.ens > 400.0
            or p.gme < 75e-9
            or p.gme > 250e-9
            or p.zgnd.real <= abs(p.zgnd.imag)
            or p.wn < 0.419
            or p.wn > 420.0
        ):
            p.kwx = 4
        for j in range(2):
            if p.hg[j] < 0.5 or p.hg[j] > 3000.0:
                p.kwx = 4
        self.dmin = abs(p.he[0] - p.he[1]) / 200e-3
        self._adiff_init()
        self.xae = (p.wn * p.gme**2) ** -THIRD
        d3 = max(pa.dlsa, 1.3787 * self.xae + pa.dla)
        d4 = d3 + 2.7574 * self.xae
        a3 = self.adiff(d3)
        a4 = self.adiff(d4)
        pa.emd = (a4 - a3) / (d4 - d3)
        pa.aed = a3 - pa.emd * d3
        p.mdp = 0
        self._los_ready = False
        self._scat_ready = False

    def _fit_los(self) -> None:
        p, pa = self.prop, self.pa
        self._alos_init()
        d2 = pa.dlsa
        a2 = pa.aed + d2 * pa.emd
        d0 = 1.908 * p.wn * p.he[0] * p.he[1]
        if pa.aed >= 0.0:
            d0 = min(d0, 0.5 * pa.dla)
            d1 = d0 + 0.25 * (pa.dla - d0)
        else:
            d1 = max(-pa.aed / pa.emd, 0.25 * pa.dla)
        a1 = self.alos(d1)
        wq = False
        if d0 < d1:
            a0 = self.alos(d0)
            q = math.log(d2 / d0)
            pa.ak2 = max(0.0, ((d2 - d0) * (a1 - a0) - (d1 - d0) * (a2 - a0)) / ((d2 - d0) * math.log(d1 / d0) - (d1 - d0) * q))
            wq = pa.aed >= 0.0 or pa.ak2 > 0.0
            if wq:
                pa.ak1 = (a2 - a0 - pa.ak2 * q) / (d2 - d0)
                if pa.ak1 < 0.0:
                    pa.ak1 = 0.0
                    pa.ak2 = _dim(a2, a0) / q
                    if pa.ak2 == 0.0:
                        pa.ak1 = pa.emd
            else:
                pa.ak2 = 0.0
                pa.ak1 = (a2 - a1) / (d2 - d1)
                if pa.ak1 <= 0.0:
                    pa.ak1 = pa.emd
        if not wq:
            pa.ak1 = _dim(a2, a1) / (d2 - d1)
            pa.ak2 = 0.0
            if pa.ak1 == 0.0:
                pa.ak1 = pa.emd
        pa.ael = a2 - pa.ak1 * d2 - pa.ak2 * math.log(d2)
        self._los_ready = True

    def _fit_scatter(self) -> None:
        p, pa = self.prop, self.pa
        self._ascat_init()
        d5 = pa.dla + 200e3
        d6 = d5 + 200e3
        a6 = self.ascat(d6)
        a5 = self.ascat(d5)
        if a5 < 1000.0:
            pa.ems = (a6 - a5) / 200e3
            pa.dx = max(
                pa.dlsa,
                max(pa.dla + 0.3 * self.xae * math.log(47.7 * p.wn), (a5 - pa.aed - pa.ems * d5) / (pa.emd - pa.ems)),
            )
            pa.aes = (pa.emd - pa.ems) * pa.dx + pa.aed
        else:
            pa.ems = pa.emd
            pa.aes = pa.aed
            pa.dx = 10.0e6
        self._scat_ready = True

    def reference_attenuation(self, d: float) -> float:
        p, pa = self.prop, self.pa
        p.dist = d
        if d > 1000e3:
            p.kwx = max(p.kwx, 1)
        if d < self.dmin:
            p.kwx = max(p.kwx, 3)
        if d < 1e3 or d > 2000e3:
            p.kwx = 4
        if d < pa.dlsa:
            if not self._los_ready:
                self._fit_los()
            aref = pa.ael + pa.ak1 * d + pa.ak2 * math.log(d)
        else:
            if not self._scat_ready:
                self._fit_scatter()
            if d > pa.dx:
                aref = pa.aes + pa.ems * d
            else:
                aref = pa.aed + pa.emd * d
        p.aref = max(aref, 0.0)
        return p.aref

    @property
    def los_distance_m(self) -> float:
        return self.pa.dlsa

    @property
    def scatter_distance_m(self) -> float:
        if not self._scat_ready:
            self._fit_scatter()
        return self.pa.dx


# avar climate tables, indexed by climate - 1
_BV1 = (-9.67, -0.62, 1.26, -9.21, -0.62, -0.39, 3.15)
_BV2 = (12.7, 9.19, 15.5, 9.05, 9.19, 2.86, 857.9)
_XV1 = (144.9e3, 228.9e3, 262.6e3, 84.1e3, 228.9e3, 141.7e3, 2222.0e3)
_XV2 = (190.3e3, 205.2e3, 185.2e3, 101.1e3, 205.2e3, 315.9e3, 164.8e3)
_XV3 = (133.8e3, 143.6e3, 99.8e3, 98.6e3, 143.6e3, 167.4e3, 116.3e3)
_BSM1 = (2.13, 2.66, 6.11, 1.98, 2.68, 6.86, 8.51)
_BSM2 = (159.5, 7.67, 6.65, 13.11, 7.16, 10.38, 169.8)
_XSM1 = (762.2e3, 100.4e3, 138.2e3, 139.1e3, 93.7e3, 187.8e3, 609.8e3)
_XSM2 = (123.6e3, 172.5e3, 242.2e3, 132.7e3, 186.8e3, 169.6e3, 119.9e3)
_XSM3 = (94.5e3, 136.4e3, 178.6e3, 193.5e3, 133.5e3, 108.9e3, 106.6e3)
_BSP1 = (2.11, 6.87, 10.08, 3.68, 4.75, 8.58, 8.43)
_BSP2 = (102.3, 15.53, 9.60, 159.3, 8.12, 13.97, 8.19)
_XSP1 = (636.9e3, 138.7e3, 165.3e3, 464.4e3, 93.2e3, 216.0e3, 136.2e3)
_XSP2 = (134.8e3, 143.7e3, 225.7e3, 93.1e3, 135.9e3, 152.0e3, 188.5e3)
_XSP3 = (95.6e3, 98.6e3, 129.7e3, 94.2e3, 113.4e3, 122.7e3, 122.9e3)
_BSD1 = (1.224, 0.801, 1.380, 1.000, 1.224, 1.518, 1.518)
_BZD1 = (1.282, 2.161, 1.282, 20.0, 1.282, 1.282, 1.282)
_BFM1 = (1.0, 1.0, 1.0, 1.0, 0.92, 1.0, 1.0)
_BFM2 = (0.0, 0.0, 0.0, 0.0, 0.25, 0.0, 0.0)
_BFM3 = (0.0, 0.0, 0.0, 0.0, 1.77, 0.0, 0.0)
_BFP1 = (1.0, 0.93, 1.0, 0.93, 0.93, 1.0, 1.0)
_BFP2 = (0.0, 0.31, 0.0, 0.19, 0.31, 0.0, 0.0)
_BFP3 = (0.0, 2.00, 0.0, 1.79, 2.00, 0.0, 0.0)


def avar(zt: float, zl: float, zc: float, prop: _Prop, climate: Climate, mdvar: int) -> float:
    """Attenuation quantile for standard normal deviates of time, location and confidence."""
    k = int(climate) - 1
    kdv = mdvar
    ws = kdv >= 20
    if ws:
        kdv -= 20
    w1 = kdv >= 10
    if w1:
        kdv -= 10
    q = math.log(0.133 * prop.wn)
    gm = _BFM1[k] + _BFM2[k] / ((_BFM3[k] * q) ** 2 + 1.0)
    gp = _BFP1[k] + _BFP2[k] / ((_BFP3[k] * q) ** 2 + 1.0)
    dexa = math.sqrt(18e6 * prop.he[0]) + math.sqrt(18e6 * prop.he[1]) + (575.7e12 / prop.wn) ** THIRD
    if prop.dist < dexa:
        de = 130e3 * prop.dist / dexa
    else:
        de = 130e3 + prop.dist - dexa
    vmd = _curve(_BV1[k], _BV2[k], _XV1[k], _XV2[k], _XV3[k], de)
    sgtm = _curve(_BSM1[k], _BSM2[k], _XSM1[k], _XSM2[k], _XSM3[k], de) * gm
    sgtp = _curve(_BSP1[k], _BSP2[k], _XSP1[k], _XSP2[k], _XSP3[k], de) * gp
    sgtd = sgtp * _BSD1[k]
    zd = _BZD1[k]
    tgtd = (sgtp - sgtd) * zd
    if w1:
        sgl = 0.0
    else:
        q = (1.0 - 0.8 * math.exp(-prop.dist / 50e3)) * prop.dh * prop.wn
        sgl = 10.0 * q / (q + 13.0)
    vs0 = 0.0 if ws else (5.0 + 3.0 * math.exp(-de / 100e3)) ** 2

    if kdv == 0:
        zt = zl = zc
    elif kdv == 1:
        zl = zc
    elif kdv == 2:
        zl = zt
    if abs(zt) > 3.1 or abs(zl) > 3.1 or abs(zc) > 3.1:
        prop.kwx = max(prop.kwx, 1)
    if zt < 0.0:
        sgt = sgtm
    elif zt <= zd:
        sgt = sgtp
    else:
        sgt = sgtd + tgtd / zt
    rt, rl = 7.8, 24.0
    vs = vs0 + (sgt * zt) ** 2 / (rt + zc * zc) + (sgl * zl) ** 2 / (rl + zc * zc)
    if kdv == 0:
        yr = 0.0
        sgc = math.sqrt(sgt * sgt + sgl * sgl + vs)
    elif kdv == 1:
        yr = sgt * zt
        sgc = math.sqrt(sgl * sgl + vs)
    elif kdv == 2:
        yr = math.sqrt(sgt * sgt + sgl * sgl) * zt
        sgc = math.sqrt(vs)
    else:
        yr = sgt * zt + sgl * zl
        sgc = math.sqrt(vs)
    a = prop.aref - vmd - yr - sgc * zc
    if a < 0.0:
        a = a * (29.0 - a) / (29.0 - 10.0 * a)
    return a


def _prepare(
    freq_mhz: float,
    h_tx_m: float,
    h_rx_m: float,
    terrain_roughness_m: float,
    dielectric_constant: float,
    conductivity: float,
    surface_refractivity: float,
    polarization: Polarization,
    siting: tuple[Siting, Siting],
) -> _Prop:
    p = _Prop(hg=[h_tx_m, h_rx_m], dh=terrain_roughness_m)
    # qlrps, with zsys = 0
    p.wn = freq_mhz / 47.7
    p.ens = surface_refractivity
    p.gme = 157e-9 * (1.0 - 0.04665 * math.exp(p.ens / 179.3))
    zq = complex(dielectric_constant, 376.62 * conductivity / p.wn)
    zgnd = cmath.sqrt(zq - 1.0)
    if polarization == Polarization.VERTICAL:
        zgnd = zgnd / zq
    p.zgnd = zgnd
    # qlra
    for j in range(2):
        kst = int(siting[j])
        if kst <= 0:
            p.he[j] = p.hg[j]
        else:
            q = 4.0 if kst == 1 else 9.0
            if p.hg[j] < 5.0:
                q *= math.sin(0.3141593 * p.hg[j])
            p.he[j] = p.hg[j] + (1.0 + q) * math.exp(-min(20.0, 2.0 * p.hg[j] / max(1e-3, p.dh)))
        q = math.sqrt(2.0 * p.he[j] / p.gme)
        p.dl[j] = q * math.exp(-0.07 * math.sqrt(p.dh / max(p.he[j], 5.0)))
        p.the[j] = (0.65 * p.dh * (q / p.dl[j] - 1.0) - 2.0 * p.he[j]) / q
    p.mdp = 1
    return p


@dataclass(frozen=True)
class AreaPrediction:
    loss_db: float
    free_space_db: float
    reference_attenuation_db: float
    error_code: int


def area_prediction(
    d_km: float,
    freq_mhz: float,
    h_tx_m: float,
    h_rx_m: float,
    terrain_roughness_m: float = 10.0,
    dielectric_constant: float = 15.0,
    conductivity: float = 0.005,
    surface_refractivity: float = 301.0,
    climate: Climate = Climate.CONTINENTAL_TEMPERATE,
    variability: Variability = Variability.SINGLE_MESSAGE,
    polarization: Polarization = Polarization.VERTICAL,
    siting: tuple[Siting, Siting] = (Siting.RANDOM, Siting.RANDOM),
    pct_time: float = 50.0,
    pct_location: float = 50.0,
    pct_confidence: float = 50.0,
) -> AreaPrediction:
    """Full area-mode prediction with the ITM error code (0 = clean, 4 = invalid)."""
    _check_inputs(d_km, freq_mhz, h_tx_m, h_rx_m, terrain_roughness_m, surface_refractivity,
                  dielectric_constant, conductivity, (pct_time, pct_location, pct_confidence))
    p = _prepare(freq_mhz, h_tx_m, h_rx_m, terrain_roughness_m, dielectric_constant,
                 conductivity, surface_refractivity, Polarization(polarization), siting)
    engine = _Lrprop(p)
    aref = engine.reference_attenuation(d_km * 1000.0)
    nd = NormalDist()
    # ITM's qerfi: upper-tail deviate, so 90 % reliability gives a negative z
    zt, zl, zc = (nd.inv_cdf(1.0 - pct / 100.0) for pct in (pct_time, pct_location, pct_confidence))
    fs = 32.45 + 20.0 * math.log10(freq_mhz) + 20.0 * math.log10(d_km)
    loss = fs + avar(zt, zl, zc, p, Climate(climate), int(variability))
    return AreaPrediction(loss, fs, aref, p.kwx)


def area_loss_db(d_km: float, freq_mhz: float, h_tx_m: float, h_rx_m: float, **kwargs) -> float:
    """Basic transmission loss (dB) in area prediction mode at the requested quantiles."""
    return area_prediction(d_km, freq_mhz, h_tx_m, h_rx_m, **kwargs).loss_db


def _check_inputs(d_km, freq_mhz, h_tx_m, h_rx_m, dh, ns, eps, sgm, pcts) -> None:
    checks = (
        ("d_km", d_km, 1.0, 2000.0),
        ("freq_mhz", freq_mhz, 20.0, 20000.0),
        ("h_tx_m", h_tx_m, 0.5, 3000.0),
        ("h_rx_m", h_rx_m, 0.5, 3000.0),
        ("terrain_roughness_m", dh, 0.0, 5000.0),
        ("surface_refractivity", ns, 250.0, 400.0),
        ("dielectric_constant", eps, 1.0, 100.0),
        ("conductivity", sgm, 1e-5, 100.0),
    )
    for name, value, lo, hi in checks:
        if not (lo <= value <= hi):
            raise ITMDomainError(f"{name}={value} outside ITM range [{lo}, {hi}]")
    for pct in pcts:
        if not (0.0 < pct < 100.0):
            raise ITMDomainError(f"percentile {pct} must lie in (0, 100)")
