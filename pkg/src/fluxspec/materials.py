"""Material-parameter extraction for the superinductor coupler.

Covers the kinetic-inductance estimate from the normal-state resistance
(Mattis-Bardeen, local dirty limit, hf << kT and T << Tc), resistivity and
sheet quantities from wire geometry, critical-temperature extraction from
R(T) curves and the granular-Al sheet-resistance calibration table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .constants import HBAR, KB
from .errors import (
    AmbiguousTransitionError,
    CalibrationRangeError,
    NoTransitionError,
    ParameterError,
)


@dataclass(frozen=True)
class WireGeometry:
    """Coupler wire dimensions."""

    length_um: float
    width_um: float
    thickness_nm: float

    def __post_init__(self):
        if min(self.length_um, self.width_um, self.thickness_nm) <= 0:
            raise ParameterError("wire dimensions must be positive")

    @property
    def squares(self) -> float:
        return self.length_um / self.width_um


def kinetic_inductance(r_normal_ohm: float, tc_k: float) -> float:
    """L_k = 0.18 hbar R / (k_B Tc), returned in nH.

    Valid in the local dirty limit at low frequency and T << Tc.
    """
    if r_normal_ohm <= 0 or tc_k <= 0:
        raise ParameterError("resistance and Tc must be positive")
    return 0.18 * HBAR * r_normal_ohm / (KB * tc_k) * 1e9


def resistivity(r_ohm: float, geom: WireGeometry) -> float:
    """rho = R * (width*thickness)/length in micro-ohm cm."""
    if r_ohm <= 0:
        raise ParameterError("resistance must be positive")
    area_m2 = (geom.width_um * 1e-6) * (geom.thickness_nm * 1e-9)
    rho_ohm_m = r_ohm * area_m2 / (geom.length_um * 1e-6)
    return rho_ohm_m * 1e8  # ohm m -> micro-ohm cm


def sheet_inductance(lk_total_nh: float, geom: WireGeometry) -> float:
    """Sheet kinetic inductance L_sq = L_k / (length/width) in pH per square."""
    if lk_total_nh <= 0:
        raise ParameterError("total inductance must be positive")
    return lk_total_nh / geom.squares * 1e3  # nH -> pH


@dataclass(frozen=True)
class RTCurve:
    """Resistance versus temperature samples, sorted by temperature."""

    temperature_k: np.ndarray
    resistance_ohm: np.ndarray

    @classmethod
    def from_samples(cls, temperature_k, resistance_ohm) -> "RTCurve":
        t = np.asarray(temperature_k, dtype=float)
        r = np.asarray(resistance_ohm, dtype=float)
        if t.ndim != 1 or t.shape != r.shape or t.size < 4:
            raise ParameterError("need matching 1-D T and R arrays with >= 4 samples")
        order = np.argsort(t)
        t, r = t[order], r[order]
        if np.any(np.diff(t) <= 0):
            raise ParameterError("temperatures must be strictly increasing after sorting")
        if np.any(r < 0):
            raise ParameterError("resistances must be non-negative")
        return cls(temperature_k=t, resistance_ohm=r)

    @classmethod
    def from_csv(cls, text: str) -> "RTCurve":
        """Two-column CSV (temperature_K, resistance_ohm); '#' comments and
        an optional header row are skipped."""
        ts, rs = [], []
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = [p.strip() for p in line.replace(";", ",").split(",")]
            if len(parts) < 2:
                raise ParameterError(f"bad R(T) line: {line!r}")
            try:
                ts.append(float(parts[0]))
                rs.append(float(parts[1]))
            except ValueError:
                continue  # header row
        if not ts:
            raise ParameterError("no numeric samples in R(T) input")
        return cls.from_samples(ts, rs)

    def to_csv(self) -> str:
        lines = ["temperature_K,resistance_ohm"]
        lines += [f"{repr(float(t))},{repr(float(r))}"
                  for t, r in zip(self.temperature_k, self.resistance_ohm)]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TcResult:
    """Critical temperature and transition width from an R(T) curve.

    Tc is where R drops to 50% of the onset; T10/T90 are the 10% and 90%
    drop points, delta_tc = T10 - T90 and the quoted uncertainty is half
    the width.
    """

    tc_k: float
    delta_tc_k: float
    t10_k: float
    t90_k: float
    onset_resistance_ohm: float
    uncertainty_k: float
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "Tc_K": self.tc_k,
            "delta_Tc_K": self.delta_tc_k,
            "T10_K": self.t10_k,
            "T90_K": self.t90_k,
            "onset_resistance_ohm": self.onset_resistance_ohm,
            "uncertainty_K": self.uncertainty_k,
            "meta": self.meta,
        }


def _crossing(t: np.ndarray, r: np.ndarray, level: float) -> float:
    """Temperature where R crosses `level`, by linear interpolation.

    Raises AmbiguousTransitionError when the curve crosses more than once
    (re-entrant noise is surfaced, not hidden).
    """
    s = r - level
    hits = []
    for i in range(len(t) - 1):
        if s[i] == 0.0 and (i == 0 or s[i - 1] != 0.0):
            hits.append(float(t[i]))
        elif s[i] * s[i + 1] < 0:
            frac = s[i] / (s[i] - s[i + 1])
            hits.append(float(t[i] + frac * (t[i + 1] - t[i])))
    if s[-1] == 0.0 and s[-2] != 0.0:
        hits.append(float(t[-1]))
    if not hits:
        raise NoTransitionError(f"resistance never crosses {level:.6g} ohm")
    if len(hits) > 1:
        raise AmbiguousTransitionError(
            f"resistance crosses {level:.6g} ohm {len(hits)} times",
            crossings=hits)
    return hits[0]


def tc_from_rt_curve(curve: RTCurve, plateau_fraction: float = 0.10) -> TcResult:
    """Extract Tc, T10, T90 and the transition width from an R(T) curve.

    The onset is the median resistance over the high-temperature plateau
    window (top `plateau_fraction` of the temperature span); this choice is
    recorded in the result metadata.
    """
    if not 0 < plateau_fraction < 1:
        raise ParameterError("plateau_fraction must be in (0, 1)")
    t, r = curve.temperature_k, curve.resistance_ohm
    if r.max() <= 0 or r.max() < 2.0 * r.min():
        raise NoTransitionError(
            "curve does not span a transition (max R < 2x min R)")
    span = t[-1] - t[0]
    window_start = t[-1] - plateau_fraction * span
    plateau = r[t >= window_start]
    onset = float(np.median(plateau))
    if onset <= 0:
        raise NoTransitionError("onset resistance is zero")

    tc = _crossing(t, r, 0.50 * onset)
    t10 = _crossing(t, r, 0.90 * onset)   # resistance decreased by 10%
    t90 = _crossing(t, r, 0.10 * onset)   # resistance decreased by 90%
    delta = t10 - t90
    return TcResult(
        tc_k=tc, delta_tc_k=delta, t10_k=t10, t90_k=t90,
        onset_resistance_ohm=onset, uncertainty_k=0.5 * delta,
        meta={
            "onset_definition": "median resistance over the high-temperature plateau",
            "plateau_fraction": plateau_fraction,
            "plateau_window_K": [float(window_start), float(t[-1])],
        })


def _load_calibration() -> dict:
    with resources.files("fluxspec.data").joinpath("gral_calibration.json").open() as fh:
        return json.load(fh)


_CALIBRATION = _load_calibration()


def gral_calibration(flow_sccm: float, baked: bool = False,
                     interpolate: bool = False) -> dict:
    """Sheet resistance of granular Al versus evaporation oxygen flow.

    Returns the tabulated (Rs, uncertainty) in ohm/square for flows on the
    calibration grid; off-grid flows require interpolate=True and are
    piecewise-linear, flagged as interpolated. Flows outside the table
    range raise CalibrationRangeError.
    """
    rows = _CALIBRATION["rows"]
    flows = np.array([row["flow"] for row in rows])
    key = "baked" if baked else "unbaked"
    if flow_sccm < flows.min() - 1e-12 or flow_sccm > flows.max() + 1e-12:
        raise CalibrationRangeError(
            f"flow {flow_sccm} sccm outside calibrated range "
            f"[{flows.min()}, {flows.max()}]")
    hit = np.where(np.abs(flows - flow_sccm) < 1e-9)[0]
    if hit.size:
        rs, unc = rows[int(hit[0])][key]
        return {"flow_sccm": float(flows[int(hit[0])]), "baked": baked,
                "rs_ohm_sq": rs, "uncertainty_ohm_sq": unc,
                "interpolated": False,
                "table_version": _CALIBRATION["version"]}
    if not interpolate:
        raise ParameterError(
            f"flow {flow_sccm} sccm is not tabulated; pass interpolate=True "
            "for a piecewise-linear estimate")
    values = np.array([row[key][0] for row in rows])
    uncs = np.array([row[key][1] for row in rows])
    rs = float(np.interp(flow_sccm, flows, values))
    unc = float(np.interp(flow_sccm, flows, uncs))
    return {"flow_sccm": flow_sccm, "baked": baked,
            "rs_ohm_sq": rs, "uncertainty_ohm_sq": unc,
            "interpolated": True,
            "table_version": _CALIBRATION["version"]}
