"""Transmission-map container, CSV/JSON ingestion and the per-frequency-row
normalization used to suppress flux-independent features (box modes).

A map holds |S21|(frequency, flux) on a rectangular grid: rows are fixed
frequencies, columns fixed flux values. Normalization replaces each row by
(row - min(row)) / std(row) with the population standard deviation, so
every non-degenerate row ends up with min exactly 0 and std exactly 1.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DegenerateNormalizationError, ParameterError

# a row is degenerate when its std is zero or vanishes against its mean
DEGENERATE_STD_RTOL = 1e-12


@dataclass(frozen=True)
class S21Map:
    """|S21| magnitude over (frequency, flux); freq rows x flux columns."""

    freq_ghz: np.ndarray
    flux: np.ndarray
    magnitude: np.ndarray
    scale: str = "dB"
    meta: dict = field(default_factory=dict)

    @classmethod
    def create(cls, freq_ghz, flux, magnitude, scale="dB", meta=None) -> "S21Map":
        freq = np.asarray(freq_ghz, dtype=float)
        flx = np.asarray(flux, dtype=float)
        mag = np.array(magnitude, dtype=float)
        if freq.ndim != 1 or flx.ndim != 1 or mag.shape != (freq.size, flx.size):
            raise ParameterError(
                f"magnitude shape {mag.shape} does not match axes "
                f"({freq.size} frequencies x {flx.size} flux values)")
        if np.any(np.diff(freq) <= 0) or np.any(np.diff(flx) <= 0):
            raise ParameterError("frequency and flux axes must be strictly ascending")
        meta = dict(meta or {})
        nan_mask = np.isnan(mag)
        if nan_mask.any():
            # instrument dropouts: replace by the row median so row statistics
            # stay meaningful, and flag the cells
            cells = []
            for i in np.where(nan_mask.any(axis=1))[0]:
                med = np.nanmedian(mag[i])
                if np.isnan(med):
                    raise ParameterError(f"frequency row {i} is entirely NaN")
                cols = np.where(nan_mask[i])[0]
                mag[i, cols] = med
                cells += [[int(i), int(j)] for j in cols]
            meta["nan_cells"] = cells
        return cls(freq_ghz=freq, flux=flx, magnitude=mag, scale=scale, meta=meta)

    @property
    def shape(self) -> tuple[int, int]:
        return self.magnitude.shape

    # -- serialization ------------------------------------------------------

    def to_csv(self) -> str:
        """First row: flux values; first column: frequency in GHz."""
        buf = io.StringIO()
        for key, val in self.meta.items():
            buf.write(f"# {key} = {json.dumps(val)}\n")
        buf.write("# scale = " + self.scale + "\n")
        buf.write("freq_GHz\\flux," + ",".join(repr(float(x)) for x in self.flux) + "\n")
        for i, fr in enumerate(self.freq_ghz):
            buf.write(repr(float(fr)) + ","
                      + ",".join(repr(float(x)) for x in self.magnitude[i]) + "\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "S21Map":
        scale = "dB"
        meta = {}
        rows = []
        header = None
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("scale"):
                    scale = body.partition("=")[2].strip()
                elif "=" in body:
                    key, _, val = body.partition("=")
                    try:
                        meta[key.strip()] = json.loads(val.strip())
                    except json.JSONDecodeError:
                        meta[key.strip()] = val.strip()
                continue
            cells = line.split(",")
            if header is None:
                header = [c for c in cells[1:]]
                continue
            rows.append([float(c) for c in cells])
        if header is None or not rows:
            raise ParameterError("empty S21 map CSV")
        flux = np.array([float(c) for c in header])
        data = np.array(rows)
        return cls.create(freq_ghz=data[:, 0], flux=flux,
                          magnitude=data[:, 1:], scale=scale, meta=meta)

    def to_json_dict(self) -> dict:
        return {
            "freq_ghz": self.freq_ghz.tolist(),
            "flux": self.flux.tolist(),
            "magnitude": self.magnitude.tolist(),
            "scale": self.scale,
            "meta": self.meta,
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "S21Map":
        return cls.create(
            freq_ghz=payload["freq_ghz"], flux=payload["flux"],
            magnitude=payload["magnitude"], scale=payload.get("scale", "dB"),
            meta=payload.get("meta", {}))

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


def normalize_map(smap: S21Map) -> S21Map:
    """Row-wise (x - min)/std normalization, population standard deviation.

    Degenerate rows (std < 1e-12 |mean| or exactly zero) are zeroed and
    listed in meta["degenerate_rows"]. A single-column map cannot be
    normalized.
    """
    if smap.flux.size < 2:
        raise DegenerateNormalizationError(
            "need at least 2 flux columns per frequency row")
    mag = smap.magnitude
    mins = mag.min(axis=1, keepdims=True)
    stds = mag.std(axis=1, keepdims=True)          # population std (ddof=0)
    means = mag.mean(axis=1, keepdims=True)
    degenerate = (stds == 0.0) | (stds < DEGENERATE_STD_RTOL * np.abs(means))
    safe = np.where(degenerate, 1.0, stds)
    out = (mag - mins) / safe
    out[degenerate[:, 0], :] = 0.0
    meta = dict(smap.meta)
    meta["degenerate_rows"] = [int(i) for i in np.where(degenerate[:, 0])[0]]
    return replace(smap, magnitude=out, scale="normalized", meta=meta)
