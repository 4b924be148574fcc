"""Overlay export: normalized map plus QRM and JC transition curves from a
single parameter set, as CSV and a self-contained SVG."""

from __future__ import annotations

import io

import numpy as np

from .rabi import QRMParams, jc_transitions, qrm_transitions
from .ridges import LABELS
from .specmap import S21Map
from .svgplot import heatmap_with_curves

_QRM_COLOR = "#000000"   # black dashed, fitted model
_JC_COLOR = "#ffffff"    # white dashed, rotating-wave comparison


def overlay_curves(params: QRMParams, flux, labels=("w01", "w02")) -> dict:
    """QRM and JC transition curves over a flux axis, keyed model:label."""
    flux = np.asarray(flux, dtype=float)
    for lab in labels:
        if lab not in LABELS:
            raise ValueError(f"unknown transition label {lab!r}")
    qrm = qrm_transitions(params, flux)
    jc = jc_transitions(params, flux)
    out = {"flux": flux}
    for lab in labels:
        out[f"qrm:{lab}"] = qrm[lab]
        out[f"jc:{lab}"] = jc[lab]
    return out


def overlay_csv(curves: dict) -> str:
    keys = [k for k in curves if k != "flux"]
    buf = io.StringIO()
    buf.write("flux," + ",".join(f"{k}_GHz" for k in keys) + "\n")
    flux = curves["flux"]
    for i in range(len(flux)):
        cells = [repr(float(flux[i]))] + [repr(float(curves[k][i])) for k in keys]
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def overlay_csv_parse(text: str) -> dict:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    header = lines[0].split(",")
    data = np.array([[float(c) for c in ln.split(",")] for ln in lines[1:]])
    out = {"flux": data[:, 0]}
    for j, name in enumerate(header[1:], start=1):
        out[name.removesuffix("_GHz")] = data[:, j]
    return out


def overlay_export(smap: S21Map, params: QRMParams,
                   labels=("w01", "w02")) -> tuple[str, str]:
    """(csv, svg) pair of the normalized map with model curves on top."""
    curves = overlay_curves(params, smap.flux, labels)
    series = []
    for lab in labels:
        series.append((f"QRM {lab}", curves["flux"], curves[f"qrm:{lab}"],
                       _QRM_COLOR, True))
        series.append((f"JC {lab}", curves["flux"], curves[f"jc:{lab}"],
                       _JC_COLOR, True))
    svg = heatmap_with_curves(smap, series, title="model overlay")
    return overlay_csv(curves), svg
