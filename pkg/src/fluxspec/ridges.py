"""Ridge extraction from normalized transmission maps and branch labeling
against model transition curves.

Peaks are found per flux column and linked across neighboring columns into
branches by nearest-frequency continuation with a jump cap; branches are
then assigned the transition label whose model curve they track best.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import find_peaks

from .errors import ParameterError
from .rabi import QRMParams, qrm_transitions
from .specmap import S21Map

LABELS = ("w01", "w02", "w12", "w03_half", "sideband3")


@dataclass(frozen=True)
class TransitionPoint:
    flux: float
    freq_ghz: float
    label: str | None = None
    weight: float = 1.0
    branch: int | None = None

    def __post_init__(self):
        if self.label is not None and self.label not in LABELS:
            raise ParameterError(f"unknown transition label {self.label!r}")
        if self.freq_ghz <= 0:
            raise ParameterError("transition frequency must be positive")
        if self.weight <= 0:
            raise ParameterError("weight must be positive")


def points_to_csv(points) -> str:
    buf = io.StringIO()
    buf.write("flux,freq_GHz,label,weight\n")
    for p in points:
        buf.write(f"{repr(float(p.flux))},{repr(float(p.freq_ghz))},"
                  f"{p.label or ''},{repr(float(p.weight))}\n")
    return buf.getvalue()


def points_from_csv(text: str) -> list[TransitionPoint]:
    points = []
    header_seen = False
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            header_seen = True
            if line.lower().startswith("flux"):
                continue
        cells = line.split(",")
        if len(cells) < 2:
            raise ParameterError(f"bad transition-point line: {line!r}")
        label = cells[2].strip() if len(cells) > 2 and cells[2].strip() else None
        weight = float(cells[3]) if len(cells) > 3 and cells[3].strip() else 1.0
        points.append(TransitionPoint(flux=float(cells[0]), freq_ghz=float(cells[1]),
                                      label=label, weight=weight))
    return points


def extract_ridges(smap: S21Map, prominence: float = 1.0,
                   per_flux_max_peaks: int = 6,
                   jump_cap_ghz: float | None = None) -> list[TransitionPoint]:
    """Local maxima per flux column, linked into branches across columns.

    Works on a normalized map (peaks measured in row-normalized units).
    Returns unlabeled points carrying a branch id; an empty result only
    warns, since sparse maps legitimately contain no ridges.
    """
    if prominence <= 0:
        raise ParameterError("prominence must be positive")
    freq = smap.freq_ghz
    if jump_cap_ghz is None:
        # default: a handful of frequency pixels
        jump_cap_ghz = 5.0 * float(np.median(np.diff(freq))) if freq.size > 1 else np.inf

    per_column: list[list[float]] = []
    for j in range(smap.flux.size):
        col = smap.magnitude[:, j]
        idx, props = find_peaks(col, prominence=prominence)
        if idx.size > per_flux_max_peaks:
            best = np.argsort(props["prominences"])[::-1][:per_flux_max_peaks]
            idx = np.sort(idx[best])
        per_column.append([float(freq[i]) for i in idx])

    points: list[TransitionPoint] = []
    active: dict[int, float] = {}      # branch id -> last matched frequency
    next_branch = 0
    for j, peaks in enumerate(per_column):
        flux_val = float(smap.flux[j])
        unmatched = list(peaks)
        assignments: dict[int, float] = {}
        # greedy nearest-frequency matching, branch continuity first
        candidates = sorted(
            ((abs(pk - last), bid, pk) for bid, last in active.items() for pk in unmatched),
            key=lambda t: t[0])
        used_peaks: set[float] = set()
        for dist, bid, pk in candidates:
            if bid in assignments or pk in used_peaks or dist > jump_cap_ghz:
                continue
            assignments[bid] = pk
            used_peaks.add(pk)
        for pk in peaks:
            if pk in used_peaks:
                continue
            assignments[next_branch] = pk
            next_branch += 1
        active = dict(assignments)
        for bid, pk in sorted(assignments.items()):
            points.append(TransitionPoint(flux=flux_val, freq_ghz=pk, branch=bid))
    if not points:
        warnings.warn("no ridges found above the prominence threshold")
    return points


def label_transitions(points, model_guess: QRMParams,
                      ambiguity_tol_ghz: float = 0.02):
    """Assign each branch the label whose model curve it tracks best.

    Returns (labeled points, report); the report lists the mean absolute
    deviation per candidate label and flags branches whose best two labels
    are closer than `ambiguity_tol_ghz` (manual override advised).
    """
    points = list(points)
    if not points:
        return [], {"branches": {}, "ambiguous": []}
    flux = np.array([p.flux for p in points])
    curves = qrm_transitions(model_guess, flux)   # per-point model values

    branches: dict[int | None, list[int]] = {}
    for i, p in enumerate(points):
        branches.setdefault(p.branch, []).append(i)

    labeled = list(points)
    report: dict = {"branches": {}, "ambiguous": []}
    for bid, idxs in sorted(branches.items(), key=lambda kv: (kv[0] is None, kv[0])):
        freqs = np.array([points[i].freq_ghz for i in idxs])
        devs = {lab: float(np.mean(np.abs(freqs - curves[lab][idxs])))
                for lab in LABELS}
        ranked = sorted(devs.items(), key=lambda kv: kv[1])
        best_label, best_dev = ranked[0]
        ambiguous = ranked[1][1] - best_dev < ambiguity_tol_ghz
        for i in idxs:
            labeled[i] = replace(points[i], label=best_label)
        key = "unbranched" if bid is None else int(bid)
        report["branches"][key] = {
            "label": best_label,
            "mean_abs_dev_ghz": devs,
            "ambiguous": bool(ambiguous),
            "n_points": len(idxs),
        }
        if ambiguous:
            report["ambiguous"].append(key)
    return labeled, report
