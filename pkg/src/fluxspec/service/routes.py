"""HTTP routes. Thin adapters: deserialize, call the library, serialize.

Domain errors map onto JSON envelopes {"error": {"type", "message"}} with
status 400 for validation problems and 500 for numeric ones; the CLI
translates these into its exit codes.
"""

from __future__ import annotations

import dataclasses

from fastapi import APIRouter
from fastapi.responses import JSONResponse

from .. import __version__
from ..circuit import (
    ip_from_matrix_element,
    qubit_gap_and_ip,
    spectrum_vs_flux,
)
from ..coupling import coupling_estimate, renormalized_resonator
from ..errors import FluxspecError
from ..fitting import fit_qrm
from ..materials import (
    RTCurve,
    WireGeometry,
    gral_calibration,
    kinetic_inductance,
    resistivity,
    sheet_inductance,
    tc_from_rt_curve,
)
from ..overlay import overlay_export
from ..rabi import bs_shift_analytic, bs_shift_numeric, qrm_levels
from ..ridges import TransitionPoint, extract_ridges, label_transitions
from ..specmap import S21Map, normalize_map
from . import schemas

router = APIRouter()

# the 23 MHz numeric shift and the ~33 MHz leading-order formula disagree at
# the published coupling; both are reported and neither is "the" shift
_BS_NOTE = ("numeric shift is QRM minus JC by diagonalization; analytic is "
            "the leading-order g^2/(omega_r+omega_q) formula. They differ "
            "beyond leading order at strong coupling.")


def error_response(exc: FluxspecError) -> JSONResponse:
    status = 400 if exc.category == "validation" else 500
    return JSONResponse(status_code=status,
                        content={"error": {"type": exc.category,
                                           "message": str(exc)}})


@router.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@router.post("/simulate", response_model=schemas.SpectrumTableModel)
def simulate(req: schemas.SimulateRequest):
    params = req.circuit.to_domain()
    trunc = req.truncation.to_domain()
    table = spectrum_vs_flux(params, trunc, req.flux, k=req.levels)
    return table.to_json_dict()


@router.post("/simulate-qrm", response_model=schemas.SpectrumTableModel)
def simulate_qrm(req: schemas.SimulateQRMRequest):
    from ..circuit import SpectrumTable

    p = req.qrm.to_domain()
    levels = qrm_levels(p, req.flux, k=4)
    table = SpectrumTable.from_levels(req.flux, levels, meta={
        "model": "qrm", "Delta_GHz": p.delta_ghz, "Ip_nA": p.ip_na,
        "omega_r_GHz": p.omega_r_ghz, "g_GHz": p.g_ghz, "nfock": p.nfock})
    return table.to_json_dict()


@router.post("/qubit-gap", response_model=schemas.QubitGapResponse)
def qubit_gap(req: schemas.QubitGapRequest):
    params = req.circuit.to_domain()
    delta, ip_slope = qubit_gap_and_ip(params, ncut=req.ncut,
                                       flux_window=tuple(req.flux_window))
    ip_me = ip_from_matrix_element(params, 0.5, ncut=req.ncut)
    return schemas.QubitGapResponse(
        Delta_GHz=delta, Ip_slope_nA=ip_slope,
        Ip_matrix_element_nA=ip_me, Csh_fF=params.csh_ff)


@router.post("/bs-shift", response_model=schemas.BSShiftResponse)
def bs_shift(req: schemas.BSShiftRequest):
    p = req.qrm.to_domain()
    numeric = bs_shift_numeric(p, req.phi_ext, req.transition)
    analytic = bs_shift_analytic(p, req.phi_ext)
    return schemas.BSShiftResponse(
        numeric_shift_GHz=numeric, analytic_shift_GHz=analytic,
        transition=req.transition, note=_BS_NOTE)


@router.post("/estimate-coupling")
def estimate_coupling(req: schemas.CouplingRequest):
    params = req.circuit.to_domain()
    est = coupling_estimate(params, req.Ip_nA)
    omega_r, z_prime = renormalized_resonator(params.lr_nh, params.lc_nh,
                                              params.cr_ff)
    out = est.to_dict()
    out["omega_r_renormalized_GHz"] = omega_r
    out["Z_prime_ohm"] = z_prime
    out["g_over_omega_r"] = est.g_ghz / omega_r
    out["circuit"] = req.circuit.model_dump()
    return out


@router.post("/materials/lk")
def materials_lk(req: schemas.MaterialsLkRequest):
    return {"Lk_nH": kinetic_inductance(req.R_ohm, req.Tc_K),
            "R_ohm": req.R_ohm, "Tc_K": req.Tc_K}


@router.post("/materials/rho")
def materials_rho(req: schemas.MaterialsRhoRequest):
    geom = WireGeometry(req.length_um, req.width_um, req.thickness_nm)
    return {"rho_uohm_cm": resistivity(req.R_ohm, geom),
            "squares": geom.squares}


@router.post("/materials/sheet-lk")
def materials_sheet(req: schemas.MaterialsSheetRequest):
    geom = WireGeometry(req.length_um, req.width_um, 1.0)
    return {"L_sq_pH": sheet_inductance(req.Lk_nH, geom),
            "squares": geom.squares}


@router.post("/materials/tc")
def materials_tc(req: schemas.MaterialsTcRequest):
    curve = RTCurve.from_samples(req.temperature_K, req.resistance_ohm)
    return tc_from_rt_curve(curve, plateau_fraction=req.plateau_fraction).to_dict()


@router.post("/materials/calib")
def materials_calib(req: schemas.MaterialsCalibRequest):
    return gral_calibration(req.flow_sccm, baked=req.baked,
                            interpolate=req.interpolate)


def _map_from_model(model: schemas.S21MapModel) -> S21Map:
    return S21Map.create(freq_ghz=model.freq_ghz, flux=model.flux,
                         magnitude=model.magnitude, scale=model.scale,
                         meta=model.meta)


def _map_to_model(smap: S21Map) -> dict:
    return {"freq_ghz": smap.freq_ghz.tolist(), "flux": smap.flux.tolist(),
            "magnitude": smap.magnitude.tolist(), "scale": smap.scale,
            "meta": smap.meta}


@router.post("/normalize")
def normalize(req: schemas.NormalizeRequest):
    out = normalize_map(_map_from_model(req.map))
    return {"map": _map_to_model(out),
            "degenerate_rows": out.meta.get("degenerate_rows", [])}


@router.post("/extract-ridges")
def ridges(req: schemas.ExtractRidgesRequest):
    points = extract_ridges(_map_from_model(req.map),
                            prominence=req.prominence,
                            per_flux_max_peaks=req.per_flux_max_peaks,
                            jump_cap_ghz=req.jump_cap_ghz)
    return {"points": [dataclasses.asdict(p) for p in points]}


@router.post("/label")
def label(req: schemas.LabelRequest):
    points = [TransitionPoint(flux=p.flux, freq_ghz=p.freq_ghz, label=p.label,
                              weight=p.weight, branch=p.branch)
              for p in req.points]
    labeled, report = label_transitions(points, req.guess.to_domain(),
                                        ambiguity_tol_ghz=req.ambiguity_tol_ghz)
    return {"points": [dataclasses.asdict(p) for p in labeled],
            "report": report}


@router.post("/fit", response_model=schemas.FitResultModel)
def fit(req: schemas.FitRequest):
    points = [TransitionPoint(flux=p.flux, freq_ghz=p.freq_ghz, label=p.label,
                              weight=p.weight, branch=p.branch)
              for p in req.points]
    result = fit_qrm(points, req.guess.to_domain(), fix=tuple(req.fix),
                     label_weights=req.label_weights or None,
                     max_iter=req.max_iter)
    d = result.to_dict()
    return schemas.FitResultModel(
        omega_r_GHz=d["omega_r_GHz"], Delta_GHz=d["Delta_GHz"],
        Ip_nA=d["Ip_nA"], g_GHz=d["g_GHz"], sigma=d["sigma"],
        covariance=d["covariance"], residual_rms_GHz=d["residual_rms_GHz"],
        cost_history=d["cost_history"], n_iterations=d["n_iterations"],
        converged=d["converged"], n_points=d["n_points"], fixed=d["fixed"],
        meta=d["meta"])


@router.post("/overlay", response_model=schemas.OverlayResponse)
def overlay(req: schemas.OverlayRequest):
    csv, svg = overlay_export(_map_from_model(req.map),
                              req.params.to_domain(), labels=tuple(req.labels))
    return schemas.OverlayResponse(csv=csv, svg=svg)
