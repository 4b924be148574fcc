"""Flat key=value run configuration.

One `key = value` pair per line, '#' comments. Keys carry explicit units
(LR_nH, CR_fF, flux_start, ...). Unknown keys are rejected by name; every
command documents its key set in the CLI help and embeds the resolved
configuration in its outputs.
"""

from __future__ import annotations

from .errors import ParameterError

# key -> type; "floatlist" is a comma-separated list
CIRCUIT_KEYS = {
    "EJ_GHz": float, "Jc_uA_um2": float, "junction_area_um2": float,
    "CJ_fF": float, "ECJ_GHz": float,
    "alpha": float, "Csh_fF": float,
    "LR_nH": float, "CR_fF": float, "Lc_nH": float,
}
TRUNCATION_KEYS = {"ncut1": int, "ncut3": int, "n4": int, "n6": int}
FLUX_KEYS = {"flux_start": float, "flux_stop": float, "flux_points": int,
             "flux_list": "floatlist"}
QRM_KEYS = {"Delta_GHz": float, "Ip_nA": float, "omega_r_GHz": float,
            "g_GHz": float, "nfock": int}
OUTPUT_KEYS = {"out_csv": str, "out_json": str, "out_svg": str}

SIMULATE_KEYS = {**CIRCUIT_KEYS, **TRUNCATION_KEYS, **FLUX_KEYS,
                 **OUTPUT_KEYS, "levels": int}
SIMULATE_QRM_KEYS = {**QRM_KEYS, **FLUX_KEYS, **OUTPUT_KEYS}
BS_SHIFT_KEYS = {**QRM_KEYS, "phi_ext": float, "transition": str,
                 "out_json": str}
ESTIMATE_KEYS = {**CIRCUIT_KEYS, "Ip_nA": float, "out_json": str}
FIT_GUESS_KEYS = {**QRM_KEYS, "prominence": float, "per_flux_max_peaks": int,
                  "jump_cap_GHz": float, "ambiguity_tol_GHz": float,
                  "max_iter": int, "fix": str}


def parse_config(text: str, allowed: dict, required=()) -> dict:
    """Parse key=value text against an allowed-key schema."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in allowed:
            raise ParameterError(
                f"line {lineno}: unknown configuration key {key!r}")
        if key in values:
            raise ParameterError(f"line {lineno}: duplicate key {key!r}")
        kind = allowed[key]
        try:
            if kind == "floatlist":
                values[key] = [float(x) for x in val.split(",") if x.strip()]
            elif kind is bool:
                values[key] = val.lower() in ("1", "true", "yes", "on")
            else:
                values[key] = kind(val)
        except ValueError as ex:
            raise ParameterError(f"line {lineno}: bad value for {key!r}: {ex}") from ex
    for key in required:
        if key not in values:
            raise ParameterError(f"missing required configuration key {key!r}")
    return values


def flux_axis(cfg: dict) -> list[float]:
    """Flux values from either flux_list or flux_start/stop/points."""
    if "flux_list" in cfg:
        if any(k in cfg for k in ("flux_start", "flux_stop", "flux_points")):
            raise ParameterError("give flux_list or flux_start/stop/points, not both")
        if not cfg["flux_list"]:
            raise ParameterError("flux_list is empty")
        return list(cfg["flux_list"])
    missing = [k for k in ("flux_start", "flux_stop", "flux_points") if k not in cfg]
    if missing:
        raise ParameterError(f"missing flux keys: {', '.join(missing)}")
    n = cfg["flux_points"]
    if n < 1:
        raise ParameterError("flux_points must be >= 1")
    start, stop = cfg["flux_start"], cfg["flux_stop"]
    if n == 1:
        return [start]
    step = (stop - start) / (n - 1)
    return [start + i * step for i in range(n)]


def circuit_payload(cfg: dict) -> dict:
    """Circuit-parameter keys of a config as a /simulate-style JSON block."""
    block = {k: cfg[k] for k in CIRCUIT_KEYS if k in cfg}
    for needed in ("alpha", "Csh_fF", "LR_nH", "CR_fF", "Lc_nH"):
        if needed not in block:
            raise ParameterError(f"missing required configuration key {needed!r}")
    return block


def qrm_payload(cfg: dict) -> dict:
    block = {k: cfg[k] for k in QRM_KEYS if k in cfg}
    for needed in ("Delta_GHz", "Ip_nA", "omega_r_GHz", "g_GHz"):
        if needed not in block:
            raise ParameterError(f"missing required configuration key {needed!r}")
    return block
