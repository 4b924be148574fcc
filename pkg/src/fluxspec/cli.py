"""Command-line client for the fluxspec service.

By default requests run against an in-process instance of the FastAPI app,
so no server is needed; `--server URL` points the same commands at a
remote instance. File I/O (configs, maps, CSV/JSON/SVG artifacts) is local
to the client; computation happens behind the HTTP interface.

Exit codes: 0 success, 1 validation, 2 I/O, 3 numeric/convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx

from . import __version__, runconfig
from .circuit import SpectrumTable
from .errors import FluxspecError, ParameterError
from .specmap import S21Map
from .ridges import points_from_csv, points_to_csv
from .svgplot import line_plot

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3

_UNIT_EPILOG = """configuration keys (units in names):
  circuit: EJ_GHz | Jc_uA_um2 [junction_area_um2], CJ_fF | ECJ_GHz,
           alpha, Csh_fF, LR_nH, CR_fF, Lc_nH
  truncation: ncut1, ncut3, n4, n6
  flux axis: flux_list = f1,f2,...  or  flux_start, flux_stop, flux_points
  qrm: Delta_GHz, Ip_nA, omega_r_GHz, g_GHz, nfock
  outputs: out_csv, out_json, out_svg
Energies are frequencies (GHz = E/h); E_C convention is e^2/2C_J.
C_sh is not published for the device: set Csh_fF explicitly (the package
calibration uses 10.878 fF) and it is echoed in every output.
"""


class ServiceClient:
    """HTTP client; in-process ASGI transport unless a server URL is given."""

    def __init__(self, server: str | None = None):
        self._server = server
        self._client = (httpx.Client(base_url=server.rstrip("/"), timeout=600.0)
                        if server else None)

    def _request(self, path: str, payload: dict) -> httpx.Response:
        if self._client is not None:
            return self._client.post(path, json=payload)

        # the ASGI transport is async-only; drive it with a private loop
        import asyncio

        from .service import app

        async def run():
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(transport=transport,
                                         base_url="http://fluxspec.local",
                                         timeout=None) as client:
                return await client.post(path, json=payload)

        return asyncio.run(run())

    def post(self, path: str, payload: dict) -> dict:
        resp = self._request(path, payload)
        if resp.status_code == 422:
            detail = resp.json().get("detail", resp.text)
            raise CliError(EXIT_VALIDATION, f"request validation failed: {detail}")
        body = resp.json()
        if resp.status_code >= 400:
            err = body.get("error", {})
            code = EXIT_VALIDATION if err.get("type") == "validation" else EXIT_NUMERIC
            raise CliError(code, err.get("message", resp.text))
        return body

    def close(self):
        if self._client is not None:
            self._client.close()


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as ex:
        raise CliError(EXIT_IO, f"cannot read {path}: {ex}") from ex


def _write_text(path: str, text: str):
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)
    except OSError as ex:
        raise CliError(EXIT_IO, f"cannot write {path}: {ex}") from ex
    print(f"wrote {path}")


def _load_config(path: str, schema: dict, required=()) -> dict:
    return runconfig.parse_config(_read_text(path), schema, required)


def _spectrum_outputs(table_dict: dict, cfg: dict, default_prefix: str):
    table = SpectrumTable.from_json_dict(table_dict)
    out_csv = cfg.get("out_csv", f"{default_prefix}.csv")
    _write_text(out_csv, table.to_csv())
    if "out_json" in cfg:
        _write_text(cfg["out_json"], table.to_json())
    out_svg = cfg.get("out_svg")
    if out_svg:
        series = [(lab, table.flux, table.transitions_ghz[lab])
                  for lab in ("w01", "w02", "w12", "w03_half", "sideband3")]
        _write_text(out_svg, line_plot(series, title="transition spectrum"))


def cmd_simulate(args, client: ServiceClient) -> int:
    cfg = _load_config(args.config, runconfig.SIMULATE_KEYS)
    payload = {
        "circuit": runconfig.circuit_payload(cfg),
        "truncation": {k: cfg[k] for k in runconfig.TRUNCATION_KEYS if k in cfg},
        "flux": runconfig.flux_axis(cfg),
        "levels": cfg.get("levels", 6),
    }
    body = client.post("/simulate", payload)
    body["meta"]["resolved_config"] = {k: v for k, v in sorted(cfg.items())}
    _spectrum_outputs(body, cfg, "spectrum")
    return EXIT_OK


def cmd_simulate_qrm(args, client: ServiceClient) -> int:
    cfg = _load_config(args.config, runconfig.SIMULATE_QRM_KEYS)
    payload = {"qrm": runconfig.qrm_payload(cfg), "flux": runconfig.flux_axis(cfg)}
    body = client.post("/simulate-qrm", payload)
    body["meta"]["resolved_config"] = {k: v for k, v in sorted(cfg.items())}
    _spectrum_outputs(body, cfg, "spectrum_qrm")
    return EXIT_OK


def cmd_bs_shift(args, client: ServiceClient) -> int:
    cfg = _load_config(args.config, runconfig.BS_SHIFT_KEYS)
    payload = {"qrm": runconfig.qrm_payload(cfg),
               "phi_ext": cfg.get("phi_ext", 0.5),
               "transition": cfg.get("transition", "w01")}
    body = client.post("/bs-shift", payload)
    body["resolved_config"] = {k: v for k, v in sorted(cfg.items())}
    text = json.dumps(body, indent=2, sort_keys=True)
    if "out_json" in cfg:
        _write_text(cfg["out_json"], text)
    print(text)
    return EXIT_OK


def cmd_estimate_coupling(args, client: ServiceClient) -> int:
    cfg = _load_config(args.config, runconfig.ESTIMATE_KEYS,
                       required=("Ip_nA", "Csh_fF"))
    payload = {"circuit": runconfig.circuit_payload(cfg), "Ip_nA": cfg["Ip_nA"]}
    body = client.post("/estimate-coupling", payload)
    body["resolved_config"] = {k: v for k, v in sorted(cfg.items())}
    text = json.dumps(body, indent=2, sort_keys=True)
    if "out_json" in cfg:
        _write_text(cfg["out_json"], text)
    print(text)
    return EXIT_OK


def cmd_materials(args, client: ServiceClient) -> int:
    if args.materials_cmd == "lk":
        body = client.post("/materials/lk", {"R_ohm": args.R_ohm, "Tc_K": args.Tc_K})
    elif args.materials_cmd == "rho":
        body = client.post("/materials/rho", {
            "R_ohm": args.R_ohm, "length_um": args.length_um,
            "width_um": args.width_um, "thickness_nm": args.thickness_nm})
    elif args.materials_cmd == "tc":
        from .materials import RTCurve
        curve = RTCurve.from_csv(_read_text(args.curve))
        body = client.post("/materials/tc", {
            "temperature_K": curve.temperature_k.tolist(),
            "resistance_ohm": curve.resistance_ohm.tolist(),
            "plateau_fraction": args.plateau_fraction})
    else:
        body = client.post("/materials/calib", {
            "flow_sccm": args.flow_sccm, "baked": args.baked,
            "interpolate": args.interpolate})
    text = json.dumps(body, indent=2, sort_keys=True)
    if args.out_json:
        _write_text(args.out_json, text)
    print(text)
    return EXIT_OK


def _map_payload(smap: S21Map) -> dict:
    return {"freq_ghz": smap.freq_ghz.tolist(), "flux": smap.flux.tolist(),
            "magnitude": smap.magnitude.tolist(), "scale": smap.scale,
            "meta": smap.meta}


def _read_map(path: str) -> S21Map:
    text = _read_text(path)
    try:
        if path.endswith(".json"):
            return S21Map.from_json_dict(json.loads(text))
        return S21Map.from_csv(text)
    except FluxspecError:
        raise
    except (json.JSONDecodeError, ValueError) as ex:
        raise CliError(EXIT_VALIDATION, f"cannot parse map {path}: {ex}") from ex


def cmd_normalize(args, client: ServiceClient) -> int:
    smap = _read_map(args.map)
    body = client.post("/normalize", {"map": _map_payload(smap)})
    out = S21Map.from_json_dict(body["map"])
    _write_text(args.out, out.to_csv())
    if args.out_json:
        _write_text(args.out_json, out.to_json())
    if body["degenerate_rows"]:
        print(f"degenerate rows zeroed: {body['degenerate_rows']}")
    return EXIT_OK


def cmd_fit(args, client: ServiceClient) -> int:
    cfg = _load_config(args.guess, runconfig.FIT_GUESS_KEYS)
    guess = runconfig.qrm_payload(cfg)
    prefix = args.out_prefix.rstrip("/")
    smap = _read_map(args.map)

    body = client.post("/normalize", {"map": _map_payload(smap)})
    normalized = S21Map.from_json_dict(body["map"])
    _write_text(f"{prefix}_normalized.csv", normalized.to_csv())
    if args.stop_after == "normalize":
        return EXIT_OK

    body = client.post("/extract-ridges", {
        "map": _map_payload(normalized),
        "prominence": cfg.get("prominence", 1.0),
        "per_flux_max_peaks": cfg.get("per_flux_max_peaks", 6),
        "jump_cap_ghz": cfg.get("jump_cap_GHz")})
    points = body["points"]
    if not points:
        raise CliError(EXIT_NUMERIC, "ridge extraction found no points")
    from .ridges import TransitionPoint
    _write_text(f"{prefix}_ridges.csv", points_to_csv(
        [TransitionPoint(**p) for p in points]))
    if args.stop_after == "ridges":
        return EXIT_OK

    body = client.post("/label", {
        "points": points, "guess": guess,
        "ambiguity_tol_ghz": cfg.get("ambiguity_tol_GHz", 0.02)})
    labeled = body["points"]
    _write_text(f"{prefix}_labeled.csv", points_to_csv(
        [TransitionPoint(**p) for p in labeled]))
    _write_text(f"{prefix}_labels_report.json",
                json.dumps(body["report"], indent=2, sort_keys=True))
    if args.stop_after == "label":
        return EXIT_OK

    fix = [s.strip() for s in cfg.get("fix", "").split(",") if s.strip()]
    fit_body = client.post("/fit", {
        "points": labeled, "guess": guess, "fix": fix,
        "max_iter": cfg.get("max_iter", 200)})
    fit_body["resolved_config"] = {k: v for k, v in sorted(cfg.items())}
    _write_text(f"{prefix}_fit.json", json.dumps(fit_body, indent=2, sort_keys=True))
    if args.stop_after == "fit":
        return EXIT_OK

    fitted = {"Delta_GHz": fit_body["Delta_GHz"], "Ip_nA": fit_body["Ip_nA"],
              "omega_r_GHz": fit_body["omega_r_GHz"], "g_GHz": fit_body["g_GHz"],
              "nfock": guess.get("nfock", 40)}
    labels_used = sorted({p["label"] for p in labeled if p["label"]})
    body = client.post("/overlay", {"map": _map_payload(normalized),
                                    "params": fitted,
                                    "labels": labels_used or ["w01", "w02"]})
    _write_text(f"{prefix}_overlay.csv", body["csv"])
    _write_text(f"{prefix}_overlay.svg", body["svg"])
    return EXIT_OK


def cmd_overlay(args, client: ServiceClient) -> int:
    smap = _read_map(args.map)
    fit_payload = json.loads(_read_text(args.fit_json))
    params = {"Delta_GHz": fit_payload["Delta_GHz"], "Ip_nA": fit_payload["Ip_nA"],
              "omega_r_GHz": fit_payload["omega_r_GHz"], "g_GHz": fit_payload["g_GHz"],
              "nfock": fit_payload.get("meta", {}).get("nfock", 40)}
    body = client.post("/overlay", {"map": _map_payload(smap), "params": params,
                                    "labels": list(args.labels)})
    _write_text(args.out_csv, body["csv"])
    _write_text(args.out_svg, body["svg"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fluxspec",
        description="flux-qubit/resonator spectra, coupling estimates, "
                    "materials analysis and quantum Rabi fits",
        epilog=_UNIT_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--server", default=None,
                        help="base URL of a running fluxspec service; "
                             "default runs in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="full-circuit spectrum vs flux",
                       epilog=_UNIT_EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--config", required=True, help="key=value config file")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("simulate-qrm", help="quantum Rabi model spectrum vs flux",
                       epilog=_UNIT_EPILOG,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_simulate_qrm)

    p = sub.add_parser("bs-shift", help="Bloch-Siegert shift (numeric and analytic)")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_bs_shift)

    p = sub.add_parser("estimate-coupling",
                       help="closed-form qubit-resonator coupling estimate")
    p.add_argument("--config", required=True,
                   help="config with circuit keys incl. Csh_fF and Ip_nA")
    p.set_defaults(func=cmd_estimate_coupling)

    p = sub.add_parser("materials", help="material-parameter extraction")
    msub = p.add_subparsers(dest="materials_cmd", required=True)
    m = msub.add_parser("lk", help="kinetic inductance from R_normal and Tc")
    m.add_argument("R_ohm", type=float)
    m.add_argument("Tc_K", type=float)
    m = msub.add_parser("rho", help="resistivity from resistance and geometry")
    m.add_argument("R_ohm", type=float)
    m.add_argument("length_um", type=float)
    m.add_argument("width_um", type=float)
    m.add_argument("thickness_nm", type=float)
    m = msub.add_parser("tc", help="Tc and width from a two-column R(T) CSV")
    m.add_argument("curve", help="CSV with temperature_K,resistance_ohm")
    m.add_argument("--plateau-fraction", type=float, default=0.10,
                   help="top temperature fraction defining the onset plateau")
    m = msub.add_parser("calib", help="granular-Al sheet-resistance table lookup")
    m.add_argument("flow_sccm", type=float)
    m.add_argument("--baked", action="store_true")
    m.add_argument("--interpolate", action="store_true")
    for mp in msub.choices.values():
        mp.add_argument("--out-json", dest="out_json", default=None)
    p.set_defaults(func=cmd_materials)

    p = sub.add_parser("normalize", help="row-normalize a transmission map")
    p.add_argument("map", help="map CSV (first row flux, first column freq GHz) or JSON")
    p.add_argument("--out", required=True)
    p.add_argument("--out-json", dest="out_json", default=None)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("fit", help="normalize -> ridges -> label -> fit -> overlay")
    p.add_argument("map")
    p.add_argument("--guess", required=True,
                   help="config with QRM guess keys (Delta_GHz, Ip_nA, "
                        "omega_r_GHz, g_GHz) and optional stage options")
    p.add_argument("--out-prefix", default="fit")
    p.add_argument("--stop-after", choices=("normalize", "ridges", "label",
                                            "fit", "overlay"), default="overlay")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("overlay", help="model curves over a normalized map")
    p.add_argument("map")
    p.add_argument("fit_json", help="fit result JSON")
    p.add_argument("--labels", nargs="+", default=["w01", "w02"])
    p.add_argument("--out-csv", default="overlay.csv")
    p.add_argument("--out-svg", default="overlay.svg")
    p.set_defaults(func=cmd_overlay)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    client = ServiceClient(args.server)
    try:
        return args.func(args, client)
    except CliError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return ex.code
    except FluxspecError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_VALIDATION if ex.category == "validation" else EXIT_NUMERIC
    except OSError as ex:
        print(f"error: {ex}", file=sys.stderr)
        return EXIT_IO
    except httpx.HTTPError as ex:
        print(f"error: cannot reach service: {ex}", file=sys.stderr)
        return EXIT_IO
    finally:
        client.close()


if __name__ == "__main__":
    sys.exit(main())
