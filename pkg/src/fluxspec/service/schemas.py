"""Pydantic request/response models for the HTTP service.

Field names carry explicit units (suffix conventions match the CLI
configuration keys); every numeric response embeds the resolved inputs so
artifacts are reproducible from the payload alone.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..circuit import CircuitParams, TruncationSpec
from ..rabi import QRMParams


class CircuitParamsModel(BaseModel):
    EJ_GHz: float | None = None
    Jc_uA_um2: float | None = None
    junction_area_um2: float | None = None
    CJ_fF: float | None = None
    ECJ_GHz: float | None = None
    alpha: float
    Csh_fF: float
    LR_nH: float
    CR_fF: float
    Lc_nH: float

    def to_domain(self) -> CircuitParams:
        return CircuitParams.create(
            ej_ghz=self.EJ_GHz, jc_ua_um2=self.Jc_uA_um2,
            junction_area_um2=self.junction_area_um2,
            cj_ff=self.CJ_fF, ecj_ghz=self.ECJ_GHz,
            alpha=self.alpha, csh_ff=self.Csh_fF,
            lr_nh=self.LR_nH, cr_ff=self.CR_fF, lc_nh=self.Lc_nH)


class TruncationModel(BaseModel):
    ncut1: int = 5
    ncut3: int = 5
    n4: int = 10
    n6: int = 8

    def to_domain(self) -> TruncationSpec:
        return TruncationSpec(ncut1=self.ncut1, ncut3=self.ncut3,
                              n4=self.n4, n6=self.n6)


class QRMParamsModel(BaseModel):
    Delta_GHz: float
    Ip_nA: float
    omega_r_GHz: float
    g_GHz: float
    nfock: int = 40

    def to_domain(self) -> QRMParams:
        return QRMParams(delta_ghz=self.Delta_GHz, ip_na=self.Ip_nA,
                         omega_r_ghz=self.omega_r_GHz, g_ghz=self.g_GHz,
                         nfock=self.nfock)


class SpectrumTableModel(BaseModel):
    flux: list[float]
    levels_ghz: list[list[float]]
    transitions_ghz: dict[str, list[float]]
    meta: dict = Field(default_factory=dict)


class SimulateRequest(BaseModel):
    circuit: CircuitParamsModel
    truncation: TruncationModel = Field(default_factory=TruncationModel)
    flux: list[float]
    levels: int = 6


class SimulateQRMRequest(BaseModel):
    qrm: QRMParamsModel
    flux: list[float]


class QubitGapRequest(BaseModel):
    circuit: CircuitParamsModel
    ncut: int = 10
    flux_window: tuple[float, float] = (0.45, 0.55)


class QubitGapResponse(BaseModel):
    Delta_GHz: float
    Ip_slope_nA: float
    Ip_matrix_element_nA: float
    Csh_fF: float


class BSShiftRequest(BaseModel):
    qrm: QRMParamsModel
    phi_ext: float = 0.5
    transition: str = "w01"


class BSShiftResponse(BaseModel):
    numeric_shift_GHz: float
    analytic_shift_GHz: float
    transition: str
    note: str


class CouplingRequest(BaseModel):
    circuit: CircuitParamsModel
    Ip_nA: float


class MaterialsLkRequest(BaseModel):
    R_ohm: float
    Tc_K: float


class MaterialsRhoRequest(BaseModel):
    R_ohm: float
    length_um: float
    width_um: float
    thickness_nm: float


class MaterialsSheetRequest(BaseModel):
    Lk_nH: float
    length_um: float
    width_um: float


class MaterialsTcRequest(BaseModel):
    temperature_K: list[float]
    resistance_ohm: list[float]
    plateau_fraction: float = 0.10


class MaterialsCalibRequest(BaseModel):
    flow_sccm: float
    baked: bool = False
    interpolate: bool = False


class S21MapModel(BaseModel):
    freq_ghz: list[float]
    flux: list[float]
    magnitude: list[list[float]]
    scale: str = "dB"
    meta: dict = Field(default_factory=dict)


class NormalizeRequest(BaseModel):
    map: S21MapModel


class TransitionPointModel(BaseModel):
    flux: float
    freq_ghz: float
    label: str | None = None
    weight: float = 1.0
    branch: int | None = None


class ExtractRidgesRequest(BaseModel):
    map: S21MapModel
    prominence: float = 1.0
    per_flux_max_peaks: int = 6
    jump_cap_ghz: float | None = None


class LabelRequest(BaseModel):
    points: list[TransitionPointModel]
    guess: QRMParamsModel
    ambiguity_tol_ghz: float = 0.02


class FitRequest(BaseModel):
    points: list[TransitionPointModel]
    guess: QRMParamsModel
    fix: list[str] = Field(default_factory=list)
    label_weights: dict[str, float] = Field(default_factory=dict)
    max_iter: int = 200


class FitResultModel(BaseModel):
    omega_r_GHz: float
    Delta_GHz: float
    Ip_nA: float
    g_GHz: float
    sigma: dict[str, float]
    covariance: list[list[float]]
    residual_rms_GHz: float
    cost_history: list[float]
    n_iterations: int
    converged: bool
    n_points: int
    fixed: list[str]
    meta: dict = Field(default_factory=dict)


class OverlayRequest(BaseModel):
    map: S21MapModel
    params: QRMParamsModel
    labels: list[str] = Field(default_factory=lambda: ["w01", "w02"])


class OverlayResponse(BaseModel):
    csv: str
    svg: str
