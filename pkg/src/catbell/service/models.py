"""Request/response schemas of the catbell service.

Every CLI subcommand maps onto one endpoint; the CLI is a thin client of
these models, so the wire format is the single source of truth for both.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator

from .. import __version__
from ..bell import DisplacementSettings
from ..optimize import BellOutcome, OptimizerConfig


def base_metadata() -> dict:
    return {
        "package": "catbell",
        "version": __version__,
        "units": "dimensionless quadrature units, densities against d^2alpha",
        "squeeze_convention": "s > 0 squeezes along the real axis",
    }


class OptimizerOptions(BaseModel):
    n_starts: Optional[int] = None
    seed: Optional[int] = None
    box_halfwidth: Optional[float] = None
    local_tol: Optional[float] = None
    max_iter: Optional[int] = None

    def to_config(self) -> OptimizerConfig:
        defaults = OptimizerConfig()
        return OptimizerConfig(
            n_starts=self.n_starts if self.n_starts is not None else defaults.n_starts,
            seed=self.seed if self.seed is not None else defaults.seed,
            box_halfwidth=self.box_halfwidth,
            local_tol=self.local_tol if self.local_tol is not None else defaults.local_tol,
            max_iter=self.max_iter if self.max_iter is not None else defaults.max_iter,
        )


class SettingsModel(BaseModel):
    a_re: float
    a_im: float
    ap_re: float
    ap_im: float
    b_re: float
    b_im: float
    bp_re: float
    bp_im: float

    @classmethod
    def from_settings(cls, st: DisplacementSettings) -> "SettingsModel":
        return cls(
            a_re=st.a.real, a_im=st.a.imag,
            ap_re=st.a_prime.real, ap_im=st.a_prime.imag,
            b_re=st.b.real, b_im=st.b.imag,
            bp_re=st.b_prime.real, bp_im=st.b_prime.imag,
        )


class BellResultModel(BaseModel):
    value: float
    settings: SettingsModel
    starts_converged: int
    best_start_index: int

    @classmethod
    def from_outcome(cls, outcome: BellOutcome) -> "BellResultModel":
        return cls(
            value=outcome.value,
            settings=SettingsModel.from_settings(outcome.settings),
            starts_converged=outcome.starts_converged,
            best_start_index=outcome.best_start_index,
        )


class EvalRequest(BaseModel):
    family: str
    gamma: float
    s: float = 0.0
    points: list[list[float]] = Field(min_length=1)

    @field_validator("points")
    @classmethod
    def _check_points(cls, pts):
        for p in pts:
            if len(p) not in (2, 4):
                raise ValueError(
                    "each point must be [re, im] (single-mode) or [a_re, a_im, b_re, b_im]"
                )
        return pts


class EvalRow(BaseModel):
    a_re: float
    a_im: float
    b_re: Optional[float] = None
    b_im: Optional[float] = None
    wigner: float
    husimi: float


class EvalResponse(BaseModel):
    metadata: dict
    rows: list[EvalRow]


class BellRequest(BaseModel):
    family: str
    gamma: float
    s: float = 0.0
    scheme: str
    optimizer: Optional[OptimizerOptions] = None


class BellResponse(BaseModel):
    metadata: dict
    family: str
    gamma: float
    s: float
    scheme: str
    result: BellResultModel


class SweepRequest(BaseModel):
    family: str
    scheme: str
    gamma_grid: list[float] = Field(min_length=1)
    s_grid: list[float] = Field(min_length=1)
    optimizer: Optional[OptimizerOptions] = None


class SweepRowModel(BaseModel):
    gamma: float
    s: float
    value: Optional[float] = None
    settings: Optional[SettingsModel] = None
    starts_converged: Optional[int] = None
    error: Optional[str] = None


class SweepResponse(BaseModel):
    metadata: dict
    family: str
    scheme: str
    rows: list[SweepRowModel]
    n_failed: int


class ExperimentRequest(BaseModel):
    mode: Literal["threshold", "ideal"]
    scheme: str
    g_grid: Optional[list[float]] = None
    ideal: Optional[Literal["phi2", "sscs"]] = None
    optimizer: Optional[OptimizerOptions] = None


class ThresholdRowModel(BaseModel):
    g: float
    fidelity: float
    value: float


class ExperimentResponse(BaseModel):
    metadata: dict
    mode: str
    scheme: str
    ideal: Optional[str] = None
    rows: Optional[list[ThresholdRowModel]] = None
    f_star: Optional[float] = None
    crossing_found: Optional[bool] = None
    monotone: Optional[bool] = None
    max_normalization_deficit: Optional[float] = None
    note: Optional[str] = None
    result: Optional[BellResultModel] = None


class OracleCheckRequest(BaseModel):
    families: Optional[list[str]] = None
    gammas: Optional[list[float]] = None
    s_values: Optional[list[float]] = None
    n_points: int = 25
    tolerance: float = 1e-8
    seed: int = 7
    point_radius: float = 1.25
    perturb: float = 0.0


class FamilyCheckModel(BaseModel):
    family: str
    n_points: int
    max_wigner_error: float
    max_husimi_error: float
    worst_case: str


class OracleCheckResponse(BaseModel):
    metadata: dict
    passed: bool
    tolerance: float
    checks: list[FamilyCheckModel]
    first_failure: Optional[str] = None
