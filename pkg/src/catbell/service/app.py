"""FastAPI service wrapping the core package.

Endpoints mirror the CLI subcommands one-to-one.  Domain validation
errors surface as HTTP 400 with ``{"error": {"kind": "usage"}}``;
numerical failures (non-convergence, bound violations) as HTTP 500 with
``kind = "numerical"`` so clients can map them onto exit codes.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, crosscheck, experiment
from ..bell import Scheme, scheme_names
from ..optimize import NumericalError, OptimizerConfig, maximize_bell, sweep
from ..phasespace import PhaseSpaceError
from ..states import (
    Family,
    FamilyError,
    StateSpec,
    family_names,
    husimi_single,
    husimi_two_mode,
    wigner_scs,
    wigner_two_mode,
)
from .models import (
    BellRequest,
    BellResponse,
    BellResultModel,
    EvalRequest,
    EvalResponse,
    EvalRow,
    ExperimentRequest,
    ExperimentResponse,
    FamilyCheckModel,
    OracleCheckRequest,
    OracleCheckResponse,
    SettingsModel,
    SweepRequest,
    SweepResponse,
    SweepRowModel,
    ThresholdRowModel,
    base_metadata,
)


def _parse_family(name: str) -> Family:
    try:
        return Family(name)
    except ValueError:
        raise FamilyError(f"unknown family {name!r}; valid: {', '.join(family_names())}")


def _parse_scheme(name: str) -> Scheme:
    try:
        return Scheme(name)
    except ValueError:
        raise FamilyError(f"unknown scheme {name!r}; valid: {', '.join(scheme_names())}")


def _optimizer_config(options) -> OptimizerConfig:
    return options.to_config() if options is not None else OptimizerConfig()


def create_app() -> FastAPI:
    app = FastAPI(title="catbell", version=__version__)

    @app.exception_handler(PhaseSpaceError)
    async def _usage_error(request: Request, exc: PhaseSpaceError):
        return JSONResponse(status_code=400, content={"error": {"kind": "usage", "message": str(exc)}})

    @app.exception_handler(ValueError)
    async def _value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"error": {"kind": "usage", "message": str(exc)}})

    @app.exception_handler(NumericalError)
    async def _numerical_error(request: Request, exc: NumericalError):
        return JSONResponse(
            status_code=500, content={"error": {"kind": "numerical", "message": str(exc)}}
        )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "version": __version__}

    @app.get("/families")
    def families():
        return {"families": family_names(), "schemes": scheme_names()}

    @app.post("/eval", response_model=EvalResponse)
    def eval_points(req: EvalRequest):
        spec = StateSpec(_parse_family(req.family), req.gamma, req.s)
        rows = []
        for p in req.points:
            if spec.two_mode:
                if len(p) != 4:
                    raise FamilyError(
                        f"family {spec.family.value!r} needs 4-component points, got {p}"
                    )
                a = complex(p[0], p[1])
                b = complex(p[2], p[3])
                rows.append(
                    EvalRow(
                        a_re=a.real, a_im=a.imag, b_re=b.real, b_im=b.imag,
                        wigner=wigner_two_mode(spec, a, b),
                        husimi=husimi_two_mode(spec, a, b),
                    )
                )
            else:
                if len(p) != 2:
                    raise FamilyError(
                        f"family {spec.family.value!r} needs 2-component points, got {p}"
                    )
                a = complex(p[0], p[1])
                rows.append(
                    EvalRow(
                        a_re=a.real, a_im=a.imag,
                        wigner=wigner_scs(spec, a),
                        husimi=husimi_single(spec, a),
                    )
                )
        return EvalResponse(metadata=base_metadata(), rows=rows)

    @app.post("/bell", response_model=BellResponse)
    def bell_endpoint(req: BellRequest):
        spec = StateSpec(_parse_family(req.family), req.gamma, req.s)
        scheme = _parse_scheme(req.scheme)
        outcome = maximize_bell(spec, scheme, _optimizer_config(req.optimizer))
        return BellResponse(
            metadata=base_metadata(),
            family=spec.family.value,
            gamma=spec.gamma,
            s=spec.s,
            scheme=scheme.value,
            result=BellResultModel.from_outcome(outcome),
        )

    @app.post("/sweep", response_model=SweepResponse)
    def sweep_endpoint(req: SweepRequest):
        family = _parse_family(req.family)
        scheme = _parse_scheme(req.scheme)
        points = sweep(family, req.gamma_grid, req.s_grid, scheme, _optimizer_config(req.optimizer))
        rows = []
        n_failed = 0
        for pt in points:
            if pt.outcome is None:
                n_failed += 1
                rows.append(SweepRowModel(gamma=pt.gamma, s=pt.s, error=pt.error))
            else:
                rows.append(
                    SweepRowModel(
                        gamma=pt.gamma,
                        s=pt.s,
                        value=pt.outcome.value,
                        settings=SettingsModel.from_settings(pt.outcome.settings),
                        starts_converged=pt.outcome.starts_converged,
                    )
                )
        return SweepResponse(
            metadata=base_metadata(),
            family=family.value,
            scheme=scheme.value,
            rows=rows,
            n_failed=n_failed,
        )

    @app.post("/experiment", response_model=ExperimentResponse)
    def experiment_endpoint(req: ExperimentRequest):
        scheme = _parse_scheme(req.scheme)
        config = _optimizer_config(req.optimizer)
        if req.mode == "ideal":
            if req.ideal is None:
                raise FamilyError("ideal mode needs ideal='phi2' or 'sscs'")
            outcome = experiment.split_and_bell(None, scheme, config, ideal=req.ideal)
            return ExperimentResponse(
                metadata=base_metadata(),
                mode="ideal",
                scheme=scheme.value,
                ideal=req.ideal,
                result=BellResultModel.from_outcome(outcome),
            )
        grid = req.g_grid if req.g_grid else list(experiment.DEFAULT_G_GRID)
        res = experiment.threshold_sweep(grid, scheme, config)
        return ExperimentResponse(
            metadata=base_metadata(),
            mode="threshold",
            scheme=scheme.value,
            rows=[ThresholdRowModel(g=r.g, fidelity=r.fidelity, value=r.value) for r in res.rows],
            f_star=res.f_star,
            crossing_found=res.crossing_found,
            monotone=res.monotone,
            max_normalization_deficit=res.max_normalization_deficit,
            note=res.note or None,
        )

    @app.post("/oracle-check", response_model=OracleCheckResponse)
    def oracle_check_endpoint(req: OracleCheckRequest):
        kwargs = {}
        if req.families:
            kwargs["families"] = [_parse_family(f) for f in req.families]
        if req.gammas:
            kwargs["gammas"] = tuple(req.gammas)
        if req.s_values:
            kwargs["s_values"] = tuple(req.s_values)
        report = crosscheck.run_oracle_check(
            n_points=req.n_points,
            tolerance=req.tolerance,
            seed=req.seed,
            point_radius=req.point_radius,
            perturb=req.perturb,
            **kwargs,
        )
        return OracleCheckResponse(
            metadata=base_metadata(),
            passed=report.passed,
            tolerance=report.tolerance,
            checks=[
                FamilyCheckModel(
                    family=c.family,
                    n_points=c.n_points,
                    max_wigner_error=c.max_wigner_error,
                    max_husimi_error=c.max_husimi_error,
                    worst_case=c.worst_case,
                )
                for c in report.checks
            ],
            first_failure=report.first_failure,
        )

    return app
