"""Realistic source model: gain-parametrized Wigner function, fidelity to
the two-photon approximant, and Bell values of the beam-split state.

The experimentally generated single-mode state is described by a closed
form Wigner function -- a degree-4 polynomial in (x^2, p^2) under an
elliptical Gaussian envelope -- whose four parameters reduce, for perfect
detection, to functions of a single amplifier gain ``g > 1``.  The same
functional form with shifted parameters is its Husimi Q function.

Everything downstream works on that polynomial-times-Gaussian shape:

* fidelity against the ideal ``sqrt(1/3)|0> + sqrt(2/3)|2>`` state via the
  phase-space overlap ``pi * Int W1 W2``;
* two-mode quasiprobabilities of the state split on a balanced beam
  splitter with vacuum (a linear coordinate substitution, valid for mixed
  inputs), with closed-form single-mode marginals for the on/off scheme;
* multistart Bell optimization and the fidelity threshold where the
  optimized value crosses the local-realism bound 2.

Coordinates: ``x = sqrt(2) Re(alpha)``, ``p = sqrt(2) Im(alpha)``; the
polynomial forms are densities in ``dx dp`` and convert to the package's
``d^2 alpha`` convention by a factor of 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bell import CIRELSON_BOUND, Scheme
from .optimize import (
    BellOutcome,
    DisplacementSettings,
    NumericalError,
    OptimizerConfig,
    local_refine,
    maximize_bell,
    multistart_maximize,
)
from .states import Family, StateSpec

PI = math.pi
SQRT2 = math.sqrt(2.0)


class QuadratureError(NumericalError):
    """Grid refinement failed to stabilize an integral."""


@dataclass(frozen=True)
class ExperimentModel:
    """Envelope/polynomial parameters of the realistic state.

    ``a_w`` and ``b_w`` are the x and p Gaussian scales (named to avoid
    clashing with displacement-setting symbols), ``nu`` the momentum
    distortion, ``delta`` the polynomial weight.  ``kind`` records whether
    the parameters describe the Wigner or the Husimi form.
    """

    g: float
    a_w: float
    b_w: float
    nu: float
    delta: float
    kind: str = "wigner"

    def __post_init__(self):
        if self.b_w <= 0.0 or self.a_w <= 0.0:
            raise ValueError("Gaussian scales must be positive")
        if self.a_w == self.b_w:
            raise ValueError("degenerate model: a_w must differ from b_w")


def reduce_params(g: float) -> ExperimentModel:
    """Perfect-detection reduction: all four parameters from the gain g."""
    if not (math.isfinite(g) and g > 1.0):
        raise ValueError(f"gain must be finite and > 1, got {g!r}")
    a_w = g
    b_w = a_w - (g - 1.0) ** 2 / g
    return ExperimentModel(g=g, a_w=a_w, b_w=b_w, nu=1.0 / g, delta=1.0)


def to_q_params(model: ExperimentModel) -> ExperimentModel:
    """Husimi-form parameters of the same state.

    The Gaussian scales widen by one vacuum unit and the polynomial weight
    rescales; the functional form is unchanged.
    """
    if model.kind != "wigner":
        raise ValueError("to_q_params expects Wigner-form parameters")
    return ExperimentModel(
        g=model.g,
        a_w=model.a_w + 1.0,
        b_w=model.b_w + 1.0,
        nu=model.nu,
        delta=model.delta * model.a_w / (model.a_w + 1.0),
        kind="husimi",
    )


def _brace_coefficients(model: ExperimentModel) -> tuple[float, tuple[tuple[float, ...], ...]]:
    """Prefactor and polynomial coefficients c[j][k] of x^(2j) p^(2k)."""
    a, b, nu, delta = model.a_w, model.b_w, model.nu, model.delta
    k_const = (a * nu - b) ** 2 / (2.0 * b * (a - b))
    r_const = delta * a * (1.0 - nu) ** 2 / (2.0 * (a - b))
    e_const = 1.0 - delta * (1.0 + k_const)
    g1 = 1.0 / a
    g2 = a * nu * nu / (b * b)
    c20 = 0.5 * delta * delta * g1 * g1
    c11 = delta * delta * g1 * g2
    c02 = 0.5 * delta * delta * g2 * g2
    c10 = 2.0 * delta * e_const * g1 + delta * delta * k_const * g1
    c01 = 2.0 * delta * e_const * g2 - delta * delta * k_const * g2
    c00 = e_const * e_const + 0.5 * delta * delta * k_const * k_const
    pref = 1.0 / (PI * math.sqrt(a * b) * ((1.0 - r_const) ** 2 + 0.5 * r_const**2))
    return pref, ((c00, c01, c02), (c10, c11, 0.0), (c20, 0.0, 0.0))


_GAUSS_EVEN = (1.0, 0.5, 0.75)  # Int x^{2j} e^{-x^2/A} dx = sqrt(pi A) * tab[j] * A^j


def _gauss_integral(j: int, scale: float) -> float:
    return math.sqrt(PI * scale) * _GAUSS_EVEN[j] * scale**j


def _even_moment(mu: float, var: float, j: int) -> float:
    """E[q^(2j)] for q ~ Normal(mu, var), j <= 2."""
    if j == 0:
        return 1.0
    if j == 1:
        return mu * mu + var
    return mu**4 + 6.0 * mu * mu * var + 3.0 * var * var


@dataclass(frozen=True)
class PhaseSpacePoly:
    """Polynomial-times-Gaussian phase-space density in (x, p) units.

    ``value = pref * exp(-x^2/a - p^2/b) * sum_jk c[j][k] x^(2j) p^(2k)``,
    normalized (when ``integral() == 1``) against ``dx dp``.
    """

    a: float
    b: float
    pref: float
    coeffs: tuple[tuple[float, ...], ...]

    def value_xp(self, x, p):
        x2 = x * x
        p2 = p * p
        poly = 0.0
        for j in range(3):
            for k in range(3):
                c = self.coeffs[j][k] if k < len(self.coeffs[j]) else 0.0
                if c != 0.0:
                    poly = poly + c * x2**j * p2**k
        return self.pref * np.exp(-x2 / self.a - p2 / self.b) * poly

    def value_alpha(self, z: complex):
        """Density against d^2 alpha at alpha = z (factor-2 Jacobian)."""
        return 2.0 * self.value_xp(SQRT2 * np.real(z), SQRT2 * np.imag(z))

    def integral(self) -> float:
        """Closed-form Int value dx dp."""
        total = 0.0
        for j in range(3):
            for k in range(3):
                c = self.coeffs[j][k] if k < len(self.coeffs[j]) else 0.0
                if c != 0.0:
                    total += c * _gauss_integral(j, self.a) * _gauss_integral(k, self.b)
        return self.pref * total

    def normalized(self) -> tuple["PhaseSpacePoly", float]:
        """Unit-integral rescale; returns (poly, deficit = 1 - raw integral)."""
        raw = self.integral()
        return (
            PhaseSpacePoly(self.a, self.b, self.pref / raw, self.coeffs),
            1.0 - raw,
        )


def experiment_wigner_poly(model: ExperimentModel) -> PhaseSpacePoly:
    if model.kind != "wigner":
        raise ValueError("expected Wigner-form parameters")
    pref, coeffs = _brace_coefficients(model)
    return PhaseSpacePoly(model.a_w, model.b_w, pref, coeffs)


def experiment_husimi_poly(model: ExperimentModel) -> PhaseSpacePoly:
    qmodel = to_q_params(model) if model.kind == "wigner" else model
    pref, coeffs = _brace_coefficients(qmodel)
    return PhaseSpacePoly(qmodel.a_w, qmodel.b_w, pref, coeffs)


def w_exp(x: float, p: float, model: ExperimentModel) -> float:
    """The realistic Wigner function, evaluated literally (no renorm)."""
    return float(experiment_wigner_poly(model).value_xp(x, p))


def phi2_wigner_poly() -> PhaseSpacePoly:
    """Wigner function of sqrt(1/3)|0> + sqrt(2/3)|2> in (x, p) units."""
    coeffs = (
        (1.0, -4.0, 4.0 / 3.0),
        (-4.0 / 3.0, 8.0 / 3.0, 0.0),
        (4.0 / 3.0, 0.0, 0.0),
    )
    return PhaseSpacePoly(1.0, 1.0, 1.0 / PI, coeffs)


def phi2_husimi_poly() -> PhaseSpacePoly:
    coeffs = (
        (1.0, -1.0, 0.25),
        (1.0, 0.5, 0.0),
        (0.25, 0.0, 0.0),
    )
    return PhaseSpacePoly(2.0, 2.0, 1.0 / (6.0 * PI), coeffs)


# ---------------------------------------------------------------------------
# Beam-split two-mode evaluation
# ---------------------------------------------------------------------------

def split_wigner_value(poly: PhaseSpacePoly, a: complex, b: complex) -> float:
    """W of the state split with vacuum: W((a-b)/sqrt2) * W_vac((a+b)/sqrt2)."""
    u = (a - b) / SQRT2
    v = (a + b) / SQRT2
    env = (2.0 / PI) * math.exp(-2.0 * (v.real * v.real + v.imag * v.imag))
    return float(poly.value_alpha(u)) * env


def split_husimi_value(poly: PhaseSpacePoly, a: complex, b: complex) -> float:
    u = (a - b) / SQRT2
    v = (a + b) / SQRT2
    env = math.exp(-(v.real * v.real + v.imag * v.imag)) / PI
    return float(poly.value_alpha(u)) * env


def split_husimi_marginal(poly: PhaseSpacePoly, point: complex) -> float:
    """Closed-form marginal of the split Q over the other mode.

    Both marginals coincide because the polynomial is even.  Completing
    the square mode-wise leaves Gaussian moments of the difference
    coordinate; only even moments up to order 4 appear.
    """
    xa = SQRT2 * point.real
    pa = SQRT2 * point.imag
    vals_x = _marginal_factors(poly.a, xa)
    vals_p = _marginal_factors(poly.b, pa)
    total = 0.0
    for j in range(3):
        for k in range(3):
            c = poly.coeffs[j][k] if k < len(poly.coeffs[j]) else 0.0
            if c != 0.0:
                total += c * vals_x[j] * vals_p[k]
    return poly.pref * total / PI


def _marginal_factors(scale: float, coord: float) -> tuple[float, float, float]:
    """Int q^{2j} exp(-q^2/scale - (sqrt2*coord - q)^2/2) * sqrt2 dq for j = 0..2."""
    var = scale / (scale + 2.0)
    mu = SQRT2 * scale * coord / (scale + 2.0)
    base = SQRT2 * math.sqrt(2.0 * PI * scale / (scale + 2.0)) * math.exp(
        -2.0 * coord * coord / (scale + 2.0)
    )
    return tuple(base * _even_moment(mu, var, j) for j in range(3))


# ---------------------------------------------------------------------------
# Fidelity via phase-space overlap
# ---------------------------------------------------------------------------

def wigner_overlap(poly1: PhaseSpacePoly, poly2: PhaseSpacePoly, tol: float = 1e-8) -> float:
    """pi * Int W1 W2 d^2alpha on a refined grid.

    The integrand is polynomial-times-Gaussian (no oscillation), so a
    trapezoid grid converges fast; refinement stops when two successive
    steps agree to ``tol``.  The normalization convention is pinned by the
    pure-state self-overlap tests.
    """
    extent_xp = 6.0 * math.sqrt(max(poly1.a, poly1.b, poly2.a, poly2.b) / 2.0) + 1.0
    extent = extent_xp / SQRT2  # alpha units
    prev = None
    for step_xp in (0.2, 0.1, 0.05, 0.025, 0.0125):
        h = step_xp / SQRT2
        n = int(math.ceil(extent / h))
        xs = np.arange(-n, n + 1) * h
        xg, yg = np.meshgrid(xs, xs, indexing="ij", sparse=True)
        w1 = poly1.value_xp(SQRT2 * xg, SQRT2 * yg) * 2.0
        w2 = poly2.value_xp(SQRT2 * xg, SQRT2 * yg) * 2.0
        val = PI * float(np.sum(w1 * w2)) * h * h
        if prev is not None and abs(val - prev) <= tol and step_xp <= 0.05:
            return val
        prev = val
    raise QuadratureError(f"overlap quadrature did not stabilize to {tol} (last {val})")


def overlap_of_callables(f1, f2, extent: float, tol: float = 1e-8) -> float:
    """pi * Int f1 f2 d^2alpha for arbitrary d^2alpha-density callables.

    Slower sibling of :func:`wigner_overlap` used to pin the overlap
    convention on states that are not polynomial-Gaussian.
    """
    prev = None
    for step in (0.1, 0.05, 0.025):
        n = int(math.ceil(extent / step))
        xs = np.arange(-n, n + 1) * step
        total = 0.0
        for x in xs:
            for y in xs:
                z = complex(x, y)
                total += f1(z) * f2(z)
        val = PI * total * step * step
        if prev is not None and abs(val - prev) <= tol:
            return val
        prev = val
    raise QuadratureError(f"callable overlap did not stabilize to {tol}")


def fidelity_phi2(g: float) -> float:
    """Overlap of the realistic state with the two-photon approximant."""
    wpoly, _deficit = experiment_wigner_poly(reduce_params(g)).normalized()
    fid = wigner_overlap(wpoly, phi2_wigner_poly())
    if not -1e-6 <= fid <= 1.0 + 1e-6:
        raise NumericalError(f"fidelity {fid} outside [0, 1]")
    return fid


def normalization_deficit(g: float) -> float:
    """1 - Int W_exp: nonzero would flag residual transcription trouble."""
    return experiment_wigner_poly(reduce_params(g)).normalized()[1]


# ---------------------------------------------------------------------------
# Bell optimization of the split state
# ---------------------------------------------------------------------------

_IDEAL_SSCS_GAMMA = math.sqrt(1.3)  # per-arm amplitude of the split sqrt(2.6) state
_IDEAL_SSCS_S = 0.4


def _split_objective(wpoly: PhaseSpacePoly | None, qpoly: PhaseSpacePoly | None, scheme: Scheme):
    if scheme is Scheme.PARITY_CHSH:
        def objective(x):
            a = complex(x[0], x[1])
            ap = complex(x[2], x[3])
            b = complex(x[4], x[5])
            bp = complex(x[6], x[7])
            c = (PI / 2.0) ** 2
            return abs(c * (
                split_wigner_value(wpoly, a, b)
                + split_wigner_value(wpoly, ap, b)
                + split_wigner_value(wpoly, a, bp)
                - split_wigner_value(wpoly, ap, bp)
            ))
        return objective

    def corr(x: complex, y: complex) -> float:
        return (
            1.0
            - 2.0 * PI * split_husimi_marginal(qpoly, -x)
            - 2.0 * PI * split_husimi_marginal(qpoly, -y)
            + 4.0 * PI * PI * split_husimi_value(qpoly, -x, -y)
        )

    def objective(x):
        a = complex(x[0], x[1])
        ap = complex(x[2], x[3])
        b = complex(x[4], x[5])
        bp = complex(x[6], x[7])
        return abs(corr(a, b) + corr(ap, b) + corr(a, bp) - corr(ap, bp))

    return objective


def split_and_bell(
    g: float | None,
    scheme: Scheme,
    config: OptimizerConfig | None = None,
    ideal: str | None = None,
    extra_starts=(),
) -> BellOutcome:
    """Optimized Bell value of the beam-split source state.

    ``g`` selects the realistic state; ``ideal`` may instead pick
    ``"phi2"`` or ``"sscs"`` (the squeezed-superposition the approximant
    targets).  The on/off scheme runs on the Husimi form, parity on the
    Wigner form.
    """
    scheme = Scheme(scheme)
    if scheme is Scheme.CH:
        raise ValueError("split_and_bell supports the parity and onoff schemes")
    config = config or OptimizerConfig()
    if ideal == "sscs":
        spec = StateSpec(Family.ESS_PLUS, _IDEAL_SSCS_GAMMA, _IDEAL_SSCS_S)
        return maximize_bell(spec, scheme, config, extra_starts=extra_starts)
    if ideal == "phi2":
        wpoly = phi2_wigner_poly()
        qpoly = phi2_husimi_poly()
    elif ideal is None:
        if g is None:
            raise ValueError("either g or ideal must be given")
        model = reduce_params(g)
        wpoly, _ = experiment_wigner_poly(model).normalized()
        qpoly, _ = experiment_husimi_poly(model).normalized()
    else:
        raise ValueError(f"unknown ideal state {ideal!r} (expected 'phi2' or 'sscs')")

    objective = _split_objective(wpoly, qpoly, scheme)
    halfwidth = config.box_halfwidth or 1.5  # split states are compact
    best_val, best_x, converged, best_idx = multistart_maximize(
        objective, halfwidth, config, extra_starts
    )
    if best_val > CIRELSON_BOUND + 1e-6:
        raise NumericalError(f"optimized value {best_val} exceeds the quantum bound")
    return BellOutcome(
        value=best_val,
        settings=DisplacementSettings.from_vector(best_x),
        starts_converged=converged,
        best_start_index=best_idx,
    )


@dataclass(frozen=True)
class ThresholdRow:
    g: float
    fidelity: float
    value: float


@dataclass(frozen=True)
class ThresholdResult:
    """Fidelity/Bell table over a gain grid plus the B = 2 crossing."""

    scheme: Scheme
    rows: tuple[ThresholdRow, ...]
    f_star: float | None
    crossing_found: bool
    monotone: bool
    max_normalization_deficit: float
    note: str = ""


DEFAULT_G_GRID = tuple(round(1.001 + 0.002 * i, 4) for i in range(50))


def threshold_sweep(
    g_grid,
    scheme: Scheme,
    config: OptimizerConfig | None = None,
) -> ThresholdResult:
    """Compute (F(g), B(g)) over the gain grid and locate the B = 2 crossing.

    The first grid point (highest fidelity) is optimized globally; later
    points track the violation branch by Nelder-Mead continuation from the
    previous arg max.  Tracking matters for the on/off scheme, where a
    trivial far-settings plateau at B -> 2 would otherwise mask the branch
    as it crosses below 2.  The crossing fidelity comes from linear
    interpolation in F between the bracketing grid points; interpolation
    is refused (with the violation reported) if either sequence fails to
    be monotone over the grid.
    """
    scheme = Scheme(scheme)
    if scheme is Scheme.CH:
        raise ValueError("threshold_sweep supports the parity and onoff schemes")
    config = config or OptimizerConfig()
    g_grid = list(g_grid)
    if not g_grid:
        raise ValueError("g_grid must be nonempty")
    if any(b <= a for a, b in zip(g_grid, g_grid[1:])):
        raise ValueError("g_grid must be strictly increasing")
    rows = []
    warm = None
    max_deficit = 0.0
    for g in g_grid:
        fid = fidelity_phi2(g)
        max_deficit = max(max_deficit, abs(normalization_deficit(g)))
        if warm is None:
            outcome = split_and_bell(g, scheme, config)
            value = outcome.value
            warm = np.asarray(outcome.settings.as_vector(), dtype=float)
        else:
            model = reduce_params(g)
            wpoly, _ = experiment_wigner_poly(model).normalized()
            qpoly, _ = experiment_husimi_poly(model).normalized()
            objective = _split_objective(wpoly, qpoly, scheme)
            value, warm, _ok = local_refine(objective, warm, config)
        rows.append(ThresholdRow(g=g, fidelity=fid, value=value))
    rows = tuple(rows)

    def _monotone(seq) -> bool:
        inc = all(b >= a - 1e-9 for a, b in zip(seq, seq[1:]))
        dec = all(b <= a + 1e-9 for a, b in zip(seq, seq[1:]))
        return inc or dec

    fs = [r.fidelity for r in rows]
    bs = [r.value for r in rows]
    monotone = _monotone(fs) and _monotone(bs)
    if not monotone:
        return ThresholdResult(
            scheme=scheme,
            rows=rows,
            f_star=None,
            crossing_found=False,
            monotone=False,
            max_normalization_deficit=max_deficit,
            note="fidelity or Bell sequence not monotone over the grid; interpolation refused",
        )
    f_star = None
    for r1, r2 in zip(rows, rows[1:]):
        if (r1.value - 2.0) * (r2.value - 2.0) <= 0.0 and r1.value != r2.value:
            frac = (2.0 - r1.value) / (r2.value - r1.value)
            f_star = r1.fidelity + frac * (r2.fidelity - r1.fidelity)
            break
    return ThresholdResult(
        scheme=scheme,
        rows=rows,
        f_star=f_star,
        crossing_found=f_star is not None,
        monotone=True,
        max_normalization_deficit=max_deficit,
        note="" if f_star is not None else "no B = 2 crossing inside the grid",
    )
