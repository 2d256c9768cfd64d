"""Cat-state families and their phase-space distributions.

Fourteen families are supported.  Single-mode states are superpositions of
coherent branches at ``+gamma`` and ``-gamma`` (even/odd by photon parity),
optionally squeezed.  Two-mode states come in two pipelines that coincide
at ``s = 0``:

* ``ess-*``  -- squeeze the single-mode superposition of internal amplitude
  ``sqrt(2)*gamma`` first, then split it on a balanced beam splitter;
* ``secs-*`` -- split first into the four entangled families (``ecs-*``),
  then apply a two-mode squeeze.

The public ``gamma`` is always the state's own amplitude: per-branch for
single-mode families, per-arm for entangled ones.  The ``sqrt(2)`` internal
bookkeeping of the beam-splitter pipeline never leaks into the API.

Wigner functions are evaluated by composing the coherent/interference
kernels with the squeeze coordinate maps.  Husimi Q functions use the
trigonometric squeezed frame, in which every term is a Gaussian times an
optional cosine; marginals over either mode are therefore closed-form
(1-D complete-the-square integrals) and cheap enough for optimizer loops.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

from .phasespace import (
    INV_PI,
    PhaseSpaceError,
    q_coherent_kernel,
    q_frame_coord,
    q_squeeze_frame,
    scs_norm,
    squeeze_coord,
    two_mode_squeeze_coords,
    w_coherent_kernel,
    x_kernel,
    y_kernel,
)

SQRT2 = math.sqrt(2.0)


class FamilyError(PhaseSpaceError):
    """State family incompatible with the requested operation."""


class Family(str, enum.Enum):
    """The supported state families, keyed by their CLI names."""

    SCS_EVEN = "scs-even"
    SCS_ODD = "scs-odd"
    SSCS_EVEN = "sscs-even"
    SSCS_ODD = "sscs-odd"
    ESS_PLUS = "ess-plus"
    ESS_MINUS = "ess-minus"
    ECS_PHI_PLUS = "ecs-phi-plus"
    ECS_PHI_MINUS = "ecs-phi-minus"
    ECS_PSI_PLUS = "ecs-psi-plus"
    ECS_PSI_MINUS = "ecs-psi-minus"
    SECS_PHI_PLUS = "secs-phi-plus"
    SECS_PHI_MINUS = "secs-phi-minus"
    SECS_PSI_PLUS = "secs-psi-plus"
    SECS_PSI_MINUS = "secs-psi-minus"

    @property
    def n_modes(self) -> int:
        return 1 if self.value.startswith(("scs", "sscs")) else 2

    @property
    def sign(self) -> int:
        """+1 for even/plus superpositions, -1 for odd/minus."""
        return -1 if self.value.endswith(("odd", "minus")) else 1

    @property
    def allows_squeeze(self) -> bool:
        return self.value.startswith(("sscs", "ess", "secs"))

    @property
    def entangled_kind(self) -> str | None:
        """'psi' / 'phi' branch pattern of two-mode states, None for single-mode."""
        if self.n_modes == 1:
            return None
        if "phi" in self.value:
            return "phi"
        return "psi"  # ess-* behaves like the psi pattern at s = 0


def family_names() -> list[str]:
    return [f.value for f in Family]


@dataclass(frozen=True)
class StateSpec:
    """A state family with amplitude ``gamma`` and squeeze parameter ``s``."""

    family: Family
    gamma: float
    s: float = 0.0

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        g = float(self.gamma)
        s = float(self.s)
        if not math.isfinite(g) or g < 0.0:
            raise FamilyError(f"gamma must be finite and >= 0, got {self.gamma!r}")
        if not math.isfinite(s):
            raise FamilyError(f"s must be finite, got {self.s!r}")
        if s != 0.0 and not fam.allows_squeeze:
            raise FamilyError(f"family {fam.value!r} does not take a squeeze parameter (s must be 0)")
        if fam.sign == -1 and g == 0.0:
            raise FamilyError(f"family {fam.value!r} is undefined at gamma = 0")
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "s", s)

    @property
    def two_mode(self) -> bool:
        return self.family.n_modes == 2


def _require_modes(spec: StateSpec, n: int, op: str) -> None:
    if spec.family.n_modes != n:
        raise FamilyError(f"{op} requires a {n}-mode family, got {spec.family.value!r}")


# ---------------------------------------------------------------------------
# Wigner functions
# ---------------------------------------------------------------------------

def _wigner_scs_core(g: float, sign: int, point: complex) -> float:
    """Unsqueezed superposition Wigner: N^2 [W_g + W_-g + sign*2*X_g]."""
    n2 = scs_norm(g, sign) ** 2
    return n2 * (
        w_coherent_kernel(point, g)
        + w_coherent_kernel(point, -g)
        + sign * 2.0 * x_kernel(point, g)
    )


def wigner_scs(spec: StateSpec, point: complex) -> float:
    """Wigner function of a (squeezed) single-mode superposition state.

    Squeezing enters as the coordinate substitution ``point -> point^s``,
    so the squeezed state's Wigner function at ``point`` is the unsqueezed
    one at ``squeeze_coord(point, s)``.
    """
    _require_modes(spec, 1, "wigner_scs")
    zp = squeeze_coord(point, spec.s) if spec.s != 0.0 else complex(point)
    return _wigner_scs_core(spec.gamma, spec.family.sign, zp)


def wigner_two_mode(spec: StateSpec, a: complex, b: complex) -> float:
    """Two-mode Wigner function of an entangled family at points (a, b)."""
    _require_modes(spec, 2, "wigner_two_mode")
    fam = spec.family
    sign = fam.sign
    gamma = spec.gamma
    if fam in (Family.ESS_PLUS, Family.ESS_MINUS):
        us = (squeeze_coord(a, spec.s) - squeeze_coord(b, spec.s)) / SQRT2
        v = (complex(a) + complex(b)) / SQRT2
        return _wigner_scs_core(SQRT2 * gamma, sign, us) * w_coherent_kernel(v, 0.0)

    if fam in (Family.SECS_PHI_PLUS, Family.SECS_PHI_MINUS, Family.SECS_PSI_PLUS, Family.SECS_PSI_MINUS):
        a, b = two_mode_squeeze_coords(a, b, spec.s)

    n2 = scs_norm(SQRT2 * gamma, sign) ** 2
    if fam.entangled_kind == "phi":
        val = (
            w_coherent_kernel(a, gamma) * w_coherent_kernel(b, gamma)
            + w_coherent_kernel(a, -gamma) * w_coherent_kernel(b, -gamma)
            + sign * 2.0 * x_kernel(a, gamma) * x_kernel(b, gamma)
            - sign * 2.0 * y_kernel(a, gamma) * y_kernel(b, gamma)
        )
    else:
        val = (
            w_coherent_kernel(a, gamma) * w_coherent_kernel(b, -gamma)
            + w_coherent_kernel(a, -gamma) * w_coherent_kernel(b, gamma)
            + sign * 2.0 * x_kernel(a, gamma) * x_kernel(b, gamma)
            + sign * 2.0 * y_kernel(a, gamma) * y_kernel(b, gamma)
        )
    return n2 * val


# ---------------------------------------------------------------------------
# Husimi Q functions
# ---------------------------------------------------------------------------

def _husimi_sscs_core(g: float, s: float, sign: int, point: complex) -> float:
    """Q of a squeezed superposition with internal amplitude ``g``.

    In the squeezed frame the branch centers become ``+-g*(cos - sin)`` of
    the half angle, while the interference fringe wave number picks up the
    complementary combination ``g*(cos + sin)``.
    """
    frame = q_squeeze_frame(s)
    n2 = scs_norm(g, sign) ** 2
    gm = g * (frame.cos_half - frame.sin_half)
    gp = g * (frame.cos_half + frame.sin_half)
    zs = q_frame_coord(point, frame)
    cross_arg = -2.0 * zs.imag * gp  # 2 Im(conj(z_s) * g_+)
    cross = 2.0 * q_coherent_kernel(zs, 0.0) * math.exp(-gm * gm) * math.cos(cross_arg)
    return n2 * frame.cos_theta * (
        q_coherent_kernel(zs, gm) + q_coherent_kernel(zs, -gm) + sign * cross
    )


def husimi_single(spec: StateSpec, point: complex) -> float:
    """Husimi Q function of a single-mode family; in (0, 1/pi]."""
    _require_modes(spec, 1, "husimi_single")
    return _husimi_sscs_core(spec.gamma, spec.s, spec.family.sign, point)


def husimi_two_mode(spec: StateSpec, a: complex, b: complex) -> float:
    """Two-mode Husimi Q function of an entangled family; nonnegative."""
    _require_modes(spec, 2, "husimi_two_mode")
    fam = spec.family
    sign = fam.sign
    gamma = spec.gamma
    a = complex(a)
    b = complex(b)
    if fam in (Family.ESS_PLUS, Family.ESS_MINUS):
        u = (a - b) / SQRT2
        v = (a + b) / SQRT2
        return _husimi_sscs_core(SQRT2 * gamma, spec.s, sign, u) * q_coherent_kernel(v, 0.0)

    frame = q_squeeze_frame(spec.s)
    c, sn = frame.cos_half, frame.sin_half
    ta = complex(c * a.real + sn * b.real, c * a.imag - sn * b.imag)
    tb = complex(c * b.real + sn * a.real, c * b.imag - sn * a.imag)
    gm = gamma * (c - sn)
    gp = gamma * (c + sn)
    n2 = scs_norm(SQRT2 * gamma, sign) ** 2
    c2 = frame.cos_theta * frame.cos_theta
    # Fringe phase uses the single-mode frame coordinates of a and b.
    fringe = 2.0 * gamma * frame.cos_theta
    if fam.entangled_kind == "phi":
        diag = (
            q_coherent_kernel(ta, gm) * q_coherent_kernel(tb, gm)
            + q_coherent_kernel(ta, -gm) * q_coherent_kernel(tb, -gm)
        )
        damp = math.exp(-2.0 * gm * gm)
        cos_val = math.cos(fringe * (a.imag + b.imag))
    else:
        diag = (
            q_coherent_kernel(ta, gp) * q_coherent_kernel(tb, -gp)
            + q_coherent_kernel(ta, -gp) * q_coherent_kernel(tb, gp)
        )
        damp = math.exp(-2.0 * gp * gp)
        cos_val = math.cos(fringe * (a.imag - b.imag))
    cross = 2.0 * damp * q_coherent_kernel(ta, 0.0) * q_coherent_kernel(tb, 0.0) * cos_val
    return n2 * c2 * (diag + sign * cross)


# ---------------------------------------------------------------------------
# Closed-form Husimi marginals
# ---------------------------------------------------------------------------
#
# Every two-mode Q above is a finite sum of terms
#
#     coef * exp(Ex(xa, xb)) * exp(Ey(ya, yb)) * cos(ka*ya + kb*yb)
#
# with Ex, Ey concave quadratics.  The x/y split is exact because all
# amplitudes are real, so branch shifts live in the x block and fringes in
# the y block.  Integrating out one mode is then a pair of 1-D Gaussian
# integrals, one of them against a cosine.

def _neg_sq(ca: float, cb: float, c0: float) -> tuple[float, ...]:
    """Exponent contribution of -(ca*u + cb*v + c0)^2 as (uu, vv, uv, u, v, const)."""
    return (-ca * ca, -cb * cb, -2.0 * ca * cb, -2.0 * ca * c0, -2.0 * cb * c0, -c0 * c0)


def _exp6(*forms: tuple[float, float, float]) -> tuple[float, ...]:
    acc = [0.0] * 6
    for form in forms:
        for i, inc in enumerate(_neg_sq(*form)):
            acc[i] += inc
    return tuple(acc)


@lru_cache(maxsize=256)
def _q_terms(family: Family, gamma: float, s: float):
    """Gaussian-times-cosine term list of the two-mode Q function."""
    sign = family.sign
    frame = q_squeeze_frame(s)
    c, sn = frame.cos_half, frame.sin_half
    ct = frame.cos_theta
    inv_pi2 = INV_PI * INV_PI
    terms = []
    if family in (Family.ESS_PLUS, Family.ESS_MINUS):
        g = SQRT2 * gamma
        n2 = scs_norm(g, sign) ** 2
        gm = g * (c - sn)
        gp = g * (c + sn)
        p_ = (c + sn) / SQRT2   # x coefficient of P*u_x
        m_ = (c - sn) / SQRT2   # y coefficient of M*u_y
        h = 1.0 / SQRT2
        ey = _exp6((m_, -m_, 0.0), (h, h, 0.0))
        for mu in (gm, -gm):
            ex = _exp6((p_, -p_, -mu), (h, h, 0.0))
            terms.append((n2 * ct * inv_pi2, ex, ey, 0.0, 0.0))
        ex = _exp6((p_, -p_, 0.0), (h, h, 0.0))
        k = SQRT2 * (c - sn) * gp
        terms.append((sign * 2.0 * n2 * ct * math.exp(-gm * gm) * inv_pi2, ex, ey, k, -k))
        return tuple(terms)

    n2 = scs_norm(SQRT2 * gamma, sign) ** 2
    c2 = ct * ct
    gm = gamma * (c - sn)
    gp = gamma * (c + sn)
    ey = _exp6((c, -sn, 0.0), (-sn, c, 0.0))
    fringe = 2.0 * gamma * ct
    if family.entangled_kind == "phi":
        for mu in (gm, -gm):
            ex = _exp6((c, sn, -mu), (sn, c, -mu))
            terms.append((n2 * c2 * inv_pi2, ex, ey, 0.0, 0.0))
        ex = _exp6((c, sn, 0.0), (sn, c, 0.0))
        coef = sign * 2.0 * n2 * c2 * math.exp(-2.0 * gm * gm) * inv_pi2
        terms.append((coef, ex, ey, fringe, fringe))
    else:
        for mu in (gp, -gp):
            ex = _exp6((c, sn, -mu), (sn, c, mu))
            terms.append((n2 * c2 * inv_pi2, ex, ey, 0.0, 0.0))
        ex = _exp6((c, sn, 0.0), (sn, c, 0.0))
        coef = sign * 2.0 * n2 * c2 * math.exp(-2.0 * gp * gp) * inv_pi2
        terms.append((coef, ex, ey, fringe, -fringe))
    return tuple(terms)


def _husimi_terms_value(spec: StateSpec, a: complex, b: complex) -> float:
    """Evaluate the term representation directly (consistency-test hook)."""
    xa, ya, xb, yb = a.real, a.imag, b.real, b.imag
    total = 0.0
    for coef, ex, ey, ka, kb in _q_terms(spec.family, spec.gamma, spec.s):
        expo = (
            ex[0] * xa * xa + ex[1] * xb * xb + ex[2] * xa * xb + ex[3] * xa + ex[4] * xb + ex[5]
            + ey[0] * ya * ya + ey[1] * yb * yb + ey[2] * ya * yb + ey[3] * ya + ey[4] * yb + ey[5]
        )
        total += coef * math.exp(expo) * math.cos(ka * ya + kb * yb)
    return total


def husimi_marginal(spec: StateSpec, mode: str, point: complex) -> float:
    """Closed-form marginal of the two-mode Q over the other mode.

    ``mode`` is ``"a"`` or ``"b"``: the mode the marginal is *of*.  Equals
    the Q function of the reduced state, so it is nonnegative and bounded
    by 1/pi.
    """
    _require_modes(spec, 2, "husimi_marginal")
    if mode not in ("a", "b"):
        raise FamilyError(f"mode must be 'a' or 'b', got {mode!r}")
    p = complex(point)
    if not (math.isfinite(p.real) and math.isfinite(p.imag)):
        raise PhaseSpaceError(f"non-finite point: {point!r}")
    x0, y0 = p.real, p.imag
    keep_a = mode == "a"
    total = 0.0
    for coef, ex, ey, ka, kb in _q_terms(spec.family, spec.gamma, spec.s):
        if keep_a:
            ax = -ex[1]
            bx = ex[2] * x0 + ex[4]
            kept_x = ex[0] * x0 * x0 + ex[3] * x0 + ex[5]
            ay = -ey[1]
            by = ey[2] * y0 + ey[4]
            kept_y = ey[0] * y0 * y0 + ey[3] * y0 + ey[5]
            k, phi0 = kb, ka * y0
        else:
            ax = -ex[0]
            bx = ex[2] * x0 + ex[3]
            kept_x = ex[1] * x0 * x0 + ex[4] * x0 + ex[5]
            ay = -ey[0]
            by = ey[2] * y0 + ey[3]
            kept_y = ey[1] * y0 * y0 + ey[4] * y0 + ey[5]
            k, phi0 = ka, kb * y0
        val_x = math.sqrt(math.pi / ax) * math.exp(kept_x + bx * bx / (4.0 * ax))
        val_y = (
            math.sqrt(math.pi / ay)
            * math.exp(kept_y + (by * by - k * k) / (4.0 * ay))
            * math.cos(phi0 + by * k / (2.0 * ay))
        )
        total += coef * val_x * val_y
    return total
