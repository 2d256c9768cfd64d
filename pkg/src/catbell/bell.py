"""Bell correlation functionals over displacement measurement settings.

Three dichotomic measurement schemes are supported, all parametrized by
four complex displacement settings ``(a, a', b, b')``:

* ``parity`` -- photon-number parity after displacement; the correlation
  is ``(pi/2)^2`` times the two-mode Wigner function, combined CHSH-style.
* ``ch``     -- displaced no-photon projectors in the CH (probability)
  form, built from the two-mode Q function and its marginals.
* ``onoff``  -- click/no-click detectors after displacement; CHSH
  combination of correlations ``A`` that expand into Q-function values at
  negated settings.

The on/off CHSH functional and the CH functional are related exactly by
``B_onoff(settings) = 4 * B_ch(-settings) + 2``; tests enforce this as an
algebraic identity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .phasespace import PhaseSpaceError
from .states import FamilyError, StateSpec, husimi_marginal, husimi_two_mode, wigner_two_mode

PI = math.pi
PI_HALF_SQ = (math.pi / 2.0) ** 2
CIRELSON_BOUND = 2.0 * math.sqrt(2.0)


class Scheme(str, enum.Enum):
    PARITY_CHSH = "parity"
    CH = "ch"
    ONOFF_CHSH = "onoff"


def scheme_names() -> list[str]:
    return [s.value for s in Scheme]


@dataclass(frozen=True)
class DisplacementSettings:
    """The four complex measurement settings of a Bell functional."""

    a: complex
    a_prime: complex
    b: complex
    b_prime: complex

    def __post_init__(self):
        for name in ("a", "a_prime", "b", "b_prime"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise PhaseSpaceError(f"non-finite setting {name}={v!r}")
            object.__setattr__(self, name, v)

    def negated(self) -> "DisplacementSettings":
        return DisplacementSettings(-self.a, -self.a_prime, -self.b, -self.b_prime)

    def as_vector(self) -> tuple[float, ...]:
        return (
            self.a.real, self.a.imag,
            self.a_prime.real, self.a_prime.imag,
            self.b.real, self.b.imag,
            self.b_prime.real, self.b_prime.imag,
        )

    @classmethod
    def from_vector(cls, x) -> "DisplacementSettings":
        return cls(
            complex(x[0], x[1]),
            complex(x[2], x[3]),
            complex(x[4], x[5]),
            complex(x[6], x[7]),
        )


def _require_two_mode(spec: StateSpec, op: str) -> None:
    if not spec.two_mode:
        raise FamilyError(f"{op} requires a two-mode family, got {spec.family.value!r}")


def chsh_parity(spec: StateSpec, settings: DisplacementSettings) -> float:
    """Signed CHSH combination of displaced-parity correlations.

    Each correlation equals ``(pi/2)^2 * W(x, y)`` and lies in [-1, 1];
    the combination is ``E(a,b) + E(a',b) + E(a,b') - E(a',b')``.
    """
    _require_two_mode(spec, "chsh_parity")
    st = settings
    return PI_HALF_SQ * (
        wigner_two_mode(spec, st.a, st.b)
        + wigner_two_mode(spec, st.a_prime, st.b)
        + wigner_two_mode(spec, st.a, st.b_prime)
        - wigner_two_mode(spec, st.a_prime, st.b_prime)
    )


def ch_value(spec: StateSpec, settings: DisplacementSettings) -> float:
    """CH (probability-form) Bell functional from Q functions.

    ``pi^2 [Q(a,b) + Q(a',b) + Q(a,b') - Q(a',b')] - pi [Q_a(a) + Q_b(b)]``;
    local realism bounds it by 0 from above.
    """
    _require_two_mode(spec, "ch_value")
    st = settings
    joint = (
        husimi_two_mode(spec, st.a, st.b)
        + husimi_two_mode(spec, st.a_prime, st.b)
        + husimi_two_mode(spec, st.a, st.b_prime)
        - husimi_two_mode(spec, st.a_prime, st.b_prime)
    )
    return PI * PI * joint - PI * (
        husimi_marginal(spec, "a", st.a) + husimi_marginal(spec, "b", st.b)
    )


def onoff_correlation(spec: StateSpec, x: complex, y: complex) -> float:
    """Joint on/off correlation A(x, y) in [-1, 1].

    ``A = 1 - 2 pi Q_a(-x) - 2 pi Q_b(-y) + 4 pi^2 Q_ab(-x, -y)``: the
    negated arguments come from the detector displacing by ``-x`` before
    the click/no-click discrimination.
    """
    _require_two_mode(spec, "onoff_correlation")
    return (
        1.0
        - 2.0 * PI * husimi_marginal(spec, "a", -x)
        - 2.0 * PI * husimi_marginal(spec, "b", -y)
        + 4.0 * PI * PI * husimi_two_mode(spec, -x, -y)
    )


def chsh_onoff(spec: StateSpec, settings: DisplacementSettings) -> float:
    """Signed CHSH combination of on/off correlations."""
    _require_two_mode(spec, "chsh_onoff")
    st = settings
    return (
        onoff_correlation(spec, st.a, st.b)
        + onoff_correlation(spec, st.a_prime, st.b)
        + onoff_correlation(spec, st.a, st.b_prime)
        - onoff_correlation(spec, st.a_prime, st.b_prime)
    )


def bell_value(spec: StateSpec, scheme: Scheme, settings: DisplacementSettings) -> float:
    """Evaluate the scheme's Bell functional at the given settings."""
    scheme = Scheme(scheme)
    if scheme is Scheme.PARITY_CHSH:
        return chsh_parity(spec, settings)
    if scheme is Scheme.CH:
        return ch_value(spec, settings)
    return chsh_onoff(spec, settings)
