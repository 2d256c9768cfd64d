import math

import numpy as np
import pytest
from scipy.integrate import dblquad

from catbell import fock, states
from catbell.states import Family, FamilyError, StateSpec

from conftest import build_oracle, random_points

TWO_PI = 2.0 / math.pi
SQ26 = math.sqrt(2.6)


# ---------------------------------------------------------------------------
# spec validation
# ---------------------------------------------------------------------------

def test_spec_validation():
    with pytest.raises(FamilyError):
        StateSpec(Family.SCS_EVEN, -0.1)
    with pytest.raises(FamilyError):
        StateSpec(Family.SCS_EVEN, 1.0, 0.2)  # unsqueezed family
    with pytest.raises(FamilyError):
        StateSpec(Family.ECS_PHI_PLUS, 1.0, -0.3)
    with pytest.raises(FamilyError):
        StateSpec(Family.SCS_ODD, 0.0)  # odd state vanishes at gamma 0
    with pytest.raises(FamilyError):
        StateSpec(Family.ESS_MINUS, 0.0, 0.3)
    assert StateSpec(Family.ESS_PLUS, 0.0, 0.3).two_mode  # even at gamma 0 is fine
    assert not StateSpec(Family.SSCS_EVEN, 1.0, -0.7).two_mode


def test_mode_mismatch_errors():
    single = StateSpec(Family.SCS_EVEN, 1.0)
    double = StateSpec(Family.ECS_PSI_PLUS, 1.0)
    with pytest.raises(FamilyError):
        states.wigner_scs(double, 0.0)
    with pytest.raises(FamilyError):
        states.wigner_two_mode(single, 0.0, 0.0)
    with pytest.raises(FamilyError):
        states.husimi_single(double, 0.0)
    with pytest.raises(FamilyError):
        states.husimi_two_mode(single, 0.0, 0.0)
    with pytest.raises(FamilyError):
        states.husimi_marginal(single, "a", 0.0)
    with pytest.raises(FamilyError):
        states.husimi_marginal(double, "c", 0.0)


# ---------------------------------------------------------------------------
# single-mode values
# ---------------------------------------------------------------------------

def test_wigner_scs_parity_at_origin():
    for g in (0.4, 1.0, 1.9):
        assert states.wigner_scs(StateSpec(Family.SCS_EVEN, g), 0.0) == pytest.approx(TWO_PI)
        assert states.wigner_scs(StateSpec(Family.SCS_ODD, g), 0.0) == pytest.approx(-TWO_PI)


def test_husimi_single_values():
    assert states.husimi_single(StateSpec(Family.SCS_EVEN, 0.0), 0.0) == pytest.approx(1 / math.pi)
    spec = StateSpec(Family.SSCS_ODD, 1.0, 0.5)
    assert states.husimi_single(spec, 12.0 + 9.0j) == pytest.approx(0.0, abs=1e-30)


def test_squeezed_single_mode_matches_oracle(rng):
    spec = StateSpec(Family.SSCS_EVEN, SQ26, 0.4)
    state = build_oracle(spec)
    for p in random_points(rng, 6):
        assert states.wigner_scs(spec, p) == pytest.approx(fock.wigner(state, p), abs=1e-8)
        assert states.husimi_single(spec, p) == pytest.approx(fock.husimi(state, p), abs=1e-8)


def test_single_mode_wigner_normalization_and_purity():
    h, ext = 0.04, 7.0
    n = int(ext / h)
    for spec in (StateSpec(Family.SCS_EVEN, 1.0), StateSpec(Family.SSCS_ODD, 1.0, 0.4)):
        vals = [
            states.wigner_scs(spec, complex(i * h, j * h))
            for i in range(-n, n + 1)
            for j in range(-n, n + 1)
        ]
        total = sum(vals) * h * h
        purity = math.pi * sum(v * v for v in vals) * h * h
        assert total == pytest.approx(1.0, abs=1e-6)
        assert purity == pytest.approx(1.0, abs=1e-6)


# ---------------------------------------------------------------------------
# two-mode identities
# ---------------------------------------------------------------------------

def test_ess_at_zero_squeeze_equals_entangled_psi(rng):
    for sign_fam, psi_fam in (
        (Family.ESS_PLUS, Family.ECS_PSI_PLUS),
        (Family.ESS_MINUS, Family.ECS_PSI_MINUS),
    ):
        ess = StateSpec(sign_fam, 0.9, 0.0)
        psi = StateSpec(psi_fam, 0.9)
        for a, b in zip(random_points(rng, 5), random_points(rng, 5)):
            assert states.wigner_two_mode(ess, a, b) == pytest.approx(
                states.wigner_two_mode(psi, a, b), rel=1e-12, abs=1e-15
            )
            assert states.husimi_two_mode(ess, a, b) == pytest.approx(
                states.husimi_two_mode(psi, a, b), rel=1e-12, abs=1e-15
            )


def test_phi_at_zero_squeeze_is_swapped_negated_psi(rng):
    phi = StateSpec(Family.SECS_PHI_PLUS, 0.8, 0.0)
    ess = StateSpec(Family.ESS_PLUS, 0.8, 0.0)
    for a, b in zip(random_points(rng, 5), random_points(rng, 5)):
        assert states.wigner_two_mode(phi, a, b) == pytest.approx(
            states.wigner_two_mode(ess, -b, a), rel=1e-12, abs=1e-15
        )


def test_secs_at_zero_squeeze_equals_entangled(rng):
    secs = StateSpec(Family.SECS_PSI_MINUS, 1.1, 0.0)
    ecs = StateSpec(Family.ECS_PSI_MINUS, 1.1)
    for a, b in zip(random_points(rng, 5), random_points(rng, 5)):
        assert states.husimi_two_mode(secs, a, b) == pytest.approx(
            states.husimi_two_mode(ecs, a, b), rel=1e-12, abs=1e-15
        )


def test_phi_mode_exchange_symmetry(rng):
    for fam in (Family.ECS_PHI_PLUS, Family.ECS_PHI_MINUS):
        spec = StateSpec(fam, 1.0)
        for a, b in zip(random_points(rng, 4), random_points(rng, 4)):
            assert states.wigner_two_mode(spec, a, b) == pytest.approx(
                states.wigner_two_mode(spec, b, a), rel=1e-12
            )


def test_two_mode_values_match_oracle(rng):
    for spec in (
        StateSpec(Family.ECS_PHI_MINUS, 1.0),
        StateSpec(Family.SECS_PHI_MINUS, 1.0, 0.3),
        StateSpec(Family.ESS_MINUS, 1.0, 0.2),
    ):
        state = build_oracle(spec)
        for a, b in zip(random_points(rng, 5), random_points(rng, 5)):
            assert states.wigner_two_mode(spec, a, b) == pytest.approx(
                fock.wigner(state, a, b), abs=1e-8
            )
            assert states.husimi_two_mode(spec, a, b) == pytest.approx(
                fock.husimi(state, a, b), abs=1e-8
            )


def test_parity_at_origin_matches_oracle():
    quarter = (math.pi / 2.0) ** 2
    for fam, gamma, s in (
        (Family.ECS_PSI_PLUS, 0.7, 0.0),
        (Family.ECS_PHI_MINUS, 0.7, 0.0),
        (Family.ESS_MINUS, 0.9, 0.3),
        (Family.SECS_PSI_PLUS, 0.7, -0.4),
    ):
        spec = StateSpec(fam, gamma, s)
        state = build_oracle(spec, point_radius=0.5)
        assert quarter * states.wigner_two_mode(spec, 0.0, 0.0) == pytest.approx(
            fock.total_parity(state), abs=1e-10
        )


def _wigner_two_mode_grid(spec, ax, ay, bx, by):
    """Vectorized twin of wigner_two_mode for quadrature tests.

    Kept honest by the pointwise pin against the production scalar path in
    the test below; exists only because the 4-D normalization grid needs
    millions of evaluations.
    """
    a = ax + 1j * ay
    b = bx + 1j * by

    def w(z, mu):
        return TWO_PI * np.exp(-2.0 * np.abs(z - mu) ** 2)

    def x(z, mu):
        return TWO_PI * np.exp(-2.0 * np.abs(z) ** 2) * np.cos(4.0 * (np.conj(z) * mu).imag)

    def y(z, mu):
        return TWO_PI * np.exp(-2.0 * np.abs(z) ** 2) * np.sin(4.0 * (np.conj(z) * mu).imag)

    g = spec.gamma
    sign = spec.family.sign
    n2 = states.scs_norm(math.sqrt(2.0) * g, sign) ** 2
    if spec.family in (Family.ESS_PLUS, Family.ESS_MINUS):
        es, ems = math.exp(spec.s), math.exp(-spec.s)
        asq = es * a.real + 1j * ems * a.imag
        bsq = es * b.real + 1j * ems * b.imag
        u = (asq - bsq) / math.sqrt(2.0)
        v = (a + b) / math.sqrt(2.0)
        gg = math.sqrt(2.0) * g
        return n2 * (w(u, gg) + w(u, -gg) + sign * 2.0 * x(u, gg)) * w(v, 0.0)
    if spec.family.entangled_kind == "phi":
        return n2 * (
            w(a, g) * w(b, g) + w(a, -g) * w(b, -g)
            + sign * 2.0 * x(a, g) * x(b, g) - sign * 2.0 * y(a, g) * y(b, g)
        )
    return n2 * (
        w(a, g) * w(b, -g) + w(a, -g) * w(b, g)
        + sign * 2.0 * x(a, g) * x(b, g) + sign * 2.0 * y(a, g) * y(b, g)
    )


def test_two_mode_wigner_normalization(rng):
    h, ext = 0.1, 4.5
    axis = np.arange(-ext, ext + h / 2, h)
    for spec in (StateSpec(Family.ECS_PSI_MINUS, 0.8), StateSpec(Family.ESS_PLUS, 0.8, 0.3)):
        # pin the vectorized twin to the production path
        for _ in range(60):
            xa, ya, xb, yb = rng.uniform(-2, 2, size=4)
            assert float(_wigner_two_mode_grid(spec, xa, ya, xb, yb)) == pytest.approx(
                states.wigner_two_mode(spec, complex(xa, ya), complex(xb, yb)),
                rel=1e-12, abs=1e-15,
            )
        ax = axis[:, None, None]
        ay = axis[None, :, None]
        bx = axis[None, None, :]
        total = 0.0
        for yb in axis:  # chunk the fourth axis to bound memory
            total += float(np.sum(_wigner_two_mode_grid(spec, ax, ay, bx, float(yb))))
        assert total * h**4 == pytest.approx(1.0, abs=1e-5)


# ---------------------------------------------------------------------------
# Husimi positivity, bounds, marginals
# ---------------------------------------------------------------------------

def test_husimi_nonnegative_and_bounded(rng):
    single = [StateSpec(Family.SCS_ODD, 0.8), StateSpec(Family.SSCS_EVEN, 1.3, -0.6)]
    double = [
        StateSpec(Family.ECS_PHI_PLUS, 1.0),
        StateSpec(Family.SECS_PSI_MINUS, 0.9, 0.5),
        StateSpec(Family.ESS_MINUS, 1.2, -0.3),
    ]
    for spec in single:
        for p in random_points(rng, 40, radius=2.5):
            q = states.husimi_single(spec, p)
            assert q >= -1e-12
            assert q <= 1.0 / math.pi + 1e-12
    for spec in double:
        for a, b in zip(random_points(rng, 40, radius=2.5), random_points(rng, 40, radius=2.5)):
            assert states.husimi_two_mode(spec, a, b) >= -1e-12
            q = states.husimi_marginal(spec, "a", a)
            assert -1e-12 <= q <= 1.0 / math.pi + 1e-12


def test_husimi_term_representation_matches_kernels(rng):
    for fam, g, s in (
        (Family.ESS_PLUS, 0.9, 0.4),
        (Family.ESS_MINUS, 1.1, -0.5),
        (Family.SECS_PHI_MINUS, 0.8, 0.35),
        (Family.SECS_PSI_PLUS, 1.0, -0.25),
        (Family.ECS_PHI_PLUS, 1.2, 0.0),
    ):
        spec = StateSpec(fam, g, s)
        for a, b in zip(random_points(rng, 6), random_points(rng, 6)):
            assert states._husimi_terms_value(spec, a, b) == pytest.approx(
                states.husimi_two_mode(spec, a, b), rel=1e-11, abs=1e-14
            )


def test_marginal_closed_form_against_quadrature():
    cases = [
        (StateSpec(Family.ESS_MINUS, 1.0, 0.2), "a", 0.5 + 0.0j),
        (StateSpec(Family.SECS_PHI_MINUS, 0.8, 0.3), "b", -0.3 + 0.4j),
    ]
    for spec, mode, point in cases:
        if mode == "a":
            integrand = lambda y, x: states.husimi_two_mode(spec, point, complex(x, y))
        else:
            integrand = lambda y, x: states.husimi_two_mode(spec, complex(x, y), point)
        val, err = dblquad(integrand, -6, 6, -6, 6, epsabs=1e-10, epsrel=1e-10)
        assert states.husimi_marginal(spec, mode, point) == pytest.approx(val, abs=1e-8)
        assert err < 1e-8


def test_marginal_matches_oracle_partial_trace(rng):
    spec = StateSpec(Family.ESS_MINUS, 1.0, 0.2)
    state = build_oracle(spec)
    assert states.husimi_marginal(spec, "a", 0.5) == pytest.approx(
        fock.husimi_marginal(state, "a", 0.5), abs=1e-8
    )
    for mode in ("a", "b"):
        for p in random_points(rng, 4):
            assert states.husimi_marginal(spec, mode, p) == pytest.approx(
                fock.husimi_marginal(state, mode, p), abs=1e-8
            )


def test_marginal_exchange_symmetry(rng):
    spec = StateSpec(Family.ECS_PSI_PLUS, 0.9)
    for p in random_points(rng, 6):
        assert states.husimi_marginal(spec, "a", p) == pytest.approx(
            states.husimi_marginal(spec, "b", p), rel=1e-12
        )


def test_two_mode_vacuum_values():
    spec = StateSpec(Family.ESS_PLUS, 0.0, 0.0)
    assert states.husimi_two_mode(spec, 0.0, 0.0) == pytest.approx(1.0 / math.pi**2)
    assert states.husimi_marginal(spec, "a", 0.0) == pytest.approx(1.0 / math.pi)
    assert states.husimi_marginal(spec, "b", 0.3 + 0.1j) == pytest.approx(
        math.exp(-0.1) / math.pi, rel=1e-12
    )
