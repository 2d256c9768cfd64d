import math

import pytest
from hypothesis import given, strategies as st

from catbell import phasespace as ps

TWO_PI = 2.0 / math.pi
finite = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)
points = st.builds(complex, finite, finite)


def test_coherent_wigner_kernel_values():
    assert ps.w_coherent_kernel(0.0, 0.0) == pytest.approx(TWO_PI)
    for g in (0.3, 1.0, 2.2):
        assert ps.w_coherent_kernel(g, g) == pytest.approx(TWO_PI)
    assert ps.w_coherent_kernel(1.0, 0.0) == pytest.approx(TWO_PI * math.exp(-2.0), rel=1e-12)


def test_coherent_wigner_kernel_normalized():
    h, ext = 0.05, 6.0
    n = int(ext / h)
    total = sum(
        ps.w_coherent_kernel(complex(i * h, j * h), 0.7)
        for i in range(-n, n + 1)
        for j in range(-n, n + 1)
    ) * h * h
    assert total == pytest.approx(1.0, abs=1e-6)


def test_q_kernel_values_and_normalization():
    assert ps.q_coherent_kernel(0.0, 0.0) == pytest.approx(1.0 / math.pi)
    assert ps.q_coherent_kernel(1.5, 1.5) == pytest.approx(1.0 / math.pi)
    assert ps.q_coherent_kernel(1.0, 0.0) == pytest.approx(math.exp(-1.0) / math.pi, rel=1e-12)
    h, ext = 0.05, 7.0
    n = int(ext / h)
    total = sum(
        ps.q_coherent_kernel(complex(i * h, j * h), -0.4 + 0.3j)
        for i in range(-n, n + 1)
        for j in range(-n, n + 1)
    ) * h * h
    assert total == pytest.approx(1.0, abs=1e-6)


def test_interference_kernel_values():
    for g in (0.0, 0.8, 1.7):
        assert ps.x_kernel(0.0, g) == pytest.approx(TWO_PI)
        assert ps.y_kernel(0.0, g) == pytest.approx(0.0, abs=1e-15)
    # real point, real center: no fringe phase
    assert ps.x_kernel(0.7, 1.2) == pytest.approx(TWO_PI * math.exp(-2 * 0.49), rel=1e-12)
    assert ps.y_kernel(0.7, 1.2) == 0.0
    # off-axis point picks up the fringe; sign follows Im(conj(point)*center)
    expected = TWO_PI * math.exp(-0.5)
    assert ps.x_kernel(0.5j, 1.0) == pytest.approx(expected * math.cos(2.0), rel=1e-12)
    assert ps.y_kernel(0.5j, 1.0) == pytest.approx(expected * math.sin(-2.0), rel=1e-12)


@given(points, points)
def test_interference_kernels_bounded(p, c):
    assert abs(ps.x_kernel(p, c)) <= TWO_PI + 1e-15
    assert abs(ps.y_kernel(p, c)) <= TWO_PI + 1e-15


@given(points, points)
def test_interference_pythagorean_identity(p, c):
    lhs = ps.x_kernel(p, c) ** 2 + ps.y_kernel(p, c) ** 2
    rhs = TWO_PI**2 * math.exp(-4.0 * abs(p) ** 2)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)


def test_squeeze_coord():
    z = 0.3 - 1.1j
    assert ps.squeeze_coord(z, 0.0) == z
    assert ps.squeeze_coord(1 + 1j, math.log(2.0)) == pytest.approx(2.0 + 0.5j)


@given(points, st.floats(min_value=-2.0, max_value=2.0, allow_nan=False))
def test_squeeze_coord_roundtrip_and_area(z, s):
    back = ps.squeeze_coord(ps.squeeze_coord(z, s), -s)
    assert back.real == pytest.approx(z.real, rel=1e-12, abs=1e-12)
    assert back.imag == pytest.approx(z.imag, rel=1e-12, abs=1e-12)
    # unit Jacobian of (re, im) -> (e^s re, e^-s im)
    assert math.exp(s) * math.exp(-s) == pytest.approx(1.0, rel=1e-12)


def test_two_mode_squeeze_coords():
    a, b = 0.4 + 0.2j, -1.0 + 0.7j
    assert ps.two_mode_squeeze_coords(a, b, 0.0) == (a, b)
    ta, tb = ps.two_mode_squeeze_coords(1.0, 0.0, 0.7)
    assert ta == pytest.approx(math.cosh(0.7))
    assert tb == pytest.approx(math.sinh(0.7))
    ta, tb = ps.two_mode_squeeze_coords(*ps.two_mode_squeeze_coords(a, b, 0.9), -0.9)
    assert ta == pytest.approx(a, rel=1e-12)
    assert tb == pytest.approx(b, rel=1e-12)


def test_squeeze_frame():
    frame = ps.q_squeeze_frame(0.0)
    assert frame.theta == 0.0
    assert frame.cos_theta == pytest.approx(1.0)
    big = ps.q_squeeze_frame(40.0)
    assert big.theta == pytest.approx(math.pi / 2, abs=1e-12)
    for s in (0.1, 0.9, 2.0):
        assert ps.q_squeeze_frame(-s).theta == pytest.approx(-ps.q_squeeze_frame(s).theta)
        # the half angle is arctan(tanh(s/2)); cos_theta collapses to 1/cosh(s)
        assert ps.q_squeeze_frame(s).theta / 2 == pytest.approx(math.atan(math.tanh(s / 2)))
        assert ps.q_squeeze_frame(s).cos_theta == pytest.approx(1.0 / math.cosh(s), rel=1e-12)


def test_q_frame_coord():
    z = 0.8 - 0.25j
    assert ps.q_frame_coord(z, ps.q_squeeze_frame(0.0)) == z
    frame = ps.q_squeeze_frame(0.6)
    real_point = 1.3
    assert ps.q_frame_coord(real_point, frame) == pytest.approx(
        real_point * (frame.cos_half + frame.sin_half)
    )
    # asymptotic frames project onto a single quadrature
    assert ps.q_frame_coord(z, ps.q_squeeze_frame(40.0)) == pytest.approx(
        math.sqrt(2.0) * z.real, abs=1e-8
    )
    assert ps.q_frame_coord(z, ps.q_squeeze_frame(-40.0)) == pytest.approx(
        1j * math.sqrt(2.0) * z.imag, abs=1e-8
    )


def test_scs_norm():
    assert ps.scs_norm(0.0, 1) == pytest.approx(0.5)
    assert ps.scs_norm(40.0, 1) == pytest.approx(1.0 / math.sqrt(2.0))
    assert ps.scs_norm(40.0, -1) == pytest.approx(1.0 / math.sqrt(2.0))
    n_minus = ps.scs_norm(1.0, -1)
    assert n_minus**2 == pytest.approx(1.0 / (2.0 * (1.0 - math.exp(-2.0))), rel=1e-12)
    with pytest.raises(ps.PhaseSpaceError):
        ps.scs_norm(0.0, -1)
    with pytest.raises(ps.PhaseSpaceError):
        ps.scs_norm(-0.5, 1)
    with pytest.raises(ps.PhaseSpaceError):
        ps.scs_norm(1.0, 2)


def test_kernels_reject_non_finite():
    for bad in (float("nan"), float("inf")):
        with pytest.raises(ps.PhaseSpaceError):
            ps.w_coherent_kernel(complex(bad, 0), 0.0)
        with pytest.raises(ps.PhaseSpaceError):
            ps.q_coherent_kernel(0.0, complex(0, bad))
        with pytest.raises(ps.PhaseSpaceError):
            ps.squeeze_coord(1.0, bad)
