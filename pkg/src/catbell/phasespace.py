"""Elementary phase-space kernels and squeezed-frame coordinate maps.

Everything downstream (cat-state Wigner functions, Husimi Q functions,
Bell correlations) is assembled from the real-valued kernels defined here
plus the coordinate maps that implement single-mode and two-mode squeezing
as substitutions on phase-space points.

Conventions
-----------
* Phase-space points and coherent amplitudes are dimensionless complex
  quadrature coordinates ``alpha = x + i*y``.
* Quasiprobability densities are normalized against ``d^2alpha = dx dy``.
* The squeeze parameter ``s`` is real; ``s > 0`` squeezes fluctuations
  along the real axis, ``s < 0`` along the imaginary axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_OVER_PI = 2.0 / math.pi
INV_PI = 1.0 / math.pi


class PhaseSpaceError(ValueError):
    """Invalid argument to a phase-space operation."""


def _check_finite(*values: complex) -> None:
    for v in values:
        c = complex(v)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise PhaseSpaceError(f"non-finite phase-space value: {v!r}")


def w_coherent_kernel(point: complex, center: complex) -> float:
    """Wigner function of a coherent state: (2/pi) exp(-2|point - center|^2)."""
    _check_finite(point, center)
    d = complex(point) - complex(center)
    return TWO_OVER_PI * math.exp(-2.0 * (d.real * d.real + d.imag * d.imag))


def x_kernel(point: complex, center: complex) -> float:
    """Cosine interference kernel (2/pi) e^{-2|point|^2} cos(4 Im(point* center)).

    This is the cross term between coherent branches at ``+center`` and
    ``-center``; it carries the cat-state fringes.
    """
    _check_finite(point, center)
    p = complex(point)
    c = complex(center)
    im = p.real * c.imag - p.imag * c.real  # Im(conj(point) * center)
    return TWO_OVER_PI * math.exp(-2.0 * (p.real * p.real + p.imag * p.imag)) * math.cos(4.0 * im)


def y_kernel(point: complex, center: complex) -> float:
    """Sine interference kernel (2/pi) e^{-2|point|^2} sin(4 Im(point* center))."""
    _check_finite(point, center)
    p = complex(point)
    c = complex(center)
    im = p.real * c.imag - p.imag * c.real
    return TWO_OVER_PI * math.exp(-2.0 * (p.real * p.real + p.imag * p.imag)) * math.sin(4.0 * im)


def squeeze_coord(point: complex, s: float) -> complex:
    """Single-mode squeeze as a coordinate map: e^s Re + i e^{-s} Im.

    The Wigner function of a squeezed state evaluated at ``alpha`` equals
    the unsqueezed Wigner function evaluated at ``squeeze_coord(alpha, s)``.
    Equivalently ``point*cosh(s) + conj(point)*sinh(s)``; area-preserving.
    """
    _check_finite(point, s)
    p = complex(point)
    return complex(math.exp(s) * p.real, math.exp(-s) * p.imag)


def two_mode_squeeze_coords(a: complex, b: complex, s: float) -> tuple[complex, complex]:
    """Two-mode squeeze coordinate map.

    Returns ``(a cosh s + conj(b) sinh s, b cosh s + conj(a) sinh s)``; the
    two-mode Wigner function of a two-mode-squeezed state at ``(a, b)``
    equals the unsqueezed one at these coordinates.  Identity at ``s = 0``,
    inverted by ``-s``.
    """
    _check_finite(a, b, s)
    ch = math.cosh(s)
    sh = math.sinh(s)
    av = complex(a)
    bv = complex(b)
    return av * ch + bv.conjugate() * sh, bv * ch + av.conjugate() * sh


def q_coherent_kernel(point: complex, center: complex) -> float:
    """Husimi Q function of a coherent state: exp(-|point - center|^2) / pi."""
    _check_finite(point, center)
    d = complex(point) - complex(center)
    return INV_PI * math.exp(-(d.real * d.real + d.imag * d.imag))


@dataclass(frozen=True)
class SqueezeFrame:
    """Trigonometric frame in which squeezed-state Q functions factorize.

    The half angle satisfies ``theta/2 = arctan(tanh(s/2))``, so that
    ``cos(theta) = 1/cosh(s)`` and the frame coordinate map below turns the
    Q function of a squeezed coherent state back into a Gaussian.
    """

    s: float
    theta: float
    cos_theta: float
    cos_half: float
    sin_half: float


def q_squeeze_frame(s: float) -> SqueezeFrame:
    """Build the squeezed-frame data for squeeze parameter ``s``."""
    _check_finite(s)
    half = math.atan(math.tanh(0.5 * s))
    ch = math.cos(half)
    sh = math.sin(half)
    return SqueezeFrame(s=s, theta=2.0 * half, cos_theta=ch * ch - sh * sh, cos_half=ch, sin_half=sh)


def q_frame_coord(point: complex, frame: SqueezeFrame) -> complex:
    """Frame coordinate ``point*cos(theta/2) + conj(point)*sin(theta/2)``.

    Tends to ``sqrt(2)*Re(point)`` as ``s -> +inf`` and to
    ``i*sqrt(2)*Im(point)`` as ``s -> -inf``.
    """
    _check_finite(point)
    p = complex(point)
    return complex(
        (frame.cos_half + frame.sin_half) * p.real,
        (frame.cos_half - frame.sin_half) * p.imag,
    )


def scs_norm(gamma: float, sign: int) -> float:
    """Normalization factor of a coherent-state superposition |g> + sign|-g>.

    ``N^2 = 1 / (2 (1 + sign*exp(-2 gamma^2)))`` follows from the branch
    overlap ``<g|-g> = exp(-2 gamma^2)`` for real ``gamma``.  The odd
    (``sign = -1``) superposition is undefined at ``gamma = 0``, where the
    state vanishes and the norm diverges.
    """
    _check_finite(gamma)
    if sign not in (1, -1):
        raise PhaseSpaceError(f"sign must be +1 or -1, got {sign!r}")
    if gamma < 0.0:
        raise PhaseSpaceError(f"gamma must be nonnegative, got {gamma!r}")
    if sign == -1 and gamma == 0.0:
        raise PhaseSpaceError("odd superposition is undefined at gamma = 0")
    return 1.0 / math.sqrt(2.0 * (1.0 + sign * math.exp(-2.0 * gamma * gamma)))
