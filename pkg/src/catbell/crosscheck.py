"""Equivalence suite: analytic phase-space values vs the Fock engine.

Runs every requested family over a (gamma, squeeze) grid and a seeded set
of random phase-space points, comparing the closed-form Wigner and Husimi
values against brute-force expectations computed in the truncated number
basis.  This is the gate that certifies the analytic transcription,
including all sign and index conventions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fock
from .states import Family, StateSpec, husimi_single, husimi_two_mode, wigner_scs, wigner_two_mode

SQRT2 = math.sqrt(2.0)

DEFAULT_GAMMAS = (0.5, 0.8062257748, 1.0)
DEFAULT_S_VALUES = (-0.5, 0.0, 0.5)


@dataclass(frozen=True)
class FamilyCheck:
    family: str
    n_points: int
    max_wigner_error: float
    max_husimi_error: float
    worst_case: str


@dataclass(frozen=True)
class OracleCheckReport:
    passed: bool
    tolerance: float
    checks: tuple[FamilyCheck, ...]
    first_failure: str | None


def run_oracle_check(
    families=None,
    gammas=DEFAULT_GAMMAS,
    s_values=DEFAULT_S_VALUES,
    n_points: int = 25,
    tolerance: float = 1e-8,
    seed: int = 7,
    point_radius: float = 1.25,
    tail_bound: float = 1e-12,
    perturb: float = 0.0,
) -> OracleCheckReport:
    """Compare analytic W/Q with the Fock engine on random points.

    ``perturb`` adds a constant offset to every analytic value; it exists
    so tests can prove the check actually fails on a broken transcription.
    """
    families = [Family(f) for f in families] if families else list(Family)
    rng = np.random.default_rng(seed)
    checks: list[FamilyCheck] = []
    first_failure: str | None = None

    for fam in families:
        combos = [
            (g, s)
            for g in gammas
            for s in (s_values if fam.allows_squeeze else (0.0,))
            if not (fam.sign == -1 and g == 0.0)
        ]
        max_w = 0.0
        max_q = 0.0
        worst = ""
        total = 0
        for gamma, s in combos:
            amp = (SQRT2 * gamma + SQRT2 * point_radius) * math.exp(abs(s))
            policy = fock.TruncationPolicy.for_amplitude(amp, tail_bound)
            spec = StateSpec(fam, gamma, s)
            state = fock.build_state(spec, policy)
            pts = rng.uniform(-point_radius, point_radius, size=(n_points, 4))
            for row in pts:
                a = complex(row[0], row[1])
                if fam.n_modes == 1:
                    w_ana = wigner_scs(spec, a) + perturb
                    q_ana = husimi_single(spec, a) + perturb
                    w_ref = fock.wigner(state, a)
                    q_ref = fock.husimi(state, a)
                    where = f"{fam.value} gamma={gamma:g} s={s:g} point={a:.4f}"
                else:
                    b = complex(row[2], row[3])
                    w_ana = wigner_two_mode(spec, a, b) + perturb
                    q_ana = husimi_two_mode(spec, a, b) + perturb
                    w_ref = fock.wigner(state, a, b)
                    q_ref = fock.husimi(state, a, b)
                    where = f"{fam.value} gamma={gamma:g} s={s:g} points=({a:.4f}, {b:.4f})"
                err_w = abs(w_ana - w_ref)
                err_q = abs(q_ana - q_ref)
                total += 1
                if max(err_w, err_q) > max(max_w, max_q):
                    worst = where
                max_w = max(max_w, err_w)
                max_q = max(max_q, err_q)
                if (err_w > tolerance or err_q > tolerance) and first_failure is None:
                    first_failure = f"{where}: Wigner err {err_w:.3e}, Husimi err {err_q:.3e}"
        checks.append(
            FamilyCheck(
                family=fam.value,
                n_points=total,
                max_wigner_error=max_w,
                max_husimi_error=max_q,
                worst_case=worst,
            )
        )
    passed = all(
        c.max_wigner_error <= tolerance and c.max_husimi_error <= tolerance for c in checks
    )
    return OracleCheckReport(
        passed=passed,
        tolerance=tolerance,
        checks=tuple(checks),
        first_failure=first_failure,
    )
