"""Truncated Fock-space engine used as ground truth for the analytic path.

States are built from first principles (coherent vectors, matrix
exponentials of squeeze/beam-splitter generators) and all expectations are
computed directly in the number basis, independently of every closed-form
expression elsewhere in the package.  The engine is deliberately simple
and dense-vector based; it is validation infrastructure, not a fast path.

Conventions match the analytic modules: quadrature ``x = (a + a^dag)/sqrt(2)``,
single-mode squeeze generator ``(s/2)(a^2 - a^dag^2)`` (``s > 0`` shrinks
the x variance), two-mode squeeze generator ``s(ab - a^dag b^dag)``, and a
balanced beam splitter ``exp[(pi/4)(a^dag b - a b^dag)]`` mapping
``|g>|0> -> |g/sqrt(2)>|-g/sqrt(2)>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import expm_multiply
from scipy.special import eval_genlaguerre, gammaln

from .states import Family, StateSpec

SQRT2 = math.sqrt(2.0)


class TruncationError(RuntimeError):
    """State weight leaked too close to the truncation boundary."""


class UnitarityError(RuntimeError):
    """A nominally unitary operation failed to preserve the norm."""


@dataclass(frozen=True)
class TruncationPolicy:
    """Truncation dimension plus the tail mass it must keep negligible."""

    n_max: int = 48
    tail_bound: float = 1e-12

    def __post_init__(self):
        if self.n_max < 4:
            raise ValueError("n_max must be at least 4")
        if not 0.0 < self.tail_bound < 1.0:
            raise ValueError("tail_bound must be in (0, 1)")

    @classmethod
    def for_amplitude(cls, amplitude: float, tail_bound: float = 1e-12) -> "TruncationPolicy":
        """Size the cutoff for a worst-case coherent amplitude.

        Poisson occupation with mean ``amplitude^2`` plus a generous
        deviation band; rounded up to a multiple of 8.
        """
        nbar = amplitude * amplitude
        n = int(math.ceil(nbar + 10.0 * math.sqrt(nbar + 1.0) + 32.0))
        return cls(n_max=(n + 7) // 8 * 8, tail_bound=tail_bound)


@dataclass
class FockState:
    """Number-basis data: pure vector (1 mode), amplitude matrix (2 modes),
    or a single-mode density matrix."""

    data: np.ndarray
    policy: TruncationPolicy
    modes: int = 1
    pure: bool = True

    def __post_init__(self):
        if self.pure:
            nrm = float(np.linalg.norm(self.data))
            if abs(nrm - 1.0) > 1e-12:
                raise UnitarityError(f"pure-state norm {nrm!r} deviates from 1")
        else:
            tr = complex(np.trace(self.data))
            if abs(tr - 1.0) > 1e-12:
                raise UnitarityError(f"density-matrix trace {tr!r} deviates from 1")
            herm = np.max(np.abs(self.data - self.data.conj().T))
            if herm > 1e-12:
                raise UnitarityError(f"density matrix not Hermitian (max dev {herm:.2e})")

    @property
    def n_max(self) -> int:
        return self.data.shape[0]


def _top_band_mass(data: np.ndarray, modes: int) -> float:
    """Probability weight in the top few levels of each mode."""
    band = max(4, data.shape[0] // 12)
    p = np.abs(data) ** 2
    if modes == 1:
        return float(p[-band:].sum())
    return float(p[-band:, :].sum() + p[:, -band:].sum())


def _check_headroom(data: np.ndarray, policy: TruncationPolicy, context: str) -> None:
    mass = _top_band_mass(data, 1 if data.ndim == 1 else 2)
    if mass > policy.tail_bound:
        raise TruncationError(
            f"{context}: top-band mass {mass:.3e} exceeds tail bound "
            f"{policy.tail_bound:.1e} at n_max={data.shape[0]}"
        )


def coherent_amplitudes(gamma: complex, n_max: int) -> np.ndarray:
    """Raw truncated amplitudes ``exp(-|g|^2/2) g^n / sqrt(n!)`` (no renorm)."""
    out = np.empty(n_max, dtype=complex)
    out[0] = math.exp(-0.5 * abs(gamma) ** 2)
    for k in range(1, n_max):
        out[k] = out[k - 1] * gamma / math.sqrt(k)
    return out


def coherent(gamma: complex, policy: TruncationPolicy | None = None) -> FockState:
    """Coherent state |gamma> in the truncated basis."""
    policy = policy or TruncationPolicy()
    amps = coherent_amplitudes(gamma, policy.n_max)
    tail = 1.0 - float(np.vdot(amps, amps).real)
    if tail > policy.tail_bound:
        raise TruncationError(
            f"coherent amplitude {gamma!r} leaves tail mass {tail:.3e} beyond n_max={policy.n_max}"
        )
    return FockState(amps / np.linalg.norm(amps), policy)


def from_components(components: dict[int, complex], policy: TruncationPolicy | None = None) -> FockState:
    """Pure state from a sparse {level: amplitude} mapping (renormalized)."""
    policy = policy or TruncationPolicy()
    vec = np.zeros(policy.n_max, dtype=complex)
    for level, amp in components.items():
        if not 0 <= level < policy.n_max:
            raise TruncationError(f"level {level} outside truncation n_max={policy.n_max}")
        vec[level] = amp
    return FockState(vec / np.linalg.norm(vec), policy)


def scs_vector(gamma: float, sign: int, policy: TruncationPolicy | None = None) -> FockState:
    """Normalized superposition |gamma> + sign |-gamma>."""
    policy = policy or TruncationPolicy()
    plus = coherent(gamma, policy).data
    minus = coherent(-gamma, policy).data
    vec = plus + sign * minus
    nrm = np.linalg.norm(vec)
    if nrm < 1e-14:
        raise ValueError("superposition vanishes (odd state at gamma = 0)")
    return FockState(vec / nrm, policy)


def tensor_with_vacuum(state: FockState) -> FockState:
    """|psi>_a |0>_b as an (n, n) amplitude matrix."""
    if state.modes != 1 or not state.pure:
        raise ValueError("tensor_with_vacuum expects a single-mode pure state")
    n = state.n_max
    mat = np.zeros((n, n), dtype=complex)
    mat[:, 0] = state.data
    return FockState(mat, state.policy, modes=2)


@lru_cache(maxsize=64)
def _single_squeeze_generator(n: int, s: float) -> sparse.csr_matrix:
    rows, cols, vals = [], [], []
    for k in range(n - 2):
        amp = 0.5 * s * math.sqrt((k + 1) * (k + 2))
        rows.append(k)        # a^2 |k+2> -> |k>
        cols.append(k + 2)
        vals.append(amp)
        rows.append(k + 2)    # -a^dag^2 |k> -> |k+2>
        cols.append(k)
        vals.append(-amp)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))


@lru_cache(maxsize=64)
def _two_mode_squeeze_generator(n: int, s: float) -> sparse.csr_matrix:
    rows, cols, vals = [], [], []
    for i in range(1, n):
        for j in range(1, n):
            amp = s * math.sqrt(i * j)
            rows.append((i - 1) * n + (j - 1))  # ab
            cols.append(i * n + j)
            vals.append(amp)
            rows.append(i * n + j)              # -a^dag b^dag
            cols.append((i - 1) * n + (j - 1))
            vals.append(-amp)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n * n, n * n))


@lru_cache(maxsize=16)
def _beam_splitter_generator(n: int) -> sparse.csr_matrix:
    theta = math.pi / 4.0
    rows, cols, vals = [], [], []
    for i in range(n):
        for j in range(n):
            if i + 1 < n and j >= 1:  # a^dag b
                rows.append((i + 1) * n + (j - 1))
                cols.append(i * n + j)
                vals.append(theta * math.sqrt((i + 1) * j))
            if i >= 1 and j + 1 < n:  # -a b^dag
                rows.append((i - 1) * n + (j + 1))
                cols.append(i * n + j)
                vals.append(-theta * math.sqrt(i * (j + 1)))
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n * n, n * n))


@lru_cache(maxsize=256)
def _displacement_generator(n: int, alpha: complex) -> sparse.csr_matrix:
    rows, cols, vals = [], [], []
    for k in range(n - 1):
        amp = math.sqrt(k + 1)
        rows.append(k + 1)    # alpha a^dag
        cols.append(k)
        vals.append(alpha * amp)
        rows.append(k)        # -conj(alpha) a
        cols.append(k + 1)
        vals.append(-np.conj(alpha) * amp)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))


def _apply_unitary(gen: sparse.csr_matrix, data: np.ndarray, context: str) -> np.ndarray:
    flat = data.reshape(-1)
    out = expm_multiply(gen, flat)
    nrm = float(np.linalg.norm(out))
    if abs(nrm - 1.0) > 1e-11:
        raise UnitarityError(f"{context}: norm drifted to {nrm!r}")
    return (out / nrm).reshape(data.shape)


def apply_single_squeeze(state: FockState, s: float) -> FockState:
    """Apply exp[(s/2)(a^2 - a^dag^2)] to a single-mode pure state."""
    if state.modes != 1 or not state.pure:
        raise ValueError("apply_single_squeeze expects a single-mode pure state")
    if s == 0.0:
        return state
    out = _apply_unitary(_single_squeeze_generator(state.n_max, float(s)), state.data, "single squeeze")
    _check_headroom(out, state.policy, f"single squeeze s={s}")
    return FockState(out, state.policy)


def apply_two_mode_squeeze(state: FockState, s: float) -> FockState:
    """Apply exp[s(ab - a^dag b^dag)] to a two-mode pure state."""
    if state.modes != 2 or not state.pure:
        raise ValueError("apply_two_mode_squeeze expects a two-mode pure state")
    if s == 0.0:
        return state
    out = _apply_unitary(_two_mode_squeeze_generator(state.n_max, float(s)), state.data, "two-mode squeeze")
    _check_headroom(out, state.policy, f"two-mode squeeze s={s}")
    return FockState(out, state.policy, modes=2)


def apply_beam_splitter(state: FockState) -> FockState:
    """Apply the balanced beam splitter exp[(pi/4)(a^dag b - a b^dag)]."""
    if state.modes != 2 or not state.pure:
        raise ValueError("apply_beam_splitter expects a two-mode pure state")
    out = _apply_unitary(_beam_splitter_generator(state.n_max), state.data, "beam splitter")
    _check_headroom(out, state.policy, "beam splitter")
    return FockState(out, state.policy, modes=2)


def _displace_all_modes(state: FockState, alpha: complex, beta: complex | None) -> np.ndarray:
    """Return D^dag(alpha) (x) D^dag(beta) applied to the state data."""
    n = state.n_max
    if state.modes == 1:
        if state.pure:
            out = expm_multiply(_displacement_generator(n, -complex(alpha)), state.data)
        else:
            gen = _displacement_generator(n, -complex(alpha)).toarray()
            from scipy.linalg import expm as dense_expm

            d = dense_expm(gen)
            out = d @ state.data @ d.conj().T
        return out
    if beta is None:
        raise ValueError("two-mode state needs two displacements")
    ga = _displacement_generator(n, -complex(alpha))
    gb = _displacement_generator(n, -complex(beta))
    out = expm_multiply(ga, state.data)
    out = expm_multiply(gb, out.T).T
    return out


def displaced_parity(state: FockState, alpha: complex, beta: complex | None = None) -> float:
    """Expectation of the displaced parity observable, in [-1, 1].

    Two-mode states take two displacements and return the joint parity.
    """
    out = _displace_all_modes(state, alpha, beta)
    n = state.n_max
    signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    if state.modes == 2:
        _check_headroom(out, state.policy, f"displacement ({alpha}, {beta})")
        return float(np.einsum("i,j,ij->", signs, signs, np.abs(out) ** 2))
    if state.pure:
        _check_headroom(out, state.policy, f"displacement {alpha}")
        return float(np.sum(signs * np.abs(out) ** 2))
    return float(np.sum(signs * np.diag(out).real))


def wigner(state: FockState, alpha: complex, beta: complex | None = None) -> float:
    """Wigner function value from displaced parity: (2/pi)^modes * <P>."""
    return (2.0 / math.pi) ** state.modes * displaced_parity(state, alpha, beta)


def husimi(state: FockState, alpha: complex, beta: complex | None = None) -> float:
    """Husimi Q value from coherent overlaps: <alpha|rho|alpha> / pi^modes."""
    n = state.n_max
    bra = coherent_amplitudes(complex(alpha), n).conj()
    if state.modes == 1:
        if state.pure:
            val = abs(np.dot(bra, state.data)) ** 2
        else:
            val = float((bra @ state.data @ bra.conj()).real)
        return val / math.pi
    if beta is None:
        raise ValueError("two-mode state needs two phase-space points")
    brb = coherent_amplitudes(complex(beta), n).conj()
    amp = bra @ state.data @ brb
    return abs(amp) ** 2 / math.pi**2


def reduced_density(state: FockState, mode: str) -> np.ndarray:
    """Partial trace of a two-mode pure state onto one mode."""
    if state.modes != 2 or not state.pure:
        raise ValueError("reduced_density expects a two-mode pure state")
    if mode == "a":
        return state.data @ state.data.conj().T
    if mode == "b":
        return state.data.T @ state.data.conj()
    raise ValueError(f"mode must be 'a' or 'b', got {mode!r}")


def husimi_marginal(state: FockState, mode: str, alpha: complex) -> float:
    """Single-mode Q of the reduced state of a two-mode pure state."""
    rho = reduced_density(state, mode)
    bra = coherent_amplitudes(complex(alpha), state.n_max).conj()
    return float((bra @ rho @ bra.conj()).real) / math.pi


def onoff_expectation(state: FockState, alpha: complex, beta: complex | None = None) -> float:
    """Expectation of the displaced on/off observable, in [-1, 1].

    ``+1`` means "click certain": the observable is ``I - 2 P_vac`` after
    displacing the detector frame, so the expectation reduces to coherent
    overlaps at the negated displacement.
    """
    n = state.n_max
    bra = coherent_amplitudes(-complex(alpha), n).conj()
    if state.modes == 1:
        if state.pure:
            p_off = abs(np.dot(bra, state.data)) ** 2
        else:
            p_off = float((bra @ state.data @ bra.conj()).real)
        return 1.0 - 2.0 * p_off
    if beta is None:
        raise ValueError("two-mode state needs two displacements")
    brb = coherent_amplitudes(-complex(beta), n).conj()
    row = bra @ state.data          # <(-a)|_a psi, vector over mode b
    col = state.data @ brb          # <(-b)|_b psi, vector over mode a
    t_a = float(np.vdot(row, row).real)
    t_b = float(np.vdot(col, col).real)
    t_ab = abs(np.dot(row, brb)) ** 2
    return 1.0 - 2.0 * t_a - 2.0 * t_b + 4.0 * t_ab


def total_parity(state: FockState) -> float:
    """Expectation of photon-number parity (joint parity for two modes)."""
    n = state.n_max
    signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    if state.modes == 1:
        if state.pure:
            return float(np.sum(signs * np.abs(state.data) ** 2))
        return float(np.sum(signs * np.diag(state.data).real))
    return float(np.einsum("i,j,ij->", signs, signs, np.abs(state.data) ** 2))


def quadrature_moments(state: FockState) -> tuple[float, float]:
    """(<x>, <x^2>) with x = (a + a^dag)/sqrt(2), for convention pinning."""
    if state.modes != 1 or not state.pure:
        raise ValueError("quadrature_moments expects a single-mode pure state")
    n = state.n_max
    a = np.diag(np.sqrt(np.arange(1, n)), k=1)
    x = (a + a.T) / SQRT2
    v = state.data
    ex = float(np.vdot(v, x @ v).real)
    ex2 = float(np.vdot(v, x @ (x @ v)).real)
    return ex, ex2


def overlap(s1: FockState, s2: FockState) -> complex:
    """<s1|s2> for pure states of matching shape."""
    if not (s1.pure and s2.pure) or s1.data.shape != s2.data.shape:
        raise ValueError("overlap expects pure states of identical shape")
    return complex(np.vdot(s1.data, s2.data))


def build_state(spec: StateSpec, policy: TruncationPolicy | None = None) -> FockState:
    """Assemble any supported family from its constructive pipeline.

    Beam-split pipelines feed the sqrt(2)-amplified single-mode
    superposition into the balanced beam splitter; two-mode squeezing acts
    after the split, single-mode squeezing before it.
    """
    policy = policy or TruncationPolicy()
    fam = spec.family
    sign = fam.sign
    g = spec.gamma
    if fam in (Family.SCS_EVEN, Family.SCS_ODD):
        return scs_vector(g, sign, policy)
    if fam in (Family.SSCS_EVEN, Family.SSCS_ODD):
        return apply_single_squeeze(scs_vector(g, sign, policy), spec.s)
    if fam in (Family.ESS_PLUS, Family.ESS_MINUS):
        inner = apply_single_squeeze(scs_vector(SQRT2 * g, sign, policy), spec.s)
        return apply_beam_splitter(tensor_with_vacuum(inner))
    if fam in (Family.ECS_PSI_PLUS, Family.ECS_PSI_MINUS):
        return apply_beam_splitter(tensor_with_vacuum(scs_vector(SQRT2 * g, sign, policy)))
    if fam in (Family.ECS_PHI_PLUS, Family.ECS_PHI_MINUS):
        plus = coherent(g, policy).data
        minus = coherent(-g, policy).data
        mat = np.outer(plus, plus) + sign * np.outer(minus, minus)
        return FockState(mat / np.linalg.norm(mat), policy, modes=2)
    # Two-mode-squeezed entangled families.
    base_family = {
        Family.SECS_PHI_PLUS: Family.ECS_PHI_PLUS,
        Family.SECS_PHI_MINUS: Family.ECS_PHI_MINUS,
        Family.SECS_PSI_PLUS: Family.ECS_PSI_PLUS,
        Family.SECS_PSI_MINUS: Family.ECS_PSI_MINUS,
    }[fam]
    base = build_state(StateSpec(base_family, g, 0.0), policy)
    return apply_two_mode_squeeze(base, spec.s)


def phi2_state(policy: TruncationPolicy | None = None) -> FockState:
    """The two-photon approximant sqrt(1/3)|0> + sqrt(2/3)|2>."""
    return from_components({0: math.sqrt(1.0 / 3.0), 2: math.sqrt(2.0 / 3.0)}, policy)


def displacement_matrix_elements(xi: np.ndarray, m: int, n_level: int) -> np.ndarray:
    """<m|D(xi)|n> evaluated over a complex scalar or grid."""
    lo = min(m, n_level)
    diff = abs(m - n_level)
    mag2 = np.abs(xi) ** 2
    log_fac = 0.5 * (gammaln(lo + 1) - gammaln(lo + diff + 1))
    lag = eval_genlaguerre(lo, diff, mag2)
    if m >= n_level:
        return (xi**diff) * np.exp(log_fac - 0.5 * mag2) * lag
    return ((-np.conj(xi)) ** diff) * np.exp(log_fac - 0.5 * mag2) * lag


def density_from_wigner(
    w_func,
    n_max: int,
    extent: float,
    step: float,
    policy: TruncationPolicy | None = None,
) -> FockState:
    """Reconstruct a single-mode density matrix from Wigner samples.

    Projects the sampled Wigner function onto the displaced-parity symbol
    of each |n><m|; the grid must comfortably cover the state's support.
    Validation machinery, not a production path.
    """
    policy = policy or TruncationPolicy(n_max=n_max)
    xs = np.arange(-extent, extent + step / 2, step)
    xg, yg = np.meshgrid(xs, xs, indexing="ij")
    alphas = xg + 1j * yg
    w_vals = np.vectorize(lambda z: w_func(z))(alphas)
    area = step * step
    rho = np.zeros((n_max, n_max), dtype=complex)
    for m in range(n_max):
        for n in range(n_max):
            d_mn = displacement_matrix_elements(2.0 * alphas, m, n)
            rho[m, n] = 2.0 * ((-1.0) ** n) * np.sum(w_vals * d_mn) * area
    rho = 0.5 * (rho + rho.conj().T)
    tr = np.trace(rho).real
    return FockState(rho / tr, policy, modes=1, pure=False)
