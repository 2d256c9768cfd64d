"""catbell: phase-space Bell tests for squeezed cat states.

Analytic Wigner and Husimi-Q evaluators for coherent-state superpositions
and their entangled/squeezed variants, CHSH/CH Bell functionals over
displacement settings, a deterministic multistart optimizer, a realistic
source model, and a truncated Fock-space engine that cross-checks every
analytic value.
"""

from .bell import CIRELSON_BOUND, DisplacementSettings, Scheme, bell_value, ch_value, chsh_onoff, chsh_parity
from .phasespace import (
    PhaseSpaceError,
    SqueezeFrame,
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
from .states import (
    Family,
    FamilyError,
    StateSpec,
    family_names,
    husimi_marginal,
    husimi_single,
    husimi_two_mode,
    wigner_scs,
    wigner_two_mode,
)

__version__ = "0.1.0"

__all__ = [
    "CIRELSON_BOUND",
    "DisplacementSettings",
    "Family",
    "FamilyError",
    "PhaseSpaceError",
    "Scheme",
    "SqueezeFrame",
    "StateSpec",
    "bell_value",
    "ch_value",
    "chsh_onoff",
    "chsh_parity",
    "family_names",
    "husimi_marginal",
    "husimi_single",
    "husimi_two_mode",
    "q_coherent_kernel",
    "q_frame_coord",
    "q_squeeze_frame",
    "scs_norm",
    "squeeze_coord",
    "two_mode_squeeze_coords",
    "w_coherent_kernel",
    "wigner_scs",
    "wigner_two_mode",
    "x_kernel",
    "y_kernel",
    "__version__",
]
