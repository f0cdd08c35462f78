"""Time-dependent singular oscillator: exact states, coherent families,
Darboux partners, and numerical verification of their closed-form identities."""

from .numerics import (
    GridWave,
    QuadratureError,
    QuadratureScheme,
    RadialGrid,
    bessel_i,
    bessel_i_entire,
    bessel_k,
    gamma_ln,
    grid_derivative,
    integrate_semiaxis,
    laguerre,
)
from .envelope import (
    PAPER_FREE_PARTICLE,
    WRONSKIAN_HALF_I,
    Envelope,
    FrequencyProfile,
    envelope_at,
    envelope_path,
    profile_from_csv,
)
from .states import (
    BasisIndex,
    CoherentLabel,
    PhysParams,
    basis_state,
    bg_state_closed,
    bg_state_series,
    density_moments,
    perelomov_series,
    perelomov_state,
)
from .algebra import (
    CoeffVector,
    GridOperator,
    apply_generator,
    casimir_check,
    holo_generator,
    lambda_for_mean_excitation,
    mean_k0,
    mean_k0_sq,
)
from .darboux import (
    DarbouxConfig,
    DarbouxError,
    TransformedState,
    apply_L,
    apply_L_adjoint,
    p_operator,
    potential_difference,
    reality_condition_check,
    transformed_basis,
    transformed_state,
)
from .measures import (
    f_weight,
    f_moment,
    identity_resolution_check,
    phi_moment,
    phi_weight,
    reproducing_kernel,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
