"""extrema: search procedures for large values of Selberg-class L-functions."""

from .lfunc import (
    BudgetExceededError,
    InsufficientEulerDataError,
    LFunctionSpec,
    SmoothingWindow,
    coeff,
    dirichlet_spec,
    euler_roots_spec,
    load_spec,
    prime_sum_stats,
    reference_zeta,
    reference_zeta_grid,
    save_spec,
    smoothed_value,
    tent_sum,
    zeta_spec,
)
from .resonator import (
    DegenerateWindowError,
    ResonatorPlan,
    SmoothingBump,
    WeightRecipe,
    bump,
    diagonal_ratio,
    diagonal_ratio_factored,
    expand,
    flat_recipe,
    growth_constant,
    moment1,
    plan_weights,
    predicted_lower,
)
from .diophantine import (
    ChenInstance,
    chen_bound,
    cos_floor,
    instance_from_primes,
    lambda_analytic,
    lambda_exact,
    objective,
    search_t,
)
from .hunter import (
    EnvelopeCurve,
    HuntReport,
    c_kappa_eta,
    envelope,
    hunt_diophantine,
    hunt_resonance,
    hunt_theorem3,
    theorem3_plan,
)

__version__ = "0.1.0"
