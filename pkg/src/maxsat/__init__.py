"""Fixed points, potential functions, and saturation thresholds of coupled
scalar recursions."""

from .errors import (
    ConstructionError,
    DomainError,
    NonConvergenceError,
    NumericError,
    ShapeError,
    ThresholdUndefinedError,
    UnsupportedOperationError,
)
from .numerics import (
    Polynomial,
    QuadratureResult,
    adaptive_simpson,
    bisect_root,
    bisect_sup,
    gauss_hermite,
    golden_min,
    parse_polynomial,
    reg_inc_beta,
    reg_inc_beta_prime,
)
from .recursion import (
    CoupledProfile,
    CoupledRun,
    CouplingSpec,
    IterationConfig,
    ScalarSystem,
    apply_A,
    apply_At,
    copy_midpoint_tail,
    coupled_fixed_point,
    coupled_step,
    enumerate_fixed_points,
    make_system,
    midpoint_index,
    modified_coupled_fixed_point,
    translate_system,
    uncoupled_fixed_point,
    uncoupled_step,
    validate_system,
)
from .potential import (
    FiniteWCondition,
    MinimizeResult,
    PotentialReport,
    F_of,
    G_of,
    K_fg_bound,
    U_c,
    U_s,
    U_s_prime,
    V_s,
    check_finite_w_conditions,
    energy_gap_delta,
    grad_Uc,
    minimize_Us,
    potential_report,
    w0_bound,
)
from .thresholds import (
    FixedPointCurve,
    MapExitCurve,
    ParamSystem,
    Psi,
    Q_integral_check,
    Q_of_x,
    ThresholdReport,
    ebp_curve,
    eps_c,
    eps_of_x,
    eps_of_x_vec,
    eps_prime_of_x,
    eps_single,
    eps_stab,
    find_xbar_jumps,
    inverse_Psi_threshold,
    map_exit_curve,
    maxwell_threshold,
    minimize_us_at,
    psi_exit,
    psi_integral,
    threshold_report,
    validate_param_system,
    x_bar_star,
    x_lower_star,
    xf_intervals,
)
from .systems import (
    CsParams,
    DegreeDistribution,
    GaussianPrior,
    GldpcParams,
    TwoPointPrior,
    cs_system,
    dec_phi,
    example1_system,
    example2_system,
    gldpc_system,
    isi_system,
    ldgm_system,
    ldpc_system,
    mmse_two_point,
    pathological_system,
)

__version__ = "0.1.0"
