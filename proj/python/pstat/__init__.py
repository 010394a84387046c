"""Statistical (mean/median/midrange) characterizations of p-harmonic
functions of two variables: differential operators, circle statistics,
asymptotic-expansion reports, an iterative Dirichlet solver, and the
closed-form quantities showing the identities are only asymptotic."""

from ._core import (  # noqa: F401
    AntipodalBracketError,
    CircleStats,
    DegenerateGradientError,
    ExpansionKind,
    ExpansionReport,
    GridDomain,
    InadmissiblePointError,
    OperatorValues,
    QuadratureBudgetError,
    ScalarField2D,
    Scheme,
    SolverResult,
    __version__,
    ball_extrema,
    ball_mean,
    battery_ids,
    boundary_mean,
    build_grid,
    check_decompositions,
    circle_stats,
    default_radius_ladder,
    derivative_identity_deviation,
    evaluate_operators,
    expansion_report,
    field,
    fundamental_solution,
    fundsol_mean,
    fundsol_median,
    median_antipodal,
    median_sampled,
    residual,
    residual_fe1_nonasymptotic,
    residual_fe2_nonasymptotic,
    scheme_weights,
    solve,
    sup_error_vs_field,
    verify_p_harmonic,
    verify_theorem1_consistency,
)
