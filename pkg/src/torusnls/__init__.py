"""Spectral solver and diagnostics for the periodic cubic Schrodinger equation."""

__version__ = "0.1.0"

from .grid import (  # noqa: F401
    GridSpec,
    PeriodicField,
    SobolevIndex,
    field_from_modes,
    hs_norm,
    l2_norm,
    lp_norm,
    random_field,
    to_physical,
    to_spectral,
    weak_pairing,
)
from .nonlinearity import (  # noqa: F401
    TrilinearResult,
    decompose,
    g_full,
    g_oracle,
    lambda1,
    lambda2,
    resonant_part,
)
from .integrator import (  # noqa: F401
    CUBIC_NLS,
    LIMIT_PDE,
    SolverConfig,
    Trajectory,
    free_evolution,
    gauge,
    load_trajectory,
    plane_wave_solution,
    save_trajectory,
    solve,
    step,
)
from .bourgain import (  # noqa: F401
    ESTIMATE_PRESETS,
    BourgainIndex,
    SpaceTimeField,
    l4_ratio,
    lambda_ratio,
    resonance_defect,
    spacetime_from_trajectory,
    spacetime_from_values,
    spacetime_to_values,
    xbs_norm,
    zygmund_ratio,
)
from .reports import ExperimentReport, Verdict, csv_body  # noqa: F401
from .experiments import (  # noqa: F401
    SURVEY_KINDS,
    WeakLimitConfig,
    run_discontinuity,
    run_gauge_check,
    run_surveys,
    run_weak_limit,
)
