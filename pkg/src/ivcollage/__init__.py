"""Interval Volterra equations: Picard solver and collage-based parameter identification."""
from .estimators import CollageInverseSolver, PicardSolver
from .interval import (
    ArithmeticRangeError,
    Interval,
    IntervalError,
    ValidityError,
    add,
    dist,
    gh_sub,
    norm,
    scale,
)
from .inverse import (
    InverseResult,
    ParamFamily,
    build_y,
    manufacture_forcing,
    minimize,
    objective,
    stability_rho,
)
from .ivfun import (
    DomainError,
    EvalGrid,
    IvFun1D,
    IvFun2D,
    gh_sub_fun,
    integrate,
    metric_h,
    read_csv,
    slice_integrate,
    write_csv,
)
from .schauder import (
    DyadicBasis1D,
    DyadicBasis2D,
    GHDecomposition,
    gh_decompose,
    integrate_projection,
    project_interval,
    project_scalar,
    rescale,
)
from .volterra import (
    Kernel,
    VolterraProblem,
    apply_phi,
    caccioppoli_alphas,
    collage_certificate,
    perturbed_collage_bound,
    solve_forward,
)

__version__ = "0.1.0"
