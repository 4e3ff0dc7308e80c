"""Numerical de Branges-Rovnyak spaces on the unit disk.

Pythagorean pairs, H(b) norms and kernels, finite measures on the closed
disk with exact Carleson-window masses, and verdict engines for direct,
reverse, norm-equivalent and isometric embedding questions.
"""

from .circle import (
    CircleGrid,
    FourierSeries,
    fourier_analyze,
    fourier_synthesize,
    riesz_project,
    toeplitz_apply,
)
from .functions import (
    BlaschkeProduct,
    GridOuter,
    PowerOuter,
    ProductFn,
    RationalFn,
    blaschke_eval,
    fejer_riesz,
    outer_from_log_modulus,
    polynomial_fn,
)
from .space import (
    BOverATaylor,
    ExtremenessVerdict,
    KernelPoint,
    PythagoreanPair,
    SymbolB,
    cauchy_kernel_taylor,
    classify_extremeness,
    clark_density,
    hb_inner,
    hb_kernel_norm_squared,
    hb_kernel_taylor,
    hb_norm,
    hb_norm_squared,
    kernel_eval,
    kernel_norm_closed_form,
    monomial_norm,
    pair_from_outer_a,
    pythagorean_mate,
    random_unimodular_alpha,
    rational_falpha_decompose,
    taylor_b_over_a,
)
from .measures import (
    ArcWindow,
    DiskMeasure,
    FunctionOnDisk,
    GridArcWeight,
    PairWeight,
    PiecewiseBoundaryWeight,
    PowerArcWeight,
    RadialPower,
    l2mu_norm,
    weight_measure,
    window_mass,
)
from .analyzers import (
    AnalysisReport,
    a2_check,
    a2_product,
    carleson_sup_scan,
    corona_check,
    direct_carleson_verdict,
    ess_inf_weighted,
    isometry_refutation,
    kernel_ratio_scan,
    norm_equivalence_verdict,
    poisson_square_limit_check,
    reverse_carleson_verdict,
    reverse_inf_scan,
    sampling_refutation,
    symbol_reverse_feasibility,
    two_weight_necessary,
)
from . import scenarios

__version__ = "0.1.0"
