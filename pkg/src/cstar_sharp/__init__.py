"""Exact constants for the noncommutative l1-l2 inequality over matrix algebras."""
from .algebra import (
    DEFAULT_TOL,
    HermElement,
    ToleranceConfig,
    abs_element,
    adjoint,
    herm_eig,
    inv_sqrtm,
    loewner_leq,
    loewner_margin,
    matrix_fn,
    norm_cstar,
    sqrtm_psd,
)
from .continuous_l2 import (
    FiniteMeasureSpace,
    L2Function,
    SubspaceProjector,
    closest_unit_in_subspace,
    compute_cf,
    distance_to_constant_modulus_l2,
    l2_norms,
    verify_thm32,
    verify_thm34,
)
from .exact_constant import (
    ConstantReport,
    compute_cx_sum_form,
    compute_cx_symmetrized,
    prop25_upper_bound,
    prop26_bound,
    verify_cor23,
    verify_thm22,
)
from .group_integral import FiniteGroupSpace, GroupFunction, kasparov_inner, verify_thm27
from .module_space import (
    GramData,
    ModuleVector,
    check_cauchy_schwarz,
    check_ell12_inequality,
    ell1_side,
    ell2_side,
    gram_data,
    inner_product,
    is_constant_modulus,
    module_norm,
)
from .modulus_search import SearchConfig, SearchResult, distance_to, search_min_distance

__version__ = "0.1.0"

__all__ = [
    "ConstantReport",
    "DEFAULT_TOL",
    "FiniteGroupSpace",
    "FiniteMeasureSpace",
    "GramData",
    "GroupFunction",
    "HermElement",
    "L2Function",
    "ModuleVector",
    "SearchConfig",
    "SearchResult",
    "SubspaceProjector",
    "ToleranceConfig",
    "abs_element",
    "adjoint",
    "check_cauchy_schwarz",
    "check_ell12_inequality",
    "closest_unit_in_subspace",
    "compute_cf",
    "compute_cx_sum_form",
    "compute_cx_symmetrized",
    "distance_to",
    "distance_to_constant_modulus_l2",
    "ell1_side",
    "ell2_side",
    "gram_data",
    "herm_eig",
    "inner_product",
    "inv_sqrtm",
    "is_constant_modulus",
    "kasparov_inner",
    "l2_norms",
    "loewner_leq",
    "loewner_margin",
    "matrix_fn",
    "module_norm",
    "norm_cstar",
    "prop25_upper_bound",
    "prop26_bound",
    "search_min_distance",
    "sqrtm_psd",
    "verify_cor23",
    "verify_thm22",
    "verify_thm27",
    "verify_thm32",
    "verify_thm34",
]
