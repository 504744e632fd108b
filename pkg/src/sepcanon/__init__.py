"""Separability tests and canonical product decompositions for 2x2 and 2x3 states."""
from .decomp import (
    decompose,
    decompose_inseparable,
    decompose_separable,
    subtraction_threshold,
    verify_decomposition,
    werner_reference_decomposition,
)
from .geometry import (
    factorize_product,
    gen_plane_case,
    is_product_vector,
    product_in_both_ranges,
    product_in_range,
    product_states_in_plane,
    schmidt,
)
from .matcore import BACKEND, herm_eig, pinv_psd, rank_with_tol, svd2
from .qstate import (
    DensityMatrix,
    ProductVector,
    ToleranceConfig,
    WeightedDecomposition,
    index_of_correlation,
    make_bell,
    make_werner,
    validate_density,
)
from .septest import Verdict, local_time_reversal, partial_transpose_b, ppt_check

__version__ = "0.1.0"
