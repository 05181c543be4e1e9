from bound_key.core.operator import (
    HERMITIAN_TOL,
    PSD_TOL,
    MultipartiteOperator,
    Spectrum,
    apply_operator,
    eigenvalues,
    hermitian_eig,
    is_psd,
    is_unitary,
    matrix_abs,
    min_eigenvalue,
    partial_trace,
    partial_transpose,
    permute_subsystems,
    tensor,
    tensor_all,
    tensor_power,
    trace_distance,
    trace_norm,
)

__all__ = [
    "HERMITIAN_TOL",
    "PSD_TOL",
    "MultipartiteOperator",
    "Spectrum",
    "apply_operator",
    "eigenvalues",
    "hermitian_eig",
    "is_psd",
    "is_unitary",
    "matrix_abs",
    "min_eigenvalue",
    "partial_trace",
    "partial_transpose",
    "permute_subsystems",
    "tensor",
    "tensor_all",
    "tensor_power",
    "trace_distance",
    "trace_norm",
]
