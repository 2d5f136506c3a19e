from .gradients import GradientSet, local_linear_gradients
from .io import (
    read_eigenvector_table,
    read_gradients,
    read_samples,
    write_eigen_table,
    write_eigenvector_table,
    write_error_grid,
    write_gradients,
    write_samples,
    write_summary_table,
)
from .sampling import SampleSet, sample_parameters
from .subspace import (
    ActiveSubspace,
    bootstrap_eigenvalues,
    choose_dimension,
    covariance,
    eigendecompose,
    lift,
    partition,
    project_active,
)
from .surface import (
    ResponseSurface,
    eval_surface,
    fit_response_surface,
    sufficient_summary,
    surrogate_error_grid,
)

__all__ = [
    "ActiveSubspace",
    "GradientSet",
    "ResponseSurface",
    "SampleSet",
    "bootstrap_eigenvalues",
    "choose_dimension",
    "covariance",
    "eigendecompose",
    "eval_surface",
    "fit_response_surface",
    "lift",
    "local_linear_gradients",
    "partition",
    "project_active",
    "read_eigenvector_table",
    "read_gradients",
    "read_samples",
    "sample_parameters",
    "sufficient_summary",
    "surrogate_error_grid",
    "write_eigen_table",
    "write_eigenvector_table",
    "write_error_grid",
    "write_gradients",
    "write_samples",
    "write_summary_table",
]
