"""Order-of-addition mixture-amount and component-amount designs.

Construction pipeline: simplex base designs (lattice/centroid), column
projection into amount designs, expansion over addition orders with
pairwise-order sign factors, amount crossing or scaling.  Evaluation:
prediction variance, G-efficiency, determinant criteria, FDS curves,
standard errors, multicollinearity, and power.
"""

from .core import (
    Design,
    DesignPoint,
    Kind,
    OofARun,
    as_fraction,
    total_amount,
    validate_point,
)
from .errors import OamixError
from .evaluate import (
    ContinuousAmounts,
    DiscreteAmounts,
    EvalReport,
    FdsCurve,
    d_criteria,
    evaluate_design,
    fds_curve,
    g_efficiency,
    information_matrix,
    leverages,
    power,
    prediction_variance,
    r2_multicollinearity,
    std_errors,
)
from .io import read_design, reference_design, write_design
from .models import (
    ModelKind,
    ModelMatrix,
    ModelSpec,
    OlsFit,
    Term,
    build_spec,
    fit_ols,
    model_matrix,
)
from .oofa import (
    cross_amounts,
    oofa_expand,
    ordering_from_pwo,
    pwo_from_ordering,
    pwo_pairs,
    scale_amounts,
    validate_design,
)
from .simplex import project_columns, simplex_centroid, simplex_lattice

__version__ = "0.1.0"

__all__ = [
    "Design",
    "DesignPoint",
    "Kind",
    "OofARun",
    "as_fraction",
    "total_amount",
    "validate_point",
    "OamixError",
    "ContinuousAmounts",
    "DiscreteAmounts",
    "EvalReport",
    "FdsCurve",
    "d_criteria",
    "evaluate_design",
    "fds_curve",
    "g_efficiency",
    "information_matrix",
    "leverages",
    "power",
    "prediction_variance",
    "r2_multicollinearity",
    "std_errors",
    "read_design",
    "reference_design",
    "write_design",
    "ModelKind",
    "ModelMatrix",
    "ModelSpec",
    "OlsFit",
    "Term",
    "build_spec",
    "fit_ols",
    "model_matrix",
    "cross_amounts",
    "oofa_expand",
    "ordering_from_pwo",
    "pwo_from_ordering",
    "pwo_pairs",
    "scale_amounts",
    "validate_design",
    "project_columns",
    "simplex_centroid",
    "simplex_lattice",
    "__version__",
]
