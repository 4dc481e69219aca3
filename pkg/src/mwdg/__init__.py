"""Modal discontinuous Galerkin solver for 1D/2D hyperbolic conservation
laws with a global multiwavelet troubled-cell indicator, moment limiting,
and an experiment harness."""

__version__ = "0.1.0"

from .basis import (MultiwaveletBasis, QmfFilters, ScalingBasis,
                    build_multiwavelets, build_qmf_filters,
                    legendre_scaling_eval, tables)
from .errors import (CannotDecomposeError, CannotIndicateError,
                     InvalidStateError, MwdgError, SolverError,
                     UnsupportedDegreeError)
from .fields import DgField1D, DgField2D, Mesh1D, Mesh2D

__all__ = [
    "__version__",
    "ScalingBasis", "MultiwaveletBasis", "QmfFilters",
    "build_multiwavelets", "build_qmf_filters", "legendre_scaling_eval",
    "tables",
    "Mesh1D", "Mesh2D", "DgField1D", "DgField2D",
    "MwdgError", "UnsupportedDegreeError", "CannotDecomposeError",
    "CannotIndicateError", "InvalidStateError", "SolverError",
]
