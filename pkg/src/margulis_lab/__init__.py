"""Affine deformations of holed-sphere holonomies in Minkowski 3-space."""

__version__ = "0.1.0"

from .affine import Cocycle, DeformationParams, base_cocycle, cohomology_coordinates, margulis, margulis_many, phi
from .errors import (
    AxesDisjoint,
    ConstructionFailed,
    MargulisLabError,
    NotHyperbolic,
    SingularSystem,
    StepLeavesHyperbolicLocus,
)
from .fuchsian import Holonomy, HolonomySpec, build_holonomy
from .words import Word

__all__ = [
    "AxesDisjoint",
    "Cocycle",
    "ConstructionFailed",
    "DeformationParams",
    "Holonomy",
    "HolonomySpec",
    "MargulisLabError",
    "NotHyperbolic",
    "SingularSystem",
    "StepLeavesHyperbolicLocus",
    "Word",
    "__version__",
    "base_cocycle",
    "build_holonomy",
    "cohomology_coordinates",
    "margulis",
    "margulis_many",
    "phi",
]
