"""Exception types raised across the package."""


class MargulisLabError(Exception):
    """Base class for all errors raised by margulis_lab."""


class NotHyperbolic(MargulisLabError):
    """An isometry (or 2x2 matrix) is not hyperbolic within tolerance."""


class AxesDisjoint(MargulisLabError):
    """Two hyperbolic axes do not cross in the hyperbolic plane."""


class ConstructionFailed(MargulisLabError):
    """The Fuchsian holonomy could not be built or failed certification."""


class SingularSystem(MargulisLabError):
    """A pants linear system is (numerically) singular."""


class StepLeavesHyperbolicLocus(MargulisLabError):
    """A finite-difference step pushes a deformed element out of the hyperbolic locus."""
