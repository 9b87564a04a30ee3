"""Exception types shared across the package."""


class OrbintError(Exception):
    """Base class for all package-specific errors."""


class NotAdjacent(OrbintError):
    """The two parabolic subgroups do not differ by one adjacent block swap."""


class RootNotInWedge(OrbintError):
    """The root does not lie in Phi(N1) intersect Phi(N2^-)."""


class NegativeExponent(OrbintError):
    """A Laurent term q^{-k} did not divide exactly at the evaluation point."""


class OutOfValidityRegion(OrbintError):
    """Truncation parameters fall outside the declared validity region."""


class PositivityViolated(OrbintError):
    """An adjacency coefficient of an orthogonal family became negative."""


class NotSufficientlyRegular(OrbintError):
    """The truncation polytope fails the sufficient-regularity conditions."""


class GenericityFailure(OrbintError):
    """The perturbation or xi choice is not generic enough; re-perturb."""


class Unbounded(OrbintError):
    """A lattice-point count was requested on an unbounded region."""


class NotRegular(OrbintError):
    """The truncation polytope is not regular with respect to the base family."""


class InconsistentPipelines(OrbintError):
    """The two counting pipelines disagree; indicates an implementation bug."""


class UnsupportedGroup(OrbintError):
    """Only GL2/GL3 step rules are implemented for this operation."""


class BranchMismatch(OrbintError):
    """Formula branch does not match the parameter regime."""


class BudgetExceeded(OrbintError):
    """Estimated enumeration size is above the configured cap."""


class PrecisionExhausted(OrbintError):
    """A valuation query needed more series precision than available."""
