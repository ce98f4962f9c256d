"""Exception hierarchy shared across the package."""


class ZpdehnError(Exception):
    """Base class for all package errors."""


class BudgetExceeded(ZpdehnError):
    """A requested computation exceeds the documented combinatorial budget."""


class RankPreconditionViolated(ZpdehnError):
    """An operation requiring a rank-2 integer block received something else."""


class ConstraintViolated(ZpdehnError):
    """The linear compatibility constraints between pairs and exponents fail."""


class LemmaViolation(ZpdehnError):
    """A verified classification lemma produced a counterexample.

    This must never fire; sweeps report it and the CLI maps it to exit code 1.
    """


class HypothesisViolated(ZpdehnError):
    """A family fails the all-transversals-dependent hypothesis."""


class NotInSpan(ZpdehnError):
    """Candidate vector lies outside the span of the given basis."""


class NotABasis(ZpdehnError):
    """The given vectors are linearly dependent."""


class CascadeExhausted(ZpdehnError):
    """The containment cascade terminated without certifying a cusp index."""


class NotAnomalous(ZpdehnError):
    """A product-subgroup classification was requested for a non-anomalous spec."""


class PrecisionExhausted(ZpdehnError):
    """A root modulus could not be separated from 1 at the precision cap."""


class FieldMismatch(ZpdehnError):
    """Tuple height inputs are not presented in a single supported field."""


class DegenerateForms(ZpdehnError):
    """The linear forms handed to the small-kernel construction are dependent."""


class PrecisionTooLow(ZpdehnError):
    """Relation detection was invoked below the minimum working precision."""


class NewtonDiverged(ZpdehnError):
    """A Newton iteration failed to reach the target residual."""


class OutOfTrustRadius(ZpdehnError):
    """A series evaluation point lies outside the configured trust radius."""


class ManifoldFileError(ZpdehnError):
    """A manifold potential file is malformed; message carries the line."""
