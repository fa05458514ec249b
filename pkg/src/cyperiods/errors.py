"""Exception taxonomy shared by the library and the CLI.

Every error class carries the process exit code the CLI maps it to:
2 for malformed input, 3 for a computation that cannot proceed, 4 for a
failed float-to-rational reconstruction.
"""


class CyperiodsError(Exception):
    exit_code = 3


class InputError(CyperiodsError):
    """Malformed input file, unparsable rational, unknown preset."""
    exit_code = 2


class VariableMismatchError(CyperiodsError):
    """Binary series operation on series in different variables."""


class DecompositionInfeasibleError(CyperiodsError):
    """Some monomial of the geometric-series kernel has modulus >= 1 on the torus."""


class PointedConeError(CyperiodsError):
    """The modulus-free monomials admit a balanced nonneg combination."""


class OddCoefficientError(CyperiodsError):
    """Even-series reduction hit a nonzero odd coefficient."""


class NoAnnihilatorError(CyperiodsError):
    """No operator within the order/degree search box annihilates the series."""


class UnderdeterminedError(CyperiodsError):
    """Too few series coefficients for the requested fit (guard rows unsatisfied)."""


class NotMUMPointError(CyperiodsError):
    """Requested construction needs a point of maximally unipotent monodromy."""


class IrregularSingularityError(CyperiodsError):
    """Local solver called at a non-Fuchsian point."""


class SpectrumMismatchError(CyperiodsError):
    """Local exponents do not have the vanishing-cycle pattern {0,1,1,2}."""


class OutsideDiskError(CyperiodsError):
    """Evaluation point outside the guaranteed convergence disk."""


class StepInfeasibleError(CyperiodsError):
    """Continuation path passes too close to a singular point."""


class PrecisionExhaustedError(CyperiodsError):
    """Adaptive series order exceeded its cap before the tail bound was met."""


class ReconstructionFailedError(CyperiodsError):
    """High-precision float not close to a small rational."""
    exit_code = 4


class NoIntegralNormalizationError(CyperiodsError):
    """No mirror-map constant in the search range makes the instanton numbers integral."""


class PatternMismatchError(CyperiodsError):
    """Monodromy matrix does not have the expected standard-form shape."""
