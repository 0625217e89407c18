"""Exception hierarchy shared by the array model, beamformers and harness."""

from typing import Optional


class RRBeamError(Exception):
    """Base class for every error raised by rrbeam"""


class InvalidGeometryError(RRBeamError, ValueError):
    """A direction of arrival falls outside (0, 180) degrees"""


class DegenerateInputError(RRBeamError, ValueError):
    """Zero vectors, zero SINR denominators, degenerate Lagrange geometry"""


class InfeasibleUncertaintyError(RRBeamError, ValueError):
    """Uncertainty radius too large: epsilon >= ||a_bar||^2"""


class NumericalFailureError(RRBeamError, ArithmeticError):
    """A recursion hit a denominator or conditioning hazard"""


class SingularityError(NumericalFailureError):
    """Distortionless normalisation a^H R^-1 a vanished"""


class RankDeficiencyError(NumericalFailureError):
    """Columns of a projection matrix became linearly dependent"""


class IllConditionedError(NumericalFailureError):
    """A matrix to be inverted exceeded the allowed condition number"""


class SingularSystemError(NumericalFailureError):
    """A pseudo-inverse was requested of a numerically zero matrix"""


class ConvergenceError(NumericalFailureError):
    """The robust Capon multiplier search did not converge"""


class ScenarioParseError(RRBeamError, ValueError):
    """Scenario file could not be parsed"""


class ScenarioValidationError(RRBeamError, ValueError):
    """Scenario file parsed but violates an invariant"""


class UnknownAlgorithmError(RRBeamError, ValueError):
    """Algorithm identifier not present in the registry"""


class TrialFailure(RRBeamError):
    """A numerical failure tagged with the trial that produced it"""

    def __init__(self, algorithm: str, trial_index: int, snapshot_index: Optional[int], cause: Exception):
        self.algorithm = algorithm
        self.trial_index = trial_index
        self.snapshot_index = snapshot_index
        self.cause = cause
        where = f"snapshot {snapshot_index}" if snapshot_index is not None else "setup"
        super().__init__(
            f"{algorithm} trial {trial_index} failed at {where}: "
            f"{type(cause).__name__}: {cause}"
        )


class ExperimentFailedError(RRBeamError):
    """More than the tolerated share of Monte Carlo trials failed"""


class CsvEmissionError(RRBeamError, OSError):
    """Writing the SINR CSV failed"""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
