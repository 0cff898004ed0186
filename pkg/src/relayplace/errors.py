"""Exception hierarchy shared by every stage of the pipeline."""


class RelayPlacementError(Exception):
    """Base class; ``exit_code`` is what the CLI returns for it."""

    exit_code = 1


class InvalidArgumentError(RelayPlacementError, ValueError):
    exit_code = 2


class CoverageValidationError(RelayPlacementError):
    """A sensor is covered by fewer relays than required."""

    exit_code = 2

    def __init__(self, sensor: int, degree: int, k: int):
        super().__init__(f"sensor {sensor} has degree {degree} < {k}")
        self.sensor = sensor
        self.degree = degree
        self.k = k


class InfeasibleInstanceError(RelayPlacementError):
    exit_code = 3


class ResourceLimitError(RelayPlacementError):
    exit_code = 4
