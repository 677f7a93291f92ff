"""Exception types shared across the bench."""


class BenchError(Exception):
    """Base class for all bench errors."""


class DomainError(BenchError, ValueError):
    """Input outside the physical domain of an operation."""


class LowSpeedError(DomainError):
    """Torque evaluation requested below the minimum rotor speed."""


class ConfigurationError(BenchError, ValueError):
    """Inconsistent or invalid bench configuration."""


class StepSizeError(ConfigurationError):
    """Integration step exceeds the configured maximum."""


class ModelError(BenchError):
    """The aerodynamic model violates an expected structural property."""


class IdentificationError(BenchError):
    """Parameter identification found no self-consistent solution."""


class EstimationError(BenchError):
    """Correction-inertia estimation found no minimizer inside the sweep range."""


class SimulationError(BenchError):
    """A simulation step failed; the message names the step index."""


class ProtocolError(BenchError):
    """Malformed or unsupported wire-protocol message."""
