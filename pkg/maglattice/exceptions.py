class MaglatticeError(Exception):
    """Base class for every error raised on purpose by maglattice."""


class ConfigError(MaglatticeError, ValueError):
    """A configuration document or argument is invalid. CLI exit code 1."""


class DomainError(MaglatticeError, ValueError):
    """A field was asked for where its model is not defined, e.g. below
    the film top or inside a magnetized prism. CLI exit code 2."""


class NumericalError(MaglatticeError, RuntimeError):
    """A computation broke down: too many clamped radicands, a trap without
    positive curvature. CLI exit code 2."""


class OutputError(MaglatticeError, OSError):
    """An artifact could not be written. CLI exit code 3."""
