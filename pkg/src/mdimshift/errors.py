"""Exception hierarchy; the CLI maps each family to its own exit code."""


class MdimError(Exception):
    exit_code = 1


class ConfigError(MdimError, ValueError):
    exit_code = 2


class TilingError(ConfigError):
    pass


class UnsupportedAlphabet(ConfigError):
    pass


class Undetermined(MdimError):
    """A coordinate of z that the built steps do not pin down."""

    exit_code = 3


class CapacityError(MdimError):
    """Depth, level or size beyond what can be represented or searched."""

    exit_code = 4


class ConstructionError(CapacityError):
    """No admissible choice exists within the configured tiling schedule."""
