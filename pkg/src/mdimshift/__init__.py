"""Minimal subshifts with prescribed mean dimension, built and checked exactly."""

from .alphabet import STAR, Alphabet, dense_net, parse_alphabet
from .construction import (
    ConstructionState,
    build_construction,
    evaluate_z,
    free_sets,
    star_count,
    z_patch,
)
from .errors import CapacityError, ConfigError, ConstructionError, MdimError, Undetermined
from .lattice import Window, enumerate_element, index_of
from .tiling import TilingSequence, build_box_sequence, geometric_sequence

__version__ = "0.1.0"
