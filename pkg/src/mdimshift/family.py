"""A family of subshifts over disjoint intervals I_n accumulating at 1.

Y_n lives over I_n = [1 - 2^(1-n), 1 - 2^-n - delta_n] and uses a single block
template y whose star density sits in (r_n, 1). The union of the Y_n with the
constant-one point has mean dimension 1, and for every r < 1 there is a minimal
subshift of mean dimension r inside some Y_n: the construction run over I_n
with t = r.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .alphabet import STAR, Alphabet, as_point
from .construction import ConstructionState, extend, init_step1
from .errors import CapacityError, ConfigError, MdimError
from .lattice import Window, sub
from .patch import Patch
from .templates import FirstTemplate, table_first
from .tiling import TilingLevel, TilingSequence, geometric_sequence

ONE = (Fraction(1),)


def default_delta(n: int) -> Fraction:
    return Fraction(1, 1 << (n + 2))


def default_r(n: int) -> Fraction:
    return 1 - Fraction(1, 1 << n)


@dataclass(frozen=True)
class FamilyConfig:
    deltas: tuple
    rs: tuple

    @classmethod
    def default(cls, n_max: int = 6) -> "FamilyConfig":
        return cls(
            tuple(default_delta(n) for n in range(1, n_max + 1)),
            tuple(default_r(n) for n in range(1, n_max + 1)),
        )

    def __post_init__(self):
        object.__setattr__(self, "deltas", tuple(Fraction(x) for x in self.deltas))
        object.__setattr__(self, "rs", tuple(Fraction(x) for x in self.rs))
        if len(self.deltas) != len(self.rs):
            raise ConfigError("delta and r schedules must have the same length")

    @property
    def n_max(self) -> int:
        return len(self.rs)

    def delta(self, n: int) -> Fraction:
        return self.deltas[n - 1]

    def r(self, n: int) -> Fraction:
        return self.rs[n - 1]


def interval_for(n: int, delta) -> Alphabet:
    """I_n = [1 - 2^(1-n), 1 - 2^-n - delta]."""
    delta = Fraction(delta)
    if n < 1:
        raise ConfigError("n starts at 1")
    if not 0 < delta < Fraction(1, 1 << (n + 1)):
        raise ConfigError(f"delta_{n} = {delta} must lie in (0, 2^-{n + 1})")
    return Alphabet.interval(1 - Fraction(2, 1 << n), 1 - Fraction(1, 1 << n) - delta)


@dataclass(frozen=True)
class FamilyCheck:
    ok: bool
    problems: tuple


def check_family(config: FamilyConfig) -> FamilyCheck:
    problems = []
    for n in range(1, config.n_max + 1):
        d, r = config.delta(n), config.r(n)
        if not 0 < d < Fraction(1, 1 << (n + 1)):
            problems.append(f"delta_{n} = {d} is outside (0, 2^-{n + 1})")
        if not 0 < r < 1:
            problems.append(f"r_{n} = {r} is outside (0, 1)")
        if n > 1:
            if d >= config.delta(n - 1):
                problems.append(f"delta_{n} does not decrease")
            if r <= config.r(n - 1):
                problems.append(f"r_{n} does not increase")
    if problems:
        return FamilyCheck(False, tuple(problems))
    ivs = [interval_for(n, config.delta(n)) for n in range(1, config.n_max + 1)]
    for n, (a, b) in enumerate(zip(ivs, ivs[1:]), start=1):
        if not a.hi < b.lo:
            problems.append(f"sup I_{n} = {a.hi} is not below inf I_{n + 1} = {b.lo}")
    if ivs and not ivs[-1].hi < 1:
        problems.append("1 is not above every interval")
    return FamilyCheck(not problems, tuple(problems))


# --- Y_n -------------------------------------------------------------------------------


@dataclass(frozen=True)
class YDescriptor:
    n: int
    interval: Alphabet
    level: int
    side: int
    dim: int
    stars: int
    template: object = field(repr=False)

    @property
    def size(self) -> int:
        return self.side ** self.dim

    @property
    def density(self) -> Fraction:
        return Fraction(self.stars, self.size)

    def matches(self, patch: Patch, shift) -> bool:
        level = TilingLevel(self.level, self.side, self.dim)
        for tile in level.tiles_in_window(patch.window, shift):
            for g in tile:
                v = self.template.value(sub(g, tile.lo))
                if v is not STAR and patch.cells[g] != v:
                    return False
        return True

    def member(self, patch: Patch) -> bool:
        """Values in I_n and the y-blocks respected under some translate of the tiling."""
        if not all(v is not STAR and self.interval.contains(v) for v in patch.cells.values()):
            return False
        level = TilingLevel(self.level, self.side, self.dim)
        return any(self.matches(patch, g) for g in level.shape)


def y_star_count(r: Fraction, size: int) -> int:
    return (r.numerator * size) // r.denominator + 1


def y_level(config: FamilyConfig, n: int, sequence: TilingSequence) -> int:
    """Least level whose shape leaves room for at least one fixed cell."""
    r = config.r(n)
    level = 1
    while True:
        size = sequence.side(level) ** sequence.dim
        if y_star_count(r, size) < size:
            return level
        level += 1


def build_Y_descriptor(
    config: FamilyConfig, n: int, sequence: TilingSequence, level: int | None = None
) -> YDescriptor:
    if not 1 <= n <= config.n_max:
        raise ConfigError(f"n = {n} is outside 1..{config.n_max}")
    level = y_level(config, n, sequence) if level is None else level
    side = sequence.side(level)
    d = sequence.dim
    size = side ** d
    count = y_star_count(config.r(n), size)
    if count >= size:
        raise ConfigError(
            f"a shape of {size} cells cannot hold density in (r_{n}, 1); use a larger level"
        )
    iv = interval_for(n, config.delta(n))
    fill = iv.base_point
    tmpl = FirstTemplate(side, count, fill) if d == 1 else table_first(side, d, count, fill)
    return YDescriptor(n, iv, level, side, d, count, tmpl)


@dataclass(frozen=True)
class FamilyDescriptor:
    config: FamilyConfig
    sequence: TilingSequence
    ys: tuple

    @property
    def intervals(self) -> tuple:
        return tuple(y.interval for y in self.ys)

    def y(self, n: int) -> YDescriptor:
        return self.ys[n - 1]


def build_family(config: FamilyConfig | None = None, sequence: TilingSequence | None = None) -> FamilyDescriptor:
    config = config or FamilyConfig.default()
    sequence = sequence or geometric_sequence(4)
    ys = tuple(build_Y_descriptor(config, n, sequence) for n in range(1, config.n_max + 1))
    return FamilyDescriptor(config, sequence, ys)


# --- witnesses ------------------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    r: Fraction
    n: int
    y: YDescriptor
    state: ConstructionState
    stopped: str | None     # why the build stopped short of the requested depth


def witness_index(config: FamilyConfig, r) -> int:
    r = Fraction(r)
    if not 0 <= r < 1:
        raise ConfigError(f"r = {r} must lie in [0, 1)")
    for n in range(1, config.n_max + 1):
        if config.r(n) > r:
            return n
    raise ConfigError(f"no r_n exceeds {r} within n <= {config.n_max}")


def build_minimal_witness(
    config: FamilyConfig,
    r,
    sequence: TilingSequence | None = None,
    steps: int = 3,
    mode: str = "lazy",
) -> Witness:
    """Run the construction over I_n with t = r, starting at the Y_n level.

    Step 1 then places its stars on a prefix of the y stars with the same filler,
    so every block of the witness is a y block. Later steps are added while they
    remain feasible, up to ``steps``.
    """
    r = Fraction(r)
    n = witness_index(config, r)
    sequence = sequence or geometric_sequence(4)
    y = build_Y_descriptor(config, n, sequence)
    state = init_step1(r, y.interval, sequence, y.level, mode)
    stopped = None
    while state.depth < steps:
        try:
            state = extend(state)
        except MdimError as exc:
            stopped = str(exc)
            break
    return Witness(r, n, y, state, stopped)


@dataclass(frozen=True)
class Classification:
    kind: str          # "constant-one", "Y" or "none"
    n: int | None = None

    def __str__(self) -> str:
        return f"Y_{self.n}" if self.kind == "Y" else self.kind


def classify_window(patch: Patch, family: FamilyDescriptor) -> Classification:
    if not patch.is_full:
        raise ValueError("classification needs a fully valued patch")
    values = set(patch.cells.values())
    if values == {ONE}:
        return Classification("constant-one")
    for y in family.ys:
        if all(y.interval.contains(v) for v in values):
            return Classification("Y", y.n) if y.member(patch) else Classification("none")
    return Classification("none")


def witness_values_bounded(witness: Witness, values: Sequence) -> bool:
    hi = witness.y.interval.hi
    return all(as_point(v)[0] <= hi < 1 for v in values)
