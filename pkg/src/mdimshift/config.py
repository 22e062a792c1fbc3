"""Run configuration: a small ``key = value`` file format plus command-line overrides."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from fractions import Fraction
from pathlib import Path

from .alphabet import Alphabet, parse_alphabet
from .construction import MODES, ConstructionState, build_construction
from .errors import ConfigError
from .lattice import Window
from .tiling import TilingSequence, build_box_sequence


@dataclass(frozen=True)
class RunConfig:
    dim: int = 1
    sides: tuple = (4, 16, 64, 256)
    extend: bool = True
    alphabet: str = "interval:0:1"
    t: Fraction = Fraction(1, 4)
    mode: str = "lazy"
    steps: int = 3
    n1: int = 1
    window: str | None = None

    def validate(self) -> "RunConfig":
        if self.dim < 1:
            raise ConfigError("dim must be positive")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}")
        if not 0 <= self.t < 1:
            raise ConfigError(f"t = {self.t} must lie in [0, 1)")
        if self.steps < 1 or self.n1 < 1:
            raise ConfigError("steps and n1 must be positive")
        parse_alphabet(self.alphabet)
        self.sequence()
        return self

    def sequence(self) -> TilingSequence:
        if len(self.sides) < 2 and self.extend:
            return TilingSequence(tuple(self.sides), self.dim, 4)
        return build_box_sequence(self.sides, self.dim, self.extend)

    def alphabet_obj(self) -> Alphabet:
        return parse_alphabet(self.alphabet)

    def build(self) -> ConstructionState:
        return build_construction(
            self.t, self.alphabet_obj(), self.sequence(), self.steps, self.n1, self.mode
        )

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "sides": [str(s) for s in self.sides],
            "extend": self.extend,
            "alphabet": self.alphabet,
            "t": str(self.t),
            "mode": self.mode,
            "steps": self.steps,
            "n1": self.n1,
        }


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"not an exact rational: {text!r}") from None


def parse_int_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x)
    except ValueError:
        raise ConfigError(f"not a comma-separated integer list: {text!r}") from None


def parse_bool(text: str) -> bool:
    v = text.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def parse_window(text: str, dim: int | None = None) -> Window:
    """``a:b`` per dimension, dimensions separated by commas."""
    try:
        spans = [tuple(int(x) for x in part.split(":")) for part in text.split(",")]
        if any(len(s) != 2 for s in spans):
            raise ValueError
        w = Window(tuple(a for a, _ in spans), tuple(b for _, b in spans))
    except ValueError:
        raise ConfigError(f"bad window {text!r}; expected a:b[,c:d...]") from None
    if dim is not None and w.dim != dim:
        raise ConfigError(f"window {text!r} has dimension {w.dim}, expected {dim}")
    return w


_PARSERS = {
    "dim": int,
    "sides": parse_int_list,
    "extend": parse_bool,
    "alphabet": str.strip,
    "t": parse_rational,
    "mode": str.strip,
    "steps": int,
    "n1": int,
    "window": str.strip,
}


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _PARSERS[key](value)
        except (ConfigError, ValueError) as exc:
            raise ConfigError(f"{source}:{lineno}: field {key!r}: {exc}") from None
    return out


def load_config(path, overrides: dict | None = None) -> RunConfig:
    values = {}
    if path is not None:
        p = Path(path)
        try:
            text = p.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {p}: {exc}") from None
        values = parse_config_text(text, str(p))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    known = {f.name for f in fields(RunConfig)}
    return replace(RunConfig(), **{k: v for k, v in values.items() if k in known}).validate()


def config_from_dict(d: dict) -> RunConfig:
    return RunConfig(
        dim=int(d["dim"]),
        sides=tuple(int(s) for s in d["sides"]),
        extend=bool(d["extend"]),
        alphabet=d["alphabet"],
        t=Fraction(d["t"]),
        mode=d["mode"],
        steps=int(d["steps"]),
        n1=int(d["n1"]),
    ).validate()
