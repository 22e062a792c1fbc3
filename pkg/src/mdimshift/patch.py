"""Finite partial configurations over a window, valued in K ∪ {*}."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator

from .alphabet import STAR, as_point
from .lattice import Element, Window, add, elem, neg


@dataclass(frozen=True)
class Patch:
    window: Window
    cells: dict = field(compare=True, hash=False)

    def __post_init__(self):
        if len(self.cells) != self.window.size:
            raise ValueError("a patch needs exactly one cell per window position")

    @classmethod
    def from_function(cls, window: Window, fn: Callable) -> "Patch":
        return cls(window, {g: fn(g) for g in window})

    @classmethod
    def from_values(cls, window: Window, values) -> "Patch":
        values = list(values)
        cells = {}
        for g, v in zip(window, values):
            cells[g] = v if v is STAR else as_point(v)
        return cls(window, cells)

    def __getitem__(self, g):
        return self.cells[elem(g, self.window.dim)]

    def __iter__(self) -> Iterator[Element]:
        return iter(self.window)

    def values(self) -> list:
        return [self.cells[g] for g in self.window]

    def star_set(self) -> frozenset:
        """x(F, *): the positions holding the star symbol."""
        return frozenset(g for g, v in self.cells.items() if v is STAR)

    def level_set(self, q) -> frozenset:
        """x(F, q) for a point q of K."""
        q = as_point(q)
        return frozenset(g for g, v in self.cells.items() if v is not STAR and v == q)

    @property
    def is_full(self) -> bool:
        return all(v is not STAR for v in self.cells.values())

    def restrict(self, window: Window) -> "Patch":
        if not window.issubset(self.window):
            raise ValueError(f"{window} is not inside {self.window}")
        return Patch(window, {g: self.cells[g] for g in window})


def translate_patch(patch: Patch, g) -> Patch:
    """Shift action (g·x)_h = x_{h+g}: the window moves by -g."""
    g = elem(g, patch.window.dim)
    window = patch.window.translate(neg(g))
    return Patch(window, {h: patch.cells[add(h, g)] for h in window})
