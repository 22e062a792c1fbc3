"""Fixed-base ranking of digit tuples, most significant digit first."""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence


@lru_cache(maxsize=4096)
def _power(base: int, exp: int) -> int:
    return base ** exp


def pattern_rank(digits: Sequence[int], base: int) -> int:
    r = 0
    for x in digits:
        if not 0 <= x < base:
            raise ValueError(f"digit {x} out of range for base {base}")
        r = r * base + x
    return r


def pattern_unrank(rank: int, base: int, length: int) -> tuple:
    if not 0 <= rank < base ** length:
        raise ValueError(f"rank {rank} out of range")
    out = [0] * length
    for i in range(length - 1, -1, -1):
        rank, out[i] = divmod(rank, base)
    return tuple(out)


def pattern_digit(rank: int, base: int, length: int, i: int) -> int:
    """Digit i (0 = most significant) of ``rank`` written with ``length`` digits."""
    if base == 1:
        return 0
    return (rank // _power(base, length - 1 - i)) % base


def sparse_rank(digits: dict, base: int, length: int) -> int:
    """Rank of the digit tuple that is zero except at the given positions."""
    return sum(v * _power(base, length - 1 - i) for i, v in digits.items())
