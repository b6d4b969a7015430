"""Portable seeded integer draws.

Draws come from the raw 64-bit output of numpy's PCG64 bit generator, whose
stream is fixed for a given seed across platforms and numpy releases (unlike
``Generator`` methods). A raw word ``w`` maps to ``(w * bound) >> 64``, i.e.
Lemire's multiply-high reduction without rejection; the bias is below
``bound / 2**64`` and irrelevant for the alphabet sizes used here.
"""

from __future__ import annotations

import numpy as np


class SeededDraws:
    def __init__(self, seed: int):
        self.seed = int(seed)
        self._bitgen = np.random.PCG64(self.seed)

    def below(self, bound: int) -> int:
        """One integer uniform on ``[0, bound)``."""
        if bound < 1:
            raise ValueError("bound must be positive")
        word = int(self._bitgen.random_raw())
        return (word * bound) >> 64

    def many_below(self, bound: int, count: int) -> list[int]:
        if bound < 1:
            raise ValueError("bound must be positive")
        words = self._bitgen.random_raw(count).tolist() if count else []
        return [(int(w) * bound) >> 64 for w in words]


def random_configuration(n: int, k: int, seed: int) -> tuple[int, ...]:
    return tuple(SeededDraws(seed).many_below(k, n))
