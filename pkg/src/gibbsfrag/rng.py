"""Seeded, splittable random streams and exact sampling from rational weights.

Every sampler takes ``seed``: an int, a ``random.Random`` to draw from, or a
``numpy.random.SeedSequence``. Child streams come from
``SeedSequence.spawn`` so independent jobs never share state.
"""
from __future__ import annotations

import random
from fractions import Fraction
from math import lcm
from typing import List, Sequence

import numpy as np


def check_random_state(seed) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return random.Random(int.from_bytes(seed.generate_state(4, dtype=np.uint32).tobytes(), "little"))
    if seed is None:
        raise ValueError("an explicit seed is required")
    if isinstance(seed, (int, np.integer)) and not isinstance(seed, bool) and seed >= 0:
        return random.Random(int(seed))
    raise ValueError(f"seed must be a non-negative int, random.Random or SeedSequence, got {seed!r}")


def spawn(seed: int, count: int) -> List[random.Random]:
    """``count`` independent child streams derived from ``seed``."""
    return [check_random_state(child) for child in np.random.SeedSequence(seed).spawn(count)]


def draw_index(rng: random.Random, weights: Sequence[Fraction]) -> int:
    """Index i with probability weights[i] / sum(weights), drawn exactly."""
    scale = lcm(*(Fraction(w).denominator for w in weights))
    ints = [int(Fraction(w) * scale) for w in weights]
    u = rng.randrange(sum(ints))
    for i, w in enumerate(ints):
        if u < w:
            return i
        u -= w
    raise AssertionError("unreachable")


class ExactSampler:
    """Precomputed integer table for repeated exact draws from one law."""

    __slots__ = ("values", "cum", "total")

    def __init__(self, values, weights):
        scale = lcm(*(Fraction(w).denominator for w in weights))
        self.values = tuple(values)
        cum, acc = [], 0
        for w in weights:
            acc += int(Fraction(w) * scale)
            cum.append(acc)
        self.cum = tuple(cum)
        self.total = acc
        if acc <= 0:
            raise ValueError("weights sum to zero")

    def draw(self, rng: random.Random):
        u = rng.randrange(self.total)
        for v, c in zip(self.values, self.cum):
            if u < c:
                return v
        raise AssertionError("unreachable")
