"""Exact orbit-ball counts in the covering tree of a rose.

Vertices of the universal cover of the rose are reduced words in the
generators g_1^{+-1}..g_k^{+-1}; the distance from the base vertex to a
word is the sum of the loop lengths of its letters. Counting words with
weighted length <= R gives the orbit-ball count N(R) whose exponential
growth rate is the entropy.

Lengths must be rational. They are stored as integers over a common
denominator so the sweep runs over integer radii with exact (Python int)
counts.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

from .core import ValidationError

DEFAULT_TABLE_CAP = 10**7


@dataclass(frozen=True)
class ScaledLengths:
    """Loop lengths integer_lengths[i] / scale, stored gcd-reduced."""

    integer_lengths: tuple[int, ...]
    scale: int = 1

    def __post_init__(self):
        ints = tuple(self.integer_lengths)
        if not ints:
            raise ValidationError("empty length list")
        for i, n in enumerate(ints):
            if isinstance(n, bool) or not isinstance(n, int):
                raise ValidationError(f"non-integer scaled length at index {i}: {n!r}")
            if n <= 0:
                raise ValidationError(f"nonpositive length at index {i}")
        if isinstance(self.scale, bool) or not isinstance(self.scale, int) or self.scale <= 0:
            raise ValidationError("scale must be a positive integer")
        g = reduce(math.gcd, ints, self.scale)
        object.__setattr__(self, "integer_lengths", tuple(n // g for n in ints))
        object.__setattr__(self, "scale", self.scale // g)

    @classmethod
    def from_lengths(cls, lengths: Sequence, scale: int = 1) -> "ScaledLengths":
        """Round real lengths to the grid 1/scale.

        Fractions and ints are taken exactly when they land on the grid.
        A length that rounds to 0 is rejected.
        """
        if isinstance(scale, bool) or not isinstance(scale, int) or scale <= 0:
            raise ValidationError("scale must be a positive integer")
        ints = []
        for i, a in enumerate(lengths):
            try:
                q = Fraction(a) * scale
            except (TypeError, ValueError):
                raise ValidationError(f"non-numeric length at index {i}: {a!r}") from None
            n = round(q)
            if n <= 0:
                raise ValidationError(
                    f"length at index {i} rounds to {n}/{scale}; use a finer scale"
                )
            ints.append(int(n))
        return cls(tuple(ints), scale)

    @property
    def k(self) -> int:
        return len(self.integer_lengths)

    @property
    def lengths(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self.scale) for n in self.integer_lengths)


@dataclass(frozen=True)
class CensusCurve:
    """N(R) sampled at the listed radii (all multiples of 1/scale)."""

    radii: tuple[Fraction, ...]
    counts: tuple[int, ...]
    scale: int

    def count_at(self, radius) -> int:
        r = Fraction(radius)
        try:
            return self.counts[self.radii.index(r)]
        except ValueError:
            raise ValidationError(f"radius {radius} was not sampled") from None


def _as_scaled(lengths) -> ScaledLengths:
    if isinstance(lengths, ScaledLengths):
        return lengths
    return ScaledLengths.from_lengths(lengths, 1)


def _radius_index(lengths: ScaledLengths, radius, cap: int) -> int:
    r = Fraction(radius)
    if r < 0:
        raise ValidationError("radius must be nonnegative")
    t = math.floor(r * lengths.scale)
    if t > cap:
        raise ValidationError(
            f"radius {radius} needs {t} table layers, above the cap {cap}"
        )
    return t


def layer_counts(lengths: ScaledLengths, t_max: int):
    """Yield, for t = 0..t_max, the number of reduced words of length t/scale.

    Letter 2i is g_i, letter 2i+1 is its inverse. ``ends[g]`` at layer t
    counts words of that exact length whose last letter is g; a word
    ending in g is extended by any letter except the inverse of g.
    Only the last max(integer_lengths) layers are kept.
    """
    k = lengths.k
    step = [lengths.integer_lengths[g >> 1] for g in range(2 * k)]
    depth = max(step)
    # history[-d] is (empty-word count, per-letter counts) at layer t - d
    history: deque = deque(maxlen=depth)
    zeros = [0] * (2 * k)
    for t in range(t_max + 1):
        ends = [0] * (2 * k)
        for g in range(2 * k):
            d = step[g]
            if d > t:
                continue
            empty, prev = history[-d]
            inv = g ^ 1
            ends[g] = empty + sum(c for h, c in enumerate(prev) if h != inv)
        empty = 1 if t == 0 else 0
        history.append((empty, ends if any(ends) else zeros))
        yield empty + sum(ends)


def census_curve(lengths, r_max, step, cap: int = DEFAULT_TABLE_CAP) -> CensusCurve:
    """N(R) at R = step, 2*step, ..., up to r_max from a single sweep."""
    lengths = _as_scaled(lengths)
    step = Fraction(step)
    r_max = Fraction(r_max)
    if not (0 < step <= r_max):
        raise ValidationError("need 0 < step <= r_max")
    t_max = _radius_index(lengths, r_max, cap)
    n_samples = math.floor(r_max / step)
    radii = tuple(step * n for n in range(1, n_samples + 1))
    wanted = {}
    for r in radii:
        wanted.setdefault(math.floor(r * lengths.scale), []).append(r)

    counts = {}
    total = 0
    for t, layer in enumerate(layer_counts(lengths, t_max)):
        total += layer
        for r in wanted.get(t, ()):
            counts[r] = total
    return CensusCurve(radii=radii, counts=tuple(counts[r] for r in radii), scale=lengths.scale)


def exact_ball_count(lengths, radius, cap: int = DEFAULT_TABLE_CAP) -> int:
    """Number of reduced words (empty word included) of weighted length <= radius."""
    lengths = _as_scaled(lengths)
    t_max = _radius_index(lengths, radius, cap)
    return sum(layer_counts(lengths, t_max))


def growth_rate_estimate(curve: CensusCurve, window) -> float:
    """(log N(R2) - log N(R1)) / (R2 - R1) over a window of sampled radii."""
    try:
        r1, r2 = (Fraction(r) for r in window)
    except (TypeError, ValueError):
        raise ValidationError("window must be a pair of radii") from None
    if not r2 > r1:
        raise ValidationError("window must satisfy R2 > R1")
    n1, n2 = curve.count_at(r1), curve.count_at(r2)
    if n1 < 1 or n2 < 1:
        raise ValidationError("zero count in window")
    # math.log accepts arbitrarily large ints
    return (math.log(n2) - math.log(n1)) / float(r2 - r1)
