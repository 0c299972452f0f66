"""Value types shared by the solvers, the census and the bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional


class ValidationError(ValueError):
    """Raised for malformed lengths, displacements or configuration."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative solver exhausts its iteration cap."""


def _check_positive_finite(values: Iterable[float], what: str) -> tuple[float, ...]:
    out = []
    for i, v in enumerate(values):
        try:
            x = float(v)
        except (TypeError, ValueError):
            raise ValidationError(f"non-numeric {what} at index {i}: {v!r}") from None
        if not math.isfinite(x):
            raise ValidationError(f"non-finite {what} at index {i}")
        if x <= 0.0:
            raise ValidationError(f"nonpositive {what} at index {i}")
        out.append(x)
    if not out:
        raise ValidationError(f"empty {what} list")
    return tuple(out)


@dataclass(frozen=True)
class RoseLengths:
    """Loop lengths a_1..a_k of a rose (wedge of k circles).

    Order is preserved and duplicates are kept: each loop is a separate
    free generator.
    """

    lengths: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lengths", _check_positive_finite(self.lengths, "length"))

    @property
    def k(self) -> int:
        return len(self.lengths)

    def scaled(self, c: float) -> "RoseLengths":
        return RoseLengths(tuple(c * a for a in self.lengths))

    def __len__(self):
        return len(self.lengths)

    def __iter__(self):
        return iter(self.lengths)


def validate_lengths(raw) -> RoseLengths:
    """Validate a raw sequence of loop lengths.

    >>> validate_lengths([1.0, 2.0]).k
    2
    """
    if isinstance(raw, RoseLengths):
        return raw
    return RoseLengths(tuple(raw))


@dataclass(frozen=True)
class GroupSample:
    """Displacements d(x, g_i x) of k free generators and a critical exponent."""

    displacements: tuple[float, ...]
    delta: float

    def __post_init__(self):
        object.__setattr__(
            self, "displacements", _check_positive_finite(self.displacements, "displacement")
        )
        try:
            delta = float(self.delta)
        except (TypeError, ValueError):
            raise ValidationError(f"non-numeric delta: {self.delta!r}") from None
        if not math.isfinite(delta) or delta < 0.0:
            raise ValidationError("delta must be finite and nonnegative")
        object.__setattr__(self, "delta", delta)

    @property
    def k(self) -> int:
        return len(self.displacements)


@dataclass(frozen=True)
class EntropySolution:
    """Result of an entropy solve.

    ``residual`` is always the logistic-sum residual
    sum 1/(1+e^{h a_i}) - 1/2 at the returned h, whichever method produced it.
    """

    h: float
    residual: float
    bracket_low: float
    bracket_high: float
    iterations: int
    method: str  # "closed-form-root", "spectral" or "degenerate"


@dataclass(frozen=True)
class CollarReport:
    """Lower bounds on the last loop length given the others and the entropy.

    ``exact_bound`` is None when the priors are infeasible at entropy h;
    ``asymptotic_bound`` is None when its log argument is nonpositive.
    """

    h: float
    prior_lengths: tuple[float, ...]
    exact_bound: Optional[float]
    asymptotic_bound: Optional[float]
    comparison_bcgs: Optional[float]
    margin: Optional[float]
    plug_back_residual: Optional[float]
    vacuous: bool

    @property
    def feasible(self) -> bool:
        return self.exact_bound is not None
