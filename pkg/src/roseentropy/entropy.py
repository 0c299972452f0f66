"""Volume entropy of a metric rose.

Two independent routes to the entropy h of the rose with loop lengths
a_1..a_k (k >= 2):

* ``rose_entropy`` solves sum_i 1/(1+e^{h a_i}) = 1/2 directly;
* ``lim_entropy`` finds the h at which the positive k x k matrix
  M(h)[i][j] = (1 if i == j else 2) * e^{-h a_j} has Perron root 1, i.e.
  the linear system x = M(h) x has a solution with every x_i > 0.

``positive_solution`` returns that positive solution so the algebraic
identities linking the two routes can be checked numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ConvergenceError, EntropySolution, RoseLengths, ValidationError, validate_lengths
from .roots import brent

DEFAULT_TOL = 1e-12
DEFAULT_SPECTRAL_TOL = 1e-10
POWER_MAXITER = 100_000


def logistic_tail(z: float) -> float:
    """1/(1+e^z) for z >= 0, written so that nothing overflows."""
    if z < 0:
        raise ValueError("logistic_tail expects z >= 0")
    t = math.exp(-z)
    return t / (1.0 + t)


def theorem_sum(lengths, s: float) -> float:
    """sum_i 1/(1+e^{s a_i}); strictly decreasing in s, equal to k/2 at s=0."""
    if s < 0 or math.isnan(s):
        raise ValidationError("s must be nonnegative")
    lengths = validate_lengths(lengths)
    return math.fsum(logistic_tail(s * a) for a in lengths)


def entropy_bracket(lengths) -> tuple[float, float]:
    """Interval [log(2k-1)/max a, log(2k-1)/min a] known to contain h (k >= 2)."""
    lengths = validate_lengths(lengths)
    if lengths.k < 2:
        raise ValidationError("entropy bracket needs k >= 2")
    c = math.log(2 * lengths.k - 1)
    return c / max(lengths), c / min(lengths)


def _widen(f, lo: float, hi: float, ftol: float) -> tuple[float, float]:
    # the analytic bracket is exact; rounding can push f(lo) or f(hi)
    # across zero by a few ulps when the lengths are (nearly) equal
    for _ in range(60):
        if f(lo) >= -ftol:
            break
        lo *= 0.5
    for _ in range(60):
        if f(hi) <= ftol:
            break
        hi *= 2.0
    return lo, hi


def rose_entropy(lengths, tol: float = DEFAULT_TOL, maxiter: int = 200) -> EntropySolution:
    """Entropy of the rose as the unique positive root of the logistic sum.

    For k = 1 the growth is linear and h = 0 is returned with method
    ``"degenerate"``.
    """
    lengths = validate_lengths(lengths)
    if not tol > 0:
        raise ValidationError("tol must be positive")
    if lengths.k == 1:
        return EntropySolution(
            h=0.0,
            residual=theorem_sum(lengths, 0.0) - 0.5,
            bracket_low=0.0,
            bracket_high=0.0,
            iterations=0,
            method="degenerate",
        )

    def f(h):
        return theorem_sum(lengths, h) - 0.5

    lo, hi = _widen(f, *entropy_bracket(lengths), 0.0)
    # f is cheap: polish to a collapsed bracket, then hold the residual to tol
    root = brent(f, lo, hi, ftol=0.0, maxiter=maxiter)
    if abs(root.fx) > tol:
        raise ConvergenceError(f"residual {root.fx!r} above tol={tol!r} at h={root.x!r}")
    return EntropySolution(
        h=root.x,
        residual=root.fx,
        bracket_low=root.low,
        bracket_high=root.high,
        iterations=root.iterations,
        method="closed-form-root",
    )


@dataclass(frozen=True)
class LimMatrix:
    """Coefficients of the positive linear system at a given h.

    entries[i][j] = (1 if i == j else 2) * exp(-h * a_j).
    """

    lengths: tuple[float, ...]
    h: float
    entries: tuple[tuple[float, ...], ...]

    @property
    def k(self) -> int:
        return len(self.entries)

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)


def lim_matrix(lengths, h: float) -> LimMatrix:
    lengths = validate_lengths(lengths)
    if not h > 0 or not math.isfinite(h):
        raise ValidationError("h must be positive and finite")
    w = [math.exp(-h * a) for a in lengths]
    k = lengths.k
    entries = tuple(
        tuple((1.0 if i == j else 2.0) * w[j] for j in range(k)) for i in range(k)
    )
    return LimMatrix(lengths=lengths.lengths, h=float(h), entries=entries)


@dataclass(frozen=True)
class PerronPair:
    rho: float
    vector: tuple[float, ...]
    iterations: int
    lower: float  # Collatz-Wielandt bounds from the final iterate
    upper: float


def perron_pair(m, tol: float = 1e-14, maxiter: int = POWER_MAXITER) -> PerronPair:
    """Perron root and eigenvector of a matrix with positive entries.

    Power iteration from the uniform vector, iterates normalised to sum 1.
    Stops when the sup-norm change between iterates is <= tol. The
    returned vector is positive and sums to 1.
    """
    a = m.as_array() if isinstance(m, LimMatrix) else np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValidationError("expected a nonempty square matrix")
    if not np.all(a > 0):
        raise ValidationError("matrix entries must all be positive")

    n = a.shape[0]
    x = np.full(n, 1.0 / n)
    for it in range(1, maxiter + 1):
        y = a @ x
        rho = float(y.sum())
        x_new = y / rho
        change = float(np.max(np.abs(x_new - x)))
        x = x_new
        if change <= tol:
            ratios = (a @ x) / x
            return PerronPair(
                rho=rho,
                vector=tuple(float(v) for v in x),
                iterations=it,
                lower=float(ratios.min()),
                upper=float(ratios.max()),
            )
    raise ConvergenceError(f"power iteration did not converge in {maxiter} steps")


def spectral_radius(m, tol: float = 1e-14, maxiter: int = POWER_MAXITER) -> float:
    return perron_pair(m, tol=tol, maxiter=maxiter).rho


def _inner_tol(tol: float) -> float:
    return max(tol * 1e-3, 1e-14)


def lim_entropy(lengths, tol: float = DEFAULT_SPECTRAL_TOL, maxiter: int = 200) -> EntropySolution:
    """Entropy as the h where the Perron root of ``lim_matrix`` equals 1.

    The Perron root is strictly decreasing in h, so a sign-change bracket
    plus Brent's method finds it. The bracket comes from row sums: at
    h = log(2k-1)/max a every row sum is >= 1, at log(2k-1)/min a every
    row sum is <= 1, and the Perron root lies between min and max row sum.
    """
    lengths = validate_lengths(lengths)
    if lengths.k < 2:
        raise ValidationError("lim_entropy needs k >= 2")
    if not tol > 0:
        raise ValidationError("tol must be positive")
    inner = _inner_tol(tol)
    c = math.log(2 * lengths.k - 1)
    lo, hi = c / max(lengths), c / min(lengths)

    def f(h):
        return spectral_radius(lim_matrix(lengths, h), tol=inner) - 1.0

    lo, hi = _widen(f, lo, hi, tol)
    root = brent(f, lo, hi, ftol=tol, maxiter=maxiter)
    if abs(root.fx) > tol:
        raise ConvergenceError(f"Perron root - 1 = {root.fx!r} above tol={tol!r} at h={root.x!r}")
    return EntropySolution(
        h=root.x,
        residual=theorem_sum(lengths, root.x) - 0.5,
        bracket_low=root.low,
        bracket_high=root.high,
        iterations=root.iterations,
        method="spectral",
    )


def positive_solution(lengths, h: float, tol: float = 1e-8) -> tuple[float, ...]:
    """Positive solution x (sum 1) of x = M(h) x; h must be the entropy.

    Raises ValidationError when the Perron root at h is not 1 within tol.
    """
    lengths = validate_lengths(lengths)
    pair = perron_pair(lim_matrix(lengths, h))
    if abs(pair.rho - 1.0) > tol:
        raise ValidationError(
            f"h={h!r} is not the entropy: Perron root {pair.rho!r} differs from 1 by more than {tol}"
        )
    return pair.vector
