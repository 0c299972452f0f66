"""Displacement certificates and collar-type length bounds.

For k free generators with displacements d_i and critical exponent delta,
sum_i 1/(1+e^{delta d_i}) <= 1/2. With equality at delta = entropy of the
rose with loop lengths d_i. Read with a fixed entropy h, the same
inequality bounds the length of the last of k independent loops from
below once the others are known.

Infeasible or vacuous bounds come back as None, not as exceptions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import CollarReport, GroupSample, ValidationError
from .entropy import DEFAULT_TOL, logistic_tail, rose_entropy, theorem_sum

DEFAULT_CERT_TOL = 1e-12


@dataclass(frozen=True)
class CertificateResult:
    sum_value: float
    satisfied: bool
    delta_lower_bound: float
    # log(2k-1)/delta; None when delta == 0
    max_displacement_bound: Optional[float]


def certify(sample: GroupSample, tol: float = DEFAULT_CERT_TOL) -> CertificateResult:
    """Check the displacement inequality for one basepoint.

    ``delta_lower_bound`` is the smallest exponent compatible with the
    inequality for these displacements (the rose entropy); some generator
    must move the basepoint by at least ``max_displacement_bound``.
    """
    if not isinstance(sample, GroupSample):
        raise ValidationError("certify expects a GroupSample")
    s = theorem_sum(sample.displacements, sample.delta)
    k = sample.k
    bound = math.log(2 * k - 1) / sample.delta if sample.delta > 0 else None
    return CertificateResult(
        sum_value=s,
        satisfied=s <= 0.5 + tol,
        delta_lower_bound=rose_entropy(sample.displacements, tol=DEFAULT_TOL).h,
        max_displacement_bound=bound,
    )


def _check_h(h: float) -> float:
    h = float(h)
    if not (h > 0 and math.isfinite(h)):
        raise ValidationError("h must be positive and finite")
    return h


def _check_priors(priors: Sequence[float]) -> list[float]:
    out = [float(p) for p in priors]
    if not out:
        raise ValidationError("need at least one prior length")
    for i, p in enumerate(out):
        if not (p > 0 and math.isfinite(p)):
            raise ValidationError(f"nonpositive or non-finite prior length at index {i}")
    return out


def remaining_budget(h: float, priors: Sequence[float]) -> float:
    """1/2 - sum over priors of 1/(1+e^{h l}).

    The smallest prior enters as tanh(h l/2)/2 = 1/2 - 1/(1+e^{h l}),
    which keeps full relative accuracy when h l is tiny.
    """
    h = _check_h(h)
    priors = sorted(_check_priors(priors))
    head = 0.5 * math.tanh(0.5 * h * priors[0])
    return head - math.fsum(logistic_tail(h * p) for p in priors[1:])


def exact_min_last_length(h: float, priors: Sequence[float]) -> Optional[float]:
    """Length l_k making the total logistic sum exactly 1/2, or None if infeasible.

    >>> round(exact_min_last_length(1.0, [math.log(3)]), 12) == round(math.log(3), 12)
    True
    """
    r = remaining_budget(h, priors)
    if r <= 0:
        return None
    if r < 0.25:
        # log(1/r - 1); r < 1/2 so the value is positive
        return (math.log1p(-r) - math.log(r)) / h
    # r close to 1/2: use the spent part c = 1/2 - r directly,
    # log(1/r - 1) = log1p(2c/(1/2 - c)), so tiny c still gives a positive length
    c = math.fsum(logistic_tail(h * p) for p in priors)
    return math.log1p(2.0 * c / (0.5 - c)) / h


def collar2_closed_form(h: float, l1: float) -> float:
    """k = 2 bound (1/h) log((e^{h l1} + 3)/(e^{h l1} - 1))."""
    h = _check_h(h)
    x = h * _check_priors([l1])[0]
    if x > 1.0:
        u = math.exp(-x)
        return math.log((1.0 + 3.0 * u) / (1.0 - u)) / h
    return (math.log(math.exp(x) + 3.0) - math.log(math.expm1(x))) / h


def collar2_asymptotic(h: float, l1: float) -> float:
    """(1/h) log(4/(h l1)). Vacuous (<= 0) once h l1 >= 4."""
    h = _check_h(h)
    l1 = _check_priors([l1])[0]
    return math.log(4.0 / (h * l1)) / h


def collark_asymptotic(h: float, priors: Sequence[float]) -> Optional[float]:
    """-(1/h) log(h l_1/4 - sum_{i=2}^{k-1} e^{-h l_i}) for ascending priors.

    Returns None when the log argument is nonpositive.
    """
    h = _check_h(h)
    priors = _check_priors(priors)
    if len(priors) < 2:
        raise ValidationError("collark_asymptotic needs at least two prior lengths")
    if any(b < a for a, b in zip(priors, priors[1:])):
        raise ValidationError("prior lengths must be sorted ascending")
    t = h * priors[0] / 4.0 - math.fsum(math.exp(-h * p) for p in priors[1:])
    if t <= 0:
        return None
    return -math.log(t) / h


def bcgs_bound(h: float, l1: float) -> float:
    """(1/h) log(1/(h l1)), the earlier curvature-free collar bound."""
    h = _check_h(h)
    l1 = _check_priors([l1])[0]
    return -math.log(h * l1) / h


@dataclass(frozen=True)
class HyperbolicCollar:
    holds: bool
    product: float
    expansion_bound: float


def hyperbolic_collar_check(l1: float, l2: float) -> HyperbolicCollar:
    """Evaluate sinh(l1/2) sinh(l2/2) > 1 and the expansion 2 log(4/l1)."""
    l1, l2 = _check_priors([l1, l2])
    product = math.sinh(0.5 * l1) * math.sinh(0.5 * l2)
    return HyperbolicCollar(
        holds=product > 1.0,
        product=product,
        expansion_bound=2.0 * math.log(4.0 / l1),
    )


def collar_report(h: float, priors: Sequence[float]) -> CollarReport:
    """All bounds on the last loop length for the given entropy and priors.

    Priors are sorted before use. The asymptotic bound is the two-loop
    formula when there is one prior, the k-loop formula otherwise.
    """
    h = _check_h(h)
    priors = sorted(_check_priors(priors))
    exact = exact_min_last_length(h, priors)
    if len(priors) == 1:
        asym = collar2_asymptotic(h, priors[0])
        bcgs = bcgs_bound(h, priors[0])
        vacuous = h * priors[0] >= 4.0
    else:
        asym = collark_asymptotic(h, priors)
        bcgs = None
        vacuous = asym is None
    plug = None
    if exact is not None:
        plug = math.fsum(logistic_tail(h * p) for p in priors + [exact]) - 0.5
    margin = exact - asym if exact is not None and asym is not None else None
    return CollarReport(
        h=h,
        prior_lengths=tuple(priors),
        exact_bound=exact,
        asymptotic_bound=asym,
        comparison_bcgs=bcgs,
        margin=margin,
        plug_back_residual=plug,
        vacuous=vacuous,
    )
