import math

import mpmath
import numpy as np
import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from roseentropy import (
    ConvergenceError,
    ValidationError,
    lim_entropy,
    lim_matrix,
    perron_pair,
    positive_solution,
    rose_entropy,
    spectral_radius,
    theorem_sum,
)
from roseentropy.entropy import entropy_bracket
from roseentropy.roots import brent

# 50-digit mpmath values computed once (see test_frozen_values_reproduce)
THEOREM_SUM_12_AT_1 = 0.38814434339211267668911161687576693042847106120598
ENTROPY_12 = 0.75630761261596477367537718371542098900293196193921

lengths_st = st.lists(st.floats(min_value=0.1, max_value=10.0), min_size=2, max_size=8)


def test_frozen_values_reproduce():
    mpmath.mp.dps = 50
    s = mpmath.fsum(1 / (1 + mpmath.e ** mpmath.mpf(a)) for a in (1, 2))
    assert float(s) == pytest.approx(THEOREM_SUM_12_AT_1, abs=1e-16)
    h = mpmath.findroot(lambda h: 1 / (1 + mpmath.e**h) + 1 / (1 + mpmath.e ** (2 * h)) - 0.5, 0.75)
    assert float(h) == pytest.approx(ENTROPY_12, abs=1e-16)


# ------------------------------------------------------------ theorem_sum


def test_theorem_sum_examples():
    assert theorem_sum([1, 1], 0.0) == 1.0
    assert theorem_sum([1, 1], math.log(3)) == pytest.approx(0.5, abs=1e-15)
    assert theorem_sum([1, 2], 1.0) == pytest.approx(THEOREM_SUM_12_AT_1, abs=1e-15)


def test_theorem_sum_no_overflow():
    assert theorem_sum([1.0, 2.0], 1e4) == 0.0
    assert theorem_sum([700.0], 1.0) == pytest.approx(math.exp(-700.0), rel=1e-12)


def test_theorem_sum_rejects_negative_s():
    with pytest.raises(ValidationError):
        theorem_sum([1.0], -0.1)


@given(lengths_st, st.floats(min_value=0.0, max_value=20.0), st.floats(min_value=1e-3, max_value=5.0))
def test_theorem_sum_strictly_decreasing(lengths, s, ds):
    a, b = theorem_sum(lengths, s), theorem_sum(lengths, s + ds)
    # strict in exact arithmetic; floats can only tie once every term underflows
    assert b < a or b == a == 0.0


@given(lengths_st)
def test_theorem_sum_at_zero(lengths):
    assert theorem_sum(lengths, 0.0) == len(lengths) / 2


# ------------------------------------------------------------ rose_entropy


def test_rose_entropy_symmetric():
    sol = rose_entropy([1, 1])
    assert sol.h == pytest.approx(math.log(3), abs=1e-12)
    assert sol.method == "closed-form-root"


@pytest.mark.parametrize("a", [0.3, 1.0, 7.5])
def test_rose_entropy_rank_one(a):
    sol = rose_entropy([a])
    assert sol.h == 0.0
    assert sol.method == "degenerate"
    # single term < 1/2 for every h > 0, so no positive root exists
    assert theorem_sum([a], 1e-9) < 0.5


def test_rose_entropy_12():
    sol = rose_entropy([1, 2])
    assert abs(theorem_sum([1, 2], sol.h) - 0.5) <= 1e-12
    assert sol.h == pytest.approx(ENTROPY_12, abs=1e-11)
    assert sol.bracket_low <= sol.h <= sol.bracket_high


def test_rose_entropy_iteration_cap():
    with pytest.raises(ConvergenceError):
        rose_entropy([1, 2, 3.7], tol=1e-300, maxiter=3)


def test_rose_entropy_bad_tol():
    with pytest.raises(ValidationError):
        rose_entropy([1, 2], tol=0.0)


@settings(max_examples=200)
@given(lengths_st)
def test_bracket_and_residual(lengths):
    sol = rose_entropy(lengths)
    lo, hi = entropy_bracket(lengths)
    assert lo * (1 - 1e-12) <= sol.h <= hi * (1 + 1e-12)
    assert abs(sol.residual) <= 1e-12
    assert sol.bracket_low <= sol.h <= sol.bracket_high


@given(lengths_st, st.sampled_from([0.1, 0.5, 2.0, 10.0]))
def test_scaling_covariance(lengths, c):
    h = rose_entropy(lengths).h
    hc = rose_entropy([c * a for a in lengths]).h
    assert hc * c == pytest.approx(h, rel=1e-9)


@given(lengths_st, st.data())
def test_monotone_in_lengths(lengths, data):
    i = data.draw(st.integers(0, len(lengths) - 1))
    bumped = list(lengths)
    bumped[i] *= 1.01
    h = rose_entropy(lengths).h
    # the bump must move the logistic sum by more than the solver residual
    assume(theorem_sum(lengths, h) - theorem_sum(bumped, h) > 1e-10)
    assert rose_entropy(bumped).h < h


# ------------------------------------------------------------ brent


def test_brent_polynomial():
    root = brent(lambda x: x**3 - 2, 0.0, 2.0, ftol=1e-14)
    assert root.x == pytest.approx(2 ** (1 / 3), abs=1e-13)
    assert root.low <= root.x <= root.high


def test_brent_requires_sign_change():
    with pytest.raises(ValueError):
        brent(lambda x: x * x + 1, -1.0, 1.0, ftol=1e-12)


# ------------------------------------------------------------ lim matrix


def test_lim_matrix_examples():
    m = lim_matrix([1, 1], math.log(3))
    np.testing.assert_allclose(m.as_array(), [[1 / 3, 2 / 3], [2 / 3, 1 / 3]], atol=1e-15)
    m = lim_matrix([1, 2], 1.0)
    e = math.exp
    np.testing.assert_allclose(m.as_array(), [[e(-1), 2 * e(-2)], [2 * e(-1), e(-2)]], rtol=1e-15)


@given(lengths_st, st.floats(min_value=0.01, max_value=5.0))
def test_lim_matrix_structure(lengths, h):
    a = lim_matrix(lengths, h).as_array()
    assert np.all(a > 0)
    for j in range(len(lengths)):
        col = set(a[:, j].tolist())
        w = math.exp(-h * lengths[j])
        assert col <= {w, 2 * w}
        assert a[j, j] == w


def test_lim_matrix_decays():
    prev = None
    for h in [1, 2, 4, 8, 16, 32]:
        a = lim_matrix([0.5, 1.0, 3.0], h).as_array()
        if prev is not None:
            assert np.all(a < prev)
        prev = a
    assert prev.max() < 1e-6


def test_lim_matrix_rejects_nonpositive_h():
    with pytest.raises(ValidationError):
        lim_matrix([1, 1], 0.0)


# ------------------------------------------------------------ spectral radius


def test_spectral_radius_examples():
    assert spectral_radius([[1 / 3, 2 / 3], [2 / 3, 1 / 3]]) == pytest.approx(1.0, abs=1e-14)
    w = math.exp(-0.7 * 2.0)
    assert spectral_radius(lim_matrix([2.0], 0.7)) == pytest.approx(w, rel=1e-15)


def _charpoly_perron(rows):
    """Largest real root of the exact characteristic polynomial."""
    m = sympy.Matrix([[sympy.Rational(v) for v in r] for r in rows])
    lam = sympy.Symbol("lam")
    roots = sympy.Poly(m.charpoly(lam).as_expr(), lam).real_roots()
    return max(float(r.evalf(30)) for r in roots)


@pytest.mark.parametrize("seed", range(5))
def test_spectral_radius_vs_charpoly(seed):
    rng = np.random.default_rng(seed)
    rows = [[float(v) for v in r] for r in rng.uniform(0.05, 2.0, size=(3, 3))]
    pair = perron_pair(rows, tol=1e-14)
    assert pair.rho == pytest.approx(_charpoly_perron(rows), rel=1e-11)
    assert pair.lower <= pair.rho * (1 + 1e-12) and pair.rho <= pair.upper * (1 + 1e-12)
    assert all(v > 0 for v in pair.vector)
    assert pair.iterations > 0


def test_spectral_radius_rejects_nonpositive():
    with pytest.raises(ValidationError):
        spectral_radius([[1.0, 0.0], [1.0, 1.0]])


def test_power_iteration_cap():
    with pytest.raises(ConvergenceError):
        perron_pair([[1.0, 0.5, 0.2], [0.3, 0.4, 0.9], [0.6, 0.1, 0.8]], tol=1e-14, maxiter=2)


@given(lengths_st, st.floats(min_value=0.01, max_value=3.0))
def test_perron_root_decreasing_in_h(lengths, h):
    assert spectral_radius(lim_matrix(lengths, h * 1.05)) < spectral_radius(lim_matrix(lengths, h))


# ------------------------------------------------------------ lim entropy


def test_lim_entropy_examples():
    assert lim_entropy([1, 1]).h == pytest.approx(math.log(3), abs=1e-10)
    assert lim_entropy([1, 2]).h == pytest.approx(rose_entropy([1, 2]).h, abs=1e-8)
    sol = lim_entropy([3, 3, 3])
    assert sol.h == pytest.approx(math.log(5) / 3, abs=1e-10)
    assert sol.method == "spectral"


def test_lim_entropy_rank_one_rejected():
    with pytest.raises(ValidationError):
        lim_entropy([1.0])


@settings(max_examples=50, deadline=None)
@given(lengths_st)
def test_cross_solver(lengths):
    assert abs(rose_entropy(lengths).h - lim_entropy(lengths).h) < 1e-8


# ------------------------------------------------------------ positive solution


def test_positive_solution_symmetric():
    np.testing.assert_allclose(positive_solution([1, 1], math.log(3)), [0.5, 0.5], atol=1e-13)
    np.testing.assert_allclose(
        positive_solution([2, 2, 2], math.log(5) / 2), [1 / 3] * 3, atol=1e-13
    )


def test_positive_solution_12_line_identity():
    h = rose_entropy([1, 2]).h
    x = positive_solution([1, 2], h)
    assert (1 + math.exp(-h)) * x[0] == pytest.approx((1 + math.exp(-2 * h)) * x[1], abs=1e-12)
    # plug back into the system itself
    m = lim_matrix([1, 2], h).as_array()
    np.testing.assert_allclose(m @ np.array(x), x, atol=1e-12)


def test_positive_solution_wrong_h():
    with pytest.raises(ValidationError, match="not the entropy"):
        positive_solution([1, 2], 1.0)


@settings(max_examples=50, deadline=None)
@given(lengths_st)
def test_proof_identities(lengths):
    h = rose_entropy(lengths).h
    x = positive_solution(lengths, h)
    k = len(lengths)
    d = [math.exp(-h * a) for a in lengths]
    assert all(v > 0 for v in x)
    assert math.fsum(x) == pytest.approx(1.0, abs=1e-14)
    line = [(1 + di) * xi for di, xi in zip(d, x)]
    assert max(line) - min(line) < 1e-9
    assert abs(math.fsum((1 - (2 * k - 1) * di) * xi for di, xi in zip(d, x))) < 1e-9


@given(st.floats(min_value=0.1, max_value=10.0), st.integers(2, 12))
def test_equal_lengths_degenerate_bracket(a, k):
    # lower and upper analytic brackets coincide here
    assert rose_entropy([a] * k).h == pytest.approx(math.log(2 * k - 1) / a, rel=1e-14)
