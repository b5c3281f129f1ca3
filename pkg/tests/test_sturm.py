import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from kacgeron.sturm import (
    count_real_roots_exact,
    integer_coefficients,
    sturm_variations,
)


def test_no_real_roots():
    assert count_real_roots_exact([1.0, 0.0, 1.0]) == 0  # x^2 + 1


def test_five_distinct_roots():
    # prod_{k=1..5} (x - k), ascending
    coeffs = np.poly(np.arange(1.0, 6.0))[::-1].tolist()
    assert count_real_roots_exact(coeffs) == 5


def test_distinct_root_semantics():
    assert count_real_roots_exact([1.0, -2.0, 1.0]) == 1  # (x-1)^2
    assert count_real_roots_exact([0.0, 0.0, 0.0, 1.0]) == 1  # x^3
    assert count_real_roots_exact([0.0, 0.0, 1.0, 0.0, 1.0]) == 1  # x^2 (x^2+1)


def test_constant_and_zero_polynomials():
    assert count_real_roots_exact([3.0]) == 0
    with pytest.raises(ValueError):
        count_real_roots_exact([0.0, 0.0])


def test_integer_conversion_is_exact():
    assert integer_coefficients([-0.25, 0.0, 1.5]) == [-1, 0, 6]
    # dyadic floats convert without rounding; content is stripped
    assert integer_coefficients([0.5, 0.5]) == [1, 1]
    with pytest.raises(ValueError):
        integer_coefficients([float("nan")])
    with pytest.raises(ValueError):
        integer_coefficients([float("inf"), 1.0])


def test_scaling_invariance():
    base = [-6.0, 1.0, 4.375, -0.5, 1.0]
    expect = count_real_roots_exact(base)
    for c in (3.0, -7.0, 0.5, 2.0 ** -40):
        assert count_real_roots_exact([c * v for v in base]) == expect


def test_against_numpy_roots():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        deg = int(rng.integers(1, 9))
        coeffs = rng.integers(-9, 10, size=deg + 1).astype(float)
        if coeffs[-1] == 0:
            coeffs[-1] = 1.0
        roots = np.roots(coeffs[::-1])
        reference = len({round(r.real, 9)
                         for r in roots
                         if abs(r.imag) <= 1e-9 * (1.0 + abs(r))})
        assert count_real_roots_exact(coeffs.tolist()) == reference


@given(st.lists(st.integers(min_value=-50, max_value=50),
                min_size=2, max_size=12))
def test_odd_degree_has_a_real_root(coeffs):
    if coeffs[-1] == 0:
        coeffs = coeffs + [1]
    if (len(coeffs) - 1) % 2 == 0:
        coeffs = coeffs + [0, 1] if coeffs[-1] != 0 else coeffs
    floats = [float(c) for c in coeffs]
    if (len(floats) - 1) % 2 == 1:
        assert count_real_roots_exact(floats) >= 1


def test_variations_need_nonconstant_input():
    assert sturm_variations([-2, 0, 1]) == 2  # x^2 - 2
    assert sturm_variations([1, 0, 1]) == 0   # x^2 + 1
