import numpy as np
import pytest
from hypothesis import given, strategies as st

from cauchyrect.complexfn import RationalFn, expand_roots, polynomial_roots, rational_poles
from cauchyrect.errors import EvaluationError


def _close(found, want, tol=1e-9):
    assert len(found) == len(want)
    for (p, m), (q, n) in zip(sorted(found, key=lambda t: (t[0].real, t[0].imag)),
                              sorted(want, key=lambda t: (t[0].real, t[0].imag))):
        assert abs(p - q) < tol and m == n


@pytest.mark.parametrize("den, want", [
    ([1, 0, 1], [(-1j, 1), (1j, 1)]),
    ([4, 0, 1], [(-2j, 1), (2j, 1)]),
    ([-1, -2j, 1], [(1j, 2)]),                 # (z - i)^2
    (expand_roots([0.5 + 1j] * 3), [(0.5 + 1j, 3)]),
    (expand_roots([2j] * 4), [(2j, 4)]),
    ([0, 0, 1, 1], [(0j, 2), (-1 + 0j, 1)]),
])
def test_known_poles(den, want):
    _close(rational_poles(RationalFn([1], den)), want)


def test_close_but_distinct_roots_stay_separate():
    roots = [1j, 1j + 1e-5]
    found = polynomial_roots(expand_roots(roots))
    assert [m for _, m in found] == [1, 1]


def test_against_numpy_roots():
    rng = np.random.default_rng(7)
    for _ in range(100):
        deg = int(rng.integers(2, 9))
        c = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
        found = [p for p, m in polynomial_roots(c) for _ in range(m)]
        ref = np.roots(c[::-1])
        assert len(found) == deg
        for z in ref:
            assert min(abs(z - p) for p in found) < 1e-7


@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=6))
def test_expand_then_find_recovers_roots(roots):
    # keep roots well separated so multiplicities are unambiguous
    uniq = []
    for z in roots:
        if all(abs(z - u) > 0.05 for u in uniq):
            uniq.append(z)
    found = polynomial_roots(expand_roots(uniq, lead=2.0))
    assert sum(m for _, m in found) == len(uniq)
    for z in uniq:
        assert min(abs(z - p) for p, _ in found) < 1e-7


def test_degree_gap_and_evaluation():
    f = RationalFn([0, 1], [1, 0, 1])
    assert (f.deg_num, f.deg_den, f.degree_gap) == (1, 2, 1)
    assert f(2.0) == pytest.approx(2 / 5)
    with pytest.raises(EvaluationError):
        f.evaluate(1j)


def test_partial_fractions_reconstruct():
    f = RationalFn([0, 1], [4, 0, 1])
    pf = f.simple_partial_fractions()
    z = 0.3 + 0.2j
    assert sum(A / (z - p) for p, A in pf) == pytest.approx(f(z))
    assert RationalFn([1], [-1, -2j, 1]).simple_partial_fractions() is None


def test_vertical_line_sup_is_an_upper_bound():
    f = RationalFn([0, 1], [1, 0, 1])
    for x in (0.5, 3.0, -10.0):
        ys = np.linspace(0, 100, 5001)
        assert np.max(np.abs(f(x + 1j * ys))) <= f.vertical_line_sup(x) + 1e-15


def test_bad_input():
    with pytest.raises(ValueError):
        RationalFn([1], [0, 0])
    with pytest.raises(ValueError):
        polynomial_roots([3.0])


def test_root_near_origin_with_tiny_constant_term():
    roots = [0.25, 7.462275192307875e-206, 0.375 + 0.3125j]
    found = polynomial_roots(expand_roots(roots, lead=2.0))
    assert len(found) == 3
    for z in roots:
        assert min(abs(z - p) for p, _ in found) < 1e-7
