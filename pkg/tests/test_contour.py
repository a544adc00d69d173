import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cauchyrect.complexfn import RationalFn, SeriesEnvelope, eval_expr, parse_expr
from cauchyrect.complexfn.product import EnvelopeProduct
from cauchyrect.contour import (Rectangle, integrate_circle, integrate_path, integrate_rectangle,
                                integrate_segment, semicircle_integral, two_path_difference,
                                vertical_tail_integral)
from cauchyrect.errors import PoleOnContourError

QUIZ = parse_expr("exp(exp(i*z))*z/(z^2+1)")


def test_segment_of_constant():
    assert integrate_segment(lambda z: np.ones_like(z), 0, 1 + 1j, 1e-12).value == pytest.approx(1 + 1j)


def test_segment_reversal_negates_exactly():
    f = parse_expr("sin(z)*exp(z)")
    a, b = 0.3 - 1j, -2 + 0.5j
    assert integrate_segment(f, a, b, 1e-12).value == -integrate_segment(f, b, a, 1e-12).value


def test_quarter_turn_of_reciprocal():
    # 1/z from 1 to i along the straight segment: log(i) - log(1)
    v = integrate_segment(lambda z: 1 / z, 1, 1j, 1e-13).value
    assert v == pytest.approx(1j * math.pi / 2, abs=1e-13)


def test_square_and_circle_around_origin():
    sq = integrate_rectangle(lambda z: 1 / z, Rectangle(-1, 1, -1, 1), 1e-12)
    assert sq.value == pytest.approx(2j * math.pi, abs=1e-12)
    assert integrate_circle(lambda z: 1 / z, 0, 1) == pytest.approx(2j * math.pi, abs=1e-13)


def test_quiz_rectangle():
    rect = Rectangle(-5, 5, 0.1, 6)
    v = integrate_rectangle(QUIZ, rect, 1e-12).value
    assert v == pytest.approx(1j * math.pi * math.exp(1 / math.e), abs=1e-11)


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(0.2, 3), st.floats(0.2, 3))
def test_holomorphic_two_paths_agree(x, y, w, h):
    f = parse_expr("exp(z)*cos(2*z)+z^3")
    rect = Rectangle(x, x + w, y, y + h)
    d = two_path_difference(f, rect, 1e-12)
    # |f| reaches ~1e6 near y = 6, so compare against the size of the integrand
    scale = max(1.0, max(abs(eval_expr(f, c)) for c in rect.corners) * 2 * (w + h))
    assert abs(d) < 1e-10 * scale


def test_two_paths_differ_by_enclosed_pole():
    f = RationalFn([1], [-(0.5 + 0.5j), 1])
    d = two_path_difference(f, Rectangle(0, 1, 0, 1), 1e-12)
    assert d == pytest.approx(2j * math.pi, abs=1e-10)


def test_pole_on_contour_refused():
    f = RationalFn([1], [-(0.5 + 0j), 1])
    with pytest.raises(PoleOnContourError):
        integrate_rectangle(f, Rectangle(0, 1, 0, 1), 1e-10)
    with pytest.raises(PoleOnContourError):
        integrate_circle(f, 0, 0.5)


def test_semicircle_shrinks():
    f = EnvelopeProduct(SeriesEnvelope.exp_a_minus_one(1, 1), RationalFn([0, 1], [1, 0, 1]))
    mags = [abs(semicircle_integral(f, R, 1e-10).value) for R in (10, 40, 160)]
    assert mags[0] > mags[1] > mags[2]


def test_vertical_tail_bound():
    f1 = SeriesEnvelope.exp_a_minus_one(1, 1)
    f2 = RationalFn([0, 1], [1, 0, 1])
    res = vertical_tail_integral(f1, f2, 100.0, 1e-10)
    assert abs(res.value) <= f2.vertical_line_sup(100.0) * f1.abs_sum / f1.b


def test_rectangle_validation_and_path():
    with pytest.raises(ValueError):
        Rectangle(1, 0, 0, 1)
    with pytest.raises(ValueError):
        integrate_path(lambda z: z, [0], 1e-10)
    assert Rectangle(0, 1, 0, 1).contains(0.5 + 0.5j)


def test_semicircle_large_radius_boundary_layer():
    f = EnvelopeProduct(SeriesEnvelope.exp_a_minus_one(1, 1), RationalFn([0, 1], [1, 0, 1]))
    R = 1e4

    def along(t):
        z = R * np.exp(1j * t)
        return f(z) * 1j * z

    from cauchyrect.quadrature import gk_chunks
    ref = np.sum(gk_chunks(along, np.linspace(0, math.pi, 40001), 1e-15).values)
    assert semicircle_integral(f, R, 1e-12).value == pytest.approx(ref, abs=1e-12)
