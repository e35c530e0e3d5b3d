import numpy as np
import pytest

from projdiff.quadrature import QuadratureRule, make_quadrature, reciprocal_indices


def test_bounded_legendre_exactness():
    rule = make_quadrature("bounded-legendre", 5, a=0.0, b=1.0)
    assert abs(rule.integrate(lambda x: x ** 4) - 0.2) < 1e-14
    # degree 2n-1 = 9 still exact
    assert abs(rule.integrate(lambda x: x ** 9) - 0.1) < 1e-13


def test_bounded_weights_sum_to_length():
    rule = make_quadrature("bounded-legendre", 17, a=-2.0, b=3.0)
    assert abs(rule.weights.sum() - 5.0) < 1e-12


@pytest.mark.parametrize("kind", ["halfline-exp-mapped", "halfline-laguerre-like"])
def test_halfline_exponential_integrals(kind):
    rule = make_quadrature(kind, 60)
    assert abs(rule.integrate(np.exp(-rule.nodes)) - 1.0) < 1e-8
    assert abs(rule.integrate(np.exp(-2.0 * rule.nodes)) - 0.5) < 1e-8


def test_log_rule_scale_spread_integrand():
    # the log rule targets integrands spread over many scales
    rule = make_quadrature("halfline-log", 200, half_width=25.0)
    value = rule.integrate(1.0 / (1.0 + rule.nodes ** 2))
    assert abs(value - np.pi / 2.0) < 1e-8


def test_halfline_error_decreases_with_n():
    errs = []
    for n in (20, 40, 80):
        rule = make_quadrature("halfline-exp-mapped", n)
        errs.append(abs(rule.integrate(np.exp(-rule.nodes) * rule.nodes) - 1.0))
    assert errs[0] > errs[1] > errs[2]


def test_rule_invariants_enforced():
    with pytest.raises(ValueError):
        QuadratureRule(np.array([1.0, 1.0]), np.array([1.0, 1.0]), ("halfline",))
    with pytest.raises(ValueError):
        QuadratureRule(np.array([1.0, 2.0]), np.array([1.0, -1.0]), ("halfline",))
    with pytest.raises(ValueError):
        QuadratureRule(np.array([1.0, np.inf]), np.array([1.0, 1.0]), ("halfline",))


def test_unsupported_kind_and_params():
    with pytest.raises(ValueError):
        make_quadrature("chebyshev", 10)
    with pytest.raises(ValueError):
        make_quadrature("bounded-legendre", 10, a=0.0, b=1.0, bogus=3)
    with pytest.raises(ValueError):
        make_quadrature("bounded-legendre", 1, a=0.0, b=1.0)


def test_log_rule_reciprocal_symmetry():
    rule = make_quadrature("halfline-log", 40, half_width=10.0)
    sigma = reciprocal_indices(rule)
    assert np.allclose(rule.nodes[sigma] * rule.nodes, 1.0)
    shifted = make_quadrature("halfline-log", 40, half_width=10.0, center=1.0)
    with pytest.raises(ValueError):
        reciprocal_indices(shifted)
