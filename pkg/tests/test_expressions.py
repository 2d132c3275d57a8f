import numpy as np
import pytest

from anosov_liouville.errors import ConfigError, ExpressionError
from anosov_liouville.expressions import evaluate, parse, sigma_field


@pytest.mark.parametrize("text, expected", [
    ("1 + 2 * 3", 7.0),
    ("-(1 - 3) / 4", 0.5),
    ("2 · 3", 6.0),
    ("exp(0) + cos(pi)", 0.0),
    ("+e", np.e),
])
def test_constants(text, expected):
    assert evaluate(text, {}) == pytest.approx(expected)


def test_arrays():
    t = np.linspace(0, 1, 5)
    np.testing.assert_allclose(evaluate("0.1 * sin(2 * pi * t)", {"t": t}), 0.1 * np.sin(2 * np.pi * t))


@pytest.mark.parametrize("text, match", [
    ("", "Empty"),
    ("1 +", "Invalid expression"),
    ("2 ** 3", "Unsupported operator"),
    ("log(t)", "Unsupported function"),
    ("sin(t, t)", "exactly one argument"),
    ("'a'", "Unsupported literal"),
    ("t[0]", "Unsupported syntax"),
    ("__import__('os')", "Unsupported function"),
])
def test_rejected(text, match):
    with pytest.raises(ExpressionError, match=match):
        parse(text)


def test_unknown_name():
    with pytest.raises(ExpressionError, match="Available names"):
        evaluate("x + 1", {"t": 0.0})


def test_division_by_zero():
    with pytest.raises(ExpressionError, match="can not be evaluated"):
        evaluate("1 / t", {"t": 0.0})


def test_is_config_error():
    """Bad expressions on the command line are configuration errors"""

    assert issubclass(ExpressionError, ConfigError)


def test_sigma_field(sol, sl2):
    sigma = sigma_field(sol, "0.1 * sin(2 * pi * t)")
    assert sigma.manifold is sol
    assert sigma.abs_max() == pytest.approx(0.1)
    assert sigma_field(sl2, "0.5").values == pytest.approx(0.5)
