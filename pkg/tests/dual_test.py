import numpy as np
import pytest
from hypothesis import given, strategies as st

from hgflow._dual import Dual, value_of

finite = st.floats(min_value=-10, max_value=10, allow_nan=False)


def test_product_rule():
    x, y = Dual.variable(3.0, 0, 2), Dual.variable(2.0, 1, 2)
    z = x * y + x ** 2
    assert z.value == 15
    assert z.tangent.tolist() == [8, 3]


def test_quotient_rule():
    x, y = Dual.variable(3.0, 0, 2), Dual.variable(2.0, 1, 2)
    z = x / y
    assert z.value == 1.5
    assert np.allclose(z.tangent, [0.5, -0.75])
    assert np.allclose((1 / y).tangent, [0, -0.25])


def test_mixed_with_numpy_scalars():
    x = Dual.variable(2j, 0, 1)
    assert (np.complex128(3) * x).tangent[0] == 3
    assert (np.float64(1) - x).tangent[0] == -1
    assert value_of(x + 1) == 1 + 2j
    assert value_of(4) == 4


def test_unsupported_power():
    with pytest.raises(TypeError):
        Dual.variable(1, 0, 1) ** 0.5


@given(finite, finite)
def test_polynomial_derivative(a, b):
    x = Dual.variable(a, 0, 1)
    p = 3 * x ** 3 - b * x + 1
    assert p.value == pytest.approx(3 * a ** 3 - b * a + 1, rel=1e-12, abs=1e-9)
    assert p.tangent[0] == pytest.approx(9 * a ** 2 - b, rel=1e-12, abs=1e-9)
