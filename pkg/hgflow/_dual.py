from numbers import Number

import numpy as np


class Dual(object):
    """
    Forward-mode dual number: a complex value together with its gradient with respect to
    a fixed set of variables.

    >>> x = Dual.variable(3.0, 0, 2)
    >>> y = Dual.variable(2.0, 1, 2)
    >>> z = x * y + x ** 2
    >>> z.value, z.tangent.real.tolist()
    ((15+0j), [8.0, 3.0])
    """
    __slots__ = ('value', 'tangent')

    # numpy scalars defer to the reflected operators
    __array_ufunc__ = None

    def __init__(self, value, tangent):
        self.value = complex(value)
        self.tangent = tangent

    @classmethod
    def variable(cls, value, index, size):
        tangent = np.zeros(size, dtype=complex)
        tangent[index] = 1
        return cls(value, tangent)

    @classmethod
    def constant(cls, value, size):
        return cls(value, np.zeros(size, dtype=complex))

    def __add__(self, other):
        if isinstance(other, Dual):
            return Dual(self.value + other.value, self.tangent + other.tangent)

        if isinstance(other, Number):
            return Dual(self.value + other, self.tangent)

        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.value, -self.tangent)

    def __sub__(self, other):
        if isinstance(other, (Dual, Number)):
            return self + (-other)

        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Dual):
            return Dual(self.value * other.value, self.tangent * other.value + other.tangent * self.value)

        if isinstance(other, Number):
            return Dual(self.value * other, self.tangent * other)

        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Dual):
            quotient = self.value / other.value
            return Dual(quotient, (self.tangent - other.tangent * quotient) / other.value)

        if isinstance(other, Number):
            return Dual(self.value / other, self.tangent / other)

        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Number):
            return Dual.constant(other, len(self.tangent)) / self

        return NotImplemented

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented

        result = Dual.constant(1, len(self.tangent))
        for _ in range(exponent):
            result = result * self

        return result

    def __repr__(self):
        return 'Dual({0!r}, {1!r})'.format(self.value, self.tangent)


def value_of(x):
    return x.value if isinstance(x, Dual) else complex(x)
