import csv
import logging
from functools import lru_cache
from numbers import Number

import numpy as np
from scipy.signal import convolve

logger = logging.getLogger(__name__)


@lru_cache(maxsize=64)
def _index_grids(N, M):
    grids = np.indices((M + 1,) * N)
    degree = grids.sum(axis=0)
    grids.flags.writeable = False
    degree.flags.writeable = False
    return grids, degree


def total_degree(N, M):
    """
    Array of |m| over the dense (M+1)^N coefficient grid.
    """
    return _index_grids(N, M)[1]


def _frozen(coeffs, M):
    coeffs = np.array(coeffs, dtype=complex)
    coeffs[total_degree(coeffs.ndim, M) > M] = 0
    coeffs.flags.writeable = False
    return coeffs


class TruncatedSeries(object):
    """
    A power series in N variables known exactly up to total degree M.

    Coefficients are stored densely on the grid {0..M}^N with every entry of
    total degree above M held at zero. Addition and scaling are coefficientwise,
    products are truncated at the smaller of the two degrees.

    Do not instantiate directly, use :py:func:`truncated_series` or
    :py:func:`series_coefficients`.

    >>> ts = truncated_series(np.array([1.0, 2.0, 3.0]), 2)
    >>> ts[(1,)]
    (2+0j)
    >>> (ts * ts).coefficients().real
    array([ 1.,  4., 10.])
    """
    __slots__ = ('_coeffs', '_degree')

    # numpy scalars defer to the reflected operators
    __array_ufunc__ = None

    def __init__(self, coeffs, degree):
        self._coeffs = coeffs
        self._degree = degree

    @property
    def N(self):
        return self._coeffs.ndim

    @property
    def degree(self):
        return self._degree

    def coefficients(self):
        """
        Read-only dense coefficient array of shape (M+1,)*N.
        """
        return self._coeffs

    def __getitem__(self, m):
        m = tuple(m)
        if len(m) != self.N or any(k < 0 for k in m):
            raise IndexError('Invalid multi-index {0}'.format(m))

        if sum(m) > self._degree:
            raise IndexError('Multi-index {0} beyond degree {1}'.format(m, self._degree))

        return complex(self._coeffs[m])

    def items(self):
        """
        Iterate (multi-index, coefficient) pairs by total degree, lexicographically within a shell.
        """
        _, degree = _index_grids(self.N, self._degree)
        for s in range(self._degree + 1):
            for m in sorted(zip(*np.nonzero(degree == s))):
                m = tuple(int(k) for k in m)
                yield m, complex(self._coeffs[m])

    def truncate(self, degree):
        if degree > self._degree:
            raise ValueError('Cannot raise the degree of a truncated series')

        return TruncatedSeries(_frozen(self._coeffs[(slice(0, degree + 1),) * self.N], degree), degree)

    def _aligned(self, other):
        if self.N != other.N:
            raise ValueError('Series in {0} and {1} variables'.format(self.N, other.N))

        degree = min(self._degree, other._degree)
        return self.truncate(degree)._coeffs, other.truncate(degree)._coeffs, degree

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            a, b, degree = self._aligned(other)
            return TruncatedSeries(_frozen(a + b, degree), degree)

        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, TruncatedSeries):
            a, b, degree = self._aligned(other)
            return TruncatedSeries(_frozen(a - b, degree), degree)

        return NotImplemented

    def __neg__(self):
        return TruncatedSeries(_frozen(-self._coeffs, self._degree), self._degree)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            a, b, degree = self._aligned(other)
            product = convolve(a, b, method='direct')[(slice(0, degree + 1),) * self.N]
            return TruncatedSeries(_frozen(product, degree), degree)

        if isinstance(other, Number):
            return TruncatedSeries(_frozen(self._coeffs * other, self._degree), self._degree)

        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return self * (1.0 / other)

        return NotImplemented

    def max_abs(self, degree=None):
        """
        Largest coefficient magnitude over total degrees up to degree (default: all).
        """
        degree = self._degree if degree is None else degree
        if degree < 0:
            return 0.0

        mask = total_degree(self.N, self._degree) <= degree
        return float(np.max(np.abs(self._coeffs[mask])))

    def __repr__(self):
        return 'TruncatedSeries(N={0}, degree={1})'.format(self.N, self._degree)


def truncated_series(coeffs, degree):
    """
    Create a :py:class:`TruncatedSeries` from a dense array of shape (degree+1,)*N.
    """
    coeffs = np.asarray(coeffs)
    if coeffs.ndim < 1 or any(size != degree + 1 for size in coeffs.shape):
        raise ValueError('Coefficient array of shape {0} does not match degree {1}'.format(coeffs.shape, degree))

    return TruncatedSeries(_frozen(coeffs, degree), degree)


def zero_series(N, degree):
    return TruncatedSeries(_frozen(np.zeros((degree + 1,) * N), degree), degree)


def pochhammer(a, n):
    """
    Rising factorial a (a+1) ... (a+n-1).

    >>> pochhammer(0.5, 2)
    0.75
    >>> pochhammer(-3, 5)
    0
    >>> pochhammer(7, 0)
    1
    """
    result = 1
    for k in range(n):
        result *= a + k

    return result


def series_coefficients(hp, M):
    """
    Coefficients of F_{L,N}(alpha, beta, gamma; x) up to total degree M.

    The coefficient of x^m factors as A(|m|) * b_1(m_1) ... b_N(m_N); both factors are
    generated by their ratio recurrences.

    >>> from hgflow import hg_params
    >>> ts = series_coefficients(hg_params(2, 1, [1], [1], [2]), 3)
    >>> ts.coefficients().real
    array([1.        , 0.5       , 0.33333333, 0.25      ])
    """
    if M < 0:
        raise ValueError('Degree must be nonnegative')

    alpha, beta, gamma = hp.arrays()
    shell = np.ones(M + 1, dtype=complex)
    for s in range(M):
        shell[s + 1] = shell[s] * np.prod((alpha + s) / (gamma + s))

    coeffs = shell[total_degree(hp.N, M)]
    for i, b in enumerate(beta):
        axis = np.ones(M + 1, dtype=complex)
        for k in range(M):
            axis[k + 1] = axis[k] * (b + k) / (k + 1)

        shape = [1] * hp.N
        shape[i] = M + 1
        coeffs = coeffs * axis.reshape(shape)

    logger.debug('series_coefficients: N=%d, M=%d, %d coefficients', hp.N, M, coeffs.size)
    return TruncatedSeries(_frozen(coeffs, M), M)


def _monomials(x, M):
    x = np.asarray(x, dtype=complex)
    result = np.ones((), dtype=complex)
    for xi in x:
        powers = np.concatenate([[1.0 + 0j], np.cumprod(np.full(M, xi))])
        result = np.multiply.outer(result, powers)

    return result


def eval_series(ts, x):
    """
    Evaluate a truncated series at x, returning (value, tail bound).

    Shells of equal total degree are summed first and combined from the highest
    degree down. The tail bound extrapolates the last shell geometrically,
    |shell_M| * r / (1 - r) with r = max |x_i|, and is infinite when r >= 1.
    It is a heuristic, not a guarantee.

    >>> from hgflow import hg_params
    >>> ts = series_coefficients(hg_params(2, 1, [1], [1], [2]), 10)
    >>> eval_series(ts, [0])
    ((1+0j), 0.0)
    """
    x = np.asarray(x, dtype=complex)
    if x.shape != (ts.N,):
        raise ValueError('Expected {0} coordinates, got {1}'.format(ts.N, x.shape))

    M = ts.degree
    terms = (ts.coefficients() * _monomials(x, M)).ravel()
    degree = total_degree(ts.N, M).ravel()
    shells = (np.bincount(degree, weights=terms.real, minlength=M + 1)[:M + 1]
              + 1j * np.bincount(degree, weights=terms.imag, minlength=M + 1)[:M + 1])

    value = 0j
    for s in range(M, -1, -1):
        value += shells[s]

    r = float(np.max(np.abs(x)))
    if r >= 1:
        tail = float('inf')
    else:
        last = float(np.abs(terms[degree == M]).sum())
        tail = last * r / (1 - r)

    return complex(value), tail


def apply_euler(ts, i):
    """
    Euler operator delta_i = x_i d/dx_i, multiplying the coefficient at m by m_i.
    """
    _check_index(ts, i)
    grids, _ = _index_grids(ts.N, ts.degree)
    return TruncatedSeries(_frozen(ts.coefficients() * grids[i - 1], ts.degree), ts.degree)


def apply_theta_sum(ts):
    """
    D = delta_1 + ... + delta_N, multiplying the coefficient at m by |m|.
    """
    return TruncatedSeries(_frozen(ts.coefficients() * total_degree(ts.N, ts.degree), ts.degree), ts.degree)


def apply_theta_polynomial(ts, shifts):
    """
    Apply the product of (s + D) over s in shifts.
    """
    degree = total_degree(ts.N, ts.degree)
    factor = np.ones(degree.shape, dtype=complex)
    for s in shifts:
        factor = factor * (s + degree)

    return TruncatedSeries(_frozen(ts.coefficients() * factor, ts.degree), ts.degree)


def apply_partial(ts, i):
    """
    d/dx_i. The result is known up to degree M-1.
    """
    _check_index(ts, i)
    M = ts.degree
    if M < 1:
        raise ValueError('Differentiation needs a series of degree at least 1')

    axis = i - 1
    shifted = np.take(ts.coefficients(), np.arange(1, M + 1), axis=axis)
    shape = [1] * ts.N
    shape[axis] = M
    shifted = shifted * np.arange(1, M + 1).reshape(shape)
    index = [slice(0, M)] * ts.N
    return TruncatedSeries(_frozen(shifted[tuple(index)], M - 1), M - 1)


def multiply_by_x(ts, i):
    """
    Multiplication by x_i, truncated at the original degree.
    """
    _check_index(ts, i)
    M = ts.degree
    axis = i - 1
    result = np.zeros(ts.coefficients().shape, dtype=complex)
    target = [slice(None)] * ts.N
    source = [slice(None)] * ts.N
    target[axis] = slice(1, M + 1)
    source[axis] = slice(0, M)
    result[tuple(target)] = ts.coefficients()[tuple(source)]
    return TruncatedSeries(_frozen(result, M), M)


def _check_index(ts, i):
    if not 1 <= i <= ts.N:
        raise ValueError('Variable index {0} outside 1..{1}'.format(i, ts.N))


def pde_operator_terms(hp, M, i):
    """
    Return the two halves x_i (beta_i + delta_i) prod(alpha_k + D) F and
    delta_i prod(gamma_k - 1 + D) F of the hypergeometric operator applied to F.
    """
    alpha, beta, gamma = hp.arrays()
    F = series_coefficients(hp, M)
    raised = apply_theta_polynomial(F, alpha)
    raised = apply_euler(raised, i) + beta[i - 1] * raised
    first = multiply_by_x(raised, i)
    second = apply_euler(apply_theta_polynomial(F, gamma - 1), i)
    return first, second


def hg_pde_residual(hp, M, i):
    """
    The hypergeometric operator for index i applied to the truncated F_{L,N}.
    Every coefficient of total degree at most M-1 vanishes up to rounding.

    >>> from hgflow import hg_params
    >>> hg_pde_residual(hg_params(2, 1, [0.3], [0.7], [1.4]), 10, 1).max_abs(9) < 1e-14
    True
    """
    first, second = pde_operator_terms(hp, M, i)
    return first - second


def pde_residual_scale(hp, M, i):
    """
    Size of the operands of :py:func:`hg_pde_residual` through degree M-1, used to scale it.
    """
    first, second = pde_operator_terms(hp, M, i)
    return max(first.max_abs(M - 1), second.max_abs(M - 1), 1e-300)


def write_series_csv(ts, stream):
    """
    Write the rows m_1,...,m_N,re,im in shell order.
    """
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(['m_{0}'.format(i) for i in range(1, ts.N + 1)] + ['re', 'im'])
    for m, c in ts.items():
        writer.writerow(list(m) + [repr(c.real), repr(c.imag)])
