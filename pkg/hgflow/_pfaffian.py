import logging
from numbers import Number

import numpy as np
from pyrsistent import PClass, PVector, field, pmap, pvector

from hgflow._errors import PathTooClose, SingularPoint
from hgflow._integrate import integrate_segment
from hgflow._parallel import ordered_map
from hgflow._params import complex_vector
from hgflow._series import eval_series, series_coefficients

logger = logging.getLogger(__name__)

SINGULAR_TOLERANCE = 1e-10
PATH_CLEARANCE = 1e-6


def rank(L, N):
    return N * (L - 1) + 1


def _read_only(values):
    values = np.array(values, dtype=complex)
    values.flags.writeable = False
    return values


class SolutionVector(object):
    """
    The vector (y_0, y_1^(1), ..., y_{L-1}^(1), y_1^(2), ..., y_{L-1}^(N)) of length N(L-1)+1.

    Do not instantiate directly, use :py:func:`solution_vector` or
    :py:meth:`SolutionVector.from_components`.

    >>> v = solution_vector(3, 2, [1, 2, 3, 4, 5])
    >>> v.component(2, 1), v.component(1, 2)
    ((3+0j), (4+0j))
    >>> (2 * v).y0
    (2+0j)
    """
    __slots__ = ('_data', '_L', '_N')

    __array_ufunc__ = None

    def __init__(self, data, L, N):
        self._data = data
        self._L = L
        self._N = N

    @classmethod
    def from_components(cls, y0, y):
        """
        Build from y_0 and the (L-1) x N array holding y_n^(i) at [n-1, i-1].
        """
        y = np.asarray(y, dtype=complex)
        if y.ndim != 2:
            raise ValueError('y must be an (L-1) x N array')

        return cls(_read_only(np.concatenate([[y0], y.T.ravel()])), y.shape[0] + 1, y.shape[1])

    @property
    def L(self):
        return self._L

    @property
    def N(self):
        return self._N

    @property
    def y0(self):
        return complex(self._data[0])

    @property
    def y(self):
        return self._data[1:].reshape(self._N, self._L - 1).T

    def component(self, n, i=None):
        """
        y_n^(i) for n >= 1, or y_0 when n is 0.
        """
        if n == 0:
            return self.y0

        if not (1 <= n < self._L and 1 <= i <= self._N):
            raise IndexError('No component y_{0}^({1})'.format(n, i))

        return complex(self._data[1 + (i - 1) * (self._L - 1) + (n - 1)])

    def as_array(self):
        return np.array(self._data)

    def __len__(self):
        return len(self._data)

    def __add__(self, other):
        if isinstance(other, SolutionVector):
            return SolutionVector(_read_only(self._data + other._data), self._L, self._N)

        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, SolutionVector):
            return SolutionVector(_read_only(self._data - other._data), self._L, self._N)

        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Number):
            return SolutionVector(_read_only(self._data * other), self._L, self._N)

        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __repr__(self):
        return 'solution_vector({0}, {1}, {2})'.format(self._L, self._N, list(self._data))


def solution_vector(L, N, values):
    """
    Create a :py:class:`SolutionVector` from its flattened values.
    """
    data = _read_only(values)
    if data.shape != (rank(L, N),):
        raise ValueError('Expected {0} values, got {1}'.format(rank(L, N), data.shape))

    return SolutionVector(data, L, N)


class PfaffianConnection(object):
    """
    The constant matrices E_i, F_i and G_ij (i < j) of the Pfaffian system

        dy = sum_i (E_i dlog x_i + F_i dlog(x_i - 1)) y + sum_{i<j} G_ij dlog(x_i - x_j) y

    Do not instantiate directly, use :py:func:`build_connection`.
    """
    __slots__ = ('hp', 'E', 'F', 'G')

    def __init__(self, hp, E, F, G):
        self.hp = hp
        self.E = E
        self.F = F
        self.G = G

    @property
    def size(self):
        return rank(self.hp.L, self.hp.N)

    @property
    def a(self):
        alpha, _, gamma = self.hp.arrays()
        return alpha - gamma

    def b(self, i):
        _, beta, gamma = self.hp.arrays()
        return beta.sum() - beta[i - 1] - gamma

    def pair(self, i, j):
        """
        G for the unordered pair {i, j}.
        """
        return self.G[(min(i, j), max(i, j))]


def _block(L, i):
    start = 1 + (i - 1) * (L - 1)
    return slice(start, start + L - 1)


def build_connection(hp):
    """
    Assemble E_i, F_i and G_ij from a_n = alpha_n - gamma_n and
    b_{i,n} = sum_{j != i} beta_j - gamma_n.

    >>> from hgflow import hg_params
    >>> pc = build_connection(hg_params(2, 1, [0.5], [0.25], [1.5]))
    >>> pc.E[0].real
    array([[ 0. ,  0. ],
           [ 1. , -1.5]])
    >>> pc.F[0].real
    array([[-0.25,  0.25],
           [-1.  ,  1.  ]])
    """
    L, N = hp.L, hp.N
    alpha, beta, gamma = hp.arrays()
    a = alpha - gamma
    K = rank(L, N)
    lower = np.tril(np.ones((L - 1, L - 1)), -1)
    E, F = [], []
    for i in range(1, N + 1):
        rows = _block(L, i)
        b = beta.sum() - beta[i - 1] - gamma
        Ei = np.zeros((K, K), dtype=complex)
        Ei[rows, 0] = -a
        for j in range(1, N + 1):
            if j != i:
                Ei[rows, _block(L, j)] = -beta[j - 1] * np.eye(L - 1)
        Ei[rows, rows] = a[:, None] * lower + np.diag(b)
        E.append(_read_only(Ei))

        Fi = np.zeros((K, K), dtype=complex)
        Fi[0, 0] = -beta[i - 1]
        Fi[0, rows] = beta[i - 1]
        Fi[rows, 0] = a
        Fi[rows, rows] = -a[:, None] * np.ones(L - 1)
        F.append(_read_only(Fi))

    G = {}
    identity = np.eye(L - 1)
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            Gij = np.zeros((K, K), dtype=complex)
            Gij[_block(L, i), _block(L, i)] = -beta[j - 1] * identity
            Gij[_block(L, i), _block(L, j)] = beta[j - 1] * identity
            Gij[_block(L, j), _block(L, i)] = beta[i - 1] * identity
            Gij[_block(L, j), _block(L, j)] = -beta[i - 1] * identity
            G[(i, j)] = _read_only(Gij)

    return PfaffianConnection(hp, pvector(E), pvector(F), pmap(G))


def locus_distance(x):
    """
    Euclidean distance from x to {x_i = 0} u {x_i = 1} u {x_i = x_j}.
    """
    x = np.asarray(x, dtype=complex)
    distance = float(np.min(np.minimum(np.abs(x), np.abs(x - 1))))
    for i in range(len(x)):
        for j in range(i + 1, len(x)):
            distance = min(distance, abs(x[i] - x[j]) / np.sqrt(2))

    return distance


def _check_point(x, tolerance=SINGULAR_TOLERANCE):
    x = np.asarray(x, dtype=complex)
    distance = locus_distance(x)
    if distance < tolerance:
        raise SingularPoint(distance)

    return x


def omega_at(pc, x):
    """
    The coefficient matrices Omega_i(x), with dy = sum_i Omega_i(x) y dx_i.
    """
    x = _check_point(x)
    N = pc.hp.N
    omegas = []
    for i in range(1, N + 1):
        xi = x[i - 1]
        omega = pc.E[i - 1] / xi + pc.F[i - 1] / (xi - 1)
        for j in range(1, N + 1):
            if j != i:
                omega = omega + pc.pair(i, j) / (xi - x[j - 1])
        omegas.append(omega)

    return omegas


def _omega_partial(pc, x, i, j):
    # d Omega_j / d x_i for i != j: only G_ij / (x_j - x_i) depends on x_i
    return pc.pair(i, j) / (x[j - 1] - x[i - 1]) ** 2


def scalar_derivative(hp, x, y):
    """
    The derivatives dy/dx_i for i = 1..N, read off the scalar form of the Pfaffian system:

        (x_i - 1) dy_0/dx_i = beta_i (-y_0 + sum_m y_m^(i))
        (x_i - x_j) dy_n^(j)/dx_i = beta_i (y_n^(i) - y_n^(j))
        x_i dy_n^(i)/dx_i = -alpha_n y_n^(i) + (gamma_n - alpha_n) sum_{m > n} y_m^(i)
                            + (gamma_n - alpha_n) / (x_i - 1) (-y_0 + sum_m y_m^(i))
                            + sum_{j != i} beta_j x_j / (x_i - x_j) (y_n^(j) - y_n^(i))
    """
    x = _check_point(x)
    alpha, beta, gamma = hp.arrays()
    Y = y.y
    y0 = y.y0
    derivatives = []
    for i in range(1, hp.N + 1):
        xi = x[i - 1]
        own = Y[:, i - 1]
        total = own.sum() - y0
        d0 = beta[i - 1] * total / (xi - 1)
        dY = np.zeros(Y.shape, dtype=complex)
        tails = np.concatenate([np.cumsum(own[::-1])[::-1][1:], [0]])
        dY[:, i - 1] = -alpha * own + (gamma - alpha) * tails + (gamma - alpha) * total / (xi - 1)
        for j in range(1, hp.N + 1):
            if j == i:
                continue
            xj = x[j - 1]
            dY[:, i - 1] += beta[j - 1] * xj / (xi - xj) * (Y[:, j - 1] - own)
            dY[:, j - 1] = beta[i - 1] * (own - Y[:, j - 1]) / (xi - xj)
        dY[:, i - 1] /= xi
        derivatives.append(SolutionVector.from_components(d0, dY))

    return derivatives


def _inf_norm(matrix):
    return float(np.max(np.sum(np.abs(matrix), axis=1)))


def integrability_residual(pc, x, relative=False):
    """
    max over i < j of || d_i Omega_j - d_j Omega_i + Omega_j Omega_i - Omega_i Omega_j ||,
    the row-sum norm. With relative set each pair is divided by ||Omega_i|| ||Omega_j||.

    The product order Omega_j Omega_i - Omega_i Omega_j belongs to the column form
    dy = sum_i Omega_i y dx_i used throughout. Omega_i Omega_j - Omega_j Omega_i is the
    condition for the row form dy = y Omega and need not vanish here.
    """
    omegas = omega_at(pc, x)
    x = np.asarray(x, dtype=complex)
    N = pc.hp.N
    residual = 0.0
    for i in range(1, N + 1):
        for j in range(i + 1, N + 1):
            Oi, Oj = omegas[i - 1], omegas[j - 1]
            curvature = _omega_partial(pc, x, i, j) - _omega_partial(pc, x, j, i) + Oj.dot(Oi) - Oi.dot(Oj)
            value = _inf_norm(curvature)
            if relative:
                value /= max(_inf_norm(Oi) * _inf_norm(Oj), 1e-300)
            residual = max(residual, value)

    return residual


def _shifted_component(hp, n, i):
    alpha, beta, gamma = hp.arrays()
    coefficient = np.prod(alpha[:n - 1]) * (gamma[n - 1] - alpha[n - 1]) / np.prod(gamma[:n])
    shifted = hp.set(alpha=[a + 1 if k < n - 1 else a for k, a in enumerate(alpha)],
                     beta=[b + 1 if k == i - 1 else b for k, b in enumerate(beta)],
                     gamma=[g + 1 if k < n else g for k, g in enumerate(gamma)])
    return complex(coefficient), shifted


def holomorphic_solution(hp, M):
    """
    The holomorphic solution vector at the origin, normalized so that y_0 = F_{L,N}, as a
    list of truncated series in flattened order. Component y_n^(i) is

        alpha_1...alpha_{n-1} (gamma_n - alpha_n) / (gamma_1...gamma_n)
            * F(alpha_1+1, ..., alpha_{n-1}+1, beta_i+1, gamma_1+1, ..., gamma_n+1)
    """
    slots = [(n, i) for i in range(1, hp.N + 1) for n in range(1, hp.L)]
    shifted = [_shifted_component(hp, n, i) for n, i in slots]

    def build(item):
        coefficient, params = item
        return series_coefficients(params, M) * coefficient

    return [series_coefficients(hp, M)] + ordered_map(build, shifted)


def evaluate_solution(components, x):
    """
    Evaluate a list of truncated series, as returned by :py:func:`holomorphic_solution`, at x.
    """
    N = components[0].N
    L = (len(components) - 1) // N + 1
    return solution_vector(L, N, [eval_series(ts, x)[0] for ts in components])


def holomorphic_solution_at(hp, x, M):
    return evaluate_solution(holomorphic_solution(hp, M), x)


def _serialize_waypoints(_, waypoints):
    return [[[v.real, v.imag] for v in point] for point in waypoints]


class PathSpec(PClass):
    """
    A piecewise linear path in C^N through the given waypoints, required to stay at least
    clearance away from the singular locus.
    """
    waypoints = field(type=PVector, mandatory=True,
                      factory=lambda ws: pvector(complex_vector(w) for w in ws),
                      serializer=_serialize_waypoints)
    clearance = field(type=float, initial=PATH_CLEARANCE, factory=float,
                      invariant=lambda c: (c > 0, 'clearance must be positive'))

    __invariant__ = lambda p: ((len(p.waypoints) >= 1, 'a path needs a waypoint'),
                               (len(set(len(w) for w in p.waypoints)) <= 1, 'waypoints must share a dimension'))

    @property
    def segments(self):
        points = [np.array(w, dtype=complex) for w in self.waypoints]
        return list(zip(points[:-1], points[1:]))


def path_spec(waypoints, clearance=PATH_CLEARANCE):
    return PathSpec(waypoints=waypoints, clearance=clearance)


def _closest_approach(a, d):
    # min over s in [0, 1] of |a + s d|
    norm = abs(d) ** 2
    s = 0.0 if norm == 0 else min(max(-(a * np.conj(d)).real / norm, 0.0), 1.0)
    return abs(a + s * d)


def segment_distance(start, end):
    """
    Smallest distance between the segment [start, end] and the singular locus.
    """
    d = end - start
    distance = float('inf')
    for k in range(len(start)):
        distance = min(distance, _closest_approach(start[k], d[k]), _closest_approach(start[k] - 1, d[k]))
        for j in range(k + 1, len(start)):
            distance = min(distance, _closest_approach(start[k] - start[j], d[k] - d[j]) / np.sqrt(2))

    return distance


def validate_path(path):
    """
    Raise :py:class:`PathTooClose` for the first segment coming closer to the locus than
    path.clearance.
    """
    segments = path.segments or [(np.array(path.waypoints[0], dtype=complex),) * 2]
    for index, (start, end) in enumerate(segments):
        distance = segment_distance(start, end)
        if distance < path.clearance:
            raise PathTooClose(index, distance)

    return path


def _segment_field(pc, start, end):
    direction = end - start

    def rhs(s, y):
        omegas = omega_at(pc, start + s * direction)
        result = np.zeros(len(y), dtype=complex)
        for k, omega in enumerate(omegas):
            if direction[k] != 0:
                result += direction[k] * omega.dot(y)
        return result

    return rhs


def continue_solution(pc, path, y0, tol):
    """
    Analytic continuation of a solution vector along path, integrating dy/ds = sum_i Omega_i y dx_i/ds
    segment by segment with local tolerance tol.
    """
    if tol <= 0:
        raise ValueError('Tolerance must be positive')

    validate_path(path)
    y = y0.as_array()
    for index, (start, end) in enumerate(path.segments):
        if np.all(start == end):
            continue
        logger.debug('continue_solution: segment %d', index)
        y = integrate_segment(_segment_field(pc, start, end), y, tol)

    return SolutionVector(_read_only(y), y0.L, y0.N)


def sample_path(pc, path, y0, tol, samples):
    """
    Continue y0 along path and return rows (s, x, y) with s running over [0, number of segments],
    samples rows per segment after the initial one.
    """
    if samples < 1:
        raise ValueError('At least one sample per segment')

    validate_path(path)
    start_point = np.array(path.waypoints[0], dtype=complex)
    rows = [(0.0, start_point, y0)]
    y = y0.as_array()
    for index, (start, end) in enumerate(path.segments):
        fractions = np.linspace(0.0, 1.0, samples + 1)[1:]
        if np.all(start == end):
            values = [y] * samples
        else:
            values = integrate_segment(_segment_field(pc, start, end), y, tol, samples=samples)
        for fraction, value in zip(fractions, values):
            rows.append((index + float(fraction), start + fraction * (end - start),
                         SolutionVector(_read_only(value), y0.L, y0.N)))
        y = values[-1]

    return rows
