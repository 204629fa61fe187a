import json
import logging

import numpy as np
from pyrsistent import PClass, PVector, field, pvector

from hgflow._errors import ResonantGamma

logger = logging.getLogger(__name__)

CONSTRAINT_TOLERANCE = 1e-12
RESONANCE_TOLERANCE = 1e-12
GENERIC_MARGIN = 0.05


def to_complex(value):
    """
    Coerce a number or an [re, im] pair to a Python complex.

    >>> to_complex(0.5)
    (0.5+0j)
    >>> to_complex([1, -2])
    (1-2j)
    """
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError('Complex pairs must have two entries, got {0!r}'.format(value))
        return complex(float(value[0]), float(value[1]))

    return complex(value)


def complex_vector(values):
    return pvector(to_complex(v) for v in values)


def complex_array(values):
    return np.array([complex(v) for v in values], dtype=complex)


def serialize_complex_vector(_, values):
    return [[v.real, v.imag] for v in values]


def is_resonant(value, tol=RESONANCE_TOLERANCE):
    """
    True if value lies within tol of a nonpositive integer.

    >>> is_resonant(-2 + 1e-14)
    True
    >>> is_resonant(0.5)
    False
    """
    value = complex(value)
    nearest = round(value.real)
    return nearest <= 0 and abs(value - nearest) <= tol


def _gamma_vector(values):
    gamma = complex_vector(values)
    for index, value in enumerate(gamma, start=1):
        if is_resonant(value):
            raise ResonantGamma(index, value)

    return gamma


def _distance_to_integers(value):
    value = complex(value)
    return abs(value - round(value.real))


class HGParams(PClass):
    """
    Parameters (alpha, beta, gamma) of F_{L,N}.

    Complex entries may be given as numbers or [re, im] pairs. A gamma that is a
    nonpositive integer raises :py:class:`ResonantGamma` on construction.

    >>> hp = hg_params(2, 1, alpha=[1], beta=[1], gamma=[2])
    >>> hp.alpha
    pvector([(1+0j)])
    >>> hp.serialize()['gamma']
    [[2.0, 0.0]]
    """
    L = field(type=int, mandatory=True, invariant=lambda L: (L >= 2, 'L must be at least 2'))
    N = field(type=int, mandatory=True, invariant=lambda N: (N >= 1, 'N must be at least 1'))
    alpha = field(type=PVector, mandatory=True, factory=complex_vector, serializer=serialize_complex_vector)
    beta = field(type=PVector, mandatory=True, factory=complex_vector, serializer=serialize_complex_vector)
    gamma = field(type=PVector, mandatory=True, factory=_gamma_vector, serializer=serialize_complex_vector)

    __invariant__ = lambda p: ((len(p.alpha) == p.L - 1, 'alpha must have L-1 entries'),
                               (len(p.beta) == p.N, 'beta must have N entries'),
                               (len(p.gamma) == p.L - 1, 'gamma must have L-1 entries'))

    def arrays(self):
        """
        Return (alpha, beta, gamma) as complex numpy arrays.
        """
        return complex_array(self.alpha), complex_array(self.beta), complex_array(self.gamma)


def _check_constraints(sp):
    e_sum = sum(sp.e) - (sp.L - 1) / 2.0
    fuchs = sum(sp.kappa) - sum(sp.theta)
    return ((abs(e_sum) <= CONSTRAINT_TOLERANCE, 'sum of e must equal (L-1)/2'),
            (abs(fuchs) <= CONSTRAINT_TOLERANCE, 'sum of kappa must equal sum of theta'))


class SystemParams(PClass):
    """
    Constants (e, kappa, theta) of the Hamiltonian system and of the Fuchsian system.

    theta holds theta_0..theta_N. Both linear constraints are checked on construction;
    values are never projected onto the constraint set.
    """
    L = field(type=int, mandatory=True, invariant=lambda L: (L >= 2, 'L must be at least 2'))
    N = field(type=int, mandatory=True, invariant=lambda N: (N >= 1, 'N must be at least 1'))
    e = field(type=PVector, mandatory=True, factory=complex_vector, serializer=serialize_complex_vector)
    kappa = field(type=PVector, mandatory=True, factory=complex_vector, serializer=serialize_complex_vector)
    theta = field(type=PVector, mandatory=True, factory=complex_vector, serializer=serialize_complex_vector)

    def __invariant__(self):
        lengths = ((len(self.e) == self.L, 'e must have L entries'),
                   (len(self.kappa) == self.L, 'kappa must have L entries'),
                   (len(self.theta) == self.N + 1, 'theta must have N+1 entries'))
        if not all(ok for ok, _ in lengths):
            return lengths

        return lengths + _check_constraints(self)

    def arrays(self):
        """
        Return (e, kappa, theta) as complex numpy arrays.
        """
        return complex_array(self.e), complex_array(self.kappa), complex_array(self.theta)


def hg_params(L, N, alpha, beta, gamma):
    """
    Create an :py:class:`HGParams`.
    """
    return HGParams(L=L, N=N, alpha=alpha, beta=beta, gamma=gamma)


def system_params(L, N, e, kappa, theta):
    """
    Create a :py:class:`SystemParams`. theta may hold theta_1..theta_N only, in which
    case theta_0 is fixed by Fuchs' relation.

    >>> sp = system_params(2, 1, e=[0, 0.5], kappa=[0.25, 0.5], theta=[0.25])
    >>> sp.theta
    pvector([(0.5+0j), (0.25+0j)])
    """
    theta = [to_complex(t) for t in theta]
    if len(theta) == N:
        kappa = [to_complex(k) for k in kappa]
        theta = [sum(kappa) - sum(theta)] + theta

    return SystemParams(L=L, N=N, e=e, kappa=kappa, theta=theta)


def map_system_to_hg(sp):
    """
    Parameter dictionary alpha_n = e_n - e_0, beta_i = -theta_i, gamma_n = e_n - e_0 - kappa_n.

    >>> sp = system_params(2, 1, e=[0, 0.5], kappa=[0.25, 0.25], theta=[0.25])
    >>> hp = map_system_to_hg(sp)
    >>> hp.alpha, hp.beta, hp.gamma
    (pvector([(0.5+0j)]), pvector([(-0.25-0j)]), pvector([(0.25+0j)]))
    """
    e, kappa, theta = sp.arrays()
    offsets = e[1:] - e[0]
    return HGParams(L=sp.L, N=sp.N,
                    alpha=offsets,
                    beta=-theta[1:],
                    gamma=offsets - kappa[1:])


def hg_to_system_offsets(hp):
    """
    Reverse substitution: return (e_n - e_0, kappa_n, theta_i) for n, i >= 1.
    """
    alpha, beta, gamma = hp.arrays()
    return alpha, alpha - gamma, -beta


def check_reducibility(sp):
    """
    Return (reducible, residual) where residual = |kappa_0 - (theta_1 + ... + theta_N)|.
    """
    residual = abs(sp.kappa[0] - sum(sp.theta[1:]))
    return residual <= CONSTRAINT_TOLERANCE, residual


def _is_generic(e, kappa, theta_tail, reducible):
    L = len(e)
    for m in range(L):
        for n in range(m + 1, L):
            if _distance_to_integers(e[m] - e[n]) < GENERIC_MARGIN:
                return False

    gamma = e[1:] - e[0] - kappa[1:]
    if any(_distance_to_integers(g) < GENERIC_MARGIN for g in gamma):
        return False

    if any(abs(t) < GENERIC_MARGIN for t in theta_tail):
        return False

    if not reducible and abs(kappa[0] - sum(theta_tail)) < GENERIC_MARGIN:
        return False

    return True


def random_params(seed, L, N, reducible):
    """
    Deterministic pseudo-random :py:class:`SystemParams` satisfying both linear constraints.

    Draws are rejected until every difference e_m - e_n and every implied gamma_n is at
    least 0.05 away from the integers and every |theta_i| (i >= 1) is at least 0.05.
    When reducible is set kappa_0 = theta_1 + ... + theta_N, otherwise kappa_0 keeps a
    distance of at least 0.05 from that hyperplane.

    >>> random_params(1, 2, 1, True) == random_params(1, 2, 1, True)
    True
    """
    if L < 2 or N < 1:
        raise ValueError('random_params requires L >= 2 and N >= 1')

    rng = np.random.default_rng(seed)
    attempts = 0
    while True:
        attempts += 1
        e = rng.uniform(-0.5, 0.5, L)
        e = e + ((L - 1) / 2.0 - e.sum()) / L
        theta_tail = rng.uniform(-0.9, 0.9, N)
        kappa = rng.uniform(-0.9, 0.9, L)
        if reducible:
            kappa[0] = theta_tail.sum()

        if _is_generic(e, kappa, theta_tail, reducible):
            break

        logger.debug('random_params(seed=%s): rejected draw %d', seed, attempts)

    e[0] = (L - 1) / 2.0 - e[1:].sum()
    theta = np.concatenate([[kappa.sum() - theta_tail.sum()], theta_tail])
    return SystemParams(L=L, N=N, e=e, kappa=kappa, theta=theta)


def params_from_json(obj):
    """
    Build :py:class:`HGParams` or :py:class:`SystemParams` from a decoded JSON object.
    The kind is recognised by its keys.
    """
    if not isinstance(obj, dict):
        raise ValueError('Parameter document must be a JSON object')

    if 'L' not in obj or 'N' not in obj:
        raise ValueError('Parameter document needs "L" and "N"')

    if {'alpha', 'beta', 'gamma'} <= set(obj):
        return hg_params(obj['L'], obj['N'], obj['alpha'], obj['beta'], obj['gamma'])

    if {'e', 'kappa', 'theta'} <= set(obj):
        return system_params(obj['L'], obj['N'], obj['e'], obj['kappa'], obj['theta'])

    raise ValueError('Parameter document needs either alpha/beta/gamma or e/kappa/theta')


def params_to_json(params):
    return params.serialize()


def load_params(path):
    with open(path) as f:
        return params_from_json(json.load(f))
