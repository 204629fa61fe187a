import logging

import numpy as np
from pyrsistent import PClass, field
from scipy.special import loggamma, roots_jacobi

from hgflow._errors import DomainError

logger = logging.getLogger(__name__)

_FORMS = ('cube', 'simplex')


class QuadratureSpec(PClass):
    """
    Tensor product Gauss-Jacobi rule on [0, 1]^(L-1).

    nodes is the number of nodes per axis. form selects the integrand: 'cube' integrates
    over the unit cube, 'simplex' evaluates the linear-form integrand over the simplex
    0 <= t_{L-1} <= ... <= t_1 <= 1 at the mapped nodes.

    >>> QuadratureSpec().nodes
    48
    >>> QuadratureSpec(form='simplex').set(nodes=64).nodes
    64
    """
    nodes = field(type=int, initial=48, invariant=lambda n: (n >= 2, 'at least two nodes per axis'))
    form = field(type=str, initial='cube', invariant=lambda f: (f in _FORMS, 'form must be cube or simplex'))


def _check_domain(alpha, gamma, x):
    for k, (a, g) in enumerate(zip(alpha, gamma), start=1):
        if not g.real > a.real > 0:
            raise DomainError('Integral representation needs Re gamma_{0} > Re alpha_{0} > 0'.format(k))

    if np.any(np.abs(x) >= 1):
        raise DomainError('Integral representation needs |x_i| < 1')


def _log_prefactor(alpha, gamma):
    return np.sum(loggamma(gamma) - loggamma(alpha) - loggamma(gamma - alpha))


def normalization_constant(hp):
    """
    c = prod Gamma(alpha_k) Gamma(gamma_k - alpha_k) / Gamma(gamma_k), the factor between the
    integral over the standard simplex and F_{L,N} itself.

    >>> from hgflow import hg_params
    >>> abs(normalization_constant(hg_params(2, 1, [1], [1], [2])) - 1) < 1e-14
    True
    """
    alpha, _, gamma = hp.arrays()
    return complex(np.exp(-_log_prefactor(alpha, gamma)))


def _axis_rules(alpha, gamma, nodes):
    rules = []
    for a, g in zip(alpha, gamma):
        ja = (g - a).real - 1
        jb = a.real - 1
        s, w = roots_jacobi(nodes, ja, jb)
        z = (1 + s) / 2
        w = w / 2.0 ** (ja + jb + 1)
        phase = np.exp(1j * a.imag * np.log(z) + 1j * (g - a).imag * np.log1p(-z))
        rules.append((z, w * phase, ja, jb))

    return rules


def _grid(values):
    return np.meshgrid(*values, indexing='ij')


def _power(base, exponent):
    return np.exp(exponent * np.log(base))


def _cube_integrand(z, beta, x):
    product = np.prod(z, axis=0)
    result = np.ones(product.shape, dtype=complex)
    for b, xi in zip(beta, x):
        result = result * _power(1 - xi * product, -b)

    return result


def _simplex_integrand(z, rules, alpha, beta, gamma, x):
    L = len(alpha) + 1
    t = np.cumprod(z, axis=0)
    previous = np.concatenate([np.ones((1,) + t.shape[1:]), t[:-1]])
    value = _power(t[L - 2], alpha[L - 2] - 1)
    for k in range(L - 2):
        value = value * _power(t[k], alpha[k] - gamma[k + 1]) * t[k]

    for k in range(L - 1):
        value = value * _power(previous[k] - t[k], gamma[k] - alpha[k] - 1)

    for b, xi in zip(beta, x):
        value = value * _power(1 - xi * t[L - 2], -b)

    weight = np.ones(t.shape[1:])
    for k, (_, _, ja, jb) in enumerate(rules):
        weight = weight * z[k] ** jb * (1 - z[k]) ** ja

    # divided out again: the rule weights carry it
    phase = np.ones(t.shape[1:], dtype=complex)
    for k in range(L - 1):
        phase = phase * np.exp(1j * alpha[k].imag * np.log(z[k]) + 1j * (gamma[k] - alpha[k]).imag * np.log1p(-z[k]))

    return value / (weight * phase)


def eval_integral(hp, x, qs=None):
    """
    F_{L,N}(alpha, beta, gamma; x) from its integral representation.

    Requires Re gamma_k > Re alpha_k > 0 and |x_i| < 1, raising :py:class:`DomainError`
    otherwise. The endpoint singularities are absorbed into Gauss-Jacobi weights.

    >>> from hgflow import hg_params
    >>> abs(eval_integral(hg_params(2, 1, [0.5], [0], [1.5]), [0.3]) - 1) < 1e-12
    True
    """
    qs = qs or QuadratureSpec()
    alpha, beta, gamma = hp.arrays()
    x = np.asarray(x, dtype=complex)
    if x.shape != (hp.N,):
        raise ValueError('Expected {0} coordinates, got {1}'.format(hp.N, x.shape))

    _check_domain(alpha, gamma, x)
    rules = _axis_rules(alpha, gamma, qs.nodes)
    z = np.array(_grid([r[0] for r in rules]))
    weights = np.prod(np.array(_grid([r[1] for r in rules])), axis=0)
    logger.debug('eval_integral: %s form, %d nodes', qs.form, weights.size)

    if qs.form == 'cube':
        integrand = _cube_integrand(z, beta, x)
    else:
        integrand = _simplex_integrand(z, rules, alpha, beta, gamma, x)

    return complex(np.exp(_log_prefactor(alpha, gamma)) * np.sum(weights * integrand))
