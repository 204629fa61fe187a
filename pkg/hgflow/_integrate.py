import logging

import numpy as np
from scipy.integrate import solve_ivp

from hgflow._errors import StepUnderflow

logger = logging.getLogger(__name__)


def integrate_segment(fun, y, tol, samples=None):
    """
    Integrate dy/ds = fun(s, y) over s in [0, 1] with the DOP853 pair.

    Returns the end value, or the values at s = k/samples for k = 1..samples when
    samples is given. Raises :py:class:`StepUnderflow` when the step size collapses.
    """
    y = np.asarray(y, dtype=complex)
    t_eval = None if samples is None else np.linspace(0.0, 1.0, samples + 1)[1:]
    result = solve_ivp(fun, (0.0, 1.0), y, method='DOP853', rtol=tol, atol=tol, t_eval=t_eval)
    logger.debug('integrate_segment: status=%d, nfev=%d, points=%d', result.status, result.nfev, len(result.t))
    if result.status != 0:
        raise StepUnderflow(result.message)

    if samples is None:
        return result.y[:, -1]

    return [result.y[:, k] for k in range(samples)]
