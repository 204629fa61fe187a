class HGFlowError(Exception):
    """
    Base class for all errors raised by hgflow.
    """


class ResonantGamma(HGFlowError, ValueError):
    """
    Raised when a lower parameter gamma_n is (within tolerance) a nonpositive integer.

    Attributes:
    index -- 1-based position of the offending gamma
    value -- the offending value
    """
    def __init__(self, index, value, *args, **kwargs):
        if not args:
            args = ('gamma_{0} = {1} is a nonpositive integer'.format(index, value),)
        super(ResonantGamma, self).__init__(*args, **kwargs)
        self.index = index
        self.value = value


class DomainError(HGFlowError, ValueError):
    """
    Raised when the integral representation is used outside of its domain of validity.
    """


class SingularPoint(HGFlowError, ValueError):
    """
    Raised when a point is too close to the singular locus of a system.

    Attributes:
    distance -- distance from the point to the locus
    """
    def __init__(self, distance, *args, **kwargs):
        if not args:
            args = ('Point within {0:.3g} of the singular locus'.format(distance),)
        super(SingularPoint, self).__init__(*args, **kwargs)
        self.distance = distance


class PathTooClose(HGFlowError, ValueError):
    """
    Raised when a path segment comes closer to the singular locus than allowed.

    Attributes:
    segment -- 0-based index of the offending segment
    distance -- smallest distance between the segment and the locus
    """
    def __init__(self, segment, distance, *args, **kwargs):
        if not args:
            args = ('Segment {0} passes within {1:.3g} of the singular locus'.format(segment, distance),)
        super(PathTooClose, self).__init__(*args, **kwargs)
        self.segment = segment
        self.distance = distance


class StepUnderflow(HGFlowError, ArithmeticError):
    """
    Raised when the adaptive integrator cannot meet the requested tolerance.
    """


class NotReducible(HGFlowError, ValueError):
    """
    Raised when a construction requires kappa_0 = theta_1 + ... + theta_N and it does not hold.

    Attributes:
    residual -- absolute value of kappa_0 - (theta_1 + ... + theta_N)
    """
    def __init__(self, residual, *args, **kwargs):
        if not args:
            args = ('Parameters are not reducible, residual {0:.3g}'.format(residual),)
        super(NotReducible, self).__init__(*args, **kwargs)
        self.residual = residual


class ZeroDenominator(HGFlowError, ZeroDivisionError):
    """
    Raised when y_0 vanishes where the particular solution divides by it.
    """


class ConstraintViolation(HGFlowError, ValueError):
    """
    Raised when accessory parameters or reduced data violate their linear constraints.

    Attributes:
    residual -- size of the violation
    """
    def __init__(self, residual, *args, **kwargs):
        if not args:
            args = ('Constraint violated by {0:.3g}'.format(residual),)
        super(ConstraintViolation, self).__init__(*args, **kwargs)
        self.residual = residual


class ZeroGauge(HGFlowError, ZeroDivisionError):
    """
    Raised when a gauge value c_n^(0) is zero.
    """


class PoleHit(HGFlowError, ValueError):
    """
    Raised when a spectral point z coincides with a pole of the Fuchsian system.

    Attributes:
    pole -- the pole that was hit
    """
    def __init__(self, pole, *args, **kwargs):
        if not args:
            args = ('z coincides with the pole {0}'.format(pole),)
        super(PoleHit, self).__init__(*args, **kwargs)
        self.pole = pole


class ZeroTheta(HGFlowError, ZeroDivisionError):
    """
    Raised when a conversion divides by theta_i = 0.

    Attributes:
    index -- 1-based index of the vanishing theta
    """
    def __init__(self, index, *args, **kwargs):
        if not args:
            args = ('theta_{0} is zero'.format(index),)
        super(ZeroTheta, self).__init__(*args, **kwargs)
        self.index = index


class ResonantShift(HGFlowError, ValueError):
    """
    Raised when shifting parameters produces a resonant gamma.
    """


class VanishingDenominator(HGFlowError, ZeroDivisionError):
    """
    Raised when the scalar prefactor of a contiguity relation divides by zero.
    """
