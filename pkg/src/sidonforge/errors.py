"""Exception hierarchy shared by every sidonforge module."""


class SidonError(Exception):
    """Base class for all library errors."""


class NotPrime(SidonError, ValueError):
    pass


class NotInvertible(SidonError, ValueError):
    pass


class MixedGroups(SidonError, ValueError):
    pass


class GroupUnsupported(SidonError, ValueError):
    pass


class PrecisionOverflow(SidonError, ArithmeticError):
    """The FFT engine cannot guarantee exact integer counts."""


class DegenerateSum(SidonError, ArithmeticError):
    """u + v vanishes mod p, so the quadratic collapses and the closed form does not apply."""


class KTooLarge(SidonError, ValueError):
    pass


class NormalizationError(SidonError, ValueError):
    pass


class InfeasibleParameters(SidonError, ValueError):
    pass


class WindowTooLarge(SidonError, ValueError):
    pass


class ProbabilityOverflow(SidonError, ValueError):
    pass


class ZeroFunction(SidonError, ValueError):
    pass


class CeilingExceeded(SidonError, ValueError):
    pass


class CertificateError(SidonError, ValueError):
    """A certificate or profile file could not be parsed."""
