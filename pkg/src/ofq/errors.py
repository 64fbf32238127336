"""Exception hierarchy.

Every error raised on invalid input derives from :class:`OFQError`; the CLI
maps those to exit code 2. :class:`ConvergenceFailure` maps to exit code 3.
"""


class OFQError(ValueError):
    pass


class NotSquare(OFQError):
    pass


class NotInvertible(OFQError):
    pass


class RelationViolated(OFQError):
    def __init__(self, deviation, tol):
        self.deviation = deviation
        self.tol = tol
        super().__init__(
            f"conj(F) F is not +-Id: max entry deviation {deviation:.3e} > {tol:.3e}")


class DecompositionFailed(OFQError):
    pass


class KacDegenerate(OFQError):
    pass


class IndexOutOfRange(OFQError):
    pass


class NotAdmissible(OFQError):
    pass


class ResultNotAdmissible(OFQError):
    pass


class LengthMismatch(OFQError):
    pass


class TooLarge(OFQError):
    pass


class NotHomogeneous(OFQError):
    pass


class IndexOutOfFamily(OFQError):
    pass


class NotInS(OFQError):
    pass


class MixedDegrees(OFQError):
    pass


class NegativeCoefficient(OFQError):
    pass


class BadExponent(OFQError):
    pass


class KacContext(OFQError):
    pass


class ConvergenceFailure(RuntimeError):
    pass
