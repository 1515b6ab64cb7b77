"""Exception types shared across the package."""


class CongruenceLabError(Exception):
    pass


class SingularCurve(CongruenceLabError, ValueError):
    pass


class BadReduction(CongruenceLabError, ValueError):
    pass


class Unsupported(CongruenceLabError):
    """Inputs outside the hypotheses of a criterion (not a negative verdict)."""


class NoWitness(CongruenceLabError):
    pass


class DegenerateWitness(CongruenceLabError):
    pass


class ChainPole(CongruenceLabError, ZeroDivisionError):
    def __init__(self, where: str):
        super().__init__(f"denominator vanishes: {where}")
        self.where = where


class NotASquare(CongruenceLabError):
    pass


class DegenerateJ(CongruenceLabError):
    pass


class BadParameter(CongruenceLabError, ValueError):
    pass


class IdentityFailure(CongruenceLabError, AssertionError):
    pass


class CacheMiss(CongruenceLabError, LookupError):
    pass
