"""Exception types raised across lctk.

Every domain error derives from :class:`LctkError`; the CLI prints the class
name and exits with status 1 for these.
"""


class LctkError(Exception):
    """Base class for domain errors."""

    @property
    def name(self):
        return type(self).__name__


# algebra
class DivisionByZeroTF(LctkError):
    pass


class NegativeDelay(LctkError):
    pass


class DelayMismatch(LctkError):
    pass


class DelayNotSupported(LctkError):
    pass


class PoleEvaluation(LctkError):
    pass


class UnboundParameter(LctkError):
    def __init__(self, missing):
        self.missing = sorted(missing)
        super().__init__("unbound parameter(s): " + ", ".join(self.missing))


class DegenerateLoop(LctkError):
    pass


class NotDivisible(LctkError):
    pass


class ParseError(LctkError):
    def __init__(self, message, pos=None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at offset {pos})"
        super().__init__(message)


# laplace
class UnsupportedComposition(LctkError):
    pass


class NonRationalResult(LctkError):
    pass


class ConvergenceMargin(LctkError):
    pass


class ToleranceNotMet(LctkError):
    pass


# lti
class ZeroDenominatorPoly(LctkError):
    pass


class InvalidOdeSystem(LctkError):
    pass


class SingularLeadingCoefficient(LctkError):
    pass


# circuits
class NetlistSyntaxError(LctkError):
    """Netlist text could not be parsed.

    ``kind`` is a short tag such as ``MissingOutput`` or ``BadValue``.
    """

    def __init__(self, kind, message, line=None, column=None):
        self.kind = kind
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column else "") + ")"
        super().__init__(f"{kind}: {message}{where}")


class DuplicateName(LctkError):
    pass


class MissingGround(LctkError):
    pass


class DisconnectedGraph(LctkError):
    pass


class UnsupportedComponent(LctkError):
    pass


class SingularCircuit(LctkError):
    pass


class UnsupportedTopology(LctkError):
    pass


class NonPositiveComponent(LctkError):
    pass


class UnsupportedCombination(LctkError):
    pass


# margins
class NoGainCrossover(LctkError):
    pass


class NoPhaseCrossover(LctkError):
    pass


class ZeroLeadingCoefficient(LctkError):
    pass
