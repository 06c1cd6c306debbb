"""Exception hierarchy.

Errors are grouped into families mirroring the CLI exit codes: usage (1),
parse (2), precondition (3) and numerical (4).  Every error carries a plain
message; callers that need structured payloads can inspect ``.details``.
"""


class Topo1dError(Exception):
    """Base class for all package errors."""

    exit_code = 3

    def __init__(self, message="", **details):
        super().__init__(message)
        self.details = details


class ParseError(Topo1dError):
    exit_code = 2


class PreconditionError(Topo1dError):
    exit_code = 3


class NumericalError(Topo1dError):
    exit_code = 4


# -- lattice-core ------------------------------------------------------------

class WindowTooSmall(PreconditionError):
    pass


class CutOutsideWindow(PreconditionError):
    pass


class NonUnitModulus(PreconditionError):
    pass


class ShapeMismatch(PreconditionError):
    pass


# -- symmetry ----------------------------------------------------------------

class InconsistentSymmetryData(PreconditionError):
    pass


class NotChiral(PreconditionError):
    pass


class OddFiber(PreconditionError):
    pass


class NotInvariant(PreconditionError):
    pass


class OddQuaternionicDimension(PreconditionError):
    pass


class KernelCokernelMismatch(PreconditionError):
    pass


class OddKernelStarH(PreconditionError):
    pass


# -- spectral-kit ------------------------------------------------------------

class NotSelfAdjoint(PreconditionError):
    pass


class GapClosed(PreconditionError):
    pass


class EigenvalueAtCut(PreconditionError):
    pass


class NotSAU(PreconditionError):
    pass


# -- index -------------------------------------------------------------------

class NotUnitary(PreconditionError):
    pass


class NonIntegerTrace(NumericalError):
    pass


class SymmetryViolated(PreconditionError):
    pass


class NotUnitaryOrSAU(PreconditionError):
    pass


class SingularSymbol(PreconditionError):
    pass


class NonIntegerWinding(NumericalError):
    pass


class PerturbationTooLarge(PreconditionError):
    pass


class NotEssentiallyGapped(PreconditionError):
    pass


# -- homotopy ----------------------------------------------------------------

class NoSpectralGap(PreconditionError):
    pass


class RelationViolated(PreconditionError):
    pass


class IndexNonzero(PreconditionError):
    pass


class OddZ2Index(PreconditionError):
    pass


class IndexMismatch(PreconditionError):
    pass


class ClassMismatch(PreconditionError):
    pass


class TrivialEigenspace(PreconditionError):
    pass


class SignatureMismatch(PreconditionError):
    pass


class NotLambdaNontrivial(PreconditionError):
    pass


class Z2Mismatch(PreconditionError):
    pass


class GDegenerate(NumericalError):
    pass


class KernelDimMismatch(PreconditionError):
    pass


# -- stummel -----------------------------------------------------------------

class CircleNotInvertible(NumericalError):
    pass


class NotInvertible(PreconditionError):
    pass


class RankNotConstant(NumericalError):
    pass


class NotDivisible(PreconditionError):
    pass


class HoppingTooLong(PreconditionError):
    pass


# -- models ------------------------------------------------------------------

class SymmetryUnpreservable(PreconditionError):
    pass


class UnsupportedClass(PreconditionError):
    pass


# -- cli-io ------------------------------------------------------------------

class SchemaMismatch(ParseError):
    pass


class MalformedEntries(ParseError):
    pass
