"""Exception hierarchy.

Input errors map to CLI exit code 2, failed mathematical checks to exit code 1.
Every exception may carry a ``witness`` dict that is echoed in reports.
"""


class KswError(Exception):
    exit_code = 2

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness or {}


class InputError(KswError):
    exit_code = 2


class CheckFailed(KswError):
    exit_code = 1


# scalars
class NonMonic(InputError):
    pass


class ReduciblePolynomial(InputError):
    pass


# forms
class NotEquivariant(InputError):
    pass


class DegenerateForm(InputError):
    pass


class BaseNotCM(InputError):
    pass


class NotFree(InputError):
    pass


class SpanNotReached(CheckFailed):
    pass


# clifford
class TooLarge(InputError):
    pass


class MixedParents(InputError):
    pass


class OddElement(InputError):
    pass


class NotInvertible(InputError):
    pass


class DoesNotPreserveV(InputError):
    pass


class EvenRank(InputError):
    pass


# norm functor
class NotFaithful(InputError):
    pass


class NotELinear(InputError):
    pass


class NotAssociative(InputError):
    pass


# representation theory
class SingularEigenbasis(InputError):
    pass


class FormNotPreserved(InputError):
    pass


class DimensionShortfall(CheckFailed):
    pass


# hodge
class IsotropyViolated(InputError):
    pass


class PositivityViolated(InputError):
    pass


class EndNotAField(InputError):
    pass


class NoPositivePlane(InputError):
    pass


class InconsistentInput(InputError):
    pass


class NoPrimitiveType(CheckFailed):
    pass


class TauInPhi(InputError):
    pass


class TypeMismatch(CheckFailed):
    pass


# kuga-satake / so4
class UnsupportedSize(InputError):
    pass


class VerificationFailed(CheckFailed):
    pass


class NotTraceless(InputError):
    pass


class NotSplit(CheckFailed):
    pass
