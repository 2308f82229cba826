"""Exception hierarchy.

Input problems (bad files, bad complexes, bad requests) derive from
:class:`InputError`; broken internal guarantees raise
:class:`InvariantViolation`. The CLI maps them to exit codes 2 and 3.
"""


class ContractaError(Exception):
    pass


class InputError(ContractaError, ValueError):
    pass


class InvariantViolation(ContractaError, AssertionError):
    pass


class MissingFace(InputError):
    pass


class NonMonotoneHeight(InputError):
    pass


class DuplicateSimplex(InputError):
    pass


class UnknownVertex(InputError):
    pass


class UnknownSimplex(InputError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class UnknownEdge(UnknownSimplex):
    pass


class LinkConditionViolated(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class DimensionOutOfRange(InputError):
    pass


class NotACycle(InputError):
    pass


class NotClosed2Manifold(InputError):
    pass


class ParseError(InputError):
    pass


class UnknownVertexInHeightFile(ParseError):
    pass


class NonTriangleFace(ParseError):
    pass
