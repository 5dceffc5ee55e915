"""Exception hierarchy.

Two families matter to callers: :class:`InvalidInput` (bad data, maps to CLI
exit code 2) and :class:`BudgetError` (a guarded computation refused to run
or gave up, exit code 3).
"""


class OrderTypesError(Exception):
    pass


class InvalidInput(OrderTypesError, ValueError):
    pass


class BudgetError(OrderTypesError):
    pass


class CollinearTriple(InvalidInput):
    def __init__(self, i, j, k):
        super().__init__(f"collinear triple ({i}, {j}, {k})")
        self.triple = (i, j, k)


class DuplicatePoint(InvalidInput):
    pass


class DuplicateX(InvalidInput):
    def __init__(self, i, j):
        super().__init__(f"points {i} and {j} share an x-coordinate")
        self.pair = (i, j)


class BadLineOrder(InvalidInput):
    pass


class InvalidUnion(InvalidInput):
    pass


class BadCut(InvalidInput):
    pass


class BadIndex(InvalidInput):
    pass


class SizeMismatch(InvalidInput):
    pass


class NotABijection(InvalidInput):
    pass


class DecodeFailure(InvalidInput):
    pass


class NotAWheelSet(InvalidInput):
    pass


class NotDecomposable(InvalidInput):
    def __init__(self, index):
        super().__init__(f"point set #{index} is not decomposable")
        self.index = index


class NotNonconvexQuad(InvalidInput):
    pass


class WrongWitnessShape(InvalidInput):
    pass


class PreconditionViolated(InvalidInput):
    pass


class SizeLimitExceeded(BudgetError):
    pass


class BudgetExceeded(BudgetError):
    pass


class EnumerationBudgetExceeded(BudgetError):
    pass


class SearchBudgetExceeded(BudgetError):
    pass


class ResampleBudgetExceeded(BudgetError):
    pass


class DuplicateExhaustion(BudgetError):
    pass
