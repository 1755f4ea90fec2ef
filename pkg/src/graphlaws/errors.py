"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the CLI reports in
its error JSON.
"""


class GraphLawError(Exception):
    code = "GraphLawError"

    def __init__(self, message="", **details):
        super().__init__(message or self.code)
        self.details = details

    def to_json(self):
        out = {"error": self.code, "message": str(self)}
        if self.details:
            out["details"] = self.details
        return out


class CapExceeded(GraphLawError):
    code = "CapExceeded"


class NotDecomposable(GraphLawError):
    code = "NotDecomposable"


class NotDecomposableAfterToggle(NotDecomposable):
    code = "NotDecomposableAfterToggle"


class IncompatibleIntersection(GraphLawError):
    code = "IncompatibleIntersection"


class OutOfSupport(GraphLawError):
    code = "OutOfSupport"


class UnknownLaw(GraphLawError):
    code = "UnknownLaw"


class NotStructurallyMarkov(GraphLawError):
    code = "NotStructurallyMarkov"


class IncompleteSupport(GraphLawError):
    code = "IncompleteSupport"


class ZeroMassEvent(GraphLawError):
    code = "ZeroMassEvent"


class CyclicInput(GraphLawError):
    code = "CyclicInput"


class CriteriaDisagree(GraphLawError):
    code = "CriteriaDisagree"


class NotCovered(GraphLawError):
    code = "NotCovered"


class NotAncestral(GraphLawError):
    code = "NotAncestral"


class NotAncestralInDagoid(NotAncestral):
    code = "NotAncestralInDagoid"


class IncompatibleOrder(GraphLawError):
    code = "IncompatibleOrder"


class NumericalFailure(GraphLawError):
    code = "NumericalFailure"


class InvalidInput(GraphLawError):
    code = "InvalidInput"
