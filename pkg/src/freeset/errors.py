"""Exception hierarchy.

Every error carries a machine-readable ``code`` and a ``category`` that the
command-line layer maps to an exit status (validation, solver or I/O).
"""

from __future__ import annotations

from typing import Any

VALIDATION = "validation"
SOLVER = "solver"
IO = "io"


class FreeSetError(Exception):
    code = "ERROR"
    category = VALIDATION

    def __init__(self, message: str = "", **details: Any) -> None:
        super().__init__(message or self.code)
        self.message = message or self.code
        self.details = details

    def to_json(self) -> dict:
        out = {"error": self.code, "category": self.category, "message": self.message}
        if self.details:
            out["details"] = {k: _plain(v) for k, v in self.details.items()}
        return out


def _plain(v: Any) -> Any:
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return str(v)


def _make(name: str, code: str, category: str) -> type:
    return type(name, (FreeSetError,), {"code": code, "category": category})


MalformedEmbedding = _make("MalformedEmbedding", "MALFORMED_EMBEDDING", VALIDATION)
DegenerateCrossing = _make("DegenerateCrossing", "DEGENERATE_CROSSING", VALIDATION)
GraphMismatch = _make("GraphMismatch", "GRAPH_MISMATCH", VALIDATION)
WouldCreateMultiEdge = _make("WouldCreateMultiEdge", "WOULD_CREATE_MULTI_EDGE", VALIDATION)
NotAGraph = _make("NotAGraph", "NOT_A_GRAPH", VALIDATION)
CyclicPrecedence = _make("CyclicPrecedence", "CYCLIC_PRECEDENCE", VALIDATION)
MissingWitness = _make("MissingWitness", "MISSING_WITNESS", VALIDATION)
DegenerateBundle = _make("DegenerateBundle", "DEGENERATE_BUNDLE", VALIDATION)
IncompatibleOuterShape = _make("IncompatibleOuterShape", "INCOMPATIBLE_OUTER_SHAPE", VALIDATION)
CountMismatch = _make("CountMismatch", "COUNT_MISMATCH", SOLVER)
SingularSystem = _make("SingularSystem", "SINGULAR_SYSTEM", SOLVER)
InconsistentConcurrency = _make("InconsistentConcurrency", "INCONSISTENT_CONCURRENCY", SOLVER)
ContinuationStalled = _make("ContinuationStalled", "CONTINUATION_STALLED", SOLVER)
SolverInitializationFailed = _make(
    "SolverInitializationFailed", "SOLVER_INITIALIZATION_FAILED", SOLVER
)
InconsistentSides = _make("InconsistentSides", "INCONSISTENT_SIDES", VALIDATION)
NotSeparating = _make("NotSeparating", "NOT_SEPARATING", VALIDATION)
EmptyKernel = _make("EmptyKernel", "EMPTY_KERNEL", SOLVER)
EdgeExists = _make("EdgeExists", "EDGE_EXISTS", SOLVER)
BaseCaseNotAGraph = _make("BaseCaseNotAGraph", "BASE_CASE_NOT_A_GRAPH", SOLVER)
NotPlaneWitness = _make("NotPlaneWitness", "NOT_PLANE_WITNESS", VALIDATION)
DeltaSearchFailed = _make("DeltaSearchFailed", "DELTA_SEARCH_FAILED", SOLVER)
UnknownFixture = _make("UnknownFixture", "UNKNOWN_FIXTURE", VALIDATION)
RetryExhausted = _make("RetryExhausted", "RETRY_EXHAUSTED", SOLVER)
TargetsNotIncreasing = _make("TargetsNotIncreasing", "TARGETS_NOT_INCREASING", VALIDATION)
SchemaError = _make("SchemaError", "SCHEMA_ERROR", VALIDATION)
IOFailure = _make("IOFailure", "IO_FAILURE", IO)
PreconditionFailed = _make("PreconditionFailed", "PRECONDITION_FAILED", VALIDATION)
