class NrcSynthError(Exception):
    """Base class for every error raised by the toolkit."""


class ParseError(NrcSynthError):
    pass


# Syntax.
class TypeMismatch(NrcSynthError):
    pass


class VariableCapture(NrcSynthError):
    pass


class InvalidPosition(NrcSynthError):
    pass


class InvalidPath(NrcSynthError):
    pass


class InconsistentTyping(NrcSynthError):
    pass


# Evaluation.
class UnboundVariable(NrcSynthError):
    pass


class NoDefaultAtom(NrcSynthError):
    pass


class NonSingletonGet(NrcSynthError):
    """get applied to a set that is not a singleton, under strict
    evaluation."""

    def __init__(self, expr, size, valuation):
        super().__init__(f'{expr} has {size} elements under {valuation}')
        self.expr = expr
        self.size = size
        self.valuation = valuation


class PreflightTooLarge(NrcSynthError):
    pass


# Proofs and transforms.
class MalformedProof(NrcSynthError):
    pass


class ProofRejected(NrcSynthError):
    """A checker rejected a proof that a caller required to be accepted."""

    def __init__(self, report):
        super().__init__(f'{report.condition} at node {list(report.path)} '
                         f'({report.rule}): {report.message}')
        self.report = report


class FreshnessViolation(ProofRejected):
    pass


class NonMaximalSpecialization(ProofRejected):
    pass


class TransformError(NrcSynthError):
    pass


class ShapeMismatch(TransformError):
    pass


class PositionError(TransformError):
    pass


class SizeBlowup(TransformError):
    pass


# Extraction.
class ExtractionError(NrcSynthError):
    pass


class PartitionMismatch(ExtractionError):
    pass


class NonCommonBoundUnrecoverable(ExtractionError):
    pass


class GoalShapeMismatch(ExtractionError):
    pass


class ForcedBackboneMissing(ExtractionError):
    pass


class WitnessShapeMismatch(ExtractionError):
    pass


class NotCompositionFree(ExtractionError):
    pass


class NotFocused(ExtractionError):
    pass
