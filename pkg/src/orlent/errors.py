"""Exception hierarchy shared by all modules."""


class OrlentError(Exception):
    """Base class; ``code`` is the short name reported by the CLI."""

    code = "OrlentError"

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = context


class DescriptorError(OrlentError):
    code = "DescriptorError"


class NonMonotone(DescriptorError):
    code = "NonMonotone"


class NotPConvex(DescriptorError):
    code = "NotPConvex"


class EndpointMismatch(DescriptorError):
    code = "EndpointMismatch"


class OutOfDomain(OrlentError, ValueError):
    code = "OutOfDomain"


class NegativeIndex(OrlentError, ValueError):
    code = "NegativeIndex"


class RatioNotMonotone(OrlentError):
    code = "RatioNotMonotone"


class HypothesisViolated(OrlentError):
    code = "HypothesisViolated"

    def __init__(self, hypothesis, message=None, **context):
        super().__init__(message or f"hypothesis violated: {hypothesis}", **context)
        self.hypothesis = hypothesis


class PreconditionViolated(OrlentError, ValueError):
    code = "PreconditionViolated"


class ConstructionExhausted(OrlentError):
    code = "ConstructionExhausted"


class LengthMismatch(OrlentError, ValueError):
    code = "LengthMismatch"


class NotInW(OrlentError, ValueError):
    code = "NotInW"


class SizeBoundViolated(OrlentError, ValueError):
    code = "SizeBoundViolated"


class Intractable(OrlentError):
    code = "Intractable"


class NormExceedsOne(OrlentError, ValueError):
    code = "NormExceedsOne"


class BlockSizeViolated(OrlentError, ValueError):
    code = "BlockSizeViolated"


class BudgetExceeded(OrlentError):
    code = "BudgetExceeded"


class Inconsistent(OrlentError):
    code = "Inconsistent"


class ConfigError(OrlentError, ValueError):
    code = "ConfigError"
