"""Exception hierarchy shared by the schemes, the harness and the CLI."""


class SchemeError(Exception):
    """Base class for every error raised by this package."""


class InvariantViolation(SchemeError):
    """An internal post-condition failed (a bug or a broken key, not bad input)."""


# --- parameters ---------------------------------------------------------

class ParameterError(SchemeError, ValueError):
    pass


class InvalidModulus(ParameterError):
    pass


class KExceedsH(ParameterError):
    pass


class StrictViolation(ParameterError):
    pass


class InvalidParams(ParameterError):
    """A decoded params record asks for dimensions this build will not allocate."""


# --- linear algebra -----------------------------------------------------

class LinearAlgebraError(SchemeError, ValueError):
    pass


class RankDeficient(LinearAlgebraError):
    pass


class NoSolution(LinearAlgebraError):
    pass


# --- sampling -----------------------------------------------------------

class SamplingError(SchemeError):
    pass


class SamplerStuck(SamplingError):
    pass


# --- trapdoors and keys -------------------------------------------------

class TrapdoorError(SchemeError):
    pass


class GenerationFailed(TrapdoorError):
    pass


class NotOrthogonal(TrapdoorError, ValueError):
    pass


class InvalidBasis(TrapdoorError, ValueError):
    pass


# --- message / signature algebra ----------------------------------------

class EncodingError(SchemeError, ValueError):
    pass


class LengthMismatch(EncodingError):
    pass


class UnknownHashId(EncodingError):
    pass


class CoefficientOutOfRange(EncodingError):
    pass


class PolicyViolation(EncodingError):
    """Private-key signing of a multi-symbol message while the single-symbol policy is on."""


# --- security harness ---------------------------------------------------

class HarnessError(SchemeError):
    pass


class NotAForgery(HarnessError, ValueError):
    pass


class EmptySamples(HarnessError, ValueError):
    pass


class QueryBudgetExceeded(HarnessError):
    pass


class MalformedAdversaryOutput(HarnessError):
    pass


class FunctionalMismatch(HarnessError, ValueError):
    pass


# --- serialization ------------------------------------------------------

class SerializationError(SchemeError, ValueError):
    pass


class BadMagic(SerializationError):
    pass


class VersionUnsupported(SerializationError):
    pass


class ParamsMismatch(SerializationError):
    pass


class Truncated(SerializationError):
    pass


class CoefficientOverflow(SerializationError):
    pass
