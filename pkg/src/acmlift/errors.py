"""Exception hierarchy shared by all modules."""


class AcmLiftError(Exception):
    """Base class for every domain error raised by the package."""

    code = "AcmLiftError"

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self)}


class InvalidInput(AcmLiftError):
    code = "InvalidInput"


class ShapeError(InvalidInput):
    code = "ShapeError"


class ConventionError(InvalidInput):
    code = "ConventionError"


class NotHomogeneous(InvalidInput):
    code = "NotHomogeneous"


class NotDegreeMatrix(InvalidInput):
    code = "NotDegreeMatrix"


class PreconditionError(AcmLiftError):
    code = "PreconditionError"


class NotDivisible(AcmLiftError):
    code = "NotDivisible"


class InvalidHVector(AcmLiftError):
    code = "InvalidHVector"


class AmbiguousInversion(InvalidHVector):
    code = "AmbiguousInversion"


class DegreeTooSmall(AcmLiftError):
    code = "DegreeTooSmall"


class BadCancellation(AcmLiftError):
    code = "BadCancellation"


class SocleObstruction(AcmLiftError):
    code = "SocleObstruction"


class NotRealizable(AcmLiftError):
    code = "NotRealizable"

    def __init__(self, message: str, reason: str = "unspecified"):
        super().__init__(message)
        self.reason = reason

    def to_json(self) -> dict:
        out = super().to_json()
        out["reason"] = self.reason
        return out


class NoUnionPivot(NotRealizable):
    code = "NoUnionPivot"

    def __init__(self, message: str):
        super().__init__(message, reason="no-union-pivot")


class ReplayError(AcmLiftError):
    code = "ReplayError"

    def __init__(self, message: str, step_index: int, cause: Exception):
        super().__init__(f"step {step_index}: {message}")
        self.step_index = step_index
        self.cause = cause

    def to_json(self) -> dict:
        out = super().to_json()
        out["step"] = self.step_index
        out["cause"] = getattr(self.cause, "code", type(self.cause).__name__)
        return out
