# errors.py
"""
Domain errors raised by the services.

Every error carries a short machine code so the CLI can emit a structured
payload. Reports (axiom violations, failed verifications, GB failures) are
returned as data and never raised.
"""


class CharsetError(ValueError):
    """Base class for every error a service raises on purpose."""

    code = "charset-error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_payload(self) -> dict:
        payload = {"code": self.code, "message": self.message}
        if self.details:
            payload["details"] = {key: str(value) for key, value in self.details.items()}
        return payload


class ConfigurationError(CharsetError):
    code = "configuration"


class MalformedInputError(CharsetError):
    code = "malformed-input"


class NotPrimeError(CharsetError):
    code = "not-prime"


class InvalidDegreeError(CharsetError):
    code = "invalid-degree"


class NoSuchRootError(CharsetError):
    code = "no-such-root"


class NotCoprimeError(CharsetError):
    code = "not-coprime"


class FieldMismatchError(CharsetError):
    code = "field-mismatch"


class DimensionMismatchError(CharsetError):
    code = "dimension-mismatch"


class GroundSetError(CharsetError):
    code = "ground-set"


class DependentRowsError(CharsetError):
    code = "dependent-rows"


class EnumerationTooLargeError(CharsetError):
    code = "enumeration-too-large"


class NotTriangularError(CharsetError):
    code = "not-triangular"


class SearchTooLargeError(CharsetError):
    code = "search-too-large"


class MissingVariableError(CharsetError):
    code = "missing-variable"


class SystemDomainError(CharsetError):
    code = "system-domain"


class ForbiddenSubfieldError(CharsetError):
    code = "forbidden-subfield"


class RootOfUnityObstruction(CharsetError):
    code = "root-of-unity-obstruction"


class IncompatibleAutomorphismError(CharsetError):
    code = "incompatible-automorphism"


class OutOfWindowError(CharsetError):
    code = "out-of-window"


class PrimeNotInSetError(CharsetError):
    code = "prime-not-in-set"


class InfeasibleDensityError(CharsetError):
    code = "infeasible-density"


class ModulusTwoError(CharsetError):
    code = "modulus-two"
