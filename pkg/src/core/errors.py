"""Exception types raised by the core modules."""

from typing import Any, List, Optional


class HtsasmError(Exception):
    """Base class for every error raised by the toolkit."""


class NonInvertibleImage(HtsasmError):
    """A negative power of a variable was mapped to a non-monomial."""

    def __init__(self, variable: Any, image: Any) -> None:
        self.variable = variable
        self.image = image
        super().__init__(f"cannot invert image {image} of variable {variable}")


class ZeroAssignment(HtsasmError):
    """A variable occurring with a negative exponent was assigned zero."""

    def __init__(self, variable: Any) -> None:
        self.variable = variable
        super().__init__(f"variable {variable} has a negative exponent but was assigned 0")


class DimensionMismatch(HtsasmError):
    """A matrix does not have the shape dictated by kind, n and lambda."""

    def __init__(self, expected: Any, actual: Any) -> None:
        self.expected = expected
        self.actual = actual
        super().__init__(f"expected shape {expected}, got {actual}")


class SizeLimitExceeded(HtsasmError):
    """A request exceeds one of the configured computation bounds."""

    def __init__(self, what: str, requested: int, limit: int) -> None:
        self.what = what
        self.requested = requested
        self.limit = limit
        super().__init__(f"{what}={requested} exceeds the configured limit {limit}")


class InvalidAsm(HtsasmError):
    """A candidate matrix violates the half-turn ASM conditions."""

    def __init__(self, violations: List[Any]) -> None:
        self.violations = list(violations)
        summary = "; ".join(str(v) for v in self.violations[:5])
        super().__init__(f"{len(self.violations)} violation(s): {summary}")


class InvalidTableau(HtsasmError):
    """A shifted tableau breaks the row, column, diagonal or profile rules."""

    def __init__(self, problems: List[str]) -> None:
        self.problems = list(problems)
        super().__init__("; ".join(self.problems[:5]) or "invalid tableau")


class AlphabetMismatch(HtsasmError):
    """A tableau entry does not belong to the alphabet of the weight table."""

    def __init__(self, entry: Any, alphabet: Any) -> None:
        self.entry = entry
        self.alphabet = alphabet
        super().__init__(f"entry {entry} is not in the {alphabet} alphabet")


class SchemeKindMismatch(HtsasmError):
    """A weighting scheme was applied to an ASM of the wrong parity."""

    def __init__(self, scheme: str, kind: Any) -> None:
        self.scheme = scheme
        self.kind = kind
        super().__init__(f"scheme {scheme} does not apply to kind {kind}")


class PolynomialParseError(HtsasmError):
    """Text could not be read as a Laurent polynomial."""

    def __init__(self, text: str, position: Optional[int] = None, reason: str = "") -> None:
        self.text = text
        self.position = position
        where = f" at column {position}" if position is not None else ""
        super().__init__(f"cannot parse polynomial {text!r}{where}: {reason}")
