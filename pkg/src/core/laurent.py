"""
Exact Laurent polynomial arithmetic
-----------------------------------
Sparse multivariate Laurent polynomials with Gaussian-rational coefficients,
truncated power-series expansion of products of linear factors, and exact
determinants. Every weight and identity in the toolkit is a value of this
module.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

import pyparsing as pp

from src.core.config import Limits, get_limits
from src.core.errors import (
    HtsasmError,
    NonInvertibleImage,
    PolynomialParseError,
    SizeLimitExceeded,
    ZeroAssignment,
)

logger = logging.getLogger(__name__)

FAMILIES = (
    "x", "y", "z0", "q", "s", "t",
    "a1", "a2", "b1", "b2", "a0", "b0",
    "c", "a", "b", "p", "eps",
)
INDEXLESS = ("z0", "a0", "b0")
UNDERSCORED = ("a1", "a2", "b1", "b2")


class GaussianRational:
    """A complex number whose real and imaginary parts are exact rationals."""

    __slots__ = ("real", "imag")

    def __init__(self, real: Union[int, Fraction] = 0, imag: Union[int, Fraction] = 0) -> None:
        self.real = Fraction(real)
        self.imag = Fraction(imag)

    @classmethod
    def coerce(cls, value: Union["GaussianRational", int, Fraction]) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value, 0)
        raise TypeError(f"cannot use {type(value).__name__} as a Gaussian rational")

    def __add__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.real + other.real, self.imag + other.imag)

    __radd__ = __add__

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.real, -self.imag)

    def __sub__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self.real - other.real, self.imag - other.imag)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(
            self.real * other.real - self.imag * other.imag,
            self.real * other.imag + self.imag * other.real,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.real, -self.imag)

    def norm(self) -> Fraction:
        return self.real * self.real + self.imag * self.imag

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("Gaussian rational division by zero")
        return GaussianRational(self.real / n, -self.imag / n)

    def __truediv__(self, other):
        try:
            other = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, exponent: int) -> "GaussianRational":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = GaussianRational(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.imag == 0 and self.real == other
        if isinstance(other, GaussianRational):
            return self.real == other.real and self.imag == other.imag
        return NotImplemented

    def __hash__(self) -> int:
        if self.imag == 0:
            return hash(self.real)
        return hash((self.real, self.imag))

    def __bool__(self) -> bool:
        return bool(self.real) or bool(self.imag)

    def is_real(self) -> bool:
        return self.imag == 0

    def leading_sign(self) -> int:
        """Sign used when a coefficient is hoisted in front of a term."""
        if self.real != 0:
            return 1 if self.real > 0 else -1
        return 1 if self.imag >= 0 else -1

    def __str__(self) -> str:
        return _format_coefficient(self)

    def __repr__(self) -> str:
        return f"GaussianRational({self.real}, {self.imag})"

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Read a coefficient in the printed form: ``3``, ``(3/2)``, ``i``, ``(1/2-3*i)``."""
        body = text.strip()
        if body.startswith("(") and body.endswith(")"):
            body = body[1:-1].strip()
        if body == "i":
            return cls(0, 1)
        match = _COEFF_BODY.match(body.replace(" ", ""))
        if not match or not body:
            raise PolynomialParseError(text, reason="malformed coefficient")
        real = Fraction(match.group("re")) if match.group("re") else Fraction(0)
        imag = Fraction(0)
        if match.group("imag") is not None:
            magnitude = Fraction(match.group("im")) if match.group("im") else Fraction(1)
            imag = -magnitude if match.group("sign") == "-" else magnitude
        return cls(real, imag)


I_UNIT = GaussianRational(0, 1)

_COEFF_BODY = re.compile(
    r"^(?P<re>[-+]?\d+(?:/\d+)?)?(?P<imag>(?P<sign>[-+])?(?:(?P<im>\d+(?:/\d+)?)\*)?i)?$"
)


def _format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _format_coefficient(c: GaussianRational) -> str:
    if c.imag == 0:
        text = _format_fraction(c.real)
        return text if c.real.denominator == 1 and c.real >= 0 else f"({text})"
    if c.real == 0:
        if c.imag == 1:
            return "i"
        return f"({_format_fraction(c.imag)}*i)"
    sign = "+" if c.imag > 0 else "-"
    return f"({_format_fraction(c.real)}{sign}{_format_fraction(abs(c.imag))}*i)"


class VarId(NamedTuple):
    """A parameter symbol: family name plus index (0 for indexless families)."""
    family: str
    index: int = 0

    def __str__(self) -> str:
        if self.family in UNDERSCORED:
            return f"{self.family}_{self.index}"
        if self.family in INDEXLESS or self.index == 0:
            return self.family
        return f"{self.family}{self.index}"

    @classmethod
    def parse(cls, name: str) -> "VarId":
        match = _VAR_NAME.match(name)
        if not match:
            raise PolynomialParseError(name, reason="unknown variable")
        if match.group("under"):
            return cls(match.group("under"), int(match.group("uidx")))
        if match.group("fixed"):
            return cls(match.group("fixed"), 0)
        digits = match.group("num")
        return cls(match.group("base"), int(digits) if digits else 0)


_VAR_PATTERN = r"(?:a[12]|b[12])_\d+|z0|a0|b0|eps|[abcpqstxy]\d*"
_VAR_NAME = re.compile(
    r"^(?:(?P<under>a[12]|b[12])_(?P<uidx>\d+)|(?P<fixed>z0|a0|b0)|(?P<base>eps|[abcpqstxy])(?P<num>\d*))$"
)

# A monomial is a tuple of (VarId, exponent) pairs sorted by VarId, zero exponents dropped.
Monomial = Tuple[Tuple[VarId, int], ...]
ONE_MONOMIAL: Monomial = ()

Scalar = Union[int, Fraction, GaussianRational]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    merged: Dict[VarId, int] = dict(a)
    for v, e in b:
        total = merged.get(v, 0) + e
        if total:
            merged[v] = total
        else:
            del merged[v]
    return tuple(sorted(merged.items()))


def _mono_inv(a: Monomial) -> Monomial:
    return tuple((v, -e) for v, e in a)


def _mono_key(a: Monomial) -> Tuple[Tuple[str, int, int], ...]:
    """Canonical print order: constant first, then by family, index and descending exponent."""
    return tuple((v.family, v.index, -e) for v, e in a)


def _format_monomial(a: Monomial) -> str:
    parts = []
    for v, e in a:
        parts.append(str(v) if e == 1 else f"{v}^{e}")
    return "*".join(parts)


class LaurentPoly:
    """Immutable sparse Laurent polynomial. Supports +, -, *, ** and exact division."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None) -> None:
        clean: Dict[Monomial, GaussianRational] = {}
        for mono, coeff in (terms or {}).items():
            g = GaussianRational.coerce(coeff)
            if g:
                key = tuple(sorted((v, e) for v, e in mono if e))
                clean[key] = clean.get(key, GaussianRational(0)) + g
                if not clean[key]:
                    del clean[key]
        self._terms = clean
        self._hash: Optional[int] = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, GaussianRational]) -> "LaurentPoly":
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def const(cls, value: Scalar) -> "LaurentPoly":
        g = GaussianRational.coerce(value)
        return cls._raw({ONE_MONOMIAL: g} if g else {})

    @classmethod
    def var(cls, family: str, index: int = 0, exponent: int = 1) -> "LaurentPoly":
        if family not in FAMILIES:
            raise HtsasmError(f"unknown variable family {family!r}")
        if family in INDEXLESS and index != 0:
            raise HtsasmError(f"{family} carries index 0 only")
        if exponent == 0:
            return ONE
        return cls._raw({((VarId(family, index), exponent),): GaussianRational(1)})

    @classmethod
    def coerce(cls, value: Union["LaurentPoly", Scalar]) -> "LaurentPoly":
        if isinstance(value, LaurentPoly):
            return value
        return cls.const(value)

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        return parse_poly(text)

    # -- inspection -------------------------------------------------------

    def items(self) -> List[Tuple[Monomial, GaussianRational]]:
        """Terms in canonical order."""
        return sorted(self._terms.items(), key=lambda item: _mono_key(item[0]))

    def terms(self) -> Dict[Monomial, GaussianRational]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE_MONOMIAL in self._terms)

    def constant_term(self) -> GaussianRational:
        return self._terms.get(ONE_MONOMIAL, GaussianRational(0))

    def variables(self) -> List[VarId]:
        found = {v for mono in self._terms for v, _ in mono}
        return sorted(found)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self._terms.values())

    def degree(self, var: VarId) -> int:
        """Highest exponent of var (0 for the zero polynomial)."""
        return max((dict(m).get(var, 0) for m in self._terms), default=0)

    def low_degree(self, var: VarId) -> int:
        return min((dict(m).get(var, 0) for m in self._terms), default=0)

    def coefficient(self, var: VarId, k: int) -> "LaurentPoly":
        """Coefficient of var**k, a polynomial free of var."""
        out: Dict[Monomial, GaussianRational] = {}
        for mono, c in self._terms.items():
            exps = dict(mono)
            if exps.get(var, 0) == k:
                rest = tuple((v, e) for v, e in mono if v != var)
                out[rest] = c
        return LaurentPoly._raw(out)

    def coefficient_of(self, mono: Monomial) -> GaussianRational:
        return self._terms.get(tuple(sorted(mono)), GaussianRational(0))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                other = LaurentPoly.const(other)
            except TypeError:
                return NotImplemented
        if not other._terms:
            return self
        out = dict(self._terms)
        for mono, c in other._terms.items():
            total = out.get(mono)
            total = c if total is None else total + c
            if total:
                out[mono] = total
            else:
                out.pop(mono, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                other = LaurentPoly.const(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                g = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
            if not g:
                return ZERO
            return LaurentPoly._raw({m: c * g for m, c in self._terms.items()})
        if not self._terms or not other._terms:
            return ZERO
        out: Dict[Monomial, GaussianRational] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = _mono_mul(m1, m2)
                prod = c1 * c2
                total = out.get(mono)
                total = prod if total is None else total + prod
                if total:
                    out[mono] = total
                else:
                    del out[mono]
        return LaurentPoly._raw(out)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentPoly":
        """Inverse of a monomial; anything else is not a unit of the Laurent ring."""
        if not self.is_monomial():
            raise NonInvertibleImage("<polynomial>", str(self))
        (mono, coeff), = self._terms.items()
        return LaurentPoly._raw({_mono_inv(mono): coeff.inverse()})

    def __pow__(self, exponent: int) -> "LaurentPoly":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        if self.is_monomial():
            (mono, coeff), = self._terms.items()
            return LaurentPoly._raw({tuple((v, e * exponent) for v, e in mono) if exponent else ONE_MONOMIAL: coeff ** exponent})
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __truediv__(self, other):
        other = LaurentPoly.coerce(other)
        return exact_divide(self, other)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self._terms == LaurentPoly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- homomorphisms ----------------------------------------------------

    def substitute(self, sigma: Mapping[VarId, "LaurentPoly"]) -> "LaurentPoly":
        return substitute(self, sigma)

    def evaluate(self, point: Mapping[VarId, Scalar]) -> GaussianRational:
        return eval_rational(self, point)

    def conjugate(self) -> "LaurentPoly":
        return LaurentPoly._raw({m: c.conjugate() for m, c in self._terms.items()})

    def to_sympy(self):
        """Convert to a sympy expression (symbols named as in the text format)."""
        import sympy

        expr = sympy.Integer(0)
        for mono, c in self.items():
            coeff = sympy.Rational(c.real.numerator, c.real.denominator) + sympy.I * sympy.Rational(
                c.imag.numerator, c.imag.denominator
            )
            term = coeff
            for v, e in mono:
                term = term * sympy.Symbol(str(v)) ** e
            expr = expr + term
        return expr

    # -- text -------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces: List[str] = []
        for position, (mono, coeff) in enumerate(self.items()):
            sign = coeff.leading_sign()
            magnitude = coeff if sign > 0 else -coeff
            if not mono:
                body = _format_coefficient(magnitude)
            elif magnitude == 1:
                body = _format_monomial(mono)
            else:
                body = f"{_format_coefficient(magnitude)}*{_format_monomial(mono)}"
            if position == 0:
                pieces.append(body if sign > 0 else f"-{body}")
            else:
                pieces.append((" + " if sign > 0 else " - ") + body)
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"LaurentPoly('{self}')"


ZERO = LaurentPoly._raw({})
ONE = LaurentPoly._raw({ONE_MONOMIAL: GaussianRational(1)})
I = LaurentPoly._raw({ONE_MONOMIAL: I_UNIT})


def var(family: str, index: int = 0) -> LaurentPoly:
    """Shorthand for the polynomial consisting of a single variable."""
    return LaurentPoly.var(family, index)


def bar(p: LaurentPoly) -> LaurentPoly:
    """z-bar = z^{-1} for a monomial z."""
    return p.inverse()


def product(factors: Iterable[LaurentPoly]) -> LaurentPoly:
    result = ONE
    for f in factors:
        result = result * f
    return result


def poly_sum(values: Iterable[LaurentPoly]) -> LaurentPoly:
    """Sum accumulating into one dict instead of rebuilding a polynomial per addend."""
    out: Dict[Monomial, GaussianRational] = {}
    for p in values:
        for mono, c in LaurentPoly.coerce(p)._terms.items():
            total = out.get(mono)
            total = c if total is None else total + c
            if total:
                out[mono] = total
            else:
                del out[mono]
    return LaurentPoly._raw(out)


def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return LaurentPoly.coerce(p) + LaurentPoly.coerce(q)


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return LaurentPoly.coerce(p) * LaurentPoly.coerce(q)


def substitute(p: LaurentPoly, sigma: Mapping[VarId, LaurentPoly]) -> LaurentPoly:
    """Apply the ring homomorphism sending each variable in sigma to its image.

    Variables absent from sigma are left unchanged.

    Raises:
        NonInvertibleImage: a negative power of v is needed but sigma[v] is not a monomial
    """
    images = {v: LaurentPoly.coerce(img) for v, img in sigma.items()}
    power_cache: Dict[Tuple[VarId, int], LaurentPoly] = {}

    def image_power(v: VarId, e: int) -> LaurentPoly:
        key = (v, e)
        if key not in power_cache:
            img = images[v]
            if e < 0 and not img.is_monomial():
                raise NonInvertibleImage(v, img)
            power_cache[key] = img ** e
        return power_cache[key]

    pieces: List[LaurentPoly] = []
    for mono, coeff in p._terms.items():
        fixed = tuple((v, e) for v, e in mono if v not in images)
        term = LaurentPoly._raw({fixed: coeff})
        for v, e in mono:
            if v in images:
                term = term * image_power(v, e)
        pieces.append(term)
    return poly_sum(pieces)


def eval_rational(p: LaurentPoly, point: Mapping[VarId, Scalar]) -> GaussianRational:
    """Evaluate p exactly at a point assigning every variable of p.

    Raises:
        ZeroAssignment: a variable with a negative exponent is assigned 0
        HtsasmError: a variable of p has no value
    """
    values = {v: GaussianRational.coerce(val) for v, val in point.items()}
    total = GaussianRational(0)
    for mono, coeff in p._terms.items():
        term = coeff
        for v, e in mono:
            if v not in values:
                raise HtsasmError(f"no value assigned to variable {v}")
            value = values[v]
            if e < 0 and not value:
                raise ZeroAssignment(v)
            term = term * value ** e
        total = total + term
    return total


# -- exact division ----------------------------------------------------------

def _leading(p: LaurentPoly, order: Sequence[VarId]) -> Tuple[Monomial, GaussianRational]:
    def key(item):
        exps = dict(item[0])
        return tuple(exps.get(v, 0) for v in order)
    return max(p._terms.items(), key=key)


def exact_divide(p: LaurentPoly, d: LaurentPoly) -> LaurentPoly:
    """Quotient p / d when d divides p exactly in the Laurent ring.

    Long division in the lexicographic group order; quotient exponents are
    confined to the box allowed by the per-variable degree bounds, which
    makes the loop finite.

    Raises:
        ZeroDivisionError: d is zero
        HtsasmError: d does not divide p
    """
    p = LaurentPoly.coerce(p)
    d = LaurentPoly.coerce(d)
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return ZERO
    if d.is_monomial():
        return p * d.inverse()
    order = sorted(set(p.variables()) | set(d.variables()))
    upper = {v: p.degree(v) - d.degree(v) for v in order}
    lower = {v: p.low_degree(v) - d.low_degree(v) for v in order}
    lead_mono, lead_coeff = _leading(d, order)
    inv_lead = LaurentPoly._raw({_mono_inv(lead_mono): lead_coeff.inverse()})
    quotient: List[LaurentPoly] = []
    remainder = p
    while not remainder.is_zero():
        r_mono, r_coeff = _leading(remainder, order)
        step = LaurentPoly._raw({r_mono: r_coeff}) * inv_lead
        (s_mono, _), = step._terms.items()
        exps = dict(s_mono)
        for v in order:
            if not lower[v] <= exps.get(v, 0) <= upper[v]:
                raise HtsasmError(f"{d} does not divide {p}")
        quotient.append(step)
        remainder = remainder - step * d
    return poly_sum(quotient)


# -- truncated power series --------------------------------------------------

@dataclass(frozen=True)
class RationalSeriesSpec:
    """series_var**leading_power * prod(numerators) / prod(denominators).

    Numerator factors are at most linear in the series variable; each
    denominator factor has the form 1 - c*series_var.
    """
    series_var: VarId
    numerator_factors: Tuple[LaurentPoly, ...]
    denominator_factors: Tuple[LaurentPoly, ...]
    leading_power: int = 0

    def __post_init__(self) -> None:
        for factor in self.numerator_factors:
            if factor.low_degree(self.series_var) < 0 or factor.degree(self.series_var) > 1:
                raise HtsasmError(f"numerator factor {factor} is not linear in {self.series_var}")
        for factor in self.denominator_factors:
            if (
                factor.low_degree(self.series_var) < 0
                or factor.degree(self.series_var) > 1
                or factor.coefficient(self.series_var, 0) != ONE
            ):
                raise HtsasmError(f"denominator factor {factor} is not of the form 1 - c*{self.series_var}")

    def denominator_constants(self) -> List[LaurentPoly]:
        return [-f.coefficient(self.series_var, 1) for f in self.denominator_factors]


def _expand_geometric(series: List[LaurentPoly], c: LaurentPoly) -> List[LaurentPoly]:
    out: List[LaurentPoly] = []
    for j, s in enumerate(series):
        out.append(s if j == 0 else s + c * out[j - 1])
    return out


def _expand_linear(series: List[LaurentPoly], a0: LaurentPoly, a1: LaurentPoly) -> List[LaurentPoly]:
    out: List[LaurentPoly] = []
    for j, s in enumerate(series):
        value = a0 * s
        if j > 0 and not a1.is_zero():
            value = value + a1 * series[j - 1]
        out.append(value)
    return out


def series_expansion(spec: RationalSeriesSpec, order: int) -> List[LaurentPoly]:
    """Coefficients of series_var**0 .. series_var**order."""
    target = order - spec.leading_power
    if target < 0:
        return [ZERO] * (order + 1)
    series = [ONE] + [ZERO] * target
    for factor in spec.numerator_factors:
        series = _expand_linear(
            series, factor.coefficient(spec.series_var, 0), factor.coefficient(spec.series_var, 1)
        )
    for c in spec.denominator_constants():
        series = _expand_geometric(series, c)
    # series[j] is the coefficient of series_var**(leading_power + j)
    return [
        series[k - spec.leading_power] if k >= spec.leading_power else ZERO
        for k in range(order + 1)
    ]


def series_coeff(spec: RationalSeriesSpec, k: int) -> LaurentPoly:
    """Coefficient of series_var**k in the power-series expansion of spec."""
    if k < 0 or k - spec.leading_power < 0:
        return ZERO
    return series_expansion(spec, k)[k]


def multiply_specs(first: RationalSeriesSpec, second: RationalSeriesSpec) -> RationalSeriesSpec:
    if first.series_var != second.series_var:
        raise HtsasmError("series variables differ")
    return RationalSeriesSpec(
        first.series_var,
        first.numerator_factors + second.numerator_factors,
        first.denominator_factors + second.denominator_factors,
        first.leading_power + second.leading_power,
    )


def series_coefficient_of_quotient(
    numerator: LaurentPoly, denominator_factors: Sequence[LaurentPoly], series_var: VarId, k: int
) -> LaurentPoly:
    """Coefficient of series_var**k in numerator / prod(denominator_factors).

    The numerator may be any Laurent polynomial in series_var; each
    denominator factor must have the form 1 - c*series_var.
    """
    low = numerator.low_degree(series_var)
    high = numerator.degree(series_var)
    reach = k - low
    if reach < 0:
        return ZERO
    geometric = series_expansion(RationalSeriesSpec(series_var, (), tuple(denominator_factors), 0), reach)
    pieces = []
    for j in range(low, min(high, k) + 1):
        coeff = numerator.coefficient(series_var, j)
        if not coeff.is_zero():
            pieces.append(coeff * geometric[k - j])
    return poly_sum(pieces)


# -- determinants --------------------------------------------------------------

def _cofactor_determinant(matrix: List[List[LaurentPoly]]) -> LaurentPoly:
    side = len(matrix)
    memo: Dict[Tuple[int, int], LaurentPoly] = {}

    def minor(row: int, mask: int) -> LaurentPoly:
        if row == side:
            return ONE
        key = (row, mask)
        if key in memo:
            return memo[key]
        pieces = []
        sign = 1
        for col in range(side):
            if mask & (1 << col):
                continue
            entry = matrix[row][col]
            if not entry.is_zero():
                rest = minor(row + 1, mask | (1 << col))
                if not rest.is_zero():
                    pieces.append(entry * rest if sign > 0 else -(entry * rest))
            sign = -sign
        memo[key] = poly_sum(pieces)
        return memo[key]

    return minor(0, 0)


def _bareiss_determinant(matrix: List[List[LaurentPoly]]) -> LaurentPoly:
    work = [list(row) for row in matrix]
    side = len(work)
    sign = 1
    previous = ONE
    for k in range(side - 1):
        if work[k][k].is_zero():
            swap = next((r for r in range(k + 1, side) if not work[r][k].is_zero()), None)
            if swap is None:
                return ZERO
            work[k], work[swap] = work[swap], work[k]
            sign = -sign
        pivot = work[k][k]
        for i in range(k + 1, side):
            for j in range(k + 1, side):
                numerator = work[i][j] * pivot - work[i][k] * work[k][j]
                work[i][j] = exact_divide(numerator, previous)
            work[i][k] = ZERO
        previous = pivot
    result = work[side - 1][side - 1]
    return result if sign > 0 else -result


def determinant(
    matrix: Sequence[Sequence[Union[LaurentPoly, Scalar]]], limits: Optional[Limits] = None
) -> LaurentPoly:
    """Exact determinant of a square matrix of Laurent polynomials.

    Cofactor expansion with memoised minors up to the configured cutoff,
    fraction-free Bareiss elimination above it.

    Raises:
        DimensionMismatch-like HtsasmError for non-square input
        SizeLimitExceeded: side above limits.max_det_side
    """
    limits = limits or get_limits()
    side = len(matrix)
    if any(len(row) != side for row in matrix):
        raise HtsasmError("determinant of a non-square matrix")
    if side > limits.max_det_side:
        raise SizeLimitExceeded("determinant side", side, limits.max_det_side)
    if side == 0:
        return ONE
    entries = [[LaurentPoly.coerce(e) for e in row] for row in matrix]
    if side <= limits.cofactor_cutoff:
        logger.debug(f"Cofactor determinant of side {side}")
        return _cofactor_determinant(entries)
    logger.debug(f"Bareiss determinant of side {side}")
    return _bareiss_determinant(entries)


# -- text format ------------------------------------------------------------------

def _build_grammar() -> pp.ParserElement:
    coefficient = pp.Regex(r"\([^()]*\)|\d+(?:/\d+)?|i")("coeff")
    variable = pp.Regex(_VAR_PATTERN)
    exponent = pp.Regex(r"-?\d+")
    power = pp.Group(variable("var") + pp.Optional(pp.Suppress("^") + exponent("exp")))("power")
    factor = coefficient | power
    term = pp.Group(factor + pp.ZeroOrMore(pp.Suppress("*") + factor))
    sign = pp.one_of("+ -")
    return pp.Optional(sign) + term + pp.ZeroOrMore(sign + term)


_GRAMMAR = _build_grammar()


def parse_poly(text: str) -> LaurentPoly:
    """Parse the canonical text format (and any reordering of it).

    Raises:
        PolynomialParseError: on malformed input
    """
    try:
        tokens = _GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseException as exc:
        raise PolynomialParseError(text, exc.loc, exc.msg) from exc
    pieces: List[LaurentPoly] = []
    pending_sign = 1
    for token in tokens:
        if isinstance(token, str):
            pending_sign = -1 if token == "-" else 1
            continue
        term = LaurentPoly.const(pending_sign)
        for factor in token:
            if isinstance(factor, str):
                term = term * GaussianRational.parse(factor)
            else:
                v = VarId.parse(factor[0])
                e = int(factor[1]) if len(factor) > 1 else 1
                if v.family in INDEXLESS and v.index != 0:
                    raise PolynomialParseError(text, reason=f"{v.family} takes no index")
                term = term * LaurentPoly._raw({((v, e),): GaussianRational(1)} if e else {ONE_MONOMIAL: GaussianRational(1)})
        pieces.append(term)
        pending_sign = 1
    return poly_sum(pieces)
