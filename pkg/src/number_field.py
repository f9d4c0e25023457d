"""Exact arithmetic in the degree-8 field Q(zeta_10)(sqrt(phi^-1))

Every entry of every Fibonacci braiding matrix lives here. Elements of the
cyclotomic field Q(zeta) are stored in the power basis {1, z, z^2, z^3} with
z = exp(i*pi/5) and minimal polynomial z^4 - z^3 + z^2 - z + 1. The full field
is the quadratic extension a + b*s with s = sqrt(phi^-1) real and positive,
s^2 = phi^-1 = z^2 - z^3.

Coefficients are exact rationals kept as integer numerators over one shared
positive denominator, reduced by their common gcd. Python integers are
unbounded, so long braid words never overflow.
"""
import logging
from fractions import Fraction
from math import gcd, lcm
from numbers import Rational
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

Coeffs = Tuple[int, ...]
Scalar = Union[int, Fraction]

_ZETA_COMPLEX = tuple(complex(np.exp(1j * np.pi * k / 5)) for k in range(4))
_SQRT_PHI_INV = float(np.sqrt((np.sqrt(5.0) - 1.0) / 2.0))


def _cmul(a: Coeffs, c: Coeffs) -> Coeffs:
    """Product of two power-basis vectors, reduced mod Phi_10"""
    a0, a1, a2, a3 = a
    c0, c1, c2, c3 = c
    t4 = a1 * c3 + a2 * c2 + a3 * c1
    t5 = a2 * c3 + a3 * c2
    t6 = a3 * c3
    # z^4 = z^3 - z^2 + z - 1, z^5 = -1, z^6 = -z
    return (
        a0 * c0 - t4 - t5,
        a0 * c1 + a1 * c0 + t4 - t6,
        a0 * c2 + a1 * c1 + a2 * c0 - t4,
        a0 * c3 + a1 * c2 + a2 * c1 + a3 * c0 + t4,
    )


def _zeta_shift(a: Coeffs) -> Coeffs:
    """Multiply a power-basis vector by z"""
    a0, a1, a2, a3 = a
    return (-a3, a0 + a3, a1 - a3, a2 + a3)


def _build_zeta_powers() -> Tuple[Coeffs, ...]:
    powers = [(1, 0, 0, 0)]
    for _ in range(9):
        powers.append(_zeta_shift(powers[-1]))
    return tuple(powers)


_ZETA_POWERS = _build_zeta_powers()
_PHI_INV: Coeffs = (0, 0, 1, -1)
_GALOIS_EXPONENTS = (1, 3, 7, 9)


def _galois(a: Coeffs, j: int) -> Coeffs:
    """Apply the automorphism z -> z^j of Q(zeta_10)"""
    out = [0, 0, 0, 0]
    for k, coeff in enumerate(a):
        if coeff:
            image = _ZETA_POWERS[(j * k) % 10]
            for t in range(4):
                out[t] += coeff * image[t]
    return tuple(out)


def _normalize(num: Sequence[int], den: int) -> Tuple[Coeffs, int]:
    if den == 1:
        return tuple(num), 1
    if den < 0:
        num = [-x for x in num]
        den = -den
    g = gcd(den, *num)
    if g != 1:
        num = [x // g for x in num]
        den //= g
    return tuple(num), den


def _from_rationals(values: Iterable[Scalar]) -> Tuple[Coeffs, int]:
    fractions = [Fraction(v) for v in values]
    den = lcm(*(f.denominator for f in fractions)) if fractions else 1
    num = [f.numerator * (den // f.denominator) for f in fractions]
    return _normalize(num, den)


def _add(x: Coeffs, dx: int, y: Coeffs, dy: int) -> Tuple[Coeffs, int]:
    if dx == dy:
        return _normalize([p + q for p, q in zip(x, y)], dx)
    return _normalize([p * dy + q * dx for p, q in zip(x, y)], dx * dy)


def _poly_str(coeffs: Sequence[Fraction]) -> str:
    terms = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        monomial = ("", "ζ", "ζ^2", "ζ^3")[k]
        if not monomial:
            terms.append(str(c))
        elif c == 1:
            terms.append(monomial)
        elif c == -1:
            terms.append(f"-{monomial}")
        else:
            terms.append(f"{c}{monomial}")
    if not terms:
        return "0"
    return " + ".join(terms).replace("+ -", "- ")


class CycloElement:
    """Element of Q(zeta_10) in the power basis {1, z, z^2, z^3}"""

    __slots__ = ("_num", "_den")

    def __init__(self, coeffs: Iterable[Scalar] = (0, 0, 0, 0)):
        values = tuple(coeffs)
        if len(values) != 4:
            raise ValueError(f"CycloElement needs 4 coefficients, got {len(values)}")
        self._num, self._den = _from_rationals(values)

    @classmethod
    def _from_raw(cls, num: Sequence[int], den: int = 1) -> "CycloElement":
        obj = cls.__new__(cls)
        obj._num, obj._den = _normalize(num, den)
        return obj

    @classmethod
    def zeta_power(cls, k: int) -> "CycloElement":
        return cls._from_raw(_ZETA_POWERS[k % 10])

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(n, self._den) for n in self._num)

    @property
    def is_zero(self) -> bool:
        return not any(self._num)

    def __add__(self, other) -> "CycloElement":
        other = _coerce_cyclo(other)
        if other is None:
            return NotImplemented
        return CycloElement._from_raw(*_add(self._num, self._den, other._num, other._den))

    __radd__ = __add__

    def __neg__(self) -> "CycloElement":
        return CycloElement._from_raw([-x for x in self._num], self._den)

    def __sub__(self, other) -> "CycloElement":
        other = _coerce_cyclo(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "CycloElement":
        return (-self) + other

    def __mul__(self, other) -> "CycloElement":
        other = _coerce_cyclo(other)
        if other is None:
            return NotImplemented
        return CycloElement._from_raw(_cmul(self._num, other._num), self._den * other._den)

    __rmul__ = __mul__

    def galois(self, j: int) -> "CycloElement":
        if j % 10 not in _GALOIS_EXPONENTS:
            raise ValueError(f"z -> z^{j} is not an automorphism of Q(zeta_10)")
        return CycloElement._from_raw(_galois(self._num, j % 10), self._den)

    def conj(self) -> "CycloElement":
        return self.galois(9)

    def norm(self) -> Fraction:
        """Field norm down to Q: product of the four Galois conjugates"""
        total = self
        for j in (3, 7, 9):
            total = total * self.galois(j)
        return total.coeffs[0]

    def inv(self) -> "CycloElement":
        if self.is_zero:
            raise ZeroDivisionError("division by zero in Q(zeta_10)")
        others = self.galois(3) * self.galois(7) * self.galois(9)
        norm = (self * others).coeffs[0]
        return CycloElement._from_raw(
            [x * norm.denominator for x in others._num], others._den * norm.numerator
        )

    def __truediv__(self, other) -> "CycloElement":
        other = _coerce_cyclo(other)
        if other is None:
            return NotImplemented
        return self * other.inv()

    def to_complex(self) -> complex:
        return sum(n * z for n, z in zip(self._num, _ZETA_COMPLEX)) / self._den

    def __eq__(self, other) -> bool:
        other = _coerce_cyclo(other)
        if other is None:
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self) -> int:
        return hash((self._num, self._den))

    def __repr__(self) -> str:
        return f"CycloElement({','.join(str(c) for c in self.coeffs)})"

    def __str__(self) -> str:
        return _poly_str(self.coeffs)


def _coerce_cyclo(value) -> Optional[CycloElement]:
    if isinstance(value, CycloElement):
        return value
    if isinstance(value, (int, Rational)):
        return CycloElement((value, 0, 0, 0))
    return None


class FieldElement:
    """Exact element a + b*s of Q(zeta_10)(s), s = sqrt(phi^-1)

    Immutable; equality and hashing use the reduced normal form.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, a=0, b=0):
        a_num, a_den = _cyclo_parts(a)
        b_num, b_den = _cyclo_parts(b)
        den = a_den * b_den // gcd(a_den, b_den)
        self._num, self._den = _normalize(
            [x * (den // a_den) for x in a_num] + [x * (den // b_den) for x in b_num], den
        )

    @classmethod
    def _from_raw(cls, num: Sequence[int], den: int = 1) -> "FieldElement":
        obj = cls.__new__(cls)
        obj._num, obj._den = _normalize(num, den)
        return obj

    @classmethod
    def zeta_power(cls, k: int) -> "FieldElement":
        return cls._from_raw(_ZETA_POWERS[k % 10] + (0, 0, 0, 0))

    @property
    def a(self) -> CycloElement:
        return CycloElement._from_raw(self._num[:4], self._den)

    @property
    def b(self) -> CycloElement:
        return CycloElement._from_raw(self._num[4:], self._den)

    @property
    def is_zero(self) -> bool:
        return not any(self._num)

    @property
    def is_real(self) -> bool:
        return self.conj() == self

    def __add__(self, other) -> "FieldElement":
        other = _coerce_field(other)
        if other is None:
            return NotImplemented
        return FieldElement._from_raw(*_add(self._num, self._den, other._num, other._den))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement._from_raw([-x for x in self._num], self._den)

    def __sub__(self, other) -> "FieldElement":
        other = _coerce_field(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "FieldElement":
        return (-self) + other

    def __mul__(self, other) -> "FieldElement":
        other = _coerce_field(other)
        if other is None:
            return NotImplemented
        n, m = self._num, other._num
        a, b = n[:4], n[4:]
        c, e = m[:4], m[4:]
        real = _cmul(a, c)
        has_b, has_e = any(b), any(e)
        if not has_b and not has_e:
            return FieldElement._from_raw(real + (0, 0, 0, 0), self._den * other._den)
        if has_b and has_e:
            be = _cmul(_cmul(b, e), _PHI_INV)
            real = tuple(x + y for x, y in zip(real, be))
        imag = [0, 0, 0, 0]
        if has_e:
            imag = list(_cmul(a, e))
        if has_b:
            imag = [x + y for x, y in zip(imag, _cmul(b, c))]
        return FieldElement._from_raw(real + tuple(imag), self._den * other._den)

    __rmul__ = __mul__

    def conj(self) -> "FieldElement":
        """Complex conjugation: z -> z^-1, s fixed"""
        return FieldElement._from_raw(
            _galois(self._num[:4], 9) + _galois(self._num[4:], 9), self._den
        )

    def abs_sq(self) -> "FieldElement":
        result = self * self.conj()
        if not result.is_real:
            raise ArithmeticError(f"|x|^2 left the real subfield for {self!r}")
        return result

    def inv(self) -> "FieldElement":
        if self.is_zero:
            raise ZeroDivisionError("division by zero in Q(zeta_10)(sqrt(phi^-1))")
        a, b = self.a, self.b
        # (a + bs)(a - bs) = a^2 - b^2 phi^-1 lies in Q(zeta) and is nonzero since s is not in Q(zeta)
        denom_inv = (a * a - b * b * CycloElement._from_raw(_PHI_INV)).inv()
        return FieldElement(a * denom_inv, -(b * denom_inv))

    def __truediv__(self, other) -> "FieldElement":
        other = _coerce_field(other)
        if other is None:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other) -> "FieldElement":
        other = _coerce_field(other)
        if other is None:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            return self.inv() ** (-exponent)
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def to_complex(self) -> complex:
        """Evaluate at z = exp(i*pi/5), s = +sqrt(phi^-1)"""
        n = self._num
        a = sum(x * z for x, z in zip(n[:4], _ZETA_COMPLEX))
        b = sum(x * z for x, z in zip(n[4:], _ZETA_COMPLEX))
        return complex((a + b * _SQRT_PHI_INV) / self._den)

    def serialize(self) -> str:
        """Debug form: eight rationals a0..a3|b0..b3"""
        coeffs = [str(Fraction(x, self._den)) for x in self._num]
        return ",".join(coeffs[:4]) + "|" + ",".join(coeffs[4:])

    @classmethod
    def deserialize(cls, text: str) -> "FieldElement":
        try:
            left, right = text.split("|")
            a = [Fraction(x) for x in left.split(",")]
            b = [Fraction(x) for x in right.split(",")]
        except ValueError as e:
            raise ValueError(f"Malformed field element {text!r}: {e}") from e
        return cls(CycloElement(a), CycloElement(b))

    def __eq__(self, other) -> bool:
        other = _coerce_field(other)
        if other is None:
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self) -> int:
        return hash((self._num, self._den))

    def __repr__(self) -> str:
        return f"FieldElement('{self.serialize()}')"

    def __str__(self) -> str:
        a, b = self.a, self.b
        if b.is_zero:
            return str(a)
        if a.is_zero:
            return f"({b})·s"
        return f"{a} + ({b})·s"


def _cyclo_parts(value) -> Tuple[Coeffs, int]:
    if isinstance(value, CycloElement):
        return value._num, value._den
    if isinstance(value, (int, Rational)):
        return _from_rationals((value, 0, 0, 0))
    element = CycloElement(value)
    return element._num, element._den


def _coerce_field(value) -> Optional[FieldElement]:
    if isinstance(value, FieldElement):
        return value
    if isinstance(value, CycloElement):
        return FieldElement(value)
    if isinstance(value, (int, Rational)):
        return FieldElement(value)
    return None


def zeta_power(k: int) -> FieldElement:
    """exp(k*pi*i/5) as an exact field element"""
    return FieldElement.zeta_power(k)


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def sub(x: FieldElement, y: FieldElement) -> FieldElement:
    return x - y


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def inv(x: FieldElement) -> FieldElement:
    return x.inv()


def conj(x: FieldElement) -> FieldElement:
    return x.conj()


def abs_sq(x: FieldElement) -> FieldElement:
    return x.abs_sq()


def to_complex(x: FieldElement) -> complex:
    return x.to_complex()


ZERO = FieldElement()
ONE = FieldElement(1)
ZETA = zeta_power(1)
PHI = FieldElement((1, 0, 1, -1))
PHI_INV = FieldElement(_PHI_INV)
SQRT_PHI_INV = FieldElement(0, 1)
