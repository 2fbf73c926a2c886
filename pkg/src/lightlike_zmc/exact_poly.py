"""Exact arithmetic kernel: rationals and polynomials in (c, y).

Coefficients are :class:`fractions.Fraction`, which is always kept in lowest
terms with a positive denominator.  ``c`` is a formal variable here; it only
becomes a number in :meth:`CYPoly.specialize_c`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

RationalScalar = Fraction
Scalar = Union[int, Fraction]

__all__ = [
    "RationalScalar",
    "CYPoly",
    "YPoly",
    "as_rational",
    "add",
    "mul",
    "diff_y",
    "double_integrate_zero_ic",
    "specialize_c",
]


def as_rational(value) -> Fraction:
    """Convert ``value`` to a Fraction.

    Strings such as ``"1/2"`` or ``"0.25"`` are parsed exactly; floats are
    converted by their exact binary value.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


class CYPoly:
    """Immutable polynomial in ``c`` and ``y`` with rational coefficients.

    ``terms`` maps ``(j, i)`` to the coefficient of ``c**j * y**i``.  Zero
    coefficients are never stored, so two equal polynomials always have equal
    term maps.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, int], Scalar] | None = None):
        clean: dict[tuple[int, int], Fraction] = {}
        if terms:
            for (j, i), v in terms.items():
                if j < 0 or i < 0:
                    raise ValueError(f"negative exponent in monomial {(j, i)}")
                v = Fraction(v)
                if v:
                    clean[(int(j), int(i))] = v
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[tuple[int, int], Fraction]) -> "CYPoly":
        # caller guarantees: no zero values, Fraction coefficients
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls) -> "CYPoly":
        return cls._raw({})

    @classmethod
    def one(cls) -> "CYPoly":
        return cls._raw({(0, 0): Fraction(1)})

    @classmethod
    def monomial(cls, coeff: Scalar, c_exp: int = 0, y_exp: int = 0) -> "CYPoly":
        return cls({(c_exp, y_exp): coeff})

    @property
    def terms(self) -> dict[tuple[int, int], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degree_y(self) -> int:
        """Largest y-exponent, or -1 for the zero polynomial."""
        return max((i for _, i in self._terms), default=-1)

    def degree_c(self) -> int:
        """Largest c-exponent, or -1 for the zero polynomial."""
        return max((j for j, _ in self._terms), default=-1)

    def coeff(self, c_exp: int, y_exp: int) -> Fraction:
        return self._terms.get((c_exp, y_exp), Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CYPoly({(0, 0): other})
        if not isinstance(other, CYPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def _coerce(self, other) -> "CYPoly":
        if isinstance(other, CYPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return CYPoly({(0, 0): other})
        return NotImplemented

    def __add__(self, other) -> "CYPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for key, v in other._terms.items():
            s = out.get(key, 0) + v
            if s:
                out[key] = s
            else:
                out.pop(key, None)
        return CYPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "CYPoly":
        return CYPoly._raw({k: -v for k, v in self._terms.items()})

    def __sub__(self, other) -> "CYPoly":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "CYPoly":
        return (-self) + other

    def __mul__(self, other) -> "CYPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return CYPoly.zero()
            return CYPoly._raw({k: v * other for k, v in self._terms.items()})
        if not isinstance(other, CYPoly):
            return NotImplemented
        out: dict[tuple[int, int], Fraction] = {}
        for (j1, i1), v1 in self._terms.items():
            for (j2, i2), v2 in other._terms.items():
                key = (j1 + j2, i1 + i2)
                out[key] = out.get(key, 0) + v1 * v2
        return CYPoly._raw({k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> "CYPoly":
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return self * (1 / Fraction(other))

    def diff_y(self) -> "CYPoly":
        return CYPoly._raw(
            {(j, i - 1): v * i for (j, i), v in self._terms.items() if i > 0}
        )

    def double_integrate_zero_ic(self) -> "CYPoly":
        """Second antiderivative in y vanishing to first order at y = 0."""
        return CYPoly._raw(
            {(j, i + 2): v / ((i + 1) * (i + 2)) for (j, i), v in self._terms.items()}
        )

    def specialize_c(self, c_value) -> "YPoly":
        c_value = as_rational(c_value)
        coeffs: dict[int, Fraction] = {}
        for (j, i), v in self._terms.items():
            coeffs[i] = coeffs.get(i, 0) + v * c_value**j
        return YPoly.from_dict(coeffs)

    def __call__(self, c, y):
        """Evaluate at numbers ``c`` and ``y`` (exact if both are rational)."""
        return sum((v * c**j * y**i for (j, i), v in self._terms.items()), 0)

    def __repr__(self) -> str:
        return f"CYPoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (j, i), v in sorted(self._terms.items(), key=lambda t: (-t[0][1], -t[0][0])):
            mono = []
            if j:
                mono.append("c" if j == 1 else f"c^{j}")
            if i:
                mono.append("y" if i == 1 else f"y^{i}")
            sign = "-" if v < 0 else "+"
            mag = abs(v)
            if mono:
                body = "*".join(mono) if mag == 1 else f"{mag}*" + "*".join(mono)
            else:
                body = str(mag)
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


class YPoly:
    """Immutable univariate polynomial in y over the rationals.

    ``coeffs[i]`` is the coefficient of ``y**i``; trailing zeros are trimmed.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [Fraction(v) for v in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def from_dict(cls, coeffs: Mapping[int, Scalar]) -> "YPoly":
        if not coeffs:
            return cls()
        dense = [Fraction(0)] * (max(coeffs) + 1)
        for i, v in coeffs.items():
            dense[i] += v
        return cls(dense)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other) -> bool:
        if isinstance(other, YPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other: "YPoly") -> "YPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return YPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "YPoly":
        return YPoly(-v for v in self.coeffs)

    def __sub__(self, other: "YPoly") -> "YPoly":
        return self + (-other)

    def __mul__(self, other) -> "YPoly":
        if isinstance(other, (int, Fraction)):
            return YPoly(v * other for v in self.coeffs)
        if not isinstance(other, YPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return YPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return YPoly(out)

    __rmul__ = __mul__

    def diff(self) -> "YPoly":
        return YPoly(i * v for i, v in enumerate(self.coeffs) if i > 0)

    def __call__(self, y):
        acc = 0
        for v in reversed(self.coeffs):
            acc = acc * y + v
        return acc

    def to_floats(self) -> list[float]:
        return [float(v) for v in self.coeffs]

    def __repr__(self) -> str:
        return f"YPoly({[str(v) for v in self.coeffs]})"


def add(p: CYPoly, q: CYPoly) -> CYPoly:
    return p + q


def mul(p: CYPoly, q: CYPoly) -> CYPoly:
    return p * q


def diff_y(p: CYPoly) -> CYPoly:
    return p.diff_y()


def double_integrate_zero_ic(p: CYPoly) -> CYPoly:
    return p.double_integrate_zero_ic()


def specialize_c(p: CYPoly, c_value) -> YPoly:
    return p.specialize_c(c_value)
