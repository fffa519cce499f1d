"""Exact Laurent polynomials in the bracket variable A, and truncated h-series.

A Laurent polynomial is stored as a map from integer exponents to exact
rational coefficients; zero coefficients are never stored, so equality is
structural.  The h-series type holds the first coefficients of a formal power
series in h with exact rational entries.  The bridge between the two is the
substitution A = -exp(h/4), which sends a Laurent polynomial to its
deformation expansion around the classical point A = -1.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import factorial
from typing import Iterator, Mapping, Union

Scalar = Union[int, Fraction]


def _norm_scalar(c: Scalar) -> Scalar:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class LaurentPoly:
    """Laurent polynomial in A with exact integer or rational coefficients."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, Scalar] | None = None):
        clean: dict[int, Scalar] = {}
        if coeffs:
            for k, c in coeffs.items():
                if not isinstance(k, int):
                    raise TypeError(f"exponent {k!r} is not an integer")
                if not isinstance(c, (int, Fraction)):
                    raise TypeError(f"coefficient {c!r} is not exact")
                c = _norm_scalar(c)
                if c != 0:
                    clean[k] = c
        self._coeffs = clean

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def term(cls, coeff: Scalar, exp: int = 0) -> "LaurentPoly":
        return cls({exp: coeff})

    @classmethod
    def a_power(cls, exp: int) -> "LaurentPoly":
        return cls({exp: 1})

    def items(self) -> Iterator[tuple[int, Scalar]]:
        return iter(sorted(self._coeffs.items()))

    def coeff(self, exp: int) -> Scalar:
        return self._coeffs.get(exp, 0)

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def support(self) -> list[int]:
        return sorted(self._coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.term(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __add__(self, other: "LaurentPoly | Scalar") -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.term(other)
        elif not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self._coeffs)
        for k, c in other._coeffs.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({k: -c for k, c in self._coeffs.items()})

    def __sub__(self, other: "LaurentPoly | Scalar") -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            return self + (-other)
        if isinstance(other, (int, Fraction)):
            return self + LaurentPoly.term(-other)
        return NotImplemented

    def __rsub__(self, other: Scalar) -> "LaurentPoly":
        return LaurentPoly.term(other) - self

    def __mul__(self, other: "LaurentPoly | Scalar") -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            return LaurentPoly({k: c * other for k, c in self._coeffs.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out: dict[int, Scalar] = {}
        for k1, c1 in self._coeffs.items():
            for k2, c2 in other._coeffs.items():
                k = k1 + k2
                out[k] = out.get(k, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if len(self._coeffs) == 1:
                ((k, c),) = self._coeffs.items()
                if c in (1, -1):
                    return LaurentPoly({k * n: c if n % 2 else 1})
            raise ValueError("negative powers only defined for unit monomials")
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def eval_at(self, a: complex) -> complex:
        """Numeric evaluation at a nonzero complex value of A."""
        if a == 0:
            raise ValueError("Laurent polynomials cannot be evaluated at A = 0")
        if isinstance(a, (int, Fraction)):
            total: Scalar = 0
            for k, c in self._coeffs.items():
                total += c * (Fraction(a) ** k)
            return _norm_scalar(Fraction(total))
        return sum(c * a ** k for k, c in self._coeffs.items())

    def to_h_series(self, order: int) -> "HSeries":
        """Expand under the substitution A = -exp(h/4), truncated at h^order.

        A^k becomes (-1)^k exp(k h / 4), whose h^j coefficient is
        (-1)^k (k/4)^j / j!.
        """
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        coeffs = [Fraction(0)] * (order + 1)
        for k, c in self._coeffs.items():
            sign = -1 if k % 2 else 1
            base = Fraction(k, 4)
            for j in range(order + 1):
                coeffs[j] += Fraction(c) * sign * base ** j / factorial(j)
        return HSeries(order, coeffs)

    def __str__(self) -> str:
        return render_laurent(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({self._coeffs!r})"


def _render_coeff(c: Scalar) -> str:
    return str(c)


def render_laurent(p: LaurentPoly) -> str:
    """Render as e.g. 'A^7 + A^3 + A^-1 - A^-9', highest power first."""
    if p.is_zero:
        return "0"
    parts: list[str] = []
    for k in sorted(p.support(), reverse=True):
        c = p.coeff(k)
        neg = c < 0
        mag = -c if neg else c
        if k == 0:
            body = _render_coeff(mag)
        else:
            a = "A" if k == 1 else f"A^{k}"
            body = a if mag == 1 else f"{_render_coeff(mag)}*{a}"
        if not parts:
            parts.append(f"-{body}" if neg else body)
        else:
            parts.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(parts)


_TERM_RE = re.compile(
    r"""^\s*
        (?P<coeff>-?\d+(?:/\d+)?)?          # optional rational coefficient
        (?P<star>\s*\*\s*)?                 # optional *
        (?P<a>A(?:\^(?P<exp>-?\d+))?)?      # optional A power
        \s*$""",
    re.VERBOSE,
)


def parse_laurent(text: str) -> LaurentPoly:
    """Parse the rendering produced by render_laurent (and obvious variants)."""
    s = text.strip()
    if not s:
        raise ValueError("empty Laurent polynomial text")
    if s == "0":
        return LaurentPoly.zero()
    # Cut into signed terms.  A leading sign is optional.
    chunks = re.split(r"(?<![\^/*])\s*([+-])\s*", " " + s)
    # re.split with a captured group yields [head, sep, term, sep, term, ...]
    head = chunks[0].strip()
    terms: list[tuple[int, str]] = []
    if head:
        terms.append((1, head))
    for i in range(1, len(chunks) - 1, 2):
        sign = 1 if chunks[i] == "+" else -1
        terms.append((sign, chunks[i + 1].strip()))
    out = LaurentPoly.zero()
    for sign, body in terms:
        m = _TERM_RE.match(body)
        if not m or (m.group("coeff") is None and m.group("a") is None):
            raise ValueError(f"cannot parse term {body!r} in {text!r}")
        coeff_s = m.group("coeff")
        if coeff_s is None:
            coeff: Scalar = 1
        elif "/" in coeff_s:
            coeff = Fraction(coeff_s)
        else:
            coeff = int(coeff_s)
        if m.group("a") is None:
            exp = 0
        elif m.group("exp") is None:
            exp = 1
        else:
            exp = int(m.group("exp"))
        out = out + LaurentPoly.term(sign * coeff, exp)
    return out


class HSeries:
    """Truncated formal power series in h with exact rational coefficients.

    A series of order n knows the coefficients of h^0 .. h^n.  Binary
    operations truncate to the smaller order of the two operands.
    """

    __slots__ = ("_order", "_coeffs")

    def __init__(self, order: int, coeffs: list[Fraction] | tuple[Fraction, ...]):
        if order < 0:
            raise ValueError("series order must be nonnegative")
        if len(coeffs) != order + 1:
            raise ValueError("coefficient list length must be order + 1")
        self._order = order
        self._coeffs = tuple(Fraction(c) for c in coeffs)

    @classmethod
    def constant(cls, c: Scalar, order: int) -> "HSeries":
        coeffs = [Fraction(0)] * (order + 1)
        coeffs[0] = Fraction(c)
        return cls(order, coeffs)

    @property
    def order(self) -> int:
        return self._order

    def coeff(self, j: int) -> Fraction:
        if j > self._order:
            raise IndexError(f"series truncated at order {self._order}")
        return self._coeffs[j]

    def constant_term(self) -> Fraction:
        return self._coeffs[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HSeries):
            return NotImplemented
        return self._order == other._order and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash((self._order, self._coeffs))

    def agrees_with(self, other: "HSeries") -> bool:
        """Equality up to the smaller of the two truncation orders."""
        n = min(self._order, other._order)
        return self._coeffs[: n + 1] == other._coeffs[: n + 1]

    def _binary(self, other: "HSeries | Scalar", op) -> "HSeries":
        if isinstance(other, (int, Fraction)):
            other = HSeries.constant(other, self._order)
        n = min(self._order, other._order)
        return HSeries(n, [op(self._coeffs[j], other._coeffs[j]) for j in range(n + 1)])

    def __add__(self, other: "HSeries | Scalar") -> "HSeries":
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other: "HSeries | Scalar") -> "HSeries":
        return self._binary(other, lambda a, b: a - b)

    def __neg__(self) -> "HSeries":
        return HSeries(self._order, [-c for c in self._coeffs])

    def __mul__(self, other: "HSeries | Scalar") -> "HSeries":
        if isinstance(other, (int, Fraction)):
            return HSeries(self._order, [c * other for c in self._coeffs])
        n = min(self._order, other._order)
        coeffs = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            for j in range(n + 1 - i):
                coeffs[i + j] += self._coeffs[i] * other._coeffs[j]
        return HSeries(n, coeffs)

    __rmul__ = __mul__

    def divide_by_h(self) -> "HSeries":
        """Shift down by one power of h.  The constant term must vanish."""
        if self._coeffs[0] != 0:
            raise ValueError("constant term is nonzero, cannot divide by h")
        if self._order == 0:
            raise ValueError("order-0 series cannot be divided by h")
        return HSeries(self._order - 1, list(self._coeffs[1:]))

    def __str__(self) -> str:
        parts: list[str] = []
        for j, c in enumerate(self._coeffs):
            if c == 0:
                continue
            neg = c < 0
            mag = -c if neg else c
            if j == 0:
                body = str(mag)
            else:
                h = "h" if j == 1 else f"h^{j}"
                body = h if mag == 1 else f"{mag}*{h}"
            if not parts:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        tail = f"O(h^{self._order + 1})"
        if not parts:
            return tail
        return " ".join(parts) + " + " + tail

    def __repr__(self) -> str:
        return f"HSeries(order={self._order}, coeffs={[str(c) for c in self._coeffs]})"


#: The loop value of the bracket: removing a circle multiplies by -A^2 - A^-2.
LOOP_VALUE = LaurentPoly({2: -1, -2: -1})
