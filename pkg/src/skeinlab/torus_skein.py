"""Skein algebra of the once-punctured torus.

The algebra is presented by three generators x, y, z (the meridian, a
longitude, and a slope-one curve) subject to

    A*x*y - A^-1*y*x = (A^2 - A^-2)*z

and its two cyclic companions in (y, z; x) and (z, x; y).  Solving each
relation for the descending product gives a confluent rewriting system onto
the ordered monomials x^a y^b z^c, which form a basis.  Coefficients are
exact Laurent polynomials in A.

Setting A = -e^{h/4} makes the commutator of any two elements divisible by
h; the constant term of commutator/h is the Poisson bracket of the classical
(commutative) limit.  `poisson_bracket` performs that extraction exactly,
returning a commutative polynomial with rational coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Union

from .poly import LaurentPoly, render_laurent

Monomial = tuple[int, int, int]
_X, _Y, _Z = 0, 1, 2
_NAMES = ("x", "y", "z")

_REWRITES: dict[tuple[int, int], tuple[tuple[tuple[int, ...], LaurentPoly], ...]] = {
    (_Y, _X): (((_X, _Y), LaurentPoly({2: 1})), ((_Z,), LaurentPoly({3: -1, -1: 1}))),
    (_Z, _Y): (((_Y, _Z), LaurentPoly({2: 1})), ((_X,), LaurentPoly({3: -1, -1: 1}))),
    (_Z, _X): (((_X, _Z), LaurentPoly({-2: 1})), ((_Y,), LaurentPoly({1: 1, -3: -1}))),
}

_NORMAL_MEMO: dict[tuple[int, ...], dict[Monomial, LaurentPoly]] = {}


def _first_redex(w: tuple[int, ...]) -> int:
    for i in range(len(w) - 1):
        if (w[i], w[i + 1]) in _REWRITES:
            return i
    return -1


def _normalize_word(word: tuple[int, ...]) -> dict[Monomial, LaurentPoly]:
    """Expand a generator word into sorted monomials with Laurent coefficients.

    Iterative depth-first pass so every intermediate word is memoized once;
    the rewrite system branches, and without sharing the same intermediate
    word would be re-expanded exponentially often.
    """
    cached = _NORMAL_MEMO.get(word)
    if cached is not None:
        return cached
    stack = [word]
    while stack:
        w = stack[-1]
        if w in _NORMAL_MEMO:
            stack.pop()
            continue
        i = _first_redex(w)
        if i < 0:
            key = (w.count(_X), w.count(_Y), w.count(_Z))
            _NORMAL_MEMO[w] = {key: LaurentPoly.one()}
            stack.pop()
            continue
        children = [
            (w[:i] + repl + w[i + 2:], rc)
            for repl, rc in _REWRITES[(w[i], w[i + 1])]
        ]
        missing = [cw for cw, _ in children if cw not in _NORMAL_MEMO]
        if missing:
            stack.extend(missing)
            continue
        out: dict[Monomial, LaurentPoly] = {}
        for cw, rc in children:
            for key, c in _NORMAL_MEMO[cw].items():
                term = c * rc
                prev = out.get(key)
                acc = term if prev is None else prev + term
                if acc.is_zero:
                    out.pop(key, None)
                else:
                    out[key] = acc
        _NORMAL_MEMO[w] = out
        stack.pop()
    return _NORMAL_MEMO[word]


Coeffish = Union[int, Fraction, LaurentPoly]


def _as_poly(c: Coeffish) -> LaurentPoly:
    return c if isinstance(c, LaurentPoly) else LaurentPoly.term(c)


class TorusSkeinElement:
    """Linear combination of normal-form monomials x^a y^b z^c."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Coeffish] = ()):
        table: dict[Monomial, LaurentPoly] = {}
        for mono, c in dict(terms).items():
            mono = tuple(int(e) for e in mono)  # type: ignore[assignment]
            if len(mono) != 3 or any(e < 0 for e in mono):
                raise ValueError(f"bad monomial {mono!r}")
            p = _as_poly(c)
            if not p.is_zero:
                table[mono] = p
        self._terms = table

    # -- constructors --------------------------------------------------
    @classmethod
    def zero(cls) -> "TorusSkeinElement":
        return cls()

    @classmethod
    def one(cls) -> "TorusSkeinElement":
        return cls({(0, 0, 0): 1})

    @classmethod
    def x(cls) -> "TorusSkeinElement":
        return cls({(1, 0, 0): 1})

    @classmethod
    def y(cls) -> "TorusSkeinElement":
        return cls({(0, 1, 0): 1})

    @classmethod
    def z(cls) -> "TorusSkeinElement":
        return cls({(0, 0, 1): 1})

    @classmethod
    def monomial(cls, a: int, b: int, c: int, coeff: Coeffish = 1) -> "TorusSkeinElement":
        return cls({(a, b, c): coeff})

    # -- inspection ----------------------------------------------------
    def items(self) -> list[tuple[Monomial, LaurentPoly]]:
        return sorted(self._terms.items(), key=lambda kv: _display_key(kv[0]))

    def coeff(self, mono: Monomial) -> LaurentPoly:
        return self._terms.get(tuple(mono), LaurentPoly.zero())

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, LaurentPoly)):
            other = TorusSkeinElement({(0, 0, 0): other})
        if not isinstance(other, TorusSkeinElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other) -> "TorusSkeinElement":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        table = dict(self._terms)
        for m, c in other._terms.items():
            prev = table.get(m)
            table[m] = c if prev is None else prev + c
        return TorusSkeinElement(table)

    __radd__ = __add__

    def __neg__(self) -> "TorusSkeinElement":
        return TorusSkeinElement({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "TorusSkeinElement":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "TorusSkeinElement":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "TorusSkeinElement":
        if isinstance(other, (int, Fraction, LaurentPoly)):
            p = _as_poly(other)
            return TorusSkeinElement({m: c * p for m, c in self._terms.items()})
        if not isinstance(other, TorusSkeinElement):
            return NotImplemented
        result: dict[Monomial, LaurentPoly] = {}
        for (a1, b1, c1), p1 in self._terms.items():
            for (a2, b2, c2), p2 in other._terms.items():
                word = (_X,) * a1 + (_Y,) * b1 + (_Z,) * c1 \
                    + (_X,) * a2 + (_Y,) * b2 + (_Z,) * c2
                weight = p1 * p2
                for mono, c in _normalize_word(word).items():
                    add = c * weight
                    prev = result.get(mono)
                    result[mono] = add if prev is None else prev + add
        return TorusSkeinElement(result)

    def __rmul__(self, other) -> "TorusSkeinElement":
        if isinstance(other, (int, Fraction, LaurentPoly)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "TorusSkeinElement":
        if n < 0:
            raise ValueError("negative powers are not defined in the skein algebra")
        result = TorusSkeinElement.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- specialization ------------------------------------------------
    def specialize(self, a) -> "CommPoly":
        """Evaluate every coefficient at A=a, yielding a commutative polynomial."""
        return CommPoly({m: c.eval_at(a) for m, c in self._terms.items()})

    def __str__(self) -> str:
        return render_skein(self)

    def __repr__(self) -> str:
        return f"TorusSkeinElement({self._terms!r})"


def _coerce(v) -> TorusSkeinElement | None:
    if isinstance(v, TorusSkeinElement):
        return v
    if isinstance(v, (int, Fraction, LaurentPoly)):
        return TorusSkeinElement({(0, 0, 0): v})
    return None


def _display_key(mono: Monomial):
    return (-sum(mono), tuple(-e for e in mono))


def _render_monomial(mono: Monomial) -> str:
    parts = []
    for name, e in zip(_NAMES, mono):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def render_skein(elem: "TorusSkeinElement") -> str:
    """Render with monomials in total-degree order, e.g. `A^2*x*y - (A^3 - A^-1)*z`."""
    if elem.is_zero:
        return "0"
    pieces = []
    for mono, poly in elem.items():
        body = render_laurent(poly)
        mono_text = _render_monomial(mono)
        if len(poly.support()) > 1:
            sign = "+"
            if body.startswith("-"):
                sign = "-"
                body = render_laurent(-poly)
            text = f"({body})*{mono_text}" if mono_text else f"({body})"
        else:
            sign = "-" if body.startswith("-") else "+"
            if body.startswith("-"):
                body = body[1:]
            if not mono_text:
                text = body
            elif body == "1":
                text = mono_text
            else:
                text = f"{body}*{mono_text}"
        pieces.append((sign, text))
    out = pieces[0][1] if pieces[0][0] == "+" else "-" + pieces[0][1]
    for sign, text in pieces[1:]:
        out += f" {sign} {text}"
    return out


# ----------------------------------------------------------------------
# commutative limit


class CommPoly:
    """Commutative polynomial in x, y, z with numeric coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, object] = ()):
        table = {}
        for mono, c in dict(terms).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != 3 or any(e < 0 for e in mono):
                raise ValueError(f"bad monomial {mono!r}")
            if c != 0:
                table[mono] = c
        self._terms = table

    @classmethod
    def zero(cls) -> "CommPoly":
        return cls()

    @classmethod
    def constant(cls, c) -> "CommPoly":
        return cls({(0, 0, 0): c})

    @classmethod
    def x(cls) -> "CommPoly":
        return cls({(1, 0, 0): 1})

    @classmethod
    def y(cls) -> "CommPoly":
        return cls({(0, 1, 0): 1})

    @classmethod
    def z(cls) -> "CommPoly":
        return cls({(0, 0, 1): 1})

    def items(self) -> list[tuple[Monomial, object]]:
        return sorted(self._terms.items(), key=lambda kv: _display_key(kv[0]))

    def coeff(self, mono: Monomial):
        return self._terms.get(tuple(mono), 0)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, float, complex, Fraction)):
            other = CommPoly.constant(other)
        if not isinstance(other, CommPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other) -> "CommPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        table = dict(self._terms)
        for m, c in other._terms.items():
            table[m] = table.get(m, 0) + c
        return CommPoly(table)

    __radd__ = __add__

    def __neg__(self) -> "CommPoly":
        return CommPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "CommPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "CommPoly":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "CommPoly":
        if isinstance(other, (int, float, complex, Fraction)):
            return CommPoly({m: c * other for m, c in self._terms.items()})
        if not isinstance(other, CommPoly):
            return NotImplemented
        table: dict[Monomial, object] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                table[m] = table.get(m, 0) + c1 * c2
        return CommPoly(table)

    def __rmul__(self, other) -> "CommPoly":
        if isinstance(other, (int, float, complex, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int) -> "CommPoly":
        if n < 0:
            raise ValueError("negative powers not supported")
        out = CommPoly.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    @staticmethod
    def _coerce(v) -> "CommPoly | None":
        if isinstance(v, CommPoly):
            return v
        if isinstance(v, (int, float, complex, Fraction)):
            return CommPoly.constant(v)
        return None

    def evaluate(self, x, y, z):
        total = 0
        for (a, b, c), coeff in self._terms.items():
            total = total + coeff * x ** a * y ** b * z ** c
        return total

    def max_abs_diff(self, other: "CommPoly") -> float:
        keys = set(self._terms) | set(other._terms)
        return max((abs(complex(self.coeff(k)) - complex(other.coeff(k))) for k in keys),
                   default=0.0)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for mono, c in self.items():
            mono_text = _render_monomial(mono)
            if isinstance(c, (int, Fraction)):
                sign = "-" if c < 0 else "+"
                mag = -c if c < 0 else c
                body = str(mag)
            else:
                sign = "+"
                body = f"({c})"
            if not mono_text:
                text = body
            elif body == "1":
                text = mono_text
            else:
                text = f"{body}*{mono_text}"
            pieces.append((sign, text))
        out = pieces[0][1] if pieces[0][0] == "+" else "-" + pieces[0][1]
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    def __repr__(self) -> str:
        return f"CommPoly({self._terms!r})"


def lift(p: CommPoly) -> TorusSkeinElement:
    """Section of the classical limit: monomials with constant coefficients.

    Requires exact (integer or rational) coefficients; the choice of section
    does not affect Poisson brackets because it is unique modulo h.
    """
    table = {}
    for mono, c in p.items():
        if not isinstance(c, (int, Fraction)):
            raise TypeError("lift needs exact integer or rational coefficients")
        table[mono] = LaurentPoly.term(c)
    return TorusSkeinElement(table)


def specialize(p: TorusSkeinElement, a) -> CommPoly:
    return p.specialize(a)


def poisson_bracket(p, q, order: int = 3) -> CommPoly:
    """Poisson bracket of the classical limit, extracted from the commutator.

    Computes p*q - q*p, pushes every coefficient through A = -e^{h/4}, checks
    divisibility by h, and returns the constant term of commutator/h.  Inputs
    may be TorusSkeinElement values or exact CommPoly values (lifted).
    """
    if order < 2:
        raise ValueError("need series order >= 2 to divide by h meaningfully")
    if isinstance(p, CommPoly):
        p = lift(p)
    if isinstance(q, CommPoly):
        q = lift(q)
    comm = p * q - q * p
    table: dict[Monomial, Fraction] = {}
    for mono, coeff in comm.items():
        series = coeff.to_h_series(order)
        if series.constant_term() != 0:
            raise ArithmeticError(
                "commutator has a nonzero classical term; rewriting is inconsistent")
        table[mono] = series.divide_by_h().constant_term()
    return CommPoly(table)


# ----------------------------------------------------------------------
# expression parsing (CLI surface)


class _Tokens:
    def __init__(self, text: str):
        self.toks: list[tuple[str, str]] = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.toks.append(("num", text[i:j]))
                i = j
            elif ch in "xyzA":
                self.toks.append(("name", ch))
                i += 1
            elif ch in "+-*^()":
                self.toks.append((ch, ch))
                i += 1
            else:
                raise ValueError(f"unexpected character {ch!r} in expression")
        self.pos = 0

    def peek(self) -> str | None:
        return self.toks[self.pos][0] if self.pos < len(self.toks) else None

    def take(self) -> tuple[str, str]:
        if self.pos >= len(self.toks):
            raise ValueError("unexpected end of expression")
        tok = self.toks[self.pos]
        self.pos += 1
        return tok


def parse_skein(text: str) -> TorusSkeinElement:
    """Parse expressions like `2*x^2*y - A^2*z + (x - y)*z`.

    `*` is the noncommutative skein product, applied left to right; `A^k`
    (integer k, possibly negative) injects coefficient monomials.
    """
    toks = _Tokens(text)
    result = _parse_sum(toks)
    if toks.peek() is not None:
        raise ValueError(f"trailing input near {toks.take()[1]!r}")
    return result


def _parse_sum(toks: _Tokens) -> TorusSkeinElement:
    negate = False
    if toks.peek() in ("+", "-"):
        negate = toks.take()[0] == "-"
    total = _parse_product(toks)
    if negate:
        total = -total
    while toks.peek() in ("+", "-"):
        op = toks.take()[0]
        term = _parse_product(toks)
        total = total - term if op == "-" else total + term
    return total


def _parse_product(toks: _Tokens) -> TorusSkeinElement:
    total = _parse_power(toks)
    while toks.peek() == "*":
        toks.take()
        total = total * _parse_power(toks)
    return total


def _parse_power(toks: _Tokens) -> TorusSkeinElement:
    base = _parse_atom(toks)
    if toks.peek() != "^":
        return base
    toks.take()
    sign = 1
    if toks.peek() == "-":
        toks.take()
        sign = -1
    kind, text = toks.take()
    if kind != "num":
        raise ValueError("exponent must be an integer")
    n = sign * int(text)
    if n >= 0:
        return base ** n
    if len(base._terms) == 1 and (0, 0, 0) in base._terms:
        return TorusSkeinElement({(0, 0, 0): base._terms[(0, 0, 0)] ** n})
    raise ValueError("negative exponents only apply to coefficient monomials")


def _parse_atom(toks: _Tokens) -> TorusSkeinElement:
    kind, text = toks.take() if toks.peek() is not None else (None, "")
    if kind == "num":
        return TorusSkeinElement({(0, 0, 0): int(text)})
    if kind == "name":
        if text == "x":
            return TorusSkeinElement.x()
        if text == "y":
            return TorusSkeinElement.y()
        if text == "z":
            return TorusSkeinElement.z()
        return TorusSkeinElement({(0, 0, 0): LaurentPoly.a_power(1)})
    if kind == "(":
        inner = _parse_sum(toks)
        if toks.peek() != ")":
            raise ValueError("unbalanced parenthesis")
        toks.take()
        return inner
    raise ValueError(f"unexpected token {text!r}")
