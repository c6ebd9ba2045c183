"""Sparse polynomial phase-space symbols ``sum c_mn x^m p^n``.

Coefficients stay exact (Gaussian rationals) as long as every input is an
integer, a :class:`fractions.Fraction` or a :class:`QQi`; any float or
complex input switches that coefficient to Python ``complex``.

Text form: terms ``c*x^m*p^n`` joined by ``+``, complex coefficients written
``(re,im)``, e.g. ``1*x^1*p^1 + (0,1/2)``.
"""

from fractions import Fraction
import numbers
import re

import numpy as np

from .errors import SymbolParseError

_EXACT = (int, Fraction)


def _other_number(v):
    return isinstance(v, numbers.Number)


class QQi:
    """Exact complex rational ``re + i im``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def coerce(v):
        if isinstance(v, QQi):
            return v
        if isinstance(v, bool):
            v = int(v)
        if isinstance(v, _EXACT):
            return QQi(v, 0)
        return None

    def __add__(self, other):
        o = QQi.coerce(other)
        if o is None:
            return complex(self) + other if _other_number(other) else NotImplemented
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = QQi.coerce(other)
        if o is None:
            return complex(self) * other if _other_number(other) else NotImplemented
        return QQi(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QQi.coerce(other)
        if o is None:
            return complex(self) / other if _other_number(other) else NotImplemented
        d = o.re**2 + o.im**2
        return QQi((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = QQi.coerce(other)
        if o is None:
            return other / complex(self) if _other_number(other) else NotImplemented
        return o / self

    def __pow__(self, k):
        out = QQi(1)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self):
        return QQi(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __eq__(self, other):
        o = QQi.coerce(other)
        if o is None:
            try:
                return complex(self) == complex(other)
            except TypeError:
                return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"({self.re},{self.im})"


I = QQi(0, 1)


def _normalize_coeff(c):
    """Exact values become QQi, everything else complex."""
    q = QQi.coerce(c)
    if q is not None:
        return q
    if isinstance(c, numbers.Number):
        return complex(c)
    raise TypeError(f"unsupported coefficient {c!r}")


def _is_zero(c):
    return not c


class PolynomialSymbol:
    """Immutable sparse polynomial in ``x`` and ``p``."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for (m, n), c in (terms or {}).items():
            if m < 0 or n < 0:
                raise ValueError("negative exponent")
            c = _normalize_coeff(c)
            if not _is_zero(c):
                clean[(int(m), int(n))] = c
        self._terms = clean

    @classmethod
    def constant(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, m, n, c=1):
        return cls({(m, n): c})

    @property
    def terms(self):
        return dict(self._terms)

    def coefficient(self, m, n):
        return self._terms.get((m, n), QQi(0))

    @property
    def is_exact(self):
        return all(isinstance(c, QQi) for c in self._terms.values())

    @property
    def degree(self):
        return max((m + n for m, n in self._terms), default=0)

    @property
    def degree_x(self):
        return max((m for m, _ in self._terms), default=0)

    @property
    def degree_p(self):
        return max((n for _, n in self._terms), default=0)

    def __iter__(self):
        return iter(sorted(self._terms.items()))

    def __add__(self, other):
        other = as_symbol(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out[k] + c if k in out else c
        return PolynomialSymbol(out)

    __radd__ = __add__

    def __neg__(self):
        return PolynomialSymbol({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-as_symbol(other))

    def __rsub__(self, other):
        return as_symbol(other) - self

    def __mul__(self, other):
        if isinstance(other, PolynomialSymbol):
            out = {}
            for (m1, n1), c1 in self._terms.items():
                for (m2, n2), c2 in other._terms.items():
                    k = (m1 + m2, n1 + n2)
                    out[k] = out[k] + c1 * c2 if k in out else c1 * c2
            return PolynomialSymbol(out)
        c = _normalize_coeff(other)
        return PolynomialSymbol({k: v * c for k, v in self._terms.items()})

    __rmul__ = __mul__

    def __pow__(self, k):
        out = PolynomialSymbol.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, PolynomialSymbol):
            try:
                other = as_symbol(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def derivative(self, dx=0, dp=0):
        """``d^dx/dx^dx d^dp/dp^dp`` of the symbol."""
        out = {}
        for (m, n), c in self._terms.items():
            if m < dx or n < dp:
                continue
            factor = _falling(m, dx) * _falling(n, dp)
            out[(m - dx, n - dp)] = c * factor
        return PolynomialSymbol(out)

    def is_p_free(self):
        return all(n == 0 for _, n in self._terms)

    def conjugate(self):
        return PolynomialSymbol({k: c.conjugate() for k, c in self._terms.items()})

    def approx_equal(self, other, tol=1e-12):
        other = as_symbol(other)
        keys = set(self._terms) | set(other._terms)
        return all(abs(complex(self.coefficient(*k)) - complex(other.coefficient(*k))) <= tol
                   for k in keys)

    def evaluate(self, x, p):
        """Evaluate on numpy arrays (broadcast)."""
        x = np.asarray(x, dtype=float)
        p = np.asarray(p, dtype=float)
        out = np.zeros(np.broadcast(x, p).shape, dtype=complex)
        for (m, n), c in self._terms.items():
            out = out + complex(c) * x**m * p**n
        return out

    def __repr__(self):
        return f"PolynomialSymbol({format_symbol(self)!r})"

    def __str__(self):
        return format_symbol(self)


def _falling(m, k):
    out = 1
    for j in range(k):
        out *= m - j
    return out


def as_symbol(v):
    if isinstance(v, PolynomialSymbol):
        return v
    return PolynomialSymbol.constant(v)


X = PolynomialSymbol.monomial(1, 0)
P = PolynomialSymbol.monomial(0, 1)
ONE = PolynomialSymbol.constant(1)


def _format_number(v):
    if isinstance(v, Fraction):
        return str(v)
    return repr(float(v))


def _format_coeff(c):
    if isinstance(c, QQi):
        if c.im == 0:
            return _format_number(c.re)
        return f"({_format_number(c.re)},{_format_number(c.im)})"
    if c.imag == 0:
        return repr(c.real)
    return f"({c.real!r},{c.imag!r})"


def format_symbol(sym):
    if not sym._terms:
        return "0"
    parts = [f"{_format_coeff(c)}*x^{m}*p^{n}" for (m, n), c in sorted(sym._terms.items())]
    return " + ".join(parts)


_NUMBER = re.compile(r"^[-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?$")
_RATIONAL = re.compile(r"^[-+]?\d+/\d+$")
_POWER = re.compile(r"^([xp])(\^(\d+))?$")


def _parse_number(text):
    text = text.strip()
    if _RATIONAL.match(text) or re.match(r"^[-+]?\d+$", text):
        return Fraction(text)
    if _NUMBER.match(text):
        return float(text)
    raise SymbolParseError(f"not a number: {text!r}")


def _split_top(text, sep):
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            # keep exponents of floats such as 1e+5 intact
            if sep == "+" and i > 0 and text[i - 1] in "eE" and i > 1 and text[i - 2].isdigit():
                continue
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def parse_symbol(text):
    """Parse the sparse term-list grammar into a :class:`PolynomialSymbol`."""
    text = text.strip()
    if not text:
        raise SymbolParseError("empty symbol")
    total = PolynomialSymbol()
    for term in _split_top(text, "+"):
        term = term.strip()
        if not term:
            raise SymbolParseError(f"empty term in {text!r}")
        coeff = QQi(1)
        m = n = 0
        for factor in _split_top(term, "*"):
            factor = factor.strip()
            sign = 1
            if factor.startswith("-") and _POWER.match(factor[1:]):
                sign, factor = -1, factor[1:]
            power = _POWER.match(factor)
            if power:
                k = int(power.group(3) or 1)
                if power.group(1) == "x":
                    m += k
                else:
                    n += k
                coeff = coeff * sign
            elif factor.startswith("(") and factor.endswith(")"):
                pieces = _split_top(factor[1:-1], ",")
                if len(pieces) != 2:
                    raise SymbolParseError(f"complex coefficient must be (re,im): {factor!r}")
                re_, im_ = (_parse_number(s) for s in pieces)
                if isinstance(re_, Fraction) and isinstance(im_, Fraction):
                    coeff = coeff * QQi(re_, im_)
                else:
                    coeff = coeff * complex(float(re_), float(im_))
            else:
                coeff = coeff * _parse_number(factor)
        total = total + PolynomialSymbol({(m, n): coeff})
    return total
