"""Truncated power series with exact rational coefficients.

A series carries its own truncation order N and stores coefficients for
exponents 0..N-1.  Binary operations return the minimum of the operands'
orders, so a result never claims accuracy it does not have.  Values are
immutable; all operations are pure.

Two coefficient modes exist and never mix inside one value: exact mode
(``fractions.Fraction``) and numeric mode (mpmath real/complex big floats,
used by the evaluation layer).
"""

from fractions import Fraction

import mpmath

from .errors import InputError, VariableMismatchError

__all__ = ["rat", "rat_str", "TruncatedSeries"]


def rat(x):
    """Coerce ints, Fractions and 'p/q' strings to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational: {x!r}") from exc
    raise InputError(f"cannot interpret {type(x).__name__} as a rational")


def rat_str(x):
    """Serialize a Fraction as 'p/q' (denominator always present)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _coerce_exact(x):
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    if isinstance(x, str):
        return rat(x)
    raise TypeError(f"exact series coefficient must be rational, got {type(x).__name__}")


def _coerce_numeric(x):
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return x
    if isinstance(x, complex):
        return mpmath.mpc(x)
    if isinstance(x, (int, float, Fraction)):
        return mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x)
    raise TypeError(f"numeric series coefficient must be a number, got {type(x).__name__}")


class TruncatedSeries:
    """Power series in one variable, truncated at a fixed order."""

    __slots__ = ("var", "order", "coeffs", "numeric")

    def __init__(self, var, order, coeffs, numeric=False):
        if order < 1:
            raise ValueError("truncation order must be >= 1")
        coerce = _coerce_numeric if numeric else _coerce_exact
        cs = [coerce(c) for c in coeffs]
        if len(cs) > order:
            raise ValueError("more coefficients than the truncation order allows")
        zero = mpmath.mpf(0) if numeric else Fraction(0)
        cs.extend([zero] * (order - len(cs)))
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "numeric", numeric)

    def __setattr__(self, *a):
        raise AttributeError("TruncatedSeries is immutable")

    # ------------------------------------------------------------- basics
    @classmethod
    def zero(cls, var, order, numeric=False):
        return cls(var, order, [], numeric=numeric)

    @classmethod
    def one(cls, var, order, numeric=False):
        return cls(var, order, [1], numeric=numeric)

    @classmethod
    def identity(cls, var, order, numeric=False):
        return cls(var, order, [0, 1], numeric=numeric)

    def coefficient(self, n):
        if not 0 <= n < self.order:
            raise IndexError(f"coefficient {n} beyond truncation order {self.order}")
        return self.coeffs[n]

    @property
    def constant_term(self):
        return self.coeffs[0]

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def valuation(self):
        """Index of the first nonzero stored coefficient, or None if all vanish."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def truncate(self, order):
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncatedSeries(self.var, order, self.coeffs[:order], numeric=self.numeric)

    def _check_mate(self, other):
        if self.var != other.var:
            raise VariableMismatchError(f"series in {self.var!r} vs {other.var!r}")
        if self.numeric != other.numeric:
            raise TypeError("cannot mix exact and numeric series")

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.var == other.var and self.order == other.order
                and self.numeric == other.numeric and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.var, self.order, self.coeffs))

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        tail = ", ..." if self.order > 6 else ""
        return f"TruncatedSeries({self.var!r}, N={self.order}, [{shown}{tail}])"

    # --------------------------------------------------------- arithmetic
    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self + TruncatedSeries(self.var, self.order, [other], numeric=self.numeric)
        self._check_mate(other)
        n = min(self.order, other.order)
        return TruncatedSeries(self.var, n,
                               [self.coeffs[i] + other.coeffs[i] for i in range(n)],
                               numeric=self.numeric)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(self.var, self.order, [-c for c in self.coeffs],
                               numeric=self.numeric)

    def __sub__(self, other):
        return self + (-other if isinstance(other, TruncatedSeries) else -_coerce_like(self, other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            c = _coerce_numeric(other) if self.numeric else _coerce_exact(other)
            return TruncatedSeries(self.var, self.order, [c * x for x in self.coeffs],
                                   numeric=self.numeric)
        self._check_mate(other)
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [None] * n
        for k in range(n):
            acc = a[0] * b[k]
            for i in range(1, k + 1):
                acc += a[i] * b[k - i]
            out[k] = acc
        return TruncatedSeries(self.var, n, out, numeric=self.numeric)

    __rmul__ = __mul__

    def reciprocal(self):
        """Multiplicative inverse; requires a nonzero constant term."""
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("series reciprocal needs a nonzero constant term")
        inv0 = 1 / a[0] if self.numeric else Fraction(1) / a[0]
        out = [inv0]
        for n in range(1, self.order):
            acc = a[1] * out[n - 1]
            for k in range(2, n + 1):
                acc += a[k] * out[n - k]
            out.append(-inv0 * acc)
        return TruncatedSeries(self.var, self.order, out, numeric=self.numeric)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.reciprocal()
        c = _coerce_numeric(other) if self.numeric else _coerce_exact(other)
        return self * (1 / c if self.numeric else Fraction(1) / c)

    # ------------------------------------------- composition and friends
    def compose(self, inner):
        """self(inner(x)); inner must have zero constant term."""
        self._check_mate(inner)
        if inner.coeffs[0] != 0:
            raise ValueError("composition needs inner constant term 0")
        n = min(self.order, inner.order)
        out = TruncatedSeries(self.var, n, [self.coeffs[n - 1]], numeric=self.numeric)
        inner_t = inner.truncate(n)
        for k in range(n - 2, -1, -1):
            out = out * inner_t + self.coeffs[k]
        return out

    def exp(self):
        """exp of a series with zero constant term."""
        a = self.coeffs
        if a[0] != 0:
            raise ValueError("series exp needs constant term 0")
        one = mpmath.mpf(1) if self.numeric else Fraction(1)
        out = [one]
        for n in range(1, self.order):
            acc = a[1] * out[n - 1]
            for k in range(2, n + 1):
                acc += k * a[k] * out[n - k]
            out.append(acc / n)
        return TruncatedSeries(self.var, self.order, out, numeric=self.numeric)

    def log(self):
        """log of a series with constant term 1."""
        a = self.coeffs
        if a[0] != 1:
            raise ValueError("series log needs constant term 1")
        zero = mpmath.mpf(0) if self.numeric else Fraction(0)
        out = [zero]
        for n in range(1, self.order):
            acc = zero
            for k in range(1, n):
                acc += k * out[k] * a[n - k]
            out.append(a[n] - acc / n)
        return TruncatedSeries(self.var, self.order, out, numeric=self.numeric)

    def reverse(self):
        """Compositional inverse g with self(g(x)) = x + O(x^N).

        Requires zero constant term and nonzero linear term.  Uses Lagrange
        inversion, [x^n] g = (1/n) [x^(n-1)] (x/f)^n, with the powers formed
        through exp/log so the whole reversion costs O(N^3).
        """
        a = self.coeffs
        if a[0] != 0 or len(a) < 2 or a[1] == 0:
            raise ValueError("reversion needs f(0)=0 and f'(0) != 0")
        n = self.order
        # u = x/f = 1/(a1 + a2 x + ...); constant term a1 != 0
        shifted = TruncatedSeries(self.var, n, list(a[1:]), numeric=self.numeric)
        u = shifted.reciprocal()
        c0 = u.coeffs[0]
        lg = (u / c0).log()
        out = [a[0] * 0, 1 / a[1] if self.numeric else Fraction(1) / a[1]]
        for k in range(2, n):
            pk = (lg * k).exp() * (c0 ** k)
            out.append(pk.coeffs[k - 1] / k)
        return TruncatedSeries(self.var, n, out, numeric=self.numeric)

    def derivative(self):
        """d/dvar; the result is honest only to order N-1."""
        if self.order == 1:
            return TruncatedSeries(self.var, 1, [], numeric=self.numeric)
        out = [i * self.coeffs[i] for i in range(1, self.order)]
        return TruncatedSeries(self.var, self.order - 1, out, numeric=self.numeric)

    def euler(self):
        """var * d/dvar; preserves the truncation order."""
        return TruncatedSeries(self.var, self.order,
                               [i * c for i, c in enumerate(self.coeffs)],
                               numeric=self.numeric)

    def evaluate(self, x):
        """Plain truncated Horner evaluation (no tail control)."""
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    # ------------------------------------------------------------- wire
    def to_json(self):
        if self.numeric:
            raise TypeError("numeric-mode series do not serialize")
        return {"variable": self.var, "order": self.order,
                "coefficients": [rat_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(obj["variable"], int(obj["order"]),
                       [rat(c) for c in obj["coefficients"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed series JSON: {exc}") from exc


def _coerce_like(s, x):
    return TruncatedSeries(s.var, s.order, [x], numeric=s.numeric)
