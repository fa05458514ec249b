"""Sparse multivariate Laurent polynomials with exact rational coefficients.

Exponent vectors are fixed-arity integer tuples; the period engine uses
arity 5 with slots (y1, y2, y3, y4, a).  Zero coefficients are never stored.
Values are immutable and operations are pure.
"""

from fractions import Fraction

from .errors import InputError
from .series import rat, rat_str

__all__ = ["LaurentPolynomial"]


class LaurentPolynomial:
    __slots__ = ("arity", "terms")

    def __init__(self, arity, terms=()):
        clean = {}
        if isinstance(terms, dict):
            terms = terms.items()
        for exps, coef in terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != arity:
                raise ValueError(f"exponent vector {exps} has arity {len(exps)}, expected {arity}")
            coef = Fraction(coef)
            if coef == 0:
                continue
            clean[exps] = clean.get(exps, Fraction(0)) + coef
        object.__setattr__(self, "arity", arity)
        object.__setattr__(self, "terms",
                           {e: c for e, c in clean.items() if c != 0})

    def __setattr__(self, *a):
        raise AttributeError("LaurentPolynomial is immutable")

    @classmethod
    def zero(cls, arity):
        return cls(arity)

    @classmethod
    def constant(cls, arity, value):
        return cls(arity, {(0,) * arity: Fraction(value)})

    @classmethod
    def monomial(cls, exps, coef=1):
        exps = tuple(exps)
        return cls(len(exps), {exps: Fraction(coef)})

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), Fraction(0))

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    def __repr__(self):
        n = len(self.terms)
        return f"LaurentPolynomial(arity={self.arity}, {n} terms)"

    def __add__(self, other):
        self._check(other)
        acc = dict(self.terms)
        for e, c in other.terms.items():
            acc[e] = acc.get(e, Fraction(0)) + c
        return LaurentPolynomial(self.arity, acc)

    def __neg__(self):
        return LaurentPolynomial(self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentPolynomial(self.arity,
                                     {e: c * other for e, c in self.terms.items()})
        self._check(other)
        acc = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, Fraction(0)) + c1 * c2
        return LaurentPolynomial(self.arity, acc)

    __rmul__ = __mul__

    def shift(self, delta):
        """Multiply by the monomial with exponent vector delta."""
        delta = tuple(delta)
        return LaurentPolynomial(self.arity,
                                 {tuple(a + b for a, b in zip(e, delta)): c
                                  for e, c in self.terms.items()})

    def _check(self, other):
        if self.arity != other.arity:
            raise ValueError("arity mismatch")

    # ------------------------------------------------------------- wire
    def to_json(self):
        return {"arity": self.arity,
                "terms": [{"exponents": list(e), "coefficient": rat_str(c)}
                          for e, c in sorted(self.terms.items())]}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(int(obj["arity"]),
                       {tuple(t["exponents"]): rat(t["coefficient"])
                        for t in obj["terms"]})
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed Laurent polynomial JSON: {exc}") from exc
