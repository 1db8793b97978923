"""Sparse exact-rational polynomials in one and two variables."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Number = Union[int, Fraction]


def falling(n: int, k: int) -> int:
    """``n (n-1) ... (n-k+1)``; zero when ``k > n``."""
    if k > n:
        return 0
    out = 1
    for m in range(n - k + 1, n + 1):
        out *= m
    return out


def _fmt_coef(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class UniPolynomial:
    """Univariate polynomial stored as ``{exponent: coefficient}`` without zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, Number] | None = None):
        self.coeffs: dict[int, Fraction] = {
            int(e): Fraction(c) for e, c in (coeffs or {}).items() if c != 0
        }

    @classmethod
    def from_list(cls, coeffs: Iterable[Number]) -> "UniPolynomial":
        return cls(dict(enumerate(coeffs)))

    @classmethod
    def monomial(cls, e: int, c: Number = 1) -> "UniPolynomial":
        return cls({e: c})

    @classmethod
    def linear_factor(cls, root: Number) -> "UniPolynomial":
        """``x - root``."""
        return cls({1: 1, 0: -Fraction(root)})

    @property
    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, UniPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __add__(self, other: "UniPolynomial") -> "UniPolynomial":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return UniPolynomial(out)

    def __neg__(self) -> "UniPolynomial":
        return UniPolynomial({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "UniPolynomial") -> "UniPolynomial":
        return self + (-other)

    def __mul__(self, other: "UniPolynomial | Number") -> "UniPolynomial":
        if not isinstance(other, UniPolynomial):
            return UniPolynomial({e: c * other for e, c in self.coeffs.items()})
        out: dict[int, Fraction] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return UniPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UniPolynomial":
        out = UniPolynomial({0: 1})
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def derivative(self, k: int = 1) -> "UniPolynomial":
        return UniPolynomial({e - k: c * falling(e, k) for e, c in self.coeffs.items() if e >= k})

    def __call__(self, x: Number) -> Fraction:
        # Horner over the dense range
        acc = Fraction(0)
        for e in range(self.degree, -1, -1):
            acc = acc * x + self.coeffs.get(e, 0)
        return acc

    def derivative_at(self, k: int, x: Number) -> Fraction:
        return self.derivative(k)(x)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{_fmt_coef(c)}*x^{e}" for e, c in sorted(self.coeffs.items(), reverse=True))


class SparsePolynomial:
    """Bivariate polynomial stored as ``{(a, b): coefficient}`` for ``x^a y^b``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], Number] | None = None):
        self.terms: dict[tuple[int, int], Fraction] = {
            (int(a), int(b)): Fraction(c) for (a, b), c in (terms or {}).items() if c != 0
        }

    @classmethod
    def tensor(cls, px: UniPolynomial, py: UniPolynomial) -> "SparsePolynomial":
        """``px(x) * py(y)``."""
        return cls({(a, b): ca * cb for a, ca in px.coeffs.items() for b, cb in py.coeffs.items()})

    def support(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SparsePolynomial):
            return self.terms == other.terms
        return NotImplemented

    def __add__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return SparsePolynomial(out)

    def __neg__(self) -> "SparsePolynomial":
        return SparsePolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        return self + (-other)

    def __mul__(self, other: "SparsePolynomial | Number") -> "SparsePolynomial":
        if not isinstance(other, SparsePolynomial):
            return SparsePolynomial({m: c * other for m, c in self.terms.items()})
        out: dict[tuple[int, int], Fraction] = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + c1 * c2
        return SparsePolynomial(out)

    __rmul__ = __mul__

    def derivative(self, i: int, j: int) -> "SparsePolynomial":
        """``d^{i+j} / dx^i dy^j``."""
        return SparsePolynomial({
            (a - i, b - j): c * falling(a, i) * falling(b, j)
            for (a, b), c in self.terms.items() if a >= i and b >= j
        })

    def __call__(self, x: Number, y: Number) -> Fraction:
        return sum((c * Fraction(x) ** a * Fraction(y) ** b for (a, b), c in self.terms.items()), Fraction(0))

    def derivative_at(self, i: int, j: int, x: Number, y: Number) -> Fraction:
        x, y = Fraction(x), Fraction(y)
        total = Fraction(0)
        for (a, b), c in self.terms.items():
            if a >= i and b >= j:
                total += c * falling(a, i) * falling(b, j) * x ** (a - i) * y ** (b - j)
        return total

    def to_terms(self) -> list[tuple[int, int, str]]:
        return [(a, b, _fmt_coef(c)) for (a, b), c in sorted(self.terms.items())]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{_fmt_coef(c)}*x^{a}*y^{b}" for (a, b), c in sorted(self.terms.items()))


def monomial_derivative(exp: tuple[int, int], order: tuple[int, int], at: tuple[Number, Number]) -> Fraction:
    """Value of ``d^{i+j}/dx^i dy^j (x^a y^b)`` at ``at``."""
    a, b = exp
    i, j = order
    if i > a or j > b:
        return Fraction(0)
    x, y = at
    return Fraction(falling(a, i) * falling(b, j)) * Fraction(x) ** (a - i) * Fraction(y) ** (b - j)


__all__ = ["SparsePolynomial", "UniPolynomial", "falling", "monomial_derivative"]
