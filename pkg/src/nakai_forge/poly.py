"""Exact sparse multivariate polynomial arithmetic over the rationals.

A polynomial in n variables is stored as a map from exponent tuples to
nonzero Fraction coefficients, so equal polynomials always have identical
term maps and every operation is exact.  Variable indices are 1-based in
the public API (x1, ..., xn); exponent tuples are indexed positionally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

Exponent = tuple[int, ...]

Scalar = (int, Fraction)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients.

    The variable count ``n`` is fixed per value; binary operations with a
    mismatched variable count raise ``ValueError`` rather than embedding
    one ring into the other.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Exponent, Fraction | int] | None = None):
        if n < 0:
            raise ValueError(f"variable count must be non-negative, got {n}")
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                exp = tuple(exp)
                if len(exp) != n:
                    raise ValueError(f"exponent {exp} has length {len(exp)}, expected {n}")
                if any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent in {exp}")
                c = Fraction(coeff)
                if c:
                    clean[exp] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(n: int) -> "Polynomial":
        return Polynomial(n)

    @staticmethod
    def constant(n: int, value: Fraction | int) -> "Polynomial":
        return Polynomial(n, {(0,) * n: Fraction(value)})

    @staticmethod
    def variable(n: int, i: int) -> "Polynomial":
        """The polynomial x_i (1-based index)."""
        if not 1 <= i <= n:
            raise IndexError(f"variable index {i} out of range 1..{n}")
        exp = [0] * n
        exp[i - 1] = 1
        return Polynomial(n, {tuple(exp): Fraction(1)})

    @staticmethod
    def monomial(n: int, exp: Sequence[int], coeff: Fraction | int = 1) -> "Polynomial":
        return Polynomial(n, {tuple(exp): Fraction(coeff)})

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[Exponent, Fraction]]:
        return iter(self.terms.items())

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.n, Fraction(0))

    def total_degree(self) -> int:
        """Maximal term degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def homogeneous_degree(self) -> int | None:
        """The common degree of all terms, or None if mixed.

        Raises ValueError on the zero polynomial, whose degree is not defined.
        """
        if not self.terms:
            raise ValueError("homogeneous degree of the zero polynomial is undefined")
        degrees = {sum(e) for e in self.terms}
        if len(degrees) == 1:
            return degrees.pop()
        return None

    def is_homogeneous(self) -> bool:
        return bool(self.terms) and self.homogeneous_degree() is not None

    def homogeneous_component(self, degree: int) -> "Polynomial":
        return Polynomial(self.n, {e: c for e, c in self.terms.items() if sum(e) == degree})

    def _check_same_ring(self, other: "Polynomial") -> None:
        if self.n != other.n:
            raise ValueError(f"variable-count mismatch: {self.n} vs {other.n}")

    # -- ring operations -----------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_same_ring(other)
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            c = out.get(exp, Fraction(0)) + coeff
            if c:
                out[exp] = c
            else:
                out.pop(exp, None)
        return Polynomial._raw(self.n, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_same_ring(other)
        out = dict(self.terms)
        for exp, coeff in other.terms.items():
            c = out.get(exp, Fraction(0)) - coeff
            if c:
                out[exp] = c
            else:
                out.pop(exp, None)
        return Polynomial._raw(self.n, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.n, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Scalar):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_same_ring(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                c = out.get(exp, Fraction(0)) + c1 * c2
                if c:
                    out[exp] = c
                else:
                    out.pop(exp, None)
        return Polynomial._raw(self.n, out)

    def __rmul__(self, other):
        if isinstance(other, Scalar):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: Fraction | int) -> "Polynomial":
        c = Fraction(c)
        if not c:
            return Polynomial(self.n)
        return Polynomial._raw(self.n, {e: coeff * c for e, coeff in self.terms.items()})

    def mul_monomial(self, exp: Sequence[int], coeff: Fraction | int = 1) -> "Polynomial":
        """Multiply by coeff * x^exp without building an intermediate Polynomial."""
        exp = tuple(exp)
        c = Fraction(coeff)
        if not c:
            return Polynomial(self.n)
        return Polynomial._raw(
            self.n,
            {tuple(a + b for a, b in zip(e, exp)): cf * c for e, cf in self.terms.items()},
        )

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    __hash__ = None  # mutable-looking container; identity-free equality only

    def __repr__(self) -> str:
        if not self.terms:
            return f"Polynomial({self.n}, 0)"
        parts = [f"{c}*x^{e}" for e, c in sorted(self.terms.items())]
        return f"Polynomial({self.n}, {' + '.join(parts)})"

    @staticmethod
    def _raw(n: int, terms: dict[Exponent, Fraction]) -> "Polynomial":
        """Internal: wrap an already-clean term dict without re-validation."""
        p = object.__new__(Polynomial)
        object.__setattr__(p, "n", n)
        object.__setattr__(p, "terms", terms)
        return p

    # -- calculus -------------------------------------------------------

    def partial(self, i: int) -> "Polynomial":
        """Formal partial derivative with respect to x_i (1-based)."""
        if not 1 <= i <= self.n:
            raise IndexError(f"variable index {i} out of range 1..{self.n}")
        k = i - 1
        out: dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms.items():
            if exp[k] == 0:
                continue
            new = list(exp)
            new[k] -= 1
            key = tuple(new)
            c = out.get(key, Fraction(0)) + coeff * exp[k]
            if c:
                out[key] = c
            else:
                out.pop(key, None)
        return Polynomial._raw(self.n, out)

    def higher_partial(self, alpha: Sequence[int]) -> "Polynomial":
        """Divided-power derivative (1/alpha!) d^|alpha| / dx^alpha.

        On a monomial x^g this gives prod(binomial(g_i, alpha_i)) * x^(g-alpha),
        so higher_partial(x^a, a) == 1.  The un-divided derivative is never
        exposed; all higher-order coefficients in this package use this
        normalization.
        """
        alpha = tuple(alpha)
        if len(alpha) != self.n:
            raise ValueError(f"multi-index length {len(alpha)} != {self.n}")
        if any(a < 0 for a in alpha):
            raise ValueError(f"negative entry in multi-index {alpha}")
        out: dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms.items():
            if any(e < a for e, a in zip(exp, alpha)):
                continue
            binom = 1
            for e, a in zip(exp, alpha):
                if a:
                    binom *= math.comb(e, a)
            key = tuple(e - a for e, a in zip(exp, alpha))
            c = out.get(key, Fraction(0)) + coeff * binom
            if c:
                out[key] = c
            else:
                out.pop(key, None)
        return Polynomial._raw(self.n, out)

    def euler(self) -> "Polynomial":
        """Apply the Euler operator sum_i x_i d/dx_i.

        Equals degree * self for homogeneous input.
        """
        out: dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms.items():
            d = sum(exp)
            if d:
                out[exp] = coeff * d
        return Polynomial._raw(self.n, out)

    def evaluate(self, point: Sequence[Fraction | int]) -> Fraction:
        """Exact evaluation at a rational point."""
        vals = [Fraction(v) for v in point]
        if len(vals) != self.n:
            raise ValueError(f"point has {len(vals)} coordinates, expected {self.n}")
        total = Fraction(0)
        for exp, coeff in self.terms.items():
            term = coeff
            for v, e in zip(vals, exp):
                if e:
                    term *= v**e
            total += term
        return total

    def substitute_variables(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute x_i -> images[i-1]; images live in an arbitrary ring."""
        if len(images) != self.n:
            raise ValueError(f"{len(images)} images for {self.n} variables")
        if not images:
            raise ValueError("cannot substitute in a ring with no variables")
        m = images[0].n
        if any(q.n != m for q in images):
            raise ValueError("substitution images have mixed variable counts")
        # cache powers of each image up to the needed exponent
        max_exp = [0] * self.n
        for exp in self.terms:
            for i, e in enumerate(exp):
                max_exp[i] = max(max_exp[i], e)
        powers: list[list[Polynomial]] = []
        for i, q in enumerate(images):
            row = [Polynomial.constant(m, 1)]
            for _ in range(max_exp[i]):
                row.append(row[-1] * q)
            powers.append(row)
        result = Polynomial.zero(m)
        for exp, coeff in self.terms.items():
            term = Polynomial.constant(m, coeff)
            for i, e in enumerate(exp):
                if e:
                    term = term * powers[i][e]
            result = result + term
        return result


@dataclass(frozen=True)
class MonomialOrder:
    """A global monomial order: one of grevlex, grlex, lex.

    ``priority`` optionally permutes variable precedence (1-based indices,
    highest first); the default is x1 > x2 > ... > xn.
    """

    kind: str
    priority: tuple[int, ...] | None = None

    KINDS = ("grevlex", "grlex", "lex")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown monomial order {self.kind!r}; expected one of {self.KINDS}")
        if self.priority is not None:
            p = tuple(self.priority)
            if sorted(p) != list(range(1, len(p) + 1)):
                raise ValueError(f"priority {p} is not a permutation of 1..{len(p)}")
            object.__setattr__(self, "priority", p)

    def _arrange(self, exp: Exponent) -> Exponent:
        if self.priority is None:
            return exp
        if len(self.priority) != len(exp):
            raise ValueError("priority permutation length does not match exponent length")
        return tuple(exp[i - 1] for i in self.priority)

    def key(self, exp: Exponent):
        """Sort key: key(a) > key(b) iff a > b in this order."""
        e = self._arrange(exp)
        if self.kind == "lex":
            return e
        deg = sum(e)
        if self.kind == "grlex":
            return (deg, e)
        # grevlex: smaller exponent on the least significant variable wins ties
        return (deg, tuple(-v for v in reversed(e)))

    def greater(self, a: Exponent, b: Exponent) -> bool:
        return self.key(a) > self.key(b)

    def sorted_terms(self, p: Polynomial, reverse: bool = True) -> list[tuple[Exponent, Fraction]]:
        return sorted(p.terms.items(), key=lambda t: self.key(t[0]), reverse=reverse)

    def leading_term(self, p: Polynomial) -> tuple[Exponent, Fraction]:
        if p.is_zero():
            raise ValueError("leading term of the zero polynomial")
        exp = max(p.terms, key=self.key)
        return exp, p.terms[exp]


GREVLEX = MonomialOrder("grevlex")
GRLEX = MonomialOrder("grlex")
LEX = MonomialOrder("lex")


@dataclass(frozen=True)
class LinearChange:
    """An invertible linear substitution x_i -> sum_j matrix[i][j] * y_j."""

    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(v) for v in row) for row in self.matrix)
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ValueError("coordinate change matrix must be square")
        object.__setattr__(self, "matrix", rows)
        if n and self.determinant() == 0:
            raise ValueError("coordinate change matrix is singular")

    @property
    def n(self) -> int:
        return len(self.matrix)

    @staticmethod
    def identity(n: int) -> "LinearChange":
        return LinearChange(tuple(
            tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
        ))

    def determinant(self) -> Fraction:
        # plain fraction-based elimination; n stays small here
        a = [list(row) for row in self.matrix]
        n = len(a)
        det = Fraction(1)
        for col in range(n):
            pivot = next((r for r in range(col, n) if a[r][col]), None)
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                a[col], a[pivot] = a[pivot], a[col]
                det = -det
            det *= a[col][col]
            inv = Fraction(1) / a[col][col]
            for r in range(col + 1, n):
                if a[r][col]:
                    factor = a[r][col] * inv
                    for c in range(col, n):
                        a[r][c] -= factor * a[col][c]
        return det

    def apply(self, p: Polynomial) -> Polynomial:
        """Exact composition p(M y): substitute each old variable by its row."""
        if p.n != self.n:
            raise ValueError(f"variable-count mismatch: polynomial has {p.n}, matrix has {self.n}")
        images = [
            Polynomial(self.n, {tuple(1 if k == j else 0 for k in range(self.n)): c
                                for j, c in enumerate(row) if c})
            for row in self.matrix
        ]
        return p.substitute_variables(images)


def monomials_of_degree(n: int, degree: int) -> list[Exponent]:
    """All exponent tuples in n variables of the given total degree."""
    if n == 0:
        return [()] if degree == 0 else []
    if n == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(n - 1, degree - first):
            out.append((first,) + rest)
    return out
