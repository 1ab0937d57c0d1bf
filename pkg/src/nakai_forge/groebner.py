"""Exact Groebner-basis engine over the rationals.

Buchberger's algorithm with the normal selection strategy, the coprime
and chain criteria, content removal after every reduction, and full
cofactor tracking: every basis element carries its expression in terms
of the source generators, so ideal memberships come with replayable
witnesses (p = sum q_i * g_i, checkable by re-multiplication).

Resource limits are hard errors, never silent wrong answers.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .poly import GREVLEX, Exponent, MonomialOrder, Polynomial

logger = logging.getLogger(__name__)

DEFAULT_MAX_PAIRS = 100_000
DEFAULT_MAX_TERMS = 500_000


class ResourceLimitExceeded(RuntimeError):
    """A configured pair or term cap was hit before the computation finished."""


class InternalInconsistencyError(RuntimeError):
    """A fact guaranteed by a theorem failed to hold; signals an engine bug."""


@dataclass(frozen=True)
class Ideal:
    """A finitely generated ideal of Q[x1..xn]."""

    generators: tuple[Polynomial, ...]

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("an ideal needs at least one generator")
        counts = {g.n for g in gens}
        if len(counts) != 1:
            raise ValueError(f"generators have mixed variable counts {sorted(counts)}")
        object.__setattr__(self, "generators", gens)

    @property
    def n(self) -> int:
        return self.generators[0].n


def jacobian_ideal(f: Polynomial) -> Ideal:
    """The ideal of all first partials of f."""
    return Ideal(tuple(f.partial(i) for i in range(1, f.n + 1)))


def _content(p: Polynomial) -> Fraction:
    """Positive rational c with p/c integer-primitive; 1 for zero."""
    if p.is_zero():
        return Fraction(1)
    num = 0
    den = 1
    for c in p.terms.values():
        num = gcd(num, abs(c.numerator))
        den = den * c.denominator // gcd(den, c.denominator)
    return Fraction(num, den)


def _divides(a: Exponent, b: Exponent) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _exp_sub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def _exp_lcm(a: Exponent, b: Exponent) -> Exponent:
    return tuple(max(x, y) for x, y in zip(a, b))


def _divide_tracked(
    p: Polynomial,
    divisors: Sequence[Polynomial],
    leading: Sequence[tuple[Exponent, Fraction]],
    order: MonomialOrder,
    max_terms: int,
) -> tuple[list[Polynomial], Polynomial]:
    """Full multivariate division: p = sum quotients[k]*divisors[k] + remainder.

    No remainder term is divisible by any divisor's leading monomial.
    Divisors are tried in list order, which keeps the result deterministic.
    """
    n = p.n
    work = dict(p.terms)
    quotients = [dict() for _ in divisors]
    remainder: dict[Exponent, Fraction] = {}
    while work:
        exp = max(work, key=order.key)
        coeff = work.pop(exp)
        for k, (lm, lc) in enumerate(leading):
            if _divides(lm, exp):
                shift = _exp_sub(exp, lm)
                factor = coeff / lc
                q = quotients[k]
                q[shift] = q.get(shift, Fraction(0)) + factor
                if not q[shift]:
                    del q[shift]
                for dexp, dcoeff in divisors[k].terms.items():
                    if dexp == lm:
                        continue
                    key = tuple(a + b for a, b in zip(dexp, shift))
                    c = work.get(key, Fraction(0)) - factor * dcoeff
                    if c:
                        work[key] = c
                    else:
                        work.pop(key, None)
                if len(work) > max_terms:
                    raise ResourceLimitExceeded(
                        f"intermediate polynomial exceeded {max_terms} terms during division"
                    )
                break
        else:
            remainder[exp] = coeff
    return (
        [Polynomial(n, q) for q in quotients],
        Polynomial(n, remainder),
    )


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced Groebner basis with cofactors over its source generators.

    basis[i] == sum_j cofactors[i][j] * source.generators[j] holds exactly;
    the basis is auto-reduced with monic leading coefficients.
    """

    basis: tuple[Polynomial, ...]
    cofactors: tuple[tuple[Polynomial, ...], ...]
    order: MonomialOrder
    source: Ideal
    max_terms: int = DEFAULT_MAX_TERMS

    @property
    def n(self) -> int:
        return self.source.n

    def leading_monomials(self) -> list[Exponent]:
        return [self.order.leading_term(g)[0] for g in self.basis]

    def _leading(self) -> list[tuple[Exponent, Fraction]]:
        return [self.order.leading_term(g) for g in self.basis]

    def normal_form(self, p: Polynomial) -> Polynomial:
        """The unique fully reduced remainder of p; zero iff p is a member."""
        if p.n != self.n:
            raise ValueError(f"variable-count mismatch: {p.n} vs {self.n}")
        if not self.basis:
            return p
        _, remainder = _divide_tracked(p, self.basis, self._leading(), self.order, self.max_terms)
        return remainder

    def contains(self, p: Polynomial) -> bool:
        return self.normal_form(p).is_zero()

    def reduce_tracked(self, p: Polynomial) -> tuple[list[Polynomial], Polynomial]:
        """Quotients over the basis elements plus the remainder."""
        if not self.basis:
            return [], p
        return _divide_tracked(p, self.basis, self._leading(), self.order, self.max_terms)

    def lift(self, p: Polynomial) -> tuple[Polynomial, ...] | None:
        """Cofactors of p over the source generators, or None if not a member.

        On success p == sum lift[j] * source.generators[j] exactly.
        """
        quotients, remainder = self.reduce_tracked(p)
        if not remainder.is_zero():
            return None
        gens = self.source.generators
        out = [Polynomial.zero(self.n) for _ in gens]
        for q, row in zip(quotients, self.cofactors):
            if q.is_zero():
                continue
            for j, cof in enumerate(row):
                if not cof.is_zero():
                    out[j] = out[j] + q * cof
        return tuple(out)

    def is_zero_dimensional(self) -> bool:
        """True iff every variable has a pure power among the leading monomials."""
        return leading_terms_zero_dimensional(self.leading_monomials(), self.n)

    def standard_monomials(self) -> list[Exponent]:
        """Monomials outside the leading-term ideal (finite iff zero-dimensional)."""
        return standard_monomials_from_leading(self.leading_monomials(), self.n)

    def quotient_dimension(self) -> int:
        """Vector-space dimension of the quotient ring (the Milnor number for J(f))."""
        return len(self.standard_monomials())


def leading_terms_zero_dimensional(lms: Sequence[Exponent], n: int) -> bool:
    """Zero-dimensionality criterion on a leading-monomial list."""
    for i in range(n):
        if not any(all(e == 0 for k, e in enumerate(lm) if k != i) for lm in lms):
            return False
    return True


def standard_monomials_from_leading(lms: Sequence[Exponent], n: int) -> list[Exponent]:
    """Monomials outside the ideal generated by the given leading terms."""
    if not leading_terms_zero_dimensional(lms, n):
        raise ValueError("ideal is not zero-dimensional; standard monomials are infinite")
    bounds = []
    for i in range(n):
        pure = [lm[i] for lm in lms if all(e == 0 for k, e in enumerate(lm) if k != i)]
        bounds.append(min(pure))
    out: list[Exponent] = []

    def walk(prefix: tuple[int, ...]):
        if len(prefix) == n:
            if not any(_divides(lm, prefix) for lm in lms):
                out.append(prefix)
            return
        for e in range(bounds[len(prefix)]):
            walk(prefix + (e,))

    walk(())
    return out


def buchberger(
    ideal: Ideal,
    order: MonomialOrder = GREVLEX,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> GroebnerBasis:
    """Compute the reduced Groebner basis with cofactor tracking.

    Deterministic: pairs are processed by (lcm degree, lcm, i, j) and the
    final basis is sorted by descending leading monomial.
    """
    n = ideal.n
    gens = ideal.generators
    zero = Polynomial.zero(n)

    def unit_row(j: int) -> list[Polynomial]:
        return [Polynomial.constant(n, 1) if k == j else zero for k in range(len(gens))]

    def normalize(p: Polynomial, row: list[Polynomial]) -> tuple[Polynomial, list[Polynomial]]:
        c = _content(p)
        _, lc = order.leading_term(p)
        if lc < 0:
            c = -c
        if c != 1:
            inv = Fraction(1) / c
            p = p.scale(inv)
            row = [r.scale(inv) for r in row]
        return p, row

    basis: list[Polynomial] = []
    rows: list[list[Polynomial]] = []
    leading: list[tuple[Exponent, Fraction]] = []
    for j, g in enumerate(gens):
        if g.is_zero():
            continue
        p, row = normalize(g, unit_row(j))
        basis.append(p)
        rows.append(row)
        leading.append(order.leading_term(p))

    pending: set[tuple[int, int]] = set()
    heap: list[tuple[tuple, int, int]] = []

    def push_pairs(new_index: int):
        lm_new = leading[new_index][0]
        for i in range(new_index):
            lcm = _exp_lcm(leading[i][0], lm_new)
            heapq.heappush(heap, ((sum(lcm), lcm, i, new_index), i, new_index))
            pending.add((i, new_index))

    for idx in range(len(basis)):
        push_pairs(idx)

    processed = 0
    while heap:
        _, i, j = heapq.heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        processed += 1
        if processed > max_pairs:
            raise ResourceLimitExceeded(f"S-pair cap {max_pairs} exceeded")
        lm_i, lc_i = leading[i]
        lm_j, lc_j = leading[j]
        lcm = _exp_lcm(lm_i, lm_j)
        # coprime leading monomials: the S-polynomial reduces to zero
        if lcm == tuple(a + b for a, b in zip(lm_i, lm_j)):
            continue
        # chain criterion: some k divides the lcm and both flanking pairs are done
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if _divides(leading[k][0], lcm):
                pair_ik = (min(i, k), max(i, k))
                pair_jk = (min(j, k), max(j, k))
                if pair_ik not in pending and pair_jk not in pending:
                    skip = True
                    break
        if skip:
            continue
        s_poly = basis[i].mul_monomial(_exp_sub(lcm, lm_i), Fraction(1) / lc_i) - \
            basis[j].mul_monomial(_exp_sub(lcm, lm_j), Fraction(1) / lc_j)
        s_row = [
            a.mul_monomial(_exp_sub(lcm, lm_i), Fraction(1) / lc_i)
            - b.mul_monomial(_exp_sub(lcm, lm_j), Fraction(1) / lc_j)
            for a, b in zip(rows[i], rows[j])
        ]
        quotients, remainder = _divide_tracked(s_poly, basis, leading, order, max_terms)
        if remainder.is_zero():
            continue
        for k, q in enumerate(quotients):
            if not q.is_zero():
                s_row = [r - q * c for r, c in zip(s_row, rows[k])]
        remainder, s_row = normalize(remainder, s_row)
        basis.append(remainder)
        rows.append(s_row)
        leading.append(order.leading_term(remainder))
        push_pairs(len(basis) - 1)

    logger.debug("buchberger: %d generators -> %d raw basis elements, %d pairs", len(gens), len(basis), processed)
    return _reduce_basis(basis, rows, ideal, order, max_terms)


def _reduce_basis(
    basis: list[Polynomial],
    rows: list[list[Polynomial]],
    ideal: Ideal,
    order: MonomialOrder,
    max_terms: int,
) -> GroebnerBasis:
    """Minimalize, auto-reduce, and make monic, updating cofactor rows."""
    if not basis:
        return GroebnerBasis((), (), order, ideal, max_terms)
    # Minimal: drop any element whose leading monomial another one divides.
    indices = sorted(range(len(basis)), key=lambda k: order.key(order.leading_term(basis[k])[0]))
    kept: list[int] = []
    for k in indices:
        lm_k = order.leading_term(basis[k])[0]
        if not any(_divides(order.leading_term(basis[m])[0], lm_k) for m in kept):
            kept.append(k)
    polys = [basis[k] for k in kept]
    prows = [rows[k] for k in kept]
    # Reduced: each element's tail is in normal form w.r.t. the others.
    # Reducedness only depends on the others' leading monomials, which tail
    # reduction never changes, so a single pass is enough.
    final_polys: list[Polynomial] = []
    final_rows: list[list[Polynomial]] = []
    for idx, (p, row) in enumerate(zip(polys, prows)):
        others = polys[:idx] + polys[idx + 1:]
        other_rows = prows[:idx] + prows[idx + 1:]
        if others:
            leads = [order.leading_term(g) for g in others]
            quotients, reduced = _divide_tracked(p, others, leads, order, max_terms)
            for q, orow in zip(quotients, other_rows):
                if not q.is_zero():
                    row = [r - q * c for r, c in zip(row, orow)]
            p = reduced
        lc = order.leading_term(p)[1]
        if lc != 1:
            inv = Fraction(1) / lc
            p = p.scale(inv)
            row = [r.scale(inv) for r in row]
        final_polys.append(p)
        final_rows.append(row)
    paired = sorted(zip(final_polys, final_rows), key=lambda t: order.key(order.leading_term(t[0])[0]), reverse=True)
    final_polys = [p for p, _ in paired]
    final_rows = [r for _, r in paired]
    return GroebnerBasis(
        tuple(final_polys),
        tuple(tuple(r) for r in final_rows),
        order,
        ideal,
        max_terms,
    )


def normal_form(p: Polynomial, gb: GroebnerBasis) -> Polynomial:
    return gb.normal_form(p)


def reduce_by_basis(
    p: Polynomial,
    basis: Sequence[Polynomial],
    order: MonomialOrder,
    max_terms: int = 10_000_000,
) -> Polynomial:
    """Fully reduce p against an explicit polynomial list (certificate replay)."""
    if not basis:
        return p
    leading = [order.leading_term(b) for b in basis]
    _, remainder = _divide_tracked(p, basis, leading, order, max_terms)
    return remainder


def s_polynomial(a: Polynomial, b: Polynomial, order: MonomialOrder) -> Polynomial:
    """The S-polynomial of two nonzero polynomials under the given order."""
    lm_a, lc_a = order.leading_term(a)
    lm_b, lc_b = order.leading_term(b)
    lcm = _exp_lcm(lm_a, lm_b)
    return a.mul_monomial(_exp_sub(lcm, lm_a), Fraction(1) / lc_a) - \
        b.mul_monomial(_exp_sub(lcm, lm_b), Fraction(1) / lc_b)


def lift_membership(
    p: Polynomial,
    ideal: Ideal,
    order: MonomialOrder = GREVLEX,
    max_pairs: int = DEFAULT_MAX_PAIRS,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> tuple[Polynomial, ...] | None:
    """Cofactors expressing p over the ideal's generators, or None."""
    return buchberger(ideal, order, max_pairs, max_terms).lift(p)


def is_zero_dimensional(ideal: Ideal, order: MonomialOrder = GREVLEX, **caps) -> bool:
    return buchberger(ideal, order, **caps).is_zero_dimensional()


def quotient_dimension(ideal: Ideal, order: MonomialOrder = GREVLEX, **caps) -> int:
    return buchberger(ideal, order, **caps).quotient_dimension()


def is_isolated_singularity(f: Polynomial, order: MonomialOrder = GREVLEX, **caps) -> bool:
    """True iff homogeneous f of degree >= 2 has a zero-dimensional Jacobian ideal."""
    if f.is_zero():
        raise ValueError("the zero polynomial does not define a hypersurface")
    degree = f.homogeneous_degree()
    if degree is None:
        raise ValueError("isolated-singularity test requires a homogeneous polynomial")
    if degree < 2:
        return False  # smooth at the origin, no singularity at all
    return is_zero_dimensional(jacobian_ideal(f), order, **caps)


def is_regular_sequence_homog(
    gens: Sequence[Polynomial],
    order: MonomialOrder = GREVLEX,
    **caps,
) -> bool:
    """n homogeneous polynomials in n variables form a regular sequence
    iff the ideal they generate is zero-dimensional."""
    gens = tuple(gens)
    if not gens:
        raise ValueError("empty generator list")
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise ValueError("generators have mixed variable counts")
    if len(gens) != n:
        raise ValueError(f"need exactly {n} polynomials in {n} variables, got {len(gens)}")
    for g in gens:
        if g.is_zero() or g.homogeneous_degree() is None:
            raise ValueError("every entry must be nonzero and homogeneous")
    return is_zero_dimensional(Ideal(gens), order, **caps)


# -- finite-field pre-filter --------------------------------------------
#
# A minimal Buchberger over Z/p used only as a probabilistic screen (bad
# slices are rejected cheaply before the exact run).  Verdicts never come
# from this path.


def zero_dimensional_mod_p(
    gens: Sequence[Polynomial],
    prime: int,
    order: MonomialOrder = GREVLEX,
    max_pairs: int = 20_000,
) -> bool:
    if not gens:
        raise ValueError("empty generator list")
    n = gens[0].n

    def reduce_poly(g: Polynomial) -> dict[Exponent, int]:
        out = {}
        for e, c in g.terms.items():
            den_inv = pow(c.denominator % prime, -1, prime)
            v = c.numerator % prime * den_inv % prime
            if v:
                out[e] = v
        return out

    basis = [p for p in (reduce_poly(g) for g in gens) if p]
    if not basis:
        return False
    leading = [max(p, key=order.key) for p in basis]

    def reduce_mod(work: dict[Exponent, int]) -> dict[Exponent, int]:
        remainder: dict[Exponent, int] = {}
        while work:
            exp = max(work, key=order.key)
            coeff = work.pop(exp)
            for lm, p in zip(leading, basis):
                if _divides(lm, exp):
                    factor = coeff * pow(p[lm], -1, prime) % prime
                    shift = _exp_sub(exp, lm)
                    for dexp, dcoeff in p.items():
                        if dexp == lm:
                            continue
                        key = tuple(a + b for a, b in zip(dexp, shift))
                        v = (work.get(key, 0) - factor * dcoeff) % prime
                        if v:
                            work[key] = v
                        else:
                            work.pop(key, None)
                    break
            else:
                remainder[exp] = coeff
        return remainder

    pairs = [(i, j) for i in range(len(basis)) for j in range(i + 1, len(basis))]
    processed = 0
    while pairs:
        pairs.sort(key=lambda ij: (sum(_exp_lcm(leading[ij[0]], leading[ij[1]])), ij))
        i, j = pairs.pop(0)
        processed += 1
        if processed > max_pairs:
            raise ResourceLimitExceeded(f"mod-{prime} pre-filter pair cap exceeded")
        lm_i, lm_j = leading[i], leading[j]
        lcm = _exp_lcm(lm_i, lm_j)
        if lcm == tuple(a + b for a, b in zip(lm_i, lm_j)):
            continue
        inv_i = pow(basis[i][lm_i], -1, prime)
        inv_j = pow(basis[j][lm_j], -1, prime)
        s: dict[Exponent, int] = {}
        for e, c in basis[i].items():
            key = tuple(a + b for a, b in zip(e, _exp_sub(lcm, lm_i)))
            s[key] = (s.get(key, 0) + c * inv_i) % prime
        for e, c in basis[j].items():
            key = tuple(a + b for a, b in zip(e, _exp_sub(lcm, lm_j)))
            s[key] = (s.get(key, 0) - c * inv_j) % prime
        s = {e: c for e, c in s.items() if c}
        remainder = reduce_mod(s)
        if remainder:
            basis.append(remainder)
            leading.append(max(remainder, key=order.key))
            new = len(basis) - 1
            pairs.extend((k, new) for k in range(new))
    for i in range(n):
        if not any(all(e == 0 for k, e in enumerate(lm) if k != i) for lm in leading):
            return False
    return True
