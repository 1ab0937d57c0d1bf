"""First- and second-order derivation calculus on A = Q[x1..xn]/(f).

A first-order derivation is stored as the tuple of images of the
variables and extends to everything by the Leibniz rule.  A second-order
operator is a coefficient map over divided-power multi-indices
(c_{2e_i} multiplies (1/2) d^2/dx_i^2), so the tuple extracted from an
operator D satisfies d_j(x_i) = c_{e_i + e_j}(D) with no factor anywhere.

The symmetrization sweep adjusts a tuple whose pairwise defects lie in
the Jacobian ideal into an exactly symmetric one by adding polynomial
multiples of the Hamiltonian derivations, recording every move in a
replayable ledger.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .groebner import (
    GREVLEX,
    GroebnerBasis,
    Ideal,
    InternalInconsistencyError,
    MonomialOrder,
    buchberger,
    jacobian_ideal,
)
from .minors import algebraic_cofactor, hessian
from .poly import Exponent, Polynomial

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Derivation1:
    """A first-order derivation, given by the images of x1..xn."""

    images: tuple[Polynomial, ...]

    def __post_init__(self):
        images = tuple(self.images)
        if not images:
            raise ValueError("a derivation needs at least one variable")
        n = len(images)
        if any(p.n != n for p in images):
            raise ValueError("derivation images must live in the ambient ring")
        object.__setattr__(self, "images", images)

    @property
    def n(self) -> int:
        return len(self.images)

    def image(self, i: int) -> Polynomial:
        """The image of x_i (1-based)."""
        if not 1 <= i <= self.n:
            raise IndexError(f"variable index {i} out of range 1..{self.n}")
        return self.images[i - 1]

    def apply(self, p: Polynomial) -> Polynomial:
        """Leibniz extension: sum_i dp/dx_i * image(i)."""
        if p.n != self.n:
            raise ValueError(f"variable-count mismatch: {p.n} vs {self.n}")
        out = Polynomial.zero(self.n)
        for i in range(1, self.n + 1):
            dp = p.partial(i)
            if not dp.is_zero() and not self.images[i - 1].is_zero():
                out = out + dp * self.images[i - 1]
        return out

    def add_scaled(self, coeff: Polynomial | Fraction | int, other: "Derivation1") -> "Derivation1":
        """self + coeff * other, componentwise."""
        if other.n != self.n:
            raise ValueError("variable-count mismatch between derivations")
        if isinstance(coeff, Polynomial):
            return Derivation1(tuple(a + coeff * b for a, b in zip(self.images, other.images)))
        return Derivation1(tuple(a + b.scale(coeff) for a, b in zip(self.images, other.images)))

    def __add__(self, other: "Derivation1") -> "Derivation1":
        return self.add_scaled(1, other)

    def __sub__(self, other: "Derivation1") -> "Derivation1":
        return self.add_scaled(-1, other)

    def __neg__(self) -> "Derivation1":
        return Derivation1(tuple(-p for p in self.images))

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.images)


def euler_derivation(n: int) -> Derivation1:
    """E = sum x_i d/dx_i; multiplies homogeneous degree-d input by d."""
    return Derivation1(tuple(Polynomial.variable(n, i) for i in range(1, n + 1)))


def hamiltonian(f: Polynomial, i: int, j: int) -> Derivation1:
    """D_ij = f_i d/dx_j - f_j d/dx_i; annihilates f identically."""
    n = f.n
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"indices ({i},{j}) out of range 1..{n}")
    if i == j:
        raise ValueError("hamiltonian derivation needs two distinct indices")
    images = [Polynomial.zero(n) for _ in range(n)]
    images[i - 1] = -f.partial(j)
    images[j - 1] = f.partial(i)
    return Derivation1(tuple(images))


def principal_cofactor(delta: Derivation1, f: Polynomial) -> Polynomial | None:
    """q with delta(f) = q * f, or None when delta does not preserve (f).

    Membership in a principal ideal is plain divisibility, so this needs
    only single-divisor division, no basis computation.
    """
    value = delta.apply(f)
    if value.is_zero():
        return Polynomial.zero(f.n)
    if f.is_zero():
        return None
    return _single_division(value, f)


def _single_division(p: Polynomial, f: Polynomial) -> Polynomial | None:
    order = GREVLEX
    lm, lc = order.leading_term(f)
    work = dict(p.terms)
    quotient: dict[Exponent, Fraction] = {}
    while work:
        exp = max(work, key=order.key)
        if not all(a <= b for a, b in zip(lm, exp)):
            return None
        factor = work.pop(exp) / lc
        shift = tuple(b - a for a, b in zip(lm, exp))
        quotient[shift] = quotient.get(shift, Fraction(0)) + factor
        for dexp, dcoeff in f.terms.items():
            if dexp == lm:
                continue
            key = tuple(a + b for a, b in zip(dexp, shift))
            c = work.get(key, Fraction(0)) - factor * dcoeff
            if c:
                work[key] = c
            else:
                work.pop(key, None)
    return Polynomial(p.n, quotient)


@dataclass(frozen=True)
class DerivationTuple:
    """An n-tuple (d_1,...,d_n) of first-order derivations on A = P/(f)."""

    ders: tuple[Derivation1, ...]
    f: Polynomial

    def __post_init__(self):
        ders = tuple(self.ders)
        if len(ders) != self.f.n:
            raise ValueError(f"{len(ders)} derivations for {self.f.n} variables")
        if any(d.n != self.f.n for d in ders):
            raise ValueError("derivations live in a different ring than f")
        object.__setattr__(self, "ders", ders)

    @property
    def n(self) -> int:
        return self.f.n

    def entry(self, i: int, j: int) -> Polynomial:
        """d_i(x_j)."""
        return self.ders[i - 1].image(j)

    def defect(self, i: int, j: int) -> Polynomial:
        """d_i(x_j) - d_j(x_i); zero for all pairs iff the tuple is symmetric."""
        return self.entry(i, j) - self.entry(j, i)

    def is_symmetric(self) -> bool:
        return all(
            self.defect(i, j).is_zero()
            for i in range(1, self.n + 1)
            for j in range(i + 1, self.n + 1)
        )


@dataclass(frozen=True)
class Adjustment:
    """One ledger entry: add coeff * D_(k,l) to derivation number target."""

    target: int
    k: int
    l: int
    coeff: Polynomial


def replay_ledger(tuple_in: DerivationTuple, ledger: Sequence[Adjustment]) -> DerivationTuple:
    """Apply the recorded moves in order; reproduces symmetrize's output."""
    ders = list(tuple_in.ders)
    for move in ledger:
        ders[move.target - 1] = ders[move.target - 1].add_scaled(
            move.coeff, hamiltonian(tuple_in.f, move.k, move.l)
        )
    return DerivationTuple(tuple(ders), tuple_in.f)


class DiffOp2:
    """An operator sum c_alpha * divided-power-partial_alpha with |alpha| <= 2.

    The order-zero coefficient is zero for every operator built here as a
    derivation; shifting can produce one, in which case the result is an
    operator of lower order plus a multiplication term.
    """

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs: Mapping[Exponent, Polynomial] | None = None):
        clean: dict[Exponent, Polynomial] = {}
        if coeffs:
            for alpha, c in coeffs.items():
                alpha = tuple(alpha)
                if len(alpha) != n or any(a < 0 for a in alpha):
                    raise ValueError(f"bad multi-index {alpha} for {n} variables")
                if sum(alpha) > 2:
                    raise ValueError(f"multi-index {alpha} exceeds order 2")
                if c.n != n:
                    raise ValueError("coefficient lives in a different ring")
                if not c.is_zero():
                    clean[alpha] = c
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("DiffOp2 is immutable")

    def coefficient(self, alpha: Sequence[int]) -> Polynomial:
        return self.coeffs.get(tuple(alpha), Polynomial.zero(self.n))

    def order(self) -> int:
        return max((sum(a) for a in self.coeffs), default=0)

    def apply(self, p: Polynomial) -> Polynomial:
        if p.n != self.n:
            raise ValueError(f"variable-count mismatch: {p.n} vs {self.n}")
        out = Polynomial.zero(self.n)
        for alpha, c in self.coeffs.items():
            part = p.higher_partial(alpha)
            if not part.is_zero():
                out = out + c * part
        return out

    def scale(self, s: Fraction | int) -> "DiffOp2":
        return DiffOp2(self.n, {a: c.scale(s) for a, c in self.coeffs.items()})

    def __add__(self, other: "DiffOp2") -> "DiffOp2":
        if other.n != self.n:
            raise ValueError("variable-count mismatch")
        merged = dict(self.coeffs)
        for a, c in other.coeffs.items():
            merged[a] = merged.get(a, Polynomial.zero(self.n)) + c
        return DiffOp2(self.n, merged)

    def __sub__(self, other: "DiffOp2") -> "DiffOp2":
        return self + other.scale(-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DiffOp2):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    __hash__ = None

    def shift(self, beta: Sequence[int]) -> "DiffOp2":
        """The operator with coefficient map alpha -> c_(alpha + beta).

        Drops the order by |beta|; the order-zero slot of the result picks
        up c_beta itself.
        """
        beta = tuple(beta)
        if len(beta) != self.n or any(b < 0 for b in beta):
            raise ValueError(f"bad shift index {beta}")
        if sum(beta) > 2:
            raise ValueError("shift index exceeds the operator order bound")
        out: dict[Exponent, Polynomial] = {}
        for alpha, c in self.coeffs.items():
            if all(a >= b for a, b in zip(alpha, beta)):
                out[tuple(a - b for a, b in zip(alpha, beta))] = c
        return DiffOp2(self.n, out)


def _unit(n: int, i: int) -> Exponent:
    return tuple(1 if k == i - 1 else 0 for k in range(n))


def _pair_index(n: int, i: int, j: int) -> Exponent:
    e = [0] * n
    e[i - 1] += 1
    e[j - 1] += 1
    return tuple(e)


def theta2_extract(op: DiffOp2, f: Polynomial) -> DerivationTuple:
    """The tuple (d_1,...,d_n) with d_j(x_i) = c_(e_i + e_j)(op).

    The extracted tuple is symmetric by construction since the coefficient
    map is indexed by the unordered sum e_i + e_j.
    """
    if f.n != op.n:
        raise ValueError("operator and f live in different rings")
    n = op.n
    ders = []
    for j in range(1, n + 1):
        images = tuple(op.coefficient(_pair_index(n, i, j)) for i in range(1, n + 1))
        ders.append(Derivation1(images))
    return DerivationTuple(tuple(ders), f)


def compose2(first: Derivation1, second: Derivation1) -> DiffOp2:
    """The coefficient map of the composition (first after second) as an order-2 operator.

    With a_i = first(x_i), b_i = second(x_i):
      c_(e_j)       = first(b_j)
      c_(e_i + e_j) = a_i b_j + a_j b_i   (i < j)
      c_(2 e_i)     = 2 a_i b_i
    """
    if first.n != second.n:
        raise ValueError("variable-count mismatch")
    n = first.n
    coeffs: dict[Exponent, Polynomial] = {}
    for j in range(1, n + 1):
        c = first.apply(second.images[j - 1])
        if not c.is_zero():
            coeffs[_unit(n, j)] = c
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            a_i, a_j = first.images[i - 1], first.images[j - 1]
            b_i, b_j = second.images[i - 1], second.images[j - 1]
            if i == j:
                c = (a_i * b_i).scale(2)
            else:
                c = a_i * b_j + a_j * b_i
            if not c.is_zero():
                coeffs[_pair_index(n, i, j)] = c
    return DiffOp2(n, coeffs)


def verify_order2_identity(
    op: DiffOp2,
    triples: Iterable[tuple[Polynomial, Polynomial, Polynomial]],
) -> bool:
    """Check the defining second-order identity on each sampled triple:

    D(p q r) = p D(q r) + q D(p r) + r D(p q)
             - (q r D(p) + p r D(q) + p q D(r)).
    """
    for p, q, r in triples:
        lhs = op.apply(p * q * r)
        rhs = (
            p * op.apply(q * r)
            + q * op.apply(p * r)
            + r * op.apply(p * q)
            - (q * r) * op.apply(p)
            - (p * r) * op.apply(q)
            - (p * q) * op.apply(r)
        )
        if lhs != rhs:
            return False
    return True


def build_candidate_tuple(f: Polynomial, check_isolated: bool = True) -> DerivationTuple:
    """The tuple d_i = A_1i * E built from the first Hessian cofactor row.

    Its pairwise defects d_i(x_j) - d_j(x_i) lie in the Jacobian ideal by
    the cofactor identity, and each d_i scales f by degree * A_1i.
    """
    degree = f.homogeneous_degree() if not f.is_zero() else None
    if f.is_zero() or degree is None or degree < 2:
        raise ValueError("candidate tuple requires a homogeneous polynomial of degree >= 2")
    if check_isolated:
        from .groebner import is_isolated_singularity

        if not is_isolated_singularity(f):
            raise ValueError("candidate tuple requires an isolated singularity")
    n = f.n
    hess = hessian(f)
    euler = euler_derivation(n)
    ders = []
    for i in range(1, n + 1):
        cof = algebraic_cofactor(hess, 1, i)
        ders.append(Derivation1(tuple(cof * img for img in euler.images)))
    return DerivationTuple(tuple(ders), f)


def symmetrize(
    tuple_in: DerivationTuple,
    gb: GroebnerBasis | None = None,
) -> tuple[DerivationTuple, tuple[Adjustment, ...]]:
    """Adjust the tuple by Hamiltonian moves until d_i(x_j) = d_j(x_i) exactly.

    Precondition: every pairwise defect lies in the Jacobian ideal (checked
    via lifting; a defect outside it raises ValueError).  Pairs are swept in
    lexicographic order.  For the pair (i, j) with defect sum a_l * f_l:

      * the f_i and f_j parts go away by adding -a_i D_ij to d_i and
        -a_j D_ij to d_j (touches only the pair itself and diagonals);
      * an f_l part with l > j goes away by adding a_l D_jl to d_i
        (touches only the later pair (i, l));
      * any other f_l part is removed by the balanced half-coefficient move
        d_i -= (a_l/2) D_lj,  d_j += (a_l/2) D_li,  d_l -= (a_l/2) D_ij,
        which changes no pair defect except (i, j) and no diagonal.

    The returned ledger replays to the returned tuple; the symmetry
    postcondition is verified before returning.
    """
    f = tuple_in.f
    n = tuple_in.n
    if gb is None:
        gb = buchberger(jacobian_ideal(f))
    ledger: list[Adjustment] = []
    ders = list(tuple_in.ders)

    def move(target: int, k: int, l: int, coeff: Polynomial):
        if coeff.is_zero():
            return
        ders[target - 1] = ders[target - 1].add_scaled(coeff, hamiltonian(f, k, l))
        ledger.append(Adjustment(target, k, l, coeff))

    half = Fraction(1, 2)
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            defect = ders[i - 1].image(j) - ders[j - 1].image(i)
            if defect.is_zero():
                continue
            cofs = gb.lift(defect)
            if cofs is None:
                raise ValueError(
                    f"defect of pair ({i},{j}) is not in the Jacobian ideal; "
                    "the input tuple is not a valid candidate"
                )
            move(i, i, j, -cofs[i - 1])
            move(j, i, j, -cofs[j - 1])
            for l in range(1, n + 1):
                if l in (i, j) or cofs[l - 1].is_zero():
                    continue
                a_l = cofs[l - 1]
                if l > j:
                    move(i, j, l, a_l)
                else:
                    move(i, l, j, a_l.scale(-half))
                    move(j, l, i, a_l.scale(half))
                    move(l, i, j, a_l.scale(-half))
    result = DerivationTuple(tuple(ders), f)
    if not result.is_symmetric():
        raise InternalInconsistencyError("symmetrization sweep left an asymmetric pair")
    logger.debug("symmetrize: %d adjustments over %d pairs", len(ledger), n * (n - 1) // 2)
    return result, tuple(ledger)


def lift_to_diff2(
    tuple_in: DerivationTuple,
    gb: GroebnerBasis | None = None,
) -> DiffOp2:
    """A second-order operator D with theta2_extract(D) equal to the tuple
    and D(f) = 0 on the nose.

    Second-order coefficients come straight from the tuple
    (c_(e_i+e_j) = d_i(x_j), c_(2e_i) = d_i(x_i)); the first-order ones are
    a lift of minus the second-order part applied to f over the Jacobian
    ideal, which must exist for a symmetric tuple of derivations preserving
    (f) -- a failed lift is an engine bug, not an input error.
    """
    if not tuple_in.is_symmetric():
        raise ValueError("lifting requires a symmetric tuple")
    f = tuple_in.f
    n = tuple_in.n
    if gb is None:
        gb = buchberger(jacobian_ideal(f))
    coeffs: dict[Exponent, Polynomial] = {}
    second_applied = Polynomial.zero(n)
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            c = tuple_in.entry(i, j)
            if c.is_zero():
                continue
            alpha = _pair_index(n, i, j)
            coeffs[alpha] = c
            second_applied = second_applied + c * f.higher_partial(alpha)
    firsts = gb.lift(-second_applied)
    if firsts is None:
        raise InternalInconsistencyError(
            "second-order part applied to f is not in the Jacobian ideal; "
            "the exactness guarantee failed"
        )
    for i in range(1, n + 1):
        if not firsts[i - 1].is_zero():
            coeffs[_unit(n, i)] = firsts[i - 1]
    op = DiffOp2(n, coeffs)
    if not op.apply(f).is_zero():
        raise InternalInconsistencyError("lifted operator does not annihilate f")
    return op


@dataclass(frozen=True)
class NecessaryConditionReport:
    """Memberships of d_i(x_i) used by the composition-obstruction test.

    in_modified: membership in (f_1,..,f_{i-1}, x_i^2, f_{i+1},..,f_n).
    in_square:   membership in (f_1,..,f_{i-1}, x_i,   f_{i+1},..,f_n)^2.
    The square ideal sits inside the modified one, so in_square implies
    in_modified; failing the modified ideal is the stronger obstruction.
    """

    value: Polynomial
    in_modified: bool
    in_square: bool
    nf_modified: Polynomial
    nf_square: Polynomial


def modified_jacobian_ideal(f: Polynomial, i: int) -> Ideal:
    """(f_1, ..., f_{i-1}, x_i^2, f_{i+1}, ..., f_n)."""
    gens = [f.partial(k) for k in range(1, f.n + 1)]
    gens[i - 1] = Polynomial.variable(f.n, i) ** 2
    return Ideal(tuple(gens))


def square_obstruction_ideal(f: Polynomial, i: int) -> Ideal:
    """(f_1, ..., x_i, ..., f_n)^2, expanded into pairwise products."""
    base = [f.partial(k) for k in range(1, f.n + 1)]
    base[i - 1] = Polynomial.variable(f.n, i)
    products = [base[a] * base[b] for a in range(f.n) for b in range(a, f.n)]
    return Ideal(tuple(products))


def necessary_condition_test(
    tuple_in: DerivationTuple,
    i: int,
    order: MonomialOrder = GREVLEX,
    **caps,
) -> NecessaryConditionReport:
    """Test d_i(x_i) against the modified Jacobian ideal and the square ideal.

    A tuple extracted from a composition of first-order derivations always
    lands in the square ideal, so a negative verdict here certifies that no
    operator with this tuple image is such a composition.
    """
    f = tuple_in.f
    value = tuple_in.entry(i, i)
    gb_modified = buchberger(modified_jacobian_ideal(f, i), order, **caps)
    gb_square = buchberger(square_obstruction_ideal(f, i), order, **caps)
    nf_modified = gb_modified.normal_form(value)
    nf_square = gb_square.normal_form(value)
    report = NecessaryConditionReport(
        value=value,
        in_modified=nf_modified.is_zero(),
        in_square=nf_square.is_zero(),
        nf_modified=nf_modified,
        nf_square=nf_square,
    )
    if report.in_square and not report.in_modified:
        raise InternalInconsistencyError(
            "square-ideal membership without modified-ideal membership contradicts the containment"
        )
    return report
