"""Polynomial matrices: Hessians, exact determinants, signed minors.

The signed generalized minor deletes k rows and k columns and carries the
sign (-1)^(tau(row permutation) + tau(column permutation)), where each
deletion list is completed to a full permutation by appending the
remaining indices in increasing order.  The value is independent of the
completion and antisymmetric in the deleted row (or column) lists; for
k = 1 it is the classical algebraic cofactor (-1)^(i+j) M_ij.

All indices are 1-based.  Hessian entries are the plain second partials
d^2 f / dx_i dx_j, with no divided-power factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .poly import Polynomial

# Cofactor expansion over column subsets is exponential in the dimension;
# this cap keeps memo tables tiny and is far above the pipeline's needs.
MAX_DETERMINANT_DIM = 6


class PolyMatrix:
    """Immutable square matrix of polynomials sharing one variable count."""

    __slots__ = ("entries", "m", "nvars")

    def __init__(self, entries: Sequence[Sequence[Polynomial]], nvars: int | None = None):
        rows = tuple(tuple(row) for row in entries)
        m = len(rows)
        if any(len(row) != m for row in rows):
            raise ValueError("matrix must be square")
        seen = {p.n for row in rows for p in row}
        if len(seen) > 1:
            raise ValueError(f"matrix entries have mixed variable counts {sorted(seen)}")
        if nvars is None:
            if not seen:
                raise ValueError("variable count required for an empty matrix")
            nvars = seen.pop()
        elif seen and seen.pop() != nvars:
            raise ValueError("entries disagree with the stated variable count")
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "nvars", nvars)

    def __setattr__(self, name, value):
        raise AttributeError("PolyMatrix is immutable")

    def entry(self, i: int, j: int) -> Polynomial:
        """Entry in row i, column j (1-based)."""
        if not (1 <= i <= self.m and 1 <= j <= self.m):
            raise IndexError(f"entry ({i},{j}) out of range 1..{self.m}")
        return self.entries[i - 1][j - 1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.entries == other.entries and self.nvars == other.nvars

    __hash__ = None


@dataclass(frozen=True)
class MinorSpec:
    """Rows and columns to delete (1-based, distinct within each list)."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "cols", tuple(self.cols))
        if len(self.rows) != len(self.cols):
            raise ValueError("must delete as many rows as columns")
        if len(set(self.rows)) != len(self.rows):
            raise ValueError(f"repeated row index in {self.rows}")
        if len(set(self.cols)) != len(self.cols):
            raise ValueError(f"repeated column index in {self.cols}")


def hessian(f: Polynomial) -> PolyMatrix:
    """The symmetric matrix of plain second partials of f."""
    firsts = [f.partial(i) for i in range(1, f.n + 1)]
    return PolyMatrix(
        [[firsts[i].partial(j + 1) for j in range(f.n)] for i in range(f.n)],
        nvars=f.n,
    )


def determinant(matrix: PolyMatrix) -> Polynomial:
    """Exact determinant by cofactor expansion memoized on column subsets."""
    m = matrix.m
    if m > MAX_DETERMINANT_DIM:
        raise ValueError(f"determinant dimension {m} exceeds the supported cap {MAX_DETERMINANT_DIM}")
    if m == 0:
        return Polynomial.constant(matrix.nvars, 1)
    entries = matrix.entries
    memo: dict[tuple[int, ...], Polynomial] = {}

    def expand(cols: tuple[int, ...]) -> Polynomial:
        row = m - len(cols)
        if not cols:
            return Polynomial.constant(matrix.nvars, 1)
        cached = memo.get(cols)
        if cached is not None:
            return cached
        total = Polynomial.zero(matrix.nvars)
        for pos, col in enumerate(cols):
            entry = entries[row][col]
            if entry.is_zero():
                continue
            sub = expand(cols[:pos] + cols[pos + 1:])
            term = entry * sub
            total = total + term if pos % 2 == 0 else total - term
        memo[cols] = total
        return total

    return expand(tuple(range(m)))


def inversion_number(perm: Sequence[int]) -> int:
    """Number of inverted pairs of a permutation of 1..n."""
    p = list(perm)
    if sorted(p) != list(range(1, len(p) + 1)):
        raise ValueError(f"{p} is not a permutation of 1..{len(p)}")
    return sum(1 for a in range(len(p)) for b in range(a + 1, len(p)) if p[a] > p[b])


def signed_minor(matrix: PolyMatrix, spec: MinorSpec) -> Polynomial:
    """Signed generalized complementary minor for the given deletions."""
    m = matrix.m
    for idx in spec.rows + spec.cols:
        if not 1 <= idx <= m:
            raise IndexError(f"index {idx} out of range 1..{m}")
    row_rest = sorted(set(range(1, m + 1)) - set(spec.rows))
    col_rest = sorted(set(range(1, m + 1)) - set(spec.cols))
    sign = (-1) ** (
        inversion_number(list(spec.rows) + row_rest)
        + inversion_number(list(spec.cols) + col_rest)
    )
    sub = PolyMatrix(
        [[matrix.entries[r - 1][c - 1] for c in col_rest] for r in row_rest],
        nvars=matrix.nvars,
    )
    det = determinant(sub)
    return det if sign > 0 else -det


def algebraic_cofactor(matrix: PolyMatrix, i: int, j: int) -> Polynomial:
    """Classical cofactor (-1)^(i+j) * complementary minor of entry (i, j).

    Fast path for single deletions; agrees with signed_minor on ((i,),(j,)).
    """
    m = matrix.m
    if not (1 <= i <= m and 1 <= j <= m):
        raise IndexError(f"cofactor index ({i},{j}) out of range 1..{m}")
    rest_r = [r for r in range(1, m + 1) if r != i]
    rest_c = [c for c in range(1, m + 1) if c != j]
    sub = PolyMatrix(
        [[matrix.entries[r - 1][c - 1] for c in rest_c] for r in rest_r],
        nvars=matrix.nvars,
    )
    det = determinant(sub)
    return det if (i + j) % 2 == 0 else -det


def _minor_or_zero(matrix: PolyMatrix, rows: tuple[int, ...], cols: tuple[int, ...]) -> Polynomial:
    # repeated deletion indices make the minor zero by antisymmetry
    if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
        return Polynomial.zero(matrix.nvars)
    return signed_minor(matrix, MinorSpec(rows, cols))


def verify_cofactor_identity(f: Polynomial, i: int, j: int, k: int) -> tuple[bool, Polynomial]:
    """Check x_i*A_jk - x_k*A_ji = (d-1) * sum_{l != j} f_l * A_[l,i,j,k] for homogeneous f.

    A_[l,i,j,k] deletes rows (l, j) and columns (i, k) of the Hessian.
    Returns (holds, residual); the residual is LHS - RHS and must be zero.
    """
    degree = f.homogeneous_degree()
    if degree is None:
        raise ValueError("identity is stated for homogeneous polynomials only")
    n = f.n
    for idx in (i, j, k):
        if not 1 <= idx <= n:
            raise IndexError(f"index {idx} out of range 1..{n}")
    if i == k:
        return True, Polynomial.zero(n)
    hess = hessian(f)
    lhs = Polynomial.variable(n, i) * algebraic_cofactor(hess, j, k) \
        - Polynomial.variable(n, k) * algebraic_cofactor(hess, j, i)
    rhs = Polynomial.zero(n)
    for l in range(1, n + 1):
        if l == j:
            continue
        f_l = f.partial(l)
        if f_l.is_zero():
            continue
        rhs = rhs + f_l * _minor_or_zero(hess, (l, j), (i, k))
    residual = lhs - rhs.scale(degree - 1)
    return residual.is_zero(), residual


def verify_replaced_column_vanishes(f: Polynomial, i: int, j: int, k: int, t: int) -> bool:
    """Check sum_{l != j} f_lt * A_[l,i,j,k] = 0 for t outside {i, k}.

    The sum is the determinant of the complementary minor of entry (j, k)
    with its column i replaced by column t, which then has two equal
    columns.
    """
    n = f.n
    for idx in (i, j, k, t):
        if not 1 <= idx <= n:
            raise IndexError(f"index {idx} out of range 1..{n}")
    if t in (i, k):
        raise ValueError(f"replacement column t={t} must differ from i={i} and k={k}")
    hess = hessian(f)
    total = Polynomial.zero(n)
    for l in range(1, n + 1):
        if l == j:
            continue
        total = total + hess.entry(l, t) * _minor_or_zero(hess, (l, j), (i, k))
    return total.is_zero()
