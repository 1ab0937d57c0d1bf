"""Shared test helpers: seeded random polynomial generators."""

from __future__ import annotations

import random
from fractions import Fraction

from nakai_forge.derivations import (
    Derivation1,
    DerivationTuple,
    euler_derivation,
    hamiltonian,
)
from nakai_forge.groebner import is_isolated_singularity
from nakai_forge.minors import algebraic_cofactor, hessian
from nakai_forge.poly import Polynomial, monomials_of_degree


def random_polynomial(rng: random.Random, n: int, max_degree: int,
                      max_terms: int = 6, coeff_bound: int = 5) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exp = tuple(rng.randint(0, max_degree) for _ in range(n))
        if sum(exp) > max_degree:
            continue
        terms[exp] = terms.get(exp, Fraction(0)) + Fraction(
            rng.randint(-coeff_bound, coeff_bound), rng.randint(1, 3)
        )
    return Polynomial(n, terms)


def random_nonzero(rng: random.Random, n: int, max_degree: int, **kw) -> Polynomial:
    while True:
        p = random_polynomial(rng, n, max_degree, **kw)
        if not p.is_zero():
            return p


def random_homogeneous(rng: random.Random, n: int, degree: int,
                       coeff_bound: int = 3) -> Polynomial:
    while True:
        terms = {
            e: Fraction(rng.randint(-coeff_bound, coeff_bound))
            for e in monomials_of_degree(n, degree)
        }
        p = Polynomial(n, terms)
        if not p.is_zero():
            return p


def random_isolated(rng: random.Random, n: int, degree: int,
                    coeff_bound: int = 3) -> Polynomial:
    """A random homogeneous polynomial with an isolated singularity."""
    while True:
        p = random_homogeneous(rng, n, degree, coeff_bound)
        if is_isolated_singularity(p):
            return p


def random_compatible_tuple(rng: random.Random, f: Polynomial) -> DerivationTuple:
    """A random tuple whose pairwise defects lie in the Jacobian ideal and
    whose members all preserve (f).

    Built as d_i = p_i * E + (Hamiltonian combinations) + (multiples of f),
    where the Euler coefficients p_i = h*x_i + q*A_1i come from the two
    families with defects provably inside the Jacobian ideal.
    """
    n = f.n
    euler = euler_derivation(n)
    h = random_polynomial(rng, n, 1, max_terms=3, coeff_bound=2)
    q = random_polynomial(rng, n, 1, max_terms=2, coeff_bound=2)
    hess = hessian(f)
    ders = []
    for i in range(1, n + 1):
        p_i = h * Polynomial.variable(n, i) + q * algebraic_cofactor(hess, 1, i)
        d = Derivation1(tuple(p_i * img for img in euler.images))
        for _ in range(rng.randint(0, 2)):
            k = rng.randint(1, n)
            l = rng.randint(1, n)
            if k == l:
                continue
            d = d.add_scaled(
                random_polynomial(rng, n, 1, max_terms=2, coeff_bound=2),
                hamiltonian(f, k, l),
            )
        if rng.random() < 0.5:
            images = list(d.images)
            j = rng.randrange(n)
            images[j] = images[j] + random_polynomial(rng, n, 1, max_terms=2, coeff_bound=2) * f
            d = Derivation1(tuple(images))
        ders.append(d)
    return DerivationTuple(tuple(ders), f)
