import math
import random
from fractions import Fraction

import pytest

from nakai_forge.exprio import parse_poly
from nakai_forge.poly import (
    GREVLEX,
    GRLEX,
    LEX,
    LinearChange,
    MonomialOrder,
    Polynomial,
    monomials_of_degree,
)

V3 = ["x", "y", "z"]


def P(text, variables=V3):
    return parse_poly(text, variables)


class TestArithmetic:
    def test_difference_of_squares(self):
        assert P("(x + y)*(x - y)") == P("x^2 - y^2")

    def test_additive_identity(self):
        p = P("x^2*y - 3*z")
        assert p + Polynomial.zero(3) == p
        assert P("0") == Polynomial.zero(3)

    def test_monomial_product(self):
        # hand expansion: (2xy + z^2) * x = 2x^2y + xz^2
        assert P("(2*x*y + z^2)*x") == P("2*x^2*y + x*z^2")

    def test_variable_count_mismatch(self):
        with pytest.raises(ValueError):
            Polynomial.variable(2, 1) + Polynomial.variable(3, 1)

    def test_ring_axioms_random(self):
        rng = random.Random(101)
        from conftest import random_polynomial

        for _ in range(40):
            n = rng.randint(1, 4)
            p = random_polynomial(rng, n, 3)
            q = random_polynomial(rng, n, 3)
            r = random_polynomial(rng, n, 3)
            assert (p + q) + r == p + (q + r)
            assert p * (q + r) == p * q + p * r
            assert (p - p).is_zero()
            assert p * q == q * p

    def test_power(self):
        assert P("x + y") ** 3 == P("x^3 + 3*x^2*y + 3*x*y^2 + y^3")
        assert P("x") ** 0 == Polynomial.constant(3, 1)
        with pytest.raises(ValueError):
            P("x") ** -1


class TestCalculus:
    def test_partial_paper_example(self):
        f = P("x^2*y + y^2*z + z^2*x")
        assert f.partial(1) == P("2*x*y + z^2")
        assert f.partial(2) == P("2*y*z + x^2")
        assert f.partial(3) == P("2*z*x + y^2")

    def test_partial_constant_and_power_rule(self):
        assert Polynomial.constant(3, 7).partial(2).is_zero()
        assert P("x^3 + y^3 + z^3").partial(2) == P("3*y^2")

    def test_partial_index_range(self):
        with pytest.raises(IndexError):
            P("x").partial(4)
        with pytest.raises(IndexError):
            P("x").partial(0)

    def test_partial_leibniz_random(self):
        rng = random.Random(7)
        from conftest import random_polynomial

        for _ in range(25):
            n = rng.randint(1, 4)
            p = random_polynomial(rng, n, 3)
            q = random_polynomial(rng, n, 3)
            i = rng.randint(1, n)
            assert (p * q).partial(i) == p.partial(i) * q + p * q.partial(i)

    def test_higher_partial_divided_power(self):
        # d_alpha(x^alpha) = 1 under the divided-power convention
        assert Polynomial.monomial(1, (2,)).higher_partial((2,)) == Polynomial.constant(1, 1)

    def test_higher_partial_zero_index(self):
        p = P("x^2*y - 3*z")
        assert p.higher_partial((0, 0, 0)) == p

    def test_higher_partial_mixed(self):
        # (1/1!1!) d^2(x^2 y)/dx dy = 2x
        assert parse_poly("x^2*y", ["x", "y"]).higher_partial((1, 1)) == parse_poly("2*x", ["x", "y"])

    def test_higher_partial_composition_random(self):
        # d_alpha d_beta = prod(binom(a_i+b_i, a_i)) d_(alpha+beta)
        rng = random.Random(11)
        from conftest import random_polynomial

        for _ in range(30):
            n = rng.randint(1, 3)
            p = random_polynomial(rng, n, 5)
            alpha = tuple(rng.randint(0, 2) for _ in range(n))
            beta = tuple(rng.randint(0, 2) for _ in range(n))
            constant = 1
            for a, b in zip(alpha, beta):
                constant *= math.comb(a + b, a)
            combined = tuple(a + b for a, b in zip(alpha, beta))
            assert p.higher_partial(beta).higher_partial(alpha) == \
                p.higher_partial(combined).scale(constant)

    def test_euler_paper_example(self):
        f = P("x^2*y + y^2*z + z^2*x")
        assert f.euler() == f.scale(3)

    def test_euler_constant_and_mixed(self):
        assert Polynomial.constant(2, 5).euler().is_zero()
        assert parse_poly("x^2 + y^3", ["x", "y"]).euler() == parse_poly("2*x^2 + 3*y^3", ["x", "y"])

    def test_euler_identity_random_homogeneous(self):
        rng = random.Random(19)
        from conftest import random_homogeneous

        for _ in range(20):
            n = rng.randint(1, 5)
            d = rng.randint(1, 6)
            p = random_homogeneous(rng, n, d)
            assert p.euler() == p.scale(d)


class TestDegrees:
    def test_homogeneous_degree_paper(self):
        assert P("x^2*y + y^2*z + z^2*x").homogeneous_degree() == 3

    def test_not_homogeneous(self):
        assert parse_poly("x^2 + y^3", ["x", "y"]).homogeneous_degree() is None

    def test_fermat(self):
        assert P("x^3 + y^3 + z^3").homogeneous_degree() == 3

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ValueError):
            Polynomial.zero(2).homogeneous_degree()

    def test_total_degree(self):
        assert P("x^2*y + z").total_degree() == 3
        assert Polynomial.zero(3).total_degree() == -1


class TestEvaluate:
    def test_zero_of_parabola(self):
        assert parse_poly("x^2 - y", ["x", "y"]).evaluate((2, 4)) == 0

    def test_zero_polynomial(self):
        assert Polynomial.zero(2).evaluate((Fraction(3, 7), 5)) == 0

    def test_paper_f_at_ones(self):
        assert P("x^2*y + y^2*z + z^2*x").evaluate((1, 1, 1)) == 3

    def test_rational_point(self):
        assert parse_poly("2*x*y", ["x", "y"]).evaluate((Fraction(1, 2), Fraction(1, 3))) == Fraction(1, 3)


class TestLinearChange:
    def test_paper_change(self):
        f = P("x^2*y + y^2*z + z^2*x")
        m = LinearChange(((1, 0, -1), (0, 1, 0), (0, 0, 1)))
        g = m.apply(f)
        expected = parse_poly("(y1 - y3)^2*y2 + y2^2*y3 + y3^2*(y1 - y3)", ["y1", "y2", "y3"])
        assert g == expected

    def test_identity(self):
        f = P("x^2*y - z^3")
        assert LinearChange.identity(3).apply(f) == f

    def test_degree_preserved_random(self):
        rng = random.Random(23)
        from conftest import random_homogeneous

        for _ in range(10):
            n = rng.randint(2, 4)
            d = rng.randint(1, 4)
            p = random_homogeneous(rng, n, d)
            m = _random_invertible(rng, n)
            assert m.apply(p).homogeneous_degree() == d

    def test_multiplicativity_random(self):
        rng = random.Random(29)
        from conftest import random_polynomial

        for _ in range(10):
            n = rng.randint(2, 3)
            p = random_polynomial(rng, n, 2)
            q = random_polynomial(rng, n, 2)
            m = _random_invertible(rng, n)
            assert m.apply(p * q) == m.apply(p) * m.apply(q)

    def test_singular_matrix_rejected(self):
        with pytest.raises(ValueError):
            LinearChange(((1, 1), (1, 1)))

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            LinearChange(((1, 0, 0), (0, 1, 0)))


def _random_invertible(rng, n) -> LinearChange:
    while True:
        rows = tuple(tuple(Fraction(rng.randint(-3, 3)) for _ in range(n)) for _ in range(n))
        try:
            return LinearChange(rows)
        except ValueError:
            continue


class TestMonomialOrder:
    def test_grevlex_degree_two(self):
        # x^2 > xy > y^2 > xz > yz > z^2 in grevlex(x > y > z)
        ordering = sorted(monomials_of_degree(3, 2), key=GREVLEX.key, reverse=True)
        assert ordering == [(2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1), (0, 0, 2)]

    def test_grlex_vs_grevlex_differ(self):
        # xz vs y^2: grlex puts xz first, grevlex puts y^2 first
        assert GRLEX.greater((1, 0, 1), (0, 2, 0))
        assert GREVLEX.greater((0, 2, 0), (1, 0, 1))

    def test_lex(self):
        assert LEX.greater((1, 0, 0), (0, 5, 5))

    def test_multiplicative_random(self):
        rng = random.Random(31)
        for order in (GREVLEX, GRLEX, LEX):
            for _ in range(50):
                n = rng.randint(1, 4)
                a = tuple(rng.randint(0, 4) for _ in range(n))
                b = tuple(rng.randint(0, 4) for _ in range(n))
                c = tuple(rng.randint(0, 4) for _ in range(n))
                if order.greater(a, b):
                    assert order.greater(
                        tuple(x + y for x, y in zip(a, c)),
                        tuple(x + y for x, y in zip(b, c)),
                    )

    def test_priority_permutation(self):
        zyx = MonomialOrder("lex", priority=(3, 2, 1))
        assert zyx.greater((0, 0, 1), (1, 1, 0))

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            MonomialOrder("weird")

    def test_leading_term(self):
        p = P("x*y + z^3")
        assert GREVLEX.leading_term(p) == ((0, 0, 3), Fraction(1))
        assert LEX.leading_term(p) == ((1, 1, 0), Fraction(1))
