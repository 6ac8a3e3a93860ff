# tests/test_cyclotomic.py
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jlrectifier.cyclotomic import (
    QZ_HALF,
    QZ_ZERO,
    CyclicSubgroup,
    QZValue,
    RootOfUnity,
    certify_signature_formula,
    cycle_decomposition,
    element_order,
    finite_field_norm,
    multiplication_permutation,
    multiplication_signature,
    power_solutions,
    signature_by_cycles,
    solve_norm_equation,
    square_class_symbol,
)
from jlrectifier.errors import AmbientSizingError, NotInSubgroupError
from tests.property_settings import DETERMINISM_SETTINGS, STANDARD_SETTINGS

# ambient orders q**M - 1 that show up in the small models
AMBIENT_ORDERS = [8, 24, 80, 342, 624, 728]


@st.composite
def roots(draw, modulus=None):
    n = modulus or draw(st.sampled_from(AMBIENT_ORDERS))
    return RootOfUnity(draw(st.integers(min_value=-3 * n, max_value=3 * n)), n)


class TestRootOfUnity:
    def test_exponent_is_reduced(self):
        assert RootOfUnity(85, 80) == RootOfUnity(5, 80)
        assert RootOfUnity(-1, 80).exponent == 79

    def test_minus_one(self):
        assert RootOfUnity.minus_one(80) == RootOfUnity(40, 80)
        with pytest.raises(NotInSubgroupError):
            RootOfUnity.minus_one(81)

    def test_generator_of(self):
        zeta = RootOfUnity.generator_of(8, 80)
        assert zeta == RootOfUnity(10, 80)
        assert element_order(zeta) == 8
        with pytest.raises(AmbientSizingError):
            RootOfUnity.generator_of(7, 80)

    def test_mixing_ambient_groups_is_rejected(self):
        with pytest.raises(ValueError):
            RootOfUnity(1, 8) * RootOfUnity(1, 80)

    def test_frobenius(self):
        x = RootOfUnity(10, 80)
        assert x.frobenius(3) == RootOfUnity(30, 80)
        assert x.frobenius(3, -1).frobenius(3) == x

    def test_lift(self):
        assert RootOfUnity(1, 8).lift(80) == RootOfUnity(10, 80)
        with pytest.raises(AmbientSizingError):
            RootOfUnity(1, 8).lift(81)

    def test_str(self):
        assert str(RootOfUnity(3, 80)) == "g0^3"

    @DETERMINISM_SETTINGS
    @given(roots())
    def test_inverse(self, x):
        assert (x * x.inverse()).is_one()
        assert x / x == RootOfUnity.one(x.modulus)

    @STANDARD_SETTINGS
    @given(st.data())
    def test_frobenius_composes(self, data):
        x = data.draw(roots(modulus=80))
        assert x.frobenius(3, 2) == x.frobenius(3).frobenius(3)
        assert x.frobenius(3, 4) == x  # 3**4 = 1 mod 80


class TestQZValue:
    def test_normalised_into_unit_interval(self):
        assert QZValue(Fraction(3, 2)) == QZ_HALF
        assert QZValue(Fraction(-1, 3)).value == Fraction(2, 3)

    def test_signs(self):
        assert QZValue.from_sign(1) == QZ_ZERO
        assert QZValue.from_sign(-1) == QZ_HALF
        assert QZValue.parse("1/2").to_sign() == -1
        with pytest.raises(ValueError):
            QZValue.from_sign(2)
        with pytest.raises(ValueError):
            QZValue(Fraction(1, 3)).to_sign()

    def test_str_and_order(self):
        assert str(QZ_ZERO) == "0/1"
        assert str(QZValue.parse("5/4")) == "1/4"
        assert QZValue.parse("1/6").order() == 6

    def test_arithmetic(self):
        third = QZValue(Fraction(1, 3))
        assert (third + third + third).is_zero()
        assert third - third == QZ_ZERO
        assert third.scale(3).is_zero()
        assert QZ_HALF + QZ_HALF == QZ_ZERO


class TestCyclicSubgroup:
    def test_membership_and_logs(self):
        H = CyclicSubgroup(8, 80)
        assert H.cofactor == 10
        assert H.generator() == RootOfUnity(10, 80)
        assert RootOfUnity(30, 80) in H
        assert H.index_of(RootOfUnity(30, 80)) == 3
        assert RootOfUnity(5, 80) not in H
        with pytest.raises(NotInSubgroupError):
            H.index_of(RootOfUnity(5, 80))

    def test_elements(self):
        H = CyclicSubgroup(4, 80)
        assert [x.exponent for x in H.elements()] == [0, 20, 40, 60]
        assert H.element(5) == H.element(1)

    def test_order_must_divide(self):
        with pytest.raises(AmbientSizingError):
            CyclicSubgroup(7, 80)


class TestPowerSolutions:
    def test_square_roots_of_one(self):
        assert power_solutions(2, RootOfUnity.one(80)) == {RootOfUnity(0, 80), RootOfUnity(40, 80)}

    def test_no_solution(self):
        assert power_solutions(2, RootOfUnity(1, 80)) == frozenset()

    def test_e_must_divide_ambient_order(self):
        with pytest.raises(AmbientSizingError):
            power_solutions(3, RootOfUnity.one(80))

    @STANDARD_SETTINGS
    @given(st.data())
    def test_every_solution_is_a_root(self, data):
        e = data.draw(st.sampled_from([1, 2, 3, 4, 6]))
        c = data.draw(roots(modulus=624))
        solutions = power_solutions(e, c)
        assert all(w ** e == c for w in solutions)
        assert len(solutions) in (0, e)


class TestSquareClassSymbol:
    def test_even_subgroup(self):
        H = CyclicSubgroup(8, 80)
        assert square_class_symbol(H.element(2), H) == 1
        assert square_class_symbol(H.element(1), H) == -1

    def test_odd_subgroup_has_only_squares(self):
        H = CyclicSubgroup(5, 80)
        assert all(square_class_symbol(x, H) == 1 for x in H.elements())


class TestMultiplicationSignature:
    def test_generator_of_f9(self):
        zeta = RootOfUnity.generator_of(8, 80)
        # an 8-cycle on the units, 0 fixed
        assert multiplication_signature(zeta, 2, 3) == -1
        assert multiplication_signature(zeta, 2, 3, brute_force=True) == -1

    def test_minus_one(self):
        minus_one = RootOfUnity(40, 80)
        assert multiplication_signature(minus_one, 2, 3) == 1
        assert multiplication_signature(minus_one, 1, 3) == -1

    def test_element_outside_the_field(self):
        with pytest.raises(NotInSubgroupError):
            multiplication_signature(RootOfUnity.generator_of(8, 80), 1, 3)

    def test_permutation_and_cycles(self):
        assert multiplication_permutation(1, 2) == [0, 2, 1]
        assert sorted(sorted(c) for c in cycle_decomposition([1, 0, 2])) == [[0, 1]]
        assert cycle_decomposition([0, 1, 2]) == []
        assert signature_by_cycles(0, 8) == 1

    @pytest.mark.parametrize("p,k", [(2, 1), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (7, 2), (11, 1), (13, 1)])
    def test_closed_form_matches_cycles(self, p, k):
        assert certify_signature_formula(p, k) == []

    @pytest.mark.parametrize("p,k", [(3, 4), (17, 2)])
    def test_one_element_per_order(self, p, k):
        assert certify_signature_formula(p, k, exhaustive=False) == []

    def test_cycle_sign_depends_only_on_the_order(self):
        # 3**4 - 1 = 80
        by_order = {}
        for log_alpha in range(80):
            by_order.setdefault(80 // gcd(log_alpha, 80), set()).add(signature_by_cycles(log_alpha, 80))
        assert all(len(signs) == 1 for signs in by_order.values())
        assert len(by_order) == 10


class TestNorms:
    def test_norm_is_a_power(self):
        x = RootOfUnity(1, 80)
        assert finite_field_norm(x, 4, 2, 3) == RootOfUnity(10, 80)
        assert finite_field_norm(x, 4, 4, 3) == x

    def test_degrees_must_divide(self):
        with pytest.raises(ValueError):
            finite_field_norm(RootOfUnity(1, 80), 4, 3, 3)

    def test_solve_norm_equation(self):
        z = RootOfUnity(30, 80)  # third power of the generator of mu_8
        w = solve_norm_equation(z, 4, 2, 3)
        assert w == RootOfUnity(3, 80)
        assert finite_field_norm(w, 4, 2, 3) == z

    def test_solve_needs_big_enough_ambient_group(self):
        with pytest.raises(AmbientSizingError):
            solve_norm_equation(RootOfUnity(1, 8), 4, 2, 3)

    @STANDARD_SETTINGS
    @given(st.integers(min_value=0, max_value=7))
    def test_norm_equation_solution_is_exact(self, i):
        z = CyclicSubgroup(8, 80).element(i)
        assert finite_field_norm(solve_norm_equation(z, 4, 2, 3), 4, 2, 3) == z
