# tests/test_rectifier_zeta.py
from fractions import Fraction

import pytest

from jlrectifier.cyclotomic import QZ_HALF, QZ_ZERO, CyclicSubgroup, QZValue, RootOfUnity
from jlrectifier.errors import AsymmetricClassError, InvariantError
from jlrectifier.rectifier_zeta import (
    PAIR_INVERSE,
    PAIR_REPRESENTATIVE,
    SYMMETRIC,
    TameCharacter,
    _observables,
    assign_zeta,
    character_on_E,
    character_on_class,
    chi_datum,
    chi_zeta_checks,
    functorial_check,
    mutate_family,
    pair_contributions_match,
    rectifier,
    rectifier_terms,
    representative_independence,
    resplit_pairs,
    restrict_product,
    split_invariance,
    split_rectifier_is_trivial,
    totally_ramified_law_holds,
    trivial_family,
    unramified_quadratic,
    verify_chi_conditions,
    verify_hasse_independence,
    verify_main_theorem,
    verify_zeta_conditions,
    zeta_epsilon,
)
from jlrectifier.tame_galois import SubfieldDescriptor, double_coset_index


class TestTameCharacter:
    def test_evaluate(self):
        mu = CyclicSubgroup(8, 80)
        char = TameCharacter("E", mu, QZValue(Fraction(1, 8)), QZ_HALF)
        assert char.evaluate(mu.element(3)) == QZValue(Fraction(3, 8))
        assert char.evaluate(mu.element(0), 1) == QZ_HALF
        assert char.evaluate(mu.element(4), 2) == QZ_HALF

    def test_value_must_fit_the_group(self):
        with pytest.raises(InvariantError):
            TameCharacter("E", CyclicSubgroup(8, 80), QZValue(Fraction(1, 3)))

    def test_predicates(self):
        mu = CyclicSubgroup(8, 80)
        char = TameCharacter("E", mu)
        assert char.is_trivial() and char.is_quadratic() and char.is_unramified()
        flipped = char.flip_pi()
        assert flipped.on_pi == QZ_HALF
        assert not flipped.agrees_with(char)
        assert flipped.flip_pi().agrees_with(char)
        assert not TameCharacter("E", mu, QZValue(Fraction(1, 4))).is_quadratic()


class TestRectifier:
    def test_example_is_trivial(self, example_config):
        terms = rectifier_terms(example_config)
        assert (terms.n, terms.m, terms.f_varpi, terms.m_varpi) == (4, 2, 2, 2)
        assert terms.sign_exponent == 2 and terms.sign == 1
        assert terms.character.is_trivial()

    def test_odd_m_is_the_unramified_sign(self, odd_m_config):
        terms = rectifier_terms(odd_m_config)
        assert terms.sign_exponent == 1
        char = rectifier(odd_m_config)
        assert (char.on_mu_generator, char.on_pi) == (QZ_ZERO, QZ_HALF)

    def test_split_form_has_trivial_rectifier(self, split_config):
        assert rectifier(split_config).is_trivial()

    def test_totally_ramified_law(self, totally_ramified_config, odd_m_config):
        assert totally_ramified_law_holds(totally_ramified_config)
        assert totally_ramified_law_holds(odd_m_config)
        flipped = rectifier(odd_m_config).flip_pi()
        assert not totally_ramified_law_holds(odd_m_config, flipped)

    def test_split_rectifier_check(self, split_config, odd_m_config):
        assert split_rectifier_is_trivial(split_config)
        assert not split_rectifier_is_trivial(split_config, rectifier(odd_m_config))


class TestZetaAssignment:
    def test_example_roles_and_epsilon(self, example_config):
        family = assign_zeta(example_config)
        assert [e.dc_key for e in family.entries] == [(0, 40), (1, 0), (1, 40)]
        assert all(e.role == SYMMETRIC and e.epsilon == 1 for e in family.entries)
        assert family.mutated is None

    def test_epsilon(self, quadratic_unramified_model):
        index = double_coset_index(quadratic_unramified_model)
        assert zeta_epsilon(index[(0, 40)], 1) == -1
        assert zeta_epsilon(index[(1, 40)], 1) == -1
        assert zeta_epsilon(index[(1, 0)], 1) == 1
        assert zeta_epsilon(index[(1, 40)], 2) == 1

    def test_pair_roles(self, cubic_ramified_model):
        family = trivial_family(cubic_ramified_model)
        assert [(e.dc_key, e.role) for e in family.entries] == [
            ((0, 114), PAIR_REPRESENTATIVE),
            ((0, 228), PAIR_INVERSE),
        ]
        assert family[(0, 114)].partner_key == (0, 228)

    def test_assigned_family_satisfies_conditions(self, all_configs):
        for jc in all_configs:
            family = assign_zeta(jc)
            report = verify_zeta_conditions(jc.model, family, full_orbit=True)
            assert report.ok, report.failures
            assert pair_contributions_match(jc.model, family)

    def test_trivial_family_fails_where_a_sign_is_forced(self, odd_m_config):
        model = odd_m_config.model
        product = restrict_product(model, trivial_family(model))
        assert not product.agrees_with(rectifier(odd_m_config))


class TestMainTheorem:
    def test_all_configs(self, all_configs):
        for jc in all_configs:
            report = verify_main_theorem(jc)
            assert report.verdict, jc
            assert report.zeta_check.ok
            assert report.split_invariant

    def test_mutation_breaks_the_product(self, example_config):
        report = verify_main_theorem(example_config, mutate=True)
        assert report.family.mutated == (1, 0)
        assert not report.verdict
        assert not report.zeta_check.ok

    def test_mutation_without_constrained_class(self, odd_m_config):
        model = odd_m_config.model
        family = mutate_family(model, assign_zeta(odd_m_config))
        assert family.mutated == (0, 4)
        assert not restrict_product(model, family).agrees_with(rectifier(odd_m_config))


class TestProducts:
    def test_restrict_product_over_a_subset(self, example_config):
        model = example_config.model
        family = assign_zeta(example_config)
        assert restrict_product(model, family, []).is_trivial()
        full = restrict_product(model, family)
        assert full.mu_g == model.mu_E

    def test_resplit_keeps_the_product(self, totally_ramified_config):
        model = totally_ramified_config.model
        family = assign_zeta(totally_ramified_config)
        base = restrict_product(model, family)
        for seed in range(5):
            assert restrict_product(model, resplit_pairs(family, seed)).agrees_with(base)
        assert split_invariance(model, family)

    def test_character_on_E(self, quadratic_unramified_model):
        char = character_on_E(quadratic_unramified_model, on_pi=QZ_HALF)
        assert char.mu_g.order == 8
        assert char.field_tag == "E"


class TestChi:
    def test_chi_conditions(self, quadratic_unramified_model):
        assert chi_zeta_checks(quadratic_unramified_model) == {(1, 0): True, (1, 40): True}

    def test_unramified_quadratic_is_a_chi(self, quadratic_unramified_model):
        model = quadratic_unramified_model
        dc = double_coset_index(model)[(1, 40)]
        assert verify_chi_conditions(model, unramified_quadratic(model, dc), dc)
        assert not verify_chi_conditions(model, character_on_class(model, dc), dc)

    def test_chi_datum_flipped_is_zeta(self, quadratic_unramified_field_model):
        model = quadratic_unramified_field_model
        (dc,) = double_coset_index(model).values()
        chi = chi_datum(model, dc)
        assert verify_chi_conditions(model, chi, dc)
        assert not verify_chi_conditions(model, chi.flip_pi(), dc)

    def test_only_sym_unram(self, quadratic_unramified_model, cubic_ramified_model):
        dc = double_coset_index(quadratic_unramified_model)[(0, 40)]
        with pytest.raises(AsymmetricClassError):
            chi_datum(quadratic_unramified_model, dc)
        dc = double_coset_index(cubic_ramified_model)[(0, 114)]
        with pytest.raises(AsymmetricClassError):
            verify_chi_conditions(cubic_ramified_model, character_on_class(cubic_ramified_model, dc), dc)


class TestFunctoriality:
    @pytest.mark.parametrize("K", [SubfieldDescriptor(1, 2), SubfieldDescriptor(2, 2), SubfieldDescriptor(2, 1)])
    def test_example(self, example_config, K):
        report = functorial_check(example_config, K)
        assert report.ok

    def test_classes_inside_the_top_level(self, example_config):
        report = functorial_check(example_config, SubfieldDescriptor(1, 2))
        assert report.classes == ((1, 0),)
        assert (report.terms.n, report.terms.m) == (2, 2)

    def test_base_field_repeats_the_rectifier(self, totally_ramified_config):
        report = functorial_check(totally_ramified_config, SubfieldDescriptor(4, 1))
        assert report.terms.character.agrees_with(rectifier(totally_ramified_config))
        assert report.ok


class TestIndependence:
    def test_hasse(self, all_checks_config):
        report = verify_hasse_independence(all_checks_config)
        assert report.h_values == (1, 2)
        assert report.ok

    def test_hasse_with_one_invariant(self, example_config):
        report = verify_hasse_independence(example_config)
        assert report.h_values == (1,)
        assert report.ok

    def test_hasse_observables_cover_each_class(self, example_config):
        observed = _observables(example_config)
        per_class = [v for v in observed if v.startswith("t:")]
        assert {v.split(":")[1] for v in per_class} == {"A", "M"}
        assert len(per_class) == 4 * len(double_coset_index(example_config.model))

    def test_representatives(self, all_configs):
        for jc in all_configs:
            assert representative_independence(jc) == []

    def test_mutated_family_is_caught_at_every_representative(self, example_config):
        family = assign_zeta(example_config, mutate=True)
        assert representative_independence(example_config, family)


def test_root_of_unity_in_quadratic_unramified_field(quadratic_unramified_field_model):
    model = quadratic_unramified_field_model
    dc = double_coset_index(model)[(1, 0)]
    char = character_on_class(model, dc, QZ_ZERO, QZ_HALF)
    assert char.evaluate(RootOfUnity(0, model.N), 1) == QZ_HALF
