# tests/test_inner_form.py
from dataclasses import replace

import pytest

from jlrectifier.errors import ConfigError
from jlrectifier.inner_form import (
    InnerForm,
    JumpConfig,
    ModuleCase,
    admissibility_errors,
    inner_form_errors,
    jump_errors,
    jump_levels,
    minimal_jump_sequences,
    order_invariants,
    split_form,
)
from jlrectifier.tame_galois import SubfieldDescriptor, TameParams

QUARTIC = TameParams(q=5, e=4, f=1)
QUARTIC_TOWER = (SubfieldDescriptor(1, 1), SubfieldDescriptor(2, 1))


def test_split_form():
    form = split_form(6)
    assert (form.m, form.d, form.h) == (6, 1, 0)
    assert form.is_split


@pytest.mark.parametrize(
    "n,form,fragment",
    [
        (4, InnerForm(3, 2, 1), "m*d = 6 but n = 4"),
        (4, InnerForm(2, 2, 2), "not coprime"),
        (4, InnerForm(0, 2, 1), "must be positive"),
    ],
)
def test_inner_form_errors(n, form, fragment):
    assert any(fragment in r for r in inner_form_errors(n, form))


def test_inner_form_ok():
    assert inner_form_errors(4, InnerForm(1, 4, 3)) == []


class TestJumps:
    def test_not_increasing(self):
        reasons = jump_errors(QUARTIC, QUARTIC_TOWER, (3, 3))
        assert any("not strictly increasing" in r for r in reasons)

    def test_divisibility(self):
        reasons = jump_errors(QUARTIC, QUARTIC_TOWER, (1, 3))
        assert reasons == ["jump a_1=3 is not a multiple of e(E/E_1)=2"]

    def test_length_mismatch(self):
        assert any("2 tower levels but 1 jumps" in r for r in jump_errors(QUARTIC, QUARTIC_TOWER, (1,)))

    def test_non_minimal_jump_is_only_reported(self):
        reasons = admissibility_errors(QUARTIC, QUARTIC_TOWER, (2, 4))
        assert len(reasons) == 2
        assert "not minimal" in reasons[0]
        assert jump_errors(QUARTIC, QUARTIC_TOWER, (2, 4)) == []

    def test_minimal_sequences(self):
        assert minimal_jump_sequences(QUARTIC, QUARTIC_TOWER) == [(1, 2)]
        assert minimal_jump_sequences(QUARTIC, QUARTIC_TOWER, minimal=False) == [(2, 4), (1, 2)]

    def test_minimal_sequences_are_admissible(self):
        params = TameParams(q=7, e=6, f=1)
        tower = (SubfieldDescriptor(1, 1), SubfieldDescriptor(3, 1))
        sequences = minimal_jump_sequences(params, tower)
        assert sequences
        for jumps in sequences:
            assert jump_errors(params, tower, jumps) == []
            assert admissibility_errors(params, tower, jumps) == []


class TestJumpConfig:
    def test_example_is_valid_but_not_minimal(self, example_config):
        assert example_config.errors() == []
        assert not example_config.is_admissible
        assert "a_0=2 is not minimal" in example_config.admissibility_errors()[0]

    def test_fields(self, totally_ramified_config):
        fields = totally_ramified_config.fields()
        assert fields[0].is_top()
        assert fields[-1].is_base(totally_ramified_config.params)
        assert totally_ramified_config.field_at(1) == SubfieldDescriptor(2, 1)
        assert totally_ramified_config.t == 1

    def test_validate_collects_reasons(self, example_config):
        broken = replace(example_config, form=InnerForm(3, 2, 2), jumps=(2, 2))
        with pytest.raises(ConfigError) as info:
            broken.validate()
        assert len(info.value.reasons) >= 2

    def test_invalid_tower_still_reports_monotonicity(self, example_config):
        broken = replace(example_config, tower=(SubfieldDescriptor(2, 2),), jumps=(3, 1))
        reasons = broken.errors()
        assert any("equals F" in r for r in reasons)
        assert any("not strictly increasing" in r for r in reasons)

    def test_split_and_hasse(self, example_config):
        assert example_config.split().form == InnerForm(4, 1, 0)
        assert example_config.with_hasse(3).form.h == 3


class TestOrderInvariants:
    def test_example(self, example_config):
        inv = order_invariants(example_config.params, example_config.form, example_config.tower)
        assert (inv.s, inv.eA, inv.r) == (2, 1, 1)
        assert [(lv.d_K, lv.m_K) for lv in inv.levels] == [(1, 1), (1, 2), (2, 2)]

    def test_centralizer_degrees_multiply_out(self, all_configs):
        for jc in all_configs:
            inv = order_invariants(jc.params, jc.form, jc.tower)
            for lv in inv.levels:
                assert lv.d_K * lv.m_K == lv.field.degree_below
                assert inv.eA % lv.eA_K == 0

    def test_rejects_bad_form(self, example_config):
        with pytest.raises(ConfigError):
            order_invariants(example_config.params, InnerForm(3, 2, 1), example_config.tower)


class TestJumpLevels:
    def test_even_jump_is_difference(self, example_config):
        levels = jump_levels(example_config)
        (level,) = levels.levels
        assert level.case is ModuleCase.DIFFERENCE
        assert (level.target, level.j_k) == (0, 1)
        assert levels.R == -1
        assert levels.Q is None

    def test_totally_ramified(self, totally_ramified_config):
        levels = jump_levels(totally_ramified_config)
        assert [lv.case for lv in levels.levels] == [ModuleCase.EMPTY, ModuleCase.DIFFERENCE]
        assert levels.R is None

    def test_odd_jump_with_odd_eA_is_empty(self, odd_m_config):
        (level,) = jump_levels(odd_m_config).levels
        assert level.case is ModuleCase.EMPTY
        assert level.j_k is None

    def test_even_eA_moves_target_with_hasse(self):
        params = TameParams(q=3, e=1, f=2)
        jc = JumpConfig(params=params, tower=(SubfieldDescriptor(1, 1),), jumps=(1,), form=InnerForm(1, 2, 1))
        levels = jump_levels(jc)
        assert levels.eA == 2
        (level,) = levels.levels
        assert level.case is ModuleCase.WITH_INNER
        assert (level.target, level.j_k) == (1, 1)
