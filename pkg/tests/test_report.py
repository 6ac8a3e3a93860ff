# tests/test_report.py
import json

import pytest
from rich.console import Console

from jlrectifier import report as reports
from jlrectifier.errors import InvariantError
from jlrectifier.models import CheckFlags, RunConfig
from tests.conftest import CONFIG_DIR, EXAMPLE_DOC, ODD_M_DOC, SPLIT_DOC, TOTALLY_RAMIFIED_DOC


def _run_config(doc, **flags) -> RunConfig:
    run_config = RunConfig.model_validate(doc)
    if flags:
        run_config.flags = CheckFlags(**flags)
    return run_config


@pytest.fixture(scope="module")
def example_report():
    return reports.build_run_report(_run_config(EXAMPLE_DOC))


class TestBuildRunReport:
    def test_example(self, example_report):
        report = example_report
        assert report.ok, report.verdicts.failed()
        assert [(row.j, row.u, row.symmetry) for row in report.cosets] == [
            (0, 40, "sym-ram"),
            (1, 0, "sym-unram"),
            (1, 40, "sym-unram"),
        ]
        assert report.cosets[0].exceptional
        assert len(report.modules) == 4
        assert {row.side for row in report.modules} == {"A", "M"}
        assert [(lv.k, lv.a, lv.case, lv.target) for lv in report.levels] == [(0, 2, "difference", 0)]
        assert (report.rectifier.on_mu, report.rectifier.on_pi) == ("0/1", "0/1")
        assert report.sign_exponent == 2
        assert report.mutated is None

    def test_parity_counts(self, example_report):
        counts = example_report.parity_counts
        assert (counts.asymmetric, counts.sym_ram, counts.sym_unram) == (0, 1, 2)
        assert (counts.sym_unram_fixing, counts.sym_unram_not_fixing, counts.f_varpi) == (1, 1, 2)
        assert example_report.verdicts.parity["R_le_Q"]

    def test_non_minimal_jump_keeps_the_exceptional_class(self, example_report):
        assert "exceptional_absent" not in example_report.verdicts.modules
        assert example_report.verdicts.modules["exceptional_even"]

    def test_functorial_rows(self, example_report):
        assert set(example_report.verdicts.functoriality) == {"1,2", "2,2", "2,1"}
        top = next(row for row in example_report.functorial if (row.e_rel, row.f_rel) == (1, 2))
        assert top.classes == [[1, 0]]
        assert top.ok

    def test_t_factor_rows(self, example_report):
        exceptional = [row for row in example_report.t_factors if (row.j, row.u) == (0, 40)]
        assert [row.gamma for row in exceptional] == ["mu", "varpi"]
        assert all(row.generic_t0 is None for row in exceptional)
        assert all(row.agree for row in example_report.t_factors)

    def test_odd_m_rectifier(self):
        report = reports.build_run_report(_run_config(ODD_M_DOC))
        assert report.ok
        assert report.rectifier.on_pi == "1/2"
        assert report.zeta_product.on_pi == "1/2"
        assert report.sign_exponent == 1

    def test_special_case_laws(self, example_report):
        assert example_report.verdicts.totally_ramified_law is None
        assert example_report.verdicts.split_trivial is None
        totally_ramified = reports.build_run_report(_run_config(TOTALLY_RAMIFIED_DOC))
        assert totally_ramified.verdicts.totally_ramified_law is True
        assert totally_ramified.verdicts.split_trivial is None
        split = reports.build_run_report(_run_config(SPLIT_DOC))
        assert split.verdicts.split_trivial is True
        assert split.ok

    def test_mutation(self):
        report = reports.build_run_report(_run_config(EXAMPLE_DOC), mutate_zeta=True)
        assert not report.ok
        assert report.mutated == [1, 0]
        assert "main_theorem" in report.verdicts.failed()
        assert report.zeta_failures

    def test_flags_switch_checks_off(self):
        report = reports.build_run_report(
            _run_config(TOTALLY_RAMIFIED_DOC, main_theorem=False, functoriality=False, parity=False)
        )
        assert report.verdicts.main_theorem is None
        assert report.verdicts.functoriality == {}
        assert report.verdicts.parity == {}
        assert report.functorial == []
        assert report.parity_counts is not None

    def test_every_flag(self):
        text = (CONFIG_DIR / "all_checks.json").read_text(encoding="utf-8")
        report = reports.build_run_report(RunConfig.model_validate_json(text))
        assert report.verdicts.hasse_independence is True
        assert report.verdicts.representative_independence is True
        assert report.ok

    def test_json_is_deterministic(self, example_report):
        again = reports.build_run_report(_run_config(EXAMPLE_DOC))
        assert reports.report_json(example_report) == reports.report_json(again)


def test_try_build_report_captures_errors(monkeypatch):
    def broken(*_args, **_kwargs):
        raise InvariantError("boom")

    monkeypatch.setattr(reports, "verify_main_theorem", broken)
    report, error = reports.try_build_report(_run_config(EXAMPLE_DOC))
    assert report is None
    assert error == "InvariantError: boom"


class TestViews:
    @pytest.mark.parametrize("view", sorted(reports.VIEWS))
    def test_view_json_keeps_its_fields(self, example_report, view):
        fields, groups = reports.VIEWS[view]
        doc = json.loads(reports.view_json(example_report, view))
        assert set(doc) == {"schema_version", "config", "verdicts", *fields}
        assert set(doc["verdicts"]) == set(groups)
        assert reports.view_ok(example_report, view)

    def test_view_ok_reads_its_own_verdicts(self):
        report = reports.build_run_report(_run_config(EXAMPLE_DOC), mutate_zeta=True)
        assert not reports.view_ok(report, "rectifier")
        assert reports.view_ok(report, "cosets")

    def test_tables_render(self, example_report):
        console = Console(record=True, width=200)
        reports.print_report(example_report, console)
        for view in reports.VIEWS:
            reports.print_view(example_report, view, console)
        text = console.export_text()
        assert "Double cosets" in text
        assert "Base change to standard subfields" in text
        assert "Verdicts" in text
