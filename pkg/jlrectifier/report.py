# jlrectifier/report.py
"""Assemble run reports from a validated configuration and render them as JSON or rich tables."""
import logging
from typing import List, Optional

from rich.console import Console
from rich.table import Table

from . import config as app_config
from .errors import JLRectifierError
from .inner_form import JumpConfig, jump_levels
from .models import (
    CharacterRow,
    ComponentRow,
    CosetRow,
    FunctorialRow,
    LevelRow,
    ParityCounts,
    RunConfig,
    RunReport,
    TFactorRow,
    VerdictSet,
)
from .rectifier_zeta import (
    TameCharacter,
    ZetaFamily,
    chi_zeta_checks,
    functorial_check,
    pair_contributions_match,
    representative_independence,
    split_rectifier_is_trivial,
    totally_ramified_law_holds,
    verify_hasse_independence,
    verify_main_theorem,
)
from .symplectic import ModuleDecomposition, Side, finite_module, module_checks
from .t_factors import dual_path_rows, extended_restricts_to_table
from .tame_galois import (
    AmbientModel,
    ParityReport,
    SubfieldDescriptor,
    classify_and_count,
    double_coset_index,
    double_cosets,
    maximal_unramified,
    standard_subfield_errors,
)

logger = logging.getLogger(__name__)


def coset_rows(model: AmbientModel) -> List[CosetRow]:
    return [
        CosetRow(
            j=dc.j,
            u=dc.u.exponent,
            symmetry=dc.symmetry.value,
            t=dc.t,
            fixes_uniformizer=dc.fixes_uniformizer,
            exceptional=dc.is_exceptional,
            inverse=list(dc.inverse_key),
        )
        for dc in double_cosets(model)
    ]


def component_rows(model: AmbientModel, *decs: ModuleDecomposition) -> List[ComponentRow]:
    index = double_coset_index(model)
    rows = []
    for dec in decs:
        for c in dec.components:
            rows.append(
                ComponentRow(
                    side=dec.side.value,
                    level=c.level,
                    j=c.j,
                    u=index[c.dc_key].u.exponent,
                    symmetry=c.symmetry.value,
                    case=c.case.value,
                    inner=c.inner,
                )
            )
    return rows


def t_factor_rows(model: AmbientModel) -> List[TFactorRow]:
    index = double_coset_index(model)
    rows = []
    for row in dual_path_rows(model):
        dc = index[row.dc_key]
        rows.append(
            TFactorRow(
                j=dc.j,
                u=dc.u.exponent,
                gamma=row.gamma,
                t0=row.closed.t0,
                t1=row.closed.t1_generator,
                t=row.closed.t,
                generic_t0=row.generic.t0 if row.generic else None,
                generic_t1=row.generic.t1_generator if row.generic else None,
                agree=row.agree,
            )
        )
    return rows


def character_row(label: str, char: TameCharacter, role: Optional[str] = None, epsilon: Optional[int] = None) -> CharacterRow:
    return CharacterRow(
        label=label,
        on_mu=str(char.on_mu_generator),
        on_pi=str(char.on_pi),
        mu_order=char.mu_g.order,
        role=role,
        epsilon=epsilon,
    )


def zeta_rows(model: AmbientModel, family: ZetaFamily) -> List[CharacterRow]:
    index = double_coset_index(model)
    rows = []
    for entry in family.entries:
        dc = index[entry.dc_key]
        rows.append(character_row(f"[{dc.j},{dc.u.exponent}]", entry.character, entry.role, entry.epsilon))
    return rows


def functorial_fields(jc: JumpConfig) -> List[SubfieldDescriptor]:
    """Tower levels E_0..E_t, F itself, and the maximal unramified subextension."""
    model = jc.model
    fields = list(jc.tower) + [SubfieldDescriptor(jc.params.e, jc.params.f), maximal_unramified(jc.params)]
    out = []
    for K in fields:
        if K not in out and not standard_subfield_errors(model, K):
            out.append(K)
    return out


def functorial_rows(jc: JumpConfig, family: ZetaFamily) -> List[FunctorialRow]:
    rows = []
    for K in functorial_fields(jc):
        check = functorial_check(jc, K, family)
        terms = check.terms
        rows.append(
            FunctorialRow(
                e_rel=K.e_rel,
                f_rel=K.f_rel,
                n=terms.n,
                m=terms.m,
                f_varpi=terms.f_varpi,
                m_varpi=terms.m_varpi,
                rectifier=character_row("rectifier", terms.character),
                partial_product=character_row("zeta product", check.partial_product),
                classes=[list(key) for key in check.classes],
                ok=check.ok,
            )
        )
    return rows


def parity_counts(parity: ParityReport) -> ParityCounts:
    return ParityCounts(
        asymmetric=parity.n_asymmetric,
        sym_ram=parity.n_sym_ram,
        sym_unram=parity.n_sym_unram,
        sym_unram_fixing=parity.n_sym_unram_fixing,
        sym_unram_not_fixing=parity.n_sym_unram_not_fixing,
        f_varpi=parity.f_varpi,
    )


def build_run_report(run_config: RunConfig, mutate_zeta: bool = False) -> RunReport:
    jc = run_config.to_jump_config()
    model = jc.model
    flags = run_config.flags
    A = finite_module(jc, Side.A)
    M = finite_module(jc, Side.M)
    levels = jump_levels(jc)

    result = verify_main_theorem(jc, mutate=mutate_zeta)
    t_rows = t_factor_rows(model)
    verdicts = VerdictSet(
        t_factor_paths=all(r.agree for r in t_rows),
        extended_t1_restriction=all(extended_restricts_to_table(model, dc) for dc in double_cosets(model)),
    )
    if jc.params.f == 1:
        verdicts.totally_ramified_law = totally_ramified_law_holds(jc, result.rectifier)
    if jc.form.d == 1:
        verdicts.split_trivial = split_rectifier_is_trivial(jc, result.rectifier)
    if flags.main_theorem:
        verdicts.main_theorem = result.verdict
        verdicts.split_invariance = result.split_invariant
        verdicts.pair_composition = pair_contributions_match(model, result.family)
    if flags.zeta_conditions:
        verdicts.zeta_conditions = result.zeta_check.ok
        chi = chi_zeta_checks(model)
        verdicts.chi_conditions = all(chi.values()) if chi else None
    functorial = functorial_rows(jc, result.family) if flags.functoriality else []
    for row in functorial:
        verdicts.functoriality[f"{row.e_rel},{row.f_rel}"] = row.ok
    parity = classify_and_count(model)
    if flags.parity:
        verdicts.parity = dict(parity.checks)
        verdicts.parity["R_le_Q"] = levels.R is None or levels.Q is None or levels.R <= levels.Q
        verdicts.modules = module_checks(jc)
    if flags.hasse_independence:
        verdicts.hasse_independence = verify_hasse_independence(jc).ok
    if flags.representative_independence:
        verdicts.representative_independence = not representative_independence(jc, result.family)

    report = RunReport(
        schema_version=app_config.REPORT_SCHEMA_VERSION,
        config=run_config,
        cosets=coset_rows(model),
        modules=component_rows(model, A, M),
        inner_class_hits=A.inner_class_hits,
        levels=[
            LevelRow(k=lv.k, a=lv.a, case=lv.case.value, target=lv.target)
            for lv in levels.levels
        ],
        parity_counts=parity_counts(parity),
        t_factors=t_rows,
        rectifier=character_row("rectifier", result.rectifier),
        sign_exponent=result.terms.sign_exponent,
        zeta=zeta_rows(model, result.family),
        zeta_product=character_row("zeta product", result.zeta_product),
        zeta_failures=result.zeta_check.failures,
        mutated=list(result.family.mutated) if result.family.mutated else None,
        functorial=functorial,
        verdicts=verdicts,
    )
    logger.info("report for %s: %s", jc.params, "ok" if report.ok else f"failed {report.verdicts.failed()}")
    return report


def report_json(report: RunReport) -> str:
    """Deterministic serialisation: field order is fixed by the models, rows are pre-sorted."""
    return report.model_dump_json(indent=2)


def try_build_report(run_config: RunConfig, mutate_zeta: bool = False):
    """(report, None) or (None, error message); used by sweeps, which must not stop on one config."""
    try:
        return build_run_report(run_config, mutate_zeta=mutate_zeta), None
    except JLRectifierError as exc:
        return None, f"{type(exc).__name__}: {exc}"


# --- rich tables ---


def coset_table(rows: List[CosetRow]) -> Table:
    table = Table(title="Double cosets")
    for col in ("j", "u", "symmetry", "t", "fixes varpi_E", "inverse"):
        table.add_column(col)
    for r in rows:
        table.add_row(
            str(r.j), str(r.u), r.symmetry + (" (exceptional)" if r.exceptional else ""),
            str(r.t), "yes" if r.fixes_uniformizer else "", f"[{r.inverse[0]},{r.inverse[1]}]",
        )
    return table


def component_table(rows: List[ComponentRow]) -> Table:
    table = Table(title="Finite symplectic modules")
    for col in ("side", "level", "j", "u", "symmetry", "case", "inner"):
        table.add_column(col)
    for r in rows:
        table.add_row(r.side, str(r.level), str(r.j), str(r.u), r.symmetry, r.case, "yes" if r.inner else "")
    return table


def t_factor_table(rows: List[TFactorRow]) -> Table:
    table = Table(title="t-factors (table / definitions)")
    for col in ("j", "u", "Gamma", "t0", "t1", "t", "generic", "agree"):
        table.add_column(col)
    for r in rows:
        generic = "-" if r.generic_t0 is None else f"{r.generic_t0}, {r.generic_t1}"
        table.add_row(str(r.j), str(r.u), r.gamma, str(r.t0), str(r.t1), str(r.t), generic, "✅" if r.agree else "❌")
    return table


def character_table(title: str, rows: List[CharacterRow]) -> Table:
    table = Table(title=title)
    for col in ("character", "on mu generator", "at varpi_E", "|mu|", "role", "epsilon"):
        table.add_column(col)
    for r in rows:
        table.add_row(r.label, r.on_mu, r.on_pi, str(r.mu_order), r.role or "", "" if r.epsilon is None else str(r.epsilon))
    return table


def verdict_table(verdicts: VerdictSet) -> Table:
    table = Table(title="Verdicts")
    table.add_column("check")
    table.add_column("result")
    for name, value in verdicts.model_dump().items():
        if isinstance(value, dict):
            for key, v in value.items():
                table.add_row(f"{name}:{key}", "✅" if v else "❌")
        elif value is not None:
            table.add_row(name, "✅" if value else "❌")
    return table


def print_report(report: RunReport, console: Optional[Console] = None) -> None:
    console = console or Console()
    console.print(coset_table(report.cosets))
    console.print(component_table(report.modules))
    console.print(t_factor_table(report.t_factors))
    console.print(character_table("Rectifier and zeta product", [report.rectifier, report.zeta_product]))
    console.print(level_table(report.levels))
    console.print(character_table("zeta-data", report.zeta))
    if report.functorial:
        console.print(functorial_table(report.functorial))
    console.print(verdict_table(report.verdicts))


def level_table(rows: List[LevelRow]) -> Table:
    table = Table(title="Tower levels")
    for col in ("k", "a_k", "case", "target j mod e(A)"):
        table.add_column(col)
    for r in rows:
        table.add_row(str(r.k), str(r.a), r.case, str(r.target))
    return table


def parity_table(counts: ParityCounts) -> Table:
    table = Table(title="Double-coset counts")
    table.add_column("kind")
    table.add_column("count")
    for name, value in counts.model_dump().items():
        table.add_row(name, str(value))
    return table


def functorial_table(rows: List[FunctorialRow]) -> Table:
    table = Table(title="Base change to standard subfields")
    for col in ("(e(E/K), f(E/K))", "n", "m", "f_varpi", "m_varpi", "rectifier", "zeta product", "ok"):
        table.add_column(col)
    for r in rows:
        table.add_row(
            f"({r.e_rel}, {r.f_rel})", str(r.n), str(r.m), str(r.f_varpi), str(r.m_varpi),
            f"{r.rectifier.on_mu} / {r.rectifier.on_pi}",
            f"{r.partial_product.on_mu} / {r.partial_product.on_pi}",
            "✅" if r.ok else "❌",
        )
    return table


# single-aspect views: report fields echoed in the JSON and the verdicts that decide the exit code
VIEWS = {
    "cosets": (("cosets", "parity_counts"), ("parity",)),
    "modules": (("modules", "levels", "inner_class_hits"), ("modules",)),
    "rectifier": (("rectifier", "sign_exponent", "zeta_product", "t_factors"), ("main_theorem", "t_factor_paths", "totally_ramified_law", "split_trivial")),
    "zeta": (("zeta", "zeta_failures", "mutated"), ("zeta_conditions", "chi_conditions", "split_invariance", "pair_composition")),
    "functorial": (("functorial",), ("functoriality",)),
}


def view_json(report: RunReport, view: str) -> str:
    fields, groups = VIEWS[view]
    include = {name: True for name in ("schema_version", "config") + fields}
    include["verdicts"] = set(groups)
    return report.model_dump_json(indent=2, include=include)


def view_ok(report: RunReport, view: str) -> bool:
    _, groups = VIEWS[view]
    for group in groups:
        value = getattr(report.verdicts, group)
        if isinstance(value, dict):
            if not all(value.values()):
                return False
        elif value is False:
            return False
    return True


def print_view(report: RunReport, view: str, console: Optional[Console] = None) -> None:
    console = console or Console()
    if view == "cosets":
        console.print(coset_table(report.cosets))
        if report.parity_counts is not None:
            console.print(parity_table(report.parity_counts))
    elif view == "modules":
        console.print(level_table(report.levels))
        console.print(component_table(report.modules))
    elif view == "rectifier":
        console.print(t_factor_table(report.t_factors))
        console.print(character_table("Rectifier and zeta product", [report.rectifier, report.zeta_product]))
    elif view == "zeta":
        console.print(character_table("zeta-data", report.zeta))
    elif view == "functorial":
        console.print(functorial_table(report.functorial))
    verdicts = VerdictSet.model_validate(report.verdicts.model_dump(include=set(VIEWS[view][1])))
    console.print(verdict_table(verdicts))
