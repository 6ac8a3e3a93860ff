# jlrectifier/models.py
import json
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator

from . import config
from .errors import ConfigError
from .inner_form import InnerForm, JumpConfig
from .tame_galois import SubfieldDescriptor, TameParams, prime_base

CONFIG_SCHEMA_VERSION = "jlrectifier/config/v1"


class TameParamsModel(BaseModel):
    q: int = Field(..., description="Size of the residue field of F (a prime power)")
    e: int = Field(..., description="Ramification index e(E/F), prime to p")
    f: int = Field(..., description="Residue degree f(E/F)")
    z_ef: int = Field(0, description="Exponent of z_E/F with respect to the canonical generator of mu_{q^f-1}")
    p: Optional[int] = Field(None, description="Residue characteristic; derived from q when omitted")


class InnerFormModel(BaseModel):
    m: int = Field(..., description="Matrix size of GL_m(D)")
    d: int = Field(..., description="Index of the division algebra D (dim D = d^2)")
    h: int = Field(..., description="Hasse invariant, prime to d")


class TowerLevelModel(BaseModel):
    e_rel: int = Field(..., description="e(E/E_k)")
    f_rel: int = Field(..., description="f(E/E_k)")


class CheckFlags(BaseModel):
    main_theorem: bool = Field(True, description="Compare the rectifier with the zeta product")
    zeta_conditions: bool = Field(True, description="Check the zeta-data conditions")
    functoriality: bool = Field(True, description="Run the base-change check at every tower level and at the maximal unramified subextension")
    parity: bool = Field(True, description="Double-coset parity statements and symmetric-submodule checks")
    hasse_independence: bool = Field(False, description="Recompute for every Hasse invariant prime to d")
    representative_independence: bool = Field(False, description="Recompute at every representative of each double coset")


class RunConfig(BaseModel):
    """One input document: E/F, a standard tower with jumps, and an inner form."""

    schema_version: str = Field(CONFIG_SCHEMA_VERSION, description="Input schema tag")
    params: TameParamsModel
    tower: List[TowerLevelModel] = Field(..., description="Levels E_0, ..., E_t from the top down")
    jumps: List[int] = Field(..., description="Jumps a_0 < ... < a_t, as valuations in E")
    inner_form: InnerFormModel
    flags: CheckFlags = Field(default_factory=CheckFlags)

    class Config:
        validate_assignment = True

    @field_validator("tower")
    def tower_must_not_be_empty(cls, value):
        if not value:
            raise ValueError("tower must contain at least the level E_0")
        return value

    def to_jump_config(self) -> JumpConfig:
        """Validate every invariant; all violations are reported together."""
        reasons: List[str] = []
        try:
            params = TameParams(q=self.params.q, e=self.params.e, f=self.params.f, z_ef_index=self.params.z_ef, p=self.params.p)
        except ConfigError as exc:
            reasons.extend(exc.reasons)
            params = None
        if params is None:
            if any(b <= a for a, b in zip(self.jumps, self.jumps[1:])):
                reasons.append(f"jumps {self.jumps} are not strictly increasing")
            raise ConfigError(reasons)
        jc = JumpConfig(
            params=params,
            tower=tuple(SubfieldDescriptor(level.e_rel, level.f_rel) for level in self.tower),
            jumps=tuple(self.jumps),
            form=InnerForm(self.inner_form.m, self.inner_form.d, self.inner_form.h),
        )
        return jc.validate()

    @classmethod
    def from_jump_config(cls, jc: JumpConfig, flags: Optional[CheckFlags] = None) -> "RunConfig":
        p = jc.params
        return cls(
            params=TameParamsModel(q=p.q, e=p.e, f=p.f, z_ef=p.z_ef_index, p=p.p),
            tower=[TowerLevelModel(e_rel=K.e_rel, f_rel=K.f_rel) for K in jc.tower],
            jumps=list(jc.jumps),
            inner_form=InnerFormModel(m=jc.form.m, d=jc.form.d, h=jc.form.h),
            flags=flags or CheckFlags(),
        )


def _validation_reasons(exc: ValidationError) -> List[str]:
    return [f"{'.'.join(str(x) for x in err['loc']) or 'document'}: {err['msg']}" for err in exc.errors()]


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a JSON run configuration; raises ConfigError listing every problem."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"malformed JSON: {exc}"]) from exc
    try:
        run_config = RunConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigError(_validation_reasons(exc)) from exc
    run_config.to_jump_config()
    return run_config


class SweepSpec(BaseModel):
    schema_version: str = Field("jlrectifier/sweep/v1", description="Input schema tag")
    q_values: List[int] = Field(default_factory=lambda: list(config.SWEEP_Q_VALUES), description="Residue field sizes")
    n_max: int = Field(config.SWEEP_N_MAX, description="Largest degree n = e*f")
    n_min: int = Field(2, description="Smallest degree n = e*f")
    include_split: bool = Field(False, description="Also run d = 1")
    h_values: Optional[List[int]] = Field(None, description="Fixed Hasse invariants; all h prime to d when omitted")
    z_policy: str = Field("orbits", description="'orbits': one z_E/F per Frobenius orbit; 'trivial': z_E/F = 1 only")
    max_levels: int = Field(config.MAX_TOWER_LEVELS, description="Longest tower enumerated")
    max_z_choices: Optional[int] = Field(
        config.MAX_Z_CHOICES,
        description="Cap on z_E/F orbit representatives per (q, f); null runs every orbit that can be listed",
    )
    seed: int = Field(config.SWEEP_SEED, description="Seed for deterministic sampling")
    jobs: int = Field(config.DEFAULT_JOBS, description="Worker processes; not echoed into summaries", exclude=True)
    mutate_zeta: bool = Field(False, description="Negative control: flip one zeta value per configuration")
    flags: CheckFlags = Field(
        default_factory=lambda: CheckFlags(hasse_independence=True, representative_independence=True),
        description="Checks run on every swept configuration",
    )

    class Config:
        validate_assignment = True

    @field_validator("z_policy")
    def z_policy_must_be_known(cls, value):
        if value not in ("orbits", "trivial"):
            raise ValueError(f"unknown z_policy {value!r}")
        return value

    @field_validator("max_levels")
    def max_levels_in_range(cls, value):
        if not 1 <= value <= config.MAX_TOWER_LEVELS:
            raise ValueError(f"max_levels must lie in 1..{config.MAX_TOWER_LEVELS}")
        return value

    @field_validator("q_values")
    def q_values_are_prime_powers(cls, value):
        bad = [q for q in value if prime_base(q) is None]
        if bad:
            raise ValueError(f"not prime powers: {bad}")
        return value

    @field_validator("n_min")
    def n_min_positive(cls, value):
        if value < 1:
            raise ValueError("n_min must be at least 1")
        return value

    @field_validator("max_z_choices")
    def max_z_choices_positive(cls, value):
        if value is not None and value < 1:
            raise ValueError("max_z_choices must be at least 1 or null")
        return value

    @field_validator("jobs")
    def jobs_positive(cls, value):
        if value < 1:
            raise ValueError("jobs must be at least 1")
        return value


def parse_sweep_spec(text: str) -> SweepSpec:
    try:
        return SweepSpec.model_validate_json(text)
    except ValidationError as exc:
        raise ConfigError(_validation_reasons(exc)) from exc


# --- Report documents ---


class CosetRow(BaseModel):
    j: int = Field(..., description="Frobenius index of the representative")
    u: int = Field(..., description="Exponent of the multiplier u in the ambient group")
    symmetry: str
    t: int = Field(..., description="Orbit size; [E_g : E] = t")
    fixes_uniformizer: bool
    exceptional: bool = False
    inverse: List[int] = Field(..., description="(j, u) key of the inverse class")


class ComponentRow(BaseModel):
    side: str
    level: int
    j: int
    u: int
    symmetry: str
    case: str
    inner: bool = Field(False, description="Class already lies in Gamma_{E_k} (with-inner case)")


class LevelRow(BaseModel):
    k: int
    a: int = Field(..., description="Jump a_k")
    case: str = Field(..., description="empty, with-inner or difference")
    target: int = Field(..., description="Required residue of j modulo e(A/o_E)")


class TFactorRow(BaseModel):
    j: int
    u: int
    gamma: str
    t0: int
    t1: int = Field(..., description="t1 at the canonical generator of Gamma")
    t: int
    generic_t0: Optional[int] = Field(None, description="t0 from the definitions; absent for the exceptional class")
    generic_t1: Optional[int] = None
    agree: bool = True


class CharacterRow(BaseModel):
    label: str
    on_mu: str = Field(..., description="Value at the canonical generator of mu_{E_g}, as a/b in Q/Z")
    on_pi: str = Field(..., description="Value at varpi_E, as a/b in Q/Z")
    mu_order: int = Field(..., description="|mu_{E_g}|")
    role: Optional[str] = None
    epsilon: Optional[int] = None


class ParityCounts(BaseModel):
    asymmetric: int
    sym_ram: int
    sym_unram: int
    sym_unram_fixing: int = Field(..., description="Symmetric-unramified classes fixing varpi_E")
    sym_unram_not_fixing: int
    f_varpi: int = Field(..., description="[E : F[varpi_E]]")


class FunctorialRow(BaseModel):
    e_rel: int
    f_rel: int
    n: int = Field(..., description="n(E/K)")
    m: int = Field(..., description="m_K")
    f_varpi: int
    m_varpi: int
    rectifier: CharacterRow
    partial_product: CharacterRow = Field(..., description="zeta product over the classes inside Gamma_K")
    classes: List[List[int]]
    ok: bool


class VerdictSet(BaseModel):
    main_theorem: Optional[bool] = None
    zeta_conditions: Optional[bool] = None
    split_invariance: Optional[bool] = None
    pair_composition: Optional[bool] = None
    chi_conditions: Optional[bool] = None
    functoriality: Dict[str, bool] = Field(default_factory=dict, description="Keyed by 'e_rel,f_rel'")
    parity: Dict[str, bool] = Field(default_factory=dict)
    modules: Dict[str, bool] = Field(default_factory=dict)
    t_factor_paths: Optional[bool] = None
    extended_t1_restriction: Optional[bool] = None
    hasse_independence: Optional[bool] = None
    representative_independence: Optional[bool] = None
    totally_ramified_law: Optional[bool] = Field(None, description="f = 1: the rectifier is unramified with value (-1)^(n-m) at varpi_E")
    split_trivial: Optional[bool] = Field(None, description="d = 1: the rectifier is trivial")

    def all_true(self) -> bool:
        singles = [
            self.main_theorem, self.zeta_conditions, self.split_invariance, self.pair_composition,
            self.chi_conditions, self.t_factor_paths, self.extended_t1_restriction,
            self.hasse_independence, self.representative_independence,
            self.totally_ramified_law, self.split_trivial,
        ]
        maps = list(self.functoriality.values()) + list(self.parity.values()) + list(self.modules.values())
        return all(v is not False for v in singles) and all(maps)

    def failed(self) -> List[str]:
        out = [name for name, v in self.model_dump().items() if v is False]
        for group in ("functoriality", "parity", "modules"):
            out.extend(f"{group}:{k}" for k, v in getattr(self, group).items() if not v)
        return out


class RunReport(BaseModel):
    schema_version: str = Field(config.REPORT_SCHEMA_VERSION)
    config: RunConfig
    cosets: List[CosetRow]
    modules: List[ComponentRow]
    inner_class_hits: int = 0
    levels: List[LevelRow] = Field(default_factory=list, description="Case selection per tower level")
    parity_counts: Optional[ParityCounts] = None
    t_factors: List[TFactorRow]
    rectifier: CharacterRow
    sign_exponent: int = Field(..., description="n - m + f_varpi - m_varpi")
    zeta: List[CharacterRow]
    zeta_product: CharacterRow
    zeta_failures: List[str] = Field(default_factory=list)
    mutated: Optional[List[int]] = None
    functorial: List[FunctorialRow] = Field(default_factory=list)
    verdicts: VerdictSet

    @property
    def ok(self) -> bool:
        return self.verdicts.all_true()


class FailureRecord(BaseModel):
    config: RunConfig
    failed: List[str]
    error: Optional[str] = None
    mutate_zeta: bool = Field(False, description="Replay with the mutated zeta-assignment")


class SweepSummary(BaseModel):
    schema_version: str = Field(config.REPORT_SCHEMA_VERSION)
    spec: SweepSpec
    total: int = 0
    passed: int = 0
    failed: int = 0
    inner_class_hits: int = 0
    z_sampled: List[str] = Field(default_factory=list, description="\"q,f\" pairs whose z_E/F orbit representatives were sampled with the seed")
    verdict_counts: Dict[str, int] = Field(default_factory=dict, description="Failures per verdict name")
    failures: List[FailureRecord] = Field(default_factory=list)


class FieldCertificate(BaseModel):
    p: int
    k: int
    exhaustive: bool = Field(..., description="Every element checked, or one element per order")
    failures: List[int] = Field(default_factory=list, description="Discrete logs where closed form and cycles disagree")


class SignatureCertificate(BaseModel):
    schema_version: str = Field(config.REPORT_SCHEMA_VERSION)
    bound: int
    exhaustive_limit: int
    fields: List[FieldCertificate] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(not c.failures for c in self.fields)


if __name__ == "__main__":
    example = {
        "params": {"q": 3, "e": 2, "f": 2, "z_ef": 0},
        "tower": [{"e_rel": 1, "f_rel": 2}],
        "jumps": [2],
        "inner_form": {"m": 2, "d": 2, "h": 1},
    }
    run_config = parse_config(json.dumps(example))
    print("RunConfig:")
    print(run_config.model_dump_json(indent=2))
    print(SweepSpec(q_values=[3], n_max=4).model_dump_json(indent=2))
