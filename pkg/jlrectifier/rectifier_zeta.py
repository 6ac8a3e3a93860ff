# jlrectifier/rectifier_zeta.py
"""
The rectifier of an essentially tame character and the zeta-data that factor it.

Every character here is tamely ramified on some E_g^x with E_g/E unramified, so
it is fixed by two numbers in Q/Z: its value at the canonical generator of
mu_{E_g} and its value at varpi_E (a uniformizer of E_g).
"""
import logging
import random
from dataclasses import dataclass, field, replace
from math import gcd
from typing import Dict, Iterable, List, Optional, Tuple

from . import config as app_config
from .cyclotomic import QZ_HALF, QZ_ZERO, CyclicSubgroup, QZValue, RootOfUnity
from .errors import AsymmetricClassError, InvariantError
from .inner_form import JumpConfig
from .symplectic import ModuleDecomposition, Side, finite_module
from .t_factors import TFactor, extended_t1, t_factors_closed_form, t_factors_of_decomposition
from .tame_galois import (
    AmbientModel,
    DoubleCoset,
    SubfieldDescriptor,
    Symmetry,
    double_coset_index,
    double_cosets,
    epm_descriptor,
    f_varpi,
    f_varpi_over,
    require_standard_subfield,
    root_character,
    subfield_membership,
)

logger = logging.getLogger(__name__)

CosetKey = Tuple[int, int]


@dataclass(frozen=True)
class TameCharacter:
    field_tag: str
    mu_g: CyclicSubgroup
    on_mu_generator: QZValue = QZ_ZERO
    on_pi: QZValue = QZ_ZERO

    def __post_init__(self):
        if self.mu_g.order % self.on_mu_generator.order():
            raise InvariantError(
                f"value {self.on_mu_generator} at a generator of a cyclic group of order {self.mu_g.order}"
            )

    def evaluate(self, y: RootOfUnity, k: int = 0) -> QZValue:
        """Value at y * varpi_E**k."""
        return self.on_mu_generator.scale(self.mu_g.index_of(y)) + self.on_pi.scale(k)

    def agrees_with(self, other: "TameCharacter") -> bool:
        return (
            self.mu_g == other.mu_g
            and self.on_mu_generator == other.on_mu_generator
            and self.on_pi == other.on_pi
        )

    def is_trivial(self) -> bool:
        return self.on_mu_generator.is_zero() and self.on_pi.is_zero()

    def is_quadratic(self) -> bool:
        return all(v in (QZ_ZERO, QZ_HALF) for v in (self.on_mu_generator, self.on_pi))

    def is_unramified(self) -> bool:
        return self.on_mu_generator.is_zero()

    def flip_pi(self) -> "TameCharacter":
        return replace(self, on_pi=self.on_pi + QZ_HALF)


def character_on_class(
    model: AmbientModel, dc: DoubleCoset, on_mu: QZValue = QZ_ZERO, on_pi: QZValue = QZ_ZERO
) -> TameCharacter:
    """A tame character of E_g^x; requires varpi_E to stay a uniformizer of E_g."""
    mu_g = model.mu_of_degree(dc.field_degree(model.f))
    if dc.u not in mu_g:
        raise InvariantError(f"E_g is ramified over E for {dc}")
    return TameCharacter(field_tag=f"E[{dc.j},{dc.u.exponent}]", mu_g=mu_g, on_mu_generator=on_mu, on_pi=on_pi)


def character_on_E(model: AmbientModel, on_mu: QZValue = QZ_ZERO, on_pi: QZValue = QZ_ZERO) -> TameCharacter:
    return TameCharacter(field_tag="E", mu_g=model.mu_E, on_mu_generator=on_mu, on_pi=on_pi)


# --- Rectifier ---


@dataclass(frozen=True)
class RectifierTerms:
    n: int
    m: int
    f_varpi: int
    m_varpi: int
    t_mu_A: TFactor
    t_mu_M: TFactor
    t_pi_A: TFactor
    t_pi_M: TFactor
    character: TameCharacter

    @property
    def sign_exponent(self) -> int:
        return self.n - self.m + self.f_varpi - self.m_varpi

    @property
    def sign(self) -> int:
        return (-1) ** (self.sign_exponent % 2)


def _rectifier_from(
    model: AmbientModel,
    A: ModuleDecomposition,
    M: ModuleDecomposition,
    n: int,
    m: int,
    fv: int,
    mv: int,
) -> RectifierTerms:
    t_mu_A = t_factors_of_decomposition(model, A, "mu")
    t_mu_M = t_factors_of_decomposition(model, M, "mu")
    t_pi_A = t_factors_of_decomposition(model, A, "varpi")
    t_pi_M = t_factors_of_decomposition(model, M, "varpi")
    sign = (-1) ** ((n - m + fv - mv) % 2)
    character = character_on_E(
        model,
        on_mu=QZValue.from_sign(t_mu_A.t1_generator * t_mu_M.t1_generator),
        on_pi=QZValue.from_sign(sign * t_pi_A.t * t_pi_M.t),
    )
    return RectifierTerms(n, m, fv, mv, t_mu_A, t_mu_M, t_pi_A, t_pi_M, character)


def rectifier_terms(config: JumpConfig) -> RectifierTerms:
    model = config.model
    A = finite_module(config, Side.A)
    M = finite_module(config, Side.M)
    fv, mv = f_varpi(model, config.form.m)
    return _rectifier_from(model, A, M, config.n, config.form.m, fv, mv)


def rectifier(config: JumpConfig) -> TameCharacter:
    return rectifier_terms(config).character


def totally_ramified_law_holds(config: JumpConfig, character: Optional[TameCharacter] = None) -> bool:
    """For f = 1: the rectifier is unramified and takes (-1)**(n - m) at varpi_E."""
    character = character or rectifier(config)
    sign = (-1) ** ((config.n - config.form.m) % 2)
    return character.on_mu_generator.is_zero() and character.on_pi == QZValue.from_sign(sign)


def split_rectifier_is_trivial(config: JumpConfig, character: Optional[TameCharacter] = None) -> bool:
    """For d = 1 the rectifier is the trivial character."""
    return (character or rectifier(config)).is_trivial()


# --- zeta-data ---

SYMMETRIC = "symmetric"
PAIR_REPRESENTATIVE = "pair-representative"
PAIR_INVERSE = "pair-inverse"


@dataclass(frozen=True)
class ZetaEntry:
    dc_key: CosetKey
    role: str
    character: TameCharacter
    epsilon: Optional[int] = None
    partner_key: Optional[CosetKey] = None


@dataclass(frozen=True)
class ZetaFamily:
    entries: Tuple[ZetaEntry, ...]
    mutated: Optional[CosetKey] = None

    def by_key(self) -> Dict[CosetKey, ZetaEntry]:
        return {e.dc_key: e for e in self.entries}

    def __getitem__(self, key: CosetKey) -> ZetaEntry:
        return self.by_key()[key]

    def replace_entry(self, entry: ZetaEntry) -> "ZetaFamily":
        return replace(self, entries=tuple(entry if e.dc_key == entry.dc_key else e for e in self.entries))


def trivial_family(model: AmbientModel) -> ZetaFamily:
    entries = []
    for dc in double_cosets(model):
        if dc.is_symmetric:
            role, partner = SYMMETRIC, None
        else:
            role = PAIR_REPRESENTATIVE if dc.key < dc.inverse_key else PAIR_INVERSE
            partner = dc.inverse_key
        entries.append(ZetaEntry(dc.key, role, character_on_class(model, dc), None, partner))
    return ZetaFamily(tuple(entries))


def zeta_epsilon(dc: DoubleCoset, m: int) -> int:
    """(-1)**m on the exceptional class and on sym-unram classes not fixing varpi_E, else 1."""
    if dc.is_exceptional:
        return (-1) ** (m % 2)
    if dc.symmetry is Symmetry.SYMMETRIC_UNRAMIFIED and not dc.fixes_uniformizer:
        return (-1) ** (m % 2)
    return 1


def assign_zeta(config: JumpConfig, mutate: bool = False) -> ZetaFamily:
    """
    Symmetric classes get zeta|mu_{E_g} = extended t1 of both sides and
    zeta(varpi_E) = epsilon * t_varpi(A) * t_varpi(M). An asymmetric pair puts the
    whole product t_varpi(A-pair) * t_varpi(M-pair) on its representative and 1 on
    the inverse class. ``mutate`` flips one value, for negative controls.
    """
    model = config.model
    multA = finite_module(config, Side.A).multiplicities()
    multM = finite_module(config, Side.M).multiplicities()
    index = double_coset_index(model)
    m = config.form.m

    def on_mu_of(dc: DoubleCoset) -> QZValue:
        c = multA.get(dc.key, 0) + multM.get(dc.key, 0)
        return QZValue.from_sign(extended_t1(model, dc, c).at_generator)

    def t_pi(dc: DoubleCoset) -> int:
        return (
            t_factors_closed_form(model, dc, "varpi", multA.get(dc.key, 0)).t
            * t_factors_closed_form(model, dc, "varpi", multM.get(dc.key, 0)).t
        )

    entries = []
    for dc in double_cosets(model):
        if dc.is_symmetric:
            eps = zeta_epsilon(dc, m)
            char = character_on_class(model, dc, on_mu_of(dc), QZValue.from_sign(eps * t_pi(dc)))
            entries.append(ZetaEntry(dc.key, SYMMETRIC, char, eps))
        elif dc.key < dc.inverse_key:
            char = character_on_class(model, dc, on_mu_of(dc), QZValue.from_sign(t_pi(dc)))
            entries.append(ZetaEntry(dc.key, PAIR_REPRESENTATIVE, char, None, dc.inverse_key))
        else:
            rep = index[dc.inverse_key]
            # zeta_{g^-1} = (zeta_g o g)^-1 on roots of unity, and pinned to 1 at varpi_E
            on_mu = on_mu_of(rep).scale(-(model.q ** rep.j))
            char = character_on_class(model, dc, on_mu, QZ_ZERO)
            entries.append(ZetaEntry(dc.key, PAIR_INVERSE, char, None, rep.key))
    family = ZetaFamily(tuple(entries))
    if mutate:
        family = mutate_family(model, family)
    return family


def mutate_family(model: AmbientModel, family: ZetaFamily) -> ZetaFamily:
    """Flip varpi_E on one member: a constrained symmetric class if any, else any symmetric, else a pair."""
    index = double_coset_index(model)
    symmetric = [e for e in family.entries if e.role == SYMMETRIC]
    constrained = [e for e in symmetric if epm_descriptor(model, index[e.dc_key]).uniformizer_power == 1]
    pool = constrained or symmetric or [e for e in family.entries if e.role == PAIR_INVERSE]
    if not pool:
        logger.warning("no double cosets to mutate")
        return family
    target = pool[0]
    logger.info("mutating zeta value at varpi_E for class %s", target.dc_key)
    flipped = replace(target, character=target.character.flip_pi())
    return replace(family.replace_entry(flipped), mutated=target.dc_key)


def resplit_pairs(family: ZetaFamily, seed: int) -> ZetaFamily:
    """Move a random share of each asymmetric pair's varpi value onto the inverse class."""
    rng = random.Random(seed)
    by_key = family.by_key()
    out = family
    for entry in family.entries:
        if entry.role != PAIR_REPRESENTATIVE:
            continue
        inverse = by_key[entry.partner_key]
        total = entry.character.on_pi + inverse.character.on_pi
        share = rng.choice([QZ_ZERO, QZ_HALF])
        out = out.replace_entry(replace(inverse, character=replace(inverse.character, on_pi=share)))
        out = out.replace_entry(replace(entry, character=replace(entry.character, on_pi=total - share)))
    return out


@dataclass
class ZetaCheckReport:
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _rotations(dc: DoubleCoset) -> Iterable[DoubleCoset]:
    """The same class with each member in turn as representative."""
    for i in range(len(dc.members)):
        yield replace(dc, members=dc.members[i:] + dc.members[:i])


def _symmetric_failures(model: AmbientModel, dc: DoubleCoset, char: TameCharacter) -> List[str]:
    failures = []
    desc = epm_descriptor(model, dc)
    for y, k in desc.generators():
        value = char.evaluate(y, k)
        if not value.is_zero():
            failures.append(
                f"class {dc.key}: zeta is {value} on the fixed element {y} * varpi_E^{k} "
                f"(representative {dc.representative.sort_key()})"
            )
    return failures


def verify_zeta_conditions(model: AmbientModel, family: ZetaFamily, full_orbit: Optional[bool] = None) -> ZetaCheckReport:
    """
    (a) zeta_g * zeta_{g^-1} = zeta_g o [1; g] on E^x for every asymmetric pair;
    (b) zeta_g is trivial on E_{+-g}^x for every symmetric class.
    With ``full_orbit`` (default: small models) (b) is rechecked at every representative.
    """
    if full_orbit is None:
        full_orbit = model.n <= app_config.FULL_ORBIT_CHECK_MAX_N
    report = ZetaCheckReport()
    index = double_coset_index(model)
    by_key = family.by_key()
    missing = set(index) - set(by_key)
    if missing:
        report.failures.append(f"no zeta character for classes {sorted(missing)}")
    for key, entry in sorted(by_key.items()):
        dc = index.get(key)
        if dc is None:
            report.failures.append(f"zeta character for unknown class {key}")
            continue
        char = entry.character
        if dc.is_symmetric:
            for rotated in (_rotations(dc) if full_orbit else [dc]):
                report.failures.extend(_symmetric_failures(model, rotated, char))
            continue
        if entry.role != PAIR_REPRESENTATIVE:
            continue
        inverse = by_key.get(dc.inverse_key)
        if inverse is None:
            continue
        lam = root_character(model, dc)
        expected_pi = char.evaluate(lam.on_pi, 0)
        got_pi = char.on_pi + inverse.character.on_pi
        if got_pi != expected_pi:
            report.failures.append(
                f"pair {key}/{dc.inverse_key}: varpi_E values sum to {got_pi}, composition with the root gives {expected_pi}"
            )
        expected_mu = char.on_mu_generator.scale(-(model.q ** dc.j))
        if inverse.character.on_mu_generator != expected_mu:
            report.failures.append(
                f"pair {key}/{dc.inverse_key}: inverse class has {inverse.character.on_mu_generator} "
                f"on mu_E_g, expected {expected_mu}"
            )
    logger.debug("zeta conditions: %d failures", len(report.failures))
    return report


# --- chi-data on symmetric unramified classes ---


def _require_sym_unram(dc: DoubleCoset) -> None:
    if dc.symmetry is not Symmetry.SYMMETRIC_UNRAMIFIED:
        raise AsymmetricClassError(f"{dc} is not symmetric unramified")


def verify_chi_conditions(model: AmbientModel, character: TameCharacter, dc: DoubleCoset) -> bool:
    """chi trivial on mu_{E_+-g} and on u * varpi_E**2, and chi(z0 * varpi_E) = -1."""
    _require_sym_unram(dc)
    desc = epm_descriptor(model, dc)
    return (
        character.evaluate(desc.fixed_roots.generator(), 0).is_zero()
        and character.evaluate(desc.multiplier, 2).is_zero()
        and character.evaluate(desc.z0, 1) == QZ_HALF
    )


def chi_datum(model: AmbientModel, dc: DoubleCoset) -> TameCharacter:
    """chi on U_[g]: extended t1 on mu_{E_g}, and -t_varpi or t_varpi at varpi_E as [g] fixes varpi_E or not."""
    _require_sym_unram(dc)
    t_pi = t_factors_closed_form(model, dc, "varpi").t
    value = -t_pi if dc.fixes_uniformizer else t_pi
    on_mu = QZValue.from_sign(extended_t1(model, dc).at_generator)
    return character_on_class(model, dc, on_mu, QZValue.from_sign(value))


def unramified_quadratic(model: AmbientModel, dc: DoubleCoset) -> TameCharacter:
    return character_on_class(model, dc, QZ_ZERO, QZ_HALF)


def chi_zeta_checks(model: AmbientModel) -> Dict[CosetKey, bool]:
    """For each sym-unram class: chi passes the chi-conditions and chi with varpi flipped is a zeta-datum."""
    out = {}
    for dc in double_cosets(model):
        if dc.symmetry is not Symmetry.SYMMETRIC_UNRAMIFIED:
            continue
        chi = chi_datum(model, dc)
        zeta = chi.flip_pi()
        out[dc.key] = verify_chi_conditions(model, chi, dc) and not _symmetric_failures(model, dc, zeta)
    return out


# --- products ---


def restrict_product(model: AmbientModel, family: ZetaFamily, classes: Optional[Iterable[CosetKey]] = None) -> TameCharacter:
    """Product of the restrictions of the zeta_g to E^x, over ``classes`` (default: all)."""
    keys = set(classes) if classes is not None else None
    on_mu, on_pi = QZ_ZERO, QZ_ZERO
    for entry in family.entries:
        if keys is not None and entry.dc_key not in keys:
            continue
        on_mu = on_mu + entry.character.evaluate(model.zeta_E, 0)
        on_pi = on_pi + entry.character.on_pi
    return character_on_E(model, on_mu, on_pi)


def pair_contributions_match(model: AmbientModel, family: ZetaFamily) -> bool:
    """Res zeta_g * Res zeta_{g^-1} = zeta_g o [1; g] on E^x for every asymmetric pair."""
    index = double_coset_index(model)
    by_key = family.by_key()
    for entry in family.entries:
        if entry.role != PAIR_REPRESENTATIVE:
            continue
        inverse = by_key[entry.partner_key]
        lam = root_character(model, index[entry.dc_key])
        char = entry.character
        mu_ok = char.evaluate(model.zeta_E) + inverse.character.evaluate(model.zeta_E) == char.evaluate(
            lam.value_at("mu", model)
        )
        pi_ok = char.on_pi + inverse.character.on_pi == char.evaluate(lam.on_pi)
        if not (mu_ok and pi_ok):
            return False
    return True


def split_invariance(model: AmbientModel, family: ZetaFamily, seeds: Iterable[int] = (1, 2, 3)) -> bool:
    base = restrict_product(model, family)
    return all(restrict_product(model, resplit_pairs(family, s)).agrees_with(base) for s in seeds)


@dataclass(frozen=True)
class RectifierReport:
    terms: RectifierTerms
    family: ZetaFamily
    zeta_product: TameCharacter
    zeta_check: ZetaCheckReport
    split_invariant: bool

    @property
    def rectifier(self) -> TameCharacter:
        return self.terms.character

    @property
    def verdict(self) -> bool:
        return self.rectifier.agrees_with(self.zeta_product)


def verify_main_theorem(config: JumpConfig, mutate: bool = False) -> RectifierReport:
    model = config.model
    terms = rectifier_terms(config)
    family = assign_zeta(config, mutate=mutate)
    product = restrict_product(model, family)
    report = RectifierReport(
        terms=terms,
        family=family,
        zeta_product=product,
        zeta_check=verify_zeta_conditions(model, family),
        split_invariant=split_invariance(model, family),
    )
    logger.info(
        "rectifier (%s, %s) vs zeta product (%s, %s): %s",
        terms.character.on_mu_generator, terms.character.on_pi,
        product.on_mu_generator, product.on_pi,
        "agree" if report.verdict else "DISAGREE",
    )
    return report


# --- base change to standard subfields ---


@dataclass(frozen=True)
class FunctorialReport:
    field: SubfieldDescriptor
    terms: RectifierTerms
    partial_product: TameCharacter
    classes: Tuple[CosetKey, ...]

    @property
    def ok(self) -> bool:
        return self.terms.character.agrees_with(self.partial_product)


def functorial_check(config: JumpConfig, K: SubfieldDescriptor, family: Optional[ZetaFamily] = None) -> FunctorialReport:
    """The rectifier over K (modules cut down to Gamma_K) against the zeta product over classes inside Gamma_K."""
    model = config.model
    params = config.params
    require_standard_subfield(model, K)
    A = finite_module(config, Side.A).restricted_to(model, K)
    M = finite_module(config, Side.M).restricted_to(model, K)
    m = config.form.m
    if K.is_base(params):
        n_K, m_K = config.n, m
    else:
        n_K = K.degree_below
        m_K = gcd(m, n_K)
    fv, mv = f_varpi_over(model, K, m_K)
    terms = _rectifier_from(model, A, M, n_K, m_K, fv, mv)
    if family is None:
        family = assign_zeta(config)
    classes = tuple(dc.key for dc in double_cosets(model) if subfield_membership(model, dc, K))
    partial = restrict_product(model, family, classes)
    report = FunctorialReport(field=K, terms=terms, partial_product=partial, classes=classes)
    logger.debug("functoriality at (%d, %d): %s", K.e_rel, K.f_rel, report.ok)
    return report


# --- independence statements ---


def _observables(config: JumpConfig) -> Tuple[str, ...]:
    """Everything that must not move with the Hasse invariant, serialised."""
    model = config.model
    report = verify_main_theorem(config)
    values = [f"rectifier:{report.rectifier.on_mu_generator}:{report.rectifier.on_pi}"]
    for label, t in (
        ("A:mu", report.terms.t_mu_A), ("M:mu", report.terms.t_mu_M),
        ("A:varpi", report.terms.t_pi_A), ("M:varpi", report.terms.t_pi_M),
    ):
        values.append(f"{label}:{t}")
    multiplicities = {
        "A": finite_module(config, Side.A).multiplicities(),
        "M": finite_module(config, Side.M).multiplicities(),
    }
    for dc in double_cosets(model):
        for side, mult in multiplicities.items():
            c = mult.get(dc.key, 0)
            for gamma in ("mu", "varpi"):
                values.append(f"t:{side}:{dc.key}:{gamma}:{t_factors_closed_form(model, dc, gamma, c)}")
    values.extend(
        f"zeta:{e.dc_key}:{e.character.on_mu_generator}:{e.character.on_pi}" for e in report.family.entries
    )
    return tuple(values)


@dataclass(frozen=True)
class HasseReport:
    h_values: Tuple[int, ...]
    ok: bool
    differing: Tuple[int, ...] = ()


def verify_hasse_independence(config: JumpConfig) -> HasseReport:
    """Recompute t-factors, rectifier and zeta-family for every Hasse invariant h prime to d."""
    d = config.form.d
    hs = tuple(h for h in range(1, d) if gcd(h, d) == 1) if d > 1 else (config.form.h,)
    baseline = _observables(config.with_hasse(hs[0]))
    differing = tuple(h for h in hs[1:] if _observables(config.with_hasse(h)) != baseline)
    return HasseReport(h_values=hs, ok=not differing, differing=differing)


def representative_independence(config: JumpConfig, family: Optional[ZetaFamily] = None) -> List[str]:
    """Table t-factors, extended t1 and zeta conditions recomputed at every member of each class."""
    model = config.model
    if family is None:
        family = assign_zeta(config)
    multA = finite_module(config, Side.A).multiplicities()
    by_key = family.by_key()
    failures = []
    for dc in double_cosets(model):
        c = max(1, multA.get(dc.key, 0))
        reference = None
        for rotated in _rotations(dc):
            values = (
                t_factors_closed_form(model, rotated, "mu", c),
                t_factors_closed_form(model, rotated, "varpi", c),
                extended_t1(model, rotated, c).at_generator,
            )
            if reference is None:
                reference = values
            elif values != reference:
                failures.append(f"class {dc.key}: values change at representative {rotated.representative.sort_key()}")
            if dc.is_symmetric and dc.key in by_key:
                failures.extend(_symmetric_failures(model, rotated, by_key[dc.key].character))
    return failures
