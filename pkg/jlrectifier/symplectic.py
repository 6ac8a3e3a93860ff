# jlrectifier/symplectic.py
"""
The finite symplectic modules of an essentially tame character, as multisets of
standard modules U_[g] indexed by double cosets.

The A-side module belongs to the inner form GL_m(D), the M-side module to the
split form GL_n(F). Level k of the tower contributes the classes selected by
the case rule in ``inner_form.jump_levels``.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from math import gcd
from typing import Dict, List, Set, Tuple

from .inner_form import InnerForm, JumpConfig, ModuleCase, jump_levels
from .tame_galois import (
    AmbientModel,
    DoubleCoset,
    RootCharacter,
    SubfieldDescriptor,
    Symmetry,
    double_cosets,
    root_character,
    subfield_membership,
)

logger = logging.getLogger(__name__)

CosetKey = Tuple[int, int]


class Side(str, Enum):
    A = "A"  # inner form
    M = "M"  # split form


@dataclass(frozen=True)
class FineComponent:
    level: int
    dc_key: CosetKey
    j: int
    t: int
    symmetry: Symmetry
    exceptional: bool
    inner: bool  # class already lies in Gamma_{E_k}; only possible in the with-inner case
    case: ModuleCase
    lam: RootCharacter

    def dimension(self, f: int, log_p_q: int) -> int:
        """F_p-dimension of the standard module U_[g]."""
        return f * self.t * log_p_q


@dataclass(frozen=True)
class ModuleDecomposition:
    side: Side
    form: InnerForm
    components: Tuple[FineComponent, ...]

    def __len__(self) -> int:
        return len(self.components)

    def multiplicities(self) -> Counter:
        return Counter(c.dc_key for c in self.components)

    def by_level(self) -> Dict[int, List[FineComponent]]:
        out: Dict[int, List[FineComponent]] = {}
        for c in self.components:
            out.setdefault(c.level, []).append(c)
        return out

    @property
    def inner_class_hits(self) -> int:
        return sum(1 for c in self.components if c.inner)

    def level_signature(self) -> Counter:
        """Multiset of (level, class) pairs; two decompositions agree iff these agree."""
        return Counter((c.level, c.dc_key) for c in self.components)

    def restricted_to(self, model: AmbientModel, K: SubfieldDescriptor) -> "ModuleDecomposition":
        """The components whose class lies in Gamma_K."""
        index = {dc.key: dc for dc in double_cosets(model)}
        kept = tuple(c for c in self.components if subfield_membership(model, index[c.dc_key], K))
        return ModuleDecomposition(side=self.side, form=self.form, components=kept)


def standard_graded_piece(model: AmbientModel, form: InnerForm, j_prime: int) -> Set[DoubleCoset]:
    """Classes occurring in the j'-th graded piece of the standard module of A: j = h*j' mod f/s."""
    modulus = model.f // gcd(model.f, form.m)
    target = (form.h * j_prime) % modulus
    return {dc for dc in double_cosets(model) if dc.j % modulus == target}


def finite_module(config: JumpConfig, side: Side) -> ModuleDecomposition:
    config = config.validate() if side is Side.A else config.split().validate()
    model = config.model
    levels = jump_levels(config)
    fields = config.fields()
    components = []
    for level in levels.levels:
        if level.case is ModuleCase.EMPTY:
            continue
        E_k, E_next = fields[level.k + 1], fields[level.k + 2]
        for dc in double_cosets(model):
            if not subfield_membership(model, dc, E_next):
                continue
            inner = subfield_membership(model, dc, E_k)
            if inner and level.case is not ModuleCase.WITH_INNER:
                continue
            if dc.j % levels.eA != level.target:
                continue
            components.append(
                FineComponent(
                    level=level.k,
                    dc_key=dc.key,
                    j=dc.j,
                    t=dc.t,
                    symmetry=dc.symmetry,
                    exceptional=dc.is_exceptional,
                    inner=inner,
                    case=level.case,
                    lam=root_character(model, dc),
                )
            )
    dec = ModuleDecomposition(side=side, form=config.form, components=tuple(components))
    logger.debug(
        "%s-side module: %d components over %d levels (%d inner hits)",
        side.value, len(dec), len(levels.levels), dec.inner_class_hits,
    )
    return dec


def isotypic_component(dec: ModuleDecomposition, dc: DoubleCoset) -> Tuple[FineComponent, ...]:
    return tuple(c for c in dec.components if c.dc_key == dc.key)


def symmetric_parts(dec: ModuleDecomposition) -> Tuple[Tuple[FineComponent, ...], Tuple[FineComponent, ...]]:
    sym_ram = tuple(c for c in dec.components if c.symmetry is Symmetry.SYMMETRIC_RAMIFIED)
    sym_unram = tuple(c for c in dec.components if c.symmetry is Symmetry.SYMMETRIC_UNRAMIFIED)
    return sym_ram, sym_unram


def _signature(components) -> Counter:
    return Counter((c.level, c.dc_key) for c in components)


def first_level_containing(config: JumpConfig, dc: DoubleCoset) -> int:
    """The k with [g] in Gamma_{E_{k+1}} but not in Gamma_{E_k}."""
    model = config.model
    fields = config.fields()
    for k in range(-1, len(fields) - 2):
        if subfield_membership(model, dc, fields[k + 2]) and not subfield_membership(model, dc, fields[k + 1]):
            return k
    raise ValueError(f"{dc} lies in no level difference of the tower")


def module_checks(config: JumpConfig) -> Dict[str, bool]:
    """
    Structural statements about the two decompositions: sym-ram parts agree,
    sym-unram parts agree (f odd or m even) or are complementary (f even, m odd),
    inverse classes pair up, and f = 1 makes both sides identical.
    """
    model = config.model
    A = finite_module(config, Side.A)
    M = finite_module(config, Side.M)
    ram_A, unram_A = symmetric_parts(A)
    ram_M, unram_M = symmetric_parts(M)
    checks = {"sym_ram_equal": _signature(ram_A) == _signature(ram_M)}
    f, m = model.f, config.form.m
    if f % 2 == 1 or m % 2 == 0:
        checks["sym_unram_equal"] = _signature(unram_A) == _signature(unram_M)
    else:
        # classes inside Gamma_{E_0} (level -1) sit in no module
        expected = Counter(
            (level, dc.key)
            for dc in double_cosets(model)
            if dc.symmetry is Symmetry.SYMMETRIC_UNRAMIFIED
            for level in [first_level_containing(config, dc)]
            if level >= 0
        )
        checks["sym_unram_complementary"] = _signature(unram_A) + _signature(unram_M) == expected

    index = {dc.key: dc for dc in double_cosets(model)}
    paired = True
    for dec in (A, M):
        mult = dec.multiplicities()
        for key, count in mult.items():
            dc = index[key]
            if not dc.is_symmetric and mult.get(dc.inverse_key, 0) != count:
                paired = False
    checks["asymmetric_pairs_balanced"] = paired
    exceptional = sum(1 for c in A.components + M.components if c.exceptional)
    checks["exceptional_even"] = exceptional % 2 == 0
    if config.is_admissible:
        checks["exceptional_absent"] = exceptional == 0
    if f == 1:
        checks["totally_ramified_sides_equal"] = A.level_signature() == M.level_signature()
    return checks
