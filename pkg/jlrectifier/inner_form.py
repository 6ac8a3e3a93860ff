# jlrectifier/inner_form.py
"""
Integer invariants of the inner form GL_m(D) (dim D = d^2, Hasse invariant h)
relative to the tame extension E/F and a tower E_0 > E_1 > ... > E_t > F.
"""
import logging
from dataclasses import dataclass, replace
from enum import Enum
from itertools import product
from math import gcd
from typing import List, Optional, Sequence, Tuple

from .errors import ConfigError, InvariantError
from .tame_galois import (
    AmbientModel,
    SubfieldDescriptor,
    TameParams,
    build_ambient,
    tower_fields,
    validate_tower,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InnerForm:
    m: int
    d: int
    h: int

    @property
    def is_split(self) -> bool:
        return self.d == 1


def split_form(n: int) -> InnerForm:
    return InnerForm(m=n, d=1, h=0)


def inner_form_errors(n: int, form: InnerForm) -> List[str]:
    reasons = []
    if form.m < 1 or form.d < 1:
        reasons.append(f"m and d must be positive (got m={form.m}, d={form.d})")
    elif form.m * form.d != n:
        reasons.append(f"m*d = {form.m * form.d} but n = {n}")
    if form.d >= 1 and gcd(form.h, form.d) != 1:
        reasons.append(f"Hasse invariant h={form.h} is not coprime to d={form.d}")
    return reasons


def jump_errors(params: TameParams, tower: Sequence[SubfieldDescriptor], jumps: Sequence[int]) -> List[str]:
    """Jumps a_0 < a_1 < ... < a_t are valuations in E; a_k must be a multiple of e(E/E_k)."""
    reasons = []
    if any(a < 1 for a in jumps):
        reasons.append("jumps must be positive integers")
    if any(b <= a for a, b in zip(jumps, jumps[1:])):
        reasons.append(f"jumps {list(jumps)} are not strictly increasing")
    if len(jumps) != len(tower):
        reasons.append(f"{len(tower)} tower levels but {len(jumps)} jumps")
        return reasons
    for k, a in enumerate(jumps):
        e_below = tower[k].e_rel
        if a % e_below:
            reasons.append(f"jump a_{k}={a} is not a multiple of e(E/E_{k})={e_below}")
    return reasons


def admissibility_errors(params: TameParams, tower: Sequence[SubfieldDescriptor], jumps: Sequence[int]) -> List[str]:
    """
    Level k is minimal over E_{k+1} when a_k / e(E/E_k) is prime to e(E_k/E_{k+1}).
    Non-minimal levels are accepted but may let the exceptional class into the modules.
    """
    reasons = []
    fields = list(tower) + [SubfieldDescriptor(params.e, params.f)]
    for k, a in enumerate(jumps[: len(tower)]):
        e_below = fields[k].e_rel
        if fields[k + 1].e_rel % e_below or a % e_below:
            continue
        e_step = fields[k + 1].e_rel // e_below
        if gcd(a // e_below, e_step) != 1:
            reasons.append(
                f"jump a_{k}={a} is not minimal: a_{k}/e(E/E_{k}) = {a // e_below} "
                f"shares a factor with e(E_{k}/E_{k + 1}) = {e_step}"
            )
    return reasons


@dataclass(frozen=True)
class JumpConfig:
    """Everything the module computations depend on."""

    params: TameParams
    tower: Tuple[SubfieldDescriptor, ...]
    jumps: Tuple[int, ...]
    form: InnerForm

    @property
    def model(self) -> AmbientModel:
        return build_ambient(self.params)

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def t(self) -> int:
        """Index of the last tower level."""
        return len(self.tower) - 1

    def fields(self) -> List[SubfieldDescriptor]:
        """E_{-1} = E, E_0, ..., E_t, E_{t+1} = F."""
        return tower_fields(self.params, list(self.tower))

    def field_at(self, k: int) -> SubfieldDescriptor:
        return self.fields()[k + 1]

    def split(self) -> "JumpConfig":
        return replace(self, form=split_form(self.n))

    def with_hasse(self, h: int) -> "JumpConfig":
        return replace(self, form=replace(self.form, h=h))

    def errors(self) -> List[str]:
        reasons = inner_form_errors(self.n, self.form)
        tower_reasons = validate_tower(self.model, list(self.tower))
        reasons.extend(tower_reasons)
        if tower_reasons:
            # divisibility needs a valid tower; monotonicity is still reported
            reasons.extend(r for r in jump_errors(self.params, (), self.jumps) if "tower levels" not in r)
        else:
            reasons.extend(jump_errors(self.params, self.tower, self.jumps))
        return reasons

    def admissibility_errors(self) -> List[str]:
        return admissibility_errors(self.params, self.tower, self.jumps)

    @property
    def is_admissible(self) -> bool:
        return not self.admissibility_errors()

    def validate(self) -> "JumpConfig":
        reasons = self.errors()
        if reasons:
            raise ConfigError(reasons)
        return self


@dataclass(frozen=True)
class LevelInvariants:
    field: SubfieldDescriptor
    d_K: int
    m_K: int
    s_K: int
    r_K: int
    eA_K: int


@dataclass(frozen=True)
class OrderInvariants:
    s: int
    r: int
    eA: int
    levels: Tuple[LevelInvariants, ...]  # E_{-1}, E_0, ..., E_{t+1}

    def at(self, k: int) -> LevelInvariants:
        return self.levels[k + 1]


def level_invariants(params: TameParams, form: InnerForm, K: SubfieldDescriptor) -> LevelInvariants:
    n_below = K.degree_below
    d_K = form.d // gcd(form.d, K.degree_over_base(params))
    m_K = gcd(form.m, n_below)
    if d_K * m_K != n_below:
        raise InvariantError(f"centralizer of K: d_K*m_K = {d_K * m_K} != n(E/K) = {n_below}")
    s_K = gcd(K.f_rel, m_K)
    return LevelInvariants(
        field=K,
        d_K=d_K,
        m_K=m_K,
        s_K=s_K,
        r_K=K.e_rel // gcd(d_K, K.e_rel),
        eA_K=K.f_rel // s_K,
    )


def order_invariants(params: TameParams, form: InnerForm, tower: Sequence[SubfieldDescriptor]) -> OrderInvariants:
    reasons = inner_form_errors(params.n, form)
    if reasons:
        raise ConfigError(reasons)
    s = gcd(params.f, form.m)
    eA = params.f // s
    levels = tuple(level_invariants(params, form, K) for K in tower_fields(params, list(tower)))
    for lv in levels:
        if eA % lv.eA_K:
            raise InvariantError(f"e(A_K/o_E)={lv.eA_K} does not divide e(A/o_E)={eA}")
    return OrderInvariants(s=s, r=params.e // gcd(form.d, params.e), eA=eA, levels=levels)


class ModuleCase(str, Enum):
    EMPTY = "empty"                # a_k odd, e(A_{k+1}) odd
    WITH_INNER = "with-inner"      # a_k odd, e(A_k) odd, e(A_{k+1}) even
    DIFFERENCE = "difference"      # a_k even or e(A_k) even


@dataclass(frozen=True)
class JumpLevel:
    k: int
    a: int
    case: ModuleCase
    target: int          # congruence class of j modulo eA
    j_k: Optional[int]   # eA * a_k / 2 when integral


@dataclass(frozen=True)
class JumpLevels:
    eA: int
    levels: Tuple[JumpLevel, ...]
    R: Optional[int]
    Q: Optional[int]


def _first_flip(values: Sequence[int]) -> Optional[int]:
    """Index k-1 (levels start at -1) of the first odd -> even flip in the sequence."""
    for i in range(len(values) - 1):
        if values[i] % 2 == 1 and values[i + 1] % 2 == 0:
            return i - 1
    return None


def jump_levels(config: JumpConfig) -> JumpLevels:
    params, form = config.params, config.form
    inv = order_invariants(params, form, config.tower)
    eA = inv.eA
    out = []
    for k, a in enumerate(config.jumps):
        eA_k = inv.at(k).eA_K
        eA_next = inv.at(k + 1).eA_K
        if a % 2 and eA_next % 2:
            case = ModuleCase.EMPTY
        elif a % 2 and eA_k % 2:
            case = ModuleCase.WITH_INNER
        else:
            case = ModuleCase.DIFFERENCE
        if a % 2 == 0:
            j_k, target = eA * a // 2, 0
        elif eA % 2 == 0:
            j_k = eA * a // 2
            target = (form.h * (eA // 2)) % eA
        else:
            if case is not ModuleCase.EMPTY:
                raise InvariantError(f"level {k}: a_k odd and e(A/o_E) odd, yet case {case.value}")
            j_k, target = None, 0
        out.append(JumpLevel(k=k, a=a, case=case, target=target, j_k=j_k))
        logger.debug("level %d: a=%d eA_k=%d eA_k+1=%d -> %s target %d", k, a, eA_k, eA_next, case.value, target)

    f_rels = [lv.field.f_rel for lv in inv.levels]
    eAs = [lv.eA_K for lv in inv.levels]
    R = _first_flip(f_rels)
    Q = _first_flip(eAs)
    if R is not None and Q is not None and R > Q:
        raise InvariantError(f"R={R} exceeds Q={Q}")
    if params.f % 2 == 0 and form.m % 2 == 1 and R != Q:
        raise InvariantError(f"f even and m odd but R={R} != Q={Q}")
    return JumpLevels(eA=eA, levels=tuple(out), R=R, Q=Q)


def _least_admissible_jump(e_below: int, e_step: int, above: int, parity: int) -> Optional[int]:
    """Least a > above with e_below | a, a/e_below prime to e_step and a = parity mod 2."""
    x = above // e_below + 1
    # both conditions are periodic in x with period dividing 2*e_step
    for candidate in range(x, x + 2 * e_step + 2):
        a = candidate * e_below
        if gcd(candidate, e_step) == 1 and a % 2 == parity:
            return a
    return None


def minimal_jump_sequences(
    params: TameParams, tower: Sequence[SubfieldDescriptor], minimal: bool = True
) -> List[Tuple[int, ...]]:
    """
    One strictly increasing jump sequence per achievable parity pattern, each as
    small as possible level by level. With minimal=False only divisibility by
    e(E/E_k) is imposed, which reaches more parity patterns.
    """
    fields = list(tower) + [SubfieldDescriptor(params.e, params.f)]
    out = []
    for pattern in product((0, 1), repeat=len(tower)):
        jumps: List[int] = []
        for k, parity in enumerate(pattern):
            e_below = fields[k].e_rel
            e_step = fields[k + 1].e_rel // e_below if minimal else 1
            a = _least_admissible_jump(e_below, e_step, jumps[-1] if jumps else 0, parity)
            if a is None:
                break
            jumps.append(a)
        else:
            out.append(tuple(jumps))
    logger.debug("tower %s: %d achievable parity patterns", list(tower), len(out))
    return out
