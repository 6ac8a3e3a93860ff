# jlrectifier/t_factors.py
"""
t-factors of finite symplectic modules over a cyclic group Gamma of order prime to p.

Gamma is named by a tag: "mu" (the image of mu_E, generated by zeta_E) or
"varpi" (the image of varpi_E). A module is known through its isotypic
components, i.e. the root characters lambda; nothing else is needed since an
indecomposable symplectic F_p[Gamma]-module is determined by its underlying
module.

Two independent computations are provided: ``t_factors_generic`` follows the
definitions (hyperbolic / anisotropic / trivial) on the pooled characters, and
``t_factors_closed_form`` reads the per-class table. ``t_factors_of_decomposition``
runs both and insists they agree.
"""
import logging
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from .cyclotomic import (
    CyclicSubgroup,
    RootOfUnity,
    element_order,
    multiplication_signature,
    square_class_symbol,
)
from .errors import InvariantError, NotInSubgroupError, OracleMismatchError
from .symplectic import ModuleDecomposition
from .tame_galois import (
    AmbientModel,
    DoubleCoset,
    RootCharacter,
    Symmetry,
    double_coset_index,
    multiplicative_order,
    root_character,
)

logger = logging.getLogger(__name__)

GAMMAS = ("mu", "varpi")


class SymplecticKind(str, Enum):
    TRIVIAL = "trivial"
    HYPERBOLIC = "hyperbolic"
    ANISOTROPIC = "anisotropic"


@dataclass(frozen=True)
class SymplecticClass:
    kind: SymplecticKind
    alpha: RootOfUnity
    partner: Optional[RootOfUnity] = None
    degree: int = 1  # [F_p[alpha] : F_p]


@dataclass(frozen=True)
class TFactor:
    """t0 is a sign, t1 a quadratic character of the cyclic group Gamma given by its value at the generator."""

    gamma: str = "mu"
    t0: int = 1
    t1_generator: int = 1

    @property
    def t(self) -> int:
        return self.t0 * self.t1_generator

    def t1_at(self, x: int) -> int:
        """t1 at gamma**x."""
        return self.t1_generator ** (x % 2)

    def t_at_generator_power(self, x: int) -> int:
        """t computed with the generator gamma**x (x prime to |Gamma|) instead of gamma."""
        return self.t0 * self.t1_at(x)

    def __mul__(self, other: "TFactor") -> "TFactor":
        if other.gamma != self.gamma:
            raise ValueError(f"cannot multiply t-factors for {self.gamma} and {other.gamma}")
        return TFactor(self.gamma, self.t0 * other.t0, self.t1_generator * other.t1_generator)

    def power(self, c: int) -> "TFactor":
        return TFactor(self.gamma, self.t0 ** (c % 2), self.t1_generator ** (c % 2))


def _check_gamma(gamma: str) -> None:
    if gamma not in GAMMAS:
        raise ValueError(f"unknown cyclic subgroup {gamma!r}, expected one of {GAMMAS}")


def _orbit_key(alpha: RootOfUnity, p: int) -> int:
    """Smallest exponent in the p-Frobenius orbit of alpha."""
    k = multiplicative_order(p, element_order(alpha))
    return min(alpha.frobenius(p, i).exponent for i in range(k))


def is_self_dual(alpha: RootOfUnity, p: int) -> bool:
    """alpha**-1 lies in the p-Frobenius orbit of alpha."""
    r = element_order(alpha)
    if r <= 2:
        return True
    k = multiplicative_order(p, r)
    return any(pow(p, i, r) == r - 1 for i in range(k))


def norm_kernel(alpha: RootOfUnity, p: int) -> CyclicSubgroup:
    """ker of the norm from F_p[alpha] to its index-2 subfield."""
    k = multiplicative_order(p, element_order(alpha))
    if k % 2:
        raise InvariantError(f"anisotropic character of odd degree {k}")
    return CyclicSubgroup(p ** (k // 2) + 1, alpha.modulus)


def _copies(lam: RootCharacter, alpha: RootOfUnity, model: AmbientModel) -> Tuple[int, int]:
    """(k, c): [F_p[alpha]:F_p] and the number of copies of V_alpha in the restricted module."""
    dim = lam.field_degree * model.params.log_p_q
    k = multiplicative_order(model.p, element_order(alpha))
    if dim % k:
        raise InvariantError(f"F_p[alpha] of degree {k} does not embed in a module of dimension {dim}")
    return k, dim // k


def restrict_and_classify(
    lam: RootCharacter,
    gamma: str,
    model: AmbientModel,
    partner: Optional[RootCharacter] = None,
) -> List[Tuple[SymplecticClass, int]]:
    """
    Restrict the standard module of ``lam`` (plus that of ``partner``, the root
    character of the inverse class, for asymmetric classes) to Gamma and split
    it into indecomposable symplectic pieces.
    """
    _check_gamma(gamma)
    p = model.p
    alpha = lam.value_at(gamma, model)
    r = element_order(alpha)
    if r == 1:
        return [(SymplecticClass(SymplecticKind.TRIVIAL, alpha), lam.field_degree * model.params.log_p_q)]
    k, c = _copies(lam, alpha, model)
    c_partner = 0
    beta = None
    if partner is not None:
        beta = partner.value_at(gamma, model)
        _, c_partner = _copies(partner, beta, model)
        if _orbit_key(beta, p) != _orbit_key(alpha.inverse(), p):
            raise InvariantError(f"partner value {beta} is not conjugate to the inverse of {alpha}")

    if r == 2:
        total = c + c_partner
        if total % 2:
            raise InvariantError(f"{total} copies of a character of order 2 cannot be paired")
        return [(SymplecticClass(SymplecticKind.HYPERBOLIC, alpha, alpha, 1), total // 2)]
    if is_self_dual(alpha, p):
        if k % 2:
            raise InvariantError(f"self-dual character of order {r} has odd degree {k}")
        return [(SymplecticClass(SymplecticKind.ANISOTROPIC, alpha, None, k), c + c_partner)]
    if partner is None or c_partner != c:
        raise InvariantError(
            f"character {alpha} of order {r} needs its inverse with equal multiplicity "
            f"(got {c} and {c_partner})"
        )
    return [(SymplecticClass(SymplecticKind.HYPERBOLIC, alpha, beta, k), c)]


def t_factors_generic(
    components: Sequence[Tuple[RootCharacter, int]], gamma: str, model: AmbientModel
) -> TFactor:
    """
    t-factors from the definitions: copies of each character are pooled by
    p-Frobenius orbit, orbits of order 2 pair with themselves, self-dual orbits
    are anisotropic and the rest pair with their inverse orbit.
    """
    _check_gamma(gamma)
    p = model.p
    copies: Dict[int, int] = defaultdict(int)
    rep: Dict[int, RootOfUnity] = {}
    for lam, mult in components:
        alpha = lam.value_at(gamma, model)
        if alpha.is_one() or mult == 0:
            continue
        _, c = _copies(lam, alpha, model)
        key = _orbit_key(alpha, p)
        copies[key] += mult * c
        rep.setdefault(key, alpha)

    # p = 2 needs no special case: every order is odd, so signatures and symbols are +1
    t0, t1 = 1, 1
    paired = set()
    for key in sorted(copies):
        alpha, c = rep[key], copies[key]
        r = element_order(alpha)
        if r == 2:
            if c % 2:
                raise InvariantError(f"odd number {c} of copies of the character of order 2")
            t1 *= multiplication_signature(alpha, 1, p) ** (c // 2)
        elif is_self_dual(alpha, p):
            t0 *= (-1) ** c
            t1 *= square_class_symbol(alpha, norm_kernel(alpha, p)) ** c
        elif key not in paired:
            inverse_key = _orbit_key(alpha.inverse(), p)
            if copies.get(inverse_key, 0) != c:
                raise InvariantError(
                    f"unbalanced hyperbolic pairing: {c} copies of {alpha}, "
                    f"{copies.get(inverse_key, 0)} of its inverse"
                )
            k = multiplicative_order(p, r)
            t1 *= multiplication_signature(alpha, k, p) ** c
            paired.update((key, inverse_key))
    return TFactor(gamma, t0, t1)


def t_factors_closed_form(
    model: AmbientModel,
    dc: DoubleCoset,
    gamma: str,
    multiplicity: int = 1,
    convention: bool = True,
) -> TFactor:
    """
    Table value for ``multiplicity`` copies of U_[g] (of U_[g] + U_[g^-1] when
    [g] is asymmetric). The exceptional class at varpi takes the value 1 by
    convention; ``convention=False`` refuses it instead.
    """
    _check_gamma(gamma)
    q, p, f, u = model.q, model.p, model.f, dc.u
    ft = dc.field_degree(f)
    dim = ft * model.params.log_p_q

    if dc.is_exceptional:
        if gamma == "mu":
            one = TFactor(gamma, 1, square_class_symbol(model.zeta_E, model.mu_E))
        elif convention:
            one = TFactor(gamma, 1, 1)
        else:
            raise InvariantError("the t-factor of the exceptional class at varpi is fixed by convention only")
        return one.power(multiplicity)

    if dc.symmetry is Symmetry.ASYMMETRIC:
        if gamma == "mu":
            value = model.zeta_E ** (q ** dc.j - 1)
        else:
            value = u
        return TFactor(gamma, 1, multiplication_signature(value, dim, p)).power(multiplicity)

    half = ft // 2
    if dc.symmetry is Symmetry.SYMMETRIC_RAMIFIED:
        if gamma == "mu":
            one = TFactor(gamma, 1, 1)
        else:
            one = TFactor(gamma, -1, square_class_symbol(u, CyclicSubgroup(q ** half + 1, model.N)))
        return one.power(multiplicity)

    # symmetric unramified
    if gamma == "mu":
        f_half = f // 2
        value = model.zeta_E ** (1 - q ** f_half)
        one = TFactor(gamma, -1, square_class_symbol(value, CyclicSubgroup(q ** f_half + 1, model.N)))
    elif u.is_one():
        one = TFactor(gamma, 1, 1)
    elif element_order(u) == 2:
        one = TFactor(gamma, 1, (-1) ** (((q ** half - 1) // 2) % 2))
    else:
        one = TFactor(gamma, -1, square_class_symbol(u, CyclicSubgroup(q ** half + 1, model.N)))
    return one.power(multiplicity)


@dataclass(frozen=True)
class ExtendedT1:
    """
    t1 of U_[g] over the larger group mu_{E_g}, as a quadratic character.
    Asymmetric: sign of multiplication by z on the residue field of E_g.
    Symmetric: symbol of z**(1 - q**(ft/2)) in the kernel of the norm to E_{+-g}.
    Exceptional: (z / mu_E).
    """

    dc_key: Tuple[int, int]
    kind: str
    mu_g: CyclicSubgroup
    q: int
    p: int
    field_degree: int
    log_p_q: int
    multiplicity: int = 1

    def evaluate(self, z: RootOfUnity) -> int:
        if z not in self.mu_g:
            raise NotInSubgroupError(f"{z} is not in mu_E_g of order {self.mu_g.order}")
        if self.multiplicity % 2 == 0:
            return 1
        if self.kind == "asymmetric":
            return multiplication_signature(z, self.field_degree * self.log_p_q, self.p)
        if self.kind == "exceptional":
            return square_class_symbol(z, self.mu_g)
        half = self.field_degree // 2
        kernel = CyclicSubgroup(self.q ** half + 1, z.modulus)
        return square_class_symbol(z ** (1 - self.q ** half), kernel)

    @property
    def at_generator(self) -> int:
        return self.evaluate(self.mu_g.generator())


def extended_t1(model: AmbientModel, dc: DoubleCoset, multiplicity: int = 1) -> ExtendedT1:
    if dc.is_exceptional:
        kind = "exceptional"
    elif dc.is_symmetric:
        kind = "symmetric"
    else:
        kind = "asymmetric"
    ft = dc.field_degree(model.f)
    return ExtendedT1(
        dc_key=dc.key,
        kind=kind,
        mu_g=model.mu_of_degree(ft),
        q=model.q,
        p=model.p,
        field_degree=ft,
        log_p_q=model.params.log_p_q,
        multiplicity=multiplicity,
    )


def extended_restricts_to_table(model: AmbientModel, dc: DoubleCoset) -> bool:
    """The extended t1 pulled back to mu_E is the table value of t1 at zeta_E."""
    ext = extended_t1(model, dc)
    table = t_factors_closed_form(model, dc, "mu")
    if dc.is_symmetric:
        point = model.zeta_E
    else:
        point = root_character(model, dc).value_at("mu", model)
    return ext.evaluate(point) == table.t1_generator


def class_components(model: AmbientModel, dc: DoubleCoset) -> List[Tuple[RootCharacter, int]]:
    """Root characters of U_[g], with U_[g^-1] added for asymmetric classes."""
    out = [(root_character(model, dc), 1)]
    if not dc.is_symmetric:
        out.append((root_character(model, double_coset_index(model)[dc.inverse_key]), 1))
    return out


@dataclass(frozen=True)
class DualPathRow:
    dc_key: Tuple[int, int]
    gamma: str
    closed: TFactor
    generic: Optional[TFactor]

    @property
    def compared(self) -> bool:
        return self.generic is not None

    @property
    def agree(self) -> bool:
        return self.generic is None or self.generic == self.closed


def dual_path_rows(model: AmbientModel) -> List[DualPathRow]:
    """Both computations for every symmetric class and every asymmetric pair representative."""
    rows = []
    for dc in double_coset_index(model).values():
        if not dc.is_symmetric and dc.key > dc.inverse_key:
            continue
        for gamma in GAMMAS:
            closed = t_factors_closed_form(model, dc, gamma)
            generic = None if dc.is_exceptional else t_factors_generic(class_components(model, dc), gamma, model)
            rows.append(DualPathRow(dc.key, gamma, closed, generic))
    rows.sort(key=lambda r: (r.dc_key, r.gamma))
    return rows


def t_factors_of_decomposition(model: AmbientModel, dec: ModuleDecomposition, gamma: str) -> TFactor:
    """
    Product of the table values over the classes of ``dec``, checked against the
    definitions. The exceptional class only has a table value (it appears only
    for non-minimal jumps) and is kept out of the comparison.
    """
    index = double_coset_index(model)
    mult = dec.multiplicities()
    closed = TFactor(gamma)
    exceptional = TFactor(gamma)
    for key in sorted(mult):
        dc, c = index[key], mult[key]
        if dc.is_exceptional:
            exceptional = t_factors_closed_form(model, dc, gamma, c)
            closed = closed * exceptional
        elif dc.is_symmetric:
            closed = closed * t_factors_closed_form(model, dc, gamma, c)
        elif key < dc.inverse_key:
            if mult.get(dc.inverse_key, 0) != c:
                raise InvariantError(f"{dc} and its inverse occur {c} and {mult.get(dc.inverse_key, 0)} times")
            closed = closed * t_factors_closed_form(model, dc, gamma, c)
    generic = exceptional * t_factors_generic(
        [(comp.lam, 1) for comp in dec.components if not comp.exceptional], gamma, model
    )
    if generic != closed:
        raise OracleMismatchError(
            f"{dec.side.value}-side t-factors at {gamma}: closed form {closed} vs definitions {generic}"
        )
    logger.debug("%s-side t-factors at %s: %s", dec.side.value, gamma, closed)
    return closed
