# jlrectifier/tame_galois.py
"""
The tame extension E/F, its F-embeddings and the Galois double cosets.

E/F is fixed by (q, e, f, z_EF) through  varpi_E**e = z_EF * varpi_F.
An F-embedding of E (a coset g*Gamma_E) is the pair (j, u): it raises roots of
unity of E to the q**j-th power and sends varpi_E to u*varpi_E, where
u**e = z_EF**(q**j - 1). Galois elements are the pairs (a mod M, w) acting by

    (a, w) . (j, u) = (j + a mod f, w * u**(q**a)),

and Gamma_E acts on the left through u -> u**(q**f), so double cosets are
orbits of that map.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from math import gcd
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Tuple

from sympy import isprime, n_order, perfect_power

from .cyclotomic import CyclicSubgroup, RootOfUnity, element_order, power_solutions
from .errors import (
    AmbientSizingError,
    AsymmetricClassError,
    ConfigError,
    InvariantError,
    SubfieldError,
)

logger = logging.getLogger(__name__)


class Symmetry(str, Enum):
    ASYMMETRIC = "asymmetric"
    SYMMETRIC_RAMIFIED = "sym-ram"
    SYMMETRIC_UNRAMIFIED = "sym-unram"


def prime_base(q: int) -> Optional[int]:
    """p if q is a power of the prime p, else None."""
    if q < 2:
        return None
    if isprime(q):
        return q
    pp = perfect_power(q)
    if pp and isprime(pp[0]):
        return int(pp[0])
    return None


def multiplicative_order(q: int, modulus: int) -> int:
    if modulus == 1:
        return 1
    return int(n_order(q, modulus))


@dataclass(frozen=True)
class TameParams:
    """
    q: residue field size of F; e, f: ramification index and residue degree of E/F;
    z_ef_index: discrete log of z_EF with respect to the canonical generator of mu_{q^f-1}.
    """

    q: int
    e: int
    f: int
    z_ef_index: int = 0
    p: Optional[int] = None

    def __post_init__(self):
        reasons = []
        base = prime_base(self.q)
        if base is None:
            reasons.append(f"q={self.q} is not a power of a prime")
        elif self.p is not None and self.p != base:
            reasons.append(f"q={self.q} is not a power of p={self.p}")
        if self.e < 1 or self.f < 1:
            reasons.append(f"e and f must be positive (got e={self.e}, f={self.f})")
        elif base is not None and self.e % base == 0:
            reasons.append(f"E/F is not tame: p={base} divides e={self.e}")
        if reasons:
            raise ConfigError(reasons)
        object.__setattr__(self, "p", base)
        object.__setattr__(self, "z_ef_index", self.z_ef_index % (self.q ** self.f - 1))

    @property
    def n(self) -> int:
        return self.e * self.f

    @property
    def residue_units(self) -> int:
        """|mu_E| = q**f - 1."""
        return self.q ** self.f - 1

    @property
    def log_p_q(self) -> int:
        k, power = 0, 1
        while power < self.q:
            power *= self.p
            k += 1
        return k


@dataclass(frozen=True)
class AmbientModel:
    """All roots of unity in play, as exponents modulo N = q**M - 1."""

    params: TameParams
    M: int
    N: int

    @property
    def q(self) -> int:
        return self.params.q

    @property
    def e(self) -> int:
        return self.params.e

    @property
    def f(self) -> int:
        return self.params.f

    @property
    def p(self) -> int:
        return self.params.p

    @property
    def n(self) -> int:
        return self.params.n

    def mu_of_degree(self, degree: int) -> CyclicSubgroup:
        """mu_{q^degree - 1}, the units of the residue field of degree ``degree`` over k_F."""
        if degree < 1 or self.M % degree:
            raise AmbientSizingError(f"residue degree {degree} does not divide M={self.M}")
        return CyclicSubgroup(self.q ** degree - 1, self.N)

    @property
    def mu_E(self) -> CyclicSubgroup:
        return self.mu_of_degree(self.f)

    @property
    def mu_F(self) -> CyclicSubgroup:
        return self.mu_of_degree(1)

    @property
    def zeta_E(self) -> RootOfUnity:
        return self.mu_E.generator()

    @property
    def z_ef(self) -> RootOfUnity:
        return self.mu_E.element(self.params.z_ef_index)

    def one(self) -> RootOfUnity:
        return RootOfUnity.one(self.N)

    def minus_one(self) -> Optional[RootOfUnity]:
        return RootOfUnity.minus_one(self.N) if self.N % 2 == 0 else None


@lru_cache(maxsize=512)
def build_ambient(params: TameParams) -> AmbientModel:
    """M = lcm(f, ord of q mod e*(q^f - 1)); N = q**M - 1."""
    order = multiplicative_order(params.q, params.e * params.residue_units)
    M = params.f * order // gcd(params.f, order)
    N = params.q ** M - 1
    if N % (params.e * params.residue_units):
        raise InvariantError(f"ambient order {N} not divisible by e*(q^f-1)")
    logger.debug("ambient model for %s: M=%d N=%d", params, M, N)
    return AmbientModel(params=params, M=M, N=N)


@dataclass(frozen=True, order=True)
class EmbeddingCoset:
    j: int
    u: RootOfUnity

    def sort_key(self) -> Tuple[int, int]:
        return (self.j, self.u.exponent)

    def is_identity(self) -> bool:
        return self.j == 0 and self.u.is_one()


@dataclass(frozen=True)
class GaloisElement:
    """(a, w): zeta -> zeta**(q**a) on roots of unity, varpi_E -> w*varpi_E."""

    a: int
    w: RootOfUnity

    def is_valid(self, model: AmbientModel) -> bool:
        target = model.z_ef ** (pow(model.q, self.a % model.M, model.N) - 1)
        return self.w ** model.e == target


def identity_element(model: AmbientModel) -> GaloisElement:
    return GaloisElement(0, model.one())


def compose(model: AmbientModel, g: GaloisElement, h: GaloisElement) -> GaloisElement:
    """g*h: first h, then g."""
    return GaloisElement((g.a + h.a) % model.M, h.w.frobenius(model.q, g.a) * g.w)


def inverse_element(model: AmbientModel, g: GaloisElement) -> GaloisElement:
    return GaloisElement((-g.a) % model.M, g.w.inverse().frobenius(model.q, -g.a))


def act(model: AmbientModel, g: GaloisElement, c: EmbeddingCoset) -> EmbeddingCoset:
    return EmbeddingCoset((c.j + g.a) % model.f, g.w * c.u.frobenius(model.q, g.a))


def coset_inverse(model: AmbientModel, c: EmbeddingCoset) -> EmbeddingCoset:
    """A coset contained in (g Gamma_E)^{-1}: (-j mod f, u**(-q**(-j)))."""
    return EmbeddingCoset((-c.j) % model.f, c.u.inverse().frobenius(model.q, -c.j))


@lru_cache(maxsize=512)
def enumerate_embeddings(model: AmbientModel) -> Tuple[EmbeddingCoset, ...]:
    out = []
    for j in range(model.f):
        target = model.z_ef ** (model.q ** j - 1)
        roots = power_solutions(model.e, target)
        if len(roots) != model.e:
            raise AmbientSizingError(
                f"w^{model.e} = z_EF^(q^{j}-1) has {len(roots)} solutions in mu_{model.N}"
            )
        out.extend(EmbeddingCoset(j, u) for u in roots)
    out.sort(key=EmbeddingCoset.sort_key)
    return tuple(out)


class UnionFind:
    def __init__(self, items: Iterable[Hashable]):
        self.parent = {x: x for x in items}
        self.rank = {x: 0 for x in self.parent}

    def find(self, x):
        y = self.parent[x]
        if self.parent[y] != y:
            y = self.parent[x] = self.find(y)
        return y

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x
        del self.rank[y]

    def reps(self):
        return set(self.rank)


def find_orbits(gens: Iterable, space: List, action: Callable) -> Dict[Hashable, set]:
    """Orbits of the group generated by ``gens`` acting on ``space``."""
    uf = UnionFind(space)
    for g in gens:
        for x in space:
            uf.union(x, action(g, x))
    orbits = {rep: set() for rep in uf.reps()}
    for x in space:
        orbits[uf.find(x)].add(x)
    return orbits


@dataclass(frozen=True)
class DoubleCoset:
    members: Tuple[EmbeddingCoset, ...]
    j: int
    symmetry: Symmetry
    t: int
    fixes_uniformizer: bool
    inverse_key: Tuple[int, int]

    @property
    def representative(self) -> EmbeddingCoset:
        return self.members[0]

    @property
    def u(self) -> RootOfUnity:
        return self.representative.u

    @property
    def key(self) -> Tuple[int, int]:
        return self.representative.sort_key()

    @property
    def is_symmetric(self) -> bool:
        return self.symmetry is not Symmetry.ASYMMETRIC

    @property
    def is_exceptional(self) -> bool:
        """The class of sigma^{e/2}: j = 0, u = -1."""
        u = self.u
        return self.j == 0 and u.modulus % 2 == 0 and u.exponent == u.modulus // 2

    def field_degree(self, f: int) -> int:
        """[k_{E_g} : k_F] = f*t."""
        return f * self.t

    def __str__(self) -> str:
        return f"[j={self.j}, u={self.u}]"


@lru_cache(maxsize=512)
def double_cosets(model: AmbientModel) -> Tuple[DoubleCoset, ...]:
    q, f = model.q, model.f
    nontrivial = [c for c in enumerate_embeddings(model) if not c.is_identity()]
    frob_f = "frobenius^f"
    orbits = find_orbits(
        [frob_f], nontrivial, lambda _g, c: EmbeddingCoset(c.j, c.u.frobenius(q, f))
    )

    key_of: Dict[EmbeddingCoset, Tuple[int, int]] = {}
    sorted_orbits = []
    for members in orbits.values():
        ordered = tuple(sorted(members, key=EmbeddingCoset.sort_key))
        if len({c.j for c in ordered}) != 1:
            raise InvariantError(f"orbit mixes Frobenius indices: {ordered}")
        for c in ordered:
            key_of[c] = ordered[0].sort_key()
        sorted_orbits.append(ordered)
    sorted_orbits.sort(key=lambda o: o[0].sort_key())

    out = []
    for members in sorted_orbits:
        rep = members[0]
        inverse_key = key_of[coset_inverse(model, rep)]
        t = len(members)
        if rep.u.frobenius(q, f * t) != rep.u or model.M % (f * t):
            raise InvariantError(f"orbit size {t} inconsistent for {rep}")
        if inverse_key != rep.sort_key():
            symmetry = Symmetry.ASYMMETRIC
        elif rep.j == 0:
            symmetry = Symmetry.SYMMETRIC_RAMIFIED
        elif f % 2 == 0 and rep.j == f // 2:
            symmetry = Symmetry.SYMMETRIC_UNRAMIFIED
        else:
            raise InvariantError(f"symmetric class with j={rep.j} outside {{0, f/2}}")
        out.append(
            DoubleCoset(
                members=members,
                j=rep.j,
                symmetry=symmetry,
                t=t,
                fixes_uniformizer=any(c.u.is_one() for c in members),
                inverse_key=inverse_key,
            )
        )
    logger.debug("%d nontrivial double cosets for %s", len(out), model.params)
    return tuple(out)


def double_coset_index(model: AmbientModel) -> Dict[Tuple[int, int], DoubleCoset]:
    return {dc.key: dc for dc in double_cosets(model)}


def class_of(model: AmbientModel, c: EmbeddingCoset) -> Optional[DoubleCoset]:
    for dc in double_cosets(model):
        if c in dc.members:
            return dc
    return None


@dataclass(frozen=True)
class RootCharacter:
    """
    lambda = [1; g] on Psi_{E/F}: z -> z**(1 - q**j) on mu_E and varpi_E -> u**-1.
    ``field_degree`` is [k_{E_g} : k_F], the F_q-dimension of the standard module.
    """

    j: int
    u: RootOfUnity
    field_degree: int
    symmetric: bool

    @property
    def on_pi(self) -> RootOfUnity:
        return self.u.inverse()

    def mu_exponent(self, q: int) -> int:
        return 1 - q ** self.j

    def on_mu(self, z: RootOfUnity, q: int) -> RootOfUnity:
        return z ** self.mu_exponent(q)

    def value_at(self, gamma: str, model: AmbientModel) -> RootOfUnity:
        """lambda(gamma) for gamma in {"mu", "varpi"} (canonical generators of mu_E and varpi_E)."""
        if gamma == "mu":
            return self.on_mu(model.zeta_E, model.q)
        if gamma == "varpi":
            return self.on_pi
        raise ValueError(f"unknown cyclic subgroup {gamma!r}")

    def is_well_defined(self, model: AmbientModel) -> bool:
        trivial_on_mu_f = self.on_mu(model.mu_F.generator(), model.q).is_one()
        # lambda(varpi_F) = lambda(z_EF**-1 * varpi_E**e)
        at_varpi_f = model.z_ef ** (model.q ** self.j - 1) * self.u ** (-model.e)
        return trivial_on_mu_f and at_varpi_f.is_one()


def root_character(model: AmbientModel, dc: DoubleCoset) -> RootCharacter:
    lam = RootCharacter(
        j=dc.j, u=dc.u, field_degree=dc.field_degree(model.f), symmetric=dc.is_symmetric
    )
    if not lam.is_well_defined(model):
        raise InvariantError(f"root character of {dc} is not well defined on Psi_E/F")
    return lam


# --- Standard subfields and towers ---


@dataclass(frozen=True, order=True)
class SubfieldDescriptor:
    """
    The standard subfield K generated by a power of zeta_E and varpi_E**e_rel,
    described by e_rel = e(E/K) and f_rel = f(E/K).
    """

    e_rel: int
    f_rel: int

    @property
    def degree_below(self) -> int:
        """n(E/K)."""
        return self.e_rel * self.f_rel

    def f_over_base(self, params: TameParams) -> int:
        """f(K/F)."""
        return params.f // self.f_rel

    def degree_over_base(self, params: TameParams) -> int:
        """n(K/F)."""
        return params.n // self.degree_below

    def is_base(self, params: TameParams) -> bool:
        return self.e_rel == params.e and self.f_rel == params.f

    def is_top(self) -> bool:
        return self.e_rel == 1 and self.f_rel == 1


def base_field(params: TameParams) -> SubfieldDescriptor:
    return SubfieldDescriptor(params.e, params.f)


def top_field() -> SubfieldDescriptor:
    return SubfieldDescriptor(1, 1)


def maximal_unramified(params: TameParams) -> SubfieldDescriptor:
    return SubfieldDescriptor(params.e, 1)


def residue_degree_of(z: RootOfUnity, q: int) -> int:
    """Degree of z over the residue field of F: least t >= 1 with z**(q**t) == z."""
    return multiplicative_order(q, element_order(z))


def standard_subfield_errors(model: AmbientModel, K: SubfieldDescriptor) -> List[str]:
    params = model.params
    reasons = []
    if K.e_rel < 1 or params.e % K.e_rel:
        reasons.append(f"e(E/K)={K.e_rel} does not divide e={params.e}")
    if K.f_rel < 1 or params.f % K.f_rel:
        reasons.append(f"f(E/K)={K.f_rel} does not divide f={params.f}")
    if reasons or K.is_base(params):
        return reasons
    # varpi_E**e_rel generates K only if z_EF lies in the residue field of K
    if K.f_over_base(params) % residue_degree_of(model.z_ef, model.q):
        reasons.append(
            f"(e(E/K), f(E/K)) = ({K.e_rel}, {K.f_rel}) is not a standard subfield: "
            f"z_EF has degree {residue_degree_of(model.z_ef, model.q)} over k_F"
        )
    return reasons


def require_standard_subfield(model: AmbientModel, K: SubfieldDescriptor) -> None:
    reasons = standard_subfield_errors(model, K)
    if reasons:
        raise SubfieldError("; ".join(reasons))


def embedding_fixes(model: AmbientModel, c: EmbeddingCoset, K: SubfieldDescriptor) -> bool:
    if K.is_base(model.params):
        return True
    return c.j % K.f_over_base(model.params) == 0 and (c.u ** K.e_rel).is_one()


def subfield_membership(model: AmbientModel, dc: DoubleCoset, K: SubfieldDescriptor) -> bool:
    """True iff the double coset lies in Gamma_K."""
    return any(embedding_fixes(model, c, K) for c in dc.members)


def validate_tower(model: AmbientModel, levels: List[SubfieldDescriptor]) -> List[str]:
    """Reasons the sequence E_0, ..., E_t is not a standard tower (empty when valid)."""
    reasons = []
    params = model.params
    if not levels:
        return ["tower must contain at least the level E_0"]
    if levels[0].e_rel != 1:
        reasons.append(f"E/E_0 must be unramified, got e(E/E_0)={levels[0].e_rel}")
    for k, K in enumerate(levels):
        reasons.extend(f"level {k}: {r}" for r in standard_subfield_errors(model, K))
        if K.is_base(params):
            reasons.append(f"level {k} equals F; the tower must stop strictly above F")
    for k in range(len(levels) - 1):
        lower, upper = levels[k], levels[k + 1]
        if upper.e_rel % lower.e_rel or upper.f_rel % lower.f_rel:
            reasons.append(f"levels {k} and {k + 1} are not nested (divisibility fails)")
        elif upper.degree_below <= lower.degree_below:
            reasons.append(f"levels {k} and {k + 1}: degree must strictly decrease towards F")
    return reasons


def tower_fields(params: TameParams, levels: List[SubfieldDescriptor]) -> List[SubfieldDescriptor]:
    """E_{-1} = E, E_0, ..., E_t, E_{t+1} = F."""
    return [top_field()] + list(levels) + [base_field(params)]


# --- Invariants of varpi_E ---


def f_varpi(model: AmbientModel, m: int = 1) -> Tuple[int, int]:
    """(f_varpi, m_varpi) with f_varpi = [E : F[varpi_E]] = f / deg(z_EF), m_varpi = gcd(m, f_varpi)."""
    fv = model.f // residue_degree_of(model.z_ef, model.q)
    return fv, gcd(m, fv)


def f_varpi_over(model: AmbientModel, K: SubfieldDescriptor, m: int = 1) -> Tuple[int, int]:
    """
    (f_{varpi,K}, m_{varpi,K}) over a standard subfield K: f(E / K[varpi_E]) is
    f(E/K) divided by the degree of z_{E/K} over k_K, and m_{varpi,K} = gcd(m, f_{varpi,K}).
    """
    if K.is_base(model.params):
        return f_varpi(model, m)
    # varpi_E**e_rel is the uniformizer of a standard K, so z_{E/K} = 1
    z_EK = model.one()
    fv = K.f_rel // residue_degree_of(z_EK, model.q ** K.f_over_base(model.params))
    return fv, gcd(m, fv)


# --- E_{+-g} ---


def _solve_linear(a: int, b: int, m: int) -> Optional[int]:
    """Least y >= 0 with a*y = b (mod m), or None."""
    g = gcd(a % m, m)
    if b % g:
        return None
    m_red = m // g
    if m_red == 1:
        return 0
    return (b // g) * pow((a // g) % m_red, -1, m_red) % m_red


@dataclass(frozen=True)
class EpmDescriptor:
    """
    tau: the Galois element inducing the nontrivial automorphism of E_g/E_{+-g}.
    The image of E_{+-g}^x in the tame quotient mu_{E_g} x <varpi_E> is generated
    by ``fixed_roots`` and uniformizer_root * varpi_E**uniformizer_power.
    Elements of the tame quotient are written as pairs (y, k) meaning y*varpi_E**k.
    """

    dc_key: Tuple[int, int]
    tau: GaloisElement
    b: int
    mu_g: CyclicSubgroup
    fixed_roots: CyclicSubgroup
    uniformizer_root: RootOfUnity
    uniformizer_power: int
    multiplier: RootOfUnity
    q: int
    z0: Optional[RootOfUnity] = None

    @property
    def ramified(self) -> bool:
        return self.uniformizer_power == 2

    def tau_image(self, y: RootOfUnity, k: int) -> Tuple[RootOfUnity, int]:
        return (y.frobenius(self.q, self.b) * self.multiplier ** k, k)

    def is_fixed(self, y: RootOfUnity, k: int) -> bool:
        return self.tau_image(y, k) == (y, k)

    def in_norm_group(self, y: RootOfUnity, k: int) -> bool:
        """Membership in N(E_g^x) mod 1-units = N(mu_{E_g}) x <u * varpi_E**2>."""
        if k % 2:
            return False
        return y * self.multiplier ** (-(k // 2)) in self._norm_subgroup()

    def _norm_subgroup(self) -> CyclicSubgroup:
        """Image of y -> y * tau(y) on mu_{E_g}."""
        order = self.mu_g.order
        image_index = gcd(pow(self.q, self.b, order) + 1, order)
        return CyclicSubgroup(order // image_index, self.mu_g.modulus)

    def generators(self) -> List[Tuple[RootOfUnity, int]]:
        return [(self.fixed_roots.generator(), 0), (self.uniformizer_root, self.uniformizer_power)]


def epm_descriptor(model: AmbientModel, dc: DoubleCoset) -> EpmDescriptor:
    if not dc.is_symmetric:
        raise AsymmetricClassError(f"{dc} is asymmetric; E_g/E_+-g is only defined for symmetric classes")
    q, f, u = model.q, model.f, dc.u
    ft = dc.field_degree(f)
    mu_g = model.mu_of_degree(ft)
    candidates = [0] + ([ft // 2] if ft % 2 == 0 else [])
    b = None
    for cand in candidates:
        if cand % f != dc.j:
            continue
        if cand == 0 and u.is_one():
            continue
        if u.frobenius(q, cand) == u.inverse():
            b = cand
            break
    if b is None:
        raise InvariantError(f"no involution swaps the roots of {dc}")
    tau = GaloisElement(b, u)
    if not tau.is_valid(model):
        raise InvariantError(f"tau for {dc} is not a Galois element")
    identity = EmbeddingCoset(0, model.one())
    if act(model, tau, identity) not in dc.members or act(model, tau, dc.representative) != identity:
        raise InvariantError(f"tau does not swap the identity coset with {dc}")
    tau_sq = compose(model, tau, tau)
    if not tau_sq.w.is_one() or pow(q, tau_sq.a, mu_g.order) != 1 % mu_g.order:
        raise InvariantError(f"tau^2 is not trivial on the tame quotient of E_g for {dc}")

    P = mu_g.order
    fixed_roots = CyclicSubgroup(gcd(q ** b - 1, P), model.N)
    # y with tau(y * varpi_E**k) = y * varpi_E**k, i.e. y**(q^b - 1) = u**-k
    power, root = None, None
    for k in (1, 2):
        target = mu_g.index_of(u ** (-k))
        y = _solve_linear(q ** b - 1, target, P)
        if y is not None:
            power, root = k, mu_g.element(y)
            break
    if power is None:
        raise InvariantError(f"no tau-fixed uniformizer class for {dc}")

    desc = EpmDescriptor(
        dc_key=dc.key,
        tau=tau,
        b=b,
        mu_g=mu_g,
        fixed_roots=fixed_roots,
        uniformizer_root=root,
        uniformizer_power=power,
        multiplier=u,
        q=q,
        z0=root if (dc.symmetry is Symmetry.SYMMETRIC_UNRAMIFIED and power == 1) else None,
    )
    if dc.symmetry is Symmetry.SYMMETRIC_UNRAMIFIED and desc.z0 is None:
        raise InvariantError(f"E_g/E_+-g should be unramified for {dc}")
    return desc


def norm_decomposition_matches(desc: EpmDescriptor) -> bool:
    """
    Unramified case: the fixed subgroup is generated by mu_{E_+-g}, u*varpi_E**2 and
    z0*varpi_E, the norm group is mu_{E_+-g} x <u*varpi_E**2>, and z0*varpi_E is not a norm.
    """
    if desc.z0 is None:
        return False
    if desc._norm_subgroup() != desc.fixed_roots:
        return False
    if not desc.is_fixed(desc.multiplier, 2) or not desc.is_fixed(desc.z0, 1):
        return False
    if not desc.in_norm_group(desc.multiplier, 2):
        return False
    # u * varpi_E**2 = (z0 * varpi_E)**2 * (u * z0**-2) with the last factor a fixed root
    if desc.multiplier * desc.z0 ** (-2) not in desc.fixed_roots:
        return False
    return not desc.in_norm_group(desc.z0, 1)


# --- Parity statements ---


@dataclass
class ParityReport:
    n_asymmetric: int = 0
    n_sym_ram: int = 0
    n_sym_unram: int = 0
    n_sym_unram_not_fixing: int = 0
    n_sym_unram_fixing: int = 0
    f_varpi: int = 1
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def fixing_root_conditions(model: AmbientModel) -> Dict[str, bool]:
    """
    The four equivalent conditions (f even) for some sigma^i phi^{f/2} to fix varpi_E:
    an embedding (f/2, 1) exists; some multiplier of phi^{f/2} is an e-th root of unity;
    z_EF lies in the degree-f/2 residue field; f_varpi is even.
    """
    f, e, q = model.f, model.e, model.q
    half = f // 2
    embedding_exists = any(c.j == half and c.u.is_one() for c in enumerate_embeddings(model))
    multipliers = power_solutions(e, model.z_ef ** (q ** half - 1))
    multiplier_is_root_of_unity = any(e % element_order(w) == 0 for w in multipliers)
    z_in_half_field = model.z_ef in model.mu_of_degree(half)
    fv, _ = f_varpi(model)
    return {
        "embedding_fixing_varpi": embedding_exists,
        "multiplier_is_eth_root_of_unity": multiplier_is_root_of_unity,
        "z_ef_in_half_field": z_in_half_field,
        "f_varpi_even": fv % 2 == 0,
    }


def order_two_index_is_odd(model: AmbientModel, dc: DoubleCoset) -> Optional[bool]:
    """
    Whether [U_g : F_p[u]] is odd, for u of order r > 2. None when r <= 2: then
    u = +-1 lies in F_p, the index is the whole F_p-dimension of U_g and the
    statement says nothing about it.
    """
    r = element_order(dc.u)
    if r <= 2:
        return None
    k = multiplicative_order(model.p, r)
    module_degree = dc.field_degree(model.f) * model.params.log_p_q
    return (module_degree // k) % 2 == 1


def classify_and_count(model: AmbientModel) -> ParityReport:
    e, f, q = model.e, model.f, model.q
    fv, _ = f_varpi(model)
    report = ParityReport(f_varpi=fv)
    order2_ok = True
    for dc in double_cosets(model):
        if dc.symmetry is Symmetry.ASYMMETRIC:
            report.n_asymmetric += 1
            continue
        if dc.symmetry is Symmetry.SYMMETRIC_RAMIFIED:
            report.n_sym_ram += 1
            if not dc.is_exceptional and dc.t % 2:
                order2_ok = False
        else:
            report.n_sym_unram += 1
            if dc.fixes_uniformizer:
                report.n_sym_unram_fixing += 1
            else:
                report.n_sym_unram_not_fixing += 1
            if dc.t % 2 == 0:
                order2_ok = False
        if order_two_index_is_odd(model, dc) is False:
            order2_ok = False

    report.checks["sym_unram_parity"] = report.n_sym_unram % 2 == (e * (f - 1)) % 2
    report.checks["order_2_trick"] = order2_ok
    if f % 2 == 0:
        conditions = fixing_root_conditions(model)
        report.checks["fixing_conditions_equivalent"] = len(set(conditions.values())) == 1
        exists = conditions["embedding_fixing_varpi"]
        report.checks["fixing_class_unique"] = report.n_sym_unram_fixing == (1 if exists else 0)
        report.checks["not_fixing_parity"] = report.n_sym_unram_not_fixing % 2 == (e + fv - 1) % 2
    logger.debug("parity report for %s: %s", model.params, report)
    return report
