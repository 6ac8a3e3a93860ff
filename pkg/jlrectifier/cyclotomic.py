# jlrectifier/cyclotomic.py
"""
Roots of unity in discrete-log form.

Every root of unity is stored as an exponent with respect to one abstract
primitive root g0 of a cyclic group of order N (the ambient group). Products
are sums of exponents, Frobenius is multiplication of the exponent by q, and
no polynomial arithmetic over finite fields is ever performed.

Character values live in Q/Z (``QZValue``); a quadratic character takes the
values 0 and 1/2.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import FrozenSet, List, Sequence

from sympy import divisors

from .errors import AmbientSizingError, NotInSubgroupError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class RootOfUnity:
    """g0**exponent inside the cyclic group of order ``modulus``."""

    exponent: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        if not 0 <= self.exponent < self.modulus:
            object.__setattr__(self, "exponent", self.exponent % self.modulus)

    @classmethod
    def one(cls, modulus: int) -> "RootOfUnity":
        return cls(0, modulus)

    @classmethod
    def minus_one(cls, modulus: int) -> "RootOfUnity":
        if modulus % 2:
            raise NotInSubgroupError(f"-1 does not exist in a group of odd order {modulus}")
        return cls(modulus // 2, modulus)

    @classmethod
    def generator_of(cls, order: int, modulus: int) -> "RootOfUnity":
        """Canonical generator g0**(N/order) of the subgroup of the given order."""
        if modulus % order:
            raise AmbientSizingError(f"no subgroup of order {order} in a group of order {modulus}")
        return cls(modulus // order, modulus)

    def _check(self, other: "RootOfUnity") -> None:
        if other.modulus != self.modulus:
            raise ValueError(f"roots of unity from different ambient groups ({self.modulus} vs {other.modulus})")

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        self._check(other)
        return RootOfUnity((self.exponent + other.exponent) % self.modulus, self.modulus)

    def __truediv__(self, other: "RootOfUnity") -> "RootOfUnity":
        return self * other.inverse()

    def __pow__(self, k: int) -> "RootOfUnity":
        return RootOfUnity((self.exponent * k) % self.modulus, self.modulus)

    def inverse(self) -> "RootOfUnity":
        return RootOfUnity((-self.exponent) % self.modulus, self.modulus)

    def frobenius(self, q: int, times: int = 1) -> "RootOfUnity":
        """x -> x**(q**times); ``times`` may be negative when q is invertible mod the order."""
        if times >= 0:
            return self ** pow(q, times, self.modulus)
        return self ** pow(pow(q, -times, self.modulus), -1, self.modulus)

    def is_one(self) -> bool:
        return self.exponent == 0

    def lift(self, modulus: int) -> "RootOfUnity":
        """Re-express this element inside a larger ambient group of order ``modulus``."""
        if modulus % self.modulus:
            raise AmbientSizingError(f"cannot lift from order {self.modulus} to order {modulus}")
        return RootOfUnity(self.exponent * (modulus // self.modulus), modulus)

    def __str__(self) -> str:
        return f"g0^{self.exponent}"


@dataclass(frozen=True, order=True)
class QZValue:
    """An element of Q/Z, read as the complex root of unity exp(2*pi*i*value)."""

    value: Fraction = Fraction(0)

    def __post_init__(self):
        v = Fraction(self.value)
        object.__setattr__(self, "value", v - (v.numerator // v.denominator))

    @classmethod
    def from_sign(cls, sign: int) -> "QZValue":
        if sign not in (1, -1):
            raise ValueError(f"expected +1 or -1, got {sign}")
        return cls(Fraction(0) if sign == 1 else Fraction(1, 2))

    @classmethod
    def parse(cls, text: str) -> "QZValue":
        return cls(Fraction(text))

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def __add__(self, other: "QZValue") -> "QZValue":
        return QZValue(self.value + other.value)

    def __neg__(self) -> "QZValue":
        return QZValue(-self.value)

    def __sub__(self, other: "QZValue") -> "QZValue":
        return self + (-other)

    def scale(self, k: int) -> "QZValue":
        return QZValue(self.value * k)

    def is_zero(self) -> bool:
        return self.value == 0

    def order(self) -> int:
        return self.value.denominator

    def to_sign(self) -> int:
        if self.value == 0:
            return 1
        if self.value == Fraction(1, 2):
            return -1
        raise ValueError(f"{self} is not a sign")

    def __str__(self) -> str:
        return f"{self.value.numerator}/{self.value.denominator}"


QZ_ZERO = QZValue(Fraction(0))
QZ_HALF = QZValue(Fraction(1, 2))


@dataclass(frozen=True)
class CyclicSubgroup:
    """The unique subgroup of the given order inside the ambient group of order ``modulus``."""

    order: int
    modulus: int

    def __post_init__(self):
        if self.order < 1 or self.modulus % self.order:
            raise AmbientSizingError(f"order {self.order} does not divide ambient order {self.modulus}")

    @property
    def cofactor(self) -> int:
        return self.modulus // self.order

    def __contains__(self, x: RootOfUnity) -> bool:
        return x.modulus == self.modulus and x.exponent % self.cofactor == 0

    def generator(self) -> RootOfUnity:
        return RootOfUnity(self.cofactor % self.modulus, self.modulus)

    def index_of(self, x: RootOfUnity) -> int:
        """Discrete log of x with respect to ``generator()``."""
        if x not in self:
            raise NotInSubgroupError(f"{x} is not in the subgroup of order {self.order}")
        return x.exponent // self.cofactor

    def element(self, index: int) -> RootOfUnity:
        return RootOfUnity((index % self.order) * self.cofactor, self.modulus)

    def elements(self) -> List[RootOfUnity]:
        return [self.element(i) for i in range(self.order)]


def element_order(x: RootOfUnity) -> int:
    return x.modulus // gcd(x.exponent, x.modulus)


def power_solutions(e: int, c: RootOfUnity) -> FrozenSet[RootOfUnity]:
    """All w with w**e == c; empty when c is not an e-th power."""
    n_amb = c.modulus
    if e < 1 or n_amb % e:
        raise AmbientSizingError(f"e={e} does not divide the ambient order {n_amb}")
    if c.exponent % e:
        return frozenset()
    base = c.exponent // e
    step = n_amb // e
    return frozenset(RootOfUnity((base + k * step) % n_amb, n_amb) for k in range(e))


def square_class_symbol(x: RootOfUnity, subgroup: CyclicSubgroup) -> int:
    """(x/H): +1 iff x is a square in H."""
    index = subgroup.index_of(x)
    if subgroup.order % 2:
        return 1
    # x**(|H|/2) is -1 exactly when the discrete log is odd
    half_power = (index * (subgroup.order // 2)) % subgroup.order
    return -1 if half_power else 1


def _field_log(alpha: RootOfUnity, field_units: int) -> int:
    """Discrete log of alpha in F_{p^k}^x (cyclic of order ``field_units``), via its order."""
    r = element_order(alpha)
    if field_units % r:
        raise NotInSubgroupError(f"element of order {r} does not lie in a field with {field_units + 1} elements")
    unit = (alpha.exponent * r // alpha.modulus) % r
    return (field_units // r) * unit


def multiplication_signature(alpha: RootOfUnity, k: int, p: int, brute_force: bool = False) -> int:
    """
    Sign of x -> alpha*x as a permutation of the field with p**k elements.

    The closed form (-1)**((r-1)(p**k-1)/r), r the order of alpha, is checked
    against explicit cycle enumeration by ``certify_signature_formula``.
    """
    field_units = p ** k - 1
    r = element_order(alpha)
    if field_units % r:
        raise NotInSubgroupError(f"order {r} does not divide {p}^{k}-1")
    if brute_force:
        return signature_by_cycles(_field_log(alpha, field_units), field_units)
    return -1 if ((r - 1) * (field_units // r)) % 2 else 1


def multiplication_permutation(log_alpha: int, field_units: int) -> List[int]:
    """
    Multiplication by g**log_alpha on F_{p^k}, as a list permutation of
    {0, 1, ..., field_units}: slot 0 is the zero element, slot 1+i is g**i.
    """
    perm = [0] * (field_units + 1)
    for i in range(field_units):
        perm[1 + i] = 1 + (i + log_alpha) % field_units
    return perm


def cycle_decomposition(perm: Sequence[int]) -> List[List[int]]:
    """Nontrivial cycles of a permutation given as a list."""
    unvisited = set(range(len(perm)))
    cycles = []
    while unvisited:
        start = unvisited.pop()
        cycle = [start]
        nxt = perm[start]
        while nxt != start:
            cycle.append(nxt)
            unvisited.remove(nxt)
            nxt = perm[nxt]
        if len(cycle) > 1:
            cycles.append(cycle)
    return cycles


def signature_by_cycles(log_alpha: int, field_units: int) -> int:
    cycles = cycle_decomposition(multiplication_permutation(log_alpha, field_units))
    transpositions = sum(len(c) - 1 for c in cycles)
    return -1 if transpositions % 2 else 1


def certify_signature_formula(p: int, k: int, exhaustive: bool = True) -> List[int]:
    """
    Compare closed form and cycle enumeration for every alpha in F_{p^k}^x.
    With exhaustive=False only alpha = g**((p^k-1)/r) is tried for each order r. That covers
    every alpha: multiplication by an alpha of order r splits F_{p^k}^x into (p^k-1)/r cycles
    of length r, so the closed form and the cycle sign both depend on r alone.
    Returns the discrete logs where they disagree (empty on success).
    """
    field_units = p ** k - 1
    if exhaustive:
        logs = range(field_units)
    else:
        logs = [field_units // r for r in divisors(field_units)]
    failures = []
    checked = 0
    for log_alpha in logs:
        r = field_units // gcd(log_alpha, field_units)
        closed = -1 if ((r - 1) * (field_units // r)) % 2 else 1
        if closed != signature_by_cycles(log_alpha, field_units):
            failures.append(log_alpha)
        checked += 1
    logger.debug("certified %d elements of F_%d^%d, %d failures", checked, p, k, len(failures))
    return failures


def finite_field_norm(x: RootOfUnity, big_deg: int, small_deg: int, q: int) -> RootOfUnity:
    """N_{F_{q^big}/F_{q^small}}(x) = x**((q^big-1)/(q^small-1))."""
    if small_deg < 1 or big_deg % small_deg:
        raise ValueError(f"degree {small_deg} does not divide {big_deg}")
    big_units = q ** big_deg - 1
    if big_units % element_order(x):
        raise NotInSubgroupError(f"{x} does not lie in F_{q}^{big_deg}")
    return x ** (big_units // (q ** small_deg - 1))


def solve_norm_equation(z: RootOfUnity, n: int, f: int, q: int) -> RootOfUnity:
    """
    Canonical w in mu_{q^n-1} with N_{n/f}(w) = z.

    The canonical generator of mu_{q^n-1} has norm equal to the canonical
    generator of mu_{q^f-1}, so z = gen_f**i lifts to gen_n**i. The full
    solution set is this w times the kernel of the norm.
    """
    if f < 1 or n % f:
        raise ValueError(f"f={f} does not divide n={n}")
    small_units = q ** f - 1
    big_units = q ** n - 1
    if z.modulus % big_units:
        raise AmbientSizingError(f"ambient order {z.modulus} does not contain mu_{big_units}")
    index = CyclicSubgroup(small_units, z.modulus).index_of(z)
    return CyclicSubgroup(big_units, z.modulus).element(index)


if __name__ == "__main__":
    n_amb = 80  # 3**4 - 1
    zeta = RootOfUnity.generator_of(8, n_amb)
    print(f"order of {zeta}: {element_order(zeta)}")
    print(f"square roots of 1: {sorted(power_solutions(2, RootOfUnity.one(n_amb)))}")
    print(f"sign of primitive 8th root on F_9: {multiplication_signature(zeta, 2, 3)}")
    print(f"certification F_9: {certify_signature_formula(3, 2) or 'ok'}")
