# jlrectifier/errors.py
from typing import Iterable, List


class JLRectifierError(Exception):
    """Base class for every error raised by the library."""


class ConfigError(JLRectifierError):
    """
    A run configuration violates one or more invariants.
    All reasons are collected so the user sees every problem at once.
    """

    def __init__(self, reasons: Iterable[str]):
        self.reasons: List[str] = list(reasons)
        super().__init__("; ".join(self.reasons) or "invalid configuration")


class AmbientSizingError(JLRectifierError):
    """The ambient group of roots of unity is too small for a required equation."""


class NotInSubgroupError(JLRectifierError):
    """An element was expected to lie in a cyclic subgroup but does not."""


class AsymmetricClassError(JLRectifierError):
    """An operation reserved for symmetric double cosets received an asymmetric one."""


class OracleMismatchError(JLRectifierError):
    """Two independent computations of the same quantity disagree."""


class SubfieldError(JLRectifierError):
    """A (e(E/K), f(E/K)) pair does not describe a valid standard subfield."""


class InvariantError(JLRectifierError):
    """A structural invariant of the model failed; indicates a bug, not bad input."""
