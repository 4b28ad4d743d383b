"""Exception types shared across the package."""

from __future__ import annotations


class RootedTreesError(Exception):
    """Base class for all package errors."""


class InputError(RootedTreesError, ValueError):
    """Malformed input: unknown ids, id collisions, bad shapes."""


class InfeasibleError(RootedTreesError):
    """The instance violates the counting conditions.

    ``report`` carries the object that certifies the failure (a
    ``ConditionReport`` or a violating vertex partition).
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class PreconditionError(RootedTreesError):
    """An operation was called on an instance outside its domain."""


class GeneralPositionError(RootedTreesError):
    """Boundary lines are not in general position.

    ``triple`` names three root ids whose lines are concurrent.
    """

    def __init__(self, message: str, triple=None):
        super().__init__(message)
        self.triple = triple


class BudgetExceeded(RootedTreesError):
    """An exhaustive oracle refused an instance above its size budget."""


class CertificationError(RootedTreesError):
    """A construction could not be certified by exact rank computation."""
