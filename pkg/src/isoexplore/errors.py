"""Exception vocabulary shared across the package."""

from __future__ import annotations


class SpecError(Exception):
    """Base class for problems with a problem-specification document."""


class SpecSyntaxError(SpecError):
    """Document is not well-formed (bad JSON, missing or mistyped fields)."""


class ValidationError(SpecError):
    """Document is well-formed but semantically inconsistent.

    Messages name the offending entity id and field.
    """


class CycleError(ValidationError):
    """The task/message graph contains a cycle."""


class EmptyGraph(ValidationError):
    """The application declares no tasks."""


class CapacityError(ValueError):
    """An arbitration weight exceeds the policy capacity, or a reduction
    would drop below the allocated weight sum."""


class Infeasible(Exception):
    """No arbitration weight within capacity meets the deadline."""


class NoFeasibleMapping(Exception):
    """Exploration finished without a single feasible mapping."""


class DomainError(ValueError):
    """Input outside the domain a routine supports (non-positive objective
    vectors, platforms the simulator cannot reproduce, out-of-range generator
    arguments)."""


class MissingCoefficient(LookupError):
    """The architecture energy config lacks a coefficient that is needed."""


class SimHorizonExceeded(Exception):
    """An activation did not complete within the simulated horizon."""


class BoundViolation(Exception):
    """A simulated response/traversal time exceeded its analytical bound.

    Carries everything needed to replay the offending trial.
    """

    def __init__(self, message: str, *, replay: dict | None = None):
        super().__init__(message)
        self.replay = replay or {}
