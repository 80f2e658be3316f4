"""Exception types shared across the package."""


class SandnetError(Exception):
    """Base class for every package-specific error."""


class RosterError(SandnetError):
    """Roster text violates the format or a record invariant."""


class GraphError(SandnetError):
    """Edge list or constructor arguments violate graph invariants."""


class CapacityError(SandnetError):
    """Capacity assignment is impossible or invalid for the given graph."""


class EngineError(SandnetError):
    """Simulation misconfiguration or invariant breach (negative sand, watchdog)."""


class ConvergenceError(SandnetError):
    """Iterative computation did not converge within its iteration budget."""


class ConstantInputError(SandnetError):
    """A statistic is undefined because an input has zero variance."""
