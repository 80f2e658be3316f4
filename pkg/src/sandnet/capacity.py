"""Distributing a network-level carrying capacity K over nodes by a
degree-power rule, and checking per-node feasibility.

The share rule is k_i = K * deg_i^P / sum_j deg_j^P: P=1 is
degree-proportional, P=0 uniform, P<0 inverts the relationship. A node can
survive its own topple only when k_i >= deg_i + g (a topple removes
deg_i + g grains), so that bound is the authoritative validity test.

Two numeric flavors are supported throughout: exact rationals (Fraction
capacities from integer P and rational K, g) and float64.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Union

import numpy as np

from .errors import CapacityError
from .graphs import Graph

Scalar = Union[int, float, Fraction]


def _as_fraction(x, name: str) -> Fraction:
    """Exact conversion; floats are rejected because e.g. float 0.1 is not 1/10."""
    if isinstance(x, float):
        raise CapacityError(
            f"{name}={x!r} is a float; exact mode needs an int, Fraction, or string"
        )
    try:
        return Fraction(x)
    except (ValueError, TypeError) as exc:
        raise CapacityError(f"cannot read {name}={x!r} as a rational: {exc}") from None


def _check_degrees(graph: Graph) -> np.ndarray:
    deg = graph.degrees
    if graph.n == 0:
        raise CapacityError("graph has no nodes")
    isolated = np.flatnonzero(deg == 0)
    if isolated.size:
        raise CapacityError(
            f"isolated node(s) {isolated.tolist()}: degree 0 breaks the share rule "
            "and can never satisfy k >= deg + g"
        )
    return deg


def capacities(graph: Graph, K: Scalar, P: int | float, exact: bool = False):
    """Per-node capacity vector k_i = K * deg_i^P / sum_j deg_j^P.

    exact=True returns a list of Fractions (requires integer P and rational
    K); otherwise a float64 array. Rejects graphs with isolated nodes and
    K <= 0.
    """
    deg = _check_degrees(graph)
    if exact:
        if not isinstance(P, int):
            raise CapacityError(f"exact mode needs an integer exponent, got P={P!r}")
        K = _as_fraction(K, "K")
        if K <= 0:
            raise CapacityError(f"K must be positive, got {K}")
        weights = [Fraction(int(d)) ** P for d in deg]
        total = sum(weights)
        return [K * w / total for w in weights]
    K = float(K)
    if K <= 0:
        raise CapacityError(f"K must be positive, got {K}")
    weights = deg.astype(np.float64) ** float(P)
    return K * weights / weights.sum()


def min_capacity_bound(graph: Graph, P: int | float, dissipation: Scalar):
    """Closed-form lower bound for the total capacity:
    (min_deg + g) * sum_j deg_j^P / (min_deg if P >= 0 else max_deg).

    Advisory only. The bound is not sufficient for every graph and exponent;
    a star with P=-1 passes it while starving the hub (see
    validate_capacities, the authoritative per-node test, and
    feasible_min_capacity for the sharp value).
    """
    deg = _check_degrees(graph)
    exact = isinstance(dissipation, Rational) and not isinstance(dissipation, float)
    divisor = int(deg.min()) if P >= 0 else int(deg.max())
    if exact:
        if not isinstance(P, int):
            raise CapacityError(f"exact mode needs an integer exponent, got P={P!r}")
        g = Fraction(dissipation)
        total = sum(Fraction(int(d)) ** P for d in deg)
        return (Fraction(int(deg.min())) + g) * total / divisor
    total = float((deg.astype(np.float64) ** float(P)).sum())
    return (float(deg.min()) + float(dissipation)) * total / divisor


def feasible_min_capacity(graph: Graph, P: int | float, dissipation: Scalar):
    """Smallest K for which every node passes k_i >= deg_i + g under the
    share rule: max_i (deg_i + g) * sum_j deg_j^P / deg_i^P."""
    deg = _check_degrees(graph)
    exact = isinstance(dissipation, Rational) and not isinstance(dissipation, float)
    if exact:
        if not isinstance(P, int):
            raise CapacityError(f"exact mode needs an integer exponent, got P={P!r}")
        g = Fraction(dissipation)
        total = sum(Fraction(int(d)) ** P for d in deg)
        return max((Fraction(int(d)) + g) * total / Fraction(int(d)) ** P for d in deg)
    g = float(dissipation)
    degf = deg.astype(np.float64)
    total = float((degf ** float(P)).sum())
    return float(((degf + g) * total / degf ** float(P)).max())


@dataclass(frozen=True)
class CapacityViolation:
    node: int
    capacity: Scalar
    required: Scalar


@dataclass(frozen=True)
class CapacityReport:
    ok: bool
    violations: tuple[CapacityViolation, ...]

    def describe(self, labels: Sequence[str] | None = None) -> str:
        if self.ok:
            return "capacity validation passed"
        lines = [f"capacity validation failed at {len(self.violations)} node(s):"]
        for v in self.violations:
            name = f"{v.node}" if labels is None else f"{v.node} ({labels[v.node]})"
            lines.append(f"  node {name}: k={v.capacity} < deg+g={v.required}")
        return "\n".join(lines)


def validate_capacities(graph: Graph, k: Sequence, dissipation: Scalar) -> CapacityReport:
    """Per-node check that k_i >= deg_i + g, so no topple can drive sand
    negative. Violations are data (a report), not exceptions."""
    if len(k) != graph.n:
        raise CapacityError(f"{len(k)} capacities for {graph.n} nodes")
    violations = []
    for i, deg in enumerate(graph.degrees):
        required = int(deg) + dissipation
        if k[i] < required:
            violations.append(CapacityViolation(i, k[i], required))
    return CapacityReport(ok=not violations, violations=tuple(violations))


@dataclass(frozen=True)
class CapacityConfig:
    """Bundle of the capacity parameters a simulation consumes."""

    K: Scalar
    P: int | float
    g: Scalar
    k: tuple
    sinks: frozenset[int] = frozenset()

    @classmethod
    def for_graph(
        cls,
        graph: Graph,
        K: Scalar,
        P: int | float,
        g: Scalar,
        exact: bool = False,
        sinks: frozenset[int] = frozenset(),
    ) -> "CapacityConfig":
        return cls(K=K, P=P, g=g, k=tuple(capacities(graph, K, P, exact=exact)), sinks=sinks)

    def validate(self, graph: Graph) -> CapacityReport:
        return validate_capacities(graph, self.k, self.g)
