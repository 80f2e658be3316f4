"""Member-level centrality measures, group-level roster measures, and
Pearson correlation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstantInputError, ConvergenceError
from .graphs import Graph, connected_components
from .roster import Roster


def degree_centrality(graph: Graph) -> np.ndarray:
    """Plain degree per node, as floats for downstream correlation."""
    return graph.degrees.astype(np.float64)


def _power_iteration(sub: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
    # Iterating on A + I keeps the dominant eigenvalue simple even on
    # bipartite components (where A alone has a matching negative eigenvalue
    # and plain power iteration oscillates); the principal eigenvector is
    # unchanged by the shift.
    m = sub.shape[0]
    shifted = sub.astype(np.float64) + np.eye(m)
    x = np.full(m, 1.0 / np.sqrt(m))
    for _ in range(max_iter):
        y = shifted @ x
        y /= np.linalg.norm(y)
        if np.max(np.abs(y - x)) < tol:
            return y
        x = y
    raise ConvergenceError(
        f"power iteration did not reach tol={tol} in {max_iter} iterations; "
        "raise max_iter"
    )


def eigenvector_centrality(
    graph: Graph,
    tol: float = 1e-10,
    max_iter: int = 1000,
    scope: str = "largest",
) -> np.ndarray:
    """Principal-eigenvector scores, nonnegative, unit Euclidean norm per
    component.

    scope="largest" reports the largest component (ties broken by smallest
    member id) and zeros elsewhere; scope="all" scores every node within its
    own component. Single-node components score 0 either way.
    """
    if graph.n == 0:
        raise ConstantInputError("eigenvector centrality of an empty graph")
    if scope not in ("largest", "all"):
        raise ValueError(f"scope must be 'largest' or 'all', got {scope!r}")
    comps = connected_components(graph)
    if scope == "largest":
        comps = [max(comps, key=lambda c: (len(c), -c[0]))]
    scores = np.zeros(graph.n, dtype=np.float64)
    adj = graph.adjacency
    for comp in comps:
        if len(comp) < 2:
            continue
        idx = np.array(comp)
        vec = _power_iteration(adj[np.ix_(idx, idx)], tol, max_iter)
        scores[idx] = np.abs(vec)
    return scores


def betweenness_centrality(graph: Graph) -> np.ndarray:
    """Shortest-path betweenness (Brandes' accumulation, unweighted).

    value(i) sums, over unordered pairs s != t with both != i, the fraction
    of s-t shortest paths passing through i; disconnected pairs contribute
    nothing. No normalization.
    """
    n = graph.n
    bc = np.zeros(n, dtype=np.float64)
    for s in range(n):
        stack: list[int] = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = np.zeros(n, dtype=np.float64)
        sigma[s] = 1.0
        dist = np.full(n, -1, dtype=np.int64)
        dist[s] = 0
        queue = [s]
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            stack.append(v)
            for w in graph.neighbors(v):
                w = int(w)
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = np.zeros(n, dtype=np.float64)
        for w in reversed(stack):
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    return bc / 2.0


def pearson(xs, ys) -> float:
    """Pearson correlation coefficient.

    Raises ValueError on mismatched/short inputs and ConstantInputError when
    either side has zero variance (r is undefined, never silently 0).
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1:
        raise ValueError("pearson expects 1-d inputs")
    if x.size != y.size:
        raise ValueError(f"length mismatch: {x.size} vs {y.size}")
    if x.size < 2:
        raise ValueError(f"need at least 2 points, got {x.size}")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(np.sqrt((dx * dx).sum()))
    sy = float(np.sqrt((dy * dy).sum()))
    if sx == 0.0 or sy == 0.0:
        raise ConstantInputError("correlation undefined: an input is constant")
    r = float((dx * dy).sum() / (sx * sy))
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class GroupMeasures:
    size: int
    avg_grade: float
    avg_year: float
    gender_ratio: float  # fraction of members coded F
    avg_intergrade: float | None  # mean over members reporting one; None if nobody does


def group_measures(roster: Roster) -> dict[str, GroupMeasures]:
    """Group-level table keyed by group id, in roster first-seen order."""
    out: dict[str, GroupMeasures] = {}
    for group in roster.groups:
        members = [rec for rec in roster if rec.group == group]
        inter = [rec.intergrade for rec in members if rec.intergrade is not None]
        out[group] = GroupMeasures(
            size=len(members),
            avg_grade=float(np.mean([rec.grade for rec in members])),
            avg_year=float(np.mean([rec.year for rec in members])),
            gender_ratio=sum(rec.gender == "F" for rec in members) / len(members),
            avg_intergrade=float(np.mean(inter)) if inter else None,
        )
    return out
