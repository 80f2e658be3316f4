"""Undirected simple graphs on integer nodes, with the constructors the
simulations, demos, and tests lean on (edge lists, lattices, random graphs)."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import GraphError
from .rng import SplitMix64, derive_seed


class Graph:
    """Immutable undirected simple graph on nodes 0..n-1.

    Backed by a dense boolean adjacency matrix, which is plenty for the
    network sizes this package targets (tens of nodes). Self-loops are
    rejected; edges are stored symmetrically.
    """

    __slots__ = ("_adj", "_degrees", "_neighbors", "labels", "n")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]] = (),
        labels: Sequence[str] | None = None,
    ):
        if n < 0:
            raise GraphError(f"node count must be nonnegative, got {n}")
        adj = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise GraphError(f"edge ({i}, {j}) has an endpoint outside 0..{n - 1}")
            if i == j:
                raise GraphError(f"self-loop at node {i} is not allowed")
            adj[i, j] = True
            adj[j, i] = True
        adj.setflags(write=False)
        self.n = n
        self._adj = adj
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise GraphError(f"{len(labels)} labels for {n} nodes")
        self.labels = labels
        self._degrees = adj.sum(axis=1).astype(np.int64)
        self._degrees.setflags(write=False)
        self._neighbors = tuple(np.flatnonzero(adj[i]) for i in range(n))

    @classmethod
    def from_adjacency(cls, matrix, labels: Sequence[str] | None = None) -> "Graph":
        m = np.asarray(matrix, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise GraphError(f"adjacency must be square, got shape {m.shape}")
        if not np.array_equal(m, m.T):
            raise GraphError("adjacency must be symmetric")
        if m.diagonal().any():
            raise GraphError("adjacency must have a zero diagonal (no self-loops)")
        n = m.shape[0]
        ii, jj = np.nonzero(np.triu(m))
        return cls(n, zip(ii.tolist(), jj.tolist()), labels)

    @property
    def adjacency(self) -> np.ndarray:
        """Read-only boolean adjacency matrix."""
        return self._adj

    @property
    def degrees(self) -> np.ndarray:
        """Read-only int64 degree vector."""
        return self._degrees

    def neighbors(self, i: int) -> np.ndarray:
        return self._neighbors[i]

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self._adj[i, j])

    @property
    def edge_count(self) -> int:
        return int(self._degrees.sum()) // 2

    def edges(self) -> Iterator[tuple[int, int]]:
        """Edges as (i, j) with i < j, in ascending order."""
        ii, jj = np.nonzero(np.triu(self._adj))
        return zip(ii.tolist(), jj.tolist())

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.labels == other.labels
            and np.array_equal(self._adj, other._adj)
        )

    def __hash__(self):
        raise TypeError("Graph is not hashable")

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edge_count})"


def degree_sequence(graph: Graph) -> np.ndarray:
    """Degree of each node (read-only int64 vector)."""
    return graph.degrees


def load_graph(text: str, n: int) -> Graph:
    """Parse an edge-list document: one "i j" pair per line, 0-based ids.

    Blank lines and lines starting with '#' are skipped. Duplicate edges
    (in either orientation) collapse to one; self-loops and out-of-range
    endpoints are errors, reported with their line number.
    """
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'i j', got {raw!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"line {lineno}: non-integer endpoint in {raw!r}") from None
        if i == j:
            raise GraphError(f"line {lineno}: self-loop at node {i}")
        if not (0 <= i < n and 0 <= j < n):
            raise GraphError(f"line {lineno}: endpoint outside 0..{n - 1} in {raw!r}")
        edges.append((i, j))
    return Graph(n, edges)


def dump_graph(graph: Graph, header: str | None = None) -> str:
    """Edge-list text for load_graph; optional '#' header comment line."""
    lines = [] if header is None else [f"# {header}"]
    lines.extend(f"{i} {j}" for i, j in graph.edges())
    return "\n".join(lines) + "\n"


def grid_graph(width: int, height: int, add_sink: bool = False) -> Graph:
    """4-neighbor lattice, row-major node ids (row * width + col).

    With add_sink, one extra node (id width*height, the highest id) is made
    adjacent to every boundary cell; it is the designated sink for classic
    sandpile runs.
    """
    if width < 1 or height < 1:
        raise GraphError(f"grid needs width, height >= 1, got {width}x{height}")
    edges = []
    for r in range(height):
        for c in range(width):
            node = r * width + c
            if c + 1 < width:
                edges.append((node, node + 1))
            if r + 1 < height:
                edges.append((node, node + width))
    if add_sink:
        sink = width * height
        for r in range(height):
            for c in range(width):
                if r in (0, height - 1) or c in (0, width - 1):
                    edges.append((r * width + c, sink))
        return Graph(width * height + 1, edges)
    return Graph(width * height, edges)


def grid_sink_id(width: int, height: int) -> int:
    """Node id of the sink appended by grid_graph(..., add_sink=True)."""
    return width * height


def random_graph(n: int, p: float, seed: int, require_connected: bool = False) -> Graph:
    """Erdos-Renyi G(n, p) drawn from the package PRNG.

    With require_connected, re-draws with derived sub-seeds until the graph
    is connected (every draw is deterministic in (n, p, seed)).
    """
    if not 0.0 <= p <= 1.0:
        raise GraphError(f"edge probability must be in [0, 1], got {p}")
    threshold = int(p * 2.0**64)
    for attempt in range(10_000):
        rng = SplitMix64(derive_seed(seed, attempt))
        edges = [
            (i, j) for i in range(n) for j in range(i + 1, n) if rng.next_u64() < threshold
        ]
        g = Graph(n, edges)
        if not require_connected or is_connected(g):
            return g
    raise GraphError(f"no connected G({n}, {p}) found in 10000 attempts from seed {seed}")


def connected_components(graph: Graph) -> list[list[int]]:
    """Components as sorted node lists, ordered by smallest member."""
    seen = [False] * graph.n
    components = []
    for root in range(graph.n):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        comp = [root]
        while queue:
            v = queue.popleft()
            for w in graph.neighbors(v):
                w = int(w)
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        components.append(sorted(comp))
    return components


def is_connected(graph: Graph) -> bool:
    return graph.n <= 1 or len(connected_components(graph)) == 1


def reaches_all(graph: Graph, sources: Iterable[int]) -> bool:
    """True when every node is reachable from at least one source node."""
    seen = [False] * graph.n
    queue = deque()
    for s in sources:
        if not seen[s]:
            seen[s] = True
            queue.append(s)
    while queue:
        v = queue.popleft()
        for w in graph.neighbors(v):
            w = int(w)
            if not seen[w]:
                seen[w] = True
                queue.append(w)
    return all(seen)
