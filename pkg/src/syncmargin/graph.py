"""Weighted undirected graphs with a designated subset of stochastic edges.

Nodes are integers 0..n-1. Every edge carries a nominal weight mu and a
perturbation variance sigma2; sigma2 > 0 marks the edge as stochastic.
Generators enforce connectivity (retrying with fresh seed streams), since
downstream spectral quantities require lambda_2 > 0. Graphs produced by
other means (e.g. complement of a complete graph) may be disconnected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

DEFAULT_RETRY_BUDGET = 100


class GraphGenerationError(RuntimeError):
    """Random generation failed, e.g. no connected graph within the retry budget."""


@dataclass(frozen=True)
class Edge:
    """Undirected edge i-j in canonical order i < j.

    mu is the nominal weight (> 0); sigma2 the perturbation variance
    (>= 0, zero means the edge is deterministic).
    """

    i: int
    j: int
    mu: float = 1.0
    sigma2: float = 0.0

    def __post_init__(self):
        if self.i == self.j:
            raise ValueError(f"self-loop at node {self.i}")
        if not self.i < self.j:
            raise ValueError(f"edge ({self.i},{self.j}) not in canonical order i < j")
        if self.i < 0:
            raise ValueError(f"negative node index {self.i}")
        if not self.mu > 0:
            raise ValueError(f"edge ({self.i},{self.j}) has non-positive weight {self.mu}")
        if self.sigma2 < 0:
            raise ValueError(f"edge ({self.i},{self.j}) has negative variance {self.sigma2}")


@dataclass(frozen=True)
class NetworkGraph:
    n_nodes: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n_nodes < 2:
            raise ValueError(f"need at least 2 nodes, got {self.n_nodes}")
        object.__setattr__(self, "edges", tuple(self.edges))
        seen = set()
        for e in self.edges:
            if e.j >= self.n_nodes:
                raise ValueError(f"edge ({e.i},{e.j}) out of range for {self.n_nodes} nodes")
            if (e.i, e.j) in seen:
                raise ValueError(f"duplicate edge ({e.i},{e.j})")
            seen.add((e.i, e.j))

    @property
    def uncertain_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.sigma2 > 0)

    @property
    def deterministic_edges(self) -> tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.sigma2 == 0)

    def degrees(self) -> np.ndarray:
        """Unweighted node degrees."""
        deg = np.zeros(self.n_nodes, dtype=np.int64)
        for e in self.edges:
            deg[e.i] += 1
            deg[e.j] += 1
        return deg


@dataclass(frozen=True)
class LaplacianSplit:
    """Nominal Laplacian L and its deterministic / uncertain edge parts.

    L = L_D + L_U entrywise (same arithmetic); all three symmetric PSD
    with zero row sums.
    """

    L: np.ndarray
    L_D: np.ndarray
    L_U: np.ndarray


def is_connected(g: NetworkGraph) -> bool:
    """Breadth-first reachability from node 0 over all edges."""
    adj: list[list[int]] = [[] for _ in range(g.n_nodes)]
    for e in g.edges:
        adj[e.i].append(e.j)
        adj[e.j].append(e.i)
    seen = np.zeros(g.n_nodes, dtype=bool)
    seen[0] = True
    stack = [0]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    return bool(seen.all())


def ring_lattice(n: int, k: int) -> NetworkGraph:
    """Ring of n nodes, each joined to its k nearest neighbours per side.

    All weights are 1 and deterministic; the result has exactly k*n edges
    and is vertex-transitive with degree 2k.
    """
    if n < 3:
        raise ValueError(f"ring lattice needs n >= 3, got {n}")
    if not 1 <= k <= (n - 1) // 2:
        raise ValueError(f"neighbour count k={k} outside [1, (n-1)//2] for n={n}")
    edges = []
    for i in range(n):
        for m in range(1, k + 1):
            j = (i + m) % n
            edges.append(Edge(min(i, j), max(i, j)))
    edges.sort(key=lambda e: (e.i, e.j))
    return NetworkGraph(n, tuple(edges))


def _attempt_rng(rng_seed: int, attempt: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(rng_seed, spawn_key=(attempt,)))


def erdos_renyi(
    n: int, p: float, rng_seed: int, retry_budget: int = DEFAULT_RETRY_BUDGET
) -> NetworkGraph:
    """Erdos-Renyi graph: each unordered pair joined independently with probability p.

    Disconnected draws are rejected and regenerated from a fresh seed
    stream, up to retry_budget attempts.

    Raises:
        GraphGenerationError: if no connected draw appears within the budget.
    """
    if n < 2:
        raise ValueError(f"need at least 2 nodes, got {n}")
    if not 0 < p <= 1:
        raise ValueError(f"connection probability must be in (0, 1], got {p}")
    iu, ju = np.triu_indices(n, k=1)
    for attempt in range(retry_budget):
        rng = _attempt_rng(rng_seed, attempt)
        mask = rng.random(iu.size) < p
        edges = tuple(Edge(int(a), int(b)) for a, b in zip(iu[mask], ju[mask]))
        g = NetworkGraph(n, edges)
        if is_connected(g):
            return g
    raise GraphGenerationError(
        f"no connected Erdos-Renyi draw for n={n}, p={p} in {retry_budget} attempts"
    )


def watts_strogatz(
    n: int, k: int, p: float, rng_seed: int, retry_budget: int = DEFAULT_RETRY_BUDGET
) -> NetworkGraph:
    """Small-world rewiring of ring_lattice(n, k).

    Each lattice edge (i, i+m) has its far endpoint rewired with
    probability p to a uniformly random node, avoiding self-loops and
    duplicate edges (edge kept when no valid target exists). Edge count
    k*n is preserved. Connectivity is enforced as in erdos_renyi.
    """
    if not 0 <= p <= 1:
        raise ValueError(f"rewiring probability must be in [0, 1], got {p}")
    base = ring_lattice(n, k)  # validates n, k
    if p == 0:
        return base
    for attempt in range(retry_budget):
        rng = _attempt_rng(rng_seed, attempt)
        neighbours: list[set[int]] = [set() for _ in range(n)]
        for e in base.edges:
            neighbours[e.i].add(e.j)
            neighbours[e.j].add(e.i)
        for i in range(n):
            for m in range(1, k + 1):
                j = (i + m) % n
                if rng.random() >= p:
                    continue
                candidates = [t for t in range(n) if t != i and t not in neighbours[i]]
                if not candidates:
                    continue
                t = int(candidates[rng.integers(len(candidates))])
                neighbours[i].discard(j)
                neighbours[j].discard(i)
                neighbours[i].add(t)
                neighbours[t].add(i)
        edges = tuple(
            Edge(i, j) for i in range(n) for j in sorted(neighbours[i]) if i < j
        )
        g = NetworkGraph(n, edges)
        if is_connected(g):
            return g
    raise GraphGenerationError(
        f"no connected small-world draw for n={n}, k={k}, p={p} in {retry_budget} attempts"
    )


def designate_uncertain(
    g: NetworkGraph, fraction: float, cod: float, rng_seed: int
) -> NetworkGraph:
    """Mark a uniform random subset of ceil(fraction*|E|) edges as stochastic.

    Each chosen edge gets sigma2 = cod * mu, so its variance-to-mean ratio
    equals cod exactly; all other edges become deterministic. Node count,
    edge set and weights are unchanged.
    """
    if not 0 <= fraction <= 1:
        raise ValueError(f"fraction must be in [0, 1], got {fraction}")
    if cod < 0:
        raise ValueError(f"coefficient of dispersion must be >= 0, got {cod}")
    n_uncertain = math.ceil(fraction * len(g.edges))
    rng = np.random.default_rng(np.random.SeedSequence(rng_seed))
    chosen = set(rng.choice(len(g.edges), size=n_uncertain, replace=False).tolist())
    edges = tuple(
        replace(e, sigma2=cod * e.mu if idx in chosen else 0.0)
        for idx, e in enumerate(g.edges)
    )
    return NetworkGraph(g.n_nodes, edges)


def laplacian_split(g: NetworkGraph) -> LaplacianSplit:
    """Assemble the nominal Laplacian and its deterministic/uncertain parts."""
    n = g.n_nodes
    L_D = np.zeros((n, n))
    L_U = np.zeros((n, n))
    for e in g.edges:
        M = L_U if e.sigma2 > 0 else L_D
        M[e.i, e.i] += e.mu
        M[e.j, e.j] += e.mu
        M[e.i, e.j] -= e.mu
        M[e.j, e.i] -= e.mu
    return LaplacianSplit(L=L_D + L_U, L_D=L_D, L_U=L_U)


def complement(g: NetworkGraph) -> NetworkGraph:
    """Complement graph on the same nodes; defined for unit weights only.

    The result may be disconnected (e.g. complement of a complete graph
    is empty); callers that need lambda_2 > 0 must check.
    """
    for e in g.edges:
        if e.mu != 1.0:
            raise ValueError(
                f"complement supports unit weights only, edge ({e.i},{e.j}) has mu={e.mu}"
            )
    present = {(e.i, e.j) for e in g.edges}
    edges = tuple(
        Edge(i, j)
        for i in range(g.n_nodes)
        for j in range(i + 1, g.n_nodes)
        if (i, j) not in present
    )
    return NetworkGraph(g.n_nodes, edges)


def write_graph(g: NetworkGraph, path) -> None:
    """Write the line format `nodes N` then one `i j mu sigma2` line per edge."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"nodes {g.n_nodes}\n")
        for e in g.edges:
            fh.write(f"{e.i} {e.j} {e.mu:.17g} {e.sigma2:.17g}\n")


def read_graph(path) -> NetworkGraph:
    """Inverse of write_graph; lossless for weights at 17 significant digits."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2 or header[0] != "nodes":
            raise ValueError(f"expected header 'nodes N', got {header!r}")
        n = int(header[1])
        edges = []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 4:
                raise ValueError(f"line {lineno}: expected 'i j mu sigma2', got {line!r}")
            edges.append(
                Edge(int(parts[0]), int(parts[1]), float(parts[2]), float(parts[3]))
            )
    return NetworkGraph(n, tuple(edges))


def max_cod(g: NetworkGraph) -> float:
    """Largest variance-to-mean ratio over stochastic edges; 0 if none."""
    ratios = [e.sigma2 / e.mu for e in g.uncertain_edges]
    return max(ratios, default=0.0)
