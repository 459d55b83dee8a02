"""Bundled test graphs and random input generators.

Every graph has at most 8 vertices. Random generators take a
``numpy.random.Generator`` so results are reproducible under a seed.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .errors import NumericalError
from .graphs import BipartiteGraph, EdgeWeighting, Multigraph, duplication
from .operators import AmplitudeAssignment


def complete(n: int) -> Multigraph:
    return Multigraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def cycle(n: int) -> Multigraph:
    return Multigraph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Multigraph:
    return Multigraph(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves: int) -> Multigraph:
    return Multigraph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite(a: int, b: int) -> BipartiteGraph:
    g = Multigraph(a + b, [(i, a + j) for i in range(a) for j in range(b)])
    return BipartiteGraph.from_x_side(g, range(a))


def cube() -> Multigraph:
    edges = [(v, v ^ (1 << k)) for v in range(8) for k in range(3) if v < v ^ (1 << k)]
    return Multigraph(8, edges)


def graphs() -> dict[str, Multigraph]:
    """Connected corpus members: trees, cycles, complete graphs, the cube, multigraphs."""
    return {
        "P2": path(2),
        "P4": path(4),
        "star3": star(3),
        "spider": Multigraph(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]),
        "C3": cycle(3),
        "C4": cycle(4),
        "C5": cycle(5),
        "C6": cycle(6),
        "C8": cycle(8),
        "K4": complete(4),
        "K5": complete(5),
        "K6": complete(6),
        "cube": cube(),
        "petal": Multigraph(3, [(0, 1), (1, 2), (2, 0), (0, 0)]),
        "double-edge": Multigraph(2, [(0, 1), (0, 1)]),
        "looped-path": Multigraph(3, [(0, 1), (1, 2), (1, 1), (2, 2)]),
        "multi": Multigraph(4, [(0, 1), (0, 1), (1, 2), (2, 3), (3, 0), (2, 2)]),
        "house": Multigraph(5, [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4)]),
    }


def regular_graphs() -> dict[str, Multigraph]:
    return {k: g for k, g in graphs().items() if g.regular_degree() is not None and g.regular_degree() >= 2}


def bipartition(g: Multigraph) -> BipartiteGraph | None:
    """Two-colour ``g`` by breadth-first search; ``None`` if it has an odd cycle or a loop."""
    colour = [-1] * g.vertex_count
    nbrs: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for u, v in g.edges:
        if u == v:
            return None
        nbrs[u].append(v)
        nbrs[v].append(u)
    for root in range(g.vertex_count):
        if colour[root] >= 0:
            continue
        colour[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in nbrs[u]:
                if colour[v] < 0:
                    colour[v] = 1 - colour[u]
                    queue.append(v)
                elif colour[v] == colour[u]:
                    return None
    return BipartiteGraph.from_x_side(g, [v for v in range(g.vertex_count) if colour[v] == 0])


def bipartite_graphs() -> dict[str, BipartiteGraph]:
    out = {k: bg for k, g in graphs().items() if (bg := bipartition(g)) is not None}
    out["K22"] = complete_bipartite(2, 2)
    out["K23"] = complete_bipartite(2, 3)
    out["K13-centre-X"] = complete_bipartite(1, 3)
    out["K13-leaves-X"] = BipartiteGraph.from_x_side(star(3), [1, 2, 3])
    return out


def search_cases() -> dict[str, tuple[Multigraph, list[int]]]:
    """Graphs with marked sets covering trees, ``F_2`` non-empty and loops."""
    return {
        "K3-one": (complete(3), [2]),
        "K3-two": (complete(3), [1, 2]),
        "K3-all": (complete(3), [0, 1, 2]),
        "P2-one": (path(2), [1]),
        "P4-one": (path(4), [0]),
        "P4-two": (path(4), [0, 3]),
        "star3-centre": (star(3), [0]),
        "C4-one": (cycle(4), [1]),
        "K4-adjacent": (complete(4), [0, 1]),
        "cube-one": (cube(), [5]),
        "petal-one": (graphs()["petal"], [1]),
        "looped-path": (graphs()["looped-path"], [0]),
        "multi-two": (graphs()["multi"], [1, 2]),
    }


# ---------------------------------------------------------------------------
# random inputs


def random_isometry(N: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Orthonormal columns from the QR factorisation of a complex Gaussian matrix."""
    z = rng.normal(size=(N, k)) + 1j * rng.normal(size=(N, k))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_weighting(bg: BipartiteGraph, rng: np.random.Generator) -> EdgeWeighting:
    """Dirichlet-distributed ``p`` around each X vertex and ``q`` around each Y vertex."""
    p = np.zeros(bg.edge_count)
    q = np.zeros(bg.edge_count)
    for v in range(bg.graph.vertex_count):
        star_edges = bg.graph.incident_edges(v)
        if not star_edges:
            continue
        share = rng.dirichlet(np.ones(len(star_edges)))
        target = p if v in bg.x_vertices else q
        target[star_edges] = share
    return EdgeWeighting(p, q)


def random_amplitudes(h: BipartiteGraph, rng: np.random.Generator) -> AmplitudeAssignment:
    """Random phases on the square roots of a random weighting."""
    w = random_weighting(h, rng)
    phase_a = np.exp(2j * np.pi * rng.uniform(size=h.edge_count))
    phase_b = np.exp(2j * np.pi * rng.uniform(size=h.edge_count))
    return AmplitudeAssignment(np.sqrt(w.p) * phase_a, np.sqrt(w.q) * phase_b)


def random_symmetric_weighting(g: Multigraph, rng: np.random.Generator, iters: int = 5000) -> EdgeWeighting:
    """Weighting on the duplication with ``p = q`` and a symmetric ``P``.

    Random positive edge weights are scaled by symmetric Sinkhorn iteration
    until the weighted adjacency matrix is doubly stochastic. Graphs where no
    positive scaling exists (trees other than a single edge, for instance)
    raise :class:`NumericalError`.
    """
    raw = rng.uniform(0.5, 2.0, size=g.edge_count)
    u = np.array([e[0] for e in g.edges])
    v = np.array([e[1] for e in g.edges])
    x = np.ones(g.vertex_count)
    for _ in range(iters):
        if not np.all(np.isfinite(x)) or np.any(x <= 0):
            break
        row = np.zeros(g.vertex_count)
        np.add.at(row, u, raw * x[v])
        np.add.at(row, v, np.where(u == v, 0.0, raw * x[u]))
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            x = np.sqrt(x / row)
        sums = np.zeros(g.vertex_count)
        with np.errstate(invalid="ignore", over="ignore"):
            np.add.at(sums, u, raw * x[u] * x[v])
            np.add.at(sums, v, np.where(u == v, 0.0, raw * x[u] * x[v]))
        if np.max(np.abs(sums - 1.0)) < 1e-14:
            break
    else:
        raise NumericalError("symmetric scaling did not converge")
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise NumericalError("symmetric scaling diverged")
    scaled = raw * x[u] * x[v]
    weights = []
    for e, (a, b) in enumerate(g.edges):
        weights += [scaled[e]] if a == b else [scaled[e], scaled[e]]
    w = np.array(weights)
    result = EdgeWeighting(w, w.copy())
    result.validate(duplication(g), tol=1e-12)
    return result
