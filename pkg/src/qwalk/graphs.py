"""Graph structures: multigraphs, arcs, bipartite graphs, duplications and search edge spaces.

Edges are kept in the order they were given; that order is the row/column
index space of every edge-indexed matrix built elsewhere in the package.
Arcs follow the convention ``e_1, ..., e_eps, e_1^-1, ..., e_eps^-1``.
A loop contributes 2 to the degree of its vertex and 2 to the diagonal of
the adjacency matrix.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ParseError, ValidationError

__all__ = [
    "Multigraph",
    "Arc",
    "ArcSet",
    "BipartiteGraph",
    "EdgeWeighting",
    "EdgeKind",
    "SearchInstance",
    "X",
    "Y",
    "arcs",
    "adjacency_matrix",
    "random_walk_matrix",
    "line_graph",
    "duplication",
    "duplication_mirror",
    "build_search_instance",
    "parse_graph",
    "parse_bipartite",
    "parse_weighting",
    "parse_amplitudes",
]

X = 0
Y = 1

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class Multigraph:
    """Undirected graph allowing parallel edges and loops."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValidationError("vertex count must be nonnegative")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        for k, (u, v) in enumerate(edges):
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValidationError(
                    f"edge {k} = ({u}, {v}) has an endpoint outside 0..{self.vertex_count - 1}"
                )
        object.__setattr__(self, "edges", edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def loop_count(self) -> int:
        return sum(1 for u, v in self.edges if u == v)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.vertex_count, dtype=int)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def incident_edges(self, v: int) -> list[int]:
        return [k for k, (a, b) in enumerate(self.edges) if v in (a, b)]

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.vertex_count

    def is_tree(self) -> bool:
        return self.is_connected() and self.edge_count == self.vertex_count - 1

    def regular_degree(self) -> int | None:
        """Common degree if every vertex has the same degree, else ``None``."""
        deg = self.degrees()
        if deg.size == 0 or np.any(deg != deg[0]):
            return None
        return int(deg[0])


class Arc(NamedTuple):
    origin: int
    terminus: int
    inverse: int


@dataclass(frozen=True)
class ArcSet:
    arcs: tuple[Arc, ...]

    def __len__(self) -> int:
        return len(self.arcs)

    def __iter__(self):
        return iter(self.arcs)

    def __getitem__(self, i: int) -> Arc:
        return self.arcs[i]


def arcs(g: Multigraph) -> ArcSet:
    """Symmetric arc set of ``g``; arc ``i`` and ``i + eps`` are mutual inverses.

    The two arcs of a loop are distinct even though they share origin and
    terminus.
    """
    eps = g.edge_count
    forward = [Arc(u, v, k + eps) for k, (u, v) in enumerate(g.edges)]
    backward = [Arc(v, u, k) for k, (u, v) in enumerate(g.edges)]
    return ArcSet(tuple(forward + backward))


def adjacency_matrix(g: Multigraph) -> np.ndarray:
    a = np.zeros((g.vertex_count, g.vertex_count))
    for u, v in g.edges:
        a[u, v] += 1.0
        a[v, u] += 1.0
    return a


def random_walk_matrix(g: Multigraph) -> np.ndarray:
    """Simple random walk ``T_uv = (multiplicity of uv) / deg u``."""
    deg = g.degrees()
    if np.any(deg == 0):
        bad = int(np.flatnonzero(deg == 0)[0])
        raise ValidationError(f"vertex {bad} has degree zero")
    return adjacency_matrix(g) / deg[:, None]


def line_graph(h: Multigraph) -> Multigraph:
    """Line graph; two edges sharing ``k`` endpoints are joined by ``k`` edges.

    A loop shares its single vertex with an incident edge once.
    """
    ends = [{u, v} for u, v in h.edges]
    edges = []
    for i in range(h.edge_count):
        for j in range(i + 1, h.edge_count):
            for _ in range(len(ends[i] & ends[j])):
                edges.append((i, j))
    return Multigraph(h.edge_count, tuple(edges))


@dataclass(frozen=True)
class BipartiteGraph:
    """A multigraph with a two-colouring; ``sides[v]`` is ``X`` or ``Y``."""

    graph: Multigraph
    sides: tuple[int, ...]
    _xi: dict = field(init=False, repr=False, compare=False)
    _yi: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        sides = tuple(int(s) for s in self.sides)
        if len(sides) != self.graph.vertex_count:
            raise ValidationError("side assignment must cover every vertex")
        if any(s not in (X, Y) for s in sides):
            raise ValidationError("sides must be X (0) or Y (1)")
        for k, (u, v) in enumerate(self.graph.edges):
            if sides[u] == sides[v]:
                raise ValidationError(f"edge {k} = ({u}, {v}) does not cross the bipartition")
        object.__setattr__(self, "sides", sides)
        xs = [v for v, s in enumerate(sides) if s == X]
        ys = [v for v, s in enumerate(sides) if s == Y]
        object.__setattr__(self, "_xi", {v: i for i, v in enumerate(xs)})
        object.__setattr__(self, "_yi", {v: i for i, v in enumerate(ys)})

    @classmethod
    def from_x_side(cls, graph: Multigraph, x_vertices: Sequence[int]) -> BipartiteGraph:
        xs = set(x_vertices)
        return cls(graph, tuple(X if v in xs else Y for v in range(graph.vertex_count)))

    @property
    def x_vertices(self) -> list[int]:
        return list(self._xi)

    @property
    def y_vertices(self) -> list[int]:
        return list(self._yi)

    @property
    def m(self) -> int:
        return len(self._xi)

    @property
    def n(self) -> int:
        return len(self._yi)

    @property
    def edge_count(self) -> int:
        return self.graph.edge_count

    def x_end(self, e: int) -> int:
        u, v = self.graph.edges[e]
        return u if self.sides[u] == X else v

    def y_end(self, e: int) -> int:
        u, v = self.graph.edges[e]
        return u if self.sides[u] == Y else v

    def x_index(self, v: int) -> int:
        """Column of X-vertex ``v`` in an edge-by-X matrix."""
        return self._xi[v]

    def y_index(self, v: int) -> int:
        return self._yi[v]


@dataclass(frozen=True)
class EdgeWeighting:
    """Probabilities ``p`` (read from the X end) and ``q`` (from the Y end) per edge."""

    p: tuple[float, ...]
    q: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(float(x) for x in self.p))
        object.__setattr__(self, "q", tuple(float(x) for x in self.q))
        if len(self.p) != len(self.q):
            raise ValidationError("p and q must have one value per edge")

    @classmethod
    def uniform(cls, bg: BipartiteGraph) -> EdgeWeighting:
        deg = bg.graph.degrees()
        p = [1.0 / deg[bg.x_end(e)] for e in range(bg.edge_count)]
        q = [1.0 / deg[bg.y_end(e)] for e in range(bg.edge_count)]
        return cls(tuple(p), tuple(q))

    def validate(self, bg: BipartiteGraph, tol: float = WEIGHT_TOL) -> None:
        if len(self.p) != bg.edge_count:
            raise ValidationError(
                f"weighting has {len(self.p)} entries but the graph has {bg.edge_count} edges"
            )
        values = np.array(self.p + self.q)
        if np.any(values < 0.0) or np.any(values > 1.0):
            raise ValidationError("edge probabilities must lie in [0, 1]")
        sx = np.zeros(bg.graph.vertex_count)
        sy = np.zeros(bg.graph.vertex_count)
        for e in range(bg.edge_count):
            sx[bg.x_end(e)] += self.p[e]
            sy[bg.y_end(e)] += self.q[e]
        for x in bg.x_vertices:
            if abs(sx[x] - 1.0) > tol:
                raise ValidationError(f"p sums to {sx[x]!r} at X-vertex {x}, expected 1")
        for y in bg.y_vertices:
            if abs(sy[y] - 1.0) > tol:
                raise ValidationError(f"q sums to {sy[y]!r} at Y-vertex {y}, expected 1")


def duplication(g: Multigraph) -> BipartiteGraph:
    """Bipartite double ``G_2`` on ``V + V'`` (copy ``v'`` is vertex ``n + v``).

    Each non-loop edge ``uv`` yields ``(u, v')`` then ``(v, u')``; a loop at
    ``u`` yields the single edge ``(u, u')``.
    """
    n = g.vertex_count
    edges = []
    for u, v in g.edges:
        edges.append((u, n + v))
        if u != v:
            edges.append((v, n + u))
    return BipartiteGraph(Multigraph(2 * n, tuple(edges)), tuple([X] * n + [Y] * n))


def duplication_mirror(g: Multigraph) -> tuple[int, ...]:
    """Index of the mirror image ``(v, u')`` of each duplication edge ``(u, v')``."""
    mirror = []
    k = 0
    for u, v in g.edges:
        if u == v:
            mirror.append(k)
            k += 1
        else:
            mirror.extend([k + 1, k])
            k += 2
    return tuple(mirror)


class EdgeKind(enum.Enum):
    ORDINARY = "ordinary"
    MARKED_INCIDENT = "marked-incident"
    MARKED_PAIR = "marked-pair"
    MATCHING = "matching"


@dataclass(frozen=True)
class SearchInstance:
    """Edge space ``E_M`` of the modified search walk with its rerouted weights.

    ``ends[e] = (v, w)`` says edge ``e`` joins ``v`` in ``V`` with ``w'`` in ``V'``.
    The first ``duplication.edge_count`` entries are the duplication edges in
    duplication order, followed by one matching edge ``(u, u')`` per marked
    vertex.
    """

    base: Multigraph
    duplication: BipartiteGraph
    weighting: EdgeWeighting
    marked: tuple[int, ...]
    ends: tuple[tuple[int, int], ...]
    kinds: tuple[EdgeKind, ...]
    p_mod: tuple[float, ...]
    q_mod: tuple[float, ...]

    @property
    def n(self) -> int:
        return self.base.vertex_count

    @property
    def m(self) -> int:
        return len(self.marked)

    @property
    def size(self) -> int:
        return len(self.ends)

    @property
    def duplication_size(self) -> int:
        return self.duplication.edge_count

    @property
    def r(self) -> int:
        return self.kinds.count(EdgeKind.ORDINARY)

    @property
    def s(self) -> int:
        """Edges from an unmarked vertex into a marked copy."""
        marked = set(self.marked)
        return sum(
            1
            for (v, w), kind in zip(self.ends, self.kinds)
            if kind is EdgeKind.MARKED_INCIDENT and v not in marked
        )

    @property
    def eps_prime(self) -> int:
        return self.r + 2 * self.s + self.m

    @property
    def marked_pair_edges(self) -> list[int]:
        return [e for e, kind in enumerate(self.kinds) if kind is EdgeKind.MARKED_PAIR]


def build_search_instance(
    g: Multigraph, w: EdgeWeighting, marked: Sequence[int]
) -> SearchInstance:
    """Assemble ``E_M = E(G_2) + [N_2]`` and the modified weights ``p'``, ``q'``."""
    marked = tuple(int(u) for u in marked)
    if not marked:
        raise ValidationError("the marked set must be nonempty")
    if len(set(marked)) != len(marked):
        raise ValidationError("marked vertices must be distinct")
    for u in marked:
        if not 0 <= u < g.vertex_count:
            raise ValidationError(f"marked vertex {u} is outside 0..{g.vertex_count - 1}")
    marked = tuple(sorted(marked))
    dup = duplication(g)
    w.validate(dup)
    n = g.vertex_count
    mset = set(marked)

    ends, kinds, p_mod, q_mod = [], [], [], []
    for e, (v, wp) in enumerate(dup.graph.edges):
        w_ = wp - n
        ends.append((v, w_))
        if v in mset and w_ in mset:
            kinds.append(EdgeKind.MARKED_PAIR)
        elif v in mset or w_ in mset:
            kinds.append(EdgeKind.MARKED_INCIDENT)
        else:
            kinds.append(EdgeKind.ORDINARY)
        p_mod.append(w.p[e] if v not in mset else 0.0)
        q_mod.append(w.q[e] if w_ not in mset else 0.0)
    for u in marked:
        ends.append((u, u))
        kinds.append(EdgeKind.MATCHING)
        p_mod.append(1.0)
        q_mod.append(1.0)

    return SearchInstance(
        base=g,
        duplication=dup,
        weighting=w,
        marked=marked,
        ends=tuple(ends),
        kinds=tuple(kinds),
        p_mod=tuple(p_mod),
        q_mod=tuple(q_mod),
    )


# ---------------------------------------------------------------------------
# text formats


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", lineno) from None


def _parse_body(text: str, bipartite: bool) -> tuple[Multigraph, list[int] | None]:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty document: expected a vertex count")
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 1:
        raise ParseError("first line must hold only the vertex count", lineno)
    count = _parse_int(parts[0], lineno)
    if count < 0:
        raise ParseError("vertex count must be nonnegative", lineno)
    body = lines[1:]
    x_side = None
    if body and body[0][1].startswith("X:"):
        lineno, line = body[0]
        x_side = [_parse_int(tok, lineno) for tok in line[2:].split()]
        body = body[1:]
    elif bipartite:
        raise ParseError("bipartite input needs an 'X: ...' line after the vertex count")
    edges = []
    for lineno, line in body:
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        u, v = (_parse_int(tok, lineno) for tok in parts)
        if not (0 <= u < count and 0 <= v < count):
            raise ValidationError(f"line {lineno}: endpoint out of range 0..{count - 1}")
        edges.append((u, v))
    return Multigraph(count, tuple(edges)), x_side


def parse_graph(text: str) -> Multigraph:
    """Parse an edge list: vertex count, then one ``u v`` pair per line.

    An ``X: ...`` header, if present, is accepted and ignored.
    """
    graph, _ = _parse_body(text, bipartite=False)
    return graph


def parse_bipartite(text: str) -> BipartiteGraph:
    graph, x_side = _parse_body(text, bipartite=True)
    for v in x_side:
        if not 0 <= v < graph.vertex_count:
            raise ValidationError(f"X-side vertex {v} out of range")
    return BipartiteGraph.from_x_side(graph, x_side)


def parse_weighting(text: str, edge_count: int | None = None) -> EdgeWeighting:
    """One ``p q`` line per edge, in edge order."""
    p, q = [], []
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'p q', got {line!r}", lineno)
        try:
            a, b = float(parts[0]), float(parts[1])
        except ValueError:
            raise ParseError(f"non-numeric weight in {line!r}", lineno) from None
        p.append(a)
        q.append(b)
    if edge_count is not None and len(p) != edge_count:
        raise ValidationError(f"weighting lists {len(p)} edges, graph has {edge_count}")
    return EdgeWeighting(tuple(p), tuple(q))


def parse_amplitudes(text: str, edge_count: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """One ``a b`` line per edge; entries are Python complex literals like ``0.5+0.5j``."""
    a, b = [], []
    for lineno, line in _content_lines(text):
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'a b', got {line!r}", lineno)
        try:
            a.append(complex(parts[0]))
            b.append(complex(parts[1]))
        except ValueError:
            raise ParseError(f"bad complex amplitude in {line!r}", lineno) from None
    if edge_count is not None and len(a) != edge_count:
        raise ValidationError(f"amplitude file lists {len(a)} edges, graph has {edge_count}")
    return np.array(a, dtype=complex), np.array(b, dtype=complex)
