"""Walk unitaries and their discriminant matrices.

Every walk here except the raw Grover matrix is a product of two reflections
``(2 B B* - I)(2 A A* - I)`` built from isometries ``A`` (``N x s``) and ``B``
(``N x t``). The discriminant ``A* B B* A`` is the small Hermitian matrix whose
spectrum determines the walk's. Each discriminant also has a combinatorial
two-path definition; those are implemented separately (``*_two_path``) and
used as cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InconsistencyError, ValidationError
from .graphs import (
    BipartiteGraph,
    EdgeKind,
    EdgeWeighting,
    Multigraph,
    SearchInstance,
    arcs,
)
from .linalg import is_hermitian, is_isometry

__all__ = [
    "WalkOperator",
    "Discriminant",
    "AmplitudeAssignment",
    "SearchOperators",
    "reflection",
    "reflection_walk",
    "grover_matrix",
    "grover_isometries",
    "grover_discriminant",
    "positive_support",
    "szegedy_isometries",
    "szegedy_walk",
    "discriminant_Ap",
    "discriminant_Aq",
    "ap_two_path",
    "aq_two_path",
    "sqw_isometries",
    "sqw_operators",
    "ahat_two_path",
    "tessellations",
    "search_isometries",
    "search_operators",
    "search_two_path",
    "search_case_formula",
    "detailed_balance",
    "check_walk",
    "check_discriminant",
]

UNITARY_TOL = 1e-9
CROSS_TOL = 1e-12


@dataclass(frozen=True)
class WalkOperator:
    """A walk unitary with the labels of its basis.

    ``factors`` holds ``(first, second)`` reflections with
    ``matrix = second @ first``; it is ``None`` for the Grover matrix.
    """

    matrix: np.ndarray
    kind: str
    basis: tuple
    factors: tuple[np.ndarray, np.ndarray] | None = None

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Discriminant:
    """``A* B B* A`` for isometries ``A`` (``N x s``) and ``B`` (``N x t``), shape ``s x s``."""

    matrix: np.ndarray
    kind: str
    N: int
    s: int
    t: int


def reflection(a: np.ndarray) -> np.ndarray:
    """``2 a a* - I`` for an isometry ``a``."""
    a = np.asarray(a)
    return 2.0 * (a @ a.conj().T) - np.eye(a.shape[0])


def reflection_walk(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(R_a, R_b, R_b R_a)``."""
    if a.shape[0] != b.shape[0]:
        raise ValidationError(f"isometries have {a.shape[0]} and {b.shape[0]} rows")
    ra = reflection(a)
    rb = reflection(b)
    return ra, rb, rb @ ra


def _discriminant(a: np.ndarray, b: np.ndarray, kind: str) -> Discriminant:
    tab = a.conj().T @ b
    mat = tab @ tab.conj().T
    return Discriminant(mat, kind, a.shape[0], a.shape[1], b.shape[1])


def _check_cross(product: np.ndarray, combinatorial: np.ndarray, what: str) -> None:
    err = float(np.max(np.abs(product - combinatorial), initial=0.0))
    if err > CROSS_TOL:
        raise InconsistencyError(f"{what}: matrix product and two-path sum differ by {err:.3e}")


# ---------------------------------------------------------------------------
# Grover walk


def _require_positive_degree(g: Multigraph) -> np.ndarray:
    deg = g.degrees()
    if np.any(deg == 0):
        raise ValidationError(f"vertex {int(np.flatnonzero(deg == 0)[0])} has degree zero")
    return deg


def grover_matrix(g: Multigraph) -> WalkOperator:
    """``U[e, f] = 2/deg t(f)`` when ``t(f) = o(e)``, minus 1 when ``f`` is ``e``'s inverse."""
    deg = _require_positive_degree(g)
    arc_set = arcs(g)
    origin = np.array([a.origin for a in arc_set])
    terminus = np.array([a.terminus for a in arc_set])
    inverse = np.array([a.inverse for a in arc_set])
    u = np.where(origin[:, None] == terminus[None, :], 2.0 / deg[terminus][None, :], 0.0)
    u[np.arange(len(arc_set)), inverse] -= 1.0
    return WalkOperator(u, "grover", tuple((a.origin, a.terminus) for a in arc_set))


def grover_isometries(g: Multigraph) -> tuple[np.ndarray, np.ndarray]:
    """Isometries ``(A, B)`` with ``grover_matrix(g) = (2BB* - I)(2AA* - I)``.

    ``A`` (``2eps x n``) spreads each vertex uniformly over the arcs ending
    there; ``B`` (``2eps x eps``) pairs each arc with its inverse, so
    ``2BB* - I`` is the flip-flop shift.
    """
    deg = _require_positive_degree(g)
    arc_set = arcs(g)
    eps = g.edge_count
    a = np.zeros((2 * eps, g.vertex_count))
    b = np.zeros((2 * eps, eps))
    for i, arc in enumerate(arc_set):
        a[i, arc.terminus] = 1.0 / np.sqrt(deg[arc.terminus])
        b[i, i % eps] = 1.0 / np.sqrt(2.0)
    return a, b


def grover_discriminant(g: Multigraph) -> Discriminant:
    """Vertex-side discriminant of the Grover walk, equal to ``(I + D^-1/2 A D^-1/2) / 2``."""
    a, b = grover_isometries(g)
    return _discriminant(a, b, "grover")


def positive_support(f: np.ndarray) -> np.ndarray:
    return (np.asarray(f) > 0).astype(float)


# ---------------------------------------------------------------------------
# Szegedy walk


def szegedy_isometries(bg: BipartiteGraph, w: EdgeWeighting) -> tuple[np.ndarray, np.ndarray]:
    """``K[e, x] = sqrt p(e)`` for ``x`` in ``e``; ``L[e, y] = sqrt q(e)`` likewise."""
    w.validate(bg)
    k = np.zeros((bg.edge_count, bg.m))
    l = np.zeros((bg.edge_count, bg.n))
    for e in range(bg.edge_count):
        k[e, bg.x_index(bg.x_end(e))] = np.sqrt(w.p[e])
        l[e, bg.y_index(bg.y_end(e))] = np.sqrt(w.q[e])
    return k, l


def szegedy_walk(k: np.ndarray, l: np.ndarray, basis: tuple = ()) -> WalkOperator:
    """``W = R_1 R_0`` with ``R_0 = 2KK^t - I`` and ``R_1 = 2LL^t - I``."""
    r0, r1, w = reflection_walk(k, l)
    return WalkOperator(w, "szegedy", basis or tuple(range(k.shape[0])), (r0, r1))


def discriminant_Ap(k: np.ndarray, l: np.ndarray) -> Discriminant:
    """``A_p = K^t L L^t K`` (``m x m``)."""
    return _discriminant(k, l, "A_p")


def discriminant_Aq(k: np.ndarray, l: np.ndarray) -> Discriminant:
    """``A_q = L^t K K^t L`` (``n x n``)."""
    return _discriminant(l, k, "A_q")


def _two_path_sum(bg: BipartiteGraph, weight, centre_side: str) -> np.ndarray:
    """Sum ``weight(e) * conj(weight(f))`` over ordered pairs sharing their centre vertex.

    ``centre_side='y'`` gives the X-by-X matrix (paths ``x - y - x'``),
    ``'x'`` the Y-by-Y matrix.
    """
    if centre_side == "y":
        end, centre, index, size = bg.x_end, bg.y_end, bg.x_index, bg.m
    else:
        end, centre, index, size = bg.y_end, bg.x_end, bg.y_index, bg.n
    out = np.zeros((size, size), dtype=complex)
    for e in range(bg.edge_count):
        for f in range(bg.edge_count):
            if centre(e) == centre(f):
                out[index(end(e)), index(end(f))] += weight(e) * np.conj(weight(f))
    return out


def ap_two_path(bg: BipartiteGraph, w: EdgeWeighting) -> np.ndarray:
    """``a_xx' = sum sqrt(p(e) q(e) p(f) q(f))`` over two-paths ``x -e- y -f- x'``."""
    return _two_path_sum(bg, lambda e: np.sqrt(w.p[e] * w.q[e]), "y").real


def aq_two_path(bg: BipartiteGraph, w: EdgeWeighting) -> np.ndarray:
    return _two_path_sum(bg, lambda e: np.sqrt(w.p[e] * w.q[e]), "x").real


# ---------------------------------------------------------------------------
# staggered walk on L(H)


@dataclass(frozen=True)
class AmplitudeAssignment:
    """Complex amplitudes ``a_e`` (X-star) and ``b_e`` (Y-star) per edge of the root graph."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=complex).ravel())
        object.__setattr__(self, "b", np.asarray(self.b, dtype=complex).ravel())

    @classmethod
    def from_weighting(cls, w: EdgeWeighting) -> AmplitudeAssignment:
        return cls(np.sqrt(np.array(w.p)), np.sqrt(np.array(w.q)))

    @classmethod
    def uniform(cls, h: BipartiteGraph) -> AmplitudeAssignment:
        return cls.from_weighting(EdgeWeighting.uniform(h))

    def validate(self, h: BipartiteGraph, tol: float = 1e-12) -> None:
        if self.a.size != h.edge_count or self.b.size != h.edge_count:
            raise ValidationError("need one (a, b) amplitude pair per edge of the root graph")
        sx = np.zeros(h.graph.vertex_count)
        sy = np.zeros(h.graph.vertex_count)
        for e in range(h.edge_count):
            sx[h.x_end(e)] += abs(self.a[e]) ** 2
            sy[h.y_end(e)] += abs(self.b[e]) ** 2
        for x in h.x_vertices:
            if abs(sx[x] - 1.0) > tol:
                raise ValidationError(f"|a|^2 sums to {sx[x]!r} around X-vertex {x}")
        for y in h.y_vertices:
            if abs(sy[y] - 1.0) > tol:
                raise ValidationError(f"|b|^2 sums to {sy[y]!r} around Y-vertex {y}")


def sqw_isometries(h: BipartiteGraph, amps: AmplitudeAssignment) -> tuple[np.ndarray, np.ndarray]:
    amps.validate(h)
    k = np.zeros((h.edge_count, h.m), dtype=complex)
    l = np.zeros((h.edge_count, h.n), dtype=complex)
    for e in range(h.edge_count):
        k[e, h.x_index(h.x_end(e))] = amps.a[e]
        l[e, h.y_index(h.y_end(e))] = amps.b[e]
    return k, l


def ahat_two_path(h: BipartiteGraph, amps: AmplitudeAssignment) -> np.ndarray:
    """``a_xx' = sum conj(a_e) b_e a_f conj(b_f)`` over two-paths ``x -e- y -f- x'``."""
    return _two_path_sum(h, lambda e: np.conj(amps.a[e]) * amps.b[e], "y")


def tessellations(h: BipartiteGraph) -> tuple[list[frozenset], list[frozenset]]:
    """Polygons of the two tessellations of ``L(h)``: the edge stars of X and of Y."""
    alpha = [frozenset(e for e in range(h.edge_count) if h.x_end(e) == x) for x in h.x_vertices]
    beta = [frozenset(e for e in range(h.edge_count) if h.y_end(e) == y) for y in h.y_vertices]
    return alpha, beta


def sqw_operators(
    h: BipartiteGraph, amps: AmplitudeAssignment, cross_check: bool = False
) -> tuple[WalkOperator, Discriminant]:
    """Staggered walk ``U = U_1 U_0`` on ``L(h)`` and its discriminant ``A-hat``.

    Vertex ``k`` of the walked graph is edge ``k`` of the root graph ``h``.
    """
    k, l = sqw_isometries(h, amps)
    u0, u1, u = reflection_walk(k, l)
    disc = _discriminant(k, l, "A_hat")
    if cross_check:
        _check_cross(disc.matrix, ahat_two_path(h, amps), "A-hat")
    return WalkOperator(u, "sqw", tuple(h.graph.edges), (u0, u1)), disc


# ---------------------------------------------------------------------------
# search walk


@dataclass(frozen=True)
class SearchOperators:
    walk: WalkOperator
    discriminant: Discriminant
    K: np.ndarray
    L: np.ndarray
    P: np.ndarray
    P_mod: np.ndarray
    P_M: np.ndarray
    unmarked: tuple[int, ...]


def search_isometries(si: SearchInstance) -> tuple[np.ndarray, np.ndarray]:
    """``K[e, v] = sqrt p'(e)`` if ``V(e) = v``; ``L[e, v] = sqrt q'(e)`` if ``V'(e) = v'``."""
    k = np.zeros((si.size, si.n))
    l = np.zeros((si.size, si.n))
    for e, (v, w) in enumerate(si.ends):
        k[e, v] = np.sqrt(si.p_mod[e])
        l[e, w] = np.sqrt(si.q_mod[e])
    return k, l


def _transition_2n(n: int, ends, p, q) -> np.ndarray:
    out = np.zeros((2 * n, 2 * n))
    for (v, w), pe, qe in zip(ends, p, q):
        out[v, n + w] += pe
        out[n + w, v] += qe
    return out


def search_two_path(si: SearchInstance) -> np.ndarray:
    """``(A'_p)_uv``: sum of ``sqrt(p'(e) q'(e) p'(f) q'(f))`` over ``u -e- w' -f- v`` in ``E_M``."""
    out = np.zeros((si.n, si.n))
    for e, (u, w) in enumerate(si.ends):
        for f, (v, w2) in enumerate(si.ends):
            if w == w2:
                out[u, v] += np.sqrt(si.p_mod[e] * si.q_mod[e] * si.p_mod[f] * si.q_mod[f])
    return out


def search_case_formula(si: SearchInstance) -> np.ndarray:
    """``A'_p`` from the original weights: two-paths avoiding ``M`` on the unmarked
    block, the identity on the marked block, zero elsewhere."""
    marked = set(si.marked)
    w = si.weighting
    dup_ends = si.ends[: si.duplication_size]
    out = np.zeros((si.n, si.n))
    for e, (u, x) in enumerate(dup_ends):
        for f, (v, x2) in enumerate(dup_ends):
            if x == x2 and not ({u, v, x} & marked):
                out[u, v] += np.sqrt(w.p[e] * w.q[e] * w.p[f] * w.q[f])
    for u in marked:
        out[u, u] = 1.0
    return out


def search_operators(si: SearchInstance, cross_check: bool = False) -> SearchOperators:
    """Modified walk ``W' = R'_1 R'_0`` on ``E_M`` with its discriminant and transition matrices.

    ``P`` and ``P_mod`` are ``2n x 2n`` with ``V`` first and ``V'`` second.
    ``P_M`` is the unmarked block of ``P``'s ``V -> V'`` part, indexed by
    ``unmarked`` in ascending order.
    """
    k, l = search_isometries(si)
    r0, r1, w = reflection_walk(k, l)
    disc = _discriminant(k, l, "A'_p")
    if cross_check:
        _check_cross(disc.matrix, search_two_path(si), "A'_p")
        _check_cross(disc.matrix, search_case_formula(si), "A'_p case structure")

    n = si.n
    dup = si.duplication_size
    p_full = _transition_2n(n, si.ends[:dup], si.weighting.p, si.weighting.q)
    p_mod = _transition_2n(n, si.ends, si.p_mod, si.q_mod)
    unmarked = tuple(v for v in range(n) if v not in set(si.marked))
    idx = np.array(unmarked, dtype=int)
    p_m = p_full[np.ix_(idx, n + idx)] if idx.size else np.zeros((0, 0))
    walk = WalkOperator(w, "search", tuple(si.ends), (r0, r1))
    return SearchOperators(walk, disc, k, l, p_full, p_mod, p_m, unmarked)


def detailed_balance(si: SearchInstance, ops: SearchOperators | None = None) -> np.ndarray | None:
    """Solve ``p'(e) pi(V(e)) = q'(e) pi(V'(e))`` over edges with both ends unmarked.

    Returns ``pi`` on ``V + V'`` (length ``2n``, copies second, 1 on marked
    vertices) or ``None`` when no positive solution exists. Each connected
    piece of the constraint graph is scaled so its lowest-numbered vertex has
    ``pi = 1``. When a solution exists the similarity
    ``A'_p = D (P_M Q_M + I_marked) D^-1`` is verified, ``Q_M`` being the
    ``V' -> V`` unmarked block (equal to ``P_M`` for mirror-symmetric weights).
    """
    n = si.n
    marked = set(si.marked)
    constraints = []
    for e, kind in enumerate(si.kinds):
        if kind is not EdgeKind.ORDINARY:
            continue
        v, w = si.ends[e]
        pe, qe = si.p_mod[e], si.q_mod[e]
        if pe == 0.0 and qe == 0.0:
            continue
        if pe == 0.0 or qe == 0.0:
            return None
        constraints.append((v, n + w, pe, qe))

    adj: dict[int, list[tuple[int, float]]] = {}
    for a, b, pe, qe in constraints:
        adj.setdefault(a, []).append((b, pe / qe))
        adj.setdefault(b, []).append((a, qe / pe))

    pi = np.ones(2 * n)
    seen = set()
    for root in sorted(adj):
        if root in seen:
            continue
        seen.add(root)
        stack = [root]
        while stack:
            a = stack.pop()
            for b, ratio in adj[a]:
                if b not in seen:
                    pi[b] = pi[a] * ratio
                    seen.add(b)
                    stack.append(b)
    for a, b, pe, qe in constraints:
        lhs, rhs = pe * pi[a], qe * pi[b]
        if abs(lhs - rhs) > 1e-9 * max(lhs, rhs):
            return None

    ops = ops or search_operators(si)
    unmarked = np.array([v for v in range(n) if v not in marked], dtype=int)
    q_m = ops.P[np.ix_(n + unmarked, unmarked)]
    squared = np.eye(n)
    squared[np.ix_(unmarked, unmarked)] = ops.P_M @ q_m
    d = np.ones(n)
    d[unmarked] = np.sqrt(pi[unmarked])
    similar = d[:, None] * squared / d[None, :]
    err = float(np.max(np.abs(similar - ops.discriminant.matrix), initial=0.0))
    if err > 1e-9:
        raise InconsistencyError(f"detailed balance holds but the similarity is off by {err:.3e}")
    return pi


def check_walk(op: WalkOperator, tol: float = UNITARY_TOL) -> None:
    """Raise if the walk is not unitary or a factor is not a Hermitian involution."""
    if not is_isometry(op.matrix, tol):
        raise InconsistencyError(f"{op.kind} walk is not unitary")
    for r in op.factors or ():
        if not is_hermitian(r, tol) or np.max(np.abs(r @ r - np.eye(r.shape[0]))) > tol:
            raise InconsistencyError(f"{op.kind} reflection is not a Hermitian involution")


def check_discriminant(d: Discriminant, tol: float = UNITARY_TOL) -> None:
    if not is_hermitian(d.matrix, tol):
        raise InconsistencyError(f"{d.kind} discriminant is not Hermitian")


def combine(parts: Sequence[np.ndarray]) -> np.ndarray:
    """Block-diagonal sum."""
    size = sum(p.shape[0] for p in parts)
    out = np.zeros((size, size), dtype=np.result_type(*parts) if parts else float)
    i = 0
    for p in parts:
        j = i + p.shape[0]
        out[i:j, i:j] = p
        i = j
    return out
