"""Spectra of reflection-product walks from their discriminants.

The engine is :func:`lift_spectrum`. Given the ascending eigenvalues
``lambda_1 <= ... <= lambda_t`` of the ``t x t`` discriminant of a walk
``U = (2BB* - I)(2AA* - I)`` on ``C^N`` (``A`` is ``N x s``), the spectrum of
``U`` is

* ``+1`` with multiplicity ``|N - s - t|``,
* ``-1`` with multiplicity ``|t - s|``,
* ``exp(+-2i arccos sqrt(lambda_j))`` for ``j`` in ``max(1, t-s+1) .. min(t, N-s)``.

Discriminant eigenvalues outside that window are forced to be 0 (below) or 1
(above); their absence means the discriminant is wrong, which is reported as
an :class:`~qwalk.errors.InconsistencyError`.

Each ``*_spectrum`` function returns the lifted report and, by default, the
direct eigendecomposition of the walk matrix together with the comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InconsistencyError, ValidationError
from .graphs import BipartiteGraph, EdgeWeighting, Multigraph, SearchInstance, adjacency_matrix, random_walk_matrix
from .linalg import (
    CLUSTER_TOL,
    MatchReport,
    cluster,
    determinant,
    eig_general,
    eig_hermitian,
    is_isometry,
    multiset_equal,
)
from .operators import (
    AmplitudeAssignment,
    WalkOperator,
    discriminant_Ap,
    discriminant_Aq,
    grover_discriminant,
    grover_matrix,
    positive_support,
    reflection_walk,
    search_operators,
    sqw_operators,
    szegedy_isometries,
    szegedy_walk,
)

SNAP_TOL = 1e-7
ROUNDOFF = 1e-13
MATCH_TOL = 1e-6


@dataclass(frozen=True)
class SpectrumReport:
    """An eigenvalue multiset of an ``N x N`` walk and where it came from.

    Attributes:
        values: all ``N`` eigenvalues.
        provenance: ``"formula"`` (lifted) or ``"direct"`` (eigensolver).
        N, s, t: isometry shapes used by the lift (``s``/``t`` are ``None``
            for direct reports).
        plus_one_multiplicity, minus_one_multiplicity: the ``+-1`` counts
            contributed by the dimension prefactors.
        lifted_pairs: ``(lambda, exp(2i arccos sqrt(lambda)))`` per lifted
            discriminant eigenvalue; the partner is the conjugate.
        discriminant: the discriminant eigenvalues the lift started from.
        branch: ``"N<s+t"`` when forced ones are cancelled, else ``"N>=s+t"``.
        direct: the direct report when a cross-check was run.
        match: comparison of formula and direct values.
    """

    values: np.ndarray
    provenance: str
    N: int
    s: int | None = None
    t: int | None = None
    plus_one_multiplicity: int = 0
    minus_one_multiplicity: int = 0
    lifted_pairs: tuple = ()
    discriminant: np.ndarray = field(default_factory=lambda: np.zeros(0))
    branch: str = ""
    direct: SpectrumReport | None = field(default=None, repr=False)
    match: MatchReport | None = field(default=None, repr=False)

    def clusters(self, tol: float = CLUSTER_TOL) -> list[tuple[complex, int]]:
        return cluster(self.values, tol)

    @property
    def agrees(self) -> bool:
        return self.match is not None and self.match.equal


def count_identity(N: int, s: int, t: int) -> int:
    """``|N-(s+t)| + |t-s| + 2(min(t, N-s) - max(0, t-s))``; equals ``N`` whenever ``N >= s, t``."""
    return abs(N - s - t) + abs(t - s) + 2 * (min(t, N - s) - max(0, t - s))


def lift_spectrum(disc_eigs, N: int, s: int, t: int, tol: float = SNAP_TOL) -> SpectrumReport:
    """Spectrum of ``(2BB* - I)(2AA* - I)`` from the ``t`` eigenvalues of ``B*A A*B``.

    Raises:
        ValidationError: wrong number of eigenvalues or impossible shapes.
        InconsistencyError: a forced 0 or 1 eigenvalue is missing.
    """
    lam = np.sort(np.real(np.asarray(disc_eigs, dtype=complex)).ravel())
    if lam.size != t:
        raise ValidationError(f"expected {t} discriminant eigenvalues, got {lam.size}")
    if min(N, s, t) < 0 or s > N or t > N:
        raise ValidationError(f"isometry shapes impossible: N={N}, s={s}, t={t}")
    if count_identity(N, s, t) != N:
        raise InconsistencyError(f"multiplicity count fails for N={N}, s={s}, t={t}")
    lam = np.clip(lam, 0.0, 1.0)

    # Only the forced entries are snapped. A genuine eigenvalue d away from 0
    # or 1 moves its lifted pair by about sqrt(d), so snapping it would cost
    # far more accuracy than the tolerance suggests. Values within rounding
    # distance of 0 or 1 are still snapped, since there the computed value
    # carries no information beyond its limit.
    lo, hi = max(0, t - s), min(t, N - s)
    if np.any(lam[:lo] > tol):
        raise InconsistencyError(f"t - s = {t - s} discriminant eigenvalues should vanish: {lam[:lo]}")
    if np.any(lam[hi:] < 1.0 - tol):
        raise InconsistencyError(f"s + t - N = {t - hi} discriminant eigenvalues should equal 1: {lam[hi:]}")
    lam[:lo] = 0.0
    lam[hi:] = 1.0
    lam[lam <= ROUNDOFF] = 0.0
    lam[lam >= 1.0 - ROUNDOFF] = 1.0

    plus = abs(N - s - t)
    minus = abs(t - s)
    pairs = []
    values = [1.0 + 0j] * plus + [-1.0 + 0j] * minus
    for x in lam[lo:hi]:
        theta = math.acos(min(1.0, math.sqrt(x)))
        alpha = complex(math.cos(2 * theta), math.sin(2 * theta))
        pairs.append((float(x), alpha))
        values += [alpha, alpha.conjugate()]
    return SpectrumReport(
        values=np.array(values, dtype=complex),
        provenance="formula",
        N=N,
        s=s,
        t=t,
        plus_one_multiplicity=plus,
        minus_one_multiplicity=minus,
        lifted_pairs=tuple(pairs),
        discriminant=lam,
        branch="N<s+t" if N < s + t else "N>=s+t",
    )


def direct_spectrum(matrix: np.ndarray) -> SpectrumReport:
    ms = eig_general(matrix)
    return SpectrumReport(ms.values, "direct", matrix.shape[0])


def _with_direct(report: SpectrumReport, matrix: np.ndarray, tol: float) -> SpectrumReport:
    direct = direct_spectrum(matrix)
    return replace(report, direct=direct, match=multiset_equal(report.values, direct.values, tol))


def _finish(report: SpectrumReport, op: WalkOperator, direct: bool, tol: float) -> SpectrumReport:
    return _with_direct(report, op.matrix, tol) if direct else report


# ---------------------------------------------------------------------------
# generic isometry pairs


def _sample_points(rng: np.random.Generator, samples: int, radius: float = 0.9) -> np.ndarray:
    """Complex points with ``|u| <= radius``; at that radius they stay 0.1 clear of +-1."""
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, samples))
    phi = rng.uniform(0.0, 2 * np.pi, samples)
    return r * np.exp(1j * phi)


def _rel(lhs: complex, rhs: complex) -> float:
    scale = max(abs(lhs), abs(rhs))
    return 0.0 if scale == 0.0 else abs(lhs - rhs) / scale


def key_identity_check(a: np.ndarray, b: np.ndarray, samples: int = 20, rng=None) -> float:
    """Max relative residual of both determinant factorisations of ``det(I - uU)``.

    ``U = (2BB* - I)(2AA* - I)``. The ``t``-side form uses ``B*A A*B``, the
    ``s``-side form ``A*B B*A``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if not (is_isometry(a) and is_isometry(b)):
        raise ValidationError("key identity needs two isometries")
    rng = np.random.default_rng(rng)
    N, s = a.shape
    t = b.shape[1]
    u_mat = reflection_walk(a, b)[2]
    tba = b.conj().T @ a
    disc_t = tba @ tba.conj().T
    disc_s = tba.conj().T @ tba
    worst = 0.0
    for u in _sample_points(rng, samples):
        lhs = determinant(np.eye(N) - u * u_mat)
        rhs_t = (1 - u) ** (N - s - t) * (1 + u) ** (s - t) * determinant((1 + u) ** 2 * np.eye(t) - 4 * u * disc_t)
        rhs_s = (1 - u) ** (N - s - t) * (1 + u) ** (t - s) * determinant((1 + u) ** 2 * np.eye(s) - 4 * u * disc_s)
        worst = max(worst, _rel(lhs, rhs_t), _rel(lhs, rhs_s))
    return worst


def isometry_spectrum(a: np.ndarray, b: np.ndarray, direct: bool = True, tol: float = MATCH_TOL) -> SpectrumReport:
    """Lift ``B*A A*B`` for an arbitrary isometry pair."""
    tba = np.asarray(b).conj().T @ np.asarray(a)
    vals, _ = eig_hermitian(tba @ tba.conj().T)
    report = lift_spectrum(vals, a.shape[0], a.shape[1], b.shape[1])
    return _with_direct(report, reflection_walk(a, b)[2], tol) if direct else report


def padding_check(a: np.ndarray, b: np.ndarray, tol: float = CLUSTER_TOL) -> MatchReport:
    """Compare ``Spec(A*B B*A)`` with ``{0}^(s-t)`` joined to ``Spec(B*A A*B)`` (needs ``s >= t``)."""
    s, t = a.shape[1], b.shape[1]
    if s < t:
        raise ValidationError("padding identity needs s >= t")
    tab = np.asarray(a).conj().T @ np.asarray(b)
    big, _ = eig_hermitian(tab @ tab.conj().T)
    small, _ = eig_hermitian(tab.conj().T @ tab)
    return multiset_equal(big, np.concatenate([np.zeros(s - t), small]), tol)


# ---------------------------------------------------------------------------
# Grover walk


def grover_charpoly_check(g: Multigraph, samples: int = 20, rng=None) -> float:
    """Max relative residual of ``det(lI - U) = (l^2 - 1)^(eps - nu) det((l^2 + 1)I - 2l T)``.

    Sample points have modulus in ``[0.3, 0.8]`` or ``[1.25, 2]`` so both sides
    stay away from zero.
    """
    rng = np.random.default_rng(rng)
    u_mat = grover_matrix(g).matrix
    t_mat = random_walk_matrix(g)
    n, m = g.vertex_count, g.edge_count
    radii = np.where(rng.uniform(size=samples) < 0.5, rng.uniform(0.3, 0.8, samples), rng.uniform(1.25, 2.0, samples))
    points = radii * np.exp(1j * rng.uniform(0, 2 * np.pi, samples))
    worst = 0.0
    for lam in points:
        lhs = determinant(lam * np.eye(2 * m) - u_mat)
        rhs = (lam**2 - 1) ** (m - n) * determinant((lam**2 + 1) * np.eye(n) - 2 * lam * t_mat)
        worst = max(worst, _rel(lhs, rhs))
    return worst


def grover_spectrum(g: Multigraph, direct: bool = True, tol: float = MATCH_TOL) -> SpectrumReport:
    """Lift of ``(I + T)/2``; lifted values are ``l_T +- i sqrt(1 - l_T^2)``."""
    disc = grover_discriminant(g)
    vals, _ = eig_hermitian(disc.matrix)
    report = lift_spectrum(vals, disc.N, disc.t, disc.s)
    report = replace(report, branch="tree" if g.is_tree() else "general")
    return _finish(report, grover_matrix(g), direct, tol)


def positive_support_spectrum(g: Multigraph, direct: bool = True, tol: float = MATCH_TOL) -> SpectrumReport:
    """Spectrum of ``U+`` for a connected ``k``-regular graph.

    Each adjacency eigenvalue ``l_A`` gives the two roots of
    ``x^2 - l_A x + (k - 1)``; the remaining ``2(eps - nu)`` values are
    ``+1`` and ``-1`` in equal numbers.
    """
    k = g.regular_degree()
    if k is None:
        raise ValidationError("positive support spectrum needs a regular graph")
    if k < 2:
        raise ValidationError("positive support spectrum needs degree at least 2")
    if not g.is_connected():
        raise ValidationError("positive support spectrum needs a connected graph")
    lam_a, _ = eig_hermitian(adjacency_matrix(g))
    extra = g.edge_count - g.vertex_count
    values = [1.0 + 0j] * extra + [-1.0 + 0j] * extra
    pairs = []
    for la in lam_a:
        root = np.sqrt(complex(la * la / 4 - (k - 1)))
        pairs.append((float(la), la / 2 + root))
        values += [la / 2 + root, la / 2 - root]
    report = SpectrumReport(
        values=np.array(values, dtype=complex),
        provenance="formula",
        N=2 * g.edge_count,
        plus_one_multiplicity=extra,
        minus_one_multiplicity=extra,
        lifted_pairs=tuple(pairs),
        discriminant=lam_a,
        branch=f"{k}-regular",
    )
    if not direct:
        return report
    return _with_direct(report, positive_support(grover_matrix(g).matrix), tol)


# ---------------------------------------------------------------------------
# Szegedy, staggered and search walks


def szegedy_spectrum(
    bg: BipartiteGraph, w: EdgeWeighting, direct: bool = True, tol: float = MATCH_TOL
) -> SpectrumReport:
    """Lift the smaller side's discriminant (``A_p`` if ``m <= n``, else ``A_q``).

    On a tree ``eps = m + n - 1`` so one eigenvalue 1 of the discriminant is
    forced and dropped by the lift.
    """
    k, l = szegedy_isometries(bg, w)
    disc = discriminant_Ap(k, l) if bg.m <= bg.n else discriminant_Aq(k, l)
    vals, _ = eig_hermitian(disc.matrix)
    report = lift_spectrum(vals, disc.N, disc.t, disc.s)
    report = replace(report, branch="tree" if bg.graph.is_tree() else "general")
    return _finish(report, szegedy_walk(k, l), direct, tol)


def sqw_spectrum(
    h: BipartiteGraph, amps: AmplitudeAssignment, direct: bool = True, tol: float = MATCH_TOL
) -> SpectrumReport:
    """Lift ``A-hat`` (``m x m``) with ``N = |E(h)|``; ``n`` plays the other isometry's width."""
    op, disc = sqw_operators(h, amps)
    vals, _ = eig_hermitian(disc.matrix)
    report = lift_spectrum(vals, disc.N, disc.t, disc.s)
    return _finish(report, op, direct, tol)


def search_spectrum(si: SearchInstance, direct: bool = True, tol: float = MATCH_TOL) -> SpectrumReport:
    """Lift ``A'_p`` with ``N = |E_M|`` and ``s = t = n``.

    ``N < 2n`` happens only for forests with at most one marked vertex; then
    the lift cancels the surplus eigenvalues 1 of ``A'_p``.
    """
    ops = search_operators(si)
    vals, _ = eig_hermitian(ops.discriminant.matrix)
    report = lift_spectrum(vals, si.size, si.n, si.n)
    return _finish(report, ops.walk, direct, tol)
