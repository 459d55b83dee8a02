"""Dense complex linear algebra kernel.

Matrices are plain ``numpy`` arrays. The eigensolvers and the determinant are
written out here (cyclic Jacobi for Hermitian input, Householder-Hessenberg
reduction followed by Wilkinson-shifted complex QR for general input) so the
formula side and the direct side of every spectrum comparison run on code in
this package; ``numpy.linalg`` is used only by the test suite as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError, ValidationError

__all__ = [
    "EigenMultiset",
    "MatchReport",
    "matmul",
    "conj_transpose",
    "determinant",
    "eig_hermitian",
    "eig_general",
    "multiset_equal",
    "is_isometry",
    "is_unitary",
    "is_hermitian",
    "cluster",
]

_EPS = np.finfo(float).eps
CLUSTER_TOL = 1e-7


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ValidationError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def conj_transpose(a: np.ndarray) -> np.ndarray:
    return np.asarray(a).conj().T


def determinant(a: np.ndarray) -> complex:
    """Determinant by LU factorisation with partial pivoting."""
    lu = np.array(a, dtype=complex)
    n, cols = lu.shape
    if n != cols:
        raise ValidationError("determinant needs a square matrix")
    det = 1.0 + 0.0j
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if lu[p, k] == 0:
            return 0j
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            det = -det
        pivot = lu[k, k]
        det *= pivot
        if k + 1 < n:
            factors = lu[k + 1 :, k] / pivot
            lu[k + 1 :, k + 1 :] -= np.outer(factors, lu[k, k + 1 :])
    return complex(det)


def is_hermitian(a: np.ndarray, tol: float = 1e-9) -> bool:
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol)


def is_isometry(a: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff ``a* a = I`` entrywise within ``tol``."""
    a = np.asarray(a)
    gram = a.conj().T @ a
    return bool(np.max(np.abs(gram - np.eye(a.shape[1])), initial=0.0) <= tol)


def is_unitary(a: np.ndarray, tol: float = 1e-9) -> bool:
    a = np.asarray(a)
    return a.shape[0] == a.shape[1] and is_isometry(a, tol)


# ---------------------------------------------------------------------------
# Hermitian eigenproblem


def eig_hermitian(a: np.ndarray, tol: float = 1e-9, max_sweeps: int = 60):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Parameters
    ----------
    a : array_like
        Square matrix, Hermitian within ``tol`` (entrywise, scaled by its
        largest entry when that exceeds one). It is symmetrised before use.

    Returns
    -------
    values : ndarray of float
    vectors : ndarray of complex
        Column ``k`` is the eigenvector for ``values[k]``.
    """
    a = np.array(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError("eig_hermitian needs a square matrix")
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
    if not is_hermitian(a, tol * scale):
        raise ValidationError("matrix is not Hermitian within tolerance")
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=complex)
    if n == 0:
        return np.zeros(0), v

    total = np.linalg.norm(a)
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= 1e-15 * total or off == 0.0:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= 1e-300:
                    continue
                phase = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # diag(1, conj(phase)) makes the pair real, then a real Jacobi rotation
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex)
                cols = a[:, [p, q]] @ g
                a[:, p], a[:, q] = cols[:, 0], cols[:, 1]
                rows = g.conj().T @ a[[p, q], :]
                a[p, :], a[q, :] = rows[0], rows[1]
                a[p, q] = a[q, p] = 0.0
                vc = v[:, [p, q]] @ g
                v[:, p], v[:, q] = vc[:, 0], vc[:, 1]
    else:
        raise NumericalError("Jacobi iteration did not converge")

    values = np.diag(a).real.copy()
    order = np.argsort(values, kind="stable")
    return values[order], v[:, order]


# ---------------------------------------------------------------------------
# general eigenproblem


@dataclass
class EigenMultiset:
    """Unordered eigenvalue list plus the tolerance used to group repeats."""

    values: np.ndarray
    tol: float = CLUSTER_TOL
    vectors: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex).ravel()

    def __len__(self) -> int:
        return self.values.size

    def clusters(self) -> list[tuple[complex, int]]:
        return cluster(self.values, self.tol)


def cluster(values, tol: float = CLUSTER_TOL) -> list[tuple[complex, int]]:
    """Group values lying within ``tol`` of a group's first member.

    Groups come back sorted by (real, imag) of their mean.
    """
    vals = sorted(np.asarray(values, dtype=complex).ravel(), key=lambda z: (z.real, z.imag))
    groups: list[list[complex]] = []
    for z in vals:
        for g in groups:
            if abs(z - g[0]) <= tol:
                g.append(z)
                break
        else:
            groups.append([z])
    out = [(complex(np.mean(g)), len(g)) for g in groups]
    out.sort(key=lambda item: (round(item[0].real, 9), round(item[0].imag, 9)))
    return out


def _givens(x: complex, y: complex) -> np.ndarray:
    """Unitary ``G`` with ``G @ [x, y] = [r, 0]``."""
    ax = abs(x)
    rho = np.hypot(ax, abs(y))
    if rho == 0.0:
        return np.eye(2, dtype=complex)
    if ax == 0.0:
        return np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)
    c = ax / rho
    s = (x / ax) * np.conj(y) / rho
    return np.array([[c, s], [-np.conj(s), c]], dtype=complex)


def _hessenberg(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    h = np.array(a, dtype=complex)
    n = h.shape[0]
    q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = h[k + 1 :, k]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        u = x.copy()
        u[0] += phase * alpha
        u /= np.linalg.norm(u)
        h[k + 1 :, :] -= 2.0 * np.outer(u, u.conj() @ h[k + 1 :, :])
        h[:, k + 1 :] -= 2.0 * np.outer(h[:, k + 1 :] @ u, u.conj())
        q[:, k + 1 :] -= 2.0 * np.outer(q[:, k + 1 :] @ u, u.conj())
        h[k + 2 :, k] = 0.0
    return h, q


def _wilkinson(h: np.ndarray, hi: int) -> complex:
    a, b = h[hi - 1, hi - 1], h[hi - 1, hi]
    c, d = h[hi, hi - 1], h[hi, hi]
    mean = 0.5 * (a + d)
    disc = np.sqrt(0.25 * (a - d) ** 2 + b * c)
    mu1, mu2 = mean + disc, mean - disc
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


def _schur(a: np.ndarray, max_iter_per_value: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Complex Schur form ``a = Z T Z*`` via shifted QR on the Hessenberg form."""
    t, z = _hessenberg(a)
    n = t.shape[0]
    norm = np.linalg.norm(t) or 1.0
    hi = n - 1
    its = 0
    budget = max_iter_per_value * max(n, 1)
    while hi > 0:
        lo = hi
        while lo > 0:
            sub = abs(t[lo, lo - 1])
            if sub <= _EPS * (abs(t[lo, lo]) + abs(t[lo - 1, lo - 1])) or sub <= _EPS * norm * 1e-3:
                t[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            its = 0
            continue
        its += 1
        budget -= 1
        if budget < 0:
            raise NumericalError("QR iteration did not converge")
        if its % 11 == 0:
            mu = t[hi, hi] + 0.75 * abs(t[hi, hi - 1]) * np.exp(1j * its)
        else:
            mu = _wilkinson(t, hi)
        x, y = t[lo, lo] - mu, t[lo + 1, lo]
        for k in range(lo, hi):
            if k > lo:
                x, y = t[k, k - 1], t[k + 1, k - 1]
            g = _givens(x, y)
            c0 = max(lo, k - 1)
            t[k : k + 2, c0:] = g @ t[k : k + 2, c0:]
            r1 = min(k + 3, hi + 1)
            gh = g.conj().T
            t[:r1, k : k + 2] = t[:r1, k : k + 2] @ gh
            z[:, k : k + 2] = z[:, k : k + 2] @ gh
            if k > lo:
                t[k + 1, k - 1] = 0.0
    return np.triu(t), z


def _triangular_eigvecs(t: np.ndarray) -> np.ndarray:
    n = t.shape[0]
    smin = max(_EPS * (np.linalg.norm(t) or 1.0), 1e-300)
    y = np.zeros((n, n), dtype=complex)
    for k in range(n):
        lam = t[k, k]
        y[k, k] = 1.0
        for i in range(k - 1, -1, -1):
            denom = t[i, i] - lam
            if abs(denom) < smin:
                denom = smin
            y[i, k] = -(t[i, i + 1 : k + 1] @ y[i + 1 : k + 1, k]) / denom
        y[:, k] /= np.linalg.norm(y[:, k])
    return y


def eig_general(a: np.ndarray, vectors: bool = False, tol: float = CLUSTER_TOL) -> EigenMultiset:
    """All eigenvalues of a square complex matrix.

    With ``vectors=True`` the result also carries unit eigenvectors (column
    ``k`` for ``values[k]``) obtained from the Schur vectors.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError("eig_general needs a square matrix")
    if a.shape[0] == 0:
        return EigenMultiset(np.zeros(0, dtype=complex), tol)
    t, z = _schur(a)
    values = np.diag(t).copy()
    vecs = z @ _triangular_eigvecs(t) if vectors else None
    return EigenMultiset(values, tol, vecs)


# ---------------------------------------------------------------------------
# multiset comparison


@dataclass
class MatchReport:
    equal: bool
    max_distance: float
    pairs: list[tuple[complex, complex, float]]

    def __bool__(self) -> bool:
        return self.equal


def multiset_equal(a, b, tol: float = 1e-7) -> MatchReport:
    """Greedy nearest-pair matching of two equally sized multisets."""
    va = np.asarray(a.values if isinstance(a, EigenMultiset) else a, dtype=complex).ravel()
    vb = np.asarray(b.values if isinstance(b, EigenMultiset) else b, dtype=complex).ravel()
    if va.size != vb.size:
        raise ValidationError(f"multisets differ in size: {va.size} vs {vb.size}")
    key = lambda z: (z.real, z.imag)  # noqa: E731
    va = np.array(sorted(va, key=key), dtype=complex)
    vb = np.array(sorted(vb, key=key), dtype=complex)
    dist = np.abs(va[:, None] - vb[None, :])
    order = np.argsort(dist, axis=None, kind="stable")
    used_a = np.zeros(va.size, bool)
    used_b = np.zeros(vb.size, bool)
    pairs = []
    for flat in order:
        i, j = divmod(int(flat), vb.size)
        if used_a[i] or used_b[j]:
            continue
        used_a[i] = used_b[j] = True
        pairs.append((complex(va[i]), complex(vb[j]), float(dist[i, j])))
        if len(pairs) == va.size:
            break
    worst = max((d for _, _, d in pairs), default=0.0)
    return MatchReport(worst <= tol, worst, pairs)
