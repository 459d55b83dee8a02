"""Search dynamics of the modified walk: initial state, evolution, ``F(T)``, hitting time."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterator, TextIO

import numpy as np

from .errors import InconsistencyError, NumericalError, ValidationError
from .graphs import SearchInstance
from .linalg import eig_general
from .operators import SearchOperators, WalkOperator, search_operators, szegedy_isometries, szegedy_walk

NORM_TOL = 1e-9
THRESHOLD_SLACK = 1e-12


@dataclass(frozen=True)
class StateVector:
    """Amplitudes indexed by the walk's basis."""

    amplitudes: np.ndarray
    norm: float = field(init=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).ravel()
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "norm", float(np.linalg.norm(amps)))

    def __len__(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True)
class HittingReport:
    """Outcome of a hitting-time search.

    ``T_hit`` is ``None`` when ``F`` stays below ``threshold`` up to ``cap``.
    ``F_values[T]`` is ``F(T)`` for every simulated step. ``classical_gap``
    is ``1 - rho(P_M)`` (``None`` when every vertex is marked).
    ``symmetric`` records whether ``P`` is symmetric between ``V`` and
    ``V'``; without it the hitting time is only diagnostic and a message is
    appended to ``warnings``.
    """

    T_hit: int | None
    F_values: list[float]
    threshold: float
    classical_gap: float | None
    cap: int
    symmetric: bool
    warnings: list[str] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.T_hit is not None


def _matrix(w) -> np.ndarray:
    return w.matrix if isinstance(w, WalkOperator) else np.asarray(w)


def initial_state(si: SearchInstance) -> StateVector:
    """``sqrt(p(e) / n)`` on each duplication edge, zero on matching edges."""
    amps = np.zeros(si.size, dtype=complex)
    amps[: si.duplication_size] = np.sqrt(np.asarray(si.weighting.p) / si.n)
    state = StateVector(amps)
    if abs(state.norm - 1.0) > 1e-12:
        raise InconsistencyError(f"initial state has norm {state.norm!r}")
    return state


def evolve(w, psi: StateVector, steps: int) -> StateVector:
    """Apply the walk ``steps`` times, checking the norm after every step."""
    mat = _matrix(w)
    if mat.shape[1] != len(psi):
        raise ValidationError(f"walk has dimension {mat.shape[1]}, state has {len(psi)}")
    if steps < 0:
        raise ValidationError("steps must be non-negative")
    v = psi.amplitudes
    for _ in range(steps):
        v = mat @ v
        if abs(np.linalg.norm(v) - psi.norm) > NORM_TOL:
            raise NumericalError("norm drifted during evolution")
    return StateVector(v)


def f_values(w, psi0: StateVector, T: int) -> Iterator[float]:
    """Yield ``F(0), ..., F(T)`` where ``F(T)`` averages ``|psi(t) - psi(0)|^2`` over ``t <= T``."""
    mat = _matrix(w)
    v0 = psi0.amplitudes
    v = v0
    total = 0.0
    for step in range(T + 1):
        if step:
            v = mat @ v
        total += float(np.vdot(v - v0, v - v0).real)
        yield total / (step + 1)


def f_statistic(w, psi0: StateVector, T: int) -> float:
    if T < 0:
        raise ValidationError("T must be non-negative")
    value = 0.0
    for value in f_values(w, psi0, T):
        pass
    return value


def is_symmetric(ops: SearchOperators, tol: float = 1e-12) -> bool:
    """Whether ``P[u, v'] == P[v', u]`` for all ``u, v``."""
    return bool(np.max(np.abs(ops.P - ops.P.T), initial=0.0) <= tol)


def classical_gap(p_m: np.ndarray) -> float | None:
    """``1 - spectral radius`` of the Dirichlet-boundary matrix."""
    if p_m.size == 0:
        return None
    return 1.0 - float(np.max(np.abs(eig_general(p_m).values)))


def quantum_hitting_time(si: SearchInstance, cap: int | None = None) -> HittingReport:
    """Smallest ``T <= cap`` with ``F(T) >= 1 - m/n``.

    The default cap is ``10 n^2``. The comparison allows ``1e-12`` of
    rounding slack so exact rational crossings are not missed.
    """
    cap = 10 * si.n**2 if cap is None else cap
    if cap < 1:
        raise ValidationError("cap must be at least 1")
    ops = search_operators(si)
    symmetric = is_symmetric(ops)
    warnings = []
    if not symmetric:
        warnings.append("P is not symmetric between V and V'; hitting time is diagnostic only")
    threshold = 1.0 - si.m / si.n
    psi0 = initial_state(si)
    history: list[float] = []
    hit = None
    for step, value in enumerate(f_values(ops.walk, psi0, cap)):
        history.append(value)
        if value >= threshold - THRESHOLD_SLACK:
            hit = step
            break
    return HittingReport(hit, history, threshold, classical_gap(ops.P_M), cap, symmetric, warnings)


def unmodified_walk(si: SearchInstance) -> WalkOperator:
    """Szegedy walk of the duplication graph with the original weights."""
    k, l = szegedy_isometries(si.duplication, si.weighting)
    return szegedy_walk(k, l, tuple(si.ends[: si.duplication_size]))


def write_trajectory(values, out: TextIO | None = None) -> str:
    """Write ``T,F`` rows as CSV; returns the text when ``out`` is ``None``."""
    buf = out if out is not None else io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["T", "F"])
    for step, value in enumerate(values):
        writer.writerow([step, f"{value:.12g}"])
    return buf.getvalue() if out is None else ""
