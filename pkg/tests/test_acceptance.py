"""Acceptance checks, one test per criterion.

Each test records a one-line verdict in ``RESULTS``; the ``conftest`` hook
prints them at the end of the run. Running this file as a script prints the
same lines.
"""

import time

import numpy as np
import pytest

from qwalk import corpus
from qwalk.graphs import EdgeWeighting, build_search_instance, duplication
from qwalk.linalg import eig_general, eig_hermitian, multiset_equal
from qwalk.operators import (
    discriminant_Ap,
    grover_matrix,
    search_operators,
    sqw_operators,
    szegedy_isometries,
    szegedy_walk,
)
from qwalk.search import evolve, initial_state, quantum_hitting_time, unmodified_walk
from qwalk.spectra import (
    grover_charpoly_check,
    grover_spectrum,
    key_identity_check,
    positive_support_spectrum,
    padding_check,
    search_spectrum,
    szegedy_spectrum,
)

RESULTS: dict[int, str] = {}
OMEGA = (-1 + 1j * np.sqrt(3)) / 2
TRIANGLE_T_HIT = 1  # recorded from the first simulation run and frozen


def record(number: int, ok: bool, text: str) -> None:
    RESULTS[number] = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {text}"
    assert ok, RESULTS[number]


def uniform(g, marked):
    return build_search_instance(g, EdgeWeighting.uniform(duplication(g)), marked)


def regime(N, s, t):
    return (N - s - t >= 0, s - t >= 0)


def isometry_corpus(count=500, max_n=20, seed=31):
    """Random isometry pairs cycling through the four sign regimes of N-(s+t) and s-t."""
    rng = np.random.default_rng(seed)
    targets = [(True, True), (True, False), (False, True), (False, False)]
    pairs = []
    while len(pairs) < count:
        want = targets[len(pairs) % 4]
        N = int(rng.integers(2, max_n + 1))
        s, t = int(rng.integers(1, N + 1)), int(rng.integers(1, N + 1))
        if regime(N, s, t) == want:
            pairs.append((corpus.random_isometry(N, s, rng), corpus.random_isometry(N, t, rng)))
    return pairs


def test_criterion_01_square_golden():
    start = time.perf_counter()
    bg = corpus.complete_bipartite(2, 2)
    w = EdgeWeighting.uniform(bg)
    k, l = szegedy_isometries(bg, w)
    a_p = discriminant_Ap(k, l).matrix
    vals, _ = eig_hermitian(a_p)
    rep = szegedy_spectrum(bg, w)
    direct = eig_general(szegedy_walk(k, l).matrix).values
    ok = (
        np.max(np.abs(a_p - 0.5)) <= 1e-12
        and np.max(np.abs(vals - [0.0, 1.0])) <= 1e-12
        and bool(multiset_equal(rep.values, [1, 1, -1, -1], 1e-9))
        and bool(multiset_equal(direct, [1, 1, -1, -1], 1e-9))
    )
    elapsed = time.perf_counter() - start
    record(1, ok and elapsed < 1.0, f"K22 A_p, Spec(A_p)={{0,1}}, W spectrum both paths ({elapsed:.3f}s)")


def test_criterion_02_triangle_search_golden():
    start = time.perf_counter()
    si = uniform(corpus.complete(3), [2])
    ops = search_operators(si, cross_check=True)
    expected_ends = {(0, 1), (1, 0), (0, 2), (1, 2), (2, 0), (2, 1), (2, 2)}
    expected = [1, 1, 1, OMEGA, OMEGA, OMEGA.conjugate(), OMEGA.conjugate()]
    rep = search_spectrum(si)
    ok = (
        si.size == 7
        and set(si.ends) == expected_ends
        and np.max(np.abs(ops.discriminant.matrix - np.diag([0.25, 0.25, 1.0]))) <= 1e-12
        and bool(multiset_equal(rep.values, expected, 1e-9))
        and bool(multiset_equal(rep.direct.values, expected, 1e-9))
    )
    elapsed = time.perf_counter() - start
    record(2, ok and elapsed < 1.0, f"K3 search E_M, A'_p = diag(1/4,1/4,1), W' spectrum ({elapsed:.3f}s)")


def test_criterion_03_key_identity():
    start = time.perf_counter()
    pairs = isometry_corpus()
    regimes = {regime(a.shape[0], a.shape[1], b.shape[1]) for a, b in pairs}
    rng = np.random.default_rng(5)
    worst = max(key_identity_check(a, b, 20, rng) for a, b in pairs)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and len(regimes) == 4 and elapsed < 30
    record(3, ok, f"500 isometry pairs, 4 regimes, max residual {worst:.2e} ({elapsed:.1f}s)")


def test_criterion_04_discriminant_range_and_padding():
    worst_range = 0.0
    worst_pad = 0.0
    ok = True
    for a, b in isometry_corpus():
        tba = b.conj().T @ a
        for mat in (tba @ tba.conj().T, tba.conj().T @ tba):
            vals, _ = eig_hermitian(mat)
            worst_range = max(worst_range, -vals[0], vals[-1] - 1.0)
        big, small = (a, b) if a.shape[1] >= b.shape[1] else (b, a)
        rep = padding_check(big, small)
        worst_pad = max(worst_pad, rep.max_distance)
        ok = ok and rep.equal
    ok = ok and worst_range <= 1e-9
    record(4, ok, f"discriminant spectra in [0,1] (excess {max(worst_range, 0):.1e}), zero padding (max {worst_pad:.1e})")


def test_criterion_05_grover():
    worst = 0.0
    ok = True
    graphs = {k: g for k, g in corpus.graphs().items() if g.vertex_count <= 8 and g.is_connected()}
    kinds = {"tree": False, "cycle": False, "complete": False, "loop": False}
    for name, g in graphs.items():
        worst = max(worst, grover_charpoly_check(g, 20, 11))
        rep = grover_spectrum(g)
        ok = ok and rep.agrees and rep.match.max_distance <= 1e-6
        kinds["tree"] |= g.is_tree()
        kinds["cycle"] |= name.startswith("C")
        kinds["complete"] |= name.startswith("K")
        kinds["loop"] |= g.loop_count > 0
    ok = ok and worst <= 1e-8 and all(kinds.values())
    record(5, ok, f"Grover charpoly residual {worst:.1e} and formula = direct on {len(graphs)} graphs")


def test_criterion_06_positive_support():
    regular = corpus.regular_graphs()
    reports = {name: positive_support_spectrum(g) for name, g in regular.items()}
    ok = all(r.agrees for r in reports.values()) and {"C4", "K4", "cube"} <= set(reports)
    worst = max(r.match.max_distance for r in reports.values())
    record(6, ok, f"positive support formula = direct on {len(reports)} regular graphs (max {worst:.1e})")


def test_criterion_07_branch_coverage():
    rng = np.random.default_rng(17)
    seen = set()
    ok = True
    for name, bg in corpus.bipartite_graphs().items():
        w = corpus.random_weighting(bg, rng)
        rep = szegedy_spectrum(bg, w)
        ok = ok and rep.agrees
        seen.add(("szegedy", rep.branch))
        side = "A_p" if bg.m <= bg.n else "A_q"
        seen.add(("szegedy-side", side))
    for name, (g, marked) in corpus.search_cases().items():
        si = uniform(g, marked)
        rep = search_spectrum(si)
        ok = ok and rep.agrees
        seen.add(("search", "tree" if g.is_tree() else "general", rep.branch))
        if si.marked_pair_edges:
            seen.add(("search", "F2"))
    needed = {
        ("szegedy", "tree"),
        ("szegedy", "general"),
        ("szegedy-side", "A_p"),
        ("szegedy-side", "A_q"),
        ("search", "tree", "N<s+t"),
        ("search", "tree", "N>=s+t"),
        ("search", "general", "N>=s+t"),
        ("search", "F2"),
    }
    missing = needed - seen
    record(7, ok and not missing, f"Szegedy/search branches covered, formula = direct (missing: {sorted(missing) or 'none'})")


def test_criterion_08_detailed_balance():
    worst = 0.0
    count = 0
    for name, g in corpus.graphs().items():
        for v in range(g.vertex_count):
            si = uniform(g, [v])
            ops = search_operators(si)
            p_m = ops.P_M
            squared = np.concatenate([eig_general(p_m @ p_m).values, np.ones(si.m)])
            vals, _ = eig_hermitian(ops.discriminant.matrix)
            rep = multiset_equal(vals, squared, 1e-8)
            worst = max(worst, rep.max_distance)
            count += 1
    record(8, worst <= 1e-8, f"Spec(A'_p) = Spec(P'_M^2) on {count} instances (max {worst:.1e})")


def test_criterion_09_search_dynamics():
    worst_inv = 0.0
    for name in ["C4", "C5", "K4", "K5", "K6", "cube", "petal", "house"]:
        g = corpus.graphs()[name]
        rng = np.random.default_rng(len(name))
        for w in (EdgeWeighting.uniform(duplication(g)), corpus.random_symmetric_weighting(g, rng)):
            if not np.allclose(w.p, w.q):
                continue
            si = build_search_instance(g, w, [0])
            psi = initial_state(si).amplitudes[: si.duplication_size]
            worst_inv = max(worst_inv, float(np.max(np.abs(unmodified_walk(si).matrix @ psi - psi))))
    worst_norm = 0.0
    for g, marked in corpus.search_cases().values():
        si = uniform(g, marked)
        worst_norm = max(worst_norm, abs(evolve(search_operators(si).walk, initial_state(si), 1000).norm - 1))
    hit = quantum_hitting_time(uniform(corpus.complete(3), [2]))
    ok = (
        worst_inv <= 1e-9
        and worst_norm <= 1e-9
        and hit.T_hit == TRIANGLE_T_HIT
        and hit.F_values[-1] >= 2 / 3
    )
    record(
        9,
        ok,
        f"invariance {worst_inv:.1e}, norm drift {worst_norm:.1e}, K3 T_hit={hit.T_hit} F={hit.F_values[-1]:.4f}",
    )


def test_criterion_10_speedup_trend():
    t_hit, classical = {}, {}
    for n in (4, 8, 16, 32):
        rep = quantum_hitting_time(uniform(corpus.complete(n), [0]))
        assert rep.found
        t_hit[n] = rep.T_hit
        classical[n] = 1.0 / rep.classical_gap
    ratios = {n: (t_hit[4 * n] / t_hit[n], classical[4 * n] / classical[n]) for n in (4, 8)}
    ok = all(q < c for q, c in ratios.values())
    text = ", ".join(f"K{n}->K{4 * n}: quantum {q:.2f} vs classical {c:.2f}" for n, (q, c) in ratios.items())
    record(10, ok, f"hitting-time growth {text}")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass
    for number in sorted(RESULTS):
        print(RESULTS[number])
