"""Command-line front end.

Subcommands ``grover``, ``szegedy``, ``sqw`` and ``search`` print a JSON
spectrum report; ``verify`` runs a randomized property suite. Exit codes are
0 on success, 1 when a verification fails and 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import corpus
from .errors import InconsistencyError, NumericalError, QwalkError, ValidationError
from .graphs import (
    EdgeWeighting,
    build_search_instance,
    duplication,
    parse_amplitudes,
    parse_bipartite,
    parse_graph,
    parse_weighting,
)
from .linalg import cluster, eig_hermitian
from .operators import AmplitudeAssignment, discriminant_Ap, search_operators, sqw_operators, szegedy_isometries
from .search import quantum_hitting_time, write_trajectory
from .spectra import (
    MATCH_TOL,
    SpectrumReport,
    grover_charpoly_check,
    grover_spectrum,
    key_identity_check,
    positive_support_spectrum,
    padding_check,
    search_spectrum,
    sqw_spectrum,
    szegedy_spectrum,
)

CHOP = 1e-12
SUITES = ("key-identity", "lemma32", "remark33", "grover-charpoly", "formula-vs-direct")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    tol: float
    seed: int = 0
    trials: int = 20


def _num(x: float) -> float:
    v = float(f"{x:.12g}")
    return 0.0 if v == 0.0 else v


def _chop(x: float) -> float:
    """Round to 12 significant digits after zeroing rounding noise below 1e-12."""
    return _num(0.0 if abs(x) < CHOP else x)


def _complex_list(values) -> list[dict]:
    return [{"re": _chop(z.real), "im": _chop(z.imag)} for z in np.asarray(values, dtype=complex)]


def _eigen_json(values) -> dict:
    return {
        "eigenvalues": [
            {"re": _chop(z.real), "im": _chop(z.imag), "multiplicity": k} for z, k in cluster(values)
        ],
        "raw": _complex_list(values),
    }


def report_json(report: SpectrumReport) -> dict:
    out = {
        "N": report.N,
        "s": report.s,
        "t": report.t,
        "branch": report.branch,
        "plus_one_multiplicity": report.plus_one_multiplicity,
        "minus_one_multiplicity": report.minus_one_multiplicity,
        "discriminant": [_num(x) for x in np.real(report.discriminant)],
        "formula": _eigen_json(report.values),
    }
    if report.direct is not None:
        out["direct"] = _eigen_json(report.direct.values)
        out["match"] = {"equal": report.match.equal, "max_distance": _num(report.match.max_distance)}
    return out


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _tolerance() -> float:
    raw = os.environ.get("QWALK_TOL")
    if raw is None:
        return MATCH_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"QWALK_TOL must be a number, got {raw!r}") from None
    if not tol > 0:
        raise UsageError("QWALK_TOL must be positive")
    return tol


# ---------------------------------------------------------------------------
# walk subcommands


def cmd_grover(args, cfg: RunConfig) -> tuple[dict, bool]:
    g = parse_graph(_read(args.graph))
    report = grover_spectrum(g, tol=cfg.tol)
    out = {"walk": "grover", **report_json(report)}
    ok = report.agrees
    if args.support:
        support = positive_support_spectrum(g, tol=cfg.tol)
        out["positive_support"] = report_json(support)
        ok = ok and support.agrees
    return out, ok


def cmd_szegedy(args, cfg: RunConfig) -> tuple[dict, bool]:
    bg = parse_bipartite(_read(args.graph))
    w = parse_weighting(_read(args.weights), bg.edge_count) if args.weights else EdgeWeighting.uniform(bg)
    report = szegedy_spectrum(bg, w, tol=cfg.tol)
    return {"walk": "szegedy", "tree": bg.graph.is_tree(), **report_json(report)}, report.agrees


def cmd_sqw(args, cfg: RunConfig) -> tuple[dict, bool]:
    h = parse_bipartite(_read(args.graph))
    if args.amplitudes:
        a, b = parse_amplitudes(_read(args.amplitudes), h.edge_count)
        amps = AmplitudeAssignment(a, b)
    else:
        amps = AmplitudeAssignment.uniform(h)
    report = sqw_spectrum(h, amps, tol=cfg.tol)
    return {"walk": "sqw", **report_json(report)}, report.agrees


def cmd_search(args, cfg: RunConfig) -> tuple[dict, bool]:
    g = parse_graph(_read(args.graph))
    dup = duplication(g)
    w = parse_weighting(_read(args.weights), dup.edge_count) if args.weights else EdgeWeighting.uniform(dup)
    si = build_search_instance(g, w, args.marked)
    report = search_spectrum(si, tol=cfg.tol)
    hit = quantum_hitting_time(si, args.hitting_cap)
    out = {
        "walk": "search",
        "edge_space": len(si.ends),
        "eps_prime": si.eps_prime,
        **report_json(report),
        "hitting": {
            "T_hit": hit.T_hit,
            "threshold": _num(hit.threshold),
            "F_at_hit": _num(hit.F_values[-1]) if hit.found else None,
            "cap": hit.cap,
            "classical_gap": None if hit.classical_gap is None else _num(hit.classical_gap),
            "symmetric": hit.symmetric,
            "warnings": hit.warnings,
        },
    }
    if args.trajectory:
        try:
            with open(args.trajectory, "w", newline="") as fh:
                write_trajectory(hit.F_values, fh)
        except OSError as exc:
            raise UsageError(f"cannot write {args.trajectory}: {exc.strerror or exc}") from exc
    return out, report.agrees


# ---------------------------------------------------------------------------
# verification suites


def _trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def _random_shape(rng: np.random.Generator, max_n: int = 20) -> tuple[int, int, int]:
    N = int(rng.integers(1, max_n + 1))
    return N, int(rng.integers(0, N + 1)), int(rng.integers(0, N + 1))


def suite_key_identity(cfg: RunConfig) -> tuple[int, float]:
    failures, worst = 0, 0.0
    for trial in range(cfg.trials):
        rng = _trial_rng(cfg.seed, trial)
        N, s, t = _random_shape(rng)
        res = key_identity_check(corpus.random_isometry(N, s, rng), corpus.random_isometry(N, t, rng), 20, rng)
        worst = max(worst, res)
        failures += int(res > 1e-8)
    return failures, worst


def _corpus_discriminants(rng: np.random.Generator):
    for bg in corpus.bipartite_graphs().values():
        k, l = szegedy_isometries(bg, corpus.random_weighting(bg, rng))
        yield discriminant_Ap(k, l).matrix
        yield sqw_operators(bg, corpus.random_amplitudes(bg, rng))[1].matrix
    for g, marked in corpus.search_cases().values():
        si = build_search_instance(g, EdgeWeighting.uniform(duplication(g)), marked)
        yield search_operators(si).discriminant.matrix


def suite_discriminant_range(cfg: RunConfig) -> tuple[int, float]:
    failures, worst = 0, 0.0
    for trial in range(cfg.trials):
        rng = _trial_rng(cfg.seed, trial)
        N, s, t = _random_shape(rng)
        tba = corpus.random_isometry(N, t, rng).conj().T @ corpus.random_isometry(N, s, rng)
        mats = [tba @ tba.conj().T, tba.conj().T @ tba]
        if trial == 0:
            mats += list(_corpus_discriminants(rng))
        for mat in mats:
            vals, _ = eig_hermitian(mat)
            if vals.size:
                excess = max(-vals[0], vals[-1] - 1.0, 0.0)
                worst = max(worst, excess)
                failures += int(excess > 1e-9)
    return failures, worst


def suite_padding(cfg: RunConfig) -> tuple[int, float]:
    failures, worst = 0, 0.0
    for trial in range(cfg.trials):
        rng = _trial_rng(cfg.seed, trial)
        N, s, t = _random_shape(rng)
        s, t = max(s, t), min(s, t)
        rep = padding_check(corpus.random_isometry(N, s, rng), corpus.random_isometry(N, t, rng))
        worst = max(worst, rep.max_distance)
        failures += int(not rep.equal)
    return failures, worst


def suite_grover_charpoly(cfg: RunConfig) -> tuple[int, float]:
    failures, worst = 0, 0.0
    for trial in range(cfg.trials):
        rng = _trial_rng(cfg.seed, trial)
        for g in corpus.graphs().values():
            res = grover_charpoly_check(g, 20, rng)
            worst = max(worst, res)
            failures += int(res > 1e-8)
    return failures, worst


def suite_formula_vs_direct(cfg: RunConfig) -> tuple[int, float]:
    reports = []
    for g in corpus.graphs().values():
        reports.append(grover_spectrum(g, tol=cfg.tol))
    for g in corpus.regular_graphs().values():
        reports.append(positive_support_spectrum(g, tol=cfg.tol))
    for g, marked in corpus.search_cases().values():
        si = build_search_instance(g, EdgeWeighting.uniform(duplication(g)), marked)
        reports.append(search_spectrum(si, tol=cfg.tol))
    for trial in range(cfg.trials):
        rng = _trial_rng(cfg.seed, trial)
        for bg in corpus.bipartite_graphs().values():
            reports.append(szegedy_spectrum(bg, corpus.random_weighting(bg, rng), tol=cfg.tol))
            reports.append(sqw_spectrum(bg, corpus.random_amplitudes(bg, rng), tol=cfg.tol))
    failures = sum(not r.agrees for r in reports)
    return failures, max(r.match.max_distance for r in reports)


SUITE_FUNCS: dict[str, Callable[[RunConfig], tuple[int, float]]] = {
    "key-identity": suite_key_identity,
    "lemma32": suite_discriminant_range,
    "remark33": suite_padding,
    "grover-charpoly": suite_grover_charpoly,
    "formula-vs-direct": suite_formula_vs_direct,
}


def cmd_verify(args, cfg: RunConfig) -> tuple[dict, bool]:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    failures, worst = SUITE_FUNCS[args.suite](cfg)
    out = {
        "suite": args.suite,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "failures": failures,
        "max_residual": _num(worst),
        "verdict": "pass" if failures == 0 else "fail",
    }
    return out, failures == 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qwalk", description="Quantum walk spectra and search.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("grover", help="Grover walk spectrum of a graph")
    p.add_argument("graph", help="edge-list file")
    p.add_argument("--support", action="store_true", help="also report the positive support (regular graphs)")
    p.set_defaults(func=cmd_grover)

    p = sub.add_parser("szegedy", help="Szegedy walk spectrum of a bipartite graph")
    p.add_argument("graph", help="bipartite edge-list file with an 'X:' header")
    p.add_argument("--weights", help="weighting file (default: uniform)")
    p.set_defaults(func=cmd_szegedy)

    p = sub.add_parser("sqw", help="staggered walk on the line graph of a bipartite root graph")
    p.add_argument("graph", help="bipartite root graph")
    p.add_argument("--amplitudes", help="amplitude file (default: square roots of uniform weights)")
    p.set_defaults(func=cmd_sqw)

    p = sub.add_parser("search", help="modified search walk and hitting time")
    p.add_argument("graph", help="edge-list file")
    p.add_argument("--marked", type=int, nargs="*", default=[], help="marked vertices")
    p.add_argument("--weights", help="weighting file for the duplication graph (default: uniform)")
    p.add_argument("--hitting-cap", type=int, default=None, help="maximum steps (default 10 n^2)")
    p.add_argument("--trajectory", help="write the F(T) trajectory as CSV to this path")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        cfg = RunConfig(args.command, _tolerance(), getattr(args, "seed", 0), getattr(args, "trials", 20))
        out, ok = args.func(args, cfg)
    except (InconsistencyError, NumericalError) as exc:
        print(f"qwalk: {exc}", file=sys.stderr)
        return 1
    except (UsageError, QwalkError) as exc:
        print(f"qwalk: {exc}", file=sys.stderr)
        return 2
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
