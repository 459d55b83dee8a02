import json

import pytest

from qwalk.cli import main

C4 = "4\n0 1\n1 2\n2 3\n3 0\n"
K4 = "4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n"
K22 = "4\nX: 0 1\n0 2\n0 3\n1 2\n1 3\n"
STAR = "4\nX: 0\n0 1\n0 2\n0 3\n"
K3 = "3\n0 1\n1 2\n2 0\n"


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip().startswith("{") else out), err


def values(section):
    return sorted((e["re"], e["im"], e["multiplicity"]) for e in section["eigenvalues"])


def test_grover_cycle(files, capsys):
    code, out, _ = run(capsys, "grover", files("c4.txt", C4))
    assert code == 0 and out["match"]["equal"]
    assert values(out["formula"]) == [(-1.0, 0.0, 2), (0.0, -1.0, 2), (0.0, 1.0, 2), (1.0, 0.0, 2)]
    assert len(out["formula"]["raw"]) == 8


def test_grover_support(files, capsys):
    code, out, _ = run(capsys, "grover", files("k4.txt", K4), "--support")
    assert code == 0
    assert (2.0, 0.0, 1) in values(out["positive_support"]["formula"])


def test_grover_support_rejects_irregular(files, capsys):
    code, _, err = run(capsys, "grover", files("p.txt", "3\n0 1\n1 2\n"), "--support")
    assert code == 2 and "regular" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "grover", "/nonexistent/graph.txt")
    assert code == 2 and "cannot read" in err


def test_parse_error_exit_code(files, capsys):
    code, _, err = run(capsys, "grover", files("bad.txt", "3\n0 x\n"))
    assert code == 2 and "line 2" in err


def test_szegedy_square(files, capsys):
    code, out, _ = run(capsys, "szegedy", files("k22.txt", K22))
    assert code == 0
    assert values(out["formula"]) == [(-1.0, 0.0, 2), (1.0, 0.0, 2)]
    assert out["discriminant"] == [0.0, 1.0]
    assert out["tree"] is False


def test_szegedy_tree_flag(files, capsys):
    code, out, _ = run(capsys, "szegedy", files("star.txt", STAR))
    assert code == 0 and out["tree"] is True and out["branch"] == "tree"


def test_szegedy_invalid_weighting(files, capsys):
    code, _, err = run(capsys, "szegedy", files("k22.txt", K22), "--weights", files("w.txt", "1 0.5\n" * 4))
    assert code == 2 and "sums" in err


def test_sqw_matches_szegedy(files, capsys):
    _, sz, _ = run(capsys, "szegedy", files("k22.txt", K22))
    code, sq, _ = run(capsys, "sqw", files("k22b.txt", K22))
    assert code == 0 and values(sq["formula"]) == values(sz["formula"])


def test_sqw_complex_amplitudes(files, capsys):
    amps = "0.5+0.5j 1j\n-0.5j -1\n0.5 0.6+0.8j\n"
    code, out, _ = run(capsys, "sqw", files("star.txt", STAR), "--amplitudes", files("a.txt", amps))
    assert code == 0 and out["match"]["equal"]


def test_sqw_unnormalised(files, capsys):
    code, _, err = run(capsys, "sqw", files("star.txt", STAR), "--amplitudes", files("a.txt", "1 1\n1 1\n1 1\n"))
    assert code == 2


def test_search_triangle(files, capsys, tmp_path):
    traj = tmp_path / "traj.csv"
    code, out, _ = run(capsys, "search", files("k3.txt", K3), "--marked", "2", "--trajectory", str(traj))
    assert code == 0
    omega_re, omega_im = -0.5, 0.866025403784
    assert values(out["formula"]) == [(omega_re, -omega_im, 2), (omega_re, omega_im, 2), (1.0, 0.0, 3)]
    assert out["hitting"]["T_hit"] == 1
    assert traj.read_text().splitlines()[0] == "T,F"


def test_search_requires_marks(files, capsys):
    code, _, err = run(capsys, "search", files("k3.txt", K3))
    assert code == 2 and "nonempty" in err


def test_verify_deterministic(capsys):
    first = run(capsys, "verify", "--suite", "key-identity", "--trials", "30", "--seed", "7")
    second = run(capsys, "verify", "--suite", "key-identity", "--trials", "30", "--seed", "7")
    assert first == second
    assert first[0] == 0 and first[1]["verdict"] == "pass"


@pytest.mark.parametrize("suite", ["lemma32", "remark33", "grover-charpoly", "formula-vs-direct"])
def test_verify_suites_pass(capsys, suite):
    code, out, _ = run(capsys, "verify", "--suite", suite, "--trials", "3", "--seed", "1")
    assert code == 0 and out["failures"] == 0


def test_verify_unknown_suite(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "nope")
    assert code == 2


def test_tolerance_override(files, capsys, monkeypatch):
    monkeypatch.setenv("QWALK_TOL", "1e-30")
    code, out, _ = run(capsys, "grover", files("c4.txt", C4))
    assert code == 1 and out["match"]["equal"] is False
    monkeypatch.setenv("QWALK_TOL", "abc")
    code, _, _ = run(capsys, "grover", files("c4.txt", C4))
    assert code == 2


def test_json_byte_identical(files, capsys):
    path = files("k3.txt", K3)
    main(["search", path, "--marked", "2"])
    a = capsys.readouterr().out
    main(["search", path, "--marked", "2"])
    assert capsys.readouterr().out == a
