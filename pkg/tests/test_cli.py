import csv
import io
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from fermidyn.cli import main
from fermidyn.identities import BRACKET_IDENTITIES, DAGGER_IDENTITIES, DEFORMATION_IDENTITIES
from fermidyn.sampling import random_spd, rng_from_seed

FIXTURES = Path(__file__).parent / "fixtures"


def rows_of(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


# -- check-identities

def test_check_identities_passes(capsys):
    assert main(["check-identities", "--dim", "4", "--metric", "identity", "--trials", "200", "--seed", "1",
                 "--tol", "1e-9"]) == 0
    out = capsys.readouterr().out
    for name in BRACKET_IDENTITIES + DAGGER_IDENTITIES + DEFORMATION_IDENTITIES:
        assert name in out
    assert "PASS" in out


def test_check_identities_with_gram_file(tmp_path, capsys):
    G = random_spd(rng_from_seed(3), 4).gram
    gram = write(tmp_path, "gram.txt", "\n".join(" ".join(repr(float(x)) for x in row) for row in G) + "\n")
    assert main(["check-identities", "--dim", "4", "--metric", str(gram), "--trials", "20"]) == 0


def test_check_identities_random_metric():
    assert main(["check-identities", "--dim", "3", "--metric", "random", "--trials", "20"]) == 0


def test_check_identities_impossible_tolerance(capsys):
    assert main(["check-identities", "--dim", "3", "--trials", "5", "--tol", "-1"]) == 1
    assert "FAIL" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["check-identities", "--dim", "0"],
    ["check-identities", "--dim", "7"],
    ["check-identities", "--dim", "3", "--trials", "0"],
    ["check-identities"],
    ["frobnicate"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2
    assert "error" in capsys.readouterr().err


def test_gram_file_problems(tmp_path):
    bad = write(tmp_path, "bad.txt", "1 2\n2 1\n")
    assert main(["check-identities", "--dim", "2", "--metric", str(bad), "--trials", "2"]) == 2
    ok = write(tmp_path, "ok.txt", "1 0\n0 1\n")
    assert main(["check-identities", "--dim", "3", "--metric", str(ok), "--trials", "2"]) == 2
    assert main(["check-identities", "--dim", "2", "--metric", str(tmp_path / "missing"), "--trials", "2"]) == 2


# -- oracle-compare

def test_oracle_compare_dim3(capsys):
    assert main(["oracle-compare", "--dim", "3"]) == 0
    out = capsys.readouterr().out
    assert "clifford" in out and "PASS" in out


def test_oracle_compare_dim4():
    assert main(["oracle-compare", "--dim", "4"]) == 0


def test_oracle_compare_over_cap():
    with pytest.raises(SystemExit) as info:
        main(["oracle-compare", "--dim", "9"])
    assert info.value.code == 2


# -- evolve

def test_evolve_classical_rotation(tmp_path):
    out = tmp_path / "out.csv"
    assert main(["evolve", str(FIXTURES / "rotation.cfg"), str(out)]) == 0
    rows = rows_of(out)
    assert list(rows[0]) == ["t", "e1", "e2", "norm", "i", "int"]
    assert len(rows) == 9
    assert abs(float(rows[-1]["e1"]) - 1.0) <= 1e-9
    assert abs(float(rows[-1]["norm"]) - 1.0) <= 1e-9


def test_evolve_quantum_half_rate(tmp_path):
    out = tmp_path / "out.csv"
    assert main(["evolve", str(FIXTURES / "rotation_quantum.cfg"), str(out)]) == 0
    assert abs(float(rows_of(out)[-1]["e1"]) + 1.0) <= 1e-9


def test_evolve_golden_and_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["evolve", str(FIXTURES / "rotation.cfg"), str(a)]) == 0
    assert main(["evolve", str(FIXTURES / "rotation.cfg"), str(b)]) == 0
    assert a.read_bytes() == b.read_bytes() == (FIXTURES / "rotation_golden.csv").read_bytes()
    assert b"\r" not in a.read_bytes()


def test_evolve_grade_three_classical_is_mode_mismatch(tmp_path, capsys):
    cfg = write(tmp_path, "bad.cfg", "dim 3\nmode classical\nhamiltonian\n3 1 2 3 1\nend\nobservable\n1 1 1\nend\n")
    assert main(["evolve", str(cfg), str(tmp_path / "o.csv")]) == 1
    assert "ModeMismatch" in capsys.readouterr().err
    assert not (tmp_path / "o.csv").exists()


def test_evolve_hermitian_quantum_is_rejected(tmp_path, capsys):
    cfg = write(tmp_path, "bad.cfg", "dim 4\nmode quantum\nhamiltonian\n4 1 2 3 4 1\nend\nobservable\n1 1 1\nend\n")
    assert main(["evolve", str(cfg), str(tmp_path / "o.csv")]) == 1
    assert "NotAntiHermitian" in capsys.readouterr().err


def test_evolve_parse_error_names_line(tmp_path, capsys):
    cfg = write(tmp_path, "bad.cfg", "dim 2\n# fine\nhamiltonian\n2 2 1 1\nend\n")
    assert main(["evolve", str(cfg), str(tmp_path / "o.csv")]) == 2
    assert "line 4" in capsys.readouterr().err


def test_evolve_missing_file(tmp_path):
    assert main(["evolve", str(tmp_path / "nope.cfg"), str(tmp_path / "o.csv")]) == 2


def test_evolve_interaction_columns(tmp_path):
    cfg = write(tmp_path, "int.cfg", "dim 4\nmode quantum\ntime 0 1 4\nhamiltonian\n2 1 2 1\n3 1 2 3 0.3\nend\n"
                "observable\n1 4 1\nend\n")
    out = tmp_path / "o.csv"
    assert main(["evolve", str(cfg), str(out)]) == 0
    header = out.read_text().splitlines()[0].split(",")
    assert "e1234" in header


# -- deform

def deform(tmp_path, cfg_text, hbars):
    cfg = write(tmp_path, "d.cfg", cfg_text)
    out = tmp_path / "d.csv"
    assert main(["deform", str(cfg), str(out), "--hbar", *map(str, hbars)]) == 0
    return [(float(r["hbar"]), float(r["clifford_minus_wedge"]), float(r["first_order_residual"]))
            for r in rows_of(out)]


def test_deform_vectors(tmp_path):
    rows = deform(tmp_path, "dim 2\nobservable\n1 1 1\nend\nobservable\n1 1 1\nend\n", [0, 0.5, 1])
    assert rows == [(0.0, 0.0, 0.0), (0.5, 0.5, 0.0), (1.0, 1.0, 0.0)]


def test_deform_single_block_squares(tmp_path):
    rows = deform(tmp_path, "dim 2\nobservable\n1 1 1\nend\n", [0.5])
    assert rows == [(0.5, 0.5, 0.0)]


def test_deform_second_order(tmp_path):
    rows = deform(tmp_path, "dim 2\nobservable\n2 1 2 1\nend\nobservable\n2 1 2 1\nend\n", [1e-1, 1e-2, 1e-3])
    second = [r[2] for r in rows]
    assert second[0] / second[1] == pytest.approx(100.0, rel=0.01)
    assert second[1] / second[2] == pytest.approx(100.0, rel=0.01)


def test_deform_zero_row(tmp_path):
    rows = deform(tmp_path, "dim 3\nobservable\n2 1 2 1\n1 3 0.5\nend\nobservable\n2 2 3 1\n0 2\nend\n", [0])
    assert rows == [(0.0, 0.0, 0.0)]


def test_deform_errors(tmp_path):
    cfg = write(tmp_path, "d.cfg", "dim 2\nobservable\n1 1 1\nend\n")
    assert main(["deform", str(cfg), str(tmp_path / "o.csv"), "--hbar", "-1"]) == 2
    assert main(["deform", str(write(tmp_path, "e.cfg", "dim 2\n")), str(tmp_path / "o.csv")]) == 2
    assert main(["deform", str(write(tmp_path, "f.cfg", "dim 2\nbogus\n")), str(tmp_path / "o.csv")]) == 2


def test_module_entry_point_stdout():
    proc = subprocess.run([sys.executable, "-m", "fermidyn", "evolve", str(FIXTURES / "rotation.cfg"), "-"],
                          capture_output=True, check=True)
    assert proc.stdout == (FIXTURES / "rotation_golden.csv").read_bytes()
    data = np.loadtxt(io.StringIO(proc.stdout.decode()), delimiter=",", skiprows=1)
    assert data.shape == (9, 6)
