import subprocess
import sys

import pytest

from ellgen.cli import parse_complex, parse_int_list, run

BROKEN = """\
diagram broken
vertex v1 trivalent (1,0) (0,1) (1,1)
vertex v2 trivalent (-1,0) (0,-1) (1,1)
edge v1:1 v2:1
"""


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "text, value",
    [("2i", 2j), ("0.3", 0.3), ("-0.4+0.23i", -0.4 + 0.23j), ("0.17-0.11i", 0.17 - 0.11j), ("1e-3i", 1e-3j)],
)
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@pytest.mark.parametrize("text", ["", "abc", "1+2", "i2", "1..2"])
def test_parse_complex_rejects(text):
    with pytest.raises(Exception):
        parse_complex(text)


def test_parse_int_list():
    assert parse_int_list("-1,0,1") == [-1, 0, 1]


def test_genus_eval_example(capsys):
    code, out, _ = call(
        capsys, "genus-eval", "--diagram", "builtin:resolved_conifold",
        "--tau", "2i", "--z", "0.3", "--t1", "0.17+0.11i", "--t2", "-0.4+0.23i",
    )
    assert code == 0
    assert "reference" in out and "result: PASS" in out


def test_validate_broken_file(capsys, tmp_path):
    path = tmp_path / "broken.toric"
    path.write_text(BROKEN)
    code, out, _ = call(capsys, "validate", "--diagram", str(path))
    assert code == 1
    assert "VertexImbalance" in out


def test_validate_builtin(capsys):
    assert call(capsys, "validate", "--diagram", "builtin:local_p2")[0] == 0


def test_check_identity(capsys):
    code, out, _ = call(capsys, "check-identity", "--trunc", "8")
    assert code == 0
    assert out.count("[PASS]") == 8


def test_list_builtins(capsys):
    code, out, _ = call(capsys, "list-builtins")
    assert code == 0
    assert "local_p2: chi=3 balanced=no" in out


def test_genus_qexp(capsys):
    code, out, _ = call(capsys, "genus-qexp", "--diagram", "builtin:resolved_conifold", "--trunc", "3")
    assert code == 0
    assert "q^0: " in out and "q^2: " in out
    assert "[PASS] equals (chi/2) theta1(2z)/theta1(z)" in out


def test_averaged_backends(capsys):
    assert call(capsys, "averaged", "--diagram", "builtin:local_p2")[0] == 0
    assert call(capsys, "averaged", "--diagram", "builtin:local_p2", "--backend", "exact", "--trunc", "6")[0] == 0


def test_check_balanced_exit_codes(capsys):
    assert call(capsys, "check-balanced", "--diagram", "builtin:local_p1xp1")[0] == 0
    assert call(capsys, "check-balanced", "--diagram", "builtin:local_p2")[0] == 1


def test_independence_expectations(capsys):
    assert call(capsys, "independence", "--diagram", "builtin:resolved_conifold")[0] == 0
    assert call(capsys, "independence", "--diagram", "builtin:local_p2", "--expect", "dependent")[0] == 0
    assert call(capsys, "independence", "--diagram", "builtin:local_p2", "--expect", "independent")[0] == 1
    assert call(capsys, "independence", "--diagram", "builtin:local_p2")[0] == 0


def test_check_jacobi_and_residues(capsys):
    assert call(capsys, "check-jacobi", "--diagram", "builtin:resolved_conifold", "--samples", "1")[0] == 0
    assert call(capsys, "residue-check", "--m-range", "0")[0] == 0


def test_kv_format(capsys):
    code, out, _ = call(capsys, "--format", "kv", "check-identity", "--trunc", "2")
    assert code == 0
    assert all("=" in line for line in out.splitlines() if line)
    code2, out2, _ = call(capsys, "check-identity", "--trunc", "2", "--format", "kv")
    assert out2 == out


def test_output_is_deterministic(capsys):
    argv = ("independence", "--diagram", "builtin:local_p1xp1", "--samples", "3")
    assert call(capsys, *argv)[1] == call(capsys, *argv)[1]


def test_seed_from_environment(capsys, monkeypatch):
    argv = ("independence", "--diagram", "builtin:local_p1xp1", "--samples", "2")
    monkeypatch.setenv("ELLGEN_SEED", "17")
    a = call(capsys, *argv)[1]
    b = call(capsys, *argv, "--seed", "17")[1]
    monkeypatch.setenv("ELLGEN_SEED", "18")
    c = call(capsys, *argv)[1]
    assert a == b and a != c
    assert "seed: 17" in a or "seed=17" in a


@pytest.mark.parametrize(
    "argv",
    [
        ("genus-eval", "--diagram", "builtin:nope"),
        ("genus-eval", "--diagram", "/nonexistent/file.toric"),
        ("genus-eval", "--diagram", "builtin:resolved_conifold", "--tau", "-1i"),
        ("genus-eval", "--diagram", "builtin:resolved_conifold", "--t1", "0"),
        ("genus-qexp", "--diagram", "builtin:resolved_conifold", "--trunc", "0"),
        ("genus-eval", "--diagram", "builtin:resolved_conifold", "--z", "bogus"),
        ("frobnicate",),
        (),
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    code, out, err = call(capsys, *argv)
    assert code == 2
    assert err.strip()


def test_invalid_file_for_genus_exits_2(capsys, tmp_path):
    path = tmp_path / "broken.toric"
    path.write_text(BROKEN)
    assert call(capsys, "genus-eval", "--diagram", str(path))[0] == 2


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "ellgen.cli", "list-builtins"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert "resolved_conifold" in proc.stdout
