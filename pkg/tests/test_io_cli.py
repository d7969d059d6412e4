import json
import math

import numpy as np
import pytest

from gkmalg import io as gio
from gkmalg.cli import main, read_config, UsageError
from gkmalg.coupling import d_coefficients, eta_pairing, structure_coefficients
from gkmalg.harmonics import build_basis
from gkmalg.manifolds import build_grid


def test_dumps_formats_floats_with_17_digits():
    assert gio.dumps(0.1) == "0.10000000000000001"
    assert gio.dumps(1.0) == "1.0"
    assert gio.dumps(np.float64(2.5)) == "2.5"
    assert gio.dumps({"b": 1, "a": [1j, None, True]}) == '{"a": [[0.0, 1.0], null, true], "b": 1}'
    with pytest.raises(ValueError):
        gio.dumps(math.nan)
    for x in (1 / 3, 2 ** 0.5, 1e-300, -7.25e19):
        assert float(gio.dumps(x)) == x


def test_tensor_round_trip(tmp_path):
    b = build_basis("s2", 2)
    g = build_grid(b.manifold, 6)
    c = structure_coefficients(b, g, 2)
    eta = eta_pairing(b, g)
    d = d_coefficients(b, g, "phi")
    c2 = gio.read_structure_tensor(gio.write_tensor(tmp_path / "c.jsonl", c), b)
    assert c2.rows.keys() == c.rows.keys()
    for key, row in c.rows.items():
        for k, v in row.items():
            assert c2.rows[key][k] == v
    e2 = gio.read_eta(gio.write_tensor(tmp_path / "e.jsonl", eta), b)
    assert e2.forward == eta.forward
    d2 = gio.read_d(gio.write_tensor(tmp_path / "d.jsonl", d), b)
    assert d2.rows == d.rows and d2.axis_name == "phi"
    with pytest.raises(ValueError):
        gio.read_eta(tmp_path / "c.jsonl", b)
    with pytest.raises(ValueError):
        gio.read_structure_tensor(tmp_path / "c.jsonl", build_basis("s2", 3))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("mid,cut,extra,count", [("s2", 4, [], 25), ("s3su2", 4, [], 55),
                                                 ("torus", 1, ["--n", "2"], 9)])
def test_basis_command(capsys, mid, cut, extra, count):
    code, out, _ = run(capsys, "basis", "--manifold", mid, "--cutoff", str(cut), *extra)
    assert code == 0
    assert json.loads(out)["count"] == count


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sample\nmanifold = s3su2\ncutoff = 2  # two\n")
    assert read_config(cfg) == {"manifold": "s3su2", "cutoff": 2}
    code, out, _ = run(capsys, "basis", "--config", str(cfg))
    assert code == 0 and json.loads(out)["count"] == 14
    code, out, _ = run(capsys, "basis", "--config", str(cfg), "--cutoff", "1")
    assert json.loads(out)["count"] == 5
    (tmp_path / "bad.cfg").write_text("colour = red\n")
    with pytest.raises(UsageError):
        read_config(tmp_path / "bad.cfg")


@pytest.mark.parametrize("argv", [
    ["basis", "--manifold", "s9"],
    ["basis", "--nonsense"],
    ["coeffs", "--manifold", "s2", "--cutoff", "3", "--exactness", "5"],
    ["basis", "--config", "/nonexistent.cfg"],
    ["bracket", "--manifold", "s2", "--cutoff", "1", "--x", "Q1"],
    ["bracket", "--manifold", "s2", "--cutoff", "1", "--x", "T0:2,1", "--y", "D1"],
    ["verify", "--algebra", "e8"],
    ["unitarity", "--p", "1,1"],
    [],
])
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_coeffs_is_deterministic(tmp_path, capsys):
    args = ["coeffs", "--manifold", "s3su2", "--cutoff", "2"]
    assert run(capsys, *args, "--out", str(tmp_path / "a"))[0] == 0
    assert run(capsys, *args, "--out", str(tmp_path / "b"))[0] == 0
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert names == ["c.jsonl", "d_phi1.jsonl", "d_phi2.jsonl", "d_theta.jsonl", "eta.jsonl", "manifest.json"]
    for n in names:
        assert (tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes()


def test_verify_passes_then_fails_on_corruption(tmp_path, capsys):
    base = ["--manifold", "s2", "--cutoff", "2"]
    assert run(capsys, "coeffs", *base, "--out", str(tmp_path))[0] == 0
    code, out, _ = run(capsys, "verify", *base, "--tensors", str(tmp_path))
    assert code == 0 and json.loads(out)["pass"]
    lines = (tmp_path / "c.jsonl").read_text().splitlines()
    row = json.loads(lines[3])
    row["re"] += 0.25
    lines[3] = json.dumps(row)
    (tmp_path / "c.jsonl").write_text("\n".join(lines) + "\n")
    code, out, err = run(capsys, "verify", *base, "--tensors", str(tmp_path))
    assert code == 1
    failed = {c["check"] for c in json.loads(out)["checks"] if not c["pass"]}
    assert "jacobi" in failed


def test_unitarity_exit_codes(capsys):
    code, out, _ = run(capsys, "unitarity", "--algebra", "su2", "--p", "1", "--c", "5")
    assert code == 0 and json.loads(out)["level"]["pass"]
    code, out, _ = run(capsys, "unitarity", "--algebra", "su2", "--p", "1", "--c", "2,3")
    assert code == 1 and json.loads(out)["verdict"] == "reject"


def test_roots_labels_bracket(capsys):
    code, out, _ = run(capsys, "roots", "--manifold", "s2", "--cutoff", "1", "--format", "json")
    assert code == 0 and json.loads(out)["simple_roots"]["present"]
    code, out, _ = run(capsys, "roots", "--manifold", "torus", "--n", "2", "--cutoff", "1")
    assert code == 0 and "absent" in out
    code, out, _ = run(capsys, "labels", "--algebra", "g2", "--sub", "su3")
    assert code == 0 and json.loads(out)["n0"] == 1
    code, out, _ = run(capsys, "bracket", "--manifold", "torus", "--cutoff", "2", "--x", "T0:1", "--y", "T0:-1")
    assert code == 0 and json.loads(out)["bracket"]["k"] == [[0.5, 0.0]]


def test_thread_variable_is_honoured(monkeypatch):
    from gkmalg.gkm import _threads
    monkeypatch.setenv("GKMALG_THREADS", "3")
    assert _threads() == 3
