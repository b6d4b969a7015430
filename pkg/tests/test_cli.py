import json
import subprocess
import sys

import pytest

from cliquetree.cli import main
from cliquetree.engine import read_trajectory
from cliquetree.netfile import read_network
from cliquetree.render import read_pgm


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def ct3_file(tmp_path, capsys):
    path = tmp_path / "ct3.json"
    assert run(capsys, "build", "--k", 2, "--cliques", 1, "--out", path)[0] == 0
    return path


def test_build_line_289(tmp_path, capsys):
    path = tmp_path / "net.json"
    code, out, _ = run(capsys, "build", "--k", 2, "--cliques", 144, "--shape", "line", "--out", path)
    assert code == 0
    assert "n=289" in out and "diameter=144" in out
    net = read_network(path)
    assert net.n == 289 and net.plan.shape == "line"
    manifest = json.loads((tmp_path / "net.json.manifest.json").read_text())
    assert manifest["outputs"] == [str(path)] and manifest["seed"] is None


def test_build_k3(tmp_path, capsys):
    code, out, _ = run(capsys, "build", "--k", 3, "--cliques", 5, "--out", tmp_path / "n.json")
    assert code == 0 and "n=16" in out


def test_build_invalid(tmp_path, capsys):
    assert run(capsys, "build", "--k", 2, "--cliques", 0, "--out", tmp_path / "x.json")[0] == 2
    assert run(capsys, "build", "--cliques", 2, "--shape", "random", "--out", tmp_path / "x.json")[0] == 2
    assert run(capsys, "build", "--k", 4, "--cliques", 2, "--project-to", 3,
               "--out", tmp_path / "x.json")[0] == 2


def test_build_io_error(tmp_path, capsys):
    assert run(capsys, "build", "--cliques", 2, "--out", tmp_path / "missing" / "x.json")[0] == 3


def test_build_random_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "build", "--cliques", 20, "--shape", "random", "--seed", 7, "--out", a)
    run(capsys, "build", "--cliques", 20, "--shape", "random:7", "--out", b)
    assert a.read_bytes() == b.read_bytes()
    assert json.loads((tmp_path / "a.json.manifest.json").read_text())["seed"] == 7


def test_simulate_single(ct3_file, tmp_path, capsys):
    out = tmp_path / "t.txt"
    code, stdout, _ = run(capsys, "simulate", ct3_file, "--init", "single:0", "--steps", 2, "--out", out)
    assert code == 0
    assert out.read_text() == "2 3 2\n100\n111\n111\n"
    assert "UniformFixedPoint(1)" in stdout and "transient=1" in stdout


def test_simulate_zero_steps_and_literal(ct3_file, tmp_path, capsys):
    out = tmp_path / "t.txt"
    assert run(capsys, "simulate", ct3_file, "--init", "101", "--steps", 0, "--out", out)[0] == 0
    assert read_trajectory(out.read_text()).configurations() == [(1, 0, 1)]


def test_simulate_from_file(ct3_file, tmp_path, capsys):
    init = tmp_path / "init.txt"
    init.write_text("011\n")
    out = tmp_path / "t.txt"
    assert run(capsys, "simulate", ct3_file, "--init", f"file:{init}", "--steps", 1, "--out", out)[0] == 0
    assert out.read_text().splitlines()[1:] == ["011", "000"]


def test_simulate_random_289(tmp_path, capsys):
    net = tmp_path / "net.json"
    run(capsys, "build", "--cliques", 144, "--out", net)
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    code, stdout, _ = run(capsys, "simulate", net, "--init", "random:7", "--steps", "auto", "--out", a)
    assert code == 0
    traj = read_trajectory(a.read_text())
    assert traj.steps == 146
    parity = int(traj.states[0].sum()) % 2
    assert f"UniformFixedPoint({parity})" in stdout
    transient = int(stdout.split("transient=")[1].split()[0])
    assert transient <= 144
    run(capsys, "simulate", net, "--init", "random:7", "--steps", "auto", "--out", b)
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("init", ["single:3", "random:x", "1102", "10"])
def test_simulate_bad_init(ct3_file, tmp_path, capsys, init):
    assert run(capsys, "simulate", ct3_file, "--init", init, "--out", tmp_path / "t")[0] == 2


def test_verify_parity_ct11(tmp_path, capsys):
    net = tmp_path / "net.json"
    run(capsys, "build", "--cliques", 5, "--shape", "explicit", "--attach", "0,1,2,0,8", "--out", net)
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "verify", net, "--property", "parity", "--mode", "exhaustive",
                       "--workers", 1, "--out", report)
    assert code == 0
    rep = json.loads(report.read_text())
    assert list(rep) == ["network_id", "property", "mode", "configs_checked",
                         "max_transient_observed", "pass", "counterexample", "detail"]
    assert rep["pass"] is True and rep["configs_checked"] == 2048
    assert rep["max_transient_observed"] <= 4


def test_verify_sync_ct34(tmp_path, capsys):
    net = tmp_path / "net.json"
    run(capsys, "build", "--k", 3, "--cliques", 1, "--sync", "--out", net)
    code, out, _ = run(capsys, "verify", net, "--property", "sync", "--workers", 2)
    assert code == 0 and json.loads(out)["configs_checked"] == 81


def test_verify_property_mismatch(ct3_file, capsys):
    assert run(capsys, "verify", ct3_file, "--property", "sync")[0] == 2


def test_verify_radius_and_plus1(ct3_file, capsys):
    assert run(capsys, "verify", ct3_file, "--property", "radius", "--mode", "sample:20:1")[0] == 0
    assert run(capsys, "verify", ct3_file, "--property", "plus1", "--mode", "sample:20:1")[0] == 0
    assert run(capsys, "verify", ct3_file, "--property", "radius")[0] == 2


def test_verify_failure_exit_code(tmp_path, capsys):
    net = tmp_path / "bad.json"
    net.write_text('{"k":2,"n":3,"neighbors":[[0,1],[0,1,2],[1,2]],"offsets":[0,0,0]}\n')
    code, out, _ = run(capsys, "verify", net, "--property", "parity")
    assert code == 1 and json.loads(out)["counterexample"] is not None


def test_verify_budget_is_usage_error(tmp_path, capsys, monkeypatch):
    net = tmp_path / "net.json"
    run(capsys, "build", "--cliques", 10, "--out", net)
    monkeypatch.setenv("CLIQUETREE_BUDGET", "1000")
    assert run(capsys, "verify", net, "--property", "parity")[0] == 2


def test_render(tmp_path, capsys):
    net, traj, img = tmp_path / "net.json", tmp_path / "t.txt", tmp_path / "img.pgm"
    run(capsys, "build", "--k", 3, "--cliques", 96, "--out", net)
    run(capsys, "simulate", net, "--init", "single:0", "--steps", 96, "--out", traj)
    code, out, _ = run(capsys, "render", traj, net, "--out", img)
    assert code == 0 and out.strip() == "289x97"
    pixels = read_pgm(img.read_bytes())
    assert pixels.shape == (97, 289) and (pixels[-1] == 127).all()


def test_render_mismatch(ct3_file, tmp_path, capsys):
    net5, traj = tmp_path / "n5.json", tmp_path / "t.txt"
    run(capsys, "build", "--cliques", 2, "--out", net5)
    run(capsys, "simulate", ct3_file, "--init", "100", "--steps", 1, "--out", traj)
    assert run(capsys, "render", traj, net5, "--out", tmp_path / "x.pgm")[0] == 2


def test_info_line(tmp_path, capsys):
    net = tmp_path / "net.json"
    run(capsys, "build", "--cliques", 144, "--out", net)
    code, out, _ = run(capsys, "info", net)
    assert code == 0
    assert "diameter: 144" in out and "predicted: 144" in out and "invariants: OK" in out


def test_info_projected(tmp_path, capsys):
    net = tmp_path / "net.json"
    run(capsys, "build", "--k", 4, "--cliques", 72, "--project-to", 2, "--out", net)
    code, out, _ = run(capsys, "info", net)
    assert code == 0
    assert "k=2 n=289" in out and "clique_size=5" in out and "diameter: 72" in out


def test_info_reports_asymmetry(tmp_path, capsys):
    net = tmp_path / "net.json"
    # 2 is in N(1) but 1 is missing from N(2)
    net.write_text('{"k":2,"n":3,"neighbors":[[0,1,2],[0,1,2],[0,2]],"offsets":[0,0,0]}\n')
    code, out, _ = run(capsys, "info", net)
    assert code == 1
    assert "invariants: FAIL" in out and "2 -> 1 but not 1 -> 2" in out


def test_info_reports_plan_mismatch(tmp_path, capsys):
    net = tmp_path / "net.json"
    net.write_text('{"k":2,"n":3,"neighbors":[[0,1,2],[0,1,2],[0,2]],"offsets":[0,0,0],'
                   '"plan":{"attach":[0],"k":2,"shape":"line"}}\n')
    code, out, _ = run(capsys, "info", net)
    assert code == 1 and "plan mismatch" in out
    assert run(capsys, "simulate", net, "--init", "000", "--out", tmp_path / "t")[0] == 3


def test_dot(ct3_file, capsys):
    code, out, _ = run(capsys, "dot", ct3_file)
    assert code == 0 and out.count("->") == 9
    code, out, _ = run(capsys, "dot", ct3_file, "--states")
    assert out.count("->") == 9 + 8


def test_missing_file(tmp_path, capsys):
    assert run(capsys, "info", tmp_path / "nope.json")[0] == 3


def test_module_entry_point(ct3_file):
    proc = subprocess.run([sys.executable, "-m", "cliquetree", "info", str(ct3_file)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "k=2 n=3" in proc.stdout


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        main(["simulate"])
    assert exc.value.code == 2
