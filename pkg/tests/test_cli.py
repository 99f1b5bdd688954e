import json

import numpy as np
import pytest

from anforge import constructions as cons
from anforge.cli import main
from anforge.core import GlobalMap, dumps, global_map, identity, loads


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def write(tmp_path, name, F):
    path = tmp_path / name
    path.write_text(dumps(F))
    return path


def test_construct_near_hamiltonian_matches_the_worked_example(capsys):
    code, out = run(capsys, "construct", "near-hamiltonian", "--q", 2, "--n", 3)
    assert code == 0
    data = json.loads(out)
    assert data == {"n": 3, "q": 2, "rules": [
        {"inputs": [2], "table": [0, 1]},
        {"inputs": [0, 2], "table": [0, 1, 1, 0]},
        {"inputs": [1], "table": [0, 1]},
    ]}
    assert global_map(loads(out)) == global_map(cons.near_hamiltonian(2, 3))


def test_construct_identity_round_trips(capsys):
    code, out = run(capsys, "construct", "identity", "--q", 2, "--n", 2)
    assert code == 0
    assert global_map(loads(out)) == global_map(identity(2, 2))


def test_construct_writes_files_and_dot(capsys, tmp_path):
    out_file = tmp_path / "nh.json"
    code, out = run(capsys, "construct", "near-hamiltonian", "--q", 2, "--n", 3,
                    "--out", out_file, "--dot", tmp_path / "nh")
    assert code == 0 and out == ""
    assert global_map(loads(out_file.read_text())) == global_map(cons.near_hamiltonian(2, 3))
    dyn = (tmp_path / "nh.dynamics.dot").read_text()
    inter = (tmp_path / "nh.interaction.dot").read_text()
    assert '"000" -> "000";' in dyn and '"100" -> "010";' in dyn
    assert dyn.count("->") == 8
    assert inter.startswith("digraph") and inter.count("->") == 4


def test_construct_rank_deficient_passes_the_rank_check(capsys, tmp_path):
    path = tmp_path / "rd.json"
    assert run(capsys, "construct", "rank-deficient", "--q", 3, "--n", 6, "--out", path)[0] == 0
    code, out = run(capsys, "verify", "rank-bound", "--network", path)
    verdict = json.loads(out)
    assert code == 0 and verdict["status"] == "holds" and verdict["details"]["rank"] == 727


def test_construct_usage_errors(capsys):
    assert main(["construct", "near-hamiltonian", "--q", "2"]) == 2
    assert main(["construct", "near-hamiltonian", "--q", "6", "--n", "2"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["construct", "no-such-kind"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_analyze_examples(capsys, tmp_path):
    _, out = run(capsys, "analyze", write(tmp_path, "id.json", identity(3, 2)))
    r = json.loads(out)
    assert r["fixed_points"] == 8 and r["rank"] == 8 and r["degree"] == 1

    _, out = run(capsys, "analyze", write(tmp_path, "base.json", cons.rank_deficient_base(3)))
    r = json.loads(out)
    assert r["rank"] == 25 and r["collisions"] == 2 and r["degree"] == 2
    assert {frozenset(p) for p in r["collision_pairs"]} == {
        frozenset({"002", "010"}), frozenset({"102", "120"})}
    assert "gray" not in r

    _, out = run(capsys, "analyze", write(tmp_path, "shift.json", cons.circular_shift(4, 2)))
    r = json.loads(out)
    assert r["parity"] == 0 and r["cycle_lengths"] == {"1": 2, "2": 1, "4": 3}
    assert r["center"] == 0 and r["gray"]["is_gray"] is False


def test_analyze_reports_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["analyze", str(bad)]) == 2
    assert main(["analyze", str(tmp_path / "missing.json")]) == 2
    capsys.readouterr()


def test_space_limit_env_var(capsys, tmp_path, monkeypatch):
    path = write(tmp_path, "id.json", identity(8, 2))
    monkeypatch.setenv("ANFORGE_MAX_SPACE", "100")
    assert main(["analyze", str(path)]) == 3
    monkeypatch.setenv("ANFORGE_MAX_SPACE", "256")
    assert main(["analyze", str(path)]) == 0
    capsys.readouterr()


def test_verify_affine_hamiltonian(capsys):
    code, out = run(capsys, "verify", "affine-hamiltonian", "--q", 2, "--n", 3)
    v = json.loads(out)
    assert code == 0 and v["status"] == "holds" and v["details"]["hamiltonian"] == 0
    code, out = run(capsys, "verify", "affine-hamiltonian", "--q", 2, "--n", 2)
    assert code == 0 and json.loads(out)["status"] == "not-applicable"


def test_verify_parity_on_an_fsr(capsys, tmp_path):
    fsr = cons.random_bijective_fsr(6, np.random.default_rng(3))
    code, out = run(capsys, "verify", "parity", "--network", write(tmp_path, "fsr.json", fsr))
    v = json.loads(out)
    assert code == 0 and v["status"] == "holds" and v["details"]["parity"] == 0


@pytest.mark.parametrize("law", ["local-rigidity", "fixed-point-bound", "rank-bound",
                                 "preimage-bound", "parity", "gray-degree", "rank-bound-boolean"])
def test_verify_every_law_on_a_gray_map(capsys, tmp_path, law):
    code, out = run(capsys, "verify", law, "--network",
                    write(tmp_path, "g.json", cons.reflected_gray_successor(4)))
    v = json.loads(out)
    assert v["law"] == law and v["status"] in ("holds", "not-applicable")
    assert code == 0


def test_verify_needs_a_network(capsys):
    assert main(["verify", "parity"]) == 2
    assert main(["verify", "balanced-affine"]) == 0
    capsys.readouterr()


def test_search_bdd_exit_codes(capsys, tmp_path):
    rank3 = write(tmp_path, "rank3.json", GlobalMap(2, 2, [1, 1, 2, 3]))
    code, out = run(capsys, "search", "bdd", "--dynamics", rank3, "--degree", 1)
    r = json.loads(out)
    assert code == 1 and r["status"] == "absent" and r["exhausted"]
    code, out = run(capsys, "search", "bdd", "--dynamics", rank3, "--degree", 1, "--budget", 10)
    assert code == 3 and json.loads(out)["status"] == "truncated"

    target = write(tmp_path, "t.json", GlobalMap(2, 2, [0, 2, 3, 1]))
    code, out = run(capsys, "search", "bdd", "--dynamics", target, "--degree", 2, "--jobs", 2)
    r = json.loads(out)
    assert code == 0 and r["status"] == "found"
    witness = loads(json.dumps(r["witness"]))
    assert sorted(np.bincount(global_map(witness).images, minlength=4).tolist()) == [1, 1, 1, 1]


def test_search_bdig(capsys, tmp_path):
    path = write(tmp_path, "base.json", cons.rank_deficient_base(3))
    code, out = run(capsys, "search", "bdig", "--network", path, "--degree", 1)
    assert code == 1 and json.loads(out)["answer"] is False
    code, out = run(capsys, "search", "bdig", "--network", path, "--degree", 2)
    assert code == 0 and json.loads(out)["degree"] == 2
    assert main(["search", "bdig", "--degree", "2"]) == 2
    capsys.readouterr()


def test_module_entry_point():
    import subprocess
    import sys
    done = subprocess.run([sys.executable, "-m", "anforge", "construct", "identity",
                           "--q", "2", "--n", "1"], capture_output=True, text=True)
    assert done.returncode == 0
    assert global_map(loads(done.stdout)) == global_map(identity(1, 2))
