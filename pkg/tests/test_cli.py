import json
import subprocess
import sys

import pytest

from packset.cli import main
from packset.constructions import powers_packing_set
from packset.field import make_prime_field
from packset.packing import PackingSet


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_packing(tmp_path, ps, name="ps.json"):
    path = tmp_path / name
    path.write_text(json.dumps(ps.to_json()))
    return str(path)


def test_construct_powers(capsys):
    code, out, _ = run(capsys, "construct", "powers", "--p", "11", "--lambda", "1", "--t", "3")
    obj = json.loads(out)
    assert code == 0 and obj["B"] == [1, 2, 4] and obj["status"] == "VerifiedExhaustive"


def test_construct_qr_wrong_class(capsys):
    code, out, err = run(capsys, "construct", "qr", "--p", "17")
    assert code == 1 and out == ""
    assert json.loads(err)["error"] == "WrongResidueClass"


def test_construct_basis_and_cyclotomic(capsys):
    code, out, _ = run(capsys, "construct", "basis", "--p", "3", "--k", "2", "--seed", "1")
    assert code == 0 and json.loads(out)["field"]["k"] == 2
    code, out, _ = run(capsys, "construct", "cyclotomic", "--K", "4", "--Q", "100", "--lambda", "1",
                       "--t", "2", "--seed", "0")
    obj = json.loads(out)
    assert code == 0 and obj["ell"] == 5 and len(obj["B0"]) == 4 and obj["certified"] == "VerifiedSufficient"


def test_construct_unverified_exit_2(capsys):
    code, out, _ = run(capsys, "construct", "powers", "--p", "101", "--lambda", "2", "--t", "4", "--cap", "10")
    assert code == 2 and json.loads(out)["status"] == "Unverified"


def test_construct_seed_required(capsys):
    code, _, err = run(capsys, "construct", "cyclotomic", "--K", "4", "--Q", "100")
    assert code == 1 and "seed" in json.loads(err)["message"]


def test_verify_exit_codes(capsys, tmp_path):
    f11 = make_prime_field(11)
    good = write_packing(tmp_path, PackingSet.build(f11, [1, 2, 4], [1], 3), "good.json")
    bad = write_packing(tmp_path, PackingSet.build(f11, [1, 2, 3], [1], 2), "bad.json")
    code, out, _ = run(capsys, "verify", "--in", good)
    assert code == 0 and json.loads(out)["verdict"] == "VerifiedExhaustive"
    code, out, _ = run(capsys, "verify", "--in", bad)
    obj = json.loads(out)
    assert code == 3 and obj["verdict"] == "Refuted"
    assert obj["witness"] == [{"support": [2], "values": [1]}, {"support": [0, 1], "values": [1, 1]}]
    code, out, _ = run(capsys, "verify", "--in", good, "--cap", "3")
    assert code == 2 and json.loads(out)["verdict"] == "EnumerationTooLarge"


def test_verify_sufficient_mode(capsys, tmp_path):
    f31 = make_prime_field(31)
    ok = write_packing(tmp_path, PackingSet.build(f31, [1, 2, 5, 7], [1], 1), "ok.json")
    fail = write_packing(tmp_path, PackingSet.build(f31, [3, 5, 28], [1], 1), "fail.json")
    code, out, _ = run(capsys, "verify", "--in", ok, "--mode", "sufficient")
    assert code == 0 and json.loads(out)["verdict"] == "VerifiedSufficient"
    code, out, _ = run(capsys, "verify", "--in", fail, "--mode", "sufficient")
    assert code == 4 and json.loads(out)["verdict"] == "SufficientCheckFailed"


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--q", "11", "--A", "2", "--t", "1", "--json")
    assert code == 0 and json.loads(out)["upper_exact"] == 5
    code, out, _ = run(capsys, "bounds", "--q", "101", "--A", "1", "--t", "2", "--json")
    assert json.loads(out)["upper_exact"] == 13
    code, out, _ = run(capsys, "bounds", "--q", "13", "--alphabet", "{1,5}", "--t", "1", "--json")
    assert json.loads(out)["lower_ratio_set"] == 4
    code, out, _ = run(capsys, "bounds", "--q", "11", "--A", "2", "--t", "1")
    assert "upper_exact" in out and "vacuous" in out


def test_codec_exhaustive(capsys, tmp_path):
    path = write_packing(tmp_path, powers_packing_set(11, 1, 3))
    transcript = tmp_path / "t.jsonl"
    code, out, _ = run(capsys, "codec", "--in", path, "--exhaustive", "--seed", "1",
                       "--transcript", str(transcript))
    obj = json.loads(out)
    assert code == 0 and obj["cases"] == 8 and obj["success_rate"] == 1.0
    rows = [json.loads(line) for line in transcript.read_text().splitlines()]
    assert len(rows) == 8 and all(r["decoded_ok"] for r in rows)
    assert set(rows[0]) == {"message", "codeword", "error", "received", "decoded_ok"}


def test_codec_trials_and_violation(capsys, tmp_path):
    path = write_packing(tmp_path, powers_packing_set(11, 1, 3))
    code, out, _ = run(capsys, "codec", "--in", path, "--trials", "0", "--seed", "1")
    obj = json.loads(out)
    assert code == 0 and obj["cases"] == 0 and obj["success_rate"] is None
    code, out, _ = run(capsys, "codec", "--in", path, "--trials", "200", "--seed", "1")
    assert code == 0 and json.loads(out)["success_rate"] == 1.0
    code, out, _ = run(capsys, "codec", "--in", path, "--trials", "50", "--seed", "1", "--lambda-violation")
    obj = json.loads(out)
    assert code == 0 and not obj["in_model"] and obj["mis_decodes"] > 0


def test_maximal(capsys):
    code, out, _ = run(capsys, "maximal", "--q", "11", "--A", "{1}", "--t", "2", "--order", "asc")
    obj = json.loads(out)
    assert code == 0 and obj["size"] == 3 and obj["maximal_lower_bound_holds"]
    code, out, _ = run(capsys, "maximal", "--q", "7", "--A", "1", "--t", "2")
    assert json.loads(out)["size"] == 3
    code, out, _ = run(capsys, "maximal", "--q", "101", "--A", "1,2", "--t", "2", "--order", "shuffle",
                       "--seed", "4")
    assert code == 0 and json.loads(out)["maximal_lower_bound_holds"]


@pytest.mark.parametrize("argv", [
    ["construct", "cyclotomic", "--K", "10", "--Q", "100000", "--lambda", "2", "--t", "2", "--seed", "7"],
    ["maximal", "--q", "101", "--A", "1,2", "--t", "2", "--order", "shuffle", "--seed", "3"],
    ["bounds", "--q", "1000000", "--A", "3", "--t", "2", "--json"],
])
def test_manifest_replay_is_byte_identical(capsys, tmp_path, argv):
    out, manifest = tmp_path / "out.json", tmp_path / "run.json"
    code = main(argv + ["--out", str(out), "--manifest", str(manifest)])
    capsys.readouterr()
    m = json.loads(manifest.read_text())
    assert m["outcome"]["exit_code"] == code and m["version"] and "duration_s" in m
    assert "--manifest" not in m["argv"]
    replay_code, replayed, _ = run(capsys, "replay", str(manifest))
    assert replay_code == code
    assert replayed == out.read_text()


def test_entry_point_subprocess():
    proc = subprocess.run([sys.executable, "-m", "packset.cli", "bounds", "--q", "11", "--A", "2", "--t", "1",
                           "--json"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["upper_exact"] == 5
