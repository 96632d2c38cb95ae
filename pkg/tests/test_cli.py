import json

import pandas as pd

from permcode import cli


def _keys(tmp_path, *extra):
    sk, pk = tmp_path / "sk.json", tmp_path / "pk.json"
    argv = ["keygen", "--m", "5", "--seed", "7", "--out-private", str(sk), "--out-public", str(pk)]
    assert cli.run(argv + list(extra)) == 0
    return sk, pk


def test_keygen_encrypt_decrypt(tmp_path, capsys):
    sk, pk = _keys(tmp_path, "--family", "wreath", "--n", "6")
    ct = tmp_path / "c.json"
    argv = ["encrypt", "--public", str(pk), "--message", "4242", "--seed", "1"]
    assert cli.run(argv + ["--out", str(ct)]) == 0
    capsys.readouterr()
    assert cli.run(["decrypt", "--private", str(sk), "--public", str(pk), "--in", str(ct)]) == 0
    assert capsys.readouterr().out.strip() == "4242"


def test_decrypt_failure_exit_code(tmp_path, capsys):
    sk, pk = _keys(tmp_path, "--family", "wreath", "--n", "3")
    ct = tmp_path / "c.json"
    ct.write_text(json.dumps({"version": 1, "word": [1] * 15, "checksum": "00" * 8}))
    assert cli.run(["decrypt", "--private", str(sk), "--public", str(pk), "--in", str(ct)]) == 2
    assert "DECODE_FAILURE" in capsys.readouterr().out


def test_usage_errors(tmp_path):
    assert cli.run([]) == 1
    assert cli.run(["keygen", "--family", "wreath", "--m", "5"]) == 1
    missing = str(tmp_path / "none.json")
    assert cli.run(["decrypt", "--private", "x", "--public", "y", "--in", missing]) == 1
    # wreath without --n
    argv = ["keygen", "--family", "wreath", "--m", "5", "--seed", "1"]
    assert cli.run(argv + ["--out-private", "a", "--out-public", "b"]) == 1


def test_attack_writes_report_and_settings(tmp_path):
    _, pk = _keys(tmp_path, "--family", "wreath", "--n", "8")
    ct = tmp_path / "c.json"
    cli.run(["encrypt", "--public", str(pk), "--message", "99", "--seed", "2", "--out", str(ct)])
    report = tmp_path / "out" / "block.json"
    argv = ["attack", "--kind", "block", "--public", str(pk), "--in", str(ct), "--seed", "3"]
    assert cli.run(argv + ["--report", str(report)]) == 0
    data = json.loads(report.read_text())
    assert data["success"] and data["recovered"]["message_index"] == 99
    assert (tmp_path / "out" / "block.settings.json").exists()


def test_inapplicable_attack_exit_code(tmp_path):
    _, pk = _keys(tmp_path, "--family", "wreath", "--n", "3")
    report = tmp_path / "conj.json"
    argv = ["attack", "--kind", "conjugator", "--public", str(pk), "--seed", "0"]
    assert cli.run(argv + ["--report", str(report)]) == 3
    assert json.loads(report.read_text())["success"] is False


def test_analyze_writes_csv(tmp_path):
    out = tmp_path / "thr.csv"
    argv = ["analyze", "threshold-curve", "--m", "5", "--n", "10:20:10", "--levels", "0.95,0.5"]
    assert cli.run(argv + ["--out", str(out)]) == 0
    df = pd.read_csv(out)
    assert list(df.columns) == ["m", "n", "prob_level", "max_k", "error_rate"]
    assert len(df) == 4
    assert (tmp_path / "thr.settings.json").exists()


def test_simulated_curve_needs_seed(tmp_path):
    assert cli.run(["analyze", "simulated-curve", "--out", str(tmp_path / "s.csv")]) == 1


def test_reduce_with_verify(tmp_path, capsys):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 3 3\n1 2 0\n-1 3 0\n-2 -3 0\n")
    out = tmp_path / "sd.json"
    assert cli.run(["reduce", "--in", str(cnf), "--k", "3", "--out", str(out), "--verify"]) == 0
    assert "VERIFY OK" in capsys.readouterr().out
    assert json.loads(out.read_text())["threshold"] == 12


def test_verify_exit_code(monkeypatch, capsys):
    import permcode.verify as verify_mod

    def fake_run(seed, settings):
        rows = [
            {"check": "a", "result": "PASS", "detail": ""},
            {"check": "b", "result": "FAIL", "detail": "x"},
        ]
        return pd.DataFrame(rows)

    monkeypatch.setattr(verify_mod, "run_verification", fake_run)
    assert cli.run(["verify"]) == 4
    assert "FAIL" in capsys.readouterr().out


def test_empty_checksum_exits_with_usage_error(tmp_path):
    sk, pk = _keys(tmp_path, "--family", "wreath", "--n", "3")
    ct = tmp_path / "c.json"
    ct.write_text(json.dumps({"version": 1, "word": [1] * 15, "checksum": ""}))
    assert cli.run(["decrypt", "--private", str(sk), "--public", str(pk), "--in", str(ct)]) == 1


def test_runtime_failures_map_to_exit_codes(tmp_path, monkeypatch, capsys):
    from permcode.cryptosystem import KeyGenerationError

    def failing_keygen(*args, **kwargs):
        raise KeyGenerationError("order check failed")

    monkeypatch.setattr(cli, "keygen", failing_keygen)
    sk, pk = tmp_path / "sk.json", tmp_path / "pk.json"
    argv = ["keygen", "--family", "wreath", "--m", "5", "--n", "3", "--seed", "1"]
    assert cli.run(argv + ["--out-private", str(sk), "--out-public", str(pk)]) == 1
    assert "KeyGenerationError" in capsys.readouterr().err
    assert not sk.exists()


def test_small_two_subsets_key_is_rejected(tmp_path):
    sk, pk = tmp_path / "sk.json", tmp_path / "pk.json"
    argv = ["keygen", "--family", "two-subsets", "--m", "4", "--seed", "1"]
    assert cli.run(argv + ["--out-private", str(sk), "--out-public", str(pk)]) == 1
