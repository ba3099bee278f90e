"""End-to-end tests for the qobf command-line interface."""
import json

import pytest

from qobf.cli import (
    EXIT_OK,
    EXIT_PARSE,
    EXIT_SIMCAP,
    EXIT_THRESHOLD,
    EXIT_VALIDATION,
    main,
)

BELL_QASM = """OPENQASM 2.0;
include "qelib1.inc";
qreg q[2];
creg c[2];
h q[0];
cx q[0],q[1];
measure q[0] -> c[0];
measure q[1] -> c[1];
"""


@pytest.fixture
def bell_qasm(tmp_path):
    path = tmp_path / "bell.qasm"
    path.write_text(BELL_QASM)
    return str(path)


def obfuscate_bell(tmp_path, bell_qasm, mode="global", seed="1"):
    out = str(tmp_path / "obf.json")
    key = str(tmp_path / "key.json")
    args = [
        "obfuscate", "--in", bell_qasm, "--mode", mode, "--seed", seed,
        "--out", out, "--key-out", key,
    ]
    if mode == "subset":
        args += ["--subset-size", "1"]
    assert main(args) == EXIT_OK
    return out, key


class TestObfuscate:
    @pytest.mark.parametrize("mode", ["global", "chained", "subset"])
    def test_roundtrip_files(self, tmp_path, bell_qasm, mode):
        out, key = obfuscate_bell(tmp_path, bell_qasm, mode=mode)
        doc = json.loads(open(out).read())
        assert doc["format"] == "qobf-circuit"
        keydoc = json.loads(open(key).read())
        assert keydoc["format"] == "qobf-key"
        assert keydoc["mode"] == mode

    def test_deterministic_output(self, tmp_path, bell_qasm):
        a, _ = obfuscate_bell(tmp_path, bell_qasm, seed="9")
        text_a = open(a).read()
        b, _ = obfuscate_bell(tmp_path, bell_qasm, seed="9")
        assert open(b).read() == text_a

    def test_missing_input(self, tmp_path, capsys):
        rc = main([
            "obfuscate", "--in", str(tmp_path / "nope.qasm"),
            "--out", str(tmp_path / "o.json"),
        ])
        assert rc != EXIT_OK

    def test_parse_error_exit_code(self, tmp_path):
        bad = tmp_path / "bad.qasm"
        bad.write_text("OPENQASM 2.0;\nqreg q[1];\nzorp q[0];\n")
        rc = main([
            "obfuscate", "--in", str(bad), "--out", str(tmp_path / "o.json"),
        ])
        assert rc == EXIT_PARSE


class TestSimulate:
    def test_counts_json(self, tmp_path, bell_qasm, capsys):
        rc = main(["simulate", "--in", bell_qasm, "--shots", "256", "--seed", "4", "--json"])
        assert rc == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["shots"] == 256
        assert set(doc["counts"]) <= {"00", "11"}

    def test_out_file(self, tmp_path, bell_qasm):
        out = tmp_path / "counts.json"
        rc = main(["simulate", "--in", bell_qasm, "--shots", "64", "--out", str(out)])
        assert rc == EXIT_OK
        assert sum(json.loads(out.read_text())["counts"].values()) == 64

    def test_seed_determinism(self, tmp_path, bell_qasm, capsys):
        main(["simulate", "--in", bell_qasm, "--shots", "128", "--seed", "2", "--json"])
        a = capsys.readouterr().out
        main(["simulate", "--in", bell_qasm, "--shots", "128", "--seed", "2", "--json"])
        assert capsys.readouterr().out == a

    def test_max_qubits_cap(self, tmp_path, capsys):
        big = tmp_path / "big.qasm"
        big.write_text("OPENQASM 2.0;\nqreg q[6];\ncreg c[6];\nh q;\nmeasure q -> c;\n")
        rc = main(["simulate", "--in", str(big), "--max-qubits", "4", "--shots", "8"])
        assert rc == EXIT_SIMCAP


class TestCompare:
    def test_equivalent_circuits(self, tmp_path, bell_qasm, capsys):
        obf, _ = obfuscate_bell(tmp_path, bell_qasm)
        capsys.readouterr()  # drain the obfuscate summary
        rc = main(["compare", bell_qasm, obf, "--shots", "512", "--runs", "2", "--json"])
        assert rc == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["semantic_accuracy_percent"] > 90.0

    def test_accuracy_floor_failure(self, tmp_path, bell_qasm, capsys):
        # Compare bell against a deliberately different circuit.
        other = tmp_path / "x.qasm"
        other.write_text(
            "OPENQASM 2.0;\nqreg q[2];\ncreg c[2];\nx q[0];\n"
            "measure q[0] -> c[0];\nmeasure q[1] -> c[1];\n"
        )
        rc = main([
            "compare", bell_qasm, str(other),
            "--shots", "512", "--accuracy-floor", "90",
        ])
        assert rc == EXIT_THRESHOLD


class TestAnalyze:
    def test_plain_report(self, tmp_path, bell_qasm, capsys):
        rc = main(["analyze", "--in", bell_qasm])
        assert rc == EXIT_OK
        assert capsys.readouterr().out

    def test_with_key(self, tmp_path, bell_qasm, capsys):
        obf, key = obfuscate_bell(tmp_path, bell_qasm, mode="subset")
        capsys.readouterr()  # drain the obfuscate summary
        rc = main(["analyze", "--in", obf, "--key", key, "--json"])
        assert rc == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert "security" in doc

    def test_corrupted_json_rejected(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"format": "qobf-circuit", "version": 1}')
        rc = main(["analyze", "--in", str(bad)])
        assert rc == EXIT_VALIDATION


class TestBench:
    def test_small_bench_run(self, tmp_path, capsys):
        rc = main([
            "bench", "--suite", "paper", "--modes", "global",
            "--shots", "64", "--runs", "1", "--seed", "0", "--json",
        ])
        assert rc == EXIT_OK
        rows = json.loads(capsys.readouterr().out)
        assert len(rows) == 10
        assert {r["circuit"] for r in rows} == {
            "bv", "dj", "grover3", "phase_kickback", "qaoa_maxcut",
            "qft", "shor_mod15_order", "simon", "toffoli", "vqe_ansatz",
        }


class TestTopLevel:
    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0

    def test_unknown_command(self):
        with pytest.raises(SystemExit):
            main(["frobnicate"])
