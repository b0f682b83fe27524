"""Command-line surface: subcommands, exit codes, output formats."""
import json

import pytest

from ffe.cli import EXIT_BUDGET, EXIT_CONFORMANCE, EXIT_INPUT, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestClassify:
    def test_d3_summary_line(self, capsys):
        code, out, _ = run(capsys, "classify", "--d", "3", "--lu")
        assert code == EXIT_OK
        assert "d=3 scope=all lfp_classes=9 lu_classes=6" in out

    def test_d2(self, capsys):
        code, out, _ = run(capsys, "classify", "--d", "2", "--lu")
        assert code == EXIT_OK
        assert "lfp_classes=2 lu_classes=2" in out

    def test_budget_exit(self, capsys):
        code, _, err = run(capsys, "classify", "--d", "5")
        assert code == EXIT_BUDGET
        assert "budget" in err

    def test_json_output(self, capsys, tmp_path):
        path = tmp_path / "cat.json"
        code, _, _ = run(capsys, "classify", "--d", "3", "--lu", "--out", str(path))
        assert code == EXIT_OK
        doc = json.loads(path.read_text())
        assert len(doc["classes"]) == 9

    def test_csv_output(self, capsys, tmp_path):
        path = tmp_path / "cat.csv"
        code, _, _ = run(
            capsys, "classify", "--d", "3", "--out", str(path), "--format", "csv"
        )
        assert code == EXIT_OK
        lines = path.read_text().strip().splitlines()
        assert lines[0].startswith("lfp_class,") and len(lines) == 10


class TestQuery:
    def test_fourier_hadamard(self, capsys):
        code, out, _ = run(capsys, "query", "--d", "4", "--f", "x*y", "--ops", "hadamard,schmidt")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc == {"hadamard": True, "schmidt": 4}

    def test_s6_not_polynomial(self, capsys):
        code, out, _ = run(capsys, "query", "--d", "6", "--f", "s6", "--ops", "is-poly,hadamard")
        doc = json.loads(out)
        assert code == EXIT_OK
        assert doc["is-poly"] is False and doc["hadamard"] is True

    def test_zero_schmidt(self, capsys):
        code, out, _ = run(capsys, "query", "--d", "3", "--f", "0", "--ops", "schmidt")
        assert json.loads(out)["schmidt"] == 1

    def test_matrix_literal(self, capsys):
        literal = '{"d":2,"n":2,"values":[[0,0],[0,1]]}'
        code, out, _ = run(capsys, "query", "--d", "2", "--f", literal, "--ops", "hadamard")
        assert code == EXIT_OK and json.loads(out)["hadamard"] is True

    def test_parse_failure(self, capsys):
        code, _, err = run(capsys, "query", "--d", "3", "--f", "x*z", "--ops", "it")
        assert code == EXIT_INPUT and "input error" in err

    def test_named_state_wrong_d(self, capsys):
        code, _, err = run(capsys, "query", "--d", "4", "--f", "s6", "--ops", "it")
        assert code == EXIT_INPUT


class TestEquiv:
    def test_f32_lfp_equivalent_to_fourier(self, capsys):
        code, out, _ = run(capsys, "equiv", "--d", "6", "--f", "x*y", "--g", "f32", "--mode", "lfp")
        assert code == EXIT_OK and out.startswith("equivalent")

    def test_f4_vs_f22_lfp_and_lu(self, capsys):
        code, out, _ = run(capsys, "equiv", "--d", "4", "--f", "x*y", "--g", "f22", "--mode", "lfp")
        assert code == EXIT_OK and out.startswith("inequivalent")
        code, out, _ = run(capsys, "equiv", "--d", "4", "--f", "x*y", "--g", "f22", "--mode", "lu")
        assert code == EXIT_OK and out.startswith("equivalent")

    def test_self_equivalence(self, capsys):
        code, out, _ = run(capsys, "equiv", "--d", "3", "--f", "x^2*y", "--g", "x^2*y")
        assert code == EXIT_OK and out.startswith("equivalent")


class TestStabilizers:
    def test_multilinear_internal_true(self, capsys):
        code, out, _ = run(
            capsys, "stabilizers", "--d", "3", "--f", "x*y",
            "--check-internal", "--check-unique",
        )
        assert code == EXIT_OK
        doc = json.loads(out)
        assert all(s["internal"] for s in doc["stabilizers"])
        assert doc["fixed_space_dim"] == 1

    def test_x2y_internal_false_at_site_0(self, capsys):
        code, out, _ = run(capsys, "stabilizers", "--d", "3", "--f", "x^2*y", "--check-internal")
        doc = json.loads(out)
        assert doc["stabilizers"][0]["internal"] is False

    def test_zero_function_bare_cycles(self, capsys):
        code, out, _ = run(capsys, "stabilizers", "--d", "3", "--f", "0")
        doc = json.loads(out)
        assert all(set(s["phase_fn"]) == {0} for s in doc["stabilizers"])

    def test_non_cycle_rejected(self, capsys):
        code, _, err = run(
            capsys, "stabilizers", "--d", "3", "--f", "x*y",
            "--cycles", "[[0,1,2],[1,2,0]]",
        )
        assert code == EXIT_INPUT


class TestLowerBound:
    def test_values(self, capsys):
        code, out, _ = run(capsys, "lower-bound", "--d", "3", "--n", "2")
        assert code == EXIT_OK and out.strip() == "3"
        import math

        code, out, _ = run(capsys, "lower-bound", "--d", "7", "--n", "2")
        assert out.strip() == str(-(-(7**36) // math.factorial(7) ** 2))

    def test_d2_n1(self, capsys):
        code, out, _ = run(capsys, "lower-bound", "--d", "2", "--n", "1")
        assert out.strip() == "1"


class TestVerifyAppendix:
    def test_d3_conformance(self, capsys):
        code, out, _ = run(capsys, "verify-appendix", "--d", "3")
        assert code == EXIT_OK
        assert "conformance checks" in out and "MISMATCH" not in out

    def test_missing_fixture(self, capsys):
        code, _, err = run(capsys, "verify-appendix", "--d", "3", "--fixtures", "/no/such.json")
        assert code == EXIT_INPUT
