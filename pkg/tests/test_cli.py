"""Tests for the markov-embed command line."""

import io
import json

import numpy as np
import pytest

from markov_embedding_mcp.cli import main

JORDAN = "0.5 0.5 0\n0 0.5 0.5\n0 0 1\n"


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


def _run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


def test_embed_identity(capsys, write):
    """The identity is embeddable and the command exits 0."""
    code, out = _run(capsys, ["embed", write("eye.txt", "1 0 0\n0 1 0\n0 0 1\n")])
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "Embeddable"
    assert data["uniqueness"] == "Unique"
    assert data["generators"][0]["matrix"] == [[0.0, 0.0, 0.0]] * 3


def test_embed_not_embeddable_exit_code(capsys, write):
    """A negative determinant exits 1 with the reason in the document."""
    code, out = _run(capsys, ["embed", write("swap.txt", "0 1\n1 0\n")])
    assert code == 1
    assert json.loads(out)["reason"] == "DET_NONPOSITIVE"


def test_embed_output_is_deterministic(capsys, write):
    """Two runs on the same input print the same bytes."""
    path = write("kendall.json", '{"dim": 2, "rows": [[0.7, 0.3], [0.1, 0.9]], "label": "k"}')
    _, first = _run(capsys, ["embed", path])
    _, second = _run(capsys, ["embed", path])
    assert first == second
    assert json.loads(first)["input"]["label"] == "k"


def test_embed_timing(capsys, write):
    """--timing adds elapsed_ms."""
    _, out = _run(capsys, ["embed", "--timing", write("m.txt", "0.9 0.1\n0.2 0.8\n")])
    assert json.loads(out)["elapsed_ms"] >= 0


def test_embed_table(capsys, write):
    """--table prints markdown instead of JSON."""
    code, out = _run(capsys, ["embed", "--table", write("m.txt", "0.9 0.1\n0.2 0.8\n")])
    assert code == 0
    assert out.startswith("## 2x2 matrix")
    assert "| verdict | Embeddable |" in out


def test_default_format_from_settings(capsys, write, monkeypatch):
    """The configured default format applies unless --json is given."""
    monkeypatch.setenv("MARKOV_EMBEDDING_MCP__DEFAULT_OUTPUT_FORMAT", "markdown")
    path = write("m.txt", "0.9 0.1\n0.2 0.8\n")
    _, out = _run(capsys, ["embed", path])
    assert out.startswith("## ")
    _, out = _run(capsys, ["embed", "--json", path])
    assert json.loads(out)["verdict"] == "Embeddable"


def test_embed_from_stdin(capsys, monkeypatch):
    """- reads the matrix from standard input."""
    monkeypatch.setattr("sys.stdin", io.StringIO("[[0.9, 0.1], [0.2, 0.8]]"))
    code, out = _run(capsys, ["embed", "-"])
    assert code == 0
    assert json.loads(out)["case_tag"]["pattern"] == "D2_SIMPLE"


@pytest.mark.parametrize(
    "text",
    ["0.5 0.6\n0.5 0.5\n", "0.5 abc\n0.5 0.5\n", '{"dim": 2, "rows": [[1, 0]]}'],
)
def test_input_errors_exit_64(capsys, write, text):
    """Malformed or non-Markov input exits 64 with a JSON error."""
    code, out = _run(capsys, ["embed", write("bad.txt", text)])
    assert code == 64
    assert "error" in json.loads(out)


def test_missing_file(capsys, tmp_path):
    """An unreadable path is an input error."""
    code, out = _run(capsys, ["embed", str(tmp_path / "absent.txt")])
    assert code == 64
    assert "cannot read" in json.loads(out)["error"]


def test_argument_errors_are_json(capsys):
    """Usage errors exit 64 and print a JSON error."""
    code, out = _run(capsys, [])
    assert code == 64
    assert "error" in json.loads(out)
    code, out = _run(capsys, ["embed"])
    assert code == 64
    assert "error" in json.loads(out)


def test_help_exits_zero(capsys):
    """--help prints usage and succeeds."""
    code, out = _run(capsys, ["--help"])
    assert code == 0
    assert "markov-embed" in out


def test_tolerance_flags(capsys, write):
    """Tolerance overrides are validated."""
    path = write("m.txt", "0.9 0.1\n0.2 0.8\n")
    code, _ = _run(capsys, ["embed", "--tol-residual", "1e-6", path])
    assert code == 0
    code, out = _run(capsys, ["embed", "--tol-residual", "0", path])
    assert code == 64
    assert "error" in json.loads(out)


def test_classify(capsys, write):
    """classify reports the case and the necessary checks without a verdict."""
    code, out = _run(capsys, ["classify", write("j.txt", JORDAN)])
    assert code == 0
    data = json.loads(out)
    assert "verdict" not in data
    assert data["case_tag"]["pattern"] == "D3_JORDAN2"
    assert data["necessary"]["transitivity_ok"] is False


def test_exp_and_log(capsys, write):
    """log inverts exp on a generator."""
    Q = np.array([[-0.5, 0.3, 0.2], [0.1, -0.4, 0.3], [0.2, 0.2, -0.4]])
    code, out = _run(capsys, ["exp", write("q.json", json.dumps(Q.tolist()))])
    assert code == 0
    M = json.loads(out)["rows"]
    np.testing.assert_allclose(np.sum(M, axis=1), 1.0, atol=1e-14)

    code, out = _run(capsys, ["log", write("m.json", json.dumps(M))])
    assert code == 0
    np.testing.assert_allclose(json.loads(out)["rows"], Q, atol=1e-12)


def test_log_on_negative_eigenvalue(capsys, write):
    """No real principal logarithm exits 1."""
    code, out = _run(capsys, ["log", write("swap.txt", "0 1\n1 0\n")])
    assert code == 1
    assert "no real principal logarithm" in json.loads(out)["error"]


def test_model_k3st(capsys):
    """Model parameters are echoed and decided."""
    code, out = _run(capsys, ["model", "k3st", "x=0.135", "y=0.015", "z=0.085"])
    assert code == 0
    data = json.loads(out)
    assert data["model"] == {"kind": "k3st", "x": 0.135, "y": 0.015, "z": 0.085}
    assert data["input"]["label"] == "k3st"


def test_model_k3st_violating(capsys):
    """Parameters outside the K3ST condition exit 1."""
    code, out = _run(capsys, ["model", "k3st", "x=0.05", "y=0.1", "z=0.3"])
    assert code == 1
    assert json.loads(out)["verdict"] == "NotEmbeddable"


@pytest.mark.parametrize(
    "argv",
    [
        ["model", "k3st", "x=0.6", "y=0.3", "z=0.3"],
        ["model", "jc", "c=abc"],
        ["model", "jc", "c"],
        ["model", "tn", "a1=0.1"],
        ["model", "k2p", "transition=0.1"],
    ],
)
def test_model_parameter_errors(capsys, argv):
    """Missing, malformed or infeasible parameters exit 64."""
    code, out = _run(capsys, argv)
    assert code == 64
    assert "error" in json.loads(out)


def test_gcheck(capsys, write):
    """gcheck reports the route; 2x2 input is refused."""
    code, out = _run(capsys, ["gcheck", write("j.txt", JORDAN)])
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "GEmbeddable"
    assert data["route"] == "ZERO_OFF_DIAGONAL"

    code, _ = _run(capsys, ["gcheck", write("m.txt", "0.9 0.1\n0.2 0.8\n")])
    assert code == 64


@pytest.mark.parametrize("method", ["--pbs", "--product"])
def test_simulate(capsys, write, method):
    """Both methods agree with exp(t Q) and pass the determinant check."""
    from markov_embedding_mcp.linalg import mat_exp

    Q = [[-0.5, 0.3, 0.2], [0.1, -0.4, 0.3], [0.2, 0.2, -0.4]]
    path = write("s.json", json.dumps([{"Q": Q, "duration": 2.0}]))
    code, out = _run(capsys, ["simulate", method, "--det-check", "--t", "1.5", path])
    assert code == 0
    data = json.loads(out)
    assert data["det_check"] is True
    assert data["t"] == 1.5
    np.testing.assert_allclose(data["result"]["rows"], mat_exp(1.5 * np.array(Q)), atol=1e-12)


def test_simulate_time_outside_schedule(capsys, write):
    """t beyond the span is an input error."""
    path = write("s.json", json.dumps([{"Q": [[-1, 1], [0, 0]], "duration": 1.0}]))
    code, _ = _run(capsys, ["simulate", "--t", "3", path])
    assert code == 64


def test_schema(capsys):
    """schema prints a JSON schema."""
    code, out = _run(capsys, ["schema", "verdict"])
    assert code == 0
    assert "properties" in json.loads(out)


def test_simulated_poisson_pair_is_not_embeddable(capsys, write):
    """exp(Q1) exp(Q2) for non-commuting Poisson generators fails transitivity."""
    Q1 = [[-1.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]]
    Q2 = [[0.0, 0.0, 0.0], [0.0, 0.0, 0.0], [1.0, 0.0, -1.0]]
    path = write("s.json", json.dumps([{"Q": Q1, "duration": 1.0}, {"Q": Q2, "duration": 1.0}]))
    code, out = _run(capsys, ["simulate", "--product", path])
    assert code == 0
    a = 1.0 - np.exp(-1.0)
    expected = [[1.0 - a, a, 0.0], [0.0, 1.0, 0.0], [a, 0.0, 1.0 - a]]
    np.testing.assert_allclose(json.loads(out)["result"]["rows"], expected, atol=1e-14)

    code, out = _run(capsys, ["embed", write("flow.json", out)])
    assert code == 1
    assert json.loads(out)["reason"] == "TRANSITIVITY"


def test_verdict_output_validates(capsys, write):
    """CLI output parses back into the published verdict model."""
    from markov_embedding_mcp.documents import VerdictDocument

    _, out = _run(capsys, ["embed", write("m.txt", "0.9 0.1\n0.2 0.8\n")])
    doc = VerdictDocument.model_validate_json(out)
    assert doc.verdict == "Embeddable"


def test_log_level_goes_to_stderr(capsys, write):
    """--log-level installs a stderr sink; stdout keeps only the document."""
    from loguru import logger

    path = write("m.txt", "0.9 0.1\n0.2 0.8\n")
    try:
        code = main(["--log-level", "debug", "embed", path], configure_logging=True)
        captured = capsys.readouterr()
    finally:
        logger.remove()
        logger.disable("markov_embedding_mcp")
    assert code == 0
    assert json.loads(captured.out)["verdict"] == "Embeddable"
    assert "Command finished" in captured.err
    assert "component" in captured.err
