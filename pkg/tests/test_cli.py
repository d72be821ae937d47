"""Tests for the command-line interface."""

import io
import json

import pytest

from src.cli import run
from src.model_io import parse_model
from src.operators import OperatorKind, know


@pytest.fixture
def m1_path(models_dir):
    return str(models_dir / "m1.model")


@pytest.fixture
def m2_path(models_dir):
    return str(models_dir / "m2.model")


@pytest.mark.integration
def test_eval_unaware(m1_path, capsys):
    assert run(["eval", m1_path, "--op", "U", "--event", "{a}"]) == 0
    assert capsys.readouterr().out.strip() == "{c}"


@pytest.mark.integration
def test_eval_matches_operators(m2_path, capsys):
    """eval prints what a direct operator call returns."""
    with open(m2_path, encoding="utf-8") as handle:
        model = parse_model(handle.read())
    expected = know(model, OperatorKind.REVISED, model.space.full())

    assert run(["eval", m2_path, "--op", "K'", "--event", "{a b c d}", "--format", "structured"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["event"] == model.space.labels_of(expected)


@pytest.mark.integration
def test_eval_verbose_fixpoint(m2_path, capsys):
    assert run(["eval", m2_path, "--op", "Urev", "--event", "{a}", "--verbose"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "{c d}"
    assert lines[-1] == "cycle: T3 repeats T1"


@pytest.mark.integration
@pytest.mark.parametrize(
    "op,expected",
    [("core", "{c}"), ("negK'", "{c}")],
)
def test_eval_model_ops(m2_path, capsys, op, expected):
    args = ["eval", m2_path, "--op", op]
    if op != "core":
        args += ["--event", "{a b c d}"]
    assert run(args) == 0
    assert capsys.readouterr().out.strip() == expected


@pytest.mark.integration
def test_eval_resolvable_and_classify(m2_path, capsys):
    assert run(["eval", m2_path, "--op", "resolvable", "--event", "{a}"]) == 0
    assert capsys.readouterr().out.strip() == "{d}"

    assert run(["eval", m2_path, "--op", "classify"]) == 0
    assert capsys.readouterr().out.splitlines() == [
        "reflexive: false",
        "partitional: false",
        "has_empty_image: true",
    ]


@pytest.mark.integration
def test_eval_needs_event(m1_path, capsys):
    assert run(["eval", m1_path, "--op", "K"]) == 2
    assert "needs --event" in capsys.readouterr().err


@pytest.mark.integration
def test_check_second_example(m2_path, capsys):
    assert run(["check", m2_path, "--kind", "rev", "--format", "structured"]) == 1
    document = json.loads(capsys.readouterr().out)
    verdicts = {entry["property"]: entry["holds"] for entry in document["reports"]}
    assert verdicts["negative_introspection"] is False
    assert verdicts["ku_introspection"] is True


@pytest.mark.integration
def test_check_selected_properties_hold(m1_path, capsys):
    code = run(["check", m1_path, "--kind", "std", "--property", "truth", "--property", "necessitation"])
    assert code == 0
    out = capsys.readouterr().out
    assert "truth" in out
    assert "monotonicity" not in out


@pytest.mark.integration
def test_check_reads_stdin(capsys):
    stdin = io.StringIO("states: a\nP(a) = {a}\n")
    assert run(["check", "-", "--kind", "std"], stdin=stdin) == 0


@pytest.mark.integration
def test_trace_revised_chain(m2_path, capsys):
    assert run(["trace", m2_path, "--chain", "rdlr"]) == 0
    assert capsys.readouterr().out.splitlines()[-1] == "verdict: preserved"


@pytest.mark.integration
def test_trace_standard_chain_breaks(m1_path, capsys):
    assert run(["trace", m1_path, "--chain", "dlr", "--event", "{a}", "--format", "structured"]) == 1
    trace = json.loads(capsys.readouterr().out)["trace"]
    assert trace["verdict"] == "broken_at"
    assert trace["broken_step"] == 2


@pytest.mark.integration
@pytest.mark.parametrize(
    "args,message",
    [
        (["--chain", "dlr"], "needs --event"),
        (["--chain", "rdlr", "--event", "{a}"], "takes no --event"),
    ],
)
def test_trace_event_rules(m2_path, capsys, args, message):
    assert run(["trace", m2_path] + args) == 2
    assert message in capsys.readouterr().err


@pytest.mark.integration
def test_parse_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.model"
    path.write_text("states: a b\nP(a) = {a, q}\n", encoding="utf-8")

    assert run(["check", str(path), "--kind", "std"]) == 2
    err = capsys.readouterr().err
    assert "unknown state 'q'" in err
    assert "missing P-line for state 'b'" in err
    assert "^" in err


@pytest.mark.integration
def test_missing_file(capsys):
    assert run(["eval", "no/such/file.model", "--op", "core"]) == 2
    assert "error:" in capsys.readouterr().err


@pytest.mark.integration
def test_usage_error_exit_code(capsys):
    assert run(["check"]) == 2


@pytest.mark.integration
def test_gen_is_deterministic(capsys):
    args = ["gen", "--states", "5", "--seed", "42", "--p-empty", "0.3"]
    assert run(args) == 0
    first = capsys.readouterr().out
    assert run(args) == 0
    assert capsys.readouterr().out == first
    assert parse_model(first).space.size == 5


@pytest.mark.integration
def test_gen_invalid_params(capsys):
    assert run(["gen", "--states", "3", "--density", "2"]) == 2
    assert "density" in capsys.readouterr().err


@pytest.mark.integration
def test_fuzz_finds_counterexample(capsys):
    code = run(["fuzz", "--models", "200", "--states", "3", "--kind", "std", "--property", "negative_introspection"])
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("states: s0 s1 s2")
    assert "negative_introspection" in out


@pytest.mark.integration
def test_fuzz_no_counterexample(capsys):
    code = run(["fuzz", "--models", "50", "--states", "4", "--kind", "std", "--property", "truth", "--family", "reflexive"])
    assert code == 3
    assert "no counterexample" in capsys.readouterr().err


@pytest.mark.integration
def test_fuzz_standard_chain_exhaustive(capsys):
    """No model over three states keeps the three assumptions with U nonempty."""
    code = run(["fuzz", "--states", "3", "--kind", "std", "--chain", "dlr", "--exhaustive-models", "--format", "structured"])
    assert code == 3
    assert json.loads(capsys.readouterr().out) == {"format": 1, "counterexample": None}


@pytest.mark.integration
def test_fuzz_revised_chain(capsys):
    code = run(
        [
            "fuzz",
            "--models",
            "100",
            "--states",
            "4",
            "--kind",
            "rev",
            "--chain",
            "dlr",
            "--family",
            "aware_partitional",
            "--p-empty",
            "0.5",
        ]
    )
    assert code == 0
    assert "U(" in capsys.readouterr().out


@pytest.mark.integration
def test_check_sampled_budget(m2_path, capsys):
    code = run(["check", m2_path, "--kind", "rev", "--property", "truth", "--sampled", "--samples", "32", "--seed", "5"])
    assert code == 0
    assert "sampled(32, seed=5)" in capsys.readouterr().out


@pytest.mark.integration
def test_check_exhaustive_beyond_cap(tmp_path, capsys):
    labels = [f"s{i}" for i in range(8)]
    lines = ["states: " + " ".join(labels)] + [f"P({label}) = {{{label}}}" for label in labels]
    path = tmp_path / "eight.model"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    assert run(["check", str(path), "--kind", "std", "--property", "monotonicity", "--exhaustive"]) == 2
    assert "exceeds the cap" in capsys.readouterr().err


@pytest.mark.integration
def test_non_utf8_model_is_an_input_error(tmp_path, capsys):
    path = tmp_path / "latin1.model"
    path.write_bytes(b"# caf\xe9\nstates: a\nP(a) = {a}\n")

    assert run(["check", str(path), "--kind", "std"]) == 2
    err = capsys.readouterr().err
    assert "line 1, column 6: invalid UTF-8 byte 0xe9" in err
    assert "Traceback" not in err


@pytest.mark.integration
def test_non_utf8_stdin_is_an_input_error(capsys):
    stdin = io.TextIOWrapper(io.BytesIO(b"states: a\nP(a) = {\xff}\n"), encoding="utf-8")
    assert run(["eval", "-", "--op", "core"], stdin=stdin) == 2
    assert "line 2, column 9: invalid UTF-8 byte 0xff" in capsys.readouterr().err


@pytest.mark.integration
def test_model_file_with_byte_order_mark(tmp_path, capsys):
    path = tmp_path / "bom.model"
    path.write_bytes(b"\xef\xbb\xbfstates: a b\r\nP(a) = {a}\r\nP(b) = {a b}\r\n")

    assert run(["eval", str(path), "--op", "K", "--event", "{a b}"]) == 0
    assert capsys.readouterr().out.strip() == "{a b}"


@pytest.mark.integration
def test_gen_structured(capsys):
    assert run(["gen", "--states", "3", "--family", "partitional", "--format", "structured"]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["format"] == 1
    model = document["model"]
    assert model["states"] == ["s0", "s1", "s2"]
    assert model["possibility"] == {"s0": ["s0", "s2"], "s1": ["s1"], "s2": ["s0", "s2"]}
    assert parse_model(model["text"]).images == (0b101, 0b010, 0b101)
