import json

import pytest

from cuntz.cli import COMMANDS, main, run


@pytest.fixture
def files(tmp_path):
    monoid = tmp_path / "n2.json"
    monoid.write_text(json.dumps({"dim": 2, "generators": [[1, 0], [0, 1]], "unit": [1, 1], "name": "N2"}))
    kr = tmp_path / "kr.json"
    kr.write_text(json.dumps({"a": {"blocks": [[[1, 0], [0, 1]]]},
                              "b": {"blocks": [[[1, 0], [0, "9/10"]]]}, "eps": "1/5"}))
    broken = tmp_path / "broken.json"
    broken.write_text('{\n  "dim": 2,\n  "generators": [[1, 0]\n}\n')
    return {"monoid": str(monoid), "kr": str(kr), "broken": str(broken)}


def test_compare_extnat():
    assert run(["compare", "--model", "extnat", "3", "5"]) == (0, "3 ≤ 5: true; 3 ≪ 5: true")
    code, text = run(["compare", "--model", "extnat", "inf", "inf"])
    assert code == 0 and text.endswith("≪ ∞: false")


def test_demo_goodearl_shows_non_cancellation():
    code, text = run(["demo", "goodearl"])
    assert code == 0
    assert "non-cancellation" in text and "FAILED" not in text


def test_limit_report():
    code, text = run(["limit", "--system", "uhf2", "--horizon", "64", "--budget", "40"])
    assert code == 0
    assert text.startswith("order table") and "lim(uhf2) O6: pass" in text


def test_property_failure_exits_one():
    code, text = run(["weak-divisibility", "--model", "semigroup:2,3"])
    assert code == 1 and "witness" in text
    code, text = run(["almost-unperforated", "--model", "perforated", "--budget", "30"])
    assert code == 1 and '"y": [3, 0]' in text


def test_configuration_errors_exit_two(files):
    code, text = run(["groth", files["broken"]])
    assert code == 2 and f"{files['broken']}:4:1" in text
    assert run(["compare", "--model", "nope", "1", "2"])[0] == 2
    assert run(["check-axioms", "--budget", "0"])[0] == 2
    assert run(["dtau", "blocks: [n=2: (1,1)]", "--tolerance", "bogus=1"])[0] == 2
    assert run(["frobnicate"])[0] == 2


def test_json_output_is_reproducible():
    argv = ["check-axioms", "--model", "semigroup:2,3", "--budget", "30", "--format", "json"]
    a, b = run(argv), run(argv)
    assert a == b
    doc = json.loads(a[1])
    assert set(doc) == {"command", "config", "verdicts", "witnesses", "facts", "timings"}
    assert doc["timings"] == {}
    assert "total_s" in json.loads(run(argv + ["--timings"])[1])["timings"]


@pytest.mark.parametrize("argv", [
    ["check-axioms", "--model", "twopoint", "--budget", "30"],
    ["check-morphism", "double", "--budget", "30"],
    ["eps-cut", "blocks: [n=3: (1,1)(1/2,1)]", "1/4"],
    ["dtau", "blocks: [n=3: (5,1)(2,1)]"],
    ["kr-contract", "{kr}"],
    ["groth", "{monoid}"],
    ["states", "{monoid}"],
    ["almost-unperforated", "--budget", "30"],
    ["weak-divisibility", "--model", "laff:2", "--budget", "30"],
    ["limit", "--system", "fibonacci", "--budget", "30"],
    ["continuity", "--system", "uhf2", "--pairs", "20"],
    ["recover", "integers", "--budget", "30"],
    ["demo", "uhf"],
], ids=lambda a: a[0])
def test_every_command_runs(argv, files):
    argv = [x.format(**files) for x in argv]
    code, text = run(argv)
    assert code == 0, text
    assert text


def test_commands_are_all_covered():
    assert len(COMMANDS) == 14


def test_specific_outputs(files):
    assert run(["eps-cut", "blocks: [n=3: (1,1)(1/2,1)]", "1/4"])[1] == "blocks: [n=3: (3/4,1)(1/4,1)]"
    assert run(["dtau", "blocks: [n=3: (5,1)(2,1)]"])[1] == "d_tau = 2/3"
    assert "2 extreme state(s)" in run(["states", files["monoid"]])[1]
    assert run(["groth", files["monoid"]])[1].startswith("G(N2) = Z^2")


def test_main_prints(capsys):
    assert main(["compare", "2", "1"]) == 0
    assert "2 ≤ 1: false" in capsys.readouterr().out
