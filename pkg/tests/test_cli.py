import json

import pytest

from asymlin.cli import main

from conftest import FIXTURES


@pytest.mark.parametrize("name", ["u_space.txt", "linf_plane.txt"])
def test_fixture_checks_pass(name, capsys):
    assert main(["verify", str(FIXTURES / name)]) == 0
    out = capsys.readouterr().out
    assert "status=fail" not in out


def test_eval_json(capsys):
    assert main(["--format", "json", "eval", str(FIXTURES / "u_space.txt"), "u", "[3]"]) == 0
    assert json.loads(capsys.readouterr().out) == {"value": "3"}


def test_verbs(capsys):
    f = str(FIXTURES / "linf_plane.txt")
    assert main(["norm", f, "T"]) == 0
    assert main(["adjoint", f, "T"]) == 0
    assert main(["precompact", f, "T"]) == 0
    assert main(["distance", f, "T", "Z"]) == 0
    assert main(["--eps", "1/2", "net", f, "T"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "value=3/2 symmetric=3/2"
    assert out[1].startswith("value=3/2")
    assert out[2].startswith("value=Certified")
    assert out[4].startswith("value=verified")


def test_failed_check_exits_1(tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("asymlin/1\nspace u 1\n 1\n 0\nend\ncheck eval u [3] = 4\n")
    assert main(["verify", str(f)]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["suite", "nonexistent"],
        ["eval", "/no/such/file", "u", "[1]"],
        ["eval", str(FIXTURES / "u_space.txt"), "nope", "[1]"],
        ["eval", str(FIXTURES / "u_space.txt"), "u", "[1,2]"],
        ["net", str(FIXTURES / "u_space.txt"), "I"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert capsys.readouterr().err.startswith(("error:", "unknown suite"))


def test_argparse_usage_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_bad_rational_exit_2(tmp_path, capsys):
    f = tmp_path / "bad.txt"
    f.write_text("asymlin/1\nspace u 1\n 3/0\nend\n")
    assert main(["eval", str(f), "u", "[1]"]) == 2
    assert "3/0" in capsys.readouterr().err


def test_suite_json_and_replay(capsys):
    assert main(["--format", "json", "suite", "sup-equivalence", "--count", "3"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["counts"] == {"pass": 3, "fail": 0, "refused": 0}
    first = report["records"][0]["instance"]
    assert main(["suite", "sup-equivalence", "--instance", first]) == 0
