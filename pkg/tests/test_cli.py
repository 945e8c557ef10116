import io
import json
import subprocess
import sys

import pytest
from hypothesis import given

from conftest import fg_groups
from whitehead.abgroup import ENV_ENUM_CAP, FgAbGroup
from whitehead.cli import ParseError, SemanticError, format_group, parse_group, run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def strip_timing(text):
    doc = json.loads(text)
    doc.pop("timing")
    return doc


# parsing


def test_parse_examples():
    assert parse_group("Z/4 + Z/6 + Z").group().invariants == (2, 12, 0)
    assert parse_group("Z").group().invariants == (0,)
    assert parse_group(" Z/2^3+Z^2 ").group().invariants == (2, 2, 2, 0, 0)
    assert parse_group("0").group() == FgAbGroup()


def test_semantic_errors():
    with pytest.raises(SemanticError):
        parse_group("Z/1")
    with pytest.raises(SemanticError):
        parse_group("Z/0")
    with pytest.raises(SemanticError):
        parse_group("Z^0")


@pytest.mark.parametrize("text,pos", [("", 0), ("Z/", 2), ("Z + ", 4), ("Z/4 Z", 4), ("Q", 0), ("Z/4^", 4)])
def test_syntax_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as e:
        parse_group(text)
    assert e.value.position == pos


@given(fg_groups(64, 3))
def test_print_then_parse_roundtrip(g):
    text = format_group(g)
    assert parse_group(text).group() == g
    assert format_group(parse_group(text).group()) == text


# commands


def test_verify_z2_json():
    code, out, _ = call("verify", "Z/2", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["kernel"] == [2]
    assert doc["results"]["h1_term"] == [2]
    assert doc["results"]["lambda2"] == []
    assert doc["results"]["exactness"]["overall"] is True
    assert doc["schema_version"] == 1 and doc["tool"]["name"] == "whitehead"


def test_verify_json_is_deterministic():
    _, a, _ = call("verify", "Z/2 + Z/4 + Z", "--json")
    _, b, _ = call("verify", "Z/2 + Z/4 + Z", "--json")
    assert strip_timing(a) == strip_timing(b)


def test_gamma_z3():
    code, out, _ = call("gamma", "Z/3", "--json")
    assert code == 0 and json.loads(out)["results"]["gamma"] == [3]


def test_gamma_with_oracle():
    code, out, _ = call("gamma", "Z/2 + Z/2", "--json", "--oracle")
    doc = json.loads(out)
    assert code == 0 and doc["checks"]["gamma_oracle"]
    assert doc["results"]["gamma"] == doc["results"]["gamma_presentation"] == [2, 4, 4]


def test_tor_command():
    code, out, _ = call("tor", "Z/4 + Z/6", "--json")
    doc = json.loads(out)
    assert code == 0 and doc["results"]["tor"] == [2, 2, 2, 12]


def test_homology_command():
    code, out, _ = call("homology", "Z/2", "--json")
    assert code == 0 and json.loads(out)["results"]["homology"] == [[0], [2], [], [2]]


def test_sweep_four():
    code, out, _ = call("sweep", "--max-order", "4", "--json")
    doc = json.loads(out)
    assert code == 0
    assert doc["results"]["classes"] == 5 and doc["results"]["passed"] == 5


def test_human_output_and_quiet():
    code, out, _ = call("verify", "Z/2")
    assert code == 0 and "kernel: [2]" in out and out.strip().endswith("OK")
    code, out, _ = call("verify", "Z/2", "--quiet")
    assert code == 0 and out == ""


def test_parse_errors_exit_nonzero():
    code, out, err = call("verify", "Z/1")
    assert code != 0 and "semantic error" in err and out == ""
    code, _, err = call("gamma", "Z/4 +")
    assert code != 0 and "syntax error" in err and "position" in err


def test_cap_errors_name_the_flag(monkeypatch):
    code, _, err = call("gamma", "Z/64", "--oracle", "--max-enum", "16")
    assert code != 0 and "--max-enum" in err
    code, _, err = call("sweep", "--max-order", "40", "--max-enum", "32")
    assert code != 0 and "--max-enum" in err
    monkeypatch.setenv(ENV_ENUM_CAP, "8")
    code, _, err = call("gamma", "Z/16", "--oracle")
    assert code != 0 and ENV_ENUM_CAP in err
    code, _, _ = call("gamma", "Z/16", "--oracle", "--max-enum", "16")
    assert code == 0


def test_oracle_on_infinite_group_fails_cleanly():
    code, _, err = call("gamma", "Z", "--oracle")
    assert code != 0 and "finite" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "whitehead", "verify", "Z/2", "--json"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["kernel"] == [2]
