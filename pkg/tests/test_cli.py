import json
import os
import subprocess
import sys

import pytest

from artifact import iforests as itf
from artifact.acceptors import acceptor_from_json
from artifact.cli import main
from artifact.degrees import degree_forest

DATA = os.path.join(os.path.dirname(__file__), "data")


def path(name):
    return os.path.join(DATA, name)


def cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_degree_const(capsys):
    code, out, _ = cli(capsys, "degree", path("const1.json"))
    assert (code, out) == (0, "[<1>]\n")


def test_reduces_quiet_exit_codes(capsys):
    assert cli(capsys, "reduces", path("m2.json"), path("const1.json"), "--quiet") == (1, "", "")
    assert cli(capsys, "reduces", path("const1.json"), path("m2.json"), "--quiet")[0] == 0
    # without --quiet a negative verdict is printed and the exit code stays 0
    assert cli(capsys, "reduces", path("m2.json"), path("const1.json"))[:2] == (0, "false\n")


def test_hasse_file(capsys, tmp_path):
    out = tmp_path / "out.dot"
    code, _, _ = cli(capsys, "hasse", "--k", "2", "--depth", "1", "--max-nodes", "2", "-o", str(out))
    assert code == 0
    text = out.read_text()
    assert text.count("[label=") == 5 and text.count("->") == 4


def test_degree_json_round_trips(capsys):
    code, out, _ = cli(capsys, "degree", path("m2.json"), "--json")
    obj = json.loads(out)
    assert obj["text"] == "[<0(1)>]"
    assert itf.forest_from_json(obj) == itf.parse_forest("[<0(1)>]")


def test_tuple_form(capsys):
    assert cli(capsys, "degree", path("m3_tuple.json"))[1] == "[<0>]\n"


def test_equiv_and_level(capsys):
    assert cli(capsys, "equiv", path("m2.json"), path("m2.json"))[1] == "true\n"
    assert cli(capsys, "in-level", path("m2.json"), "--forest", "[<0(1)>]")[1] == "true\n"
    assert cli(capsys, "in-level", path("m2.json"), "--forest", "[<1(0)>]", "--quiet")[0] == 1
    code, out, _ = cli(capsys, "in-level", path("m2.json"), "--forest", "[<0(1)>]", "--json")
    assert json.loads(out) == {"result": True}


def test_aperiodic(capsys):
    code, out, _ = cli(capsys, "aperiodic", path("m2.json"), "--d", "2", "--balanced", "--json")
    assert json.loads(out) == {"aperiodic": False, "d": 2, "d_counting_pattern": True,
                               "balanced_counting_pattern": True}
    assert cli(capsys, "aperiodic", path("m2.json"), "--quiet")[0] == 1
    assert cli(capsys, "aperiodic", path("m3.json"), "--quiet")[0] == 0


def test_rho_and_op_write_acceptors(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert cli(capsys, "rho", "[<0(1)>(<1>(<0>))]", "-o", str(out))[0] == 0
    acc = acceptor_from_json(json.loads(out.read_text()))
    assert itf.equiv_h(degree_forest(acc), itf.parse_forest("[<0(1)>(<1>(<0>))]"))
    out2 = tmp_path / "q.json"
    assert cli(capsys, "op", path("qi_expr.json"), "-o", str(out2))[0] == 0
    assert cli(capsys, "degree", str(out2))[1] == "[<0(1)>]\n"


def test_forest_commands(capsys, tmp_path):
    assert cli(capsys, "minimize-forest", "[0(0,1),1]")[1] == "[0(1)]\n"
    assert cli(capsys, "mset", "[0(1)]")[1] == "1(0)\n"
    assert cli(capsys, "leq", "[0]", "[0,1]")[1] == "true\n"
    f = tmp_path / "f.json"
    f.write_text(json.dumps(itf.forest_to_json(itf.parse_forest("[0,0(1)]"))))
    code, out, _ = cli(capsys, "minimize-forest", str(f), "--json")
    assert json.loads(out)["text"] == "[0(1)]"
    g = tmp_path / "g.txt"
    g.write_text("[1(0)]\n")
    assert cli(capsys, "leq", str(f), str(g))[1] == "false\n"
    code, out, _ = cli(capsys, "mset", "[0,1]", "--json")
    assert len(json.loads(out)["trees"]) == 2


def test_eval(capsys):
    assert cli(capsys, "eval", path("m2.json"), "--lasso", ",1")[1] == "0\n"
    assert cli(capsys, "eval", path("m2.json"), "--lasso", "1,0")[1] == "1\n"


def test_input_errors(capsys, tmp_path):
    code, _, err = cli(capsys, "degree", path("missing.json"))
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"k": 2, "states": 1}')
    code, _, err = cli(capsys, "degree", str(bad))
    assert code == 2 and "alphabet_size" in err
    bad.write_text("{not json")
    code, _, err = cli(capsys, "degree", str(bad))
    assert code == 2 and "line 1" in err
    assert cli(capsys, "minimize-forest", "[0(1")[0] == 2
    assert cli(capsys, "eval", path("m2.json"), "--lasso", "12")[0] == 2
    assert cli(capsys, "nosuch")[0] == 2


def test_resource_cap_exit_code(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, _, err = cli(capsys, "rho", "[<0(1(0(1)))>]", "-o", str(out), "--loop-cap", "5")
    assert code == 3


def test_output_is_deterministic(capsys):
    runs = {cli(capsys, "hasse", "--k", "2", "--depth", "2", "--max-nodes", "3")[1] for _ in range(2)}
    assert len(runs) == 1


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "artifact", "degree", path("const1.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "[<1>]\n"


@pytest.mark.parametrize("n", [1])
def test_selfcheck_runs(capsys, n):
    code, out, _ = cli(capsys, "selfcheck", "--max-nodes", str(n))
    assert code == 0
    assert out.count("PASS") == 12
