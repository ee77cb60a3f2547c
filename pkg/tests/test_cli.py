import io
import subprocess
import sys

import pytest

from tbacheck import cli
from tbacheck.emptiness import Verdict, SearchStats
from tbacheck.syntax import load


def run(*argv):
    buf = io.StringIO()
    code = cli.main([str(a) for a in argv], out=buf)
    return code, buf.getvalue()


@pytest.fixture
def fixtures_dir(tmp_path):
    code, text = run("gen", "fixtures", "--out", tmp_path)
    assert code == 0 and text.count("wrote:") == 3
    return tmp_path


def kv(text):
    return dict(line.split(": ", 1) for line in text.splitlines() if ": " in line and not line.startswith(" "))


def test_check_exit_codes(fixtures_dir):
    code, text = run("check", fixtures_dir / "a1.tba", "--algo", "optimized")
    assert code == 10
    assert text.splitlines()[0] == "VERDICT: NONEMPTY (rule=lower_bound)"
    fields = kv(text)
    assert fields["gzg_nodes_expanded"] == "0" and fields["algorithm"] == "optimized"
    assert run("check", fixtures_dir / "a2.tba", "--algo", "gzg")[0] == 11
    for algo in cli.ALGOS:
        assert run("check", fixtures_dir / "a3.tba", "--algo", algo)[0] == 10


def test_check_witness(fixtures_dir):
    code, text = run("check", fixtures_dir / "a1.tba", "--witness")
    assert code == 10
    assert "witness_graph: zg" in text
    assert "stem:\n  (a, x=0)\n" in text
    assert "cycle:\n  (a, x=0)\n  --t0--> (b, x>=1)\n  --t1--> (a, x=0)\n" in text


def test_oracle_cap_is_an_error(tmp_path, capsys):
    path = tmp_path / "big.tba"
    path.write_text("clock a b c d\nstate p init accepting\ntrans p -> p reset a\n")
    assert run("check", path, "--algo", "oracle")[0] == 1
    assert "region oracle is limited" in capsys.readouterr().err


def test_parse_error_exit(tmp_path, capsys):
    path = tmp_path / "bad.tba"
    path.write_text("clock x\nstate p\ntrans p -> p guard z<1\n")
    assert run("check", path)[0] == 1
    assert "unknown clock z" in capsys.readouterr().err
    assert run("check", tmp_path / "missing.tba")[0] == 1


def test_usage_errors_are_not_disagreements(capsys):
    assert run("check", "x.tba", "--algo", "bogus")[0] == 1
    assert run("gen", "an", "--n", "1")[0] == 1


def test_node_limit(tmp_path):
    path = tmp_path / "a6.tba"
    assert run("gen", "an", "--n", 6, "--out", path)[0] == 0
    assert run("check", path, "--algo", "snz", "--max-nodes", 20)[0] == 3
    assert run("check", path, "--algo", "snz")[0] == 11


def test_compare(fixtures_dir):
    code, text = run("compare", fixtures_dir / "a1.tba")
    assert code == 0
    rows = [line.split() for line in text.splitlines()[2:]]
    assert [r[0] for r in rows] == ["snz", "gzg", "optimized"]
    assert all(r[3] == "NONEMPTY" for r in rows)
    code, text = run("compare", fixtures_dir / "a2.tba")
    assert code == 0 and text.count("EMPTY") == 3


def test_compare_flags_disagreement(fixtures_dir, monkeypatch):
    monkeypatch.setitem(cli.CHECKERS, "gzg", lambda a, limit=None: Verdict(False, None, None, SearchStats()))
    code, text = run("compare", fixtures_dir / "a1.tba")
    assert code == 2 and "DISAGREEMENT: snz=NONEMPTY, gzg=EMPTY, optimized=NONEMPTY" in text


def test_compare_growth_on_An(tmp_path):
    snz, opt = [], []
    for n in range(2, 7):
        path = tmp_path / f"a{n}.tba"
        run("gen", "an", "--n", n, "--d", 1, "--out", path)
        code, text = run("compare", path)
        assert code == 0
        rows = {line.split()[0]: int(line.split()[1]) for line in text.splitlines()[2:]}
        snz.append(rows["snz"])
        opt.append(rows["optimized"])
    assert all(b >= 2 * a for a, b in zip(snz, snz[1:]))
    assert opt == sorted(opt)


def test_gen_round_trips(tmp_path):
    path = tmp_path / "a4.tba"
    assert run("gen", "an", "--n", 4, "--d", 1, "--out", path)[0] == 0
    assert run("check", path)[0] == 11
    fpath = tmp_path / "f2.tba"
    assert run("gen", "fischer", "--n", 2, "--variant", "mutex", "--out", fpath)[0] == 0
    assert run("check", fpath, "--algo", "optimized")[0] == 11
    code, text = run("gen", "an", "--n", 2)
    assert code == 0 and "\nclock y x1 x2\n" in text


def test_gen_fixtures_verdicts(fixtures_dir):
    codes = [run("check", fixtures_dir / f"{n}.tba")[0] for n in ("a1", "a2", "a3")]
    assert codes == [10, 11, 10]


def test_dot(fixtures_dir, tmp_path):
    code, text = run("dot", fixtures_dir / "a1.tba", "--graph", "gzg")
    assert code == 0 and text.startswith("digraph")
    node_lines = [line for line in text.splitlines() if "label=" in line and "->" not in line]
    assert len(node_lines) == 4
    assert "style=dashed" in text
    code, text = run("dot", fixtures_dir / "a2.tba", "--graph", "gzg")
    assert len([line for line in text.splitlines() if "label=" in line and "->" not in line]) == 8
    # no tau self-loops
    for line in text.splitlines():
        if "->" in line and "dashed" in line:
            src, dst = line.split("->")[0].strip(), line.split("->")[1].split()[0]
            assert src != dst
    single = tmp_path / "lone.tba"
    single.write_text("state p\n")
    out = tmp_path / "lone.dot"
    assert run("dot", single, "--out", out)[0] == 0
    assert out.read_text().count("label=") == 1


def test_stats(fixtures_dir):
    code, text = run("stats", fixtures_dir / "a1.tba")
    fields = kv(text)
    assert code == 0
    assert (fields["zg_nodes"], fields["gzg_nodes"], fields["max_constant"]) == ("2", "4", "1")


def test_module_entry_point(fixtures_dir):
    proc = subprocess.run([sys.executable, "-m", "tbacheck", "check", str(fixtures_dir / "a2.tba")],
                          capture_output=True, text=True)
    assert proc.returncode == 11 and proc.stdout.startswith("VERDICT: EMPTY")
    assert load(fixtures_dir / "a2.tba").n_clocks == 2
