import json
import subprocess
import sys

import pytest

from boolinv.cli import main, parse_expr
from boolinv.errors import ParseError
from boolinv.finmon import format_bim
from boolinv.rook import symmetric_inverse_monoid


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_expression_grammar():
    assert parse_expr("symmetric(3)") == ("symmetric", 3)
    assert parse_expr(" rook( 2 , cyclic(2) ) ") == ("rook", 2, ("cyclic", 2))
    assert parse_expr("product(symmetric(2), symmetric(1))") == ("product", ("symmetric", 2), ("symmetric", 1))
    assert parse_expr("table(some/file.txt)") == ("table", "some/file.txt")


@pytest.mark.parametrize("text, column", [("symetric(2)", 1), ("symmetric(x)", 11), ("symmetric(2) extra", 14), ("rook(2, klein)", 9)])
def test_expression_errors(text, column):
    with pytest.raises(ParseError) as info:
        parse_expr(text)
    assert info.value.column == column


def test_analyze(capsys):
    code, out, _ = run(capsys, "analyze", "symmetric(2)")
    assert code == 0
    assert "fundamental=true" in out and "zero_simplifying=true" in out and "atoms=4" in out
    code, out, _ = run(capsys, "analyze", "rook(2, cyclic(2))")
    assert "fundamental=false" in out and "isotropy_order=2" in out
    code, out, _ = run(capsys, "analyze", "product(symmetric(2), symmetric(1))")
    assert "zero_simplifying=false" in out


def test_analyze_json(capsys):
    code, out, _ = run(capsys, "analyze", "symmetric(2)", "--json")
    doc = json.loads(out)
    assert doc["fundamental"] is True and doc["elements"] == 7
    assert doc["decompose"] == [{"size": 2, "isotropy_order": 1, "objects": doc["decompose"][0]["objects"]}]


def test_mv(capsys):
    code, out, _ = run(capsys, "mv", "symmetric(2)")
    assert code == 0
    assert out.startswith("mv 3") and "isomorphic to L_3" in out


def test_mean(capsys):
    code, out, _ = run(capsys, "mean", "product(symmetric(2), symmetric(2))")
    assert code == 0 and out.startswith("family with 2 extreme points")
    code, out, _ = run(capsys, "mean", "symmetric(3)")
    assert out.startswith("unique invariant mean")


def test_reconstruct(capsys):
    code, out, _ = run(capsys, "reconstruct", "symmetric(3)")
    assert code == 0 and out.strip() == "isomorphism verified over 34 elements"


def test_table_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "table", "symmetric(2)")
    assert out == format_bim(symmetric_inverse_monoid(2))
    path = tmp_path / "i2.txt"
    path.write_text(out)
    code, out2, _ = run(capsys, "table", f"table({path})")
    assert code == 0 and out2 == out


def test_group_table_file(capsys, tmp_path):
    path = tmp_path / "z2.txt"
    path.write_text("group 2 id=0\n0 1\n1 0\n0 1\n")
    code, out, err = run(capsys, "analyze", f"rook(1, table({path}))")
    assert code == 0, err
    assert "clifford=true" in out


def test_uhf(capsys):
    assert run(capsys, "uhf", "iso", "2^inf", "2^inf*3^inf")[1].strip() == "false"
    assert run(capsys, "uhf", "iso", "2^inf", "2^inf")[1].strip() == "true"
    assert run(capsys, "uhf", "iso", "seq: 2,4,8", "2^inf")[1].strip() == "unknown"
    assert run(capsys, "uhf", "probe", "2^inf", "3/8")[1].strip() == "true"
    assert run(capsys, "uhf", "probe", "2^inf", "1/3")[1].strip() == "false"
    code, out, _ = run(capsys, "uhf", "certify", "2^inf", "2")
    assert code == 0 and out.startswith("spec=2^inf level=2 ok=true")


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "analyze", "symmetric(")[0] == 2
    assert run(capsys, "uhf", "iso", "2^inf * 4", "2^inf")[0] == 2
    assert run(capsys, "uhf", "probe", "2^inf", "1/0")[0] == 2
    bad = tmp_path / "chain.txt"
    bad.write_text("bim 3 zero=0 one=2\n0 0 0\n0 1 1\n0 1 2\n0 1 2\n")
    code, _, err = run(capsys, "analyze", f"table({bad})")
    assert code == 3 and "boolean idempotents" in err
    assert run(capsys, "analyze", "symmetric(6)")[0] == 4
    assert run(capsys, "--max-elements", "5", "analyze", "symmetric(2)")[0] == 4
    assert run(capsys, "analyze", f"table({tmp_path / 'missing.txt'})")[0] == 1


def test_horizon_flag(capsys):
    code, out, _ = run(capsys, "uhf", "probe", "--horizon", "4", "2^inf", "3/8")
    assert code == 0 and out.strip() == "true"


def test_output_is_deterministic(capsys):
    first = run(capsys, "analyze", "rook(2, cyclic(2))", "--json")[1]
    second = run(capsys, "analyze", "rook(2, cyclic(2))", "--json")[1]
    assert first == second


def test_module_entry_point_and_env():
    proc = subprocess.run(
        [sys.executable, "-m", "boolinv", "analyze", "symmetric(2)"],
        capture_output=True,
        text=True,
        env={"BOOLINV_MAX_ELEMENTS": "3", "PATH": ""},
    )
    assert proc.returncode == 4
    proc = subprocess.run([sys.executable, "-m", "boolinv", "uhf", "iso", "2^inf", "2^inf"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "true"
