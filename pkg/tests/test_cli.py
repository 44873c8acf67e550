import json

import pytest

from qcyclic.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_partitions_line(capsys):
    code, out, _ = run(capsys, "partitions", "4")
    assert code == 0
    assert out.splitlines()[0] == "(4)>(3+1)>(2+2)>(2+1+1)>(1+1+1+1)"


def test_gapset(capsys):
    code, out, _ = run(capsys, "gapset", "22012110201")
    assert (code, out.strip()) == (0, "A_f = {0, 4, 8}")


def test_hh_json(capsys):
    code, out, _ = run(capsys, "hh", "dual_numbers", "--format", "json")
    assert code == 0 and json.loads(out)["HH"] == [2, 1, 1, 1, 1, 1]


def test_hp_defaults_to_tower_depth(capsys):
    code, out, _ = run(capsys, "hp", "dual_numbers", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["inputs"]["max_degree"] == 9
    assert (data["data"]["HP_0"], data["data"]["HP_1"]) == (1, 0)


def test_hp_too_shallow_is_not_a_pass(capsys):
    code, out, _ = run(capsys, "hp", "rationals", "--max-degree", "5")
    assert code == 1 and "undetermined" in out


def test_sbi_and_filtration(capsys):
    assert run(capsys, "sbi", "dual_numbers")[0] == 0
    assert run(capsys, "decompose", "filtration", "truncated_x3", "--ideal", "nil")[0] == 0


def test_check_free(capsys):
    assert run(capsys, "check", "free", "constant_simplicial", "--max-degree", "5")[0] == 0
    assert run(capsys, "check", "free", "--random", "2")[0] == 0


def test_parse_error_exit_code(capsys):
    code, _, err = run(capsys, "hh", "bad_rational")
    assert code == 2 and '$.products["1*e"].e' in err


def test_unknown_ideal(capsys):
    code, _, err = run(capsys, "decompose", "filtration", "dual_numbers", "--ideal", "nope")
    assert code == 2 and "nope" in err


def test_simplicial_document_is_refused_for_hh(capsys):
    assert run(capsys, "hh", "constant_simplicial")[0] == 2


def test_missing_subcommand_exits_nonzero():
    with pytest.raises(SystemExit):
        main([])
