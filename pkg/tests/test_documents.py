import json

import pytest

from qcyclic.algcore import Algebra, SplitSquare
from qcyclic.cyccat import CyclicModule, SimplicialModule, validate_cyclic
from qcyclic.documents import ParseError, corpus_names, load, load_document, rational

ALGEBRA = {
    "kind": "algebra",
    "name": "Q[e]",
    "basis": ["1", "e"],
    "unit": {"1": "1"},
    "products": {"1*1": {"1": "1"}, "1*e": {"e": "1"}, "e*1": {"e": "1"}},
    "ideals": {"nil": [{"e": "1"}]},
}


@pytest.mark.parametrize("name", corpus_names())
def test_every_bundled_document_loads_or_reports_a_path(name):
    if name.startswith("bad_"):
        with pytest.raises(ParseError) as err:
            load(name)
        assert err.value.location.startswith("$")
    else:
        doc = load(name)
        assert isinstance(doc.value, (Algebra, SplitSquare, SimplicialModule, CyclicModule))


def test_zero_denominator_is_located():
    with pytest.raises(ParseError) as err:
        load("bad_rational")
    assert err.value.location == '$.products["1*e"].e'


def test_algebra_document_round_trip():
    doc = load_document(ALGEBRA)
    assert doc.value.dim == 2 and doc.ideals["nil"].dim == 1


def test_non_associative_table_is_rejected():
    bad = json.loads(json.dumps(ALGEBRA))
    bad["products"]["e*e"] = {"1": "1"}
    bad["products"]["e*1"] = {}
    with pytest.raises(ParseError):
        load_document(bad)


def test_unknown_basis_name_is_located():
    bad = json.loads(json.dumps(ALGEBRA))
    bad["products"]["1*e"] = {"f": "1"}
    with pytest.raises(ParseError) as err:
        load_document(bad)
    assert err.value.location == '$.products["1*e"].f'


def test_schema_violation_is_located():
    bad = dict(ALGEBRA, basis="1,e")
    with pytest.raises(ParseError) as err:
        load_document(bad)
    assert err.value.location == "$.basis"


def test_rationals_are_exact():
    assert rational("-3/6", "$") == rational("-1/2", "$")
    with pytest.raises(ParseError):
        rational(0.5, "$")


def test_cyclic_document_is_validated():
    doc = {"kind": "cyclic", "dims": [1, 1], "faces": {"1,0": [["1"]], "1,1": [["1"]]},
           "degeneracies": {"0,0": [["1"]]}, "cyclic": {"0": [["1"]], "1": [["1"]]}}
    assert validate_cyclic(load_document(doc).value)
    doc["cyclic"]["1"] = [["2"]]
    with pytest.raises(ParseError):
        load_document(doc)


def test_missing_file_is_reported():
    with pytest.raises(FileNotFoundError):
        load("no_such_document_anywhere")
