import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from defeuler.cf import CFun
from defeuler.complex import circle, grid_complex, path_complex, sphere_boundary
from defeuler.defint import DefFun
from defeuler.document import Document, dumps, from_dict, load, loads, parse_rat, rat, save, to_dict
from defeuler.errors import ParseError
from defeuler.fixtures import NAMED, random_cfun, random_deffun

F = Fraction
seeds = st.integers(0, 2**32 - 1)


@pytest.mark.parametrize("name", sorted(NAMED))
def test_named_round_trip(name):
    doc = NAMED[name]()
    back = loads(dumps(doc))
    assert back == doc
    assert type(back.function) is type(doc.function)
    assert back.name == doc.name


@given(seeds, st.sampled_from(["continuous", "cellwise", "general", "cf"]))
def test_random_round_trip(seed, kind):
    rng = random.Random(seed)
    K = rng.choice([grid_complex(2, 3), circle(5), sphere_boundary(), path_complex([F(-1, 3), 0, F(7, 2)])])
    f = random_cfun(rng, K) if kind == "cf" else random_deffun(rng, K, kind)
    doc = Document(K, f)
    assert loads(dumps(doc)) == doc


def test_function_kinds():
    K = path_complex([0, 1])
    assert to_dict(Document(K, CFun.indicator(K, [(0,)])))["function"] == {
        "kind": "cell_values",
        "cells": [{"cell": [0], "value": 1}],
    }
    x = DefFun.from_function(K, lambda p: p[0])
    assert to_dict(Document(K, x))["function"]["kind"] == "vertex_values"
    jump = DefFun.from_cell_values(K, [0, 1, F(1, 2)])
    assert to_dict(Document(K, jump))["function"]["kind"] == "cell_affine"


def test_rationals_are_strings():
    K = path_complex([F(1, 3), 2])
    d = to_dict(Document(K, DefFun.from_vertex_values(K, [F(-2, 7), 5])))
    assert d["complex"]["vertices"] == [["1/3"], ["2"]]
    assert d["function"]["values"] == ["-2/7", "5"]
    assert rat(F(6, 4)) == "3/2"


@pytest.mark.parametrize("s,expected", [("3/4", F(3, 4)), (" -2 ", F(-2)), (7, F(7)), ("0.25", F(1, 4))])
def test_parse_rat(s, expected):
    assert parse_rat(s) == expected


@pytest.mark.parametrize("bad", [0.5, True, None, "x", "1/0", [1]])
def test_parse_rat_rejects(bad):
    with pytest.raises(ParseError):
        parse_rat(bad)


def good():
    return to_dict(NAMED["interval-x"]())


def broken(edit):
    d = good()
    edit(d)
    return d


@pytest.mark.parametrize(
    "d",
    [
        [],
        broken(lambda d: d.pop("version")),
        broken(lambda d: d.update(version=2)),
        broken(lambda d: d["complex"].pop("cells")),
        broken(lambda d: d["complex"]["vertices"].append("oops")),
        broken(lambda d: d["complex"].update(cells=[[0, True]])),
        broken(lambda d: d["function"].update(kind="spline")),
        broken(lambda d: d["function"]["values"].pop()),
        broken(lambda d: d.update(name=3)),
        broken(lambda d: d.update(function={"kind": "cell_values", "cells": [{"cell": [0, 5], "value": 1}]})),
        broken(lambda d: d.update(function={"kind": "cell_values", "cells": [{"cell": [0], "value": "1/2"}]})),
        broken(lambda d: d.update(function={"kind": "cell_affine", "cells": [{"cell": [0, 1], "values": ["1"]}]})),
    ],
)
def test_malformed_documents(d):
    with pytest.raises(ParseError):
        from_dict(d)


def test_invalid_json_and_missing_file(tmp_path):
    with pytest.raises(ParseError):
        loads("{not json")
    with pytest.raises(ParseError):
        load(tmp_path / "absent.json")


def test_save_load(tmp_path):
    doc = NAMED["torus-h"]()
    path = tmp_path / "t.json"
    save(doc, path)
    assert load(path) == doc
    assert json.loads(path.read_text())["format"] == "defeuler-document"
