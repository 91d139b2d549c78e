import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import finset_pushout, pushout_diagram
from poset_cosheaf.covers import Cover, principal_cover
from poset_cosheaf.cosheaf import FIGURE1_METADATA, cosheaf_arrow, figure1_fixture
from poset_cosheaf.errors import ParseError, ValidationError
from poset_cosheaf.generate import random_diagram, random_poset
from poset_cosheaf.instance import InstanceFile, builtin_path, dumps, load, loads, save
from poset_cosheaf.poset import DownSet, whole
from poset_cosheaf.valcat import FINSET, VECT


def lambda_instance():
    F = pushout_diagram()
    P = F.base
    C = Cover.of(whole(P), [DownSet.of(P, ["x", "z"]), DownSet.of(P, ["y", "z"])])
    return InstanceFile(P, diagram=F, covers={"two": C, "stars": principal_cover(whole(P))},
                        metadata={"note": "pushout"})


def test_roundtrip_lambda(tmp_path):
    inst = lambda_instance()
    path = tmp_path / "lam.json"
    save(inst, path)
    back = load(path)
    assert back == inst
    assert dumps(back) == path.read_text(encoding="utf-8")


def test_roundtrip_finset():
    inst = InstanceFile(finset_pushout().base, diagram=finset_pushout())
    assert loads(dumps(inst)) == inst


def test_layout_of_written_file():
    data = json.loads(dumps(lambda_instance()))
    assert data["poset"] == {"elements": ["x", "y", "z"], "relations": [["z", "x"], ["z", "y"]]}
    assert data["diagram"]["maps"]["z<y"] == [["1"], ["0"]]
    assert data["covers"]["two"]["target"] == ["x", "y", "z"]


def test_rationals_are_lowest_terms():
    text = dumps(lambda_instance()).replace('"0"', '"0/5"')
    assert dumps(loads(text)) == dumps(lambda_instance())


def test_builtin_figure1_matches_code():
    P, G, U1, U2 = figure1_fixture()
    inst = load(builtin_path("figure1"))
    assert inst.precosheaf() == G
    assert inst.cover("U1") == U1 and inst.cover("U2") == U2
    assert inst.metadata == FIGURE1_METADATA
    fresh = InstanceFile(P, diagram=G.diagram, opens=G.opens, open_names=G.diagram.base.names,
                         covers={"U1": U1, "U2": U2}, metadata=dict(FIGURE1_METADATA))
    assert dumps(fresh) == builtin_path("figure1").read_text(encoding="utf-8")


def test_precosheaf_from_poset_indexed_diagram():
    G = lambda_instance().precosheaf()
    assert not cosheaf_arrow(G, lambda_instance().cover("two")).verdict


# ------------------------------------------------------------------ errors

BASE = {"poset": {"elements": ["a", "b"], "relations": [["a", "b"]]},
        "diagram": {"category": "vect", "objects": {"a": 1, "b": 1}, "maps": {"a<b": [["1"]]}}}


def mutate(**changes):
    data = json.loads(json.dumps(BASE))
    for path, value in changes.items():
        block = data
        keys = path.split("__")
        for k in keys[:-1]:
            block = block[k]
        block[keys[-1]] = value
    return json.dumps(data)


def test_base_document_loads():
    assert loads(json.dumps(BASE)).diagram.objects == (1, 1)


@pytest.mark.parametrize("text, error", [
    ("{", ParseError),
    ("[]", ParseError),
    ('{"poset": {"elements": ["a"]}}', ParseError),
    (mutate(poset__relations=[["a", "c"]]), ValidationError),
    (mutate(poset__relations=[["a", "b"], ["b", "a"]]), ValidationError),
    (mutate(poset__elements=["a", "a<b"]), ParseError),
    (mutate(diagram__category="sets"), ParseError),
    (mutate(diagram__objects={"a": 1}), ValidationError),
    (mutate(diagram__objects={"a": -1, "b": 1}), ParseError),
    (mutate(diagram__maps={"a<b": [["x"]]}), ParseError),
    (mutate(diagram__maps={"a<b": [["1", "0"]]}), ValidationError),
    (mutate(diagram__maps={"a-b": [["1"]]}), ParseError),
    (mutate(diagram__maps={"b<a": [["1"]]}), ValidationError),
    (mutate(diagram__maps={}), ValidationError),
    (mutate(covers={"C": {"target": ["b"], "members": [["b"]]}}), ValidationError),
    (mutate(covers={"C": {"target": ["a", "b"], "members": [["a"]]}}), ValidationError),
    (mutate(metadata={"k": 3}), ParseError),
])
def test_invalid_documents(text, error):
    with pytest.raises(error):
        loads(text)


def test_non_hasse_key_rejected():
    data = {"poset": {"elements": ["a", "b", "c"], "relations": [["a", "b"], ["b", "c"]]},
            "diagram": {"category": "finset", "objects": {"a": 1, "b": 1, "c": 1},
                        "maps": {"a<b": [0], "b<c": [0], "a<c": [0]}}}
    with pytest.raises(ValidationError, match="Hasse"):
        loads(json.dumps(data))


def test_non_functorial_rejected():
    data = {"poset": {"elements": ["b", "l", "r", "t"],
                      "relations": [["b", "l"], ["b", "r"], ["l", "t"], ["r", "t"]]},
            "diagram": {"category": "vect", "objects": {"b": 1, "l": 1, "r": 1, "t": 1},
                        "maps": {"b<l": [["1"]], "b<r": [["1"]], "l<t": [["1"]], "r<t": [["2"]]}}}
    with pytest.raises(ValidationError, match="compose differently"):
        loads(json.dumps(data))


def test_parse_error_has_position():
    with pytest.raises(ParseError, match="line 2"):
        loads('{\n  "poset": ,\n}')


def test_missing_cover_name():
    with pytest.raises(ValidationError):
        lambda_instance().cover("nope")


# -------------------------------------------------------------- property

@settings(max_examples=100)
@given(st.integers(0, 10 ** 9), st.integers(0, 5), st.sampled_from([VECT, FINSET]))
def test_random_roundtrip_is_byte_stable(seed, n, category):
    rng = random.Random(seed)
    P = random_poset(rng, n)
    inst = InstanceFile(P, diagram=random_diagram(rng, P, category, 2),
                        covers={"stars": principal_cover(whole(P))})
    text = dumps(inst)
    assert loads(text) == inst
    assert dumps(loads(text)) == text
