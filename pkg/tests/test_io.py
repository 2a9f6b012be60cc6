import json
import random
from fractions import Fraction as F

import pytest

from htwist import io
from htwist.errors import DocumentError
from htwist.l2alg import L2Morphism
from htwist.pq3 import CourantData, PQ3Data
from htwist.samples import random_rank3_twist, random_split, su2, su2_twisted
from htwist.exactla import RMatrix

BUNDLED = ["su2_twisted", "su2_untwisted", "abelian_n4", "split_n5", "courant_m1n1", "courant_m1n2",
           "courant_so3", "morphism_su2"]


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_documents_load(name):
    kind, obj, raw = io.load_document(io.bundled(name))
    assert kind in io.KINDS and raw["kind"] == kind


@pytest.mark.parametrize("name", BUNDLED)
def test_roundtrip_bundled(name):
    kind, obj, raw = io.load_document(io.bundled(name))
    text = io.to_text(io.dump(kind, obj, raw))
    kind2, obj2, _ = io.load_text(text)
    assert kind2 == kind
    assert io.dump(kind2, obj2, raw) == io.dump(kind, obj, raw)


def test_su2_twisted_bundle_is_the_example():
    _, T, _ = io.load_document(io.bundled("su2_twisted"))
    assert T.bracket_dict() == su2_twisted().bracket_dict()
    assert T.twist_dict() == {(0, 1, 2, 1): 1}


@pytest.mark.parametrize("seed", range(5))
def test_roundtrip_random(seed):
    rng = random.Random(seed)
    T = random_rank3_twist(rng)
    _, T2, _ = io.load_text(json.dumps(io.dump_twisted(T)))
    assert T2.bracket_dict() == T.bracket_dict() and T2.twist_dict() == T.twist_dict()
    S = random_split(rng)
    _, S2, _ = io.load_text(json.dumps(io.dump_split(S)))
    assert S2 == S


def test_roundtrip_polynomial():
    P = PQ3Data(2, 2, {(0, 1): {(1, 2): F(1, 3)}}, {(0, 1, 1): 2}, {}, {(1, 1): {(0, 1): -1}})
    doc = io.dump_pq3(P, ["u", "v"])
    assert doc["rho"] == [[[1, 2], [["1/3", {"u": 1, "v": 2}]]]]
    _, P2, _ = io.load_text(json.dumps(doc))
    assert P2 == P
    CD = CourantData(1, 2, {(0, 0): {(1,): 1}}, [[0, 1], [1, 0]])
    _, CD2, _ = io.load_text(json.dumps(io.dump_courant(CD)))
    assert CD2 == CD


def test_roundtrip_morphism():
    m = L2Morphism(RMatrix.identity(3), {(0, 1): [1, 0, 0]})
    doc = io.dump_morphism(su2_twisted(), su2(), m)
    _, (A, B, m2), _ = io.load_text(json.dumps(doc))
    assert m2 == m and A.twist_dict() == su2_twisted().twist_dict()


def test_rationals():
    assert io.parse_rational("-3/6", "$") == F(-1, 2)
    assert io.parse_rational(4, "$") == 4
    assert io.fmt_rational(F(6, 3)) == "2"
    assert io.fmt_rational(F(-1, 3)) == "-1/3"
    for bad in ("x", 1.5, True, "1/0"):
        with pytest.raises(DocumentError):
            io.parse_rational(bad, "$")


@pytest.mark.parametrize("text,where", [
    ('{"kind": "twisted_algebra", "n": 3,\n "bracket": [[[1, 2, 4], "1"]]}', "$.bracket[0]"),
    ('{"kind": "twisted_algebra", "n": 3, "bracket": [[[1, 2, 3], "1"], [[1, 2, 3], "2"]]}', "$.bracket[1]"),
    ('{"kind": "twisted_algebra", "n": 0}', "$.n"),
    ('{"kind": "twisted_algebra"}', "$.n"),
    ('{"kind": "nope", "n": 3}', "$.kind"),
    ('[1, 2]', "$"),
    ('{"kind": "pq3_data", "base": ["x"], "n": 1, "rho": [[[1, 1], [["1", {"y": 1}]]]]}', "$.rho[0][0]"),
    ('{"kind": "courant_data", "base": [], "n": 2, "g": [["1"]]}', "$.g"),
    ('{"kind": "l2_morphism", "source": {"kind": "twisted_algebra", "n": 1}}', "$.target"),
])
def test_malformed_locations(text, where):
    with pytest.raises(DocumentError) as exc:
        io.load_text(text)
    assert exc.value.where == where


def test_json_syntax_error_has_position():
    with pytest.raises(DocumentError) as exc:
        io.load_text('{"kind": "twisted_algebra",\n  "n": 3,,}')
    assert exc.value.where.startswith("line 2 column")


def test_structural_error_wrapped():
    # a symmetric bracket entry is rejected by the algebra constructor
    with pytest.raises(DocumentError):
        io.load_text('{"kind": "twisted_algebra", "n": 2, "bracket": [[[1, 1, 2], "1"]]}')


def test_input_hash_stable():
    assert io.input_hash("abc") == io.input_hash("abc") != io.input_hash("abd")
    assert len(io.input_hash("abc")) == 16
