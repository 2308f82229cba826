import numpy as np
import pytest

from contracta.contraction import (
    Chain,
    boundary,
    classify,
    contract,
    link_condition,
    make_chain,
    xi_chain,
)
from contracta.core import build_complex, closed_skeleton, lower_star_extend
from contracta.errors import LinkConditionViolated, UnknownEdge
from contracta.generators import delaunay_complex, random_filtration
from contracta.stability import link_condition_local


def _names(K, ids):
    return {K.simplices[s] for s in ids}


def test_fixc_classification(fixc):
    cl = classify(fixc, ("u", "v"))
    assert _names(fixc, cl.with_tag("vanishing")) == {("u", "v"), ("u", "v", "w"), ("u", "v", "x")}
    mirrors = {frozenset((fixc.simplices[s], fixc.simplices[c.partner]))
               for s, c in cl.local().items() if c.tag == "mirrored"}
    assert mirrors == {frozenset({("u",), ("v",)}), frozenset({("u", "w"), ("v", "w")}),
                       frozenset({("u", "x"), ("v", "x")})}
    assert cl.with_tag("adjacent") == []
    assert cl[fixc.id_of(("w",))].tag == "nonlocal"


def test_mirror_partners_are_mutual(fixc):
    cl = classify(fixc, ("u", "v"))
    for s, c in cl.local().items():
        if c.tag == "mirrored":
            assert cl[c.partner].partner == s


def test_figure_style_classification():
    tops = [("r", "u", "v"), ("p", "u", "v"), ("m", "u", "v"), ("n", "u", "v"), ("r", "s", "u")]
    K = lower_star_extend({x: 0.0 for x in "mnprsuv"}, closed_skeleton(tops))
    cl = classify(K, ("u", "v"))
    assert _names(K, cl.with_tag("vanishing")) == {("u", "v")} | {tuple(sorted(t)) for t in tops[:4]}
    ru, rv = K.id_of(("r", "u")), K.id_of(("r", "v"))
    assert cl[ru].partner == rv
    assert {("r", "s", "u"), ("s", "u")} <= _names(K, cl.with_tag("adjacent"))


def test_link_condition_examples(fixc):
    assert link_condition(fixc, ("u", "v"))
    sq = lower_star_extend({x: 0 for x in "uvwx"},
                           [("u",), ("v",), ("w",), ("x",), ("u", "w"), ("v", "w"),
                            ("v", "x"), ("u", "x"), ("u", "v")])
    assert not link_condition(sq, ("u", "v"))
    with pytest.raises(LinkConditionViolated):
        contract(sq, ("u", "v"))
    edge = lower_star_extend({"u": 0, "v": 1}, [("u",), ("v",), ("u", "v")])
    assert link_condition(edge, ("u", "v"))


def test_link_condition_fast_path_agrees():
    rng = np.random.default_rng(3)
    for _ in range(20):
        K = random_filtration(delaunay_complex(12, 2 + int(rng.random() < 0.3), rng, 0.7), rng)
        for eid in K.of_dim(1).tolist():
            u, v = K.simplices[eid]
            if K.id_of((u,)) > K.id_of((v,)):
                u, v = v, u
            assert link_condition(K, eid) == link_condition_local(K, u, v)


def test_fixc_contract(fixc):
    rec = contract(fixc, ("u", "v"))
    Kp = rec.contracted
    assert set(Kp.simplices) == {("u",), ("w",), ("x",), ("u", "w"), ("u", "x")}
    assert Kp.height(Kp.id_of(("u", "w"))) == 1
    Kp.validate()
    for s in fixc.of_dim(0):
        if fixc.simplices[s] == ("w",):
            assert Kp.simplices[rec.image[s]] == ("w",)


def test_induced_height_is_min():
    K = build_complex([(("u",), 0), (("v",), 0), (("w",), 0), (("u", "v"), 6),
                       (("u", "w"), 3), (("v", "w"), 5), (("u", "v", "w"), 7)])
    Kp = contract(K, ("u", "v")).contracted
    assert Kp.height(Kp.id_of(("u", "w"))) == 3


def test_unknown_edge(fixc):
    with pytest.raises(UnknownEdge):
        contract(fixc, ("w", "x"))
    with pytest.raises(UnknownEdge):
        contract(fixc, 0)


def test_xi_examples(fixc):
    rec = contract(fixc, ("u", "v"))
    w = fixc.id_of(("w",))
    assert xi_chain(rec, Chain(0, frozenset({w}))).simplices == {rec.image[w]}
    pair = make_chain(fixc, [("u", "w"), ("v", "w")])
    assert not xi_chain(rec, pair)
    square = make_chain(fixc, [("u", "w"), ("v", "w"), ("v", "x"), ("u", "x")])
    assert not xi_chain(rec, square)


def test_xi_commutes_with_boundary():
    rng = np.random.default_rng(11)
    for _ in range(15):
        K = random_filtration(delaunay_complex(14, 3, rng, 0.8), rng)
        for eid in K.of_dim(1).tolist()[:5]:
            if not link_condition(K, eid):
                continue
            rec = contract(K, eid)
            for p in (1, 2, 3):
                c = Chain(p, frozenset(int(s) for s in K.of_dim(p) if rng.random() < 0.4))
                assert xi_chain(rec, boundary(K, c)) == boundary(rec.contracted, xi_chain(rec, c))
