import random

import pytest

from pschema.ast import validate
from pschema.bench import encoding, transitive_closure
from pschema.errors import PSError
from pschema.translate import (
    PureProgram, aux_name, brute_force_supported_models, format_ps, parse_datalog, ps_pair,
    supported_models, to_ps,
)

from oracles import random_instance, random_pure_program


def program(text):
    return PureProgram(parse_datalog(text))


def test_parse_datalog():
    (c,) = parse_datalog("p(X) :- e(X), not q(X).")
    assert str(c) == "p(X) :- e(X), not q(X)."
    assert [a.pred for a in c.pos] == ["e"] and [a.pred for a in c.neg] == ["q"]


def test_single_clause_translation():
    p = program("p(X) :- e(X), not q(X).\nq(X) :- e(X), not p(X).")
    text = format_ps(p)
    d = aux_name("p", 1)
    assert d == "__d_p_1"
    for line in [f"{d}(X) -> e(X).", f"{d}(X), q(X) -> false.", f"e(X) -> {d}(X) | q(X).",
                 f"{d}(X) -> p(X).", f"p(X) -> {d}(X)."]:
        assert line in text.splitlines()


def test_body_only_variables_become_placeholders():
    p = program(encoding("tc.dlg"))
    lines = format_ps(p).splitlines()
    assert "__d_tc_2(X,Y,Z) -> r(X,Z)." in lines
    assert "tc(X,Y) -> __d_tc_1(X,Y) | __d_tc_2(X,Y,_)." in lines


def test_even_odd_choice():
    p = program("p(X) :- e(X), not q(X).\nq(X) :- e(X), not p(X).")
    got = set(supported_models([("e", "a")], p))
    assert got == {frozenset({("p", "a")}), frozenset({("q", "a")})}
    assert got == brute_force_supported_models([("e", "a")], p)


def test_transitive_closure_chain():
    p = program(encoding("tc.dlg"))
    got = list(supported_models([("r", "a", "b"), ("r", "b", "c")], p))
    assert got == [frozenset({("tc", "a", "b"), ("tc", "b", "c"), ("tc", "a", "c")})]


def test_projection():
    p = program("p(X) :- e(X), not q(X).\nq(X) :- e(X), not p(X).")
    assert set(supported_models([("e", "a")], p, show=["p"])) == {frozenset(), frozenset({("p", "a")})}


@pytest.mark.parametrize("text", [
    "p(X,X) :- e(X).",
    "p(X) :- e(X).\np(Y) :- e(Y).",
    "p(a) :- e(a).",
    "p(X) :- e(X), e(X,X).",
    "p(X) :- q(X).\nq(X) :- p(X).",
])
def test_not_pure(text):
    with pytest.raises(PSError) as e:
        program(text)
    assert e.value.code == "E_NOT_PURE"


def test_empty_and_bad_instances():
    p = program("p(X) :- e(X).")
    with pytest.raises(PSError) as e:
        list(supported_models([], p))
    assert e.value.code == "E_EMPTY_INSTANCE"
    with pytest.raises(PSError) as e:
        list(supported_models([("p", "a")], p))
    assert e.value.code == "E_BAD_INSTANCE"


@pytest.mark.parametrize("seed", range(20))
def test_translation_validates(seed):
    p = program(random_pure_program(random.Random(seed)))
    rules = to_ps(p)
    assert all(r.head or r.body for r in rules)
    data = random_instance(random.Random(seed), p.extensional)
    validated = ps_pair(data, p)
    assert validated.validated
    aux = {a.pred for r in validated.rules for a in r.head + r.body if hasattr(a, "pred") and a.pred.startswith("__d_")}
    assert aux and not aux & (p.intentional | p.extensional)


def test_reserved_prefix_rejected_in_user_programs():
    from conftest import pair_from
    with pytest.raises(PSError) as e:
        pair_from("e(X) -> __d_p_1(X).", "e(a).")
    assert e.value.code == "E_RESERVED_NAME"


@pytest.mark.parametrize("seed", range(25))
def test_matches_completion_oracle(seed):
    rng = random.Random(seed)
    p = program(random_pure_program(rng))
    data = random_instance(rng, p.extensional)
    assert set(supported_models(data, p)) == brute_force_supported_models(data, p)


def test_tc_oracle_on_random_dag():
    # on cyclic data the completion also admits non-least models
    rng = random.Random(7)
    edges = sorted({tuple(sorted(rng.sample(range(1, 6), 2))) for _ in range(7)})
    p = program(encoding("tc.dlg"))
    (m,) = list(supported_models([("r", v, w) for v, w in edges], p))
    assert {(v, w) for _, v, w in m} == transitive_closure(edges)
