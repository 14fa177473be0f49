import random

import pytest
from hypothesis import given, settings, strategies as st

from pschema.ast import Arith, Atom, CardinalityAtom, Comparison, Const, PLACEHOLDER, Var
from pschema.errors import Inconsistent, PSError
from pschema.grounder import Grounder, eval_predefined, expand_e_atom, ground_pair, simplify_to_core
from pschema.pipeline import models_of
from pschema.theory import CAtom, GroundTheory, dump_gnd, load_gnd, satisfies

from conftest import GOLDEN, pair_from
from oracles import FirstOrderOracle, brute_force_models, random_theory


# ---------------------------------------------------------------- predefined atoms

def test_eval_predefined_examples():
    assert eval_predefined(Arith("+", result=Const(2), left=Const(1), right=Const(1)))
    assert not eval_predefined(Arith("+", result=Const(1), left=Const(1), right=Const(1)))
    assert eval_predefined(Comparison("=", Const("a"), Const("a")))
    assert not eval_predefined(Comparison("=", Const("a"), Const("b")))


def test_arithmetic_on_symbols_is_false():
    assert not eval_predefined(Arith("+", result=Const(2), left=Const("a"), right=Const(1)))
    assert not eval_predefined(Comparison("<", Const("a"), Const(1)))
    assert eval_predefined(Comparison("!=", Const("a"), Const(1)))


def test_division_by_zero_is_false():
    assert not eval_predefined(Arith("/", result=Const(0), left=Const(3), right=Const(0)))
    assert not eval_predefined(Arith("mod", result=Const(0), left=Const(3), right=Const(0)))


def test_overflow():
    big = 2 ** 62
    with pytest.raises(PSError) as e:
        eval_predefined(Arith("*", result=Const(0), left=Const(big), right=Const(4)))
    assert e.value.code == "E_OVERFLOW"


# ---------------------------------------------------------------- e-atoms

def test_expand_e_atom():
    a = Atom("p", (PLACEHOLDER, Var("X"), PLACEHOLDER, Const("a")))
    out = [str(x) for x in expand_e_atom(a, ["a", "b"])]
    assert out == ["p(a,X,a,a)", "p(a,X,b,a)", "p(b,X,a,a)", "p(b,X,b,a)"]


def test_expand_without_placeholder_is_identity():
    a = Atom("p", (Var("X"),))
    assert expand_e_atom(a, ["a"]) == [a]
    assert [str(x) for x in expand_e_atom(Atom("q", (PLACEHOLDER,)), ["c"])] == ["q(c)"]


# ---------------------------------------------------------------- c-atoms

CATOM = (GOLDEN / "catom.ps").read_text(), (GOLDEN / "catom.dps").read_text()


def _golden_catom():
    g = Grounder(pair_from(*CATOM))
    (c,) = [x for x in g.pair.rules[0].head if isinstance(x, CardinalityAtom)]
    return g, c


def members(g, c):
    return [g.atoms[i] for i in c.members]


def test_ground_c_atom_integer_bound():
    g, c = _golden_catom()
    out = g.ground_c_atom(c, {"X": 3})
    assert out.count_window() == (3, 3)
    assert members(g, out) == [("p", 3, 3), ("q", "a"), ("q", "b")]


def test_ground_c_atom_symbol_bound_is_impossible():
    g, c = _golden_catom()
    assert g.ground_c_atom(c, {"X": "a"}) is False


def test_ground_c_atom_first_instance():
    g, c = _golden_catom()
    out = g.ground_c_atom(c, {"X": 1})
    assert out.lower == 1
    assert members(g, out) == [("p", 1, 1), ("p", 1, 2), ("p", 1, 3), ("q", "a"), ("q", "b")]


def test_ground_c_atom_dedupes_members():
    g = Grounder(pair_from("true -> 1 { p(X) : d(X) ; p(Y) : d(Y) } 1.", "d(a). d(b)."))
    (c,) = g.pair.rules[0].head
    out = g.ground_c_atom(c, {})
    assert members(g, out) == [("p", "a"), ("p", "b")]


# ---------------------------------------------------------------- golden files

@pytest.mark.parametrize("name", ["eatom", "arith", "catom"])
def test_golden_grounding(name):
    prog = (GOLDEN / f"{name}.ps").read_text()
    data_file = GOLDEN / f"{name}.dps"
    data = data_file.read_text() if data_file.exists() else ""
    raw = ground_pair(pair_from(prog, data))
    assert dump_gnd(raw) == (GOLDEN / f"{name}_raw.gnd").read_text()
    assert "".join(raw.render_rule(r) + "\n" for r in raw.rules) == (GOLDEN / f"{name}_rules.txt").read_text()
    assert dump_gnd(simplify_to_core(raw)) == (GOLDEN / f"{name}_core.gnd").read_text()


def test_gnd_round_trip():
    for name in ["eatom", "arith", "catom"]:
        text = (GOLDEN / f"{name}_raw.gnd").read_text()
        assert dump_gnd(load_gnd(text)) == text


@pytest.mark.parametrize("text", ["", "gnd 2\n", "gnd 1\na 1 p(a)\n", "gnd 1\nr 0 => x\n",
                                  "gnd 1\na 0 p\nr => c 1 ( 0 )\n", "gnd 1\nzz 0\n"])
def test_load_gnd_rejects_garbage(text):
    with pytest.raises(PSError) as e:
        load_gnd(text)
    assert e.value.code == "E_FORMAT"


def test_arith_example_model():
    raw = ground_pair(pair_from((GOLDEN / "arith.ps").read_text()))
    model = {raw.id_of(("p", 1)), raw.id_of(("p", 2)), raw.id_of(("q", 1, 2))}
    assert all(satisfies(model, r) for r in raw.rules)


def test_catom_forcing():
    core = simplify_to_core(ground_pair(pair_from(*CATOM)))
    assert {core.name(i) for i in core.true} == {"p(3,3)", "q(a)", "q(b)"}


# ---------------------------------------------------------------- nonmonotonicity

T1 = "true -> p(_).\np(a) -> false."


def test_t1_grounds_to_two_rules():
    raw = ground_pair(pair_from(T1))
    assert [raw.render_rule(r) for r in raw.rules] == ["true -> p(a).", "p(a) -> false."]
    with pytest.raises(Inconsistent):
        simplify_to_core(raw)


def test_t2_forces_p_b():
    core = simplify_to_core(ground_pair(pair_from(T1 + "\ntrue -> p(b).")))
    assert {core.name(i) for i in core.true} == {"p(b)"}
    assert list(models_of(pair_from(T1 + "\ntrue -> p(b)."))) == [[("p", "b")]]


# ---------------------------------------------------------------- core invariants

def test_grounding_is_deterministic(enc):
    def core_text():
        return dump_gnd(simplify_to_core(ground_pair(pair_from(enc("nqueens_c.ps"), "index(1..5).", {"n": 5}))))
    assert core_text() == core_text()


def test_core_has_no_data_or_forced_atoms(enc):
    core = simplify_to_core(ground_pair(pair_from(enc("coloring_c.ps"),
                                                  "vtx(1..4). color(1..3). edge(1,2). edge(2,3). edge(3,4).")))
    preds = {a[0] for a in core.atoms}
    assert preds == {"clrd"}
    forced = core.true | core.false
    for r in core.rules + core.verify:
        assert not forced & set(r.atoms())
        for c in r.body_c + r.head_c:
            assert 0 <= c.lower <= c.upper <= len(c.members)
    for h in core.horn:
        assert h.head not in forced and not forced & set(h.body)


def test_out_of_universe_arguments_drop_instances():
    # q(2,3) is not in the base, so the X=2 instance of p(X) -> q(X,X+1) cannot fire.
    core = simplify_to_core(ground_pair(pair_from("true -> p(2).\np(X) -> q(X,X+1).\ntrue -> p(1).")))
    assert {core.name(i) for i in core.true} == {"p(1)", "p(2)", "q(1,2)"}


def test_intermediate_arithmetic_may_leave_universe():
    # X+5 is outside HU but the comparison still evaluates
    program = "d(X), X + 5 > 6 -> p(X).\np(X), X + 5 <= 6 -> false.\np(X) -> d(X)."
    models = list(models_of(pair_from(program, "d(1). d(2).")))
    assert models == [[("p", 2)]]


# ---------------------------------------------------------------- oracle property

BODY = ["p(X)", "q(X,Y)", "d(X)", "d(Y)", "X != Y", "X < Y", "q(X,X+1)", "p(a)", "q(Y,1)"]
HEAD = ["p(X)", "p(Y)", "q(X,_)", "q(Y,X)", "X = Y", "1 { p(Z) : d(Z) } 1", "{ q(X,Z) : d(Z) } 1",
        "p(X+1)", "1 { p(Z) ; q(Z,Z) : d(Z) }", "X { p(Z) : d(Z) }"]
HORN = ["r(X) <- p(X).", "r(Y) <- r(X), q(X,Y).", "r(a) <- q(X,X)."]


@st.composite
def small_programs(draw):
    lines = []
    for _ in range(draw(st.integers(1, 4))):
        body = draw(st.lists(st.sampled_from(BODY), max_size=2, unique=True))
        head = draw(st.lists(st.sampled_from(HEAD), max_size=2, unique=True))
        lines.append(f"{', '.join(body) or 'true'} -> {' | '.join(head) or 'false'}.")
    horn = draw(st.lists(st.sampled_from(HORN), max_size=2, unique=True))
    if horn:
        lines.extend(horn)
        lines.append(draw(st.sampled_from(["r(X), d(X) -> false.", "p(X) -> r(X).", "true -> r(a) | r(1)."])))
    data = " ".join(f"d({c})." for c in draw(st.lists(st.sampled_from(["a", "b", "1"]), min_size=1, unique=True)))
    return "\n".join(lines), "u(a). u(b). u(1). " + data


@settings(max_examples=150, deadline=None)
@given(small_programs())
def test_pipeline_matches_first_order_oracle(case):
    program, data = case
    expected = FirstOrderOracle(program, data).models()
    got = {frozenset(m) for m in models_of(pair_from(program, data))}
    assert got == expected


# ---------------------------------------------------------------- simplification

def _raw_theory(seed):
    t = random_theory(random.Random(seed), 9)
    t.true, t.false = set(), set()
    return t


def _lift(core: GroundTheory):
    return {frozenset(m | core.true) for m in brute_force_models(core)}


@pytest.mark.parametrize("seed", range(60))
def test_simplification_preserves_models(seed):
    raw = _raw_theory(seed)
    expected = brute_force_models(raw)
    try:
        core = simplify_to_core(raw)
    except Inconsistent:
        assert expected == set()
        return
    # the oracle enumerates all atoms of the core, forced ones included
    assert brute_force_models(core) == expected


@pytest.mark.parametrize("seed", range(30))
def test_simplification_is_confluent(seed):
    raw = _raw_theory(seed)
    try:
        ref = simplify_to_core(raw)
    except Inconsistent:
        ref = None
    rng = random.Random(seed)
    for _ in range(3):
        shuffled = GroundTheory(atoms=raw.atoms, closure=raw.closure, rules=rng.sample(raw.rules, len(raw.rules)),
                                verify=list(raw.verify), horn=list(raw.horn), true=set(), false=set(raw.false))
        try:
            other = simplify_to_core(shuffled)
        except Inconsistent:
            assert ref is None
            continue
        assert ref is not None
        assert (other.true, other.false) == (ref.true, ref.false)
        assert set(other.rules) == set(ref.rules)


def test_repeated_variable_with_no_matching_row():
    # every e-row fails the X = X repeat, so the rule has no instance
    program = "e(Y,Y), e(Y,Y) -> p(Y).\np(a) -> false."
    got = {frozenset(m) for m in models_of(pair_from(program, "e(a,c)."))}
    assert got == {frozenset(), frozenset({("p", "c")})}
    assert got == FirstOrderOracle(program, "e(a,c).").models()
