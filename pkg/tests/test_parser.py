import pytest
from hypothesis import given, settings, strategies as st

from pschema.ast import (
    PLACEHOLDER, Atom, BinOp, CardinalityAtom, Comparison, Const, Rule, SetDef, Var,
    format_program, format_rule,
)
from pschema.errors import ParseError, PSError
from pschema.parser import parse_constants, parse_data, parse_program, tokenize


def facts(text, **kw):
    return {str(a) for a in parse_data(text, **kw)}


def test_data_facts():
    assert facts("vtx(a). edge(a,b).") == {"vtx(a)", "edge(a,b)"}


def test_data_range_expands():
    assert facts("index(1..3).") == {"index(1)", "index(2)", "index(3)"}


def test_data_range_with_named_constant():
    assert facts("index(1..n).", constants={"n": 2}) == {"index(1)", "index(2)"}


def test_data_duplicates_collapse():
    assert len(parse_data("p(a). p(a). p(1..2). p(2).")) == 3


def test_data_ground_only():
    with pytest.raises(PSError) as e:
        parse_data("vtx(X).")
    assert e.value.code == "E_NONGROUND_DATA"


def test_eatom_consequent():
    (r,) = parse_program("vtx(X) -> clrd(X,_).")
    assert r.body == (Atom("vtx", (Var("X"),)),)
    assert r.head == (Atom("clrd", (Var("X"), PLACEHOLDER)),)
    assert r.head[0].is_eatom


def test_catom_rule():
    (r,) = parse_program("index(R) -> 1 { q(R,C) : index(C) } 1.")
    (c,) = r.head
    assert isinstance(c, CardinalityAtom)
    assert c.lower == Const(1) and c.upper == Const(1)
    assert c.defs == (SetDef(Atom("q", (Var("R"), Var("C"))), (Atom("index", (Var("C"),)),)),)


def test_horn_rule():
    (r,) = parse_program("visit(Y) <- visit(X), hc_edge(X,Y).")
    assert r.horn
    assert r.head == (Atom("visit", (Var("Y"),)),)
    assert [a.pred for a in r.body] == ["visit", "hc_edge"]


def test_facts_constraints_and_keywords():
    rules = parse_program("""
        % comment line
        p(a).
        true -> q(b) | p(b).
        p(X), q(X) -> false.
        r(a) | r(b).
    """)
    assert [format_rule(r) for r in rules] == ["p(a).", "q(b) | p(b).", "p(X), q(X) -> false.", "r(a) | r(b)."]


def test_arithmetic_precedence():
    (r,) = parse_program("p(X) -> q(X + 2 * X mod 3, (X + 1) * 2).")
    a = r.head[0]
    assert a.args[0] == BinOp("+", Var("X"), BinOp("mod", BinOp("*", Const(2), Var("X")), Const(3)))
    assert a.args[1] == BinOp("*", BinOp("+", Var("X"), Const(1)), Const(2))


def test_comparisons():
    (r,) = parse_program("p(X), p(Y), X <= Y + 1 -> X != Y.")
    assert r.body[2] == Comparison("<=", Var("X"), BinOp("+", Var("Y"), Const(1)))
    assert r.head == (Comparison("!=", Var("X"), Var("Y")),)


def test_constants_bindings():
    assert parse_constants(["n=8"]) == {"n": 8}
    assert parse_constants([]) == {}
    assert parse_constants(["s=abc", "k=-2"]) == {"s": "abc", "k": -2}
    with pytest.raises(PSError) as e:
        parse_constants(["n=8", "n=9"])
    assert e.value.code == "E_DUPLICATE_CONST"
    for bad in ["n", "N=1", "n=X", "n=1.5"]:
        with pytest.raises(PSError) as e:
            parse_constants([bad])
        assert e.value.code == "E_BAD_BINDING"


@pytest.mark.parametrize("text", [
    "p(X) -> q(X)",              # missing dot
    "p(X) -> q(X.",
    "p(X) q(X).",
    "p(X) -> { q(X) .",
    "p(X) -> 1 { q(X) : } 1.",
    "p(X) -> q(X) # .",
    "p(X) <- 1 { q(X) } .",
])
def test_parse_errors_carry_spans_inside_input(text):
    with pytest.raises(ParseError) as e:
        parse_program(text, "f.ps")
    span = e.value.span
    assert span.file == "f.ps"
    assert 0 <= span.start < span.end <= len(text) + 1
    assert span.line >= 1 and span.column >= 1


def test_tokenizer_tracks_lines():
    toks = tokenize("p(a).\n  q(b).")
    q = [t for t in toks if t.text == "q"][0]
    assert (q.span.line, q.span.column) == (2, 3)


# ---------------------------------------------------------------- round trip

VARS = st.sampled_from([Var("X"), Var("Y"), Var("Z")])
CONSTS = st.one_of(st.integers(0, 5).map(Const), st.sampled_from([Const("a"), Const("b")]))
SIMPLE = st.one_of(VARS, CONSTS)
EXPR = st.recursive(SIMPLE, lambda inner: st.builds(BinOp, st.sampled_from(["+", "-", "*", "/", "mod"]), inner, inner),
                    max_leaves=4)
PREDS = st.sampled_from([("p", 1), ("q", 2), ("r", 0)])


@st.composite
def atoms(draw, exprs=EXPR, placeholder=False):
    name, n = draw(PREDS)
    args = []
    for _ in range(n):
        if placeholder and draw(st.booleans()):
            args.append(PLACEHOLDER)
        else:
            args.append(draw(exprs))
    return Atom(name, tuple(args))


comparisons = st.builds(Comparison, st.sampled_from(["=", "!=", "<", "<=", ">", ">="]), EXPR, EXPR)


@st.composite
def catoms(draw):
    defs = []
    for _ in range(draw(st.integers(1, 2))):
        conds = draw(st.lists(st.one_of(atoms(exprs=SIMPLE), comparisons), max_size=2))
        defs.append(SetDef(draw(atoms(exprs=SIMPLE)), tuple(conds)))
    lo = draw(st.one_of(st.none(), st.integers(0, 3).map(Const), VARS))
    hi = draw(st.one_of(st.none(), st.integers(0, 3).map(Const), VARS))
    return CardinalityAtom(lo, hi, tuple(defs))


@st.composite
def rules(draw):
    if draw(st.booleans()):
        head = draw(atoms())
        body = draw(st.lists(st.one_of(atoms(), comparisons), max_size=3))
        return Rule(tuple(body), (head,), horn=True)
    body = draw(st.lists(st.one_of(atoms(), comparisons, catoms()), max_size=3))
    head = draw(st.lists(st.one_of(atoms(placeholder=True), comparisons, catoms()), max_size=3))
    return Rule(tuple(body), tuple(head))


@settings(max_examples=300, deadline=None)
@given(st.lists(rules(), min_size=1, max_size=4))
def test_print_parse_print_is_stable(rs):
    text = format_program(rs)
    again = format_program(parse_program(text))
    assert again == text


@settings(max_examples=200, deadline=None)
@given(st.lists(rules(), min_size=1, max_size=4))
def test_parse_of_printed_program_is_structurally_equal(rs):
    parsed = parse_program(format_program(rs))
    assert [(r.body, r.head, r.horn) for r in parsed] == [(r.body, r.head, r.horn) for r in rs]
