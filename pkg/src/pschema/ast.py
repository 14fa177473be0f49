"""Abstract syntax of data-program pairs.

Terms, atoms, cardinality atoms and rules are immutable dataclasses. The
module also holds the static checks (``validate``), arithmetic desugaring
and the canonical pretty-printer.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

from .errors import PSError

ARITH_OPS = ("+", "-", "*", "/", "mod")
REL_OPS = ("=", "!=", "<", "<=", ">", ">=")
RESERVED_PREFIX = "__"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    value: Union[int, str]

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class Placeholder:
    def __str__(self) -> str:
        return "_"


PLACEHOLDER = Placeholder()


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"

    def __str__(self) -> str:
        return format_expr(self)


Term = Union[Var, Const, Placeholder]
Expr = Union[Var, Const, Placeholder, BinOp]


@dataclass(frozen=True)
class Atom:
    pred: str
    args: Tuple[Expr, ...] = ()

    @property
    def signature(self) -> Tuple[str, int]:
        return (self.pred, len(self.args))

    @property
    def is_eatom(self) -> bool:
        return any(isinstance(a, Placeholder) for a in self.args)

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(format_expr(a) for a in self.args)})"


@dataclass(frozen=True)
class Comparison:
    """A predefined relation ``left op right``."""

    op: str
    left: Expr
    right: Expr

    def __str__(self) -> str:
        return f"{format_expr(self.left)} {self.op} {format_expr(self.right)}"


@dataclass(frozen=True)
class Arith:
    """The predefined relation ``result = left op right`` over simple terms.

    Only produced by desugaring. ``intermediate`` marks a fresh variable
    holding a partial result: its value is any integer, not necessarily a
    constant of the Herbrand universe.
    """

    op: str
    result: Term
    left: Term
    right: Term
    intermediate: bool = False

    def __str__(self) -> str:
        return f"{self.result} = {self.left} {self.op} {self.right}"


@dataclass(frozen=True)
class SetDef:
    template: Atom
    conditions: Tuple[Union[Atom, Comparison, Arith], ...] = ()
    # fresh variables introduced by desugaring; they behave as bound
    local_vars: FrozenSet[str] = frozenset()

    def __str__(self) -> str:
        if not self.conditions:
            return str(self.template)
        return f"{self.template} : {', '.join(str(c) for c in self.conditions)}"


@dataclass(frozen=True)
class CardinalityAtom:
    lower: Optional[Term]
    upper: Optional[Term]
    defs: Tuple[SetDef, ...]

    def __str__(self) -> str:
        lo = f"{self.lower} " if self.lower is not None else ""
        hi = f" {self.upper}" if self.upper is not None else ""
        return f"{lo}{{ {' ; '.join(str(d) for d in self.defs)} }}{hi}"


Literal = Union[Atom, Comparison, Arith, CardinalityAtom]


class Flavor(str, enum.Enum):
    GENERATING = "G"
    HORN = "H"
    VERIFYING = "V"


@dataclass(frozen=True)
class Rule:
    body: Tuple[Literal, ...]
    head: Tuple[Literal, ...]
    horn: bool = False
    flavor: Optional[Flavor] = None
    line: int = 0

    def __str__(self) -> str:
        return format_rule(self)


@dataclass(frozen=True)
class DataProgramPair:
    data: FrozenSet[Atom]
    rules: Tuple[Rule, ...]
    constants: Dict[str, Union[int, str]] = field(default_factory=dict, compare=False)
    # predicates declared as data even if no fact mentions them
    data_predicates: FrozenSet[Tuple[str, int]] = frozenset()
    validated: bool = False
    desugared: bool = False

    @property
    def data_signatures(self) -> FrozenSet[Tuple[str, int]]:
        return frozenset(a.signature for a in self.data) | self.data_predicates

    def rules_of(self, flavor: Flavor) -> List[Rule]:
        return [r for r in self.rules if r.flavor == flavor]


# ---------------------------------------------------------------- printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "mod": 2}


def format_expr(e: Expr) -> str:
    if not isinstance(e, BinOp):
        return str(e)
    p = _PREC[e.op]
    left = format_expr(e.left)
    if isinstance(e.left, BinOp) and _PREC[e.left.op] < p:
        left = f"({left})"
    right = format_expr(e.right)
    if isinstance(e.right, BinOp) and _PREC[e.right.op] <= p:
        right = f"({right})"
    return f"{left} {e.op} {right}"


def format_rule(rule: Rule) -> str:
    body = ", ".join(str(x) for x in rule.body)
    if rule.horn:
        return f"{rule.head[0]} <- {body or 'true'}."
    head = " | ".join(str(x) for x in rule.head) or "false"
    if not rule.body:
        if not rule.head:
            return "true -> false."
        return f"{head}."
    return f"{body} -> {head}."


def format_program(rules: Iterable[Rule]) -> str:
    return "".join(format_rule(r) + "\n" for r in rules)


# ---------------------------------------------------------------- traversal

def expr_vars(e: Expr) -> Iterator[str]:
    if isinstance(e, Var):
        yield e.name
    elif isinstance(e, BinOp):
        yield from expr_vars(e.left)
        yield from expr_vars(e.right)


def literal_vars(lit: Literal) -> Iterator[str]:
    """Variables of a literal in order of first occurrence (with repeats)."""
    if isinstance(lit, Atom):
        for a in lit.args:
            yield from expr_vars(a)
    elif isinstance(lit, Comparison):
        yield from expr_vars(lit.left)
        yield from expr_vars(lit.right)
    elif isinstance(lit, Arith):
        for t in (lit.result, lit.left, lit.right):
            yield from expr_vars(t)
    elif isinstance(lit, CardinalityAtom):
        for t in (lit.lower, lit.upper):
            if t is not None:
                yield from expr_vars(t)
        for d in lit.defs:
            yield from setdef_vars(d)


def setdef_vars(d: SetDef) -> Iterator[str]:
    yield from literal_vars(d.template)
    for c in d.conditions:
        yield from literal_vars(c)


def rule_vars(rule: Rule) -> List[str]:
    seen: Dict[str, None] = {}
    for lit in itertools.chain(rule.body, rule.head):
        for v in literal_vars(lit):
            seen.setdefault(v)
    return list(seen)


def classify_set_variables(d: SetDef) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    """Split the variables of a set definition into (bound, free).

    A variable is bound when it occurs as an argument of a data condition;
    after validation every atom condition is a data atom.
    """
    bound = set(d.local_vars)
    for c in d.conditions:
        if isinstance(c, Atom):
            bound.update(literal_vars(c))
    every = set(setdef_vars(d))
    bound &= every
    return frozenset(bound), frozenset(every - bound)


def catom_free_vars(c: CardinalityAtom) -> List[str]:
    out: Dict[str, None] = {}
    for t in (c.lower, c.upper):
        if isinstance(t, Var):
            out.setdefault(t.name)
    for d in c.defs:
        _, free = classify_set_variables(d)
        for v in setdef_vars(d):
            if v in free:
                out.setdefault(v)
    return list(out)


def free_vars_of_rule(rule: Rule) -> List[str]:
    """Variables quantified at rule level (set-local ones excluded)."""
    out: Dict[str, None] = {}
    for lit in itertools.chain(rule.body, rule.head):
        names = catom_free_vars(lit) if isinstance(lit, CardinalityAtom) else literal_vars(lit)
        for v in names:
            out.setdefault(v)
    return list(out)


def _has_arith(e) -> bool:
    if isinstance(e, BinOp):
        return True
    if isinstance(e, Atom):
        return any(isinstance(a, BinOp) for a in e.args)
    if isinstance(e, Comparison):
        return True if isinstance(e.left, BinOp) or isinstance(e.right, BinOp) else False
    if isinstance(e, CardinalityAtom):
        return any(_has_arith(d.template) or any(_has_arith(c) for c in d.conditions) for d in e.defs)
    return False


def constants_of_rule(rule: Rule) -> Iterator[Union[int, str]]:
    def of_expr(e):
        if isinstance(e, Const):
            yield e.value
        elif isinstance(e, BinOp):
            yield from of_expr(e.left)
            yield from of_expr(e.right)

    def of_lit(lit):
        if isinstance(lit, Atom):
            for a in lit.args:
                yield from of_expr(a)
        elif isinstance(lit, Comparison):
            yield from of_expr(lit.left)
            yield from of_expr(lit.right)
        elif isinstance(lit, Arith):
            for t in (lit.result, lit.left, lit.right):
                yield from of_expr(t)
        elif isinstance(lit, CardinalityAtom):
            for t in (lit.lower, lit.upper):
                if t is not None:
                    yield from of_expr(t)
            for d in lit.defs:
                yield from of_lit(d.template)
                for c in d.conditions:
                    yield from of_lit(c)

    for lit in itertools.chain(rule.body, rule.head):
        yield from of_lit(lit)


def _atoms_of(lit: Literal) -> Iterator[Atom]:
    if isinstance(lit, Atom):
        yield lit
    elif isinstance(lit, CardinalityAtom):
        for d in lit.defs:
            yield d.template
            for c in d.conditions:
                if isinstance(c, Atom):
                    yield c


def rule_atoms(rule: Rule) -> Iterator[Atom]:
    for lit in itertools.chain(rule.body, rule.head):
        yield from _atoms_of(lit)


# ---------------------------------------------------------------- constants

def resolve_constants(rule: Rule, bindings: Dict[str, Union[int, str]]) -> Rule:
    """Replace named constants by their bound values."""
    if not bindings:
        return rule

    def ex(e):
        if isinstance(e, Const) and isinstance(e.value, str) and e.value in bindings:
            return Const(bindings[e.value])
        if isinstance(e, BinOp):
            return BinOp(e.op, ex(e.left), ex(e.right))
        return e

    def lit(x):
        if isinstance(x, Atom):
            return Atom(x.pred, tuple(ex(a) for a in x.args))
        if isinstance(x, Comparison):
            return Comparison(x.op, ex(x.left), ex(x.right))
        if isinstance(x, Arith):
            return Arith(x.op, ex(x.result), ex(x.left), ex(x.right), x.intermediate)
        if isinstance(x, CardinalityAtom):
            defs = tuple(SetDef(lit(d.template), tuple(lit(c) for c in d.conditions), d.local_vars)
                         for d in x.defs)
            lo = ex(x.lower) if x.lower is not None else None
            hi = ex(x.upper) if x.upper is not None else None
            return CardinalityAtom(lo, hi, defs)
        return x

    return replace(rule, body=tuple(lit(x) for x in rule.body), head=tuple(lit(x) for x in rule.head))


# ---------------------------------------------------------------- desugaring

class _Fresh:
    def __init__(self, used: Iterable[str], stem: str = "T"):
        self.used = set(used)
        self.stem = stem
        self.k = 0

    def __call__(self) -> str:
        while True:
            self.k += 1
            name = f"{self.stem}{self.k}"
            if name not in self.used:
                self.used.add(name)
                return name


def _simple(e: Expr) -> bool:
    return not isinstance(e, BinOp)


def _decompose(e: BinOp, fresh: _Fresh, defs: list, intermediate: bool) -> Var:
    left = e.left if _simple(e.left) else _decompose(e.left, fresh, defs, True)
    right = e.right if _simple(e.right) else _decompose(e.right, fresh, defs, True)
    v = Var(fresh())
    defs.append(Arith(e.op, v, left, right, intermediate))
    return v


def _flatten(lit: Literal, fresh: _Fresh, defs: list, locals_: Optional[set] = None):
    """Return ``lit`` without expression trees, appending definitions to ``defs``."""

    def sub(e, intermediate):
        if _simple(e):
            return e
        before = len(defs)
        v = _decompose(e, fresh, defs, intermediate)
        if locals_ is not None:
            for a in defs[before:]:
                locals_.add(a.result.name)
        return v

    if isinstance(lit, Atom):
        if not any(isinstance(a, BinOp) for a in lit.args):
            return lit
        return Atom(lit.pred, tuple(sub(a, False) for a in lit.args))
    if isinstance(lit, Comparison):
        left, right = lit.left, lit.right
        if _simple(left) and _simple(right):
            return lit
        if lit.op == "=" and (_simple(left) != _simple(right)):
            res, ex = (left, right) if _simple(left) else (right, left)
            a = sub(ex.left, True)
            b = sub(ex.right, True)
            return Arith(ex.op, res, a, b)
        return Comparison(lit.op, sub(left, True), sub(right, True))
    if isinstance(lit, CardinalityAtom):
        new_defs = []
        for d in lit.defs:
            loc = set(d.local_vars)
            conds = []
            for c in d.conditions:
                cdefs: list = []
                c2 = _flatten(c, fresh, cdefs, loc)
                conds.extend(cdefs)
                conds.append(c2)
            tdefs: list = []
            t2 = _flatten(d.template, fresh, tdefs, loc)
            conds.extend(tdefs)
            new_defs.append(SetDef(t2, tuple(conds), frozenset(loc)))
        return CardinalityAtom(lit.lower, lit.upper, tuple(new_defs))
    return lit


def desugar_arithmetic(rule: Rule) -> Rule:
    """Replace compound arithmetic by fresh variables and defining atoms.

    Definitions of expressions found in the antecedent are placed right
    before the literal using them; those from the consequent are appended
    to the antecedent. Inside a set definition they become conditions.
    """
    if not any(_has_arith(x) for x in itertools.chain(rule.body, rule.head)):
        return rule
    fresh = _Fresh(rule_vars(rule))
    body: list = []
    for lit in rule.body:
        defs: list = []
        new = _flatten(lit, fresh, defs)
        body.extend(defs)
        body.append(new)
    head: list = []
    for lit in rule.head:
        defs = []
        head.append(_flatten(lit, fresh, defs))
        body.extend(defs)
    return replace(rule, body=tuple(body), head=tuple(head))


def desugar_pair(pair: DataProgramPair) -> DataProgramPair:
    if pair.desugared:
        return pair
    return replace(pair, rules=tuple(desugar_arithmetic(r) for r in pair.rules), desugared=True)


# ---------------------------------------------------------------- validation

def _err(code: str, msg: str, rule: Optional[Rule] = None) -> PSError:
    if rule is not None and rule.line:
        msg = f"line {rule.line}: {msg}"
    return PSError(code, msg)


def _check_arities(pair: DataProgramPair) -> Dict[str, int]:
    arity: Dict[str, int] = {}

    def note(sig, rule=None):
        name, n = sig
        if arity.setdefault(name, n) != n:
            raise _err("E_ARITY_MISMATCH", f"predicate {name} used with arities {arity[name]} and {n}", rule)

    for sig in sorted(pair.data_predicates):
        note(sig)
    for a in sorted(pair.data, key=str):
        note(a.signature)
    for r in pair.rules:
        for a in rule_atoms(r):
            note(a.signature, r)
    return arity


def _rename_bound(rule: Rule) -> Rule:
    """Rename bound set-definition variables that also occur elsewhere."""
    if not any(isinstance(x, CardinalityAtom) for x in itertools.chain(rule.body, rule.head)):
        return rule
    fresh_names = set(rule_vars(rule))

    def rename_side(lits, other_side):
        out = []
        for i, lit in enumerate(lits):
            if not isinstance(lit, CardinalityAtom):
                out.append(lit)
                continue
            defs = []
            for j, d in enumerate(lit.defs):
                bound, _ = classify_set_variables(d)
                outside = set()
                for k, other in enumerate(lits):
                    if k != i:
                        outside.update(literal_vars(other))
                for other in other_side:
                    outside.update(literal_vars(other))
                for t in (lit.lower, lit.upper):
                    if isinstance(t, Var):
                        outside.add(t.name)
                for k, od in enumerate(lit.defs):
                    if k != j:
                        outside.update(setdef_vars(od))
                clash = sorted(bound & outside)
                if clash:
                    mapping = {}
                    for v in clash:
                        n = 1
                        while f"{v}_{n}" in fresh_names:
                            n += 1
                        mapping[v] = f"{v}_{n}"
                        fresh_names.add(mapping[v])
                    d = _rename_setdef(d, mapping)
                defs.append(d)
            out.append(CardinalityAtom(lit.lower, lit.upper, tuple(defs)))
        return tuple(out)

    body = rename_side(rule.body, rule.head)
    head = rename_side(rule.head, body)
    return replace(rule, body=body, head=head)


def _rename_setdef(d: SetDef, mapping: Dict[str, str]) -> SetDef:
    def ex(e):
        if isinstance(e, Var) and e.name in mapping:
            return Var(mapping[e.name])
        if isinstance(e, BinOp):
            return BinOp(e.op, ex(e.left), ex(e.right))
        return e

    def lit(x):
        if isinstance(x, Atom):
            return Atom(x.pred, tuple(ex(a) for a in x.args))
        if isinstance(x, Comparison):
            return Comparison(x.op, ex(x.left), ex(x.right))
        if isinstance(x, Arith):
            return Arith(x.op, ex(x.result), ex(x.left), ex(x.right), x.intermediate)
        return x

    return SetDef(lit(d.template), tuple(lit(c) for c in d.conditions),
                  frozenset(mapping.get(v, v) for v in d.local_vars))


def validate(pair: DataProgramPair, allow_reserved: bool = False) -> DataProgramPair:
    """Check static conditions and assign every rule a flavor."""
    for a in pair.data:
        if any(not isinstance(t, Const) for t in a.args):
            raise PSError("E_NONGROUND_DATA", f"data atom {a} is not ground")
    _check_arities(pair)
    data_preds = {name for name, _ in pair.data_signatures}

    horn_heads = set()
    for r in pair.rules:
        if r.horn:
            if len(r.head) != 1 or not isinstance(r.head[0], Atom):
                raise _err("E_BAD_HORN", "a Horn rule needs a single atom as consequent", r)
            h = r.head[0]
            if h.is_eatom:
                raise _err("E_BAD_HORN", f"Horn head {h} contains a placeholder", r)
            if h.pred in data_preds:
                raise _err("E_BAD_HORN", f"Horn head {h} uses data predicate {h.pred}", r)
            if any(isinstance(x, CardinalityAtom) for x in r.body):
                raise _err("E_BAD_HORN", "c-atoms are not allowed in Horn rules", r)
            horn_heads.add(h.pred)

    rules = []
    for r in pair.rules:
        for a in rule_atoms(r):
            if a.pred.startswith(RESERVED_PREFIX) and not allow_reserved:
                raise _err("E_RESERVED_NAME", f"predicate names starting with '__' are reserved: {a.pred}", r)
        for lit in r.body:
            if isinstance(lit, Atom) and lit.is_eatom:
                raise _err("E_EATOM_IN_BODY", f"e-atom {lit} in antecedent", r)
            if isinstance(lit, Comparison) and (isinstance(lit.left, Placeholder) or isinstance(lit.right, Placeholder)):
                raise _err("E_EATOM_IN_BODY", f"placeholder in antecedent comparison {lit}", r)
        for lit in r.head:
            if isinstance(lit, Atom) and lit.is_eatom and lit.pred in data_preds:
                raise _err("E_BAD_PLACEHOLDER", f"e-atom {lit} over a data predicate", r)
            if isinstance(lit, Comparison) and (isinstance(lit.left, Placeholder) or isinstance(lit.right, Placeholder)):
                raise _err("E_BAD_PLACEHOLDER", f"placeholder in comparison {lit}", r)
        for lit in itertools.chain(r.body, r.head):
            if not isinstance(lit, CardinalityAtom):
                continue
            for t in (lit.lower, lit.upper):
                if isinstance(t, Placeholder):
                    raise _err("E_BAD_PLACEHOLDER", "placeholder as c-atom bound", r)
            for d in lit.defs:
                if d.template.is_eatom:
                    raise _err("E_BAD_PLACEHOLDER", f"placeholder in set definition {d}", r)
                if d.template.pred in data_preds:
                    raise _err("E_BAD_SETDEF", f"set template {d.template} uses data predicate", r)
                for c in d.conditions:
                    if isinstance(c, Atom):
                        if c.pred not in data_preds:
                            raise _err("E_PROGRAM_PRED_IN_SETCOND",
                                       f"condition {c} of a set definition is not a data atom", r)
                        if c.is_eatom:
                            raise _err("E_BAD_PLACEHOLDER", f"placeholder in set definition {d}", r)
                    elif isinstance(c, Comparison) and (isinstance(c.left, Placeholder) or isinstance(c.right, Placeholder)):
                        raise _err("E_BAD_PLACEHOLDER", f"placeholder in set definition {d}", r)

        if r.horn:
            flavor = Flavor.HORN
        else:
            mentions = any(a.pred in horn_heads for a in rule_atoms(r))
            if r.flavor == Flavor.GENERATING and mentions:
                raise _err("E_HORN_HEAD_IN_G", "generating rule mentions a predicate defined by Horn rules", r)
            if r.flavor == Flavor.HORN:
                raise _err("E_BAD_HORN", "rule flagged Horn is not written as a Horn rule", r)
            flavor = r.flavor or (Flavor.VERIFYING if mentions else Flavor.GENERATING)
        rules.append(replace(_rename_bound(r), flavor=flavor))

    out = replace(pair, rules=tuple(rules), validated=True)
    if not herbrand_constants(out):
        raise PSError("E_NO_CONSTANTS", "the theory contains no constant symbol")
    return out


# ---------------------------------------------------------------- universe

def hu_key(c: Union[int, str]):
    """Canonical order: integers ascending, then symbols lexicographically."""
    return (0, c, "") if isinstance(c, int) else (1, 0, c)


def herbrand_constants(pair: DataProgramPair) -> Tuple[Union[int, str], ...]:
    consts = set()
    for a in pair.data:
        for t in a.args:
            consts.add(t.value)
    for r in pair.rules:
        consts.update(constants_of_rule(r))
    consts.update(pair.constants.values())
    return tuple(sorted(consts, key=hu_key))
