"""DATALOG¬ programs under the supported-model semantics, via PS.

A pure program is rewritten into PS rules whose models are exactly the
models of the Clark completion (up to the auxiliary ``__d_*`` predicates),
so the ordinary ground-and-solve pipeline computes supported models.
A direct brute-force enumerator is provided as an independent check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .ast import PLACEHOLDER, Atom, Const, DataProgramPair, Rule, Var, format_program, hu_key, validate
from .errors import PSError
from .grounder import ground_pair, simplify_to_core
from .errors import Inconsistent
from .parser import Parser
from .solver import Solver

GroundFact = Tuple  # (pred, *args)


@dataclass(frozen=True)
class DatalogClause:
    head: Atom
    pos: Tuple[Atom, ...] = ()
    neg: Tuple[Atom, ...] = ()

    def __str__(self) -> str:
        body = [str(a) for a in self.pos] + [f"not {a}" for a in self.neg]
        return f"{self.head} :- {', '.join(body)}." if body else f"{self.head}."


class _DatalogParser(Parser):
    def clause(self) -> DatalogClause:
        head = self.atom()
        pos, neg = [], []
        if self.at(":-"):
            self.next()
            while True:
                if self.at("not"):
                    self.next()
                    neg.append(self.atom())
                else:
                    pos.append(self.atom())
                if not self.at(","):
                    break
                self.next()
        self.expect(".")
        return DatalogClause(head, tuple(pos), tuple(neg))

    def clauses(self) -> List[DatalogClause]:
        out = []
        while self.peek().kind != "eof":
            out.append(self.clause())
        return out


def parse_datalog(text: str, file: str = "<input>") -> List[DatalogClause]:
    return _DatalogParser(text, file).clauses()


class PureProgram:
    """A constant-free DATALOG¬ program in head-normal form."""

    def __init__(self, clauses: Sequence[DatalogClause]):
        self.clauses = tuple(clauses)
        arity: Dict[str, int] = {}
        heads: Dict[str, Atom] = {}
        for c in self.clauses:
            for a in (c.head, *c.pos, *c.neg):
                if arity.setdefault(a.pred, len(a.args)) != len(a.args):
                    raise PSError("E_NOT_PURE", f"predicate {a.pred} used with two arities")
                if not all(isinstance(t, Var) for t in a.args):
                    raise PSError("E_NOT_PURE", f"atom {a} contains a constant or expression")
            h = c.head
            if len({t.name for t in h.args}) != len(h.args):
                raise PSError("E_NOT_PURE", f"head {h} repeats a variable")
            if heads.setdefault(h.pred, h) != h:
                raise PSError("E_NOT_PURE", f"clauses for {h.pred} have different heads")
        self.arity = arity
        self.intentional = frozenset(heads)
        self.extensional = frozenset(arity) - self.intentional
        if not self.extensional:
            raise PSError("E_NOT_PURE", "program has no extensional predicate")

    def definition(self, pred: str) -> List[DatalogClause]:
        return [c for c in self.clauses if c.head.pred == pred]


def _body_only_vars(c: DatalogClause) -> List[Var]:
    head = {t.name for t in c.head.args}
    seen: Dict[str, None] = {}
    for a in (*c.pos, *c.neg):
        for t in a.args:
            if t.name not in head:
                seen.setdefault(t.name)
    return [Var(v) for v in seen]


def aux_name(pred: str, index: int) -> str:
    return f"__d_{pred}_{index}"


def to_ps(program: PureProgram) -> List[Rule]:
    """PS rules equivalent to the completion of ``program``."""
    rules: List[Rule] = []
    for p in sorted(program.intentional):
        defs = program.definition(p)
        head = defs[0].head
        aux_atoms = []
        for i, r in enumerate(defs, start=1):
            ys = _body_only_vars(r)
            d = Atom(aux_name(p, i), head.args + tuple(ys))
            for q in r.pos:
                rules.append(Rule((d,), (q,)))
            for q in r.neg:
                rules.append(Rule((d, q), ()))
            rules.append(Rule(tuple(r.pos), (d,) + tuple(r.neg)))
            rules.append(Rule((d,), (head,)))
            aux_atoms.append(Atom(d.pred, head.args + (PLACEHOLDER,) * len(ys)))
        rules.append(Rule((head,), tuple(aux_atoms)))
    return rules


def ps_pair(data: Iterable[GroundFact], program: PureProgram) -> DataProgramPair:
    facts = frozenset(Atom(f[0], tuple(Const(x) for x in f[1:])) for f in data)
    declared = frozenset((p, program.arity[p]) for p in program.extensional)
    pair = DataProgramPair(facts, tuple(to_ps(program)), {}, declared)
    return validate(pair, allow_reserved=True)


def supported_models(data: Iterable[GroundFact], program: PureProgram,
                     show: Optional[Iterable[str]] = None) -> Iterator[FrozenSet[GroundFact]]:
    """Supported models of ``data ∪ program`` projected to ``show`` (default: all intentional)."""
    data = list(data)
    if not data:
        raise PSError("E_EMPTY_INSTANCE", "the data instance must be nonempty")
    for f in data:
        if f[0] not in program.extensional:
            raise PSError("E_BAD_INSTANCE", f"fact {f} is not over an extensional predicate")
    keep = frozenset(show) if show is not None else program.intentional
    pair = ps_pair(data, program)
    try:
        core = simplify_to_core(ground_pair(pair))
    except Inconsistent:
        return
    seen = set()
    for m in Solver(core).models():
        proj = frozenset(core.atoms[i] for i in m if core.atoms[i][0] in keep)
        if proj not in seen:
            seen.add(proj)
            yield proj


def brute_force_supported_models(data: Iterable[GroundFact], program: PureProgram,
                                 show: Optional[Iterable[str]] = None,
                                 max_atoms: int = 16) -> Set[FrozenSet[GroundFact]]:
    """Enumerate subsets of the intentional base and test the completion directly."""
    data = set(data)
    keep = frozenset(show) if show is not None else program.intentional
    universe = sorted({x for f in data for x in f[1:]}, key=hu_key)
    base = [(p, *args) for p in sorted(program.intentional)
            for args in itertools.product(universe, repeat=program.arity[p])]
    if len(base) > max_atoms:
        raise PSError("E_TOO_LARGE", f"{len(base)} intentional atoms")

    def ground(a: Atom, env) -> GroundFact:
        return (a.pred, *(env[t.name] for t in a.args))

    def body_holds(c: DatalogClause, env, truth) -> bool:
        return all(ground(a, env) in truth for a in c.pos) and not any(ground(a, env) in truth for a in c.neg)

    out = set()
    for bits in itertools.product((False, True), repeat=len(base)):
        m = {a for a, b in zip(base, bits) if b}
        truth = data | m
        ok = True
        for atom in base:
            p = atom[0]
            supported = False
            for c in program.definition(p):
                env = {t.name: v for t, v in zip(c.head.args, atom[1:])}
                extra = sorted({t.name for a in (*c.pos, *c.neg) for t in a.args} - set(env))
                for vals in itertools.product(universe, repeat=len(extra)):
                    env.update(zip(extra, vals))
                    if body_holds(c, env, truth):
                        supported = True
                        break
                if supported:
                    break
            if supported != (atom in m):
                ok = False
                break
        if ok:
            out.add(frozenset(a for a in m if a[0] in keep))
    return out


def format_ps(program: PureProgram) -> str:
    return format_program(to_ps(program))
