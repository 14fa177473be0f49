"""Text syntax for data files (.dps), programs (.ps) and constant bindings."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Set, Tuple, Union

from .ast import (
    PLACEHOLDER, REL_OPS, Atom, BinOp, CardinalityAtom, Comparison, Const,
    Rule, SetDef, Var,
)
from .errors import ParseError, PSError, SourceSpan

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+|%[^\n]*)
  | (?P<int>\d+)
  | (?P<var>[A-Z][A-Za-z0-9_]*)
  | (?P<ident>[a-z][A-Za-z0-9_]*|__[A-Za-z0-9_]+)
  | (?P<sym>->|<-|:-|\.\.|!=|<=|>=|[()\[\],.|:;{}=<>+\-*/_])
""", re.VERBOSE)

KEYWORDS = {"true", "false", "not", "mod"}


@dataclass
class Token:
    kind: str        # int, var, ident, sym, eof
    text: str
    span: SourceSpan


def tokenize(text: str, file: str = "<input>") -> List[Token]:
    toks = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            span = SourceSpan(file, line, col, pos, pos + 1)
            raise ParseError(f"unexpected character {text[pos]!r}", span)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            toks.append(Token(kind, tok, SourceSpan(file, line, col, pos, m.end())))
        nl = tok.count("\n")
        if nl:
            line += nl
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
        pos = m.end()
    end = max(len(text) - 1, 0)
    toks.append(Token("eof", "", SourceSpan(file, line, col, end, end + 1)))
    return toks


class Parser:
    def __init__(self, text: str, file: str = "<input>",
                 constants: Optional[Dict[str, Union[int, str]]] = None):
        self.toks = tokenize(text, file)
        self.i = 0
        self.constants = constants or {}

    # -- token helpers
    def peek(self, k: int = 0) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, *texts: str, k: int = 0) -> bool:
        t = self.peek(k)
        return t.kind in ("sym", "ident") and t.text in texts

    def next(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected '{text}'")
        return self.next()

    def fail(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        found = tok.text or "end of input"
        raise ParseError(f"{msg}, found '{found}'", tok.span)

    # -- terms and expressions
    def factor(self):
        t = self.peek()
        if t.kind == "int":
            self.next()
            return Const(int(t.text))
        if t.kind == "var":
            self.next()
            return Var(t.text)
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.next()
            if self.at("("):
                self.fail("function symbols are not allowed")
            return Const(t.text)
        if self.at("("):
            self.next()
            e = self.expr()
            self.expect(")")
            return e
        if self.at("-") and self.peek(1).kind == "int":
            self.next()
            return Const(-int(self.next().text))
        self.fail("expected a term")

    def term(self):
        e = self.factor()
        while self.at("*", "/", "mod"):
            op = self.next().text
            e = BinOp(op, e, self.factor())
        return e

    def expr(self):
        e = self.term()
        while self.at("+", "-"):
            op = self.next().text
            e = BinOp(op, e, self.term())
        return e

    def arg(self):
        if self.at("_"):
            self.next()
            return PLACEHOLDER
        return self.expr()

    def atom(self) -> Atom:
        t = self.peek()
        if t.kind != "ident" or t.text in KEYWORDS:
            self.fail("expected an atom")
        self.next()
        args = []
        if self.at("("):
            self.next()
            args.append(self.arg())
            while self.at(","):
                self.next()
                args.append(self.arg())
            self.expect(")")
        return Atom(t.text, tuple(args))

    # -- literals
    def _bound_term(self):
        t = self.peek()
        if t.kind == "int":
            self.next()
            return Const(int(t.text))
        if t.kind == "var":
            self.next()
            return Var(t.text)
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.next()
            return Const(t.text)
        self.fail("expected a c-atom bound")

    def _starts_catom(self) -> bool:
        if self.at("{"):
            return True
        t = self.peek()
        return t.kind in ("int", "var", "ident") and t.text not in KEYWORDS and self.at("{", k=1)

    def catom(self) -> CardinalityAtom:
        lower = None if self.at("{") else self._bound_term()
        self.expect("{")
        defs = [self.setdef()]
        while self.at(";"):
            self.next()
            defs.append(self.setdef())
        self.expect("}")
        upper = None
        t = self.peek()
        if t.kind in ("int", "var") or (t.kind == "ident" and t.text not in KEYWORDS and not self.at("(", k=1)):
            upper = self._bound_term()
        return CardinalityAtom(lower, upper, tuple(defs))

    def setdef(self) -> SetDef:
        template = self.atom()
        conds = []
        if self.at(":"):
            self.next()
            conds.append(self.condition())
            while self.at(","):
                self.next()
                conds.append(self.condition())
        return SetDef(template, tuple(conds))

    def condition(self):
        lit = self.literal(allow_catom=False)
        return lit

    def literal(self, allow_catom: bool = True):
        if allow_catom and self._starts_catom():
            return self.catom()
        t = self.peek()
        if t.kind == "ident" and t.text not in KEYWORDS:
            nxt = self.peek(1)
            if self.at("(", k=1):
                a = self.atom()
                if self.at(*REL_OPS):
                    self.fail("atoms cannot be compared")
                return a
            if not (nxt.kind == "sym" and nxt.text in REL_OPS + ("+", "-", "*", "/")) and not self.at("mod", k=1):
                return self.atom()
        left = self.expr()
        if not self.at(*REL_OPS):
            self.fail("expected a comparison operator")
        op = self.next().text
        right = self.expr()
        return Comparison(op, left, right)

    # -- statements
    def _list(self, sep: str, allow_catom: bool = True):
        items = [self.literal(allow_catom)]
        while self.at(sep):
            self.next()
            items.append(self.literal(allow_catom))
        return items

    def rule(self) -> Rule:
        start = self.peek()
        line = start.span.line
        if self.at("true") and self.at("->", k=1):
            self.next()
            self.next()
            return Rule((), self._consequent(), line=line)
        if self.at("false") and self.at(".", k=1):
            self.next()
            self.next()
            return Rule((), (), line=line)
        first = self.literal()
        if self.at("<-"):
            if not isinstance(first, Atom):
                self.fail("Horn rule needs an atom as head", start)
            self.next()
            if self.at("true") and self.at(".", k=1):
                self.next()
                body = []
            else:
                body = self._list(",", allow_catom=False)
            self.expect(".")
            return Rule(tuple(body), (first,), horn=True, line=line)
        items = [first]
        if self.at(","):
            while self.at(","):
                self.next()
                items.append(self.literal())
            if not self.at("->"):
                self.fail("expected '->'")
        if self.at("->"):
            self.next()
            return Rule(tuple(items), self._consequent(), line=line)
        while self.at("|"):
            self.next()
            items.append(self.literal())
        self.expect(".")
        return Rule((), tuple(items), line=line)

    def _consequent(self):
        if self.at("false"):
            self.next()
            self.expect(".")
            return ()
        items = self._list("|")
        self.expect(".")
        return tuple(items)

    def program(self) -> List[Rule]:
        rules = []
        while self.peek().kind != "eof":
            rules.append(self.rule())
        return rules

    # -- data
    def _data_value(self):
        t = self.peek()
        if self.at("-") and self.peek(1).kind == "int":
            self.next()
            return -int(self.next().text)
        if t.kind == "int":
            self.next()
            return int(t.text)
        if t.kind == "ident" and t.text not in KEYWORDS:
            self.next()
            return self.constants.get(t.text, t.text)
        if t.kind == "var":
            raise PSError("E_NONGROUND_DATA", f"{t.span}: variable {t.text} in data", t.span)
        self.fail("expected a constant")

    def _data_arg(self) -> List[Union[int, str]]:
        tok = self.peek()
        lo = self._data_value()
        if not self.at(".."):
            return [lo]
        self.next()
        hi = self._data_value()
        if not isinstance(lo, int) or not isinstance(hi, int):
            self.fail("range bounds must be integers", tok)
        return list(range(lo, hi + 1))

    def data(self) -> Set[Atom]:
        import itertools
        facts: Set[Atom] = set()
        while self.peek().kind != "eof":
            t = self.peek()
            if t.kind != "ident" or t.text in KEYWORDS:
                self.fail("expected a fact")
            self.next()
            cols = []
            if self.at("("):
                self.next()
                cols.append(self._data_arg())
                while self.at(","):
                    self.next()
                    cols.append(self._data_arg())
                self.expect(")")
            self.expect(".")
            for combo in itertools.product(*cols):
                facts.add(Atom(t.text, tuple(Const(v) for v in combo)))
        return facts


def parse_program(text: str, file: str = "<input>") -> List[Rule]:
    return Parser(text, file).program()


def parse_data(text: str, file: str = "<input>",
               constants: Optional[Dict[str, Union[int, str]]] = None) -> Set[Atom]:
    return Parser(text, file, constants).data()


def parse_value(text: str) -> Union[int, str]:
    text = text.strip()
    if re.fullmatch(r"-?\d+", text):
        return int(text)
    if re.fullmatch(r"[a-z][A-Za-z0-9_]*", text):
        return text
    raise PSError("E_BAD_BINDING", f"not a constant: {text!r}")


def parse_constants(args: Iterable[str]) -> Dict[str, Union[int, str]]:
    out: Dict[str, Union[int, str]] = {}
    for a in args:
        name, sep, value = a.partition("=")
        name = name.strip()
        if not sep or not re.fullmatch(r"[a-z][A-Za-z0-9_]*", name):
            raise PSError("E_BAD_BINDING", f"expected name=value, got {a!r}")
        if name in out:
            raise PSError("E_DUPLICATE_CONST", f"constant {name} bound twice")
        out[name] = parse_value(value)
    return out
