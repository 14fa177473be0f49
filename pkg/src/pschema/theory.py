"""Propositional theories over interned ground atoms, and the .gnd format."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import AbstractSet, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .errors import PSError

GroundAtom = Tuple  # (pred, arg1, arg2, ...)


def format_atom(key: GroundAtom) -> str:
    pred, args = key[0], key[1:]
    if not args:
        return pred
    return f"{pred}({','.join(str(a) for a in args)})"


_ATOM_RE = re.compile(r"^([a-z_][A-Za-z0-9_]*)(?:\((.*)\))?$")


def parse_atom(text: str) -> GroundAtom:
    m = _ATOM_RE.match(text.strip())
    if m is None:
        raise PSError("E_FORMAT", f"cannot read atom {text!r}")
    args = []
    if m.group(2) is not None:
        for a in m.group(2).split(","):
            a = a.strip()
            args.append(int(a) if re.fullmatch(r"-?\d+", a) else a)
    return (m.group(1), *args)


@dataclass(frozen=True)
class CAtom:
    """``lower { members } upper`` over atom ids; bounds may be None before normalization."""

    lower: Optional[int]
    upper: Optional[int]
    members: Tuple[int, ...]

    def count_window(self) -> Tuple[int, int]:
        lo = 0 if self.lower is None else self.lower
        hi = len(self.members) if self.upper is None else self.upper
        return lo, hi

    def holds(self, model: AbstractSet[int]) -> bool:
        lo, hi = self.count_window()
        k = sum(1 for a in self.members if a in model)
        return lo <= k <= hi


TOP = True
BOTTOM = False


def normalize_catom(c: CAtom) -> Union[bool, CAtom]:
    """Clamp bounds; degenerate c-atoms become True (always) or False (never)."""
    k = len(c.members)
    lo, hi = c.count_window()
    if lo > k or hi < 0 or lo > hi:
        return BOTTOM
    lo, hi = max(lo, 0), min(hi, k)
    if lo == 0 and hi == k:
        return TOP
    return CAtom(lo, hi, c.members)


@dataclass(frozen=True)
class CRule:
    """``body ∧ body_c -> head ∨ head_c``; atoms sorted by id."""

    body: Tuple[int, ...] = ()
    head: Tuple[int, ...] = ()
    body_c: Tuple[CAtom, ...] = ()
    head_c: Tuple[CAtom, ...] = ()

    def atoms(self) -> Iterable[int]:
        yield from self.body
        yield from self.head
        for c in self.body_c + self.head_c:
            yield from c.members

    def size(self) -> int:
        return len(self.body) + len(self.head) + sum(len(c.members) for c in self.body_c + self.head_c)

    @property
    def has_catoms(self) -> bool:
        return bool(self.body_c or self.head_c)


@dataclass(frozen=True)
class HornRule:
    head: int
    body: Tuple[int, ...] = ()


def satisfies(model: AbstractSet[int], rule: CRule) -> bool:
    """True iff some antecedent member fails or some consequent member holds."""
    for a in rule.body:
        if a not in model:
            return True
    for c in rule.body_c:
        if not c.holds(model):
            return True
    for a in rule.head:
        if a in model:
            return True
    for c in rule.head_c:
        if c.holds(model):
            return True
    return False


@dataclass
class GroundTheory:
    atoms: List[GroundAtom]
    closure: FrozenSet[int] = frozenset()     # atoms defined by Horn rules
    rules: List[CRule] = field(default_factory=list)
    verify: List[CRule] = field(default_factory=list)
    horn: List[HornRule] = field(default_factory=list)
    true: Set[int] = field(default_factory=set)
    false: Set[int] = field(default_factory=set)

    def __post_init__(self):
        self._index: Optional[Dict[GroundAtom, int]] = None

    def id_of(self, key: GroundAtom) -> int:
        if self._index is None:
            self._index = {k: i for i, k in enumerate(self.atoms)}
        return self._index[key]

    def name(self, i: int) -> str:
        return format_atom(self.atoms[i])

    @property
    def num_rules(self) -> int:
        return len(self.rules) + len(self.verify) + len(self.horn)

    def size(self) -> int:
        """Total number of atom occurrences over all rules."""
        return (sum(r.size() for r in self.rules) + sum(r.size() for r in self.verify)
                + sum(1 + len(h.body) for h in self.horn))

    def unassigned(self) -> List[int]:
        return [i for i in range(len(self.atoms)) if i not in self.true and i not in self.false]

    def render_rule(self, r: Union[CRule, HornRule]) -> str:
        """A ground rule in program syntax, e.g. ``p(a) -> q(a,a) | q(a,b).``"""
        if isinstance(r, HornRule):
            body = ", ".join(self.name(a) for a in r.body) or "true"
            return f"{self.name(r.head)} <- {body}."

        def cat(c: CAtom) -> str:
            lo = "" if c.lower is None else f"{c.lower} "
            hi = "" if c.upper is None else f" {c.upper}"
            return f"{lo}{{ {', '.join(self.name(m) for m in c.members)} }}{hi}"

        body = [self.name(a) for a in r.body] + [cat(c) for c in r.body_c]
        head = [self.name(a) for a in r.head] + [cat(c) for c in r.head_c]
        return f"{', '.join(body) or 'true'} -> {' | '.join(head) or 'false'}."

    def render(self, model: Iterable[int], show: Optional[AbstractSet[str]] = None) -> List[str]:
        ids = sorted(model)
        return [self.name(i) for i in ids if show is None or self.atoms[i][0] in show]


# ---------------------------------------------------------------- .gnd format

def _fmt_side(atoms: Sequence[int], cats: Sequence[CAtom]) -> List[str]:
    out = [str(a) for a in atoms]
    for c in cats:
        lo = "-" if c.lower is None else str(c.lower)
        hi = "-" if c.upper is None else str(c.upper)
        out.append(f"c {lo} {hi} ( {' '.join(map(str, c.members))} )".replace("(  )", "( )"))
    return out


def _fmt_rule(tag: str, r: CRule) -> str:
    return " ".join([tag, *_fmt_side(r.body, r.body_c), "=>", *_fmt_side(r.head, r.head_c)])


def dump_gnd(t: GroundTheory) -> str:
    lines = ["gnd 1"]
    for i, key in enumerate(t.atoms):
        lines.append(f"{'ha' if i in t.closure else 'a'} {i} {format_atom(key)}")
    lines.extend(f"t {i}" for i in sorted(t.true))
    lines.extend(f"f {i}" for i in sorted(t.false))
    lines.extend(_fmt_rule("r", r) for r in t.rules)
    lines.extend(_fmt_rule("v", r) for r in t.verify)
    for h in t.horn:
        lines.append(" ".join(["h", str(h.head), "<-", *map(str, h.body)]))
    return "\n".join(lines) + "\n"


def _read_side(tokens: List[str], lineno: int):
    atoms, cats = [], []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok == "c":
            try:
                lo = None if tokens[i + 1] == "-" else int(tokens[i + 1])
                hi = None if tokens[i + 2] == "-" else int(tokens[i + 2])
                if tokens[i + 3] != "(":
                    raise ValueError
                j = tokens.index(")", i + 4)
                members = tuple(int(x) for x in tokens[i + 4:j])
            except (ValueError, IndexError):
                raise PSError("E_FORMAT", f"line {lineno}: malformed c-atom")
            cats.append(CAtom(lo, hi, members))
            i = j + 1
        else:
            try:
                atoms.append(int(tok))
            except ValueError:
                raise PSError("E_FORMAT", f"line {lineno}: bad literal {tok!r}")
            i += 1
    return tuple(atoms), tuple(cats)


def load_gnd(text: str) -> GroundTheory:
    lines = text.splitlines()
    if not lines or lines[0].strip() != "gnd 1":
        raise PSError("E_FORMAT", "missing 'gnd 1' header")
    atoms: Dict[int, GroundAtom] = {}
    closure = set()
    t = GroundTheory(atoms=[])
    for n, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if not parts:
            continue
        tag = parts[0]
        try:
            if tag in ("a", "ha"):
                i = int(parts[1])
                atoms[i] = parse_atom(line.split(None, 2)[2])
                if tag == "ha":
                    closure.add(i)
            elif tag == "t":
                t.true.add(int(parts[1]))
            elif tag == "f":
                t.false.add(int(parts[1]))
            elif tag in ("r", "v"):
                k = parts.index("=>")
                body, body_c = _read_side(parts[1:k], n)
                head, head_c = _read_side(parts[k + 1:], n)
                (t.rules if tag == "r" else t.verify).append(CRule(body, head, body_c, head_c))
            elif tag == "h":
                if parts[2] != "<-":
                    raise ValueError
                t.horn.append(HornRule(int(parts[1]), tuple(int(x) for x in parts[3:])))
            else:
                raise ValueError
        except (ValueError, IndexError):
            raise PSError("E_FORMAT", f"line {n}: cannot read {line!r}")
    if sorted(atoms) != list(range(len(atoms))):
        raise PSError("E_FORMAT", "atom ids are not dense")
    t.atoms = [atoms[i] for i in range(len(atoms))]
    t.closure = frozenset(closure)
    return t
