"""Grounding of data-program pairs and simplification to the ground core.

``ground_pair`` instantiates every rule over the Herbrand universe,
evaluating data atoms (closed world) and predefined relations on the way.
``simplify_to_core`` then propagates forced truth values to a fixpoint and
strips everything that became determined.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .ast import (
    Arith, Atom, CardinalityAtom, Comparison, Const, DataProgramPair, Flavor,
    Placeholder, Rule, SetDef, Var, classify_set_variables, desugar_pair,
    free_vars_of_rule, herbrand_constants, hu_key, literal_vars, rule_atoms,
    validate,
)
from .errors import Inconsistent, PSError
from .theory import BOTTOM, TOP, CAtom, CRule, GroundTheory, HornRule, normalize_catom

log = logging.getLogger(__name__)

INT_MIN, INT_MAX = -(2 ** 63), 2 ** 63 - 1
MAX_ATOMS = 20_000_000


# ---------------------------------------------------------------- predefined

def arith(op: str, a, b) -> Optional[int]:
    """``a op b`` over integers; None when undefined (non-integer, division by 0)."""
    if type(a) is not int or type(b) is not int:
        return None
    if op == "+":
        r = a + b
    elif op == "-":
        r = a - b
    elif op == "*":
        r = a * b
    elif op == "/":
        if b == 0:
            return None
        r = abs(a) // abs(b)
        if (a < 0) != (b < 0):
            r = -r
    elif op == "mod":
        if b == 0:
            return None
        r = abs(a) % abs(b)
        if a < 0:
            r = -r
    else:
        raise ValueError(op)
    if not INT_MIN <= r <= INT_MAX:
        raise PSError("E_OVERFLOW", f"{a} {op} {b} leaves the 64-bit range")
    return r


def compare(op: str, a, b) -> bool:
    # symbols are identifiers, so an int never equals a symbol
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    if type(a) is not int or type(b) is not int:
        return False
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    raise ValueError(op)


def _value(t):
    if isinstance(t, Const):
        return t.value
    raise PSError("E_NONGROUND", f"{t} is not ground")


def eval_predefined(lit: Union[Comparison, Arith]) -> bool:
    """Truth value of a ground predefined atom."""
    if isinstance(lit, Arith):
        r = arith(lit.op, _value(lit.left), _value(lit.right))
        return r is not None and compare("=", _value(lit.result), r)
    from .ast import BinOp

    def ev(e):
        if isinstance(e, BinOp):
            return arith(e.op, ev(e.left), ev(e.right))
        return _value(e)

    left, right = ev(lit.left), ev(lit.right)
    if left is None or right is None:
        return False
    return compare(lit.op, left, right)


def expand_e_atom(atom: Atom, hu: Sequence) -> List[Atom]:
    """One atom per way of filling the placeholders with constants, in HU order."""
    slots = [i for i, a in enumerate(atom.args) if isinstance(a, Placeholder)]
    if not slots:
        return [atom]
    out = []
    for combo in itertools.product(hu, repeat=len(slots)):
        args = list(atom.args)
        for i, c in zip(slots, combo):
            args[i] = Const(c)
        out.append(Atom(atom.pred, tuple(args)))
    return out


# ---------------------------------------------------------------- planning

class _Plan:
    """Ordered enumeration steps binding a set of variables.

    Data atoms are matched against the facts first, then arithmetic is
    computed as soon as its operands are known; whatever is left is
    enumerated over the Herbrand universe.
    """

    def __init__(self, conditions, bound, targets, intermediates):
        self.steps = []
        bound = set(bound)
        pending = list(conditions)
        order = {v: i for i, v in enumerate(targets)}

        def unbound_var(t):
            return isinstance(t, Var) and t.name not in bound

        def ready():
            progress = True
            while progress:
                progress = False
                for c in list(pending):
                    vs = set(literal_vars(c))
                    if isinstance(c, Atom):
                        if vs <= bound:
                            self.steps.append(("match", c, frozenset(bound)))
                        else:
                            continue
                    elif vs <= bound:
                        self.steps.append(("test", c))
                    elif isinstance(c, Arith):
                        operands = set(literal_vars(Arith(c.op, Const(0), c.left, c.right)))
                        if not (unbound_var(c.result) and operands <= bound):
                            continue
                        self.steps.append(("compute", c))
                        bound.add(c.result.name)
                    elif c.op == "=" and len(vs - bound) == 1:
                        var, src = (c.left, c.right) if unbound_var(c.left) else (c.right, c.left)
                        self.steps.append(("assign", var.name, src))
                        bound.add(var.name)
                    else:
                        continue
                    pending.remove(c)
                    progress = True

        def nbound(a):
            return sum(1 for t in a.args if isinstance(t, Const) or (isinstance(t, Var) and t.name in bound))

        ready()
        while True:
            atoms = [c for c in pending if isinstance(c, Atom)]
            if atoms:
                best = max(atoms, key=nbound)
                self.steps.append(("match", best, frozenset(bound)))
                pending.remove(best)
                bound.update(literal_vars(best))
                ready()
                continue
            todo = [v for v in targets if v not in bound and v not in intermediates]
            if not todo:
                break
            results = {c.result.name for c in pending if isinstance(c, Arith) and isinstance(c.result, Var)}
            var = min(todo, key=lambda v: (v in results, order[v]))
            self.steps.append(("enum", var))
            bound.add(var)
            ready()
        if pending:
            raise PSError("E_UNBOUND", f"cannot evaluate {', '.join(map(str, pending))}")
        missing = [v for v in targets if v not in bound]
        if missing:
            raise PSError("E_UNBOUND", f"variables {missing} cannot be bound")


def _getter(t):
    if isinstance(t, Var):
        name = t.name
        return lambda b: b[name]
    v = t.value
    return lambda b: v


def _key_builder(atom: Atom) -> Callable[[dict], tuple]:
    pred = atom.pred
    parts = [(isinstance(t, Var), t.name if isinstance(t, Var) else t.value) for t in atom.args]
    if not parts:
        key = (pred,)
        return lambda b: key
    if all(isvar for isvar, _ in parts):
        names = [x for _, x in parts]
        if len(names) == 1:
            n0 = names[0]
            return lambda b: (pred, b[n0])
        if len(names) == 2:
            n0, n1 = names
            return lambda b: (pred, b[n0], b[n1])
        return lambda b: (pred, *[b[n] for n in names])
    return lambda b: (pred, *[b[x] if isvar else x for isvar, x in parts])


class Grounder:
    """Grounding context for one validated pair."""

    def __init__(self, pair: DataProgramPair):
        if not pair.validated:
            pair = validate(pair)
        self.pair = desugar_pair(pair)
        self.hu = herbrand_constants(self.pair)
        self.hu_set = set(self.hu)
        self.data_preds = {name for name, _ in self.pair.data_signatures}
        self.facts: Dict[str, List[tuple]] = {}
        self.fact_set: Set[tuple] = set()
        for a in self.pair.data:
            vals = tuple(t.value for t in a.args)
            self.facts.setdefault(a.pred, []).append(vals)
            self.fact_set.add((a.pred, *vals))
        for v in self.facts.values():
            v.sort(key=lambda tup: [hu_key(x) for x in tup])
        self._row_index: Dict[tuple, Dict[tuple, List[tuple]]] = {}
        self._intern_base()

    # -- Herbrand base of the program predicates
    def _intern_base(self):
        arity: Dict[str, int] = {}
        g_preds, horn_heads = set(), set()
        for r in self.pair.rules:
            for a in rule_atoms(r):
                if a.pred not in self.data_preds:
                    arity[a.pred] = len(a.args)
                    if r.flavor == Flavor.GENERATING:
                        g_preds.add(a.pred)
            if r.flavor == Flavor.HORN:
                horn_heads.add(r.head[0].pred)
        total = sum(len(self.hu) ** n for n in arity.values())
        if total > MAX_ATOMS:
            raise PSError("E_TOO_LARGE", f"Herbrand base has {total} atoms")
        self.atoms: List[tuple] = []
        self.index: Dict[tuple, int] = {}
        self.closure: Set[int] = set()
        self.dead: Set[int] = set()
        for pred in sorted(arity):
            for args in itertools.product(self.hu, repeat=arity[pred]):
                key = (pred, *args)
                i = len(self.atoms)
                self.index[key] = i
                self.atoms.append(key)
                if pred in horn_heads:
                    self.closure.add(i)
                elif pred not in g_preds:
                    self.dead.add(i)

    # -- step compilation
    def _chain(self, steps, tail: Callable[[dict], None], inter: Set[str]) -> Callable[[dict], None]:
        run = tail
        for step in reversed(steps):
            run = self._step(step, run, inter)
        return run

    def _rows(self, pred: str, positions: Tuple[int, ...]) -> Dict[tuple, List[tuple]]:
        key = (pred, positions)
        idx = self._row_index.get(key)
        if idx is None:
            idx = {}
            for row in self.facts.get(pred, []):
                idx.setdefault(tuple(row[i] for i in positions), []).append(row)
            self._row_index[key] = idx
        return idx

    def _step(self, step, nxt, inter):
        kind = step[0]
        hu, hu_set = self.hu, self.hu_set
        if kind == "enum":
            var = step[1]

            def f(b):
                for c in hu:
                    b[var] = c
                    nxt(b)
                del b[var]
            return f
        if kind == "match":
            atom, known = step[1], step[2]
            if not atom.args:
                present = (atom.pred,) in self.fact_set

                def f(b):
                    if present:
                        nxt(b)
                return f
            fixed = [(i, _getter(t)) for i, t in enumerate(atom.args)
                     if isinstance(t, Const) or t.name in known]
            if len(fixed) == len(atom.args):
                builder, facts = _key_builder(atom), self.fact_set

                def f(b):
                    if builder(b) in facts:
                        nxt(b)
                return f
            idx = self._rows(atom.pred, tuple(i for i, _ in fixed))
            getters = [g for _, g in fixed]
            # remaining positions: first occurrence binds, repeats must agree
            binds, repeats, seen = [], [], {}
            for i, t in enumerate(atom.args):
                if isinstance(t, Const) or t.name in known:
                    continue
                if t.name in seen:
                    repeats.append((i, seen[t.name]))
                else:
                    seen[t.name] = i
                    binds.append((i, t.name))

            def f(b):
                rows = idx.get(tuple(g(b) for g in getters))
                if not rows:
                    return
                for row in rows:
                    if repeats and any(row[i] != row[j] for i, j in repeats):
                        continue
                    for i, name in binds:
                        b[name] = row[i]
                    nxt(b)
                for _, name in binds:
                    b.pop(name, None)   # unbound if every row failed a repeat
            return f
        if kind == "test":
            lit = step[1]
            if isinstance(lit, Arith):
                op, gr, gl, grr = lit.op, _getter(lit.result), _getter(lit.left), _getter(lit.right)

                def f(b):
                    r = arith(op, gl(b), grr(b))
                    if r is not None and compare("=", gr(b), r):
                        nxt(b)
                return f
            op, gl, grr = lit.op, _getter(lit.left), _getter(lit.right)

            def f(b):
                if compare(op, gl(b), grr(b)):
                    nxt(b)
            return f
        if kind == "compute":
            lit = step[1]
            op, gl, grr, var = lit.op, _getter(lit.left), _getter(lit.right), lit.result.name
            free = lit.intermediate

            def f(b):
                r = arith(op, gl(b), grr(b))
                if r is None or (not free and r not in hu_set):
                    return
                b[var] = r
                nxt(b)
                del b[var]
            return f
        if kind == "assign":
            var, src = step[1], _getter(step[2])
            free = var in inter

            def f(b):
                v = src(b)
                if not free and v not in hu_set:
                    return
                b[var] = v
                nxt(b)
                del b[var]
            return f
        raise AssertionError(kind)

    # -- c-atoms
    def _compile_setdef(self, d: SetDef) -> Callable[[dict, list], None]:
        bound, free = classify_set_variables(d)
        inter = {c.result.name for c in d.conditions if isinstance(c, Arith) and c.intermediate}
        plan = _Plan(d.conditions, free, sorted(bound), inter)
        key = _key_builder(d.template)
        index = self.index
        sink: List[list] = [None]

        def tail(b):
            i = index.get(key(b))
            if i is not None:
                sink[0].append(i)
        run = self._chain(plan.steps, tail, inter)

        def collect(b, out):
            sink[0] = out
            run(b)
        return collect

    def _compile_catom(self, c: CardinalityAtom) -> Callable[[dict], Union[bool, CAtom]]:
        collectors = [self._compile_setdef(d) for d in c.defs]
        lo_get = _getter(c.lower) if c.lower is not None else None
        hi_get = _getter(c.upper) if c.upper is not None else None

        def ground(b):
            bounds = []
            for g in (lo_get, hi_get):
                if g is None:
                    bounds.append(None)
                    continue
                v = g(b)
                if type(v) is not int or v < 0:
                    return BOTTOM
                bounds.append(v)
            members: List[int] = []
            for col in collectors:
                col(b, members)
            return CAtom(bounds[0], bounds[1], tuple(sorted(set(members))))
        return ground

    def ground_c_atom(self, c: CardinalityAtom, theta: Dict[str, object]) -> Union[bool, CAtom]:
        """Ground a c-atom under ``theta``; False stands for the impossible c-atom.

        ``c`` must come from the validated, desugared rules of this grounder
        (so that bound variables are already renamed apart).
        """
        return self._compile_catom(c)(dict(theta))

    # -- rules
    def ground_rule(self, rule: Rule, sink: Callable[[str, object], None]) -> None:
        body_conds, body_atoms, body_cats = [], [], []
        for lit in rule.body:
            if isinstance(lit, CardinalityAtom):
                body_cats.append(lit)
            elif isinstance(lit, Atom) and lit.pred not in self.data_preds:
                body_atoms.append(lit)
            else:
                body_conds.append(lit)
        inter = {c.result.name for c in rule.body if isinstance(c, Arith) and c.intermediate}
        targets = free_vars_of_rule(rule)
        plan = _Plan(body_conds, (), targets, inter)

        index = self.index
        hu = self.hu
        fact_set = self.fact_set
        body_keys = [_key_builder(a) for a in body_atoms]
        body_cg = [self._compile_catom(c) for c in body_cats]
        head_items = []
        for lit in rule.head:
            if isinstance(lit, CardinalityAtom):
                head_items.append(("c", self._compile_catom(lit)))
            elif isinstance(lit, Atom):
                if lit.pred in self.data_preds:
                    head_items.append(("d", _key_builder(lit)))
                elif lit.is_eatom:
                    slots = [i for i, t in enumerate(lit.args) if isinstance(t, Placeholder)]
                    fixed = [(i, _getter(t)) for i, t in enumerate(lit.args) if not isinstance(t, Placeholder)]
                    combos = list(itertools.product(hu, repeat=len(slots)))
                    head_items.append(("e", (lit.pred, len(lit.args), slots, fixed, combos)))
                else:
                    head_items.append(("a", _key_builder(lit)))
            else:
                head_items.append(("p", lit))

        flavor = rule.flavor
        tag = "h" if flavor == Flavor.HORN else ("v" if flavor == Flavor.VERIFYING else "r")

        def emit(b):
            body = [index[k(b)] for k in body_keys]
            body_c = []
            for g in body_cg:
                c = g(b)
                if c is BOTTOM:
                    return
                c = normalize_catom(c)
                if c is BOTTOM:
                    return
                if c is not TOP:
                    body_c.append(c)
            head: List[int] = []
            head_c = []
            for kind, x in head_items:
                if kind == "a":
                    head.append(index[x(b)])
                elif kind == "d":
                    if x(b) in fact_set:
                        return
                elif kind == "e":
                    pred, n, slots, fixed, combos = x
                    args = [None] * n
                    for i, g in fixed:
                        args[i] = g(b)
                    for combo in combos:
                        for i, c in zip(slots, combo):
                            args[i] = c
                        head.append(index[(pred, *args)])
                elif kind == "c":
                    c = x(b)
                    if c is BOTTOM:
                        continue
                    c = normalize_catom(c)
                    if c is TOP:
                        return
                    if c is not BOTTOM:
                        head_c.append(c)
                else:
                    if _eval_bound(x, b):
                        return
            if tag == "h":
                h = head[0]
                bs = tuple(sorted(set(body)))
                if h in bs:
                    return
                sink(tag, HornRule(h, bs))
                return
            bs = tuple(sorted(set(body)))
            hs = tuple(sorted(set(head)))
            if hs and bs and not set(bs).isdisjoint(hs):
                return
            sink(tag, (bs, hs, tuple(body_c), tuple(head_c)))

        self._chain(plan.steps, emit, inter)({})


def _eval_bound(lit, b) -> bool:
    def val(t):
        return b[t.name] if isinstance(t, Var) else t.value
    if isinstance(lit, Arith):
        r = arith(lit.op, val(lit.left), val(lit.right))
        return r is not None and compare("=", val(lit.result), r)
    return compare(lit.op, val(lit.left), val(lit.right))


def _dedupe(items):
    return list(dict.fromkeys(items))


def ground_pair(pair: DataProgramPair) -> GroundTheory:
    """gr(cl(D) ∪ P) with data and predefined atoms evaluated away."""
    g = Grounder(pair)
    out = {"r": {}, "v": {}, "h": {}}

    def sink(tag, item):
        out[tag].setdefault(item, None)

    for r in g.pair.rules:
        g.ground_rule(r, sink)
    rules = [CRule(*k) for k in out["r"]]
    verify = [CRule(*k) for k in out["v"]]
    theory = GroundTheory(atoms=g.atoms, closure=frozenset(g.closure), rules=rules, verify=verify,
                          horn=list(out["h"]), true=set(), false=set(g.dead))
    theory._index = g.index
    log.debug("ground: %d atoms, %d rules", len(g.atoms), theory.num_rules)
    return theory


# ---------------------------------------------------------------- simplification

def simplify_to_core(raw: GroundTheory) -> GroundTheory:
    """Propagate forced values to a fixpoint and drop what they determine.

    Raises Inconsistent when the theory has no model.
    """
    n = len(raw.atoms)
    closure = raw.closure
    val = [0] * n
    rules = list(raw.rules) + list(raw.verify)
    n_gen = len(raw.rules)

    # c-atom occurrences
    cmem: List[Tuple[int, ...]] = []
    clo: List[int] = []
    chi: List[int] = []
    crules: List[List[int]] = []
    cfixed: List[bool] = []      # all members are non-closure atoms
    r_bc: List[List[int]] = []
    r_hc: List[List[int]] = []
    occ: List[List[int]] = [[] for _ in range(n)]
    cocc: List[List[int]] = [[] for _ in range(n)]
    for ri, r in enumerate(rules):
        for a in r.body:
            occ[a].append(ri)
        for a in r.head:
            occ[a].append(ri)
        for side, store in ((r.body_c, r_bc), (r.head_c, r_hc)):
            ids = []
            for c in side:
                ci = len(cmem)
                lo, hi = c.count_window()
                cmem.append(c.members)
                clo.append(lo)
                chi.append(hi)
                crules.append([ri])
                cfixed.append(not any(m in closure for m in c.members))
                for m in c.members:
                    cocc[m].append(ci)
                ids.append(ci)
            store.append(ids)
    nc = len(cmem)
    tr = [0] * nc
    fa = [0] * nc
    forced = [0] * nc
    dead = [False] * len(rules)

    horn = raw.horn
    hrem = [len(h.body) for h in horn]
    hdead = [False] * len(horn)
    hocc: List[List[int]] = [[] for _ in range(n)]
    head_live = [0] * n
    for hi_, h in enumerate(horn):
        head_live[h.head] += 1
        for a in h.body:
            hocc[a].append(hi_)

    queue: deque = deque()

    def assign(a: int, v: int):
        cur = val[a]
        if cur == v:
            return
        if cur != 0:
            raise Inconsistent(f"atom {raw.atoms[a]} forced both ways")
        val[a] = v
        if v > 0:
            for c in cocc[a]:
                tr[c] += 1
        else:
            for c in cocc[a]:
                fa[c] += 1
        queue.append(a)

    def status(c: int) -> int:
        t = tr[c]
        u = len(cmem[c]) - t - fa[c]
        if t > chi[c] or t + u < clo[c]:
            return -1
        if t >= clo[c] and t + u <= chi[c]:
            return 1
        return 0

    def force_catom(c: int):
        f = forced[c]
        st = status(c)
        if st == -f:
            raise Inconsistent("cardinality atom forced both ways")
        if st != 0:
            return
        t, k = tr[c], len(cmem[c])
        u = k - t - fa[c]
        lo, hi = clo[c], chi[c]
        fill = 0
        if f > 0:
            if t == hi:
                fill = -1
            elif t + u == lo:
                fill = 1
        else:
            if t >= lo and t + u == hi + 1:
                fill = 1
            elif t + u <= hi and t == lo - 1:
                fill = -1
        if fill:
            for m in cmem[c]:
                if val[m] == 0:
                    assign(m, fill)

    def check(ri: int):
        if dead[ri]:
            return
        r = rules[ri]
        unknown = None
        count = 0
        for a in r.body:
            v = val[a]
            if v < 0:
                dead[ri] = True
                return
            if v == 0:
                count += 1
                unknown = ("a", a, -1)
        for a in r.head:
            v = val[a]
            if v > 0:
                dead[ri] = True
                return
            if v == 0:
                count += 1
                unknown = ("a", a, 1)
        for c in r_bc[ri]:
            st = status(c)
            if st < 0:
                dead[ri] = True
                return
            if st == 0:
                count += 1
                unknown = ("c", c, -1)
        for c in r_hc[ri]:
            st = status(c)
            if st > 0:
                dead[ri] = True
                return
            if st == 0:
                count += 1
                unknown = ("c", c, 1)
        if count == 0:
            raise Inconsistent("a rule is violated by forced values")
        if count > 1:
            return
        kind, x, v = unknown
        if kind == "a":
            if x not in closure:
                assign(x, v)
                dead[ri] = True
        elif cfixed[x]:
            if forced[x] == -v:
                raise Inconsistent("cardinality atom forced both ways")
            forced[x] = v
            force_catom(x)

    for a in sorted(raw.true):
        assign(a, 1)
    for a in sorted(raw.false):
        assign(a, -1)
    for a in sorted(closure):
        if head_live[a] == 0 and val[a] == 0:
            assign(a, -1)
    for hi_, h in enumerate(horn):
        if hrem[hi_] == 0:
            assign(h.head, 1)
    for ri in range(len(rules)):
        check(ri)

    while queue:
        a = queue.popleft()
        v = val[a]
        for c in cocc[a]:
            if status(c) != 0:
                for ri in crules[c]:
                    check(ri)
            if forced[c]:
                force_catom(c)
        for ri in occ[a]:
            check(ri)
        for hi_ in hocc[a]:
            if hdead[hi_]:
                continue
            h = horn[hi_].head
            if v > 0:
                hrem[hi_] -= 1
                if hrem[hi_] == 0:
                    assign(h, 1)
            else:
                hdead[hi_] = True
                head_live[h] -= 1
                if head_live[h] == 0 and val[h] == 0:
                    assign(h, -1)

    # rewrite
    def reduce_catom(c: int) -> Union[bool, CAtom]:
        members = tuple(m for m in cmem[c] if val[m] == 0)
        t = tr[c]
        return normalize_catom(CAtom(clo[c] - t, chi[c] - t, members))

    core_rules: Dict[tuple, None] = {}
    core_verify: Dict[tuple, None] = {}
    for ri, r in enumerate(rules):
        if dead[ri]:
            continue
        if any(val[a] < 0 for a in r.body) or any(val[a] > 0 for a in r.head):
            continue
        body = tuple(a for a in r.body if val[a] == 0)
        head = tuple(a for a in r.head if val[a] == 0)
        body_c, head_c = [], []
        sat = False
        for c in r_bc[ri]:
            rc = reduce_catom(c)
            if rc is BOTTOM:
                sat = True
                break
            if rc is not TOP:
                body_c.append(rc)
        if sat:
            continue
        for c in r_hc[ri]:
            rc = reduce_catom(c)
            if rc is TOP:
                sat = True
                break
            if rc is not BOTTOM:
                head_c.append(rc)
        if sat:
            continue
        if not (body or head or body_c or head_c):
            raise Inconsistent("a rule is violated by forced values")
        key = (body, head, tuple(body_c), tuple(head_c))
        (core_rules if ri < n_gen else core_verify).setdefault(key, None)

    core_horn: Dict[HornRule, None] = {}
    for hi_, h in enumerate(horn):
        if hdead[hi_] or val[h.head] != 0:
            continue
        core_horn.setdefault(HornRule(h.head, tuple(a for a in h.body if val[a] == 0)), None)

    core = GroundTheory(
        atoms=raw.atoms, closure=raw.closure,
        rules=[CRule(*k) for k in core_rules], verify=[CRule(*k) for k in core_verify],
        horn=list(core_horn),
        true={i for i in range(n) if val[i] > 0}, false={i for i in range(n) if val[i] < 0},
    )
    core._index = raw._index
    return core


def ground_core(pair: DataProgramPair) -> GroundTheory:
    return simplify_to_core(ground_pair(pair))
