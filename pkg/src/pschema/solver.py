"""Backtracking search for propositional theories with c-atoms and Horn closure.

The search follows the classic Davis-Putnam scheme: unit propagation over
rules and cardinality atoms, a weighted branching heuristic, and
multi-way branching on cardinality atoms whose completions are few. Atoms
defined by Horn rules are never branched on; at every complete assignment
the closure is computed and the verifying rules are checked against it.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import AbstractSet, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .theory import CAtom, CRule, GroundTheory, HornRule, satisfies

WEIGHT_CAP = 16

Model = FrozenSet[int]


def closure(model: Iterable[int], horn: Sequence[HornRule]) -> Set[int]:
    """Least superset of ``model`` closed under the Horn rules."""
    out = set(model)
    missing = []
    watch: dict = {}
    queue = []
    for i, h in enumerate(horn):
        need = 0
        for a in h.body:
            if a not in out:
                need += 1
                watch.setdefault(a, []).append(i)
        missing.append(need)
        if need == 0 and h.head not in out:
            out.add(h.head)
            queue.append(h.head)
    while queue:
        a = queue.pop()
        for i in watch.get(a, ()):
            missing[i] -= 1
            if missing[i] == 0:
                h = horn[i].head
                if h not in out:
                    out.add(h)
                    queue.append(h)
    return out


def verify(closed: AbstractSet[int], verifying: Iterable[CRule]) -> bool:
    return all(satisfies(closed, r) for r in verifying)


@dataclass
class SolverStats:
    decisions: int = 0
    propagations: int = 0
    conflicts: int = 0
    backtracks: int = 0
    verifications: int = 0
    models: int = 0
    elapsed: float = 0.0

    def lines(self) -> List[str]:
        return [f"{k}: {v:.3f}" if isinstance(v, float) else f"{k}: {v}" for k, v in vars(self).items()]


@dataclass
class BranchPlan:
    """Alternatives to try, each a list of (atom, value) assignments."""

    alternatives: List[List[Tuple[int, bool]]]
    atom: Optional[int] = None
    catom: Optional[int] = None


class Solver:
    """Search state over one theory; ``models()`` enumerates its models."""

    def __init__(self, theory: GroundTheory):
        self.theory = theory
        n = len(theory.atoms)
        self.n = n
        self.val = [0] * n
        self.stats = SolverStats()
        closure_atoms = theory.closure
        fixed = theory.true | theory.false

        def propagates(r: CRule) -> bool:
            return all(a not in closure_atoms or a in fixed for a in r.atoms())

        active = list(theory.rules)
        self.leaf_rules: List[CRule] = []
        for r in theory.verify:
            if propagates(r):
                active.append(r)
            else:
                self.leaf_rules.append(r)
        self.rules = active
        self.horn = list(theory.horn)
        self.branchable = [a for a in range(n) if a not in closure_atoms]

        # rule literals: direct atoms plus c-atom occurrences
        self.r_body: List[Tuple[int, ...]] = []
        self.r_head: List[Tuple[int, ...]] = []
        self.r_bc: List[List[int]] = []
        self.r_hc: List[List[int]] = []
        self.c_mem: List[Tuple[int, ...]] = []
        self.c_lo: List[int] = []
        self.c_hi: List[int] = []
        self.c_rules: List[List[int]] = []
        self.occ: List[List[int]] = [[] for _ in range(n)]
        self.cocc: List[List[int]] = [[] for _ in range(n)]
        for ri, r in enumerate(active):
            self.r_body.append(r.body)
            self.r_head.append(r.head)
            for a in set(r.body) | set(r.head):
                self.occ[a].append(ri)
            for side, store in ((r.body_c, self.r_bc), (r.head_c, self.r_hc)):
                ids = []
                for c in side:
                    ci = len(self.c_mem)
                    lo, hi = c.count_window()
                    self.c_mem.append(c.members)
                    self.c_lo.append(lo)
                    self.c_hi.append(hi)
                    self.c_rules.append([ri])
                    for m in c.members:
                        self.cocc[m].append(ci)
                    ids.append(ci)
                store.append(ids)
        nc = len(self.c_mem)
        self.c_true = [0] * nc
        self.c_false = [0] * nc
        self.c_forced = [0] * nc
        self.trail: List[int] = []     # atom ids, or ~c for c-atom forcing
        self.queue: List[int] = []
        self.qhead = 0

    # -- assignment bookkeeping
    def _assign(self, a: int, v: int) -> bool:
        cur = self.val[a]
        if cur:
            return cur == v
        self.val[a] = v
        if v > 0:
            for c in self.cocc[a]:
                self.c_true[c] += 1
        else:
            for c in self.cocc[a]:
                self.c_false[c] += 1
        self.trail.append(a)
        self.queue.append(a)
        self.stats.propagations += 1
        return True

    def _undo(self, mark: int):
        trail, val = self.trail, self.val
        while len(trail) > mark:
            x = trail.pop()
            if x < 0:
                self.c_forced[~x] = 0
                continue
            if val[x] > 0:
                for c in self.cocc[x]:
                    self.c_true[c] -= 1
            else:
                for c in self.cocc[x]:
                    self.c_false[c] -= 1
            val[x] = 0
        del self.queue[:]
        self.qhead = 0

    def c_status(self, c: int) -> int:
        t = self.c_true[c]
        u = len(self.c_mem[c]) - t - self.c_false[c]
        if t > self.c_hi[c] or t + u < self.c_lo[c]:
            return -1
        if t >= self.c_lo[c] and t + u <= self.c_hi[c]:
            return 1
        return 0

    def _force_catom(self, c: int, v: int) -> bool:
        cur = self.c_forced[c]
        if cur == -v:
            return False
        if cur == 0:
            self.c_forced[c] = v
            self.trail.append(~c)
        return self._catom_propagate(c)

    def _catom_propagate(self, c: int) -> bool:
        f = self.c_forced[c]
        st = self.c_status(c)
        if st == -f:
            return False
        if st != 0:
            return True
        t = self.c_true[c]
        k = len(self.c_mem[c])
        u = k - t - self.c_false[c]
        lo, hi = self.c_lo[c], self.c_hi[c]
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
            val = self.val
            for m in self.c_mem[c]:
                if val[m] == 0:
                    self._assign(m, fill)
        return True

    def _check(self, ri: int) -> bool:
        """Examine one rule; force its last open literal. False on conflict."""
        val = self.val
        unknown = None
        count = 0
        for a in self.r_body[ri]:
            v = val[a]
            if v < 0:
                return True
            if v == 0:
                count += 1
                unknown = (a, -1)
        for a in self.r_head[ri]:
            v = val[a]
            if v > 0:
                return True
            if v == 0:
                count += 1
                unknown = (a, 1)
        for c in self.r_bc[ri]:
            st = self.c_status(c)
            if st < 0:
                return True
            if st == 0:
                count += 1
                unknown = (~c, -1)
        for c in self.r_hc[ri]:
            st = self.c_status(c)
            if st > 0:
                return True
            if st == 0:
                count += 1
                unknown = (~c, 1)
        if count == 0:
            return False
        if count == 1:
            x, v = unknown
            if x >= 0:
                return self._assign(x, v)
            return self._force_catom(~x, v)
        return True

    def propagate(self) -> bool:
        """Run unit propagation to a fixpoint; False on conflict."""
        queue = self.queue
        while self.qhead < len(queue):
            a = queue[self.qhead]
            self.qhead += 1
            for c in self.cocc[a]:
                if self.c_status(c) != 0:
                    for ri in self.c_rules[c]:
                        if not self._check(ri):
                            return False
                if self.c_forced[c] and not self._catom_propagate(c):
                    return False
            for ri in self.occ[a]:
                if not self._check(ri):
                    return False
        del queue[:]
        self.qhead = 0
        return True

    def initialize(self) -> bool:
        """Assert the forced sets and propagate; False if the theory is refuted at once."""
        for a in sorted(self.theory.true):
            if not self._assign(a, 1):
                return False
        for a in sorted(self.theory.false):
            if not self._assign(a, -1):
                return False
        for ri in range(len(self.rules)):
            if not self._check(ri):
                return False
        return self.propagate()

    # -- branching
    def weights(self) -> List[float]:
        """weight(atom) = sum over open rules containing it of 2^(cap - open literals)."""
        val = self.val
        w = [0.0] * self.n
        for ri in range(len(self.rules)):
            open_atoms: List[int] = []
            u = 0
            sat = False
            for a in self.r_body[ri]:
                v = val[a]
                if v < 0:
                    sat = True
                    break
                if v == 0:
                    u += 1
                    open_atoms.append(a)
            if sat:
                continue
            for a in self.r_head[ri]:
                v = val[a]
                if v > 0:
                    sat = True
                    break
                if v == 0:
                    u += 1
                    open_atoms.append(a)
            if sat:
                continue
            for side, good in ((self.r_bc[ri], -1), (self.r_hc[ri], 1)):
                for c in side:
                    st = self.c_status(c)
                    if st == good:
                        sat = True
                        break
                    if st == 0:
                        u += 1
                        open_atoms.extend(m for m in self.c_mem[c] if val[m] == 0)
                if sat:
                    break
            if sat or u == 0:
                continue
            weight = float(2 ** max(WEIGHT_CAP - u, 0))
            for a in set(open_atoms):
                w[a] += weight
        return w

    def completions(self, c: int) -> List[List[Tuple[int, bool]]]:
        """Assignments to the open members of a forced c-atom that keep it at its forced value."""
        val = self.val
        open_ = [m for m in self.c_mem[c] if val[m] == 0]
        t = self.c_true[c]
        lo, hi = self.c_lo[c], self.c_hi[c]
        want = self.c_forced[c]
        out = []
        for bits in itertools.product((True, False), repeat=len(open_)):
            k = t + sum(bits)
            inside = lo <= k <= hi
            if inside == (want > 0):
                out.append(list(zip(open_, bits)))
        return out

    def _completion_count(self, c: int, a: int) -> int:
        from math import comb
        t = self.c_true[c]
        lo, hi = self.c_lo[c], self.c_hi[c]
        inside = sum(comb(a, j) for j in range(max(lo - t, 0), min(hi - t, a) + 1))
        return inside if self.c_forced[c] > 0 else 2 ** a - inside

    def choose_branch(self) -> Optional[BranchPlan]:
        val = self.val
        candidates = [a for a in self.branchable if val[a] == 0]
        if not candidates:
            return None
        w = self.weights()
        best_c, best_w = None, -1.0
        for c in range(len(self.c_mem)):
            if self.c_forced[c] <= 0:
                continue
            open_ = [m for m in self.c_mem[c] if val[m] == 0]
            if not open_:
                continue
            count = self._completion_count(c, len(open_))
            if 1 <= count <= len(open_):
                score = sum(w[m] for m in open_)
                if score > best_w:
                    best_c, best_w = c, score
        if best_c is not None:
            return BranchPlan(self.completions(best_c), catom=best_c)
        best = max(candidates, key=lambda a: (w[a], -a))
        return BranchPlan([[(best, True)], [(best, False)]], atom=best)

    # -- search
    def _leaf_ok(self) -> Optional[Set[int]]:
        model = {a for a in range(self.n) if self.val[a] > 0}
        if not self.horn and not self.leaf_rules:
            return model
        self.stats.verifications += 1
        closed = closure(model, self.horn)
        # a derived atom may have been forced false
        if any(self.val[a] < 0 for a in closed - model):
            return None
        if verify(closed, self.leaf_rules):
            return closed
        return None

    def models(self, limit: Optional[int] = None) -> Iterator[Model]:
        """Enumerate models (true atoms after closure), at most ``limit`` of them."""
        start = time.perf_counter()
        try:
            if limit is not None and limit <= 0:
                return
            if not self.initialize():
                self.stats.conflicts += 1
                return
            stack: List[list] = []        # [plan, next alternative, trail mark]
            ok = True
            while True:
                if not ok:
                    self.stats.conflicts += 1
                    ok = self._retreat(stack)
                    if ok is None:
                        return
                    continue
                plan = self.choose_branch()
                if plan is None:
                    found = self._leaf_ok()
                    if found is not None:
                        self.stats.models += 1
                        yield frozenset(found)
                        if limit is not None and self.stats.models >= limit:
                            return
                    else:
                        self.stats.conflicts += 1
                    ok = self._retreat(stack)
                    if ok is None:
                        return
                    continue
                self.stats.decisions += 1
                stack.append([plan, 1, len(self.trail)])
                ok = self._apply(plan.alternatives[0])
        finally:
            self.stats.elapsed += time.perf_counter() - start

    def _retreat(self, stack: List[list]) -> Optional[bool]:
        """Undo to the deepest open choice point and take its next alternative.

        Returns None when the search space is exhausted, otherwise whether
        the new alternative propagated without conflict.
        """
        while stack:
            plan, nxt, mark = stack[-1]
            self._undo(mark)
            self.stats.backtracks += 1
            if nxt < len(plan.alternatives):
                stack[-1][1] = nxt + 1
                return self._apply(plan.alternatives[nxt])
            stack.pop()
        return None

    def assume(self, atom: int, value: bool) -> bool:
        """Assign one atom and propagate; False on conflict."""
        return self._apply([(atom, value)])

    def value(self, atom: int) -> Optional[bool]:
        v = self.val[atom]
        return None if v == 0 else v > 0

    def _apply(self, alternative: List[Tuple[int, bool]]) -> bool:
        for a, v in alternative:
            if not self._assign(a, 1 if v else -1):
                return False
        return self.propagate()


def solve(theory: GroundTheory, max_models: Optional[int] = None,
          stats: Optional[SolverStats] = None) -> Iterator[Model]:
    s = Solver(theory)
    if stats is not None:
        s.stats = stats
    return s.models(max_models)
