"""DIMACS CNF export of plain ground cores and lifting of external assignments."""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import PSError
from .theory import GroundTheory, format_atom, parse_atom, satisfies


@dataclass(frozen=True)
class VarMap:
    """DIMACS variable ``i`` (1-based) stands for atom id ``atoms[i - 1]``."""

    atoms: Tuple[int, ...]

    @property
    def num_vars(self) -> int:
        return len(self.atoms)

    def var_of(self, atom: int) -> int:
        return self._lookup()[atom]

    def _lookup(self):
        cache = self.__dict__.get("_cache")
        if cache is None:
            cache = {a: i + 1 for i, a in enumerate(self.atoms)}
            object.__setattr__(self, "_cache", cache)
        return cache

    def dumps(self, theory: GroundTheory) -> str:
        return "".join(f"{i} {theory.name(a)}\n" for i, a in enumerate(self.atoms, start=1))

    @classmethod
    def loads(cls, text: str, theory: GroundTheory) -> "VarMap":
        entries = []
        for line in text.splitlines():
            if not line.strip():
                continue
            var, _, atom = line.strip().partition(" ")
            entries.append((int(var), theory.id_of(parse_atom(atom))))
        entries.sort()
        if [v for v, _ in entries] != list(range(1, len(entries) + 1)):
            raise PSError("E_FORMAT", "map variables are not contiguous")
        return cls(tuple(a for _, a in entries))


def export_cnf(core: GroundTheory, comments: Sequence[str] = ()) -> Tuple[str, VarMap]:
    """Clauses ``-A1 ... -Am B1 ... Bn`` for a core without c-atoms and Horn rules.

    Every atom left open by simplification gets a variable, mentioned in a
    rule or not, so CNF models and core models correspond one to one.
    """
    if core.horn:
        raise PSError("E_HORN_PRESENT", "core contains Horn rules")
    rules = list(core.rules) + list(core.verify)
    if any(r.has_catoms for r in rules):
        raise PSError("E_CATOM_PRESENT", "core contains cardinality atoms")
    vm = VarMap(tuple(core.unassigned()))
    var = vm._lookup()
    clauses = []
    for r in rules:
        # a core mentions no forced atom; anything else is evaluated here
        if any(a in core.false for a in r.body) or any(a in core.true for a in r.head):
            continue
        lits = [-var[a] for a in r.body if a in var] + [var[a] for a in r.head if a in var]
        clauses.append(" ".join(map(str, lits + [0])))
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {vm.num_vars} {len(clauses)}")
    lines.extend(clauses)
    return "\n".join(lines) + "\n", vm


def parse_assignment(text: str) -> List[int]:
    """Literals from solver output: ``v`` lines, bare literal lines; ``s``/``c`` lines skipped."""
    lits = []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] in ("c", "s") or parts[0].upper() in ("SAT", "UNSAT", "SATISFIABLE", "UNSATISFIABLE"):
            continue
        if parts[0] == "v":
            parts = parts[1:]
        for p in parts:
            try:
                x = int(p)
            except ValueError:
                raise PSError("E_FORMAT", f"bad literal {p!r}")
            if x != 0:
                lits.append(x)
    return lits


def lift_model(text: str, vm: VarMap, core: GroundTheory) -> FrozenSet[int]:
    """Model of the core (forced-true atoms plus true variables), re-checked."""
    seen = set()
    model = set(core.true)
    for lit in parse_assignment(text):
        v = abs(lit)
        if v > vm.num_vars:
            raise PSError("E_UNKNOWN_VAR", f"variable {v} is not in the map")
        if v in seen:
            raise PSError("E_FORMAT", f"variable {v} assigned twice")
        seen.add(v)
        if lit > 0:
            model.add(vm.atoms[v - 1])
    for r in list(core.rules) + list(core.verify):
        if not satisfies(model, r):
            raise PSError("E_MODEL_MISMATCH", "assignment falsifies a rule of the core")
    return frozenset(model)
