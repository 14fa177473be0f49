"""Convenience wiring: text or files -> validated pair -> core -> models."""

from __future__ import annotations

from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .ast import DataProgramPair, resolve_constants, validate
from .errors import Inconsistent, PSError
from .grounder import ground_pair, simplify_to_core
from .parser import parse_data, parse_program
from .solver import Solver, SolverStats
from .theory import GroundTheory, format_atom

Bindings = Dict[str, Union[int, str]]


def read_text(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise PSError("E_IO", f"cannot read {path}: {e.strerror or e}")


def make_pair(data_texts: Sequence[Tuple[str, str]], program_texts: Sequence[Tuple[str, str]],
              constants: Optional[Bindings] = None, data_predicates=frozenset(),
              allow_reserved: bool = False) -> DataProgramPair:
    """Build and validate a pair from (name, text) sources."""
    constants = dict(constants or {})
    data = set()
    for name, text in data_texts:
        data |= parse_data(text, name, constants)
    rules = []
    for name, text in program_texts:
        rules.extend(resolve_constants(r, constants) for r in parse_program(text, name))
    pair = DataProgramPair(frozenset(data), tuple(rules), constants, frozenset(data_predicates))
    return validate(pair, allow_reserved=allow_reserved)


def load_pair(data_files: Iterable[Union[str, Path]], program_files: Iterable[Union[str, Path]],
              constants: Optional[Bindings] = None) -> DataProgramPair:
    return make_pair([(str(f), read_text(f)) for f in data_files],
                     [(str(f), read_text(f)) for f in program_files], constants)


def core_of(pair: DataProgramPair) -> GroundTheory:
    """Ground core of a pair; raises Inconsistent when grounding refutes it."""
    return simplify_to_core(ground_pair(pair))


def models_of(pair: DataProgramPair, limit: Optional[int] = None,
              stats: Optional[SolverStats] = None) -> Iterator[List[tuple]]:
    """Models of the pair restricted to program atoms, as sorted atom tuples."""
    try:
        core = core_of(pair)
    except Inconsistent:
        return
    s = Solver(core)
    if stats is not None:
        s.stats = stats
    for m in s.models(limit):
        yield [core.atoms[i] for i in sorted(m)]


def count_models(pair: DataProgramPair) -> int:
    return sum(1 for _ in models_of(pair))


def show(models: Iterable[Sequence[tuple]], preds: Optional[Iterable[str]] = None) -> List[List[str]]:
    keep = set(preds) if preds is not None else None
    return [[format_atom(a) for a in m if keep is None or a[0] in keep] for m in models]
