"""Benchmark encodings, seeded instance generators and brute-force oracles."""

from __future__ import annotations

import csv
import itertools
import random
import time
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .ast import DataProgramPair
from .errors import Inconsistent, PSError
from .grounder import ground_pair, simplify_to_core
from .pipeline import make_pair
from .solver import Solver, SolverStats

PROBLEMS = ("coloring", "vertex-cover", "hamiltonian", "nqueens", "transitive-closure")
VARIANTS = ("plain", "extended")

# program file per (problem, variant); "extended" means c-atoms or Horn closure
ENCODINGS = {
    ("coloring", "plain"): "coloring.ps",
    ("coloring", "extended"): "coloring_c.ps",
    ("vertex-cover", "plain"): "vertex_cover.ps",
    ("vertex-cover", "extended"): "vertex_cover_c.ps",
    ("hamiltonian", "plain"): "hamiltonian.ps",
    ("hamiltonian", "extended"): "hamiltonian_h.ps",
    ("nqueens", "plain"): "nqueens.ps",
    ("nqueens", "extended"): "nqueens_c.ps",
    ("transitive-closure", "plain"): "tc.ps",
}

ORACLE_MAX_VERTICES = 12
ORACLE_MAX_QUEENS = 8

Edge = Tuple[int, int]


def encoding(name: str) -> str:
    """Text of a packaged encoding file."""
    return resources.files("pschema.encodings").joinpath(name).read_text(encoding="utf-8")


@dataclass(frozen=True)
class InstanceSpec:
    problem: str
    n: int
    m: Optional[int] = None          # number of edges; default min(2n, max possible)
    k: Optional[int] = None          # colors, or cover size bound
    seed: int = 0
    variant: str = "plain"
    edges: Optional[Tuple[Edge, ...]] = None   # explicit graph instead of a random one

    @property
    def directed(self) -> bool:
        return self.problem in ("hamiltonian", "transitive-closure")

    @property
    def num_edges(self) -> int:
        if self.edges is not None:
            return len(self.edges)
        if self.m is not None:
            return self.m
        return min(2 * self.n, _max_edges(self.n, self.directed))

    def label(self) -> str:
        parts = [self.problem, f"n={self.n}"]
        if self.problem != "nqueens":
            parts.append(f"m={self.num_edges}")
        if self.k is not None:
            parts.append(f"k={self.k}")
        parts.append(f"seed={self.seed}")
        return " ".join(parts)


@dataclass
class Instance:
    spec: InstanceSpec
    vertices: Tuple[int, ...]
    edges: Tuple[Edge, ...]
    facts: List[str]
    program: str
    constants: Dict[str, int] = field(default_factory=dict)

    @property
    def data_text(self) -> str:
        return "".join(f"{f}.\n" for f in self.facts)

    def pair(self) -> DataProgramPair:
        return make_pair([("<data>", self.data_text)], [(self.program, encoding(self.program))],
                         self.constants)


def _max_edges(n: int, directed: bool) -> int:
    return n * (n - 1) if directed else n * (n - 1) // 2


def random_graph(n: int, m: int, seed: int, directed: bool = False) -> Tuple[Edge, ...]:
    """m distinct loop-free edges over vertices 1..n, drawn uniformly."""
    if n < 1 or m < 0 or m > _max_edges(n, directed):
        raise PSError("E_BAD_PARAMS", f"cannot draw {m} edges on {n} vertices")
    if directed:
        pool = [(v, w) for v in range(1, n + 1) for w in range(1, n + 1) if v != w]
    else:
        pool = list(itertools.combinations(range(1, n + 1), 2))
    return tuple(sorted(random.Random(seed).sample(pool, m)))


def generate_instance(spec: InstanceSpec) -> Instance:
    if spec.problem not in PROBLEMS:
        raise PSError("E_BAD_PARAMS", f"unknown problem {spec.problem!r}")
    if (spec.problem, spec.variant) not in ENCODINGS:
        raise PSError("E_BAD_PARAMS", f"no {spec.variant} encoding for {spec.problem}")
    n = spec.n
    if n < 1:
        raise PSError("E_BAD_PARAMS", "n must be positive")
    program = ENCODINGS[spec.problem, spec.variant]
    vertices = tuple(range(1, n + 1))
    if spec.problem == "nqueens":
        return Instance(spec, vertices, (), [f"index({i})" for i in vertices], program, {"n": n})

    if spec.edges is not None:
        edges = tuple(spec.edges)
        for v, w in edges:
            if v == w or not (1 <= v <= n and 1 <= w <= n):
                raise PSError("E_BAD_PARAMS", f"bad edge ({v},{w})")
        if not spec.directed:
            edges = tuple(sorted({(min(e), max(e)) for e in edges}))
    else:
        edges = random_graph(n, spec.num_edges, spec.seed, spec.directed)

    facts = [f"vtx({v})" for v in vertices] + [f"edge({v},{w})" for v, w in edges]
    constants: Dict[str, int] = {}
    if spec.problem == "coloring":
        if spec.k is None or spec.k < 1:
            raise PSError("E_BAD_PARAMS", "coloring needs k >= 1")
        facts += [f"color({i})" for i in range(1, spec.k + 1)]
    elif spec.problem == "vertex-cover":
        if spec.k is None or not 1 <= spec.k <= n:
            raise PSError("E_BAD_PARAMS", "vertex cover needs 1 <= k <= n")
        if spec.variant == "plain":
            facts += [f"index({i})" for i in range(1, spec.k + 1)]
        else:
            facts.append(f"size({spec.k})")
    elif spec.problem == "hamiltonian":
        if spec.variant == "plain":
            facts += [f"index({i})" for i in vertices]
            constants["n"] = n
        else:
            facts.append("start(1)")
    else:
        facts += [f"index({i})" for i in vertices]
    return Instance(spec, vertices, edges, facts, program, constants)


# ---------------------------------------------------------------- oracles

def coloring_count(vertices: Sequence[int], edges: Iterable[Edge], k: int) -> int:
    edges = list(edges)
    pos = {v: i for i, v in enumerate(vertices)}
    count = 0
    for f in itertools.product(range(k), repeat=len(vertices)):
        if all(f[pos[v]] != f[pos[w]] for v, w in edges):
            count += 1
    return count


def is_cover(cover: Set[int], edges: Iterable[Edge]) -> bool:
    return all(v in cover or w in cover for v, w in edges)


def vertex_covers(vertices: Sequence[int], edges: Iterable[Edge], k: int) -> Set[FrozenSet[int]]:
    edges = list(edges)
    return {frozenset(s) for size in range(k + 1) for s in itertools.combinations(vertices, size)
            if is_cover(set(s), edges)}


def min_vertex_cover(vertices: Sequence[int], edges: Iterable[Edge]) -> int:
    edges = list(edges)
    for size in range(len(vertices) + 1):
        if any(is_cover(set(s), edges) for s in itertools.combinations(vertices, size)):
            return size
    return len(vertices)


def hamiltonian_cycles(vertices: Sequence[int], edges: Iterable[Edge]) -> Set[FrozenSet[Edge]]:
    """Directed Hamiltonian cycles, each as its set of edges."""
    succ: Dict[int, List[int]] = {v: [] for v in vertices}
    for v, w in edges:
        succ[v].append(w)
    if not vertices:
        return set()
    first = vertices[0]
    n = len(vertices)
    out = set()
    path = [first]
    on_path = {first}

    def extend(v):
        if len(path) == n:
            if first in succ[v]:
                out.add(frozenset(zip(path, path[1:] + [first])))
            return
        for w in succ[v]:
            if w not in on_path:
                path.append(w)
                on_path.add(w)
                extend(w)
                on_path.discard(w)
                path.pop()

    extend(first)
    return out


def queens_count(n: int) -> int:
    def place(row, cols, d1, d2):
        if row == n:
            return 1
        total = 0
        for c in range(n):
            if c not in cols and row + c not in d1 and row - c not in d2:
                total += place(row + 1, cols | {c}, d1 | {row + c}, d2 | {row - c})
        return total
    return place(0, frozenset(), frozenset(), frozenset())


def transitive_closure(edges: Iterable[Edge]) -> Set[Edge]:
    """Closure by repeated squaring: R := R ∪ R∘R until nothing changes."""
    rel = set(edges)
    while True:
        step = rel | {(x, w) for x, y in rel for z, w in rel if y == z}
        if step == rel:
            return rel
        rel = step


def oracle(instance: Instance):
    """Ground truth for an instance: a count, an optimum, a cycle set or a relation."""
    spec = instance.spec
    if spec.problem == "nqueens":
        if spec.n > ORACLE_MAX_QUEENS:
            raise PSError("E_TOO_LARGE", f"queens oracle is capped at n={ORACLE_MAX_QUEENS}")
        return queens_count(spec.n)
    if spec.n > ORACLE_MAX_VERTICES:
        raise PSError("E_TOO_LARGE", f"graph oracles are capped at {ORACLE_MAX_VERTICES} vertices")
    if spec.problem == "coloring":
        return coloring_count(instance.vertices, instance.edges, spec.k)
    if spec.problem == "vertex-cover":
        return min_vertex_cover(instance.vertices, instance.edges)
    if spec.problem == "hamiltonian":
        return hamiltonian_cycles(instance.vertices, instance.edges)
    return transitive_closure(instance.edges)


# ---------------------------------------------------------------- correspondence

@dataclass
class Report:
    problem: str
    variant: str
    models: int
    expected: object
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _project(model: Iterable[tuple], pred: str) -> List[tuple]:
    return [a[1:] for a in model if a[0] == pred]


def check_correspondence(instance: Instance, models: Sequence[Sequence[tuple]]) -> Report:
    """Check the solution/model correspondence the encodings are meant to realize."""
    spec = instance.spec
    truth = oracle(instance)
    rep = Report(spec.problem, spec.variant, len(models), truth)
    bad = rep.violations
    edges = set(instance.edges)

    if spec.problem == "coloring":
        for m in models:
            f = dict(_project(m, "clrd"))
            if len(f) != len(_project(m, "clrd")) or set(f) != set(instance.vertices):
                bad.append(f"model does not color every vertex exactly once: {sorted(f.items())}")
            elif any(f[v] == f[w] for v, w in edges):
                bad.append(f"improper coloring {sorted(f.items())}")
        if len(models) != truth:
            bad.append(f"{len(models)} models but {truth} colorings")

    elif spec.problem == "vertex-cover":
        pred = "vc" if spec.variant == "plain" else "invc"
        found = set()
        for m in models:
            cover = frozenset(a[-1] for a in _project(m, pred))
            found.add(cover)
            if len(cover) > spec.k or not is_cover(set(cover), edges):
                bad.append(f"{sorted(cover)} is not a cover of size <= {spec.k}")
        small = vertex_covers(instance.vertices, edges, spec.k)
        if found != small:
            bad.append(f"{len(found)} distinct covers from models, {len(small)} covers of size <= {spec.k}")
        if spec.variant == "extended" and len(models) != len(small):
            bad.append(f"{len(models)} models but {len(small)} covers")

    elif spec.problem == "hamiltonian":
        found = set()
        for m in models:
            if spec.variant == "plain":
                perm = dict(_project(m, "hc_perm"))
                seq = [perm.get(i) for i in range(1, spec.n + 1)]
                cyc = frozenset(zip(seq, seq[1:] + seq[:1]))
            else:
                cyc = frozenset(_project(m, "hc_edge"))
            found.add(cyc)
            if cyc not in truth:
                bad.append(f"model is not a Hamiltonian cycle: {sorted(cyc, key=str)}")
        factor = spec.n if spec.variant == "plain" else 1
        if len(models) != factor * len(truth):
            bad.append(f"{len(models)} models but {factor} x {len(truth)} expected")
        if found != truth:
            bad.append("cycle sets differ")

    elif spec.problem == "nqueens":
        for m in models:
            qs = _project(m, "q")
            rows = {r for r, _ in qs}
            cols = {c for _, c in qs}
            diag = {r + c for r, c in qs}
            anti = {r - c for r, c in qs}
            if not (len(qs) == len(rows) == len(cols) == len(diag) == len(anti) == spec.n):
                bad.append(f"invalid placement {sorted(qs)}")
        if len(models) != truth:
            bad.append(f"{len(models)} models but {truth} placements")

    else:
        if len(models) != 1:
            bad.append(f"{len(models)} models, expected exactly one")
        for m in models:
            tc = set(_project(m, "tc"))
            if tc != truth:
                bad.append(f"tc relation differs from oracle: {sorted(tc ^ truth)}")
    return rep


# ---------------------------------------------------------------- running

@dataclass
class RunResult:
    spec: InstanceSpec
    atoms: int
    rules: int
    core_size: int
    models: List[List[tuple]]
    stats: SolverStats
    seconds: float
    unsat_at_grounding: bool = False

    def row(self) -> List[object]:
        return [self.spec.label(), self.spec.variant, self.atoms, self.rules, self.core_size,
                len(self.models), self.stats.decisions, f"{self.seconds:.3f}"]


CSV_HEADER = ["spec", "variant", "atoms", "rules", "core_size", "models", "decisions", "time"]


def run(instance: Instance, limit: Optional[int] = None) -> RunResult:
    """Ground, simplify and solve one instance, timing the whole pipeline."""
    start = time.perf_counter()
    raw = ground_pair(instance.pair())
    stats = SolverStats()
    try:
        core = simplify_to_core(raw)
    except Inconsistent:
        return RunResult(instance.spec, len(raw.atoms), 0, 0, [], stats,
                         time.perf_counter() - start, unsat_at_grounding=True)
    solver = Solver(core)
    solver.stats = stats
    models = [[core.atoms[i] for i in sorted(m)] for m in solver.models(limit)]
    return RunResult(instance.spec, len(core.atoms), core.num_rules, core.size(), models, stats,
                     time.perf_counter() - start)


def min_cover_by_probing(spec: InstanceSpec) -> int:
    """Smallest k whose cover instance is satisfiable, probing k = n, n-1, ... until UNSAT."""
    def instance(k):
        return generate_instance(InstanceSpec(spec.problem, spec.n, spec.m, k, spec.seed,
                                              spec.variant, spec.edges))

    best = spec.n
    for k in range(spec.n, 0, -1):
        if not run(instance(k), limit=1).models:
            return best
        best = k
    # an edgeless graph is covered by the empty set
    return 0 if not instance(1).edges else best


def write_csv(results: Iterable[RunResult], out) -> None:
    w = csv.writer(out)
    w.writerow(CSV_HEADER)
    for r in results:
        w.writerow(r.row())
