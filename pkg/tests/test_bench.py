import io
import itertools

import pytest

from pschema.bench import (
    CSV_HEADER, ENCODINGS, PROBLEMS, InstanceSpec, check_correspondence, coloring_count, encoding,
    generate_instance, hamiltonian_cycles, is_cover, min_cover_by_probing, min_vertex_cover, oracle,
    queens_count, random_graph, run, transitive_closure, vertex_covers, write_csv,
)
from pschema.errors import PSError
from pschema.pipeline import models_of


def test_every_encoding_is_packaged():
    for name in ENCODINGS.values():
        assert encoding(name).strip()
    assert {p for p, _ in ENCODINGS} == set(PROBLEMS)


def test_random_graph_shape_and_determinism():
    g = random_graph(6, 9, seed=3)
    assert len(g) == len(set(g)) == 9
    assert all(v < w for v, w in g)
    assert g == random_graph(6, 9, seed=3)
    assert g != random_graph(6, 9, seed=4)
    d = random_graph(4, 12, seed=0, directed=True)
    assert len(d) == 12 and all(v != w for v, w in d)


@pytest.mark.parametrize("args", [(0, 0), (3, 4), (3, -1)])
def test_random_graph_bad_params(args):
    with pytest.raises(PSError) as e:
        random_graph(*args, seed=0)
    assert e.value.code == "E_BAD_PARAMS"


@pytest.mark.parametrize("spec", [
    InstanceSpec("coloring", 4),
    InstanceSpec("vertex-cover", 4, k=5),
    InstanceSpec("vertex-cover", 4, k=0),
    InstanceSpec("sudoku", 4),
    InstanceSpec("transitive-closure", 4, variant="extended"),
    InstanceSpec("coloring", 0, k=2),
    InstanceSpec("coloring", 3, k=2, edges=((1, 1),)),
])
def test_generate_rejects_bad_specs(spec):
    with pytest.raises(PSError) as e:
        generate_instance(spec)
    assert e.value.code == "E_BAD_PARAMS"


def test_instance_data_layouts():
    inst = generate_instance(InstanceSpec("coloring", 3, k=2, edges=((2, 1),)))
    assert inst.data_text == "vtx(1).\nvtx(2).\nvtx(3).\nedge(1,2).\ncolor(1).\ncolor(2).\n"
    q = generate_instance(InstanceSpec("nqueens", 3))
    assert q.facts == ["index(1)", "index(2)", "index(3)"] and q.constants == {"n": 3}
    h = generate_instance(InstanceSpec("hamiltonian", 3, variant="extended", edges=((1, 2),)))
    assert "start(1)" in h.facts and h.edges == ((1, 2),)
    v = generate_instance(InstanceSpec("vertex-cover", 3, k=2, variant="extended"))
    assert "size(2)" in v.facts
    assert InstanceSpec("vertex-cover", 5, k=2).label() == "vertex-cover n=5 m=10 k=2 seed=0"


def test_generation_is_deterministic():
    a = generate_instance(InstanceSpec("hamiltonian", 6, m=14, seed=9))
    b = generate_instance(InstanceSpec("hamiltonian", 6, m=14, seed=9))
    assert a.data_text == b.data_text


# ---------------------------------------------------------------- oracles

K3 = ((1, 2), (1, 3), (2, 3))
C4 = ((1, 2), (2, 3), (3, 4), (1, 4))


def test_coloring_oracle():
    assert coloring_count((1, 2, 3), K3, 3) == 6
    assert coloring_count((1, 2, 3, 4), C4, 2) == 2
    assert coloring_count((1, 2, 3, 4), tuple(itertools.combinations(range(1, 5), 2)), 3) == 0
    assert coloring_count((1, 2), (), 3) == 9


def test_cover_oracles():
    star = ((1, 2), (1, 3), (1, 4))
    assert min_vertex_cover((1, 2, 3, 4), star) == 1
    c5 = ((1, 2), (2, 3), (3, 4), (4, 5), (1, 5))
    assert min_vertex_cover(range(1, 6), c5) == 3
    assert min_vertex_cover((1, 2), ()) == 0
    assert is_cover({1}, star) and not is_cover({2}, star)
    assert vertex_covers((1, 2, 3), K3, 1) == set()
    assert len(vertex_covers((1, 2, 3), K3, 2)) == 3


def test_hamiltonian_oracle():
    k4 = tuple((v, w) for v in range(1, 5) for w in range(1, 5) if v != w)
    assert len(hamiltonian_cycles(range(1, 5), k4)) == 6
    tri = ((1, 2), (2, 3), (3, 1))
    assert hamiltonian_cycles((1, 2, 3), tri) == {frozenset(tri)}
    assert hamiltonian_cycles((1, 2, 3, 4), ((1, 2), (2, 1), (3, 4), (4, 3))) == set()


def test_queens_oracle():
    assert [queens_count(n) for n in range(1, 9)] == [1, 0, 0, 2, 10, 4, 40, 92]


def test_transitive_closure_oracle():
    assert transitive_closure([(1, 2), (2, 3)]) == {(1, 2), (2, 3), (1, 3)}
    assert transitive_closure([(1, 2), (2, 1)]) == {(1, 2), (2, 1), (1, 1), (2, 2)}


def test_oracle_caps():
    with pytest.raises(PSError) as e:
        oracle(generate_instance(InstanceSpec("nqueens", 9)))
    assert e.value.code == "E_TOO_LARGE"
    with pytest.raises(PSError) as e:
        oracle(generate_instance(InstanceSpec("coloring", 13, k=3)))
    assert e.value.code == "E_TOO_LARGE"


# ---------------------------------------------------------------- correspondence and runs

def models(inst):
    return list(models_of(inst.pair()))


@pytest.mark.parametrize("spec", [
    InstanceSpec("coloring", 3, k=3, edges=K3),
    InstanceSpec("coloring", 3, k=3, edges=K3, variant="extended"),
    InstanceSpec("vertex-cover", 5, k=3, seed=2),
    InstanceSpec("vertex-cover", 5, k=3, seed=2, variant="extended"),
    InstanceSpec("hamiltonian", 3, edges=((1, 2), (2, 3), (3, 1))),
    InstanceSpec("hamiltonian", 3, edges=((1, 2), (2, 3), (3, 1)), variant="extended"),
    InstanceSpec("hamiltonian", 4, edges=((1, 2), (2, 1), (3, 4), (4, 3))),
    InstanceSpec("nqueens", 5),
    InstanceSpec("nqueens", 5, variant="extended"),
    InstanceSpec("transitive-closure", 4, edges=((1, 2), (2, 3), (3, 1), (3, 4))),
])
def test_correspondence_holds(spec):
    inst = generate_instance(spec)
    rep = check_correspondence(inst, models(inst))
    assert rep.ok, rep.violations


def test_correspondence_flags_missing_models():
    inst = generate_instance(InstanceSpec("coloring", 3, k=3, edges=K3))
    rep = check_correspondence(inst, models(inst)[:-1])
    assert not rep.ok


def test_correspondence_flags_bad_model():
    inst = generate_instance(InstanceSpec("coloring", 3, k=3, edges=K3))
    ms = models(inst)
    ms[0] = [("clrd", 1, 1), ("clrd", 2, 1), ("clrd", 3, 2)]
    assert any("improper" in v for v in check_correspondence(inst, ms).violations)


def test_probing_finds_minimum_cover():
    spec = InstanceSpec("vertex-cover", 8, seed=4, variant="extended", k=1)
    inst = generate_instance(InstanceSpec("vertex-cover", 8, seed=4, k=8))
    assert min_cover_by_probing(spec) == min_vertex_cover(inst.vertices, inst.edges) == 5


def test_probing_on_edgeless_graph():
    assert min_cover_by_probing(InstanceSpec("vertex-cover", 3, m=0, k=1, variant="extended")) == 0


def test_run_and_csv():
    res = run(generate_instance(InstanceSpec("coloring", 4, k=2, edges=C4, variant="extended")))
    assert len(res.models) == 2 and res.atoms > 0 and res.rules > 0
    buf = io.StringIO()
    write_csv([res], buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[1].startswith("coloring n=4 m=4 k=2 seed=0,extended,")


def test_run_reports_unsat_at_grounding():
    res = run(generate_instance(InstanceSpec("coloring", 2, k=1, edges=((1, 2),), variant="extended")))
    assert res.models == []
