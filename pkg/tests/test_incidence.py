import itertools

import pytest
from hypothesis import given, strategies as st

from depth4pit.field import extension
from depth4pit.incidence import (
    Configuration,
    ProjPoint,
    circuit_to_configuration,
    find_line_two_sets,
    find_ordinary_line,
    hesse_configuration,
    line_points,
    projective_dim,
    random_colored_configuration,
    random_point_set,
    span_dim,
)
from depth4pit.linalg import Matrix, rank
from depth4pit.textio import parse_circuit

import oracles
from conftest import read_fixture


def P(*cs):
    return ProjPoint(cs)


def collinear(p, q, r):
    return rank(Matrix([p.coords, q.coords, r.coords])) <= 2


def test_canonical_form():
    assert P(2, 4, 0) == P(1, 2, 0)
    assert P(0, -3, 3).coords[1] == 1
    with pytest.raises(ValueError):
        P(0, 0)


def test_configuration_rules():
    with pytest.raises(ValueError):
        Configuration.build(2, {"A": [P(1, 0)], "B": [P(2, 0)]})
    with pytest.raises(ValueError):
        Configuration.build(2, {"A": []})
    cfg = Configuration.build(2, {"A": [P(1, 0), P(3, 0)]})
    assert len(cfg.points()) == 1


def test_span_dim_examples():
    cex = Configuration.build(3, {"1": [P(1, 0, 0)], "2": [P(0, 1, 0)], "3": [P(1, 2, 0)]})
    assert span_dim(cex) == 2 and projective_dim(cex) == 1
    basis = [P(*[1 if i == j else 0 for i in range(6)]) for j in range(6)]
    assert span_dim(Configuration.build(6, {"A": basis[:3], "B": basis[3:]})) == 6
    hesse = Configuration.build(3, {"H": hesse_configuration()})
    assert span_dim(hesse) == 3
    assert oracles.matrix_rank(Matrix([p.coords for p in hesse_configuration()])) == 3


def test_line_points_examples():
    cfg = Configuration.build(3, {"1": [P(1, 0, 0)], "2": [P(0, 1, 0)], "3": [P(1, 2, 0)]})
    on = line_points(P(1, 0, 0), P(0, 1, 0), cfg)
    assert ("3", P(1, 2, 0)) in on
    lone = Configuration.build(3, {"A": [P(1, 0, 0)], "B": [P(0, 0, 1)], "C": [P(0, 1, 1)]})
    assert len(line_points(P(1, 0, 0), P(0, 0, 1), lone)) == 2
    with pytest.raises(ValueError):
        line_points(P(1, 0, 0), P(2, 0, 0), cfg)


def test_hesse_every_pair_has_a_third_point():
    pts = hesse_configuration()
    cfg = Configuration.build(3, {"H": pts})
    for p, q in itertools.combinations(pts, 2):
        assert len(line_points(p, q, cfg)) == 3


def test_ordinary_line_examples():
    pts = hesse_configuration()
    assert find_ordinary_line(pts) is None
    for i in range(9):
        assert find_ordinary_line(pts[:i] + pts[i + 1:]) is not None
    assert find_ordinary_line([P(1, 0, 0), P(0, 1, 0), P(0, 0, 1)]) == (P(1, 0, 0), P(0, 1, 0))


def test_two_set_line_examples():
    cex = Configuration.build(2, {"1": [P(1, 0)], "2": [P(0, 1)], "3": [P(1, 2)]})
    assert find_line_two_sets(cex) is None
    two = Configuration.build(2, {"A": [P(1, 0)], "B": [P(0, 1)]})
    rep = find_line_two_sets(two)
    assert rep.sets == ("A", "B") and len(rep.points) == 2
    with pytest.raises(ValueError):
        find_line_two_sets(Configuration.build(2, {"A": [P(1, 0)]}))


def test_circuit_to_configuration_examples():
    cfg = circuit_to_configuration(parse_circuit(read_fixture("counterexample.circ")))
    assert cfg.sets == (("1", (P(1, 0),)), ("2", (P(0, 1),)), ("3", (P(1, 2),)))
    dos = circuit_to_configuration(parse_circuit(read_fixture("difference_of_squares.circ")))
    assert dos.sets == (("1", (P(1, 1), P(1, -1))), ("2", (P(1, 0),)), ("3", (P(0, 1),)))


def test_circuit_to_configuration_skips_quadratics_and_rejects_shared_points():
    gap = circuit_to_configuration(parse_circuit(read_fixture("gap.circ")))
    assert [name for name, _ in gap.sets] == ["1", "2"]
    shared = parse_circuit("circuit vars=2\nterm\nlin: 1, 0\nterm\nlin: 2, 0\n")
    with pytest.raises(ValueError):
        circuit_to_configuration(shared)


def _brute_two_set(cfg):
    pts = cfg.labelled_points()
    for (a, p), (b, q) in itertools.combinations(pts, 2):
        if a == b:
            continue
        touched = {s for s, r in pts if collinear(p, q, r)}
        if len(touched) == 2:
            return True
    return False


def _brute_ordinary(pts):
    for p, q in itertools.combinations(pts, 2):
        if not any(collinear(p, q, r) for r in pts if r != p and r != q):
            return True
    return False


@given(st.integers(0, 10_000), st.booleans())
def test_two_set_finder_is_exhaustive(seed, lattice):
    cfg = random_colored_configuration(seed, n=3, size=(1, 4), lattice=lattice)
    assert (find_line_two_sets(cfg) is not None) == _brute_two_set(cfg)


@given(st.integers(0, 10_000))
def test_ordinary_finder_is_exhaustive(seed):
    pts = random_point_set(seed, n=3, box=1)
    assert (find_ordinary_line(pts) is not None) == _brute_ordinary(pts)


@given(st.integers(0, 10_000))
def test_two_set_line_exists_in_high_dimension(seed):
    cfg = random_colored_configuration(seed, n=6, lattice=seed % 2 == 0)
    if span_dim(cfg) >= 6:
        assert find_line_two_sets(cfg) is not None


@given(st.integers(0, 10_000))
def test_ordinary_line_exists_off_the_plane(seed):
    pts = random_point_set(seed, n=4)
    if rank(Matrix([p.coords for p in pts])) >= 4:
        assert find_ordinary_line(pts) is not None


def test_hesse_needs_the_cube_root_field():
    with extension(-1), pytest.raises(ValueError):
        hesse_configuration()


def test_step_two_configurations_have_no_two_set_line():
    from depth4pit.circuit import normalize
    from depth4pit.generators import GenParams, gen_random_circuit, gen_zero_circuit
    from depth4pit.pit import detect_shape, pit31

    checked = 0
    for seed in range(300):
        c = gen_zero_circuit(seed) if seed % 2 else gen_random_circuit(seed, GenParams(r=1, k=3))
        if detect_shape(c) != "pit31":
            continue
        v = pit31(c)
        if "span_dim" not in v.info:
            continue
        cfg = circuit_to_configuration(normalize(c).circuit)
        assert find_line_two_sets(cfg) is None
        assert span_dim(cfg) == v.info["span_dim"] <= 5
        checked += 1
    assert checked >= 20
