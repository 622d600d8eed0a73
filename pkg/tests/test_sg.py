import pytest
from hypothesis import given, strategies as st

from depth4pit.circuit import normalize
from depth4pit.generators import build_corpus, CorpusSpec, conjecture_harness, gen_zero_circuit
from depth4pit.linalg import Matrix, jacobian, symbolic_rank
from depth4pit.pit import oracle_expand
from depth4pit.poly import Poly, substitute_linear
from depth4pit.sg import (
    ReductionBudgetExceeded,
    dependence_oracle,
    faithful_reduce,
    recheck_witness,
    sg_check,
    substitute_all,
    term_order,
    trdeg,
)
from depth4pit.textio import parse_circuit
from depth4pit.verdict import Status

import oracles
from conftest import read_fixture

X, Y = Poly.var(2, 0), Poly.var(2, 1)
x3, y3, z3 = (Poly.var(3, i) for i in range(3))


def test_sg_examples():
    assert sg_check(parse_circuit(read_fixture("difference_of_squares.circ"))).is_sg
    rep = sg_check(parse_circuit(read_fixture("squares.circ")))
    assert not rep.is_sg
    assert rep.witness.display() == "(3; 1,1)"
    assert rep.witness.generators == (x3, y3)
    assert not recheck_witness(rep.witness).member


def test_sg_modes_agree():
    c = parse_circuit(read_fixture("gap.circ"))
    assert sg_check(c, mode="direct").is_sg and sg_check(c).is_sg


def test_term_order():
    assert term_order(3) == [2, 0, 1]
    assert term_order(1) == [0]


def test_trdeg_examples():
    assert trdeg([X, Y]).value == 2
    r = trdeg([X * Y, X * X, Y * Y])
    assert r.value == 2 and r.jacobian_rank == 2 and len(r.basis) == 2
    s = x3 + y3 + z3
    assert trdeg([s, s * s]).value == 1


def test_trdeg_errors():
    with pytest.raises(ValueError):
        trdeg([])
    with pytest.raises(ValueError):
        trdeg([X, x3])


def test_dependence_oracle_examples():
    F = dependence_oracle([X, X * X], 2)
    u, v = Poly.var(2, 0), Poly.var(2, 1)
    assert F == u * u - v
    assert dependence_oracle([X, Y], 3) is None
    G = dependence_oracle([X * Y, X * X, Y * Y], 2)
    a, b, c = (Poly.var(3, i) for i in range(3))
    assert G == a * a - b * c


def test_faithful_reduce_examples():
    m = faithful_reduce([X, Y], 2)
    assert m.matrix == Matrix.identity(2) and m.grid == 1 and m.tau == 2
    s = x3 + y3 + z3
    m1 = faithful_reduce([s, s * s], 1)
    assert m1.tau == 1 and trdeg(substitute_all([s, s * s], m1)).value == 1
    m2 = faithful_reduce([X * Y, X * X, Y * Y], 2)
    assert symbolic_rank(jacobian(substitute_all([X * Y, X * X, Y * Y], m2))) == 2


def test_faithful_reduce_needs_vandermonde():
    # every single-coordinate projection kills xy
    polys = [X * Y]
    m = faithful_reduce(polys, 1)
    assert m.stage == "vandermonde"
    assert trdeg(substitute_all(polys, m)).value == 1


def test_faithful_reduce_tau_mismatch():
    with pytest.raises(ValueError):
        faithful_reduce([X, Y], 1)


def test_faithful_reduce_budget():
    with pytest.raises(ReductionBudgetExceeded):
        faithful_reduce([X, Y], 2, check=False, max_candidates=0)


small = st.integers(-2, 2)


@st.composite
def poly_sets(draw, n=3):
    out = []
    for _ in range(draw(st.integers(1, 3))):
        p = Poly.zero(n)
        for _ in range(draw(st.integers(1, 3))):
            e = tuple(draw(st.integers(0, 2)) for _ in range(n))
            p = p + Poly(n, {e: draw(small)})
        if not p.is_zero() and p.degree() > 0:
            out.append(p)
    return out or [Poly.var(n, 0)]


@st.composite
def invertible3(draw):
    L = Matrix([[1 if i == j else (draw(small) if i > j else 0) for j in range(3)] for i in range(3)])
    U = Matrix([[draw(st.sampled_from([1, -1, 2])) if i == j else (draw(small) if i < j else 0)
                 for j in range(3)] for i in range(3)])
    return L @ U


@given(poly_sets())
def test_trdeg_matches_sympy_and_bounds(polys):
    r = trdeg(polys)
    assert r.value == oracles.jacobian_rank(polys)
    assert r.value <= min(len(polys), 3)
    assert len(r.basis) == r.value


@given(poly_sets(), invertible3(), st.randoms(use_true_random=False))
def test_trdeg_invariances(polys, A, rnd):
    v = trdeg(polys).value
    assert trdeg([substitute_linear(p, A) for p in polys]).value == v
    shuffled = list(polys)
    rnd.shuffle(shuffled)
    assert trdeg(shuffled).value == v


@given(poly_sets())
def test_faithful_map_preserves_trdeg(polys):
    tau = trdeg(polys).value
    m = faithful_reduce(polys, tau)
    assert m.tau == tau
    assert trdeg(substitute_all(polys, m)).value == tau


@given(st.integers(0, 5000))
def test_zero_circuits_are_sg(seed):
    c = normalize(gen_zero_circuit(seed)).circuit
    assert sg_check(c).is_sg


def test_non_sg_implies_nonzero_on_corpus_slice():
    for e in build_corpus(CorpusSpec(seed=7, random_count=30, zero_count=5, perturbed_count=15)):
        nc = normalize(e.circuit)
        if nc.early_verdict is not None:
            continue
        rep = sg_check(nc.circuit)
        if not rep.is_sg:
            assert oracle_expand(e.circuit).status is Status.NONZERO
            assert not recheck_witness(rep.witness).member


def test_conjecture_harness_reports():
    entries = build_corpus(CorpusSpec(seed=3, random_count=5, zero_count=20, perturbed_count=5))
    rep = conjecture_harness(entries)
    assert rep.sg_circuits >= 20
    assert 1 <= rep.max_trdeg <= 6
    assert rep.threshold == 12
