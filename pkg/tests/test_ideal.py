import pytest
from hypothesis import given, strategies as st

from depth4pit.ideal import (
    MembershipCertificate,
    collect_certificates,
    linear_factor_member,
    member_homogeneous,
    product_member,
)
from depth4pit.linalg import Matrix
from depth4pit.poly import Poly, product, substitute_linear

import oracles

L = Poly.linear
x, y = L([1, 0]), L([0, 1])
x3, y3, z3 = (Poly.var(3, i) for i in range(3))


def test_member_examples():
    cert = member_homogeneous(L([1, 2]), [x, y])
    assert cert.multipliers == (Poly.const(2, 1), Poly.const(2, 2))
    A = x * x + x * y
    assert member_homogeneous(A, [A]).multipliers == (Poly.const(2, 1),)
    assert member_homogeneous(z3 * z3, [x3, y3]) is None


def test_member_rejects_non_homogeneous():
    with pytest.raises(ValueError):
        member_homogeneous(x * x + y, [x])


def test_member_variable_mismatch():
    with pytest.raises(ValueError):
        member_homogeneous(x, [x3])


def test_member_unknown_method():
    with pytest.raises(ValueError):
        member_homogeneous(x, [x], method="groebner")


def test_linear_factor_member_examples():
    assert linear_factor_member(L([1, 2]), x, y)
    assert not linear_factor_member(z3, x3, y3)
    assert linear_factor_member(L([2, 0]), x, L([1, 1]))


def test_product_member_examples():
    res = product_member([x, y], [x], mode="subset")
    assert res.member and res.witness == (0,)
    assert product_member([L([1, 1]), L([1, -1])], [x, y], mode="subset").witness == (0,)
    assert product_member([L([1, 1]), L([1, -1])], [x, y]).member
    for mode in ("direct", "subset"):
        assert not product_member([z3, z3], [x3, y3], mode=mode).member


def test_product_member_fmax():
    with pytest.raises(ValueError):
        product_member([x], [x], mode="subset", f_max=0)
    # x*y in <xy>: no single factor is a member
    xy = x * y
    assert not product_member([x, y], [xy], mode="subset", f_max=1).member
    assert product_member([x, y], [xy], mode="subset", f_max=2).witness == (0, 1)


def test_certificate_verify_rejects_tampering():
    cert = member_homogeneous(L([1, 2]), [x, y])
    bad = MembershipCertificate(cert.generators, (Poly.const(2, 1), Poly.const(2, 3)), cert.target)
    assert not bad.verify()


def test_collect_certificates():
    with collect_certificates() as sink:
        member_homogeneous(L([1, 2]), [x, y])
        member_homogeneous(z3 * z3, [x3, y3])
    assert len(sink) == 1 and sink[0].verify()


small = st.integers(-2, 2)


def forms(n, deg):
    from depth4pit.poly import monomials_of_degree

    monos = monomials_of_degree(n, deg)
    return st.lists(small, min_size=len(monos), max_size=len(monos)).map(
        lambda cs: Poly(n, dict(zip(monos, cs))))


gens_st = st.lists(st.one_of(forms(3, 1), forms(3, 2)), min_size=1, max_size=3).map(
    lambda gs: [g for g in gs if not g.is_zero()]).filter(bool)


@st.composite
def member_cases(draw):
    gens = draw(gens_st)
    deg = draw(st.integers(2, 3))
    if draw(st.booleans()):
        # build a member on purpose
        A = Poly.zero(3)
        for g in gens:
            if g.degree() <= deg:
                A = A + g * draw(forms(3, deg - g.degree()))
    else:
        A = draw(forms(3, deg))
    return A, gens


def _sympy_member(A, gens):
    sp = oracles.sp
    xs = oracles.symbols(3)
    G = sp.groebner([oracles.poly_expr(g, xs) for g in gens], *xs, order="grevlex")
    return G.contains(oracles.poly_expr(A, xs))


@given(member_cases())
def test_auto_and_system_agree_with_groebner(case):
    A, gens = case
    auto = member_homogeneous(A, gens)
    system = member_homogeneous(A, gens, method="system")
    assert (auto is None) == (system is None)
    assert (auto is not None) == _sympy_member(A, gens)
    for cert in (auto, system):
        if cert is not None:
            assert cert.verify()


@st.composite
def invertible3(draw):
    L_ = Matrix([[1 if i == j else (draw(small) if i > j else 0) for j in range(3)] for i in range(3)])
    U = Matrix([[draw(st.sampled_from([1, -1, 2])) if i == j else (draw(small) if i < j else 0)
                 for j in range(3)] for i in range(3)])
    return L_ @ U


@given(member_cases(), invertible3())
def test_membership_invariant_under_change_of_variables(case, A):
    target, gens = case
    moved = member_homogeneous(substitute_linear(target, A), [substitute_linear(g, A) for g in gens])
    assert (moved is None) == (member_homogeneous(target, gens) is None)


@given(member_cases(), forms(3, 1))
def test_monotone_in_generators(case, extra):
    A, gens = case
    if member_homogeneous(A, gens) is not None and not extra.is_zero():
        assert member_homogeneous(A, gens + [extra]) is not None


@given(st.lists(forms(3, 1).filter(bool), min_size=1, max_size=3), gens_st)
def test_subset_implies_direct_and_full_fmax_agrees(factors, gens):
    direct = product_member(factors, gens)
    subset = product_member(factors, gens, mode="subset")
    assert direct.member == subset.member
    limited = product_member(factors, gens, mode="subset", f_max=1)
    if limited.member:
        assert direct.member
        assert member_homogeneous(product([factors[i] for i in limited.witness], 3), gens) is not None
