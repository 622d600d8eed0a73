import pytest
from hypothesis import given, strategies as st

from depth4pit.field import FieldElem, extension
from depth4pit.generators import gen_random_circuit, gen_zero_circuit
from depth4pit.poly import Poly
from depth4pit.textio import (
    ParseError,
    parse_circuit,
    parse_coeff,
    parse_member,
    parse_points,
    parse_polys,
    serialize_circuit,
    serialize_points,
    serialize_polys,
)

from conftest import read_fixture


def test_counterexample_parses():
    c = parse_circuit("circuit vars=2\nterm\nlin: 1, 0\nterm\nlin: 0, 1\nterm\nlin: 1, 2\n")
    assert c.n == 2 and c.k == 3
    assert [t.factors[0] for t in c.terms] == [Poly.linear([1, 0]), Poly.linear([0, 1]), Poly.linear([1, 2])]


@pytest.mark.parametrize("text, where", [
    ("circuit vars=2\n", (1, 1)),
    ("", (1, 1)),
    ("circuit vars=2\nterm\nlin: 0, 0\n", (3, 1)),
    ("circuit vars=2\nterm\nlin: 1, 2, 3\n", (3, None)),
    ("circuit vars=2 r=1\nterm\nquad: 1, 0, 1\n", (3, 1)),
    ("circuit vars=2\nterm\n", (2, 1)),
    ("circuit vars=2\nlin: 1, 0\n", (2, 1)),
    ("circuit vars=2\nterm scale=0\nlin: 1, 0\n", (2, 1)),
    ("circuit vars=2\nterm\nlin: 1, x\n", (3, None)),
    ("circle vars=2\n", (1, None)),
])
def test_parse_errors_carry_positions(text, where):
    with pytest.raises(ParseError) as exc:
        parse_circuit(text)
    line, col = where
    assert exc.value.line == line
    if col is not None:
        assert exc.value.col == col


def test_coefficients():
    assert parse_coeff("-3/4") == FieldElem(FieldElem(-3).a / 4)
    assert parse_coeff("1+2w") == FieldElem(1, 2)
    assert parse_coeff("3w") == FieldElem(0, 3)
    assert parse_coeff("1/2-1/2w") == FieldElem(FieldElem(1).a / 2, -FieldElem(1).a / 2)
    with pytest.raises(ValueError):
        parse_coeff("1.5")


def test_poly_factor_and_comments():
    c = parse_circuit("# cubes\ncircuit vars=2 r=3\nterm scale=2  # doubled\npoly deg=3: (1, 3 0) (-1, 0 3)\n")
    assert c.terms[0].scale == 2
    assert c.terms[0].factors[0] == Poly(2, {(3, 0): 1, (0, 3): -1})


def test_serializer_uses_grlex():
    c = parse_circuit("circuit vars=2\nterm\npoly deg=3: (1, 0 3) (5, 3 0) (2, 2 1)\n")
    assert serialize_circuit(c).splitlines()[-1] == "poly deg=3: (5, 3 0) (2, 2 1) (1, 0 3)"


@pytest.mark.parametrize("name", ["counterexample.circ", "gap.circ", "quadratic_zero.circ",
                                  "restriction_fail.circ", "difference_of_squares.circ"])
def test_fixture_round_trip(name):
    c = parse_circuit(read_fixture(name))
    assert parse_circuit(serialize_circuit(c)) == c


def test_extension_round_trip():
    text = "circuit vars=2 ext=-3 homogeneous\nterm scale=1/2+3/2w\nlin: 1, -1/2-1/2w\n"
    c = parse_circuit(text)
    assert c.ext == -3
    assert serialize_circuit(c) == text


@given(st.integers(0, 5000))
def test_generated_round_trip(seed):
    for c in (gen_random_circuit(seed), gen_zero_circuit(seed)):
        text = serialize_circuit(c)
        assert parse_circuit(text) == c
        assert serialize_circuit(parse_circuit(text)) == text


def test_polys_and_member_files():
    pl = parse_polys(read_fixture("monomials.polys"))
    assert len(pl.polys) == 3 and parse_polys(serialize_polys(pl)) == pl
    prob = parse_member(read_fixture("member.txt"))
    assert prob.target_factors == (Poly.linear([1, 2]),) and len(prob.gens) == 2
    with pytest.raises(ParseError):
        parse_member("member vars=2\nlin: 1, 0\n")


def test_points_file():
    with extension(-3):
        cfg, ext = parse_points(read_fixture("hesse.pts"))
        assert ext == -3 and len(cfg.points()) == 9
        again, _ = parse_points(serialize_points(cfg, ext))
        assert again == cfg
    with pytest.raises(ParseError):
        parse_points("points vars=2\nset A\n(1, 0)\nset B\n(2, 0)\n")
    with pytest.raises(ParseError):
        parse_points("points vars=2\n(1, 0)\n")
