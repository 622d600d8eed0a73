"""Independent reference computations built on sympy (shares no code with the package)."""

import sympy as sp

from depth4pit.field import get_ext


def elem(c):
    return sp.Rational(int(c.a.numerator), int(c.a.denominator)) + \
        sp.Rational(int(c.b.numerator), int(c.b.denominator)) * sp.sqrt(get_ext())


def symbols(n):
    return sp.symbols(f"v0:{n}")


def poly_expr(p, xs=None):
    xs = xs or symbols(p.n)
    out = sp.Integer(0)
    for e, c in p.terms.items():
        m = sp.Integer(1)
        for x, k in zip(xs, e):
            m *= x ** k
        out += elem(c) * m
    return out


def circuit_expr(c):
    xs = symbols(c.n)
    total = sp.Integer(0)
    for t in c.terms:
        prod = elem(t.scale)
        for f in t.factors:
            prod *= poly_expr(f, xs)
        total += prod
    return sp.expand(total)


def is_zero_circuit(c):
    return sp.simplify(circuit_expr(c)) == 0


def matrix_rank(M):
    return sp.Matrix([[elem(v) for v in row] for row in M.rows]).rank(simplify=True) if M.rows else 0


def jacobian_rank(polys):
    xs = symbols(polys[0].n)
    exprs = [poly_expr(p, xs) for p in polys]
    return sp.Matrix(exprs).jacobian(xs).rank(simplify=True)
