"""Seeded circuit generators: zero-by-construction templates, random circuits, and corpora."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from .circuit import Circuit, Term
from .field import ONE, get_ext, omega
from .linalg import Matrix, rank
from .poly import Poly
from .quadratic import quad_rank
from .sg import sg_check, trdeg
from .circuit import normalize


@dataclass(frozen=True)
class GenParams:
    n: Optional[int] = None  # None: random in [template vars, max_n]
    k: Optional[int] = None
    r: int = 2
    max_degree: int = 8
    max_n: int = 6
    box: int = 3
    lift: Optional[bool] = None  # common factor for zero circuits; None: coin flip
    template: Optional[str] = None


# -- zero templates ----------------------------------------------------------------
# Each template returns (variable count, terms); every one expands to 0 by hand.


def _lin(*cs) -> Poly:
    return Poly.linear(cs)


def _q(n: int, coeffs: dict) -> Poly:
    # coeffs keyed by (i, j) with i <= j
    terms = {}
    for (i, j), c in coeffs.items():
        e = [0] * n
        e[i] += 1
        e[j] += 1
        terms[tuple(e)] = c
    return Poly(n, terms)


def _t_difference_of_squares():
    x, y = _lin(1, 0), _lin(0, 1)
    return 2, [Term(1, [_lin(1, 1), _lin(1, -1)]), Term(-1, [x, x]), Term(1, [y, y])]


def _t_cyclic():
    x, y, z = _lin(1, 0, 0), _lin(0, 1, 0), _lin(0, 0, 1)
    return 3, [Term(1, [x, _lin(0, 1, -1)]), Term(1, [y, _lin(-1, 0, 1)]), Term(1, [z, _lin(1, -1, 0)])]


def _t_square():
    x, y = _lin(1, 0), _lin(0, 1)
    s = _lin(1, 1)
    return 2, [Term(1, [x, _lin(1, 2)]), Term(1, [y, y]), Term(-1, [s, s])]


def _t_cubes():
    w = omega()
    x, y = _lin(1, 0), _lin(0, 1)
    roots = [ONE, w, w * w]
    return 2, [Term(1, [x, x, x]), Term(-1, [y, y, y]), Term(-1, [_lin(1, -r) for r in roots])]


def _t_quadratic():
    x, y, z = _lin(1, 0, 0), _lin(0, 1, 0), _lin(0, 0, 1)
    q = _q(3, {(0, 0): 1, (1, 2): 1})
    return 3, [Term(1, [x, x]), Term(1, [y, z]), Term(-1, [q])]


def _t_rank_four():
    x, y, z, w = (_lin(*[1 if i == j else 0 for i in range(4)]) for j in range(4))
    q = _q(4, {(0, 1): 1, (2, 3): 1})
    return 4, [Term(1, [x, y]), Term(1, [z, w]), Term(-1, [q])]


def _t_two_quadratics():
    x, y, z, w = (_lin(*[1 if i == j else 0 for i in range(4)]) for j in range(4))
    minus = _q(4, {(0, 1): 1, (2, 3): -1})
    plus = _q(4, {(0, 1): 1, (2, 3): 1})
    return 4, [Term(1, [x, x, y, y]), Term(-1, [z, z, w, w]), Term(-1, [minus, plus])]


def _t_squares_of_quadratics():
    q1 = _q(4, {(0, 0): 1, (1, 1): 1, (2, 2): 1})
    q2 = _q(4, {(0, 1): 1, (2, 3): 1})
    return 4, [Term(1, [q1, q1]), Term(-1, [q2, q2]), Term(-1, [q1 - q2, q1 + q2])]


def _t_two_terms():
    q = _q(3, {(0, 0): 1, (1, 2): 1})
    return 3, [Term(1, [_lin(2, 2, 0), q]), Term(-1, [_lin(1, 1, 0), q.scale(2)])]


TEMPLATES: dict[str, Callable[[], tuple[int, list[Term]]]] = {
    "difference-of-squares": _t_difference_of_squares,
    "cyclic": _t_cyclic,
    "square": _t_square,
    "cubes": _t_cubes,
    "quadratic": _t_quadratic,
    "rank-four": _t_rank_four,
    "two-quadratics": _t_two_quadratics,
    "squares-of-quadratics": _t_squares_of_quadratics,
    "two-terms": _t_two_terms,
}


def available_templates() -> list[str]:
    """Template names usable under the active extension (the cube template needs ``d = -3``)."""
    return [t for t in sorted(TEMPLATES) if t != "cubes" or get_ext() == -3]


def template_circuit(name: str) -> Circuit:
    m, terms = TEMPLATES[name]()
    return Circuit(m, tuple(terms), homogeneous=True)


# -- zero circuits -----------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroInstance:
    circuit: Circuit
    template: str
    embedding: Matrix  # template variables (rows) -> output variables (columns)
    lifted: bool


def random_surjection(rng: random.Random, m: int, n: int, box: int = 2) -> Matrix:
    """Random ``m x n`` integer matrix of rank ``m`` (so substitution is injective)."""
    if m > n:
        raise ValueError("cannot embed more variables than the target has")
    while True:
        A = Matrix([[rng.randint(-box, box) for _ in range(n)] for _ in range(m)])
        if rank(A) == m:
            return A


def _random_linear(rng: random.Random, n: int, box: int) -> Poly:
    while True:
        cs = [rng.randint(-box, box) for _ in range(n)]
        if any(cs):
            return Poly.linear(cs)


def zero_instance(seed: int, params: GenParams = GenParams()) -> ZeroInstance:
    rng = random.Random(seed)
    name = params.template or rng.choice(available_templates())
    m, terms = TEMPLATES[name]()
    n = params.n if params.n is not None else rng.randint(m, max(m, params.max_n))
    if n < m:
        raise ValueError(f"template {name!r} needs at least {m} variables")
    A = random_surjection(rng, m, n)
    base = Circuit(m, tuple(terms), homogeneous=True)
    c = base.substitute(A)
    degree = c.degree()
    lift = params.lift if params.lift is not None else rng.random() < 0.3
    lift = lift and degree < params.max_degree
    if lift:
        g = _random_linear(rng, n, 2)
        c = c.replace_terms([Term(t.scale, (g,) + t.factors) for t in c.terms])
    scale = rng.choice([1, 2, -1, 3])
    c = c.replace_terms([Term(t.scale * scale, t.factors) for t in c.terms])
    return ZeroInstance(c, name, A, lift)


def gen_zero_circuit(seed: int, params: GenParams = GenParams()) -> Circuit:
    """Identically zero circuit: a hand-checked template pushed through a random injective linear map."""
    return zero_instance(seed, params).circuit


def gen_perturbed_circuit(seed: int, params: GenParams = GenParams()) -> Circuit:
    """A zero template with one term rescaled; usually nonzero but structurally close to zero."""
    inst = zero_instance(seed, params)
    rng = random.Random(seed ^ 0x5EED)
    terms = list(inst.circuit.terms)
    i = rng.randrange(len(terms))
    terms[i] = Term(terms[i].scale * rng.choice([2, -1, 3]), terms[i].factors)
    return inst.circuit.replace_terms(terms)


# -- random circuits ------------------------------------------------------------------------


def _random_quadratic(rng: random.Random, n: int, box: int) -> Poly:
    while True:
        coeffs = [rng.randint(-box, box) if rng.random() < 0.6 else 0 for _ in range(n * (n + 1) // 2)]
        q = Poly.quadratic_upper(n, coeffs)
        if not q.is_zero() and quad_rank(q) >= 3:
            return q


def gen_random_circuit(seed: int, params: GenParams = GenParams()) -> Circuit:
    """Random homogeneous circuit; quadratic factors are always irreducible (rank >= 3)."""
    rng = random.Random(seed)
    n = params.n if params.n is not None else rng.randint(2, params.max_n)
    k = params.k if params.k is not None else rng.randint(2, 3)
    r = params.r if n >= 3 else 1
    degree = rng.randint(1, max(1, min(params.max_degree, 6)))
    terms = []
    for _ in range(k):
        factors = []
        left = degree
        while left:
            d = 2 if r == 2 and left >= 2 and rng.random() < 0.4 else 1
            factors.append(_random_quadratic(rng, n, params.box) if d == 2 else _random_linear(rng, n, params.box))
            left -= d
        terms.append(Term(rng.choice([1, -1, 2, -2, 3]), factors))
    return Circuit(n, tuple(terms), homogeneous=True, r_bound=None)


# -- corpora ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusEntry:
    index: int
    kind: str  # "random", "zero" or "perturbed"
    seed: int
    circuit: Circuit
    template: Optional[str] = None


@dataclass(frozen=True)
class CorpusSpec:
    seed: int = 0
    random_count: int = 250
    zero_count: int = 150
    perturbed_count: int = 100
    params: GenParams = field(default_factory=GenParams)

    @property
    def size(self) -> int:
        return self.random_count + self.zero_count + self.perturbed_count


def build_corpus(spec: CorpusSpec = CorpusSpec()) -> list[CorpusEntry]:
    out: list[CorpusEntry] = []
    base = spec.seed * 1_000_003
    for i in range(spec.zero_count):
        s = base + i
        inst = zero_instance(s, spec.params)
        out.append(CorpusEntry(len(out), "zero", s, inst.circuit, inst.template))
    for i in range(spec.perturbed_count):
        s = base + 100_000 + i
        out.append(CorpusEntry(len(out), "perturbed", s, gen_perturbed_circuit(s, spec.params)))
    for i in range(spec.random_count):
        s = base + 200_000 + i
        out.append(CorpusEntry(len(out), "random", s, gen_random_circuit(s, spec.params)))
    return out


def subclass_shape(c: Circuit) -> bool:
    """Three terms with factors of degree at most 2 and quadratics in at least two terms."""
    if c.k != 3 or c.max_factor_degree() > 2:
        return False
    return sum(any(f.degree() == 2 for f in t.factors) for t in c.terms) >= 2


@dataclass(frozen=True)
class ConjectureReport:
    sg_circuits: int
    max_trdeg: int
    subclass_circuits: int
    subclass_max_trdeg: int
    flagged: tuple[int, ...]  # corpus indices of subclass circuits with trdeg >= threshold
    threshold: int = 12


def conjecture_harness(entries, threshold: int = 12) -> ConjectureReport:
    """Observed transcendence degree of the factor sets of SG circuits (k <= 3, r <= 2).

    Nothing is asserted; subclass circuits reaching ``threshold`` are listed.
    """
    sg_count = sub_count = 0
    best = sub_best = 0
    flagged = []
    for e in entries:
        c = e.circuit
        if c.k > 3 or c.max_factor_degree() > 2:
            continue
        nc = normalize(c).circuit
        facs = list(dict.fromkeys(nc.factors()))
        if not facs or not sg_check(nc).is_sg:
            continue
        t = trdeg(facs).value
        sg_count += 1
        best = max(best, t)
        if subclass_shape(nc):
            sub_count += 1
            sub_best = max(sub_best, t)
            if t >= threshold:
                flagged.append(e.index)
    return ConjectureReport(sg_count, best, sub_count, sub_best, tuple(flagged), threshold)
