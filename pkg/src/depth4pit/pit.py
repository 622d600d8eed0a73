"""Deterministic identity tests for depth-4 circuits.

Every pipeline ends in a complete expansion (possibly in fewer variables), so
ZERO is only ever reported from an empty expansion.  Shortcuts to NONZERO use
conditions that a zero circuit provably satisfies.  Published claims that a
zero circuit can violate are only reported as ``ClaimViolation`` diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .circuit import Circuit, associate_ratio, errors, normalize, validate
from .field import ZERO, FieldElem
from .ideal import linear_factor_member
from .linalg import Matrix, echelon_pivots, rank, row_basis
from .poly import Exponent, Poly
from .quadratic import gram, quad_rank, restrict_to_hyperplane
from .sg import ReductionBudgetExceeded, faithful_reduce, recheck_witness, sg_check, trdeg
from .verdict import (
    EARLY_NORMALIZATION,
    EXPANSION_EMPTY,
    FAILED_CONDITION,
    NONZERO_MONOMIAL,
    RESOURCE,
    SG_WITNESS,
    Certificate,
    ClaimViolation,
    Status,
    Verdict,
)


class ShapeError(ValueError):
    """The circuit does not have the shape a pipeline requires."""


class BudgetExceeded(RuntimeError):
    """An expansion grew past the configured monomial budget."""


class OracleMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class PipelineConfig:
    f_max: Optional[int] = None  # subset-membership bound; None = all factors
    grid_bound: int = 16
    budget: int = 200_000
    strict_oracle: bool = False

    def __post_init__(self):
        if self.f_max is not None and self.f_max < 1:
            raise ValueError("f_max must be positive")
        if self.grid_bound < 1 or self.budget < 1:
            raise ValueError("bounds must be positive")


DEFAULT_CONFIG = PipelineConfig()


# -- oracle ---------------------------------------------------------------------


def expand(c: Circuit, budget: int = DEFAULT_CONFIG.budget) -> Poly:
    """The polynomial computed by ``c``; raises ``BudgetExceeded`` past ``budget`` monomials."""
    total: dict[Exponent, FieldElem] = {}
    for t in c.terms:
        acc = Poly.const(c.n, t.scale)
        for f in sorted(t.factors, key=len):
            acc = acc * f
            if len(acc.terms) > budget:
                raise BudgetExceeded(f"term expansion exceeded {budget} monomials")
        for e, v in acc.terms.items():
            prev = total.get(e)
            total[e] = v if prev is None else prev + v
        if len(total) > budget:
            raise BudgetExceeded(f"expansion exceeded {budget} monomials")
    return Poly(c.n, {e: v for e, v in total.items() if v}, _clean=True)


def _expansion_verdict(c: Circuit, budget: int, **payload) -> Verdict:
    p = expand(c, budget)
    if p.is_zero():
        return Verdict(Status.ZERO, Certificate(EXPANSION_EMPTY, dict(payload, circuit=c)))
    e, coeff = p.leading_term()
    return Verdict(
        Status.NONZERO,
        Certificate(NONZERO_MONOMIAL, dict(payload, circuit=c, monomial=e, coefficient=coeff)),
    )


def oracle_expand(c: Circuit, budget: int = DEFAULT_CONFIG.budget) -> Verdict:
    """Ground truth by full expansion; the witness is the graded-lex leading monomial."""
    return _expansion_verdict(c, budget)


def _resource(reason: str) -> Verdict:
    return Verdict(Status.INDETERMINATE, Certificate(RESOURCE, {"reason": reason}))


# -- shared steps ----------------------------------------------------------------


def _prepare(c: Circuit) -> None:
    errs = errors(validate(c))
    if errs:
        raise ShapeError("; ".join(str(d) for d in errs))
    if not c.is_homogeneous():
        raise ShapeError("circuit is not homogeneous (use the homogenize transform first)")


def essential_space(c: Circuit) -> Matrix:
    """Echelon basis of the span of linear-factor coefficient vectors and quadratic Gram column spaces."""
    rows: list[list[FieldElem]] = []
    for f in c.factors():
        d = f.degree()
        if d == 1:
            rows.append(f.linear_coeffs())
        elif d == 2:
            rows.extend(list(r) for r in gram(f).rows)
        elif d > 2:
            raise ValueError(f"factor of degree {d} has no essential space here")
    if not rows:
        return Matrix([], ncols=c.n)
    return row_basis(Matrix(rows))


def coordinate_map(basis: Matrix) -> Matrix:
    """Substitution keeping the pivot variables of an echelon basis and zeroing the rest.

    The pivot columns of ``basis`` form an invertible block, so the map is
    injective on polynomials in the basis forms.
    """
    pivots = echelon_pivots(basis)
    n = basis.ncols
    return Matrix([[FieldElem(1) if i == p else ZERO for p in pivots] for i in range(n)], ncols=len(pivots))


def _reduce_and_expand(c: Circuit, basis: Matrix, cfg: PipelineConfig, **info) -> Verdict:
    A = coordinate_map(basis)
    reduced = c.substitute(A) if A.ncols < c.n else c
    mapping = A if A.ncols < c.n else None
    try:
        v = _expansion_verdict(reduced, cfg.budget, map=mapping)
    except BudgetExceeded as exc:
        return _resource(str(exc)).with_extra(**info)
    return v.with_extra(**info)


def _early(c: Circuit):
    rep = normalize(c)
    if rep.early_verdict is not None:
        v = rep.early_verdict
        payload = dict(v.certificate.payload, circuit=rep.circuit)
        return rep, Verdict(v.status, Certificate(v.certificate.kind, payload), v.diagnostics,
                            {"removed_gcd": len(rep.removed_gcd_factors)})
    return rep, None


def _strict(c: Circuit, v: Verdict, cfg: PipelineConfig) -> Verdict:
    if cfg.strict_oracle and v.status is not Status.INDETERMINATE:
        truth = oracle_expand(c, cfg.budget)
        if truth.status is not v.status:
            raise OracleMismatch(f"pipeline said {v.status.value}, oracle says {truth.status.value}")
    return v


# -- the (3,1) pipeline ------------------------------------------------------------


def _all_linear(c: Circuit) -> bool:
    return all(f.degree() == 1 for f in c.factors())


def pit31(c: Circuit, cfg: PipelineConfig = DEFAULT_CONFIG) -> Verdict:
    """Three terms, linear factors only.

    After normalization the terms are pairwise coprime, so ``<l1, l2>`` is a
    prime ideal for factors of two different terms; zero-ness then forces a
    factor of the third term into ``span{l1, l2}``.  Those conditions do not
    imply zero, so the finish is an expansion in a basis of the linear span.
    """
    if c.k != 3 or not _all_linear(c):
        raise ShapeError("pit31 needs k = 3 and only linear factors")
    _prepare(c)
    rep, early = _early(c)
    if early is not None:
        return _strict(c, early, cfg)
    nc = rep.circuit
    checked = 0
    for a, b in ((0, 1), (0, 2), (1, 2)):
        third = 3 - a - b
        for i, l1 in enumerate(nc.terms[a].factors):
            for j, l2 in enumerate(nc.terms[b].factors):
                checked += 1
                if not any(linear_factor_member(l3, l1, l2) for l3 in nc.terms[third].factors):
                    cert = Certificate(FAILED_CONDITION, {
                        "condition": "prime-ideal-membership",
                        "terms": (a + 1, b + 1),
                        "factors": (i + 1, j + 1),
                        "l1": l1, "l2": l2,
                        "third_term": third + 1,
                        "circuit": nc,
                    })
                    return _strict(c, Verdict(Status.NONZERO, cert, (), {"conditions_checked": checked}), cfg)
    basis = essential_space(nc)
    dim = basis.nrows
    diags = []
    if dim > 5:
        diags.append(ClaimViolation("span_dim_le_5", f"linear span has dimension {dim}"))
    v = _reduce_and_expand(nc, basis, cfg, span_dim=dim, conditions_checked=checked)
    return _strict(c, v.with_extra(diags), cfg)


# -- the (3,2) subclass pipeline -------------------------------------------------------


def _quadratic_terms(c: Circuit) -> list[int]:
    return [i for i, t in enumerate(c.terms) if any(f.degree() == 2 for f in t.factors)]


def is_pit32_shape(c: Circuit) -> bool:
    if c.k != 3 or c.max_factor_degree() > 2:
        return False
    return len(_quadratic_terms(c)) == 1


def pit32(c: Circuit, cfg: PipelineConfig = DEFAULT_CONFIG) -> Verdict:
    """Three terms; two are products of linear forms, the third carries irreducible quadratics.

    For a zero circuit, restricting to ``l = 0`` for a linear factor ``l`` of
    one linear-only term leaves the other linear-only term as a nonzero
    product of linear forms, so every quadratic of the third term must split
    on that hyperplane (rank at most 2).
    """
    if c.k != 3 or c.max_factor_degree() > 2:
        raise ShapeError("pit32 needs k = 3 and factors of degree at most 2")
    qterms = _quadratic_terms(c)
    if not qterms:
        return pit31(c, cfg)
    if len(qterms) > 1:
        raise ShapeError("pit32 needs the quadratic factors confined to one term")
    _prepare(c)
    qi = qterms[0]
    order = [i for i in range(3) if i != qi] + [qi]
    perm = c.replace_terms([c.terms[i] for i in order])
    rep, early = _early(perm)
    if early is not None:
        return _strict(c, early.with_extra(term_order=tuple(i + 1 for i in order)), cfg)
    nc = rep.circuit
    lin = [f for t in nc.terms[:2] for f in t.factors]
    quads = [f for f in nc.terms[2].factors if f.degree() == 2]
    checked = 0
    for l in lin:
        for q in quads:
            checked += 1
            rk = quad_rank(restrict_to_hyperplane(q, l))
            if rk > 2:
                cert = Certificate(FAILED_CONDITION, {
                    "condition": "restriction-reducible",
                    "l": l, "q": q, "restricted_rank": rk,
                    "circuit": nc,
                })
                return _strict(c, Verdict(Status.NONZERO, cert, (),
                                          {"conditions_checked": checked,
                                           "term_order": tuple(i + 1 for i in order)}), cfg)
    diags = []
    ranks = [quad_rank(q) for q in quads]
    bad = [r for r in ranks if r != 3]
    if bad:
        diags.append(ClaimViolation("quadratic_rank_eq_3", f"quadratic rank {bad[0]} != 3"))
    lin_dim = rank(Matrix([l.linear_coeffs() for l in lin], ncols=nc.n)) if lin else 0
    if lin_dim > 3:
        diags.append(ClaimViolation("linear_span_le_3", f"linear span dimension {lin_dim} > 3"))
    basis = essential_space(nc)
    v = _reduce_and_expand(nc, basis, cfg, essential_dim=basis.nrows, linear_span_dim=lin_dim,
                           quadratic_ranks=tuple(ranks), conditions_checked=checked,
                           term_order=tuple(i + 1 for i in order))
    return _strict(c, v.with_extra(diags), cfg)


# -- general conditional pipeline --------------------------------------------------------


def distinct_factors(c: Circuit) -> list[Poly]:
    return list(dict.fromkeys(c.factors()))


def pit_general(c: Circuit, cfg: PipelineConfig = DEFAULT_CONFIG) -> Verdict:
    """SG check, then a rank-preserving reduction to ``trdeg`` variables and a full expansion.

    A zero circuit is always SG, so a failed membership is a NONZERO
    certificate.  The finish is exact whatever the transcendence degree; only
    its cost depends on it.
    """
    _prepare(c)
    rep, early = _early(c)
    if early is not None:
        return _strict(c, early, cfg)
    nc = rep.circuit
    facs = distinct_factors(nc)
    if not facs:
        try:
            return _strict(c, _expansion_verdict(nc, cfg.budget, map=None), cfg)
        except BudgetExceeded as exc:
            return _resource(str(exc))
    report = sg_check(nc, mode="subset", f_max=cfg.f_max)
    if not report.is_sg:
        cert = Certificate(SG_WITNESS, {"witness": report.witness, "circuit": nc})
        return _strict(c, Verdict(Status.NONZERO, cert, (), {"sg_checks": report.checks}), cfg)
    tau = trdeg(facs).value
    try:
        fmap = faithful_reduce(facs, tau, cfg.grid_bound, check=False)
    except ReductionBudgetExceeded as exc:
        return _resource(str(exc))
    reduced = nc.substitute(fmap.matrix)
    try:
        v = _expansion_verdict(reduced, cfg.budget, map=fmap.matrix)
    except BudgetExceeded as exc:
        return _resource(str(exc))
    return _strict(c, v.with_extra(trdeg=tau, reduction_stage=fmap.stage, sg_checks=report.checks), cfg)


# -- dispatch and checking ------------------------------------------------------------------


def detect_shape(c: Circuit) -> str:
    if c.k == 3 and _all_linear(c):
        return "pit31"
    if is_pit32_shape(c):
        return "pit32"
    return "general"


PIPELINES = {"pit31": pit31, "pit32": pit32, "general": pit_general}


def pit(c: Circuit, cfg: PipelineConfig = DEFAULT_CONFIG, shape: Optional[str] = None) -> Verdict:
    shape = shape or detect_shape(c)
    if shape not in PIPELINES:
        raise ValueError(f"unknown pipeline {shape!r}")
    return PIPELINES[shape](c, cfg).with_extra(pipeline=shape)


def _normalized_for(c: Circuit, v: Verdict) -> Circuit:
    order = v.info.get("term_order")
    if order is not None:
        c = c.replace_terms([c.terms[i - 1] for i in order])
    return normalize(c).circuit


def verify_verdict(c: Circuit, v: Verdict, budget: int = DEFAULT_CONFIG.budget) -> bool:
    """Re-check a verdict's certificate against the input circuit without re-running the pipeline."""
    cert = v.certificate
    p = cert.payload
    kind = cert.kind
    if kind in (EXPANSION_EMPTY, NONZERO_MONOMIAL):
        if "map" in p:
            base = _normalized_for(c, v)
            expected = base.substitute(p["map"]) if p["map"] is not None else base
        else:
            expected = c
        if p["circuit"] != expected:
            return False
        poly = expand(p["circuit"], budget)
        if kind == EXPANSION_EMPTY:
            return v.status is Status.ZERO and poly.is_zero()
        return v.status is Status.NONZERO and poly.coeff(p["monomial"]) == p["coefficient"] and bool(p["coefficient"])
    if v.status is not Status.NONZERO:
        return False
    if kind == FAILED_CONDITION:
        nc = p["circuit"]
        if nc != _normalized_for(c, v):
            return False
        if p["condition"] == "prime-ideal-membership":
            third = nc.terms[p["third_term"] - 1]
            return not any(linear_factor_member(l3, p["l1"], p["l2"]) for l3 in third.factors)
        if p["condition"] == "restriction-reducible":
            return quad_rank(restrict_to_hyperplane(p["q"], p["l"])) > 2
        return False
    if kind == SG_WITNESS:
        if p["circuit"] != normalize(c).circuit:
            return False
        return not recheck_witness(p["witness"]).member
    if kind == EARLY_NORMALIZATION:
        nc = p["circuit"]
        if nc != _normalized_for(c, v):
            return False
        g = p["g"]
        a, b = p["terms"]
        third = nc.terms[p["surviving_term"] - 1]
        share = all(any(associate_ratio(f, g) is not None for f in nc.terms[t - 1].factors) for t in (a, b))
        return share and not any(associate_ratio(f, g) is not None for f in third.factors)
    return False
