"""Exact deterministic identity testing for depth-4 (sum-product-sum-product) circuits."""

from .circuit import Circuit, Term, associates, normalize, validate
from .field import FieldElem, extension, get_ext, set_ext
from .ideal import linear_factor_member, member_homogeneous, product_member
from .incidence import (
    Configuration,
    ProjPoint,
    circuit_to_configuration,
    find_line_two_sets,
    find_ordinary_line,
    hesse_configuration,
    line_points,
    span_dim,
)
from .linalg import Matrix, rank, solve_linear, symbolic_rank
from .pit import PipelineConfig, essential_space, oracle_expand, pit, pit31, pit32, pit_general, verify_verdict
from .poly import Poly, poly_add, poly_mul, substitute_linear
from .quadratic import gram, is_irreducible_quadratic, quad_rank, restrict_to_hyperplane
from .sg import dependence_oracle, faithful_reduce, sg_check, trdeg
from .textio import ParseError, parse_circuit, serialize_circuit
from .verdict import Status, Verdict

__version__ = "0.1.0"

__all__ = [
    "Circuit", "Term", "associates", "normalize", "validate",
    "FieldElem", "extension", "get_ext", "set_ext",
    "linear_factor_member", "member_homogeneous", "product_member",
    "Configuration", "ProjPoint", "circuit_to_configuration", "find_line_two_sets",
    "find_ordinary_line", "hesse_configuration", "line_points", "span_dim",
    "Matrix", "rank", "solve_linear", "symbolic_rank",
    "PipelineConfig", "essential_space", "oracle_expand", "pit", "pit31", "pit32", "pit_general",
    "verify_verdict",
    "Poly", "poly_add", "poly_mul", "substitute_linear",
    "gram", "is_irreducible_quadratic", "quad_rank", "restrict_to_hyperplane",
    "dependence_oracle", "faithful_reduce", "sg_check", "trdeg",
    "ParseError", "parse_circuit", "serialize_circuit",
    "Status", "Verdict",
]
