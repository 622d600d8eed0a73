"""Command-line front end.

Exit codes: 0 = ZERO (or success), 1 = NONZERO, 2 = usage or parse error,
3 = resource limit / INDETERMINATE.
"""

from __future__ import annotations

import argparse
import hashlib
import re
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .circuit import Circuit, Term, normalize, validate
from .field import check_ext, extension
from .generators import (
    CorpusSpec,
    GenParams,
    TEMPLATES,
    build_corpus,
    gen_perturbed_circuit,
    gen_random_circuit,
    zero_instance,
)
from .ideal import product_member
from .incidence import (
    circuit_to_configuration,
    find_line_two_sets,
    find_ordinary_line,
    projective_dim,
    span_dim,
)
from .pit import (
    BudgetExceeded,
    OracleMismatch,
    PipelineConfig,
    ShapeError,
    oracle_expand,
    pit,
    pit31,
    pit32,
    pit_general,
)
from .poly import Poly, var_name
from .quadratic import is_irreducible_quadratic, quad_rank
from .sg import sg_check, trdeg
from .textio import (
    ParseError,
    header_kind,
    parse_circuit,
    parse_member,
    parse_points,
    parse_polys,
    serialize_circuit,
)
from .verdict import (
    EARLY_NORMALIZATION,
    EXPANSION_EMPTY,
    FAILED_CONDITION,
    NONZERO_MONOMIAL,
    RESOURCE,
    SG_WITNESS,
    Status,
    Verdict,
)

EXIT_ZERO, EXIT_NONZERO, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    """Line-oriented ``key=value`` report; identical inputs give identical lines apart from timing."""

    command: str
    digest: str = ""
    lines: list[str] = field(default_factory=list)
    timing_ms: Optional[float] = None

    def add(self, key: str, value) -> None:
        self.lines.append(f"{key}={value}")

    def render(self, timing: bool = True) -> str:
        out = [f"command={self.command}"]
        if self.digest:
            out.append(f"input=sha256:{self.digest}")
        out.extend(self.lines)
        if timing and self.timing_ms is not None:
            out.append(f"timing_ms={self.timing_ms:.1f}")
        return "\n".join(out) + "\n"


def digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


_EXT_RE = re.compile(r"\bext=(-?\d+)")


def resolve_ext(text: str, flag: Optional[int]) -> int:
    """The extension for a file: ``--ext`` and the header must agree when both are given."""
    m = None
    for line in text.splitlines():
        s = line.split("#", 1)[0].strip()
        if s:
            m = _EXT_RE.search(s)
            break
    header = int(m.group(1)) if m else None
    if flag is not None and header is not None and flag != header:
        raise UsageError(f"--ext {flag} conflicts with ext={header} in the file header")
    d = flag if flag is not None else header
    return check_ext(d) if d is not None else -3


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from None


# -- formatting -------------------------------------------------------------------


def fmt_monomial(e: Sequence[int]) -> str:
    n = len(e)
    parts = []
    for i, k in enumerate(e):
        if k:
            parts.append(var_name(i, n) + (f"^{k}" if k > 1 else ""))
    return "*".join(parts) if parts else "1"


def verdict_lines(rep: RunReport, v: Verdict) -> None:
    rep.add("verdict", v.status.value)
    cert = v.certificate
    p = cert.payload
    rep.add("certificate", cert.kind)
    if cert.kind in (EXPANSION_EMPTY, NONZERO_MONOMIAL):
        c = p.get("circuit")
        if c is not None:
            rep.add("expanded_vars", c.n)
        A = p.get("map")
        rep.add("map", "none" if A is None else f"{A.nrows}x{A.ncols}")
        if cert.kind == NONZERO_MONOMIAL:
            rep.add("monomial", fmt_monomial(p["monomial"]))
            rep.add("exponents", " ".join(map(str, p["monomial"])))
            rep.add("coefficient", p["coefficient"])
    elif cert.kind == FAILED_CONDITION:
        rep.add("condition", p["condition"])
        if p["condition"] == "prime-ideal-membership":
            rep.add("instance", f"terms={p['terms'][0]},{p['terms'][1]} factors={p['factors'][0]},{p['factors'][1]}")
            rep.add("l1", p["l1"])
            rep.add("l2", p["l2"])
            rep.add("missing_from_term", p["third_term"])
        else:
            rep.add("l", p["l"])
            rep.add("q", p["q"])
            rep.add("restricted_rank", p["restricted_rank"])
    elif cert.kind == SG_WITNESS:
        rep.add("witness", p["witness"].display())
    elif cert.kind == EARLY_NORMALIZATION:
        rep.add("g", p["g"])
        rep.add("sharing_terms", f"{p['terms'][0]},{p['terms'][1]}")
        rep.add("surviving_term", p["surviving_term"])
    elif cert.kind == RESOURCE:
        rep.add("reason", p.get("reason", ""))
    for key in sorted(v.info):
        val = v.info[key]
        if isinstance(val, tuple):
            val = ",".join(map(str, val))
        rep.add(f"info.{key}", val)
    for d in v.diagnostics:
        rep.add("paper_claim_violated", d.name)
        rep.add("detail", d.detail)


def verdict_exit(v: Verdict) -> int:
    return {Status.ZERO: EXIT_ZERO, Status.NONZERO: EXIT_NONZERO, Status.INDETERMINATE: EXIT_RESOURCE}[v.status]


# -- commands ----------------------------------------------------------------------------


def _config(args) -> PipelineConfig:
    try:
        return PipelineConfig(f_max=args.fmax, budget=args.budget, strict_oracle=args.strict_oracle)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _circuit(text: str) -> Circuit:
    if header_kind(text) != "circuit":
        raise UsageError("expected a 'circuit' file")
    return parse_circuit(text)


_RUNNERS: dict[str, Callable] = {"pit31": pit31, "pit32": pit32, "general": pit_general}


def cmd_pit(args, text: str, rep: RunReport) -> int:
    c = _circuit(text)
    cfg = _config(args)
    shape = None if args.command == "pit" else args.command
    if args.command == "pit" and args.shape != "auto":
        shape = args.shape
    try:
        v = pit(c, cfg, shape)
    except OracleMismatch as exc:
        rep.add("oracle_mismatch", str(exc))
        return EXIT_RESOURCE
    verdict_lines(rep, v)
    return verdict_exit(v)


def cmd_oracle(args, text: str, rep: RunReport) -> int:
    c = _circuit(text)
    v = oracle_expand(c, args.budget)
    verdict_lines(rep, v)
    return verdict_exit(v)


def cmd_sgcheck(args, text: str, rep: RunReport) -> int:
    c = _circuit(text)
    nc = normalize(c).circuit if args.normalize else c
    report = sg_check(nc, mode=args.mode, f_max=args.fmax)
    if report.is_sg:
        rep.add("sg", "true")
    else:
        rep.lines.append(f"sg=false witness={report.witness.display()}")
    rep.add("checks", report.checks)
    return EXIT_ZERO


def _poly_source(text: str) -> list[Poly]:
    kind = header_kind(text)
    if kind == "polys":
        return list(parse_polys(text).polys)
    if kind == "circuit":
        return list(dict.fromkeys(parse_circuit(text).factors()))
    raise UsageError("expected a 'polys' or 'circuit' file")


def cmd_trdeg(args, text: str, rep: RunReport) -> int:
    polys = _poly_source(text)
    r = trdeg(polys)
    rep.add("trdeg", r.value)
    rep.add("basis", ",".join(str(i + 1) for i in r.basis))
    rep.add("jacobian_rank", r.jacobian_rank)
    return EXIT_ZERO


def cmd_member(args, text: str, rep: RunReport) -> int:
    prob = parse_member(text)
    if args.fmax is not None and args.fmax < 1:
        raise UsageError("--fmax must be positive")
    res = product_member(prob.target_factors, prob.gens, mode=args.mode, f_max=args.fmax)
    rep.add("member", "true" if res.member else "false")
    if res.member:
        rep.add("subset", ",".join(str(i + 1) for i in res.witness))
        for i, m in enumerate(res.certificate.multipliers, start=1):
            rep.add(f"multiplier.{i}", m)
    return EXIT_ZERO


def cmd_quadrank(args, text: str, rep: RunReport) -> int:
    for i, q in enumerate(_poly_source(text), start=1):
        if q.degree() != 2 or not q.is_homogeneous():
            raise UsageError(f"polynomial {i} is not a homogeneous quadratic")
        rep.add(f"rank.{i}", quad_rank(q))
        rep.add(f"irreducible.{i}", "true" if is_irreducible_quadratic(q) else "false")
    return EXIT_ZERO


def cmd_incidence(args, text: str, rep: RunReport) -> int:
    kind = header_kind(text)
    if kind == "points":
        cfg, _ = parse_points(text)
    elif kind == "circuit":
        cfg = circuit_to_configuration(parse_circuit(text))
    else:
        raise UsageError("expected a 'points' or 'circuit' file")
    if args.action == "span":
        rep.add("span_dim", span_dim(cfg))
        rep.add("projective_dim", projective_dim(cfg))
    elif args.action == "find-two-sets":
        if len(cfg.sets) < 2:
            raise UsageError("find-two-sets needs at least two sets")
        line = find_line_two_sets(cfg)
        if line is None:
            rep.add("found", "none")
        else:
            rep.add("found", f"{line.p} {line.q}")
            rep.add("sets", ",".join(line.sets))
            rep.add("points_on_line", len(line.points))
    else:
        pts = cfg.points()
        if len(pts) < 3:
            raise UsageError("find-ordinary needs at least three distinct points")
        pair = find_ordinary_line(pts)
        rep.add("found", "none" if pair is None else f"{pair[0]} {pair[1]}")
    return EXIT_ZERO


def _gen_params(args) -> GenParams:
    return GenParams(n=args.n, k=args.k, template=args.template)


def cmd_gen(args, text: str, rep: RunReport) -> int:
    params = _gen_params(args)
    if args.kind == "zero":
        if args.template is not None and args.template not in TEMPLATES:
            raise UsageError(f"unknown template {args.template!r}; choose from {', '.join(sorted(TEMPLATES))}")
        inst = zero_instance(args.seed, params)
        c = inst.circuit
        header = f"# zero template {inst.template}, seed {args.seed}\n"
    elif args.kind == "perturbed":
        c = gen_perturbed_circuit(args.seed, params)
        header = f"# perturbed zero template, seed {args.seed}\n"
    else:
        c = gen_random_circuit(args.seed, params)
        header = f"# random circuit, seed {args.seed}\n"
    body = header + serialize_circuit(c)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(body)
        rep.add("written", args.output)
    else:
        sys.stdout.write(body)
        rep.lines = None  # the circuit itself is the output
    return EXIT_ZERO


@dataclass(frozen=True)
class CorpusRow:
    index: int
    kind: str
    seed: int
    pipeline: str
    status: str
    oracle: str
    certificate: str

    @property
    def agrees(self) -> bool:
        return self.status == self.oracle

    def line(self) -> str:
        mark = "ok" if self.agrees else ("skip" if self.status == "INDETERMINATE" else "MISMATCH")
        return (f"{self.index:4d} {self.kind:9s} seed={self.seed} pipeline={self.pipeline} "
                f"verdict={self.status} oracle={self.oracle} certificate={self.certificate} {mark}")


def run_corpus(spec: CorpusSpec, cfg: PipelineConfig) -> list[CorpusRow]:
    rows = []
    for e in build_corpus(spec):
        v = pit(e.circuit, cfg)
        try:
            o = oracle_expand(e.circuit, cfg.budget).status.value
        except BudgetExceeded:
            o = "INDETERMINATE"
        rows.append(CorpusRow(e.index, e.kind, e.seed, v.info.get("pipeline", "?"), v.status.value, o,
                              v.certificate.kind))
    return rows


def cmd_corpus(args, text: str, rep: RunReport) -> int:
    spec = CorpusSpec(seed=args.seed, random_count=args.random, zero_count=args.zero, perturbed_count=args.perturbed)
    cfg = _config(args)
    try:
        rows = run_corpus(spec, cfg)
    except OracleMismatch as exc:
        rep.add("oracle_mismatch", str(exc))
        return EXIT_NONZERO
    for row in rows:
        rep.lines.append(row.line())
    mismatches = sum(1 for r in rows if not r.agrees and r.status != "INDETERMINATE")
    unresolved = sum(1 for r in rows if r.status == "INDETERMINATE")
    rep.add("summary.circuits", len(rows))
    for kind in ("zero", "perturbed", "random"):
        sub = [r for r in rows if r.kind == kind]
        rep.add(f"summary.{kind}", f"{len(sub)} zero={sum(r.oracle == 'ZERO' for r in sub)}")
    for pipe in ("pit31", "pit32", "general"):
        rep.add(f"summary.pipeline.{pipe}", sum(r.pipeline == pipe for r in rows))
    rep.add("summary.indeterminate", unresolved)
    rep.add("summary.mismatches", mismatches)
    if mismatches:
        return EXIT_NONZERO
    return EXIT_RESOURCE if unresolved else EXIT_ZERO


def homogenize(c: Circuit) -> Circuit:
    """``x0^D * C(x / x0)`` with the new variable appended last; zero iff ``c`` is zero."""
    n = c.n + 1
    D = c.degree()

    def lift(f: Poly) -> Poly:
        t = f.degree()
        return Poly(n, {e + (t - sum(e),): v for e, v in f.terms.items()})

    x0 = Poly.var(n, c.n)
    terms = []
    for t in c.terms:
        facs = [lift(f) for f in t.factors] + [x0] * (D - t.degree())
        terms.append(Term(t.scale, facs))
    return Circuit(n, tuple(terms), homogeneous=True, ext=c.ext, r_bound=c.r_bound)


def cmd_homogenize(args, text: str, rep: RunReport) -> int:
    c = _circuit(text)
    sys.stdout.write(serialize_circuit(homogenize(c)))
    rep.lines = None
    return EXIT_ZERO


def cmd_validate(args, text: str, rep: RunReport) -> int:
    c = _circuit(text)
    diags = validate(c)
    for d in diags:
        rep.add("diagnostic", str(d))
    errs = [d for d in diags if d.severity == "error"]
    rep.add("errors", len(errs))
    return EXIT_USAGE if errs else EXIT_ZERO


# -- argument parsing -----------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, pipeline: bool = False) -> None:
    p.add_argument("--ext", type=int, default=None, help="square-free d for the field Q(sqrt d)")
    p.add_argument("--budget", type=int, default=200_000, help="monomial budget for expansions")
    p.add_argument("--no-timing", action="store_true", help="omit the timing_ms line")
    if pipeline:
        p.add_argument("--fmax", type=int, default=None, help="largest factor subset tried in SG membership")
        p.add_argument("--strict-oracle", action="store_true", help="cross-check every verdict by expansion")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="depth4pit", description="Exact identity testing for depth-4 circuits.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pit", help="auto-dispatching identity test")
    p.add_argument("file")
    p.add_argument("--shape", choices=["auto", "pit31", "pit32", "general"], default="auto")
    _common(p, pipeline=True)
    for name, helptext in (("pit31", "three terms of linear factors"),
                           ("pit32", "three terms, quadratics confined to one term")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("file")
        _common(p, pipeline=True)

    p = sub.add_parser("oracle", help="brute-force expansion")
    p.add_argument("file")
    _common(p)

    p = sub.add_parser("sgcheck", help="SG-circuit check")
    p.add_argument("file")
    p.add_argument("--mode", choices=["subset", "direct"], default="subset")
    p.add_argument("--normalize", action="store_true", help="strip the common factors first")
    _common(p, pipeline=True)

    p = sub.add_parser("trdeg", help="transcendence degree of a polynomial list or of a circuit's factors")
    p.add_argument("file")
    _common(p)

    p = sub.add_parser("member", help="product membership in a homogeneous ideal")
    p.add_argument("file")
    p.add_argument("--mode", choices=["direct", "subset"], default="direct")
    _common(p, pipeline=True)

    p = sub.add_parser("quadrank", help="Gram rank of quadratics")
    p.add_argument("file")
    _common(p)

    p = sub.add_parser("incidence", help="point-configuration queries")
    p.add_argument("action", choices=["span", "find-two-sets", "find-ordinary"])
    p.add_argument("file")
    _common(p)

    p = sub.add_parser("validate", help="list model-constraint violations")
    p.add_argument("file")
    _common(p)

    p = sub.add_parser("gen", help="write a seeded circuit")
    p.add_argument("--kind", choices=["zero", "random", "perturbed"], default="zero")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--template", default=None)
    p.add_argument("-o", "--output", default=None)
    _common(p)

    p = sub.add_parser("corpus", help="seeded batch with oracle cross-check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random", type=int, default=250)
    p.add_argument("--zero", type=int, default=150)
    p.add_argument("--perturbed", type=int, default=100)
    _common(p, pipeline=True)

    p = sub.add_parser("homogenize", help="lift a circuit with one extra variable")
    p.add_argument("file")
    _common(p)
    return ap


COMMANDS: dict[str, Callable] = {
    "pit": cmd_pit, "pit31": cmd_pit, "pit32": cmd_pit, "oracle": cmd_oracle, "sgcheck": cmd_sgcheck,
    "trdeg": cmd_trdeg, "member": cmd_member, "quadrank": cmd_quadrank, "incidence": cmd_incidence,
    "validate": cmd_validate, "gen": cmd_gen, "corpus": cmd_corpus, "homogenize": cmd_homogenize,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_ZERO
    text = ""
    rep = RunReport(args.command)
    start = time.perf_counter()
    try:
        if hasattr(args, "file"):
            text = _read(args.file)
            rep.digest = digest(text)
            d = resolve_ext(text, args.ext)
        else:
            d = check_ext(args.ext) if args.ext is not None else -3
        with extension(d):
            code = COMMANDS[args.command](args, text, rep)
    except (ParseError, UsageError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"resource: {exc}", file=sys.stderr)
        rep.add("verdict", Status.INDETERMINATE.value)
        rep.add("reason", str(exc))
        sys.stdout.write(rep.render(timing=False))
        return EXIT_RESOURCE
    rep.timing_ms = (time.perf_counter() - start) * 1000
    if rep.lines is not None:
        sys.stdout.write(rep.render(timing=not args.no_timing))
    return code


if __name__ == "__main__":
    sys.exit(main())
