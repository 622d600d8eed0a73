"""Line-oriented text formats for circuits, point configurations and polynomial lists.

Circuit files::

    circuit vars=3 ext=-3 homogeneous
    term scale=-1
    lin: 1, 0, 0
    quad: 1, 0, 0, 0, 1, 0
    poly deg=3: (1, 3 0 0) (-2, 1 1 1)

Coefficients are ``p``, ``p/q``, ``a+bw`` or ``a-bw`` where ``w = sqrt(ext)``.
``#`` starts a comment.  Other headers: ``points``, ``polys``, ``member``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional

from gmpy2 import mpq

from .circuit import Circuit, Term
from .field import FieldElem, check_ext, format_coeff
from .poly import Poly


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"line {line}, col {col}: {message}" if line else message)


_RAT = r"[+-]?\d+(?:/\d+)?"
_COEFF_RE = re.compile(
    rf"^(?:(?P<a>{_RAT})(?:(?P<s>[+-])(?P<b>\d+(?:/\d+)?)w)?|(?P<bw>{_RAT})w)$"
)


def _rat(text: str) -> mpq:
    if "/" in text:
        p, q = text.split("/")
        if int(q) == 0:
            raise ZeroDivisionError("zero denominator")
        return mpq(int(p), int(q))
    return mpq(int(text))


def parse_coeff(text: str) -> FieldElem:
    t = text.strip().replace(" ", "")
    m = _COEFF_RE.match(t)
    if not m:
        raise ValueError(f"bad coefficient {text!r}")
    if m.group("bw") is not None:
        return FieldElem(0, _rat(m.group("bw")))
    a = _rat(m.group("a"))
    b = mpq(0)
    if m.group("b") is not None:
        b = _rat(m.group("b"))
        if m.group("s") == "-":
            b = -b
    return FieldElem(a, b)


@dataclass
class _Line:
    no: int
    text: str
    offset: int  # column (0-based) where text starts in the raw line


def _lines(text: str) -> Iterator[_Line]:
    for no, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if stripped:
            yield _Line(no, stripped, len(body) - len(body.lstrip()))


def _parse_header(line: _Line, keyword: str) -> dict:
    parts = line.text.split()
    if not parts or parts[0] != keyword:
        raise ParseError(f"expected header starting with {keyword!r}", line.no, line.offset + 1)
    out: dict = {"flags": set()}
    col = line.offset + len(parts[0]) + 2
    for p in parts[1:]:
        if "=" in p:
            key, val = p.split("=", 1)
            try:
                out[key] = int(val)
            except ValueError:
                raise ParseError(f"header value {p!r} is not an integer", line.no, col) from None
        else:
            out["flags"].add(p)
        col += len(p) + 1
    if "vars" not in out:
        raise ParseError("header lacks vars=<n>", line.no, line.offset + 1)
    if out["vars"] < 1:
        raise ParseError("vars must be positive", line.no, line.offset + 1)
    if "ext" in out:
        try:
            check_ext(out["ext"])
        except ValueError as exc:
            raise ParseError(str(exc), line.no, line.offset + 1) from None
    return out


def _split_coeffs(body: str, line: _Line, start: int) -> list[FieldElem]:
    out = []
    col = start
    for piece in body.split(","):
        try:
            out.append(parse_coeff(piece))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"{exc}", line.no, col + len(piece) - len(piece.lstrip()) + 1) from None
        col += len(piece) + 1
    return out


_POLY_TERM_RE = re.compile(r"\(\s*([^,()]+?)\s*,\s*([\d\s]*?)\s*\)")


def parse_factor(line: _Line, n: int) -> Poly:
    """One ``lin:``, ``quad:`` or ``poly deg=<t>:`` line."""
    text = line.text
    if ":" not in text:
        raise ParseError("expected a factor line (lin:, quad:, poly deg=<t>:)", line.no, line.offset + 1)
    head, body = text.split(":", 1)
    head = head.strip()
    body_col = line.offset + text.index(":") + 1
    if head == "lin":
        cs = _split_coeffs(body, line, body_col)
        if len(cs) != n:
            raise ParseError(f"lin has {len(cs)} coefficients, expected {n}", line.no, body_col + 1)
        p = Poly.linear(cs)
    elif head == "quad":
        cs = _split_coeffs(body, line, body_col)
        want = n * (n + 1) // 2
        if len(cs) != want:
            raise ParseError(f"quad has {len(cs)} coefficients, expected {want}", line.no, body_col + 1)
        p = Poly.quadratic_upper(n, cs)
    elif head.startswith("poly"):
        m = re.fullmatch(r"poly\s+deg=(\d+)", head)
        if not m:
            raise ParseError("expected 'poly deg=<t>:'", line.no, line.offset + 1)
        deg = int(m.group(1))
        terms: dict = {}
        pos = 0
        stripped = body.strip()
        lead = len(body) - len(body.lstrip())
        while pos < len(stripped):
            mt = _POLY_TERM_RE.match(stripped, pos)
            if not mt:
                raise ParseError("malformed poly term", line.no, body_col + lead + pos + 1)
            col = body_col + lead + pos + 1
            try:
                c = parse_coeff(mt.group(1))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(str(exc), line.no, col + 1) from None
            exps = tuple(int(x) for x in mt.group(2).split())
            if len(exps) != n:
                raise ParseError(f"exponent vector has {len(exps)} entries, expected {n}", line.no, col)
            terms[exps] = terms.get(exps, FieldElem(0)) + c
            pos = mt.end()
            while pos < len(stripped) and stripped[pos] == " ":
                pos += 1
        p = Poly(n, terms)
        if not p.is_zero() and p.degree() != deg:
            raise ParseError(f"poly declared deg={deg} but has degree {p.degree()}", line.no, line.offset + 1)
    else:
        raise ParseError(f"unknown factor kind {head!r}", line.no, line.offset + 1)
    return p


def parse_circuit(text: str) -> Circuit:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty input", 1, 1)
    hdr = _parse_header(lines[0], "circuit")
    n = hdr["vars"]
    r = hdr.get("r")
    terms: list[tuple[_Line, FieldElem, list[Poly]]] = []
    for line in lines[1:]:
        if line.text == "term" or line.text.startswith("term "):
            scale = FieldElem(1)
            for p in line.text.split()[1:]:
                if not p.startswith("scale="):
                    raise ParseError(f"unexpected term attribute {p!r}", line.no, line.offset + line.text.index(p) + 1)
                try:
                    scale = parse_coeff(p[len("scale="):])
                except (ValueError, ZeroDivisionError) as exc:
                    raise ParseError(str(exc), line.no, line.offset + line.text.index(p) + 7) from None
            if not scale:
                raise ParseError("term scale is zero", line.no, line.offset + 1)
            terms.append((line, scale, []))
            continue
        if not terms:
            raise ParseError("factor line before any 'term'", line.no, line.offset + 1)
        f = parse_factor(line, n)
        if f.is_zero():
            raise ParseError("zero factor", line.no, line.offset + 1)
        if f.degree() < 1:
            raise ParseError("constant factor (fold it into scale=)", line.no, line.offset + 1)
        if r is not None and f.degree() > r:
            raise ParseError(f"factor degree {f.degree()} exceeds r={r}", line.no, line.offset + 1)
        terms[-1][2].append(f)
    if not terms:
        raise ParseError("circuit has no terms", lines[0].no, 1)
    for line, _, fs in terms:
        if not fs:
            raise ParseError("term has no factors", line.no, line.offset + 1)
    return Circuit(
        n,
        tuple(Term(s, fs) for _, s, fs in terms),
        homogeneous="homogeneous" in hdr["flags"],
        ext=hdr.get("ext"),
        r_bound=r,
    )


def _header(keyword: str, n: int, ext: Optional[int], extra: str = "") -> str:
    out = f"{keyword} vars={n}"
    if ext is not None:
        out += f" ext={ext}"
    return out + extra


def serialize_factor(f: Poly) -> str:
    n = f.n
    deg = f.degree()
    if f.is_homogeneous() and deg == 1:
        return "lin: " + ", ".join(format_coeff(c) for c in f.linear_coeffs())
    if f.is_homogeneous() and deg == 2:
        cs = []
        for i in range(n):
            for j in range(i, n):
                e = [0] * n
                e[i] += 1
                e[j] += 1
                cs.append(format_coeff(f.coeff(tuple(e))))
        return "quad: " + ", ".join(cs)
    body = " ".join(f"({format_coeff(c)}, {' '.join(map(str, e))})" for e, c in f.sorted_terms())
    return f"poly deg={deg}: {body}"


def serialize_circuit(c: Circuit) -> str:
    extra = ""
    if c.r_bound is not None:
        extra += f" r={c.r_bound}"
    if c.homogeneous:
        extra += " homogeneous"
    out = [_header("circuit", c.n, c.ext, extra)]
    for t in c.terms:
        out.append("term" if t.scale == 1 else f"term scale={format_coeff(t.scale)}")
        out.extend(serialize_factor(f) for f in t.factors)
    return "\n".join(out) + "\n"


@dataclass(frozen=True)
class PolyList:
    n: int
    polys: tuple[Poly, ...]
    ext: Optional[int] = None


def parse_polys(text: str) -> PolyList:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty input", 1, 1)
    hdr = _parse_header(lines[0], "polys")
    n = hdr["vars"]
    polys = tuple(parse_factor(line, n) for line in lines[1:])
    if not polys:
        raise ParseError("no polynomials given", lines[0].no, 1)
    return PolyList(n, polys, hdr.get("ext"))


def serialize_polys(pl: PolyList) -> str:
    return "\n".join([_header("polys", pl.n, pl.ext)] + [serialize_factor(p) for p in pl.polys]) + "\n"


@dataclass(frozen=True)
class MemberProblem:
    """``prod(target_factors)`` tested against the ideal of ``gens``."""

    n: int
    target_factors: tuple[Poly, ...]
    gens: tuple[Poly, ...]
    ext: Optional[int] = None


def parse_member(text: str) -> MemberProblem:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty input", 1, 1)
    hdr = _parse_header(lines[0], "member")
    n = hdr["vars"]
    section = None
    target: list[Poly] = []
    gens: list[Poly] = []
    for line in lines[1:]:
        if line.text in ("target", "gens"):
            section = line.text
            continue
        if section is None:
            raise ParseError("expected 'target' or 'gens' section", line.no, line.offset + 1)
        (target if section == "target" else gens).append(parse_factor(line, n))
    if not target:
        raise ParseError("member problem has no target", lines[0].no, 1)
    return MemberProblem(n, tuple(target), tuple(gens), hdr.get("ext"))


def parse_points(text: str):
    """Points file: ``points vars=<n>`` then ``set <name>`` blocks of ``(c1, ..., cn)`` lines."""
    from .incidence import Configuration, ProjPoint

    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty input", 1, 1)
    hdr = _parse_header(lines[0], "points")
    n = hdr["vars"]
    sets: dict[str, list] = {}
    current = None
    for line in lines[1:]:
        if line.text.startswith("set"):
            parts = line.text.split()
            if len(parts) != 2:
                raise ParseError("expected 'set <name>'", line.no, line.offset + 1)
            current = parts[1]
            if current in sets:
                raise ParseError(f"duplicate set name {current!r}", line.no, line.offset + 5)
            sets[current] = []
            continue
        if current is None:
            raise ParseError("point before any 'set <name>' header", line.no, line.offset + 1)
        t = line.text
        if not (t.startswith("(") and t.endswith(")")):
            raise ParseError("expected '(c1, ..., cn)'", line.no, line.offset + 1)
        cs = _split_coeffs(t[1:-1], line, line.offset + 1)
        if len(cs) != n:
            raise ParseError(f"point has {len(cs)} coordinates, expected {n}", line.no, line.offset + 1)
        if not any(cs):
            raise ParseError("point has all-zero coordinates", line.no, line.offset + 1)
        sets[current].append(ProjPoint(cs))
    try:
        cfg = Configuration.build(n, sets)
    except ValueError as exc:
        raise ParseError(str(exc), lines[0].no, 1) from None
    return cfg, hdr.get("ext")


def serialize_points(cfg, ext: Optional[int] = None) -> str:
    out = [_header("points", cfg.n, ext)]
    for name, pts in cfg.sets:
        out.append(f"set {name}")
        out.extend("(" + ", ".join(format_coeff(c) for c in p.coords) + ")" for p in pts)
    return "\n".join(out) + "\n"


def header_kind(text: str) -> str:
    for line in _lines(text):
        return line.text.split()[0]
    raise ParseError("empty input", 1, 1)
