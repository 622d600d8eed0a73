import subprocess
import sys

import pytest

from depth4pit.cli import homogenize, main, resolve_ext, UsageError
from depth4pit.pit import oracle_expand
from depth4pit.textio import parse_circuit

from conftest import fixture_path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_timing(text):
    return "\n".join(l for l in text.splitlines() if not l.startswith("timing_ms="))


def test_pit_counterexample(capsys):
    code, out, _ = run(capsys, "pit", fixture_path("counterexample.circ"))
    assert code == 1
    assert "verdict=NONZERO" in out.splitlines()
    assert "monomial=x" in out and "coefficient=2" in out
    assert out.splitlines()[-1].startswith("timing_ms=")


def test_pit_zero(capsys):
    code, out, _ = run(capsys, "pit", fixture_path("difference_of_squares.circ"))
    assert code == 0 and "verdict=ZERO" in out


def test_pit_malformed(capsys):
    code, out, err = run(capsys, "pit", fixture_path("bad.circ"))
    assert code == 2 and out == "" and "line 3" in err


def test_missing_file(capsys):
    assert run(capsys, "pit", "/nonexistent.circ")[0] == 2


def test_bad_flag(capsys):
    assert run(capsys, "pit", fixture_path("gap.circ"), "--fmax", "0")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_pit32_gap_diagnostics(capsys):
    code, out, _ = run(capsys, "pit32", fixture_path("gap.circ"))
    assert code == 0
    assert "paper_claim_violated=quadratic_rank_eq_3" in out
    assert "paper_claim_violated=linear_span_le_3" in out


def test_pit31_wrong_shape(capsys):
    assert run(capsys, "pit31", fixture_path("gap.circ"))[0] == 2


def test_budget_exit_code(capsys):
    code, out, _ = run(capsys, "oracle", fixture_path("gap.circ"), "--budget", "1")
    assert code == 3 and "verdict=INDETERMINATE" in out


def test_forced_general_shape(capsys):
    code, out, _ = run(capsys, "pit", fixture_path("squares.circ"), "--shape", "general")
    assert code == 1 and "certificate=sg-witness" in out and "witness=(3; 1,1)" in out


def test_strict_oracle_flag(capsys):
    code, _, _ = run(capsys, "pit", fixture_path("quadratic_zero.circ"), "--strict-oracle")
    assert code == 0


def test_tools(capsys):
    assert "sg=false witness=(3; 1,1)" in run(capsys, "sgcheck", fixture_path("squares.circ"))[1]
    assert "trdeg=2" in run(capsys, "trdeg", fixture_path("monomials.polys"))[1].splitlines()
    assert "found=none" in run(capsys, "incidence", "find-ordinary", fixture_path("hesse.pts"))[1].splitlines()
    assert "found=none" in run(capsys, "incidence", "find-two-sets", fixture_path("counterexample.pts"))[1]
    out = run(capsys, "incidence", "span", fixture_path("hesse.pts"))[1]
    assert "span_dim=3" in out and "projective_dim=2" in out
    out = run(capsys, "quadrank", fixture_path("quadratics.polys"))[1]
    assert "rank.1=3" in out and "irreducible.2=false" in out and "rank.3=4" in out
    out = run(capsys, "member", fixture_path("member.txt"))[1]
    assert "member=true" in out and "multiplier.2=2" in out
    assert "member=false" in run(capsys, "member", fixture_path("not_member.txt"), "--mode", "subset")[1]


def test_ext_conflict(capsys):
    assert run(capsys, "incidence", "span", fixture_path("hesse.pts"), "--ext", "-1")[0] == 2
    assert resolve_ext("points vars=3 ext=-3\n", None) == -3
    assert resolve_ext("circuit vars=2\n", 5) == 5
    with pytest.raises(UsageError):
        resolve_ext("circuit vars=2 ext=2\n", 3)


def test_gen_and_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--kind", "zero", "--seed", "9")
    assert code == 0
    assert oracle_expand(parse_circuit(out)).is_zero
    target = tmp_path / "c.circ"
    run(capsys, "gen", "--kind", "random", "--seed", "4", "-o", str(target))
    assert target.exists()
    code, _, _ = run(capsys, "pit", str(target))
    assert code in (0, 1)
    assert run(capsys, "gen", "--template", "nope")[0] == 2


def test_homogenize(capsys, tmp_path):
    src = tmp_path / "inhom.circ"
    # (x + 1) * x - x * x - x  == 0
    src.write_text("circuit vars=1\nterm\npoly deg=1: (1, 1) (1, 0)\nlin: 1\nterm scale=-1\nlin: 1\nlin: 1\n"
                   "term scale=-1\nlin: 1\n")
    code, _, err = run(capsys, "pit", str(src))
    assert code == 2 and "homogen" in err
    code, out, _ = run(capsys, "homogenize", str(src))
    assert code == 0
    h = parse_circuit(out)
    assert h.n == 2 and h.is_homogeneous()
    dst = tmp_path / "hom.circ"
    dst.write_text(out)
    assert run(capsys, "pit", str(dst))[0] == 0


def test_homogenize_keeps_nonzero():
    c = parse_circuit("circuit vars=1\nterm\npoly deg=1: (1, 1) (1, 0)\nterm\nlin: 1\nlin: 1\n")
    assert not oracle_expand(homogenize(c)).is_zero


def test_validate_command(capsys):
    code, out, _ = run(capsys, "validate", fixture_path("gap.circ"))
    assert code == 0 and "errors=0" in out


def test_reports_are_deterministic(capsys):
    for args in (("pit", fixture_path("gap.circ")), ("sgcheck", fixture_path("squares.circ")),
                 ("corpus", "--random", "5", "--zero", "5", "--perturbed", "5")):
        first = strip_timing(run(capsys, *args)[1])
        second = strip_timing(run(capsys, *args)[1])
        assert first == second


def test_corpus_summary(capsys):
    code, out, _ = run(capsys, "corpus", "--random", "10", "--zero", "10", "--perturbed", "5", "--seed", "1")
    assert code == 0
    assert "summary.mismatches=0" in out and "summary.circuits=25" in out


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "depth4pit", "pit", fixture_path("counterexample.circ"),
                           "--no-timing"], capture_output=True, text=True)
    assert proc.returncode == 1
    assert "timing_ms" not in proc.stdout and "verdict=NONZERO" in proc.stdout
