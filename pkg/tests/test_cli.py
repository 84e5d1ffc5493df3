import io
import subprocess
import sys

import pytest

from multinterp.cli import main

UNREAL = """
(declare-fun x () Bool) (declare-fun c () Bool) (declare-fun o () Bool)
(inputs x) (controls c) (outputs o)
(valid (or x (iff c o)))
"""


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def reports(text):
    return dict(l[len("#report: "):].split("=", 1) for l in text.splitlines()
                if l.startswith("#report: "))


@pytest.fixture
def illu2(tmp_path):
    code, text = run("gen", "illu", "2")
    assert code == 0
    path = tmp_path / "illu02.sexp"
    path.write_text(text)
    return path


def test_synth_illu2(illu2, tmp_path):
    code, text = run("synth", str(illu2), "--dot", str(tmp_path / "dot"))
    assert code == 0
    assert "VERIFIED" in text.splitlines()
    assert text.count("(witness ") == 2
    rep = reports(text)
    assert rep["verified"] == "True" and rep["controls"] == "2"
    assert {"proof_size", "pruned_size", "leaves_to_clean", "leaves_to_split"} <= rep.keys()
    assert {p.name for p in (tmp_path / "dot").iterdir()} == {"proof.dot", "local_first.dot", "mux.dot"}
    assert (tmp_path / "dot" / "mux.dot").read_text().startswith("digraph")


def test_synth_const_gives_constant_witnesses(tmp_path):
    path = tmp_path / "const.sexp"
    path.write_text(run("gen", "const", "2")[1])
    code, text = run("synth", str(path))
    assert code == 0
    ws = [l for l in text.splitlines() if l.startswith("(witness")]
    assert all(l.endswith(" true)") or l.endswith(" false)") for l in ws)


def test_synth_unrealizable_exits_2(tmp_path):
    path = tmp_path / "unreal.sexp"
    path.write_text(UNREAL)
    code, text = run("synth", str(path))
    assert code == 2
    assert "UNREALIZABLE" in text
    assert "(not x)" in text


def test_synth_errors_exit_1(illu2, tmp_path):
    assert run("synth", str(illu2), "--max-n", "1")[0] == 1
    assert run("synth", str(illu2), "--step-budget", "1")[0] == 1
    bad = tmp_path / "bad.sexp"
    bad.write_text("(valid")
    assert run("synth", str(bad))[0] == 1
    assert run("synth", str(tmp_path / "missing.sexp"))[0] == 1


def test_no_simplify_still_verifies(illu2):
    assert run("synth", str(illu2), "--no-simplify")[0] == 0


def test_check_accepts_solver_proof_and_rejects_tampering(illu2, tmp_path):
    proof = tmp_path / "p.proof"
    assert run("synth", str(illu2), "--proof", str(proof))[0] == 0
    code, text = run("check", str(proof), str(illu2))
    assert code == 0 and "proof accepted" in text

    lines = proof.read_text().splitlines()
    k = next(i for i, l in enumerate(lines) if " res " in l)
    node = lines[k].split()[0]
    lines[k] = _replace_pivot(lines[k], "(pos i1)")
    bad = tmp_path / "bad.proof"
    bad.write_text("\n".join(lines) + "\n")
    code, text = run("check", str(bad), str(illu2))
    assert code == 1
    assert f"node {node}:" in text

    cut = tmp_path / "cut.proof"
    cut.write_text(proof.read_text()[:-25])
    assert run("check", str(cut), str(illu2))[0] == 1


def _replace_pivot(line: str, pivot: str) -> str:
    """Swap the last field of a resolution line, which may be an S-expression."""
    if not line.endswith(")"):
        return line.rsplit(" ", 1)[0] + " " + pivot
    depth = 0
    for i in range(len(line) - 1, -1, -1):
        depth += (line[i] == ")") - (line[i] == "(")
        if depth == 0:
            return line[:i].rstrip() + " " + pivot
    raise ValueError(line)


def test_gen_families_and_cap():
    for fam in ("const", "illu", "chain"):
        code, text = run("gen", fam, "3", "--seed", "7")
        assert code == 0 and "(controls c1 c2 c3)" in text
    assert run("gen", "illu", "99")[0] == 1


def test_module_entry_point(illu2):
    r = subprocess.run([sys.executable, "-m", "multinterp", "synth", str(illu2)],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert "#report: verified=True" in r.stdout
