import io as stdio
import subprocess
import sys

import pytest

from ordertypes.cli import run


def cli(*argv):
    buf = stdio.StringIO()
    code = run([str(a) for a in argv], stdout=buf)
    return code, buf.getvalue()


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return p

    return {
        "quad": write("quad.pts", "0 0\n2 1\n3 4\n4 0\n"),
        "cup": write("cup.pts", "0 0\n1 1\n2 4\n3 9\n"),
        "cup2": write("cup2.pts", "0 0\n1 2\n2 5\n3 9\n"),
        "tri": write("tri.pts", "0 0\n1 1\n2 0\n"),
        "up": write("up.pts", "0 0\n1 1\n"),
        "dot": write("dot.pts", "0 0\n"),
        "bad": write("bad.pts", "0 0\n1 1\n2 2\n"),
        "pent": write("pent.pts", "0 0\n1 -2\n3 -3\n5 -2\n6 0\n"),
        "psi_bad": write("psi_bad.pts", "0 0\n1 0\n2 1\n3 1\n4 4\n"),
        "dir": tmp_path,
    }


def test_ordertype(files):
    code, out = cli("ordertype", files["tri"])
    assert code == 0
    assert out.splitlines() == ["n=3", "1 2 3 -"]


def test_invalid_input_exit_code(files):
    assert cli("ordertype", files["bad"])[0] == 2
    assert cli("ordertype", files["dir"] / "missing.pts")[0] == 2
    assert cli("no-such-command")[0] == 2


def test_signature_eq(files):
    assert cli("signature-eq", files["cup"], files["cup2"]) == (0, "mode=signature equal=true\n")
    code, out = cli("signature-eq", files["cup"], files["quad"], "--mode", "ordertype")
    assert code == 1 and "equal=false" in out


def test_decompose(files):
    code, out = cli("decompose", files["cup"])
    assert code == 0 and out.splitlines()[0] == "decomposable=true"
    assert out.splitlines()[1].startswith("tree=")
    assert cli("decompose", files["quad"]) == (1, "decomposable=false\n")


def test_psi_commands(files):
    code, table = cli("psi", "encode", files["quad"])
    assert code == 0
    tpath = files["dir"] / "quad.tbl"
    tpath.write_text(table)
    code, out = cli("psi", "decode", tpath)
    assert code == 0 and out.splitlines()[0].startswith("n=4 iota=")
    assert out.splitlines()[1:] == cli("ordertype", files["quad"])[1].splitlines()[1:]
    assert cli("psi", "roundtrip", files["pent"]) == (0, "n=5 roundtrip=true\n")
    assert cli("check-consistency", files["quad"], tpath)[0] in (0, 1)


def test_check_consistency_reports_violation(files):
    tpath = files["dir"] / "psi_bad.tbl"
    code = run(["psi", "encode", str(files["psi_bad"]), "--out", str(tpath)], stdout=stdio.StringIO())
    assert code == 0 and tpath.exists()
    code, out = cli("check-consistency", files["psi_bad"], tpath)
    assert code == 1 and out.startswith("consistent=false triple_a=")
    code, _ = cli("check-consistency", files["quad"], tpath)
    assert code == 2


def test_phi(files):
    code, out = cli("phi", "encode", files["quad"])
    assert code == 0 and out.splitlines()[0] == "4 2 -1 1"
    tpath = files["dir"] / "phi.tbl"
    tpath.write_text(out)
    assert cli("check-consistency", files["quad"], tpath) == (0, "consistent=true\n")


def test_build_and_verify(files):
    out = files["dir"] / "prod.pts"
    code, text = cli("build", "product", files["up"], files["tri"], "--out", out)
    assert code == 0 and text == "n=6 cut=none\n"
    assert out.read_text().startswith("# built-by: product up.pts tri.pts")
    code, text = cli("verify", "arrow-point", out, files["up"], files["tri"])
    assert code == 0 and text.startswith("holds=true colorings=64")
    code, text = cli("verify", "arrow-point", files["tri"], files["up"], files["tri"])
    assert code == 1 and "counterexample=" in text


def test_build_stack_amplify_ramsey(files):
    code, text = cli("build", "stack", files["cup"], files["tri"])
    assert code == 0 and "# cut: 4" in text
    amp = files["dir"] / "amp.pts"
    code, text = cli("build", "amplify", files["up"], files["dot"], "--k", 2, "--out", amp)
    assert (code, text) == (0, "n=5 cut=4\n")
    assert cli("build", "amplify", files["up"], files["up"])[0] == 3
    code, text = cli("build", "ramsey", files["up"], files["up"], "--compact")
    assert code == 0
    assert cli("build", "ramsey", files["quad"], files["up"])[0] == 2
    assert cli("build", "product", files["up"])[0] == 2


def test_verify_arrow_pair(files):
    hexagon = files["dir"] / "hex.pts"
    hexagon.write_text("".join(f"{x} {x * x}\n" for x in range(6)))
    tri_ccw = files["dir"] / "ccw.pts"
    tri_ccw.write_text("0 0\n1 -1\n2 0\n")
    code, text = cli("verify", "arrow-pair", hexagon, tri_ccw, "--k", 2, "--exhaustive")
    assert code == 0 and text.splitlines()[:3] == ["holds=true", "strategy=exhaustive", "checked=32768"]
    code, text = cli("verify", "arrow-pair", files["cup"], tri_ccw, "--search")
    assert code == 1 and "counterexample=" in text
    code, text = cli("verify", "arrow-pair", hexagon, tri_ccw, "--trials", 20, "--seed", 3)
    assert code == 0 and text.startswith("holds=unknown")
    assert cli("verify", "arrow-pair", hexagon, tri_ccw, "--search", "--trials", 3)[0] == 2


def test_adversary_color(files):
    code, text = cli("adversary-color", files["pent"], "--p", 3, "--i", 1)
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "p=3 i=1 tuples=10 colors_used=1"
    assert cli("adversary-color", files["pent"], "--p", 3, "--i", 2)[0] == 2


def test_refute(files):
    code, text = cli("refute-5pt")
    assert code == 0
    assert text.splitlines() == ["enumerated=1025 consistent=0", "k=2 witness=0,0;1,1;2,1;3,0;4,5"]
    assert cli("refute-5pt", "--k", 1)[1].startswith("enumerated=1 consistent=0")
    assert cli("refute-5pt", "--regenerate")[1] == text
    assert cli("refute-5pt", "--points", files["pent"])[0] == 2
    code, text = cli("refute-5pt", "--points", files["pent"], "--control")
    assert code == 1 and "consistent=0" not in text


def test_searches(files):
    code, text = cli("search-predicate", files["quad"], "--k", 2)
    assert code == 0 and text.startswith("found=true\n4 2 0 1")
    w = files["dir"] / "w.pts"
    w.write_text("0 0\n1 1\n2 1\n3 0\n4 5\n")
    assert cli("search-predicate", w, "--single-class") == (1, "found=false\n")
    assert cli("search-tournament", w) == (1, "found=false\n")
    code, text = cli("search-tournament", files["quad"])
    assert code == 0 and text.startswith("found=true\n4 2 -1 1")
    assert cli("search-predicate", w, "--k", 3, "--budget", 3)[0] == 3


def test_lll_commands(files):
    assert cli("lll", "threshold", "--n", 8) == (0, "n=8 k=20\n")
    code, text = cli("lll", "sample", "--n", 5, "--seed", 9)
    assert code == 0 and text.startswith("n=5 k=16 seed=9 ")
    assert cli("lll", "sample", "--n", 5, "--seed", 9) == (code, text)
    assert cli("lll", "sample", "--n", 5, "--seed", -1)[0] == 2
    out = files["dir"] / "syn"
    code, text = cli("lll", "synthesize", files["cup"], files["quad"], files["cup2"], "--seed", 4, "--out", out)
    assert code == 0
    lines = text.splitlines()
    assert lines[0].startswith("classes=2 k=14 ")
    assert all(line.endswith("consistent=true") for line in lines[1:])
    assert sorted(p.name for p in out.iterdir()) == ["class_000.pf", "class_001.pf"]
    assert cli("lll", "synthesize")[0] == 2


def test_gen_corpus(files):
    code, text = cli("gen-corpus", "--generator", "wheel", "--count", 3, "--min-size", 5, "--max-size", 6, "--seed", 2)
    assert code == 0 and text.startswith("generator=wheel count=3 seed=2")
    d = files["dir"] / "corpus"
    code, text = cli("gen-corpus", "--count", 2, "--out", d)
    assert code == 0 and len(list(d.iterdir())) == 2
    assert cli("gen-corpus", "--min-size", 0)[0] == 2


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "ordertypes.cli", "lll", "threshold", "--n", "4"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "n=4 k=14\n"
    r = subprocess.run([sys.executable, "-m", "ordertypes.cli", "--version"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip()
