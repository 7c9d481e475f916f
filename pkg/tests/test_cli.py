import io
import subprocess
import sys

import pytest

from lmtopo import fixtures as fx
from lmtopo.cli import main
from lmtopo.homology import betti
from lmtopo.invariants import density
from lmtopo.io import read
from lmtopo.random_model import sample_complex


def run(*argv):
    buf = io.StringIO()
    code = main([str(a) for a in argv], stdout=buf)
    return code, buf.getvalue()


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, tag in [("z4", "Z4"), ("rp2", "RP2Six"), ("tetra", "TetraSphere")]:
        p = tmp_path / f"{name}.2c"
        assert run("fixture", tag, "-o", p)[0] == 0
        paths[name] = p
    return paths


def test_gen_then_analyze_round_trip(tmp_path):
    y = tmp_path / "y.2c"
    code, _ = run("gen", "-n", 40, "-p", "4*n^-1", "--seed", 7, "-o", y)
    assert code == 0
    text = y.read_text()
    assert text.startswith("# Y(n, p) sample: n=40 p=4*n^-1 = 0.1 seed=7")
    Y = read(y)
    assert Y == sample_complex(40, 0.1, 7)
    code, out = run("analyze", y, "--report", "density,homology")
    d = density(Y)
    assert code == 0
    assert f"v={d.v} e={d.e} f={d.f} chi={d.chi} L={d.L}" in out
    b0, b1, b2 = betti(Y)
    assert f"betti(Q): b0={b0} b1={b1} b2={b2}" in out


def test_usage_errors(tmp_path, capsys):
    assert run("gen", "-n", 40, "-p", 2, "--seed", 1)[0] == 2
    assert "probability out of range" in capsys.readouterr().err
    assert run("gen", "-n", 40, "-p", "0.1")[0] == 2
    assert "--seed" in capsys.readouterr().err
    assert run("gen", "-n", 40, "-p", "4*", "--seed", 1)[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("analyze", tmp_path / "missing.2c")[0] == 2
    assert run("analyze", tmp_path / "x.2c", "--bogus")[0] == 2
    assert "--bogus" in capsys.readouterr().err


def test_domain_error_exit_one(tmp_path, capsys):
    bad = tmp_path / "bad.2c"
    bad.write_text("f 0 1 1\n")
    assert run("analyze", bad)[0] == 1
    assert "lmtopo." in capsys.readouterr().err


def test_randomized_paths_need_seed(files, capsys):
    assert run("fixture", "StackedSphere(3)")[0] == 2
    assert run("aspherify", files["tetra"], "--epsilon", "1/10", "--rule", "random")[0] == 2
    assert run("mc", "b2", "-n", 10, "-p", "0.2", "--trials", 2)[0] == 2


def test_classify_z4(files):
    code, out = run("classify", files["z4"])
    assert code == 0 and out.splitlines()[0] == "Z4; L=-3; deletable face: 0 1 6"


def test_witnesses_rp2(files):
    code, out = run("witnesses", files["rp2"], "--epsilon", "1/5")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "kind,faces,witness_faces"
    assert len(lines) == 2 and lines[1].startswith("ProjectivePlane,10,")


def test_aspherify_log(files, tmp_path):
    out_file = tmp_path / "a.2c"
    code, out = run("aspherify", files["z4"], "--epsilon", "1/10", "-o", out_file)
    assert code == 0
    assert out.splitlines()[0] == "step,witness_kind,witness_faces,deleted_face,b2_after"
    assert out.splitlines()[1].startswith("1,Z4,") and out.splitlines()[1].endswith(",0-1-6,0")
    assert read(out_file).f == 12


def test_mc_b2_csv_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    code, _ = run("mc", "b2", "-n", 30, "-p", "6*n^-1", "--trials", 50, "--seed", 1, "-o", a)
    assert code == 0 and "sandwich_ok=1" in capsys.readouterr().err
    run("mc", "b2", "-n", 30, "-p", "6*n^-1", "--trials", 50, "--seed", 1, "-o", b)
    assert a.read_bytes() == b.read_bytes()
    rows = a.read_text().splitlines()
    assert rows[0] == "trial,seed,n,p,f2,b2,pattern,embeddings,contains,deletions,b2_after"
    assert len(rows) == 51
    for r in rows[1:]:
        f2, b2 = int(r.split(",")[4]), int(r.split(",")[5])
        assert f2 - 406 <= b2 <= f2


def test_mc_contain_and_aspherify(capsys):
    code, out = run("mc", "contain", "-n", 20, "-p", "0.1", "--trials", 3, "--seed", 1, "--pattern", "TetraSphere")
    assert code == 0 and "frequency=" in capsys.readouterr().err
    assert out.splitlines()[0].startswith("trial,seed") and len(out.splitlines()) == 4
    code, out = run("mc", "aspherify", "-n", 14, "-p", "0.1", "--trials", 2, "--seed", 1)
    assert code == 0


def test_mu_tilde_filling_contain(files, tmp_path):
    code, out = run("mu-tilde", files["rp2"])
    assert code == 0 and out.splitlines()[0] == "mu_tilde=3/5"
    cert = tmp_path / "cert.txt"
    code, out = run("filling", files["tetra"], "--loop", "0,1,2", "--certificate", cert)
    assert code == 0 and "Area(1)" in out and cert.read_text().count("\n") == 1
    code, out = run("filling", files["rp2"], "--loop", "0,1,3")
    assert code == 0 and "NotShownNullHomotopic" in out
    code, out = run("contain", "TetraSphere", files["tetra"])
    assert code == 0 and "24" in out


def test_help_lists_flags():
    for sub in ("gen", "analyze", "classify", "witnesses", "aspherify", "mc", "mu-tilde", "filling", "contain", "fixture"):
        r = subprocess.run([sys.executable, "-m", "lmtopo.cli", sub, "--help"], capture_output=True, text=True)
        assert r.returncode == 0 and "usage: lmtopo " + sub in r.stdout and "-h, --help" in r.stdout


def test_fixture_output_matches_constructor(files):
    assert read(files["z4"]) == fx.z4()
