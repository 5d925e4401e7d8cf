import io
import re
import subprocess
import sys
import time
from pathlib import Path

import pytest

from pairvol.cli import EXIT_DOMAIN, EXIT_USAGE, main, run

GRAPHS = Path(__file__).resolve().parent.parent / "graphs"


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out)
    return code, out.getvalue()


def keys(text):
    return dict(line.split(" = ", 1) for line in text.splitlines())


def documented(path):
    """The text after each ``# expect:`` marker."""
    for line in path.read_text().splitlines():
        m = re.match(r"# expect: (.*)", line)
        if m:
            yield m.group(1)


@pytest.mark.parametrize("path", sorted(GRAPHS.glob("*.graph")), ids=lambda p: p.stem)
def test_worked_examples(path, capsys):
    expectations = list(documented(path))
    assert expectations
    for exp in expectations:
        start = time.perf_counter()
        if exp.startswith("exit 2"):
            message = exp.split(", ", 1)[1]
            assert main(["validate", str(path)]) == EXIT_DOMAIN
            assert message in capsys.readouterr().err
        else:
            key, value = exp.split(" = ")
            code, out = call(key, str(path))
            assert code == 0
            assert keys(out)[key] == value
        assert time.perf_counter() - start < 1


def test_volume_echoes_weights():
    code, out = call("volume", "--check", str(GRAPHS / "orbifold_237_d5.graph"))
    assert code == 0
    k = keys(out)
    assert k["arrow.C2.n"] == "7" and k["arrow.C2.cbar"] == "6/7"
    assert k["volume"] == "1/3528" and k["check"] == "ok"


def test_raw_and_normalized_agree():
    path = str(GRAPHS / "three_lines.graph")
    assert call("pcp", "--raw", path)[1] == call("pcp", path)[1]
    assert keys(call("pcp", "--check", "--raw", path)[1])["check"] == "ok"


def test_output_is_deterministic():
    path = str(GRAPHS / "cusp.graph")
    for cmd in ("star", "classify", "volume", "lct"):
        assert call(cmd, path) == call(cmd, path)


def test_star_report():
    code, out = call("star", str(GRAPHS / "cusp.graph"))
    k = keys(out)
    assert code == 0 and k["shape"] == "star"
    assert (k["chi"], k["eps"], k["chi_C"], k["pcp"], k["lct"]) == ("-5/6", "1/6", "1/6", "1/6", "5/6")


def test_classify_and_vol0():
    k = keys(call("classify", str(GRAPHS / "cusp.graph"))[1])
    assert k["classification"] == "NotLogCanonical" and k["a.L"] == "-2"
    k = keys(call("vol0", str(GRAPHS / "orbifold_237_d5.graph"))[1])
    assert k["case"] == "NotVolumeZero" and k["volume"] == "1/3528"


def test_search_min_deficiency():
    k = keys(call("search-min", "--deficiency", "3")[1])
    assert k["min_positive"] == "1/42" and k["witness"] == "2,3,7"


def test_search_min_small_bounds():
    code, out = call("search-min", "--bounds", "m=3,n=3,nprime=7,d=5")
    assert code == 0
    assert keys(out)["minimum"] == "1/3528"


@pytest.mark.parametrize(
    "argv, header",
    [
        (["census", "star3", "--max-k", "6"], "k1,k2,k3,family"),
        (["census", "halfweight"], "family,determinants"),
        (["census", "weights", "--ks", "2,3,4"], "n1,n2,n3"),
        (["census", "vol0", "--vol0-bounds", "2,2,3"], "case_label,parameters,volume"),
        (["census", "rdp", "--bounds", "m=2,n=2,nprime=3,d=3"], "r,s,m_spec,n_spec,nprime_spec,d,chi_bar,epsilon,volume,flag"),
    ],
)
def test_census(argv, header):
    code, out = call(*argv)
    assert code == 0
    assert out.splitlines()[0] == header


def test_weights_census_has_eleven_rows():
    assert len(call("census", "weights", "--ks", "2,3,4")[1].splitlines()) == 12


def test_invariance():
    code, out = call("invariance", str(GRAPHS / "cusp.graph"), "--seed", "5", "--trials", "10")
    assert code == 0
    assert keys(out)["invariant"] == "true"


def test_error_codes(tmp_path, capsys):
    assert main(["bogus"]) == EXIT_USAGE
    assert main(["volume"]) == EXIT_USAGE
    assert main(["volume", str(tmp_path / "missing.graph")]) == EXIT_USAGE
    bad = tmp_path / "bad.graph"
    bad.write_text("vertex A e=-2\nedge A B\n")
    assert main(["validate", str(bad)]) == EXIT_DOMAIN
    zero = tmp_path / "zero.graph"
    zero.write_text("vertex E e=-1\narrow C1 at=E c=0\narrow C2 at=E c=1/2\narrow C3 at=E c=1/2\n")
    assert main(["volume", str(zero)]) == EXIT_DOMAIN
    err = capsys.readouterr().err
    assert err.count("error:") >= 4
    assert main(["volume", "--drop-zero-arrows", str(zero)]) == 0


def test_console_script():
    proc = subprocess.run(
        [sys.executable, "-m", "pairvol.cli", "lct", str(GRAPHS / "cusp.graph")],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "lct = 5/6\n"
