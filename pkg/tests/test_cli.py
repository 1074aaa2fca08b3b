import pytest

from noisysft.cli import MANIFEST_HEADER, loads_manifest, main
from noisysft.render import PALETTE, read_image, square_outlines


def run(*args):
    return main([str(a) for a in args])


def test_gen_macro_census_render(tmp_path):
    a = tmp_path / "m"
    assert run("gen-macro", "--variant", "red_black", "--scale", 4, "--out", a) == 0
    assert (a / "manifest.txt").read_text().startswith(MANIFEST_HEADER)
    man = loads_manifest((a / "manifest.txt").read_text())
    assert set(man["artifacts"]) == {"macro.txt", "census.csv"}
    assert (a / "census.csv").read_text().splitlines() == [
        "quantity,key,value", "side,,15", "outside_red,,125", "bumpy,K,64", "red_square,5,4"]
    r = tmp_path / "r"
    assert run("render", "--input", a / "macro.txt", "--variant", "red_black",
               "--cell-px", 1, "--format", "png", "--out", r) == 0
    assert len(square_outlines(read_image(r / "render.png"), PALETTE["R"])) == 4


def test_flip_dist_and_replay(tmp_path):
    f = tmp_path / "f"
    assert run("flip", "--eps", "0.5", "--scale", 4, "--trials", 3, "--seed", 5, "--out", f) == 0
    assert {p.name for p in f.iterdir()} >= {"reference.txt", "trial_0000.txt", "trials.csv",
                                           "stats.csv", "manifest.txt"}
    d = tmp_path / "d"
    assert run("dist", "--input", f, "--out", d) == 0
    g = tmp_path / "g"
    assert run("replay", f / "manifest.txt", "--out", g) == 0
    for name in ("trials.csv", "trial_0002.txt"):
        assert (f / name).read_bytes() == (g / name).read_bytes()


def test_tm_commands(tmp_path):
    c = tmp_path / "c"
    assert run("compile-tm", "--sample", "bb2", "--variant", "p1", "--out", c) == 0
    assert (c / "certificate.txt").read_text().startswith("# noisysft certificate v1")
    v = tmp_path / "v"
    assert run("verify-tm", "--machine", c / "machine.txt", "--variant", "s1", "--max-n", 2,
               "--out", v) == 0
    assert (v / "behaviour.csv").exists()


@pytest.mark.parametrize("which", ["rate", "recurrence", "lemma", "besicovitch"])
def test_bounds(tmp_path, which):
    assert run("bounds", "--which", which, "--out", tmp_path / which) == 0


def test_exit_codes_and_cleanup(tmp_path):
    # invalid input
    assert run("sample-noise", "--width", 3, "--height", 3, "--eps", "2", "--seed", 0,
               "--out", tmp_path / "n") == 2
    assert not (tmp_path / "n").exists()
    assert not [p for p in tmp_path.iterdir() if ".partial-" in p.name]
    # budget
    assert run("gen-macro", "--variant", "vanilla", "--scale", 12, "--max-cells", 1000,
               "--out", tmp_path / "b") == 3
    # unknown sample
    assert run("compile-tm", "--sample", "nope", "--variant", "p1", "--out", tmp_path / "x") == 2
    # non-empty output directory
    full = tmp_path / "full"
    full.mkdir()
    (full / "keep").write_text("x")
    assert run("census", "--input", "missing.txt", "--variant", "vanilla", "--out", full) == 2
    assert (full / "keep").read_text() == "x"
    # argparse errors
    with pytest.raises(SystemExit) as e:
        run("gen-tileset")
    assert e.value.code == 2


def test_replay_detects_tampering(tmp_path):
    a = tmp_path / "a"
    assert run("gen-tileset", "--variant", "vanilla", "--out", a) == 0
    m = a / "manifest.txt"
    text = m.read_text()
    line = next(ln for ln in text.splitlines() if ln.startswith("artifact tileset.txt"))
    m.write_text(text.replace(line, "artifact tileset.txt " + "0" * 64))
    assert run("replay", m, "--out", tmp_path / "b") == 4
