"""Command-line front door.

Every subcommand writes its artifacts and a plain-text manifest into a fresh
output directory.  Work happens in a sibling staging directory that is
renamed into place on success and removed on failure.  Exit codes: 0 ok,
2 invalid input, 3 budget exceeded, 4 internal inconsistency.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import shutil
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .errors import InvalidInput, NoisySFTError

log = logging.getLogger("noisysft")

MANIFEST = "manifest.txt"
MANIFEST_HEADER = "# noisysft manifest v1"


# ---------------------------------------------------------------------------
# output plumbing


class Output:
    def __init__(self, root: Path):
        self.root = root
        self.files: dict = {}

    def write(self, name: str, data) -> None:
        if isinstance(data, str):
            data = data.encode()
        (self.root / name).write_bytes(data)
        self.files[name] = hashlib.sha256(data).hexdigest()

    def csv(self, name: str, header, rows) -> None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        self.write(name, buf.getvalue())

    def image(self, name: str, img) -> None:
        from .render import write_image

        write_image(self.root / name, img)
        self.files[name] = hashlib.sha256((self.root / name).read_bytes()).hexdigest()


def _fmt(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    return x


def dumps_manifest(command, params, files, started, finished) -> str:
    lines = [MANIFEST_HEADER, f"command {command}", f"version {__version__}",
             f"params {json.dumps(params, sort_keys=True)}",
             f"started {started}", f"finished {finished}"]
    lines += [f"artifact {name} {h}" for name, h in sorted(files.items())]
    lines.append("end")
    return "\n".join(lines) + "\n"


def loads_manifest(text: str) -> dict:
    lines = text.splitlines()
    if not lines or lines[0] != MANIFEST_HEADER:
        raise InvalidInput("not a noisysft manifest")
    out = {"artifacts": {}}
    for ln in lines[1:]:
        if ln == "end":
            return out
        key, _, val = ln.partition(" ")
        if key == "artifact":
            name, h = val.split()
            out["artifacts"][name] = h
        elif key == "params":
            out["params"] = json.loads(val)
        else:
            out[key] = val
    raise InvalidInput("manifest is truncated")


# ---------------------------------------------------------------------------
# shared loaders


def _machine(args):
    from .tm.machine import accept_ones, loads_machine, sample_machines

    if args.machine:
        return loads_machine(Path(args.machine).read_text())
    samples = {**sample_machines(), "ones": accept_ones()}
    if args.sample not in samples:
        raise InvalidInput(f"unknown sample machine {args.sample!r}; choose from "
                           f"{', '.join(sorted(samples))}")
    return samples[args.sample]


def _config(path):
    from .grid import loads_configuration

    return loads_configuration(Path(path).read_text())


def _frac(s) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"not a rational number: {s!r}") from None


# ---------------------------------------------------------------------------
# commands


def cmd_gen_tileset(a, out: Output):
    from .grid import dumps_forbidden
    from .robinson import build_tileset

    ts = build_tileset(a.variant)
    out.write("tileset.txt", dumps_forbidden(ts.forbidden, ts.names, a.variant))
    out.csv("summary.csv", ["variant", "alphabet", "patterns"],
            [[a.variant, ts.size, ts.forbidden.n_patterns]])


def _colour_assignment(a):
    ca = {}
    if getattr(a, "bumpy", None):
        ca["bumpy"] = a.bumpy
    if getattr(a, "transition_level", None):
        ca["transition_level"] = a.transition_level
        ca["regime"] = a.regime
    return ca or None


def _census_rows(cen):
    rows = [["side", "", cen.size_side], ["outside_red", "", cen.outside_red_count]]
    rows += [["bumpy", k, v] for k, v in sorted(cen.bumpy_count.items())]
    rows += [["red_square", s, v] for s, v in sorted(cen.red_square_count.items())]
    return rows


def cmd_gen_macro(a, out: Output):
    from .grid import dumps_configuration
    from .robinson import MacroTileSpec, build_macro_tile, census

    spec = MacroTileSpec(a.variant, a.scale, a.orient, _colour_assignment(a))
    c = build_macro_tile(spec, a.max_cells)
    out.write("macro.txt", dumps_configuration(c))
    out.csv("census.csv", ["quantity", "key", "value"], _census_rows(census(c, a.variant)))


def cmd_census(a, out: Output):
    from .robinson import census

    out.csv("census.csv", ["quantity", "key", "value"],
            _census_rows(census(_config(a.input), a.variant)))


def _noise_config(nf):
    from .grid import Configuration

    return Configuration(nf.bits.astype(np.int64), 2)


def cmd_sample_noise(a, out: Output):
    from .grid import dumps_configuration
    from .noise import sample_noise

    nf = sample_noise(a.width, a.height, float(_frac(a.eps)), a.seed)
    out.write("noise.txt", dumps_configuration(_noise_config(nf)))
    out.csv("summary.csv", ["width", "height", "eps", "seed", "popcount"],
            [[a.width, a.height, a.eps, a.seed, nf.popcount]])


def cmd_flip(a, out: Output):
    from .grid import dumps_configuration
    from .noise import flip_statistics, flip_trials

    eps = float(_frac(a.eps))
    ref, trials = flip_trials(eps, a.scale, a.trials, a.seed, a.variant, a.orient, a.start_scale)
    out.write("reference.txt", dumps_configuration(ref))
    rows = []
    for t in trials:
        out.write(f"trial_{t.index:04d}.txt", dumps_configuration(t.flipped))
        out.write(f"noise_{t.index:04d}.txt", dumps_configuration(_noise_config(t.noise)))
        for L in t.log.levels():
            ev = t.log.at(L)
            rows.append([t.index, t.seed, L, len(ev), sum(e.flippable for e in ev),
                         sum(e.flipped for e in ev)])
    out.csv("trials.csv", ["trial", "seed", "level", "tiles", "flippable", "flipped"], rows)
    stats = flip_statistics([t.log for t in trials], eps)
    out.csv("stats.csv", ["level", "tiles", "flippable", "flipped", "flippable_rate",
                          "flip_rate", "z_flippable", "z_flip"],
            [[s.level, s.tiles, s.flippable, s.flipped, _fmt(s.flippable_rate),
              _fmt(s.flip_rate), _fmt(s.z_flippable), _fmt(s.z_flip)] for s in stats.values()])
    out.write("params.json", json.dumps({"eps": a.eps, "scale": a.scale, "variant": a.variant,
                                         "start_scale": a.start_scale, "trials": a.trials},
                                        sort_keys=True) + "\n")


def cmd_dist(a, out: Output):
    from .metrics import bumpy_mismatch_density, hamming_distance
    from .noise import mismatch_lower_bound

    src = Path(a.input)
    p = json.loads((src / "params.json").read_text())
    ref = _config(src / "reference.txt")
    files = sorted(src.glob("trial_*.txt"))
    if not files:
        raise InvalidInput(f"no trials in {src}")
    vals = []
    for f in files:
        c = _config(f)
        if a.mode == "bumpy":
            vals.append(bumpy_mismatch_density(c, ref, p["variant"]))
        else:
            vals.append(hamming_distance(c, ref).distance)
    x = np.array([float(v) for v in vals])
    se = float(x.std(ddof=1) / np.sqrt(x.size)) if x.size > 1 else float("nan")
    bound = mismatch_lower_bound(float(_frac(p["eps"])), p["start_scale"], p["scale"])
    rows = [[f.stem, str(v), repr(float(v))] for f, v in zip(files, vals)]
    out.csv("dist.csv", ["trial", "exact", "value"], rows)
    out.csv("summary.csv", ["mode", "trials", "mean", "stderr", "lower_bound",
                            "passes_3se"],
            [[a.mode, x.size, repr(float(x.mean())), repr(se), repr(bound),
              bool(x.mean() >= bound - 3 * se) if a.mode == "bumpy" else ""]])


def _measure(a):
    from .measures import BernoulliProduct, PeriodicMeasure

    if (a.word is None) == (a.bernoulli is None):
        raise InvalidInput("give exactly one of --word and --bernoulli")
    if a.word is not None:
        return PeriodicMeasure.word(a.word, 2)
    return BernoulliProduct(_frac(a.bernoulli), 1)


def cmd_cover(a, out: Output):
    from .measures import n_of_delta, nearest_periodic

    delta = _frac(a.delta)
    rank = a.rank if a.rank is not None else n_of_delta(delta)
    hi, lo, w = nearest_periodic(_measure(a), a.max_len, rank, budget=a.budget)
    word = "".join(str(int(x)) for x in w.cells.ravel())
    out.csv("cover.csv", ["delta", "rank", "word", "dist_lo", "dist_hi", "within_delta"],
            [[str(delta), rank, word, str(lo), str(hi), hi <= delta]])


def _shift(name):
    from .grid import ForbiddenSet, Pattern

    if name == "full":
        return ForbiddenSet(2, (), None, 1)
    if name == "golden":
        return ForbiddenSet(2, (Pattern.word("11", 2),), None, 1)
    raise InvalidInput(f"unknown shift {name!r}")


def cmd_witness(a, out: Output):
    from .measures import stability_witness

    v = stability_witness(_shift(a.shift), _frac(a.delta), _frac(a.eps), _frac(a.rho),
                          _frac(a.gamma), window=a.window, budget=a.budget, seed=a.seed,
                          max_rank=a.max_rank)
    stats = ";".join(f"{k}={v.stats[k]}" for k in sorted(v.stats))
    out.write("verdict.txt", f"{v}\nstats {stats}\n")


def cmd_compile_tm(a, out: Output):
    from .grid import dumps_forbidden
    from .tm.compiler import compile_tm
    from .tm.machine import dumps_machine

    M = _machine(a)
    ct = compile_tm(a.variant, M, a.budget)
    out.write("machine.txt", dumps_machine(M))
    out.write("tileset.txt", dumps_forbidden(ct.forbidden, None, f"{a.variant}:{M.name}"))
    out.write("certificate.txt", ct.certificate())
    if ct.simulated is not M:
        out.write("wrapper.txt", dumps_machine(ct.simulated))
    out.csv("summary.csv", ["variant", "machine", "alphabet", "structural", "projection",
                            "machine_tiles", "simulated_states"],
            [[a.variant, M.name, ct.size, ct.structural.size, len(ct.projection_alphabet()),
              len(ct.layer.tiles), len(ct.simulated.states)]])


def cmd_verify_tm(a, out: Output):
    from .tm.compiler import compile_tm, verify_scale_behaviour

    M = _machine(a)
    ct = compile_tm(a.variant, M, a.budget)
    rows = []
    for n in range(1, a.max_n + 1):
        b = verify_scale_behaviour(ct, n, tuple(a.input or ""))
        rows.append([n, b.horizon, b.halted_within_horizon,
                     "" if b.transition_admissible is None else b.transition_admissible,
                     "" if b.freeze_active is None else b.freeze_active])
    out.csv("behaviour.csv", ["n", "horizon", "halted", "transition_admissible",
                              "freeze_active"], rows)


def cmd_bounds(a, out: Output):
    from .bounds import check_lemma, polynomial_rate, r_sequence, rate_table

    if a.which == "rate":
        r = polynomial_rate(_frac(a.alpha), _frac(a.beta))
        out.csv("rate.csv", ["alpha", "beta", "theta", "exponent", "constant"],
                [[a.alpha, a.beta, repr(r.theta), repr(r.exponent), repr(r.constant)]])
    elif a.which == "recurrence":
        out.csv("recurrence.csv", ["n", "r_n", "side", "outside"],
                [[n, r, 2 ** (2 * n + 1) - 1, (2 ** (2 * n + 1) - 1) ** 2 - r]
                 for n, r in enumerate(r_sequence(a.n), start=1)])
    elif a.which == "lemma":
        c = check_lemma(_frac(a.alpha), _frac(a.beta), _frac(a.eps), a.K, a.window)
        out.csv("lemma.csv", ["alpha", "beta", "eps", "K", "valid", "brute_min", "argmin",
                              "bound_lo", "holds"],
                [[str(c.alpha), str(c.beta), str(c.eps), c.K, c.valid, str(c.brute_min),
                  c.argmin, repr(c.bound_lo), c.holds]])
    else:
        rows = rate_table(a.construction, range(1, a.n + 1), [_frac(e) for e in a.eps_list])
        out.csv("besicovitch.csv", ["construction", "n", "eps", "bound"],
                [[w, n, str(e), str(b)] for w, n, e, b in rows])


def cmd_render(a, out: Output):
    from .render import RenderStyle, render_config, to_svg

    c = _config(a.input)
    ts = None
    if a.channel == "colour":
        from .robinson import build_tileset

        ts = build_tileset(a.variant)
    noise = _config(a.noise).cells.astype(bool) if a.noise else None
    squares = None
    if "red_squares" in a.overlay:
        from .robinson import build_tileset, red_squares

        squares = red_squares(c, build_tileset(a.variant))
    style = RenderStyle(a.cell_px, a.channel, overlays=frozenset(a.overlay))
    img = render_config(c, style, ts, noise=noise, squares=squares)
    if a.format == "svg":
        out.write("render.svg", to_svg(img, a.cell_px))
    else:
        out.image(f"render.{a.format}", img)


# ---------------------------------------------------------------------------
# parser


def _budget(p, default):
    p.add_argument("--budget", type=int, default=default, help="enumeration budget")


def build_parser() -> argparse.ArgumentParser:
    from .robinson import ORIENTATIONS, VARIANTS

    ap = argparse.ArgumentParser(prog="noisysft", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(fn=fn)
        if name != "replay":
            p.add_argument("--out", required=True, help="output directory (must be new or empty)")
            p.add_argument("--threads", type=int, default=1, help="worker cap")
        return p

    p = add("gen-tileset", cmd_gen_tileset, "emit a Robinson tileset")
    p.add_argument("--variant", choices=VARIANTS, required=True)

    p = add("gen-macro", cmd_gen_macro, "build a macro-tile and its census")
    p.add_argument("--variant", choices=VARIANTS, required=True)
    p.add_argument("--scale", type=int, required=True)
    p.add_argument("--orient", choices=sorted(ORIENTATIONS), default="NE")
    p.add_argument("--bumpy", choices=("R", "K"))
    p.add_argument("--transition-level", type=int)
    p.add_argument("--regime", choices=("Bl", "G"), default="Bl")
    p.add_argument("--max-cells", type=int, default=1 << 20)

    p = add("census", cmd_census, "structural census of a configuration")
    p.add_argument("--input", required=True)
    p.add_argument("--variant", choices=VARIANTS, required=True)

    p = add("sample-noise", cmd_sample_noise, "sample a Bernoulli noise field")
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--seed", type=int, required=True)

    p = add("flip", cmd_flip, "seeded flip-process trials")
    p.add_argument("--eps", required=True)
    p.add_argument("--scale", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--variant", choices=("red_black", "enhanced_four_colour"), default="red_black")
    p.add_argument("--orient", choices=sorted(ORIENTATIONS), default="NE")
    p.add_argument("--start-scale", type=int, default=2)

    p = add("dist", cmd_dist, "distances of flip trials to their reference")
    p.add_argument("--input", required=True, help="output directory of a flip run")
    p.add_argument("--mode", choices=("bumpy", "hamming"), default="bumpy")

    p = add("cover", cmd_cover, "nearest periodic measure to a 1D measure")
    p.add_argument("--word")
    p.add_argument("--bernoulli")
    p.add_argument("--delta", required=True)
    p.add_argument("--max-len", type=int, default=6)
    p.add_argument("--rank", type=int)
    _budget(p, 1 << 16)

    p = add("witness", cmd_witness, "stability witness at fixed rationals")
    p.add_argument("--shift", choices=("full", "golden"), required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--rho", required=True)
    p.add_argument("--gamma", required=True)
    p.add_argument("--window", type=int, default=2)
    p.add_argument("--max-rank", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    _budget(p, 1 << 20)

    for name, fn, help_ in (("compile-tm", cmd_compile_tm, "compile a machine to a tileset"),
                            ("verify-tm", cmd_verify_tm, "cross-check tiling and simulation")):
        p = add(name, fn, help_)
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--machine", help="machine file")
        g.add_argument("--sample", help="built-in sample machine")
        p.add_argument("--variant", choices=("p1", "s1", "p2"), required=True)
        _budget(p, 1 << 21)
        if name == "verify-tm":
            p.add_argument("--max-n", type=int, default=3)
            p.add_argument("--input", default="", help="input word (p2)")

    p = add("bounds", cmd_bounds, "closed-form bounds and rates")
    p.add_argument("--which", choices=("rate", "recurrence", "lemma", "besicovitch"),
                   required=True)
    p.add_argument("--alpha", default="4")
    p.add_argument("--beta", default="1/2")
    p.add_argument("--eps", default="1/1000000")
    p.add_argument("--K", type=int, default=1)
    p.add_argument("--window", type=int, default=64)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--construction", choices=("enhanced", "p1"), default="p1")
    p.add_argument("--eps-list", nargs="+", default=["1/1000"])

    p = add("render", cmd_render, "render a configuration")
    p.add_argument("--input", required=True)
    p.add_argument("--variant", choices=VARIANTS)
    p.add_argument("--channel", choices=("colour", "symbol"), default="colour")
    p.add_argument("--noise")
    p.add_argument("--overlay", nargs="*", default=[], choices=("noise", "red_squares"))
    p.add_argument("--cell-px", type=int, default=4)
    p.add_argument("--format", choices=("ppm", "png", "svg"), default="ppm")

    p = add("replay", None, "re-run a manifest and compare artifacts")
    p.add_argument("manifest")
    p.add_argument("--out", required=True)
    return ap


# ---------------------------------------------------------------------------
# driver


def _prepare(out: str) -> tuple[Path, Path]:
    target = Path(out)
    if target.exists() and (not target.is_dir() or any(target.iterdir())):
        raise InvalidInput(f"output directory {target} exists and is not empty")
    target.parent.mkdir(parents=True, exist_ok=True)
    stage = Path(tempfile.mkdtemp(prefix=f".{target.name}.partial-", dir=target.parent))
    return target, stage


def _params(args) -> dict:
    skip = {"fn", "command", "out", "threads"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def execute(args) -> dict:
    """Run one parsed command into its output directory; return the
    artifact hashes."""
    if args.command == "render" and args.channel == "colour" and not args.variant:
        raise InvalidInput("the colour channel needs --variant")
    target, stage = _prepare(args.out)
    started = time.strftime("%Y-%m-%dT%H:%M:%S")
    try:
        out = Output(stage)
        args.fn(args, out)
        finished = time.strftime("%Y-%m-%dT%H:%M:%S")
        (stage / MANIFEST).write_text(dumps_manifest(args.command, _params(args), out.files,
                                                     started, finished))
        if target.exists():
            target.rmdir()
        os.replace(stage, target)
    except BaseException:
        shutil.rmtree(stage, ignore_errors=True)
        raise
    return out.files


def replay(args) -> int:
    from .errors import Inconsistency

    man = loads_manifest(Path(args.manifest).read_text())
    argv = [man["command"], "--out", args.out]
    for k, v in man["params"].items():
        flag = "--" + k.replace("_", "-")
        if v is None or v is False:
            continue
        if v is True:
            argv.append(flag)
        elif isinstance(v, list):
            argv += [flag, *map(str, v)]
        else:
            argv += [flag, str(v)]
    new = execute(build_parser().parse_args(argv))
    if new != man["artifacts"]:
        bad = sorted(k for k in set(new) | set(man["artifacts"])
                     if new.get(k) != man["artifacts"].get(k))
        raise Inconsistency("replay differs from the manifest", {"artifacts": bad})
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        if args.command == "replay":
            return replay(args)
        execute(args)
        return 0
    except NoisySFTError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
