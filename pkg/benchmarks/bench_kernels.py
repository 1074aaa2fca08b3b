"""Time the numba kernels against their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--scale 8] [--repeat 5]

Both backends run in this process on the same inputs; results are checked
for equality before timings are reported.
"""

import argparse
import time

import numpy as np

from noisysft import _accel
from noisysft import robinson as rb


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--scale", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=5)
    a = ap.parse_args()
    ts = rb.build_tileset("enhanced_four_colour")
    c = rb.build_macro_tile(rb.MacroTileSpec("enhanced_four_colour", a.scale))
    cells = np.ascontiguousarray(c.cells)
    masks, dims = ts.forbidden._mask_stack()
    e = ts.forbidden.edges
    print(f"backend available: {_accel.backend()}; grid {cells.shape}")
    if not _accel.HAVE_NUMBA:
        print("numba disabled; nothing to compare")
        return
    kernels = {
        "scan_masks": lambda nb: _accel.scan_masks(cells, masks, dims, False, nb),
        "count_mask": lambda nb: _accel.count_mask(cells, masks[0], False, nb),
        "edge_mismatch": lambda nb: _accel.edge_mismatch(cells, e.east, e.west, e.south,
                                                         e.north, False, nb),
    }
    print(f"{'kernel':<16}{'numpy s':>12}{'numba s':>12}{'speedup':>10}")
    for name, k in kernels.items():
        k(True)  # compile
        t_np, r_np = best_of(lambda: k(False), a.repeat)
        t_nb, r_nb = best_of(lambda: k(True), a.repeat)
        same = all(np.array_equal(np.asarray(x), np.asarray(y)) for x, y in
                   zip(r_np if isinstance(r_np, tuple) else (r_np,),
                       r_nb if isinstance(r_nb, tuple) else (r_nb,)))
        if not same:
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<16}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>10.1f}")


if __name__ == "__main__":
    main()
