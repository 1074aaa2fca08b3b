"""Hot kernels: pattern scans, occurrence counts and edge-label checks.

Each kernel has a numba version and a pure-numpy version with identical
results.  The numba path is used when numba imports cleanly and the
environment variable ``NOISYSFT_DISABLE_NUMBA`` is unset (or "0").
"""

import os

import numpy as np

_DISABLED = os.environ.get("NOISYSFT_DISABLE_NUMBA", "0") not in ("", "0")

try:  # pragma: no cover - exercised implicitly
    if _DISABLED:
        raise ImportError("numba disabled by environment")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


def backend():
    return "numba" if HAVE_NUMBA else "numpy"


# --------------------------------------------------------------------------
# numpy implementations


def _windows(cells, ph, pw, periodic):
    """Return (padded cells, number of row offsets, number of col offsets)."""
    h, w = cells.shape
    if periodic:
        padded = np.pad(cells, ((0, ph - 1), (0, pw - 1)), mode="wrap")
        return padded, h, w
    return cells, h - ph + 1, w - pw + 1


def _match_grid_np(cells, mask, periodic):
    ph, pw, _ = mask.shape
    padded, nr, nc = _windows(cells, ph, pw, periodic)
    if nr <= 0 or nc <= 0:
        return np.zeros((max(nr, 0), max(nc, 0)), dtype=bool)
    ok = np.ones((nr, nc), dtype=bool)
    for i in range(ph):
        for j in range(pw):
            m = mask[i, j]
            if m.all():
                continue
            ok &= m[padded[i:i + nr, j:j + nc]]
    return ok


def scan_masks_np(cells, masks, dims, periodic):
    out = []
    for p in range(masks.shape[0]):
        ph, pw = int(dims[p, 0]), int(dims[p, 1])
        ok = _match_grid_np(cells, masks[p, :ph, :pw], periodic)
        rs, cs = np.nonzero(ok)
        if rs.size:
            block = np.empty((rs.size, 3), dtype=np.int64)
            block[:, 0] = p
            block[:, 1] = rs
            block[:, 2] = cs
            out.append(block)
    if not out:
        return np.zeros((0, 3), dtype=np.int64)
    return np.concatenate(out)


def count_mask_np(cells, mask, periodic):
    return int(_match_grid_np(cells, mask, periodic).sum())


def edge_mismatch_np(cells, east, west, south, north, periodic):
    """Offsets (r, c) of left/top cells whose shared edge labels disagree."""
    if periodic:
        right = np.roll(cells, -1, axis=1)
        below = np.roll(cells, -1, axis=0)
        hbad = east[cells] != west[right]
        vbad = south[cells] != north[below]
    else:
        hbad = east[cells[:, :-1]] != west[cells[:, 1:]]
        vbad = south[cells[:-1, :]] != north[cells[1:, :]]
    return np.argwhere(hbad), np.argwhere(vbad)


# --------------------------------------------------------------------------
# numba implementations


@njit(cache=True)
def _match_at(grid, mask, ph, pw, r, c):
    for i in range(ph):
        for j in range(pw):
            if not mask[i, j, grid[r + i, c + j]]:
                return False
    return True


@njit(cache=True)
def _scan_pass(grid, masks, dims, h, w, periodic, out, fill):
    k = 0
    for p in range(masks.shape[0]):
        ph, pw = dims[p, 0], dims[p, 1]
        nr = h if periodic else h - ph + 1
        nc = w if periodic else w - pw + 1
        m = masks[p]
        for r in range(max(nr, 0)):
            for c in range(max(nc, 0)):
                ok = True
                for i in range(ph):
                    for j in range(pw):
                        if not m[i, j, grid[r + i, c + j]]:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    if fill:
                        out[k, 0] = p
                        out[k, 1] = r
                        out[k, 2] = c
                    k += 1
    return k


@njit(cache=True)
def _scan_masks_nb(grid, masks, dims, h, w, periodic):
    """grid is the cell array, wrap-padded when periodic; h, w its core size.
    Two passes (count, then fill) keep the inner loop free of allocation."""
    out = np.empty((0, 3), dtype=np.int64)
    k = _scan_pass(grid, masks, dims, h, w, periodic, out, False)
    out = np.empty((k, 3), dtype=np.int64)
    _scan_pass(grid, masks, dims, h, w, periodic, out, True)
    return out


@njit(cache=True)
def _count_mask_nb(grid, mask, h, w, periodic):
    ph, pw = mask.shape[0], mask.shape[1]
    nr = h if periodic else h - ph + 1
    nc = w if periodic else w - pw + 1
    total = 0
    for r in range(max(nr, 0)):
        for c in range(max(nc, 0)):
            if _match_at(grid, mask, ph, pw, r, c):
                total += 1
    return total


def _wrap(cells, ph, pw):
    """Wrap-pad so every periodic window is a plain slice."""
    h, w = cells.shape
    reps = (1 + -(-(ph - 1) // h), 1 + -(-(pw - 1) // w))
    return np.ascontiguousarray(np.tile(cells, reps)[:h + ph - 1, :w + pw - 1])


@njit(cache=True)
def _edge_mismatch_nb(cells, east, west, south, north, periodic):
    h, w = cells.shape
    hb = np.empty((h * w, 2), dtype=np.int64)
    vb = np.empty((h * w, 2), dtype=np.int64)
    nh = 0
    nv = 0
    for r in range(h):
        for c in range(w):
            a = cells[r, c]
            if c + 1 < w or periodic:
                b = cells[r, (c + 1) % w]
                if east[a] != west[b]:
                    hb[nh, 0] = r
                    hb[nh, 1] = c
                    nh += 1
            if r + 1 < h or periodic:
                b = cells[(r + 1) % h, c]
                if south[a] != north[b]:
                    vb[nv, 0] = r
                    vb[nv, 1] = c
                    nv += 1
    return hb[:nh].copy(), vb[:nv].copy()


# --------------------------------------------------------------------------
# dispatch


def scan_masks(cells, masks, dims, periodic, use_numba=None):
    """All matches of the mask patterns as an (M, 3) array of (pattern, r, c)."""
    cells = np.ascontiguousarray(cells, dtype=np.int64)
    if masks.shape[0] == 0:
        return np.zeros((0, 3), dtype=np.int64)
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba:
        dims = np.ascontiguousarray(dims, dtype=np.int64)
        h, w = cells.shape
        grid = _wrap(cells, int(dims[:, 0].max()), int(dims[:, 1].max())) if periodic else cells
        return _scan_masks_nb(grid, np.ascontiguousarray(masks), dims, h, w, bool(periodic))
    return scan_masks_np(cells, masks, dims, periodic)


def count_mask(cells, mask, periodic, use_numba=None):
    cells = np.ascontiguousarray(cells, dtype=np.int64)
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba:
        h, w = cells.shape
        grid = _wrap(cells, mask.shape[0], mask.shape[1]) if periodic else cells
        return int(_count_mask_nb(grid, np.ascontiguousarray(mask), h, w, bool(periodic)))
    return count_mask_np(cells, mask, periodic)


def edge_mismatch(cells, east, west, south, north, periodic, use_numba=None):
    cells = np.ascontiguousarray(cells, dtype=np.int64)
    if use_numba is None:
        use_numba = HAVE_NUMBA
    if use_numba:
        return _edge_mismatch_nb(cells, east, west, south, north, bool(periodic))
    return edge_mismatch_np(cells, east, west, south, north, periodic)
