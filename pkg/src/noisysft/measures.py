"""Weak-* machinery on shift-invariant measures.

Windows are U_n = [0, n]^d.  The metric is

    d_r^+(mu, nu) = sum_n 2^-n r^-|U_n| |A^U_n|^-1 sum_w |mu[w] - nu[w]|

and s_n is its partial sum over ranks 0..n.  Every term after rank n is at
most 2^(1-m) / |A^U_m|, so the tail is at most 2^(1-n) and the true value
lies in [s_n, s_n + 2^(1-n)].

Covering constants
------------------
To approximate mu on U_n (n = n(delta)) within tau = delta / (4 |A^U_n|)
per cylinder, the periodic word of the covering construction combines
three errors:
  * averaging mu over U_m instead of the lattice: at most 1 - ((m+1-n)/(m+1))^d
    <= d n / (m + 1) (offsets whose U_n window leaves the box U_m);
  * rounding the U_m marginal to dyadic weights of precision 2^-k: at most
    |A^U_m| / 2^k in total variation;
  * reading the concatenated boxes periodically: windows straddling box
    interfaces, again at most d n / (m + 1).
Taking m + 1 = ceil(4 d n / tau) and 2^k >= 2 |A^U_m| / tau makes the sum at
most tau.  The window scale is psi = (m + 1) 2^k - 1.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import BudgetExceeded, Inconsistency, InvalidInput
from .grid import ForbiddenSet, Pattern, all_words

DEFAULT_BUDGET = 1 << 20


def _frac(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def window_shape(n: int, dim: int) -> tuple[int, int]:
    return (1, n + 1) if dim == 1 else (n + 1, n + 1)


def window_cells(n: int, dim: int) -> int:
    return (n + 1) ** dim


# ---------------------------------------------------------------------------
# measures


@dataclass(frozen=True, eq=False)
class PeriodicMeasure:
    """<w>: the uniform average over the shifts of the periodic extension of w."""

    base: Pattern

    @classmethod
    def word(cls, text: str, alphabet_size: int = 2):
        return cls(Pattern.word(text, alphabet_size))

    @classmethod
    def of(cls, cells, alphabet_size: int, dim: int = 1):
        return cls(Pattern(np.asarray(cells), alphabet_size, dim))

    @property
    def alphabet_size(self):
        return self.base.alphabet_size

    @property
    def dim(self):
        return self.base.dim

    @property
    def cells(self):
        return self.base.cells

    def distribution(self, n: int) -> dict:
        """Exact law of the pattern on U_n, keyed by the flattened cells."""
        a = self.cells
        h, w = a.shape
        if a.size == 0 or (a < 0).any():
            raise InvalidInput("periodic base must be a full pattern")
        sh = window_shape(n, self.dim)
        reps = (-(-(h + sh[0]) // h), -(-(w + sh[1]) // w))
        big = np.tile(a, reps)[: h + sh[0] - 1, : w + sh[1] - 1]
        wins = sliding_window_view(big, sh)[:h, :w].reshape(h * w, -1)
        uniq, counts = np.unique(wins, axis=0, return_counts=True)
        return {tuple(u.tolist()): Fraction(int(c), h * w) for u, c in zip(uniq, counts)}


@dataclass(frozen=True, eq=False)
class MixtureMeasure:
    """Finite convex combination of periodic measures (same alphabet, dim)."""

    components: tuple  # ((weight, PeriodicMeasure), ...)

    def __post_init__(self):
        total = sum(Fraction(wt) for wt, _ in self.components)
        if total != 1 or any(Fraction(wt) < 0 for wt, _ in self.components):
            raise InvalidInput("mixture weights must be non-negative and sum to 1")

    @property
    def alphabet_size(self):
        return self.components[0][1].alphabet_size

    @property
    def dim(self):
        return self.components[0][1].dim

    def distribution(self, n: int) -> dict:
        out: dict = {}
        for wt, m in self.components:
            for k, p in m.distribution(n).items():
                out[k] = out.get(k, 0) + Fraction(wt) * p
        return {k: v for k, v in out.items() if v}


@dataclass(frozen=True)
class BernoulliProduct:
    """B(eps)^Z^d on {0, 1}."""

    eps: Fraction
    dim: int = 1
    alphabet_size: int = 2

    def __post_init__(self):
        e = _frac(self.eps)
        object.__setattr__(self, "eps", e)
        if not 0 <= e <= 1:
            raise InvalidInput("eps must lie in [0, 1]")

    def prob(self, key) -> Fraction:
        ones = sum(1 for x in key if x == 1)
        zeros = sum(1 for x in key if x == 0)
        return self.eps**ones * (1 - self.eps) ** zeros


def cylinder_prob(mu, v: Pattern) -> Fraction:
    if v.alphabet_size != mu.alphabet_size:
        raise InvalidInput("alphabet mismatch")
    if isinstance(mu, BernoulliProduct):
        cells = v.cells.ravel()
        return mu.prob([int(x) for x in cells if x >= 0])
    if isinstance(mu, PeriodicMeasure):
        from .grid import Configuration, count_occurrences

        c = Configuration(mu.cells, mu.alphabet_size, "periodic", mu.dim)
        return Fraction(count_occurrences(v, c), mu.cells.size)
    if isinstance(mu, MixtureMeasure):
        return sum((Fraction(wt) * cylinder_prob(m, v) for wt, m in mu.components), Fraction(0))
    raise InvalidInput(f"unsupported measure {type(mu).__name__}")


# ---------------------------------------------------------------------------
# d+ metric


@dataclass(frozen=True)
class MetricSpec:
    r: Fraction = Fraction(1)
    truncation_rank: int = 4

    def __post_init__(self):
        object.__setattr__(self, "r", _frac(self.r))
        if self.r < 1 or self.truncation_rank < 0:
            raise InvalidInput("need r >= 1 and a non-negative rank")


def _binomial_l1(N, e1, e2) -> Fraction:
    return sum((math.comb(N, k) * abs(e1**k * (1 - e1) ** (N - k) - e2**k * (1 - e2) ** (N - k))
                for k in range(N + 1)), Fraction(0))


def l1_on_window(mu, nu, n: int) -> Fraction:
    """sum over w in A^U_n of |mu[w] - nu[w]|."""
    bm, bn = isinstance(mu, BernoulliProduct), isinstance(nu, BernoulliProduct)
    if bm and bn:
        return _binomial_l1(window_cells(n, mu.dim), mu.eps, nu.eps)
    if bm:
        mu, nu = nu, mu
        bm, bn = bn, bm
    dm = mu.distribution(n)
    if bn:
        tot = Fraction(0)
        covered = Fraction(0)
        for k, p in dm.items():
            q = nu.prob(k)
            tot += abs(p - q)
            covered += q
        return tot + (1 - covered)
    dn = nu.distribution(n)
    keys = set(dm) | set(dn)
    return sum((abs(dm.get(k, 0) - dn.get(k, 0)) for k in keys), Fraction(0))


def _check_pair(mu, nu):
    if mu.alphabet_size != nu.alphabet_size or mu.dim != nu.dim:
        raise InvalidInput("measures live on different alphabets or dimensions")


def dplus_term(mu, nu, n: int, r: Fraction = Fraction(1)) -> Fraction:
    A, d = mu.alphabet_size, mu.dim
    cells = window_cells(n, d)
    return l1_on_window(mu, nu, n) / (2**n * Fraction(r) ** cells * A**cells)


def dplus_truncated(mu, nu, spec: MetricSpec, budget: int = DEFAULT_BUDGET):
    """[s_n, s_n + 2^(1-n)] containing d_r^+(mu, nu)."""
    _check_pair(mu, nu)
    n = spec.truncation_rank
    largest = mu.alphabet_size ** window_cells(n, mu.dim)
    if isinstance(mu, BernoulliProduct) and isinstance(nu, BernoulliProduct):
        largest = window_cells(n, mu.dim)
    if largest > budget and not isinstance(mu, BernoulliProduct) and not isinstance(nu, BernoulliProduct):
        largest = 0  # sparse supports: cost bounded by the periods, not |A^U_n|
    if largest > budget:
        raise BudgetExceeded(f"rank {n} needs {largest} cylinders", layer="rank",
                             needed=largest, budget=budget)
    s = sum((dplus_term(mu, nu, k, spec.r) for k in range(n + 1)), Fraction(0))
    return s, s + Fraction(2, 2**n)


def n_of_delta(delta) -> int:
    """Rank with tail <= delta / 2."""
    delta = _frac(delta)
    if delta <= 0:
        raise InvalidInput("delta must be positive")
    q = 1 / delta
    c = 0
    while Fraction(2**c) < q:
        c += 1
    return 2 + c


def certify_le(mu, nu, threshold, r=1, start_rank=0, max_rank=12, strict=False):
    """Decide d_r^+(mu, nu) <= threshold (or < if strict) by raising the
    rank; returns (True | False | None, rank, (lo, hi))."""
    t = _frac(threshold)
    _check_pair(mu, nu)
    s = Fraction(0)
    lo = hi = None
    for n in range(0, max_rank + 1):
        s += dplus_term(mu, nu, n, _frac(r))
        lo, hi = s, s + Fraction(2, 2**n)
        if n < start_rank:
            continue
        if (hi < t) if strict else (hi <= t):
            return True, n, (lo, hi)
        if (lo >= t) if strict else (lo > t):
            return False, n, (lo, hi)
    return None, max_rank, (lo, hi)


def project(mu, a2: int):
    """First marginal of a measure on the product alphabet A1 x A2, symbols
    encoded as a1 * |A2| + a2."""
    if isinstance(mu, PeriodicMeasure):
        if mu.alphabet_size % a2:
            raise InvalidInput("alphabet size is not a multiple of |A2|")
        return PeriodicMeasure(Pattern(mu.cells // a2, mu.alphabet_size // a2, mu.dim))
    if isinstance(mu, MixtureMeasure):
        return MixtureMeasure(tuple((wt, project(m, a2)) for wt, m in mu.components))
    raise InvalidInput("projection needs a periodic or mixture measure")


def pair_measure(w1: Pattern, w2: Pattern) -> PeriodicMeasure:
    """<(w1, w2)> on the product alphabet, symbols a1 * |A| + a2."""
    if w1.shape != w2.shape or w1.alphabet_size != w2.alphabet_size:
        raise InvalidInput("patterns must share window and alphabet")
    A = w1.alphabet_size
    return PeriodicMeasure(Pattern(w1.cells * A + w2.cells, A * A, w1.dim))


def delta_mass(w1: Pattern, w2: Pattern) -> Fraction:
    """<(w1, w2)>(Delta): density of disagreeing cells."""
    if w1.shape != w2.shape:
        raise InvalidInput("patterns must share a window")
    return Fraction(int(np.count_nonzero(w1.cells != w2.cells)), w1.cells.size)


# ---------------------------------------------------------------------------
# covering parameters


@dataclass(frozen=True)
class CoveringParams:
    delta: Fraction
    rho: Fraction
    gamma: Fraction
    n_delta: int
    psi_scale: int
    phi_threshold: int
    m_k_choice: tuple
    forbidden_scale: int = 1
    alphabet_size: int = 2
    dim: int = 1
    feasible: bool = False

    @property
    def window_cells(self):
        return window_cells(self.psi_scale, self.dim)


def phi_threshold(rho, k: int, alphabet_size: int, dim: int, psi_cells: int) -> int:
    """floor(2^k |A^U_k| rho |U_psi|)."""
    rho = _frac(rho)
    v = 2**k * alphabet_size ** window_cells(k, dim) * rho * psi_cells
    return math.floor(v)


def mk_choice(delta, alphabet_size: int, dim: int) -> tuple[int, int, int, Fraction]:
    """(n, m, k, tau) with the two covering errors summing to at most tau."""
    delta = _frac(delta)
    n = n_of_delta(delta)
    tau = delta / (4 * alphabet_size ** window_cells(n, dim))
    m1 = math.ceil(4 * dim * n / tau)
    m = max(m1 - 1, n)
    need = 2 * Fraction(alphabet_size) ** window_cells(m, dim) / tau
    k = max(0, (need.numerator // need.denominator).bit_length() - 1)
    while Fraction(2**k) < need:
        k += 1
    return n, m, k, tau


FEASIBLE_CELLS = 20  # enumerations of |A|^cells words stay below ~10^6


def covering_params(delta, alphabet_size: int, dim: int, k: int,
                    rho=None, gamma=None) -> CoveringParams:
    delta = _frac(delta)
    rho = delta if rho is None else _frac(rho)
    gamma = rho if gamma is None else _frac(gamma)
    n, m, kk, _ = mk_choice(rho, alphabet_size, dim)
    psi = (m + 1) * 2**kk - 1
    cells = (psi + 1) ** dim
    return CoveringParams(
        delta=delta, rho=rho, gamma=gamma, n_delta=n_of_delta(delta), psi_scale=psi,
        phi_threshold=phi_threshold(rho, k, alphabet_size, dim, cells), m_k_choice=(m, kk),
        forbidden_scale=k, alphabet_size=alphabet_size, dim=dim,
        feasible=cells <= FEASIBLE_CELLS)


def params_at_window(scale: int, rho, k: int, alphabet_size: int, dim: int = 1,
                     delta=None, gamma=None, phi: int | None = None) -> CoveringParams:
    """Parameters on an explicit (feasible) sub-window U(scale): phi uses the
    sub-window size, so the exclusion argument stays valid there."""
    rho = _frac(rho)
    delta = rho if delta is None else _frac(delta)
    gamma = rho if gamma is None else _frac(gamma)
    cells = window_cells(scale, dim)
    return CoveringParams(
        delta=delta, rho=rho, gamma=gamma, n_delta=n_of_delta(delta) if delta > 0 else None,
        psi_scale=scale, m_k_choice=(None, None),
        phi_threshold=phi_threshold(rho, k, alphabet_size, dim, cells) if phi is None else phi,
        forbidden_scale=k, alphabet_size=alphabet_size, dim=dim,
        feasible=alphabet_size**cells <= DEFAULT_BUDGET)


# ---------------------------------------------------------------------------
# covering construction


def window_law(mu, m: int, budget: int = DEFAULT_BUDGET) -> dict:
    if isinstance(mu, BernoulliProduct):
        cells = window_cells(m, mu.dim)
        if 2**cells > budget:
            raise BudgetExceeded("window law too large", layer="covering",
                                 needed=2**cells, budget=budget)
        return {key: mu.prob(key) for key in itertools.product((0, 1), repeat=cells)}
    return mu.distribution(m)


def dyadic_weights(law: dict, k: int) -> dict:
    """Integer weights summing to 2^k, each within 1 of 2^k p (largest remainder)."""
    total = 2**k
    scaled = {w: p * total for w, p in law.items()}
    base = {w: math.floor(v) for w, v in scaled.items()}
    left = total - sum(base.values())
    order = sorted(law, key=lambda w: (-(scaled[w] - base[w]), w))
    for w in order[:left]:
        base[w] += 1
    return {w: c for w, c in base.items() if c}


def covering_word(mu, m: int, k: int, budget: int = DEFAULT_BUDGET) -> Pattern:
    """The periodic word of the covering construction: 2^k slabs of U_m
    boxes, p(w) consecutive slabs filled with w."""
    d = mu.dim
    side = (m + 1) * 2**k
    if side**d > budget:
        raise BudgetExceeded("covering word exceeds the cell budget", layer="covering",
                             needed=side**d, budget=budget)
    weights = dyadic_weights(window_law(mu, m, budget), k)
    sh = window_shape(m, d)
    slabs = []
    for w in sorted(weights):
        box = np.array(w, dtype=np.int64).reshape(sh)
        slab = box if d == 1 else np.tile(box, (1, 2**k))
        slabs.extend([slab] * weights[w])
    axis = 1 if d == 1 else 0
    return Pattern(np.concatenate(slabs, axis=axis), mu.alphabet_size, d)


def nearest_periodic(mu, max_len: int, rank: int, r=1, budget: int = DEFAULT_BUDGET):
    """Best hi-interval d+ from mu to <w> over 1-D words of length <= max_len."""
    if mu.dim != 1:
        raise InvalidInput("nearest_periodic enumerates 1-D words")
    A = mu.alphabet_size
    total = sum(A**L for L in range(1, max_len + 1))
    if total > budget:
        raise BudgetExceeded("periodic search too large", layer="enumeration",
                             needed=total, budget=budget)
    spec = MetricSpec(r, rank)
    best = None
    for L in range(1, max_len + 1):
        for w in itertools.product(range(A), repeat=L):
            nu = PeriodicMeasure(Pattern(np.array([w]), A, 1))
            lo, hi = dplus_truncated(mu, nu, spec)
            if best is None or hi < best[0]:
                best = (hi, lo, nu.base)
    return best


# ---------------------------------------------------------------------------
# enumerations


def forbidden_count(w_cells: np.ndarray, F: ForbiddenSet, clear=None) -> int:
    """Non-wrapping forbidden-pattern occurrences in w; with ``clear`` (bool
    array), only occurrences whose cells are all clear are counted."""
    from .grid import Configuration, check_local_admissibility

    c = Configuration(w_cells, F.alphabet_size, "free", F.dim)
    viols = check_local_admissibility(c, F)
    if clear is None:
        return len(viols)
    n = 0
    for v in viols:
        if _support_clear(v, F, clear):
            n += 1
    return n


def _support_clear(v, F, clear) -> bool:
    off = v.offset
    r, c = (0, off[0]) if len(off) == 1 else off
    if v.pattern_index < len(F.patterns):
        ph, pw = F.patterns[v.pattern_index].shape
        return bool(clear[r:r + ph, c:c + pw].all())
    e = F.edges
    if v.pattern_index - len(F.patterns) < len(e.h_labels):
        return bool(clear[r, c] and clear[r, c + 1])
    return bool(clear[r, c] and clear[r + 1, c])


def enumerate_WF(F: ForbiddenSet, rho, params: CoveringParams, budget: int = DEFAULT_BUDGET,
                 noisy_eps=None):
    """Patterns on U_psi with at most phi forbidden occurrences.

    With ``noisy_eps`` the patterns are pairs (w, b) over A x {0, 1}: only
    occurrences on clear cells count, and <b> must be within rho of
    B(eps) in the truncated s_n(rho) of d_|A|^+."""
    shape = window_shape(params.psi_scale, params.dim)
    A = F.alphabet_size
    if noisy_eps is None:
        for w in all_words(A, shape, budget):
            if forbidden_count(w, F) <= params.phi_threshold:
                yield Pattern(w, A, params.dim)
        return
    cells = shape[0] * shape[1]
    total = (2 * A) ** cells
    if total > budget:
        raise BudgetExceeded(f"{total} noisy patterns exceed the budget {budget}",
                             layer="enumeration", needed=total, budget=budget)
    nu = BernoulliProduct(_frac(noisy_eps), params.dim)
    for b in all_words(2, shape):
        if bernoulli_marginal_dist(Pattern(b, 2, params.dim), noisy_eps, rho, A) > _frac(rho):
            continue
        clear = b == 0
        for w in all_words(A, shape):
            if forbidden_count(w, F, clear) <= params.phi_threshold:
                yield Pattern(w, A, params.dim), Pattern(b, 2, params.dim)
    del nu


def bernoulli_marginal_dist(b: Pattern, eps, rho, alphabet_size: int = 2) -> Fraction:
    """s_{n(rho)}(<b>, B(eps)) for the metric d_|A|^+ on noise fields."""
    mu = PeriodicMeasure(Pattern(b.cells, 2, b.dim))
    nu = BernoulliProduct(_frac(eps), b.dim)
    n = n_of_delta(rho)
    return sum((dplus_term(mu, nu, k, Fraction(alphabet_size)) for k in range(n + 1)), Fraction(0))


# ---------------------------------------------------------------------------
# couplings


@dataclass(frozen=True)
class FiniteCoupling:
    """Joint law of a pair of patterns on a window."""

    scale: int
    dim: int
    joint: dict  # ((u, v) -> Fraction)

    def marginals(self):
        m1: dict = {}
        m2: dict = {}
        for (u, v), p in self.joint.items():
            m1[u] = m1.get(u, 0) + p
            m2[v] = m2.get(v, 0) + p
        return m1, m2

    @property
    def delta_mass(self) -> Fraction:
        return sum((p for (u, v), p in self.joint.items() if u[0] != v[0]), Fraction(0))


def coupling_delta_min(w1: Pattern, w2: Pattern, method: str = "shift-exact",
                       scale: int = 2, budget: int = 4096):
    """Minimal Delta-mass of a joining of <w1> and <w2>.

    shift-exact is exact; window-lp solves a stationary coupling LP on U(scale)
    and returns a lower bound."""
    from .metrics import besicovitch_periodic

    if method == "shift-exact":
        return besicovitch_periodic(w1, w2)
    if method != "window-lp":
        raise InvalidInput(f"unknown method {method!r}")
    return window_lp(PeriodicMeasure(w1), PeriodicMeasure(w2), scale, budget)[0]


def _sub(key, shape, rs, cs):
    a = np.array(key).reshape(shape)
    return tuple(a[rs, cs].ravel().tolist())


def window_lp(mu, nu, scale: int, budget: int = 4096):
    """Min of lambda(Delta) over couplings on U(scale) matching both window
    laws and stationary (shifting the window by one cell in each axis
    preserves the joint law of the overlap).  Returns (lower bound, lp value,
    FiniteCoupling)."""
    from scipy.optimize import linprog
    from scipy.sparse import lil_matrix

    if mu.dim != nu.dim:
        raise InvalidInput("dimension mismatch")
    d = mu.dim
    sh = window_shape(scale, d)
    m1, m2 = mu.distribution(scale), nu.distribution(scale)
    U, V = sorted(m1), sorted(m2)
    nvar = len(U) * len(V)
    if nvar > budget:
        raise BudgetExceeded(f"coupling LP has {nvar} variables", layer="lp",
                             needed=nvar, budget=budget)
    var = {(u, v): i for i, (u, v) in enumerate(itertools.product(U, V))}
    rows, rhs = [], []
    for u in U:
        rows.append([var[u, v] for v in V])
        rhs.append(m1[u])
    for v in V:
        rows.append([var[u, v] for u in U])
        rhs.append(m2[v])
    # stationarity along each axis: law of the overlap read at offset 0 and 1
    axes = [1] if d == 1 else [0, 1]
    for ax in axes:
        lo = [slice(None), slice(None)]
        hi = [slice(None), slice(None)]
        lo[ax] = slice(0, sh[ax] - 1)
        hi[ax] = slice(1, sh[ax])
        groups: dict = {}
        for (u, v), i in var.items():
            k0 = (_sub(u, sh, *lo), _sub(v, sh, *lo))
            k1 = (_sub(u, sh, *hi), _sub(v, sh, *hi))
            groups.setdefault(k0, [[], []])[0].append(i)
            groups.setdefault(k1, [[], []])[1].append(i)
        eq_rows = []
        for plus, minus in groups.values():
            eq_rows.append((plus, minus))
        for plus, minus in eq_rows:
            rows.append((plus, minus))
            rhs.append(Fraction(0))
    A_eq = lil_matrix((len(rows), nvar))
    for r, row in enumerate(rows):
        if isinstance(row, tuple):
            for i in row[0]:
                A_eq[r, i] += 1
            for i in row[1]:
                A_eq[r, i] -= 1
        else:
            for i in row:
                A_eq[r, i] = 1
    cost = np.zeros(nvar)
    ncell = sh[0] * sh[1]
    for (u, v), i in var.items():
        cost[i] = sum(1 for a, b in zip(u, v) if a != b) / ncell
    res = linprog(cost, A_eq=A_eq.tocsr(), b_eq=np.array([float(x) for x in rhs]),
                  bounds=(0, None), method="highs")
    if res.status != 0:
        raise Inconsistency("coupling LP infeasible: marginals are inconsistent",
                            {"status": int(res.status), "message": res.message})
    val = float(res.fun)
    bound = _certified_lower(val, ncell)
    joint = {k: Fraction(float(res.x[i])).limit_denominator(1 << 20)
             for k, i in var.items() if res.x[i] > 1e-12}
    return bound, val, FiniteCoupling(scale, d, joint)


LP_TOL = 1e-9


def _certified_lower(val: float, ncell: int) -> Fraction:
    """Rational just below an LP optimum: snap to a nearby small-denominator
    rational when within LP_TOL, otherwise subtract the tolerance."""
    snap = Fraction(val).limit_denominator(1 << 16)
    if abs(float(snap) - val) <= LP_TOL:
        return max(snap, Fraction(0))
    return max(Fraction(val) - Fraction(LP_TOL), Fraction(0))


# ---------------------------------------------------------------------------
# stability witness


@dataclass(frozen=True)
class Verdict:
    status: str  # holds | fails | inconclusive
    witness: tuple | None = None
    layer: str | None = None
    stats: dict = field(default_factory=dict)

    def __str__(self):
        if self.status == "fails":
            w, b = self.witness
            return f"fails(w={_show(w)}, b={_show(b)})"
        if self.status == "inconclusive":
            return f"inconclusive({self.layer})"
        return "holds"


def _show(p: Pattern) -> str:
    return "/".join("".join(str(int(x)) for x in row) for row in p.cells)


def _key(p: Pattern):
    return tuple(p.cells.ravel().tolist())


def stability_witness(F: ForbiddenSet, delta, eps, rho, gamma, *, window: int = 2,
                      budget: int = DEFAULT_BUDGET, max_rank: int = 10, seed: int = 0,
                      dim: int = 1) -> Verdict:
    """Evaluate the inner decidable block of the stability characterisation at
    fixed rationals, on the sub-window U(window) for every enumeration.

    For all (w, b) in W~_F^eps(gamma) search w0 in W_F(rho) and (w1, w2) with
      d_|A|^+(<w1>, <w>) < 3 rho,  d_|A|^+(<w2>, <w0>) < 3 rho,
      <(w1, w2)>(Delta) <= delta + |A|^2 rho.
    The first failing (w, b) in lexicographic order is the witness; ``seed``
    only permutes the search order."""
    delta, eps, rho, gamma = (_frac(x) for x in (delta, eps, rho, gamma))
    if min(delta, eps, rho, gamma) <= 0 or gamma > rho:
        raise InvalidInput("parameters must be positive with gamma <= rho")
    A = F.alphabet_size
    shape = window_shape(window, dim)
    cells = shape[0] * shape[1]
    stats = {"window": window, "cells": cells}
    if budget <= 0 or (2 * A) ** cells > budget:
        return Verdict("inconclusive", layer="enumeration",
                       stats={**stats, "needed": (2 * A) ** cells, "budget": budget})
    k = F.bounding_k
    p_rho = params_at_window(window, rho, k, A, dim)
    p_gamma = params_at_window(window, gamma, k, 2 * A, dim)
    words = [Pattern(w, A, dim) for w in all_words(A, shape)]
    W0 = [w for w in words if forbidden_count(w.cells, F) <= p_rho.phi_threshold]
    Wt = list(enumerate_WF(F, gamma, p_gamma, budget, noisy_eps=eps))
    stats.update(W0=len(W0), W_noisy=len(Wt), phi_rho=p_rho.phi_threshold,
                 phi_gamma=p_gamma.phi_threshold)
    if not Wt:
        return Verdict("holds", stats=stats)
    three = 3 * rho
    thr = delta + A * A * rho
    meas = {_key(w): PeriodicMeasure(w) for w in words}
    undecided = False
    cache: dict = {}

    def close(a, b):
        key = (_key(a), _key(b))
        if key not in cache:
            cache[key] = certify_le(meas[key[0]], meas[key[1]], three, A,
                                    max_rank=max_rank, strict=True)[0]
        return cache[key]

    # second inequality does not depend on (w, b)
    W2, W2_unknown = [], []
    for w2 in words:
        res = [close(w2, w0) for w0 in W0]
        if any(x is True for x in res):
            W2.append(w2)
        elif any(x is None for x in res):
            W2_unknown.append(w2)
    stats.update(W2=len(W2), W2_undecided=len(W2_unknown))
    order = list(range(len(Wt)))
    random.Random(seed).shuffle(order)
    failing = []
    for idx in order:
        w, b = Wt[idx]
        ok = False
        maybe = False
        for w1 in words:
            c1 = close(w1, w)
            if c1 is False:
                continue
            hit = [w2 for w2 in W2 if delta_mass(w1, w2) <= thr]
            hit_u = [w2 for w2 in W2_unknown if delta_mass(w1, w2) <= thr]
            if c1 is True and hit:
                ok = True
                break
            if hit or hit_u:
                maybe = True
        if not ok:
            if maybe:
                undecided = True
            else:
                failing.append((_key(w), _key(b), w, b))
    if failing:
        failing.sort(key=lambda t: (t[0], t[1]))
        return Verdict("fails", (failing[0][2], failing[0][3]), stats=stats)
    if undecided:
        return Verdict("inconclusive", layer="rank", stats=stats)
    return Verdict("holds", stats=stats)
