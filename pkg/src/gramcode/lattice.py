"""Exact lattice-point enumeration for flow polytopes on D(S).

The feasible profiles of closed words form the integer points of the
system  A(S) u = M b,  u >= 0  (or u > 0 for the interior), where A(S)
is the incidence matrix topped with an all-ones row and M is the number
of grams in a word.  Points are enumerated by a depth-first scan over
the arc coordinates in lexicographic order, with interval propagation:
remaining-sum bounds, per-node imbalance reachability, and forced
values once a node's incident arcs are exhausted.  An optional modular
block (H, p, beta) restricts points to a congruence class, which is how
code intersections are counted.  Everything is exact: integers and
Fractions only.

Counts at dilations M = lam * t are interpolated into exact-rational
polynomials in t, recovering leading coefficients of the underlying
quasipolynomials, with a held-out sample verifying every fit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .grams import GramSet, ProfileVector
from .graphs import DeBruijnGraph, build_graph

BRUTE_FORCE_GUARD = 10**8


class GuardExceeded(RuntimeError):
    """A brute-force enumeration would exceed its step guard."""


@dataclass(frozen=True)
class CongruenceBlock:
    """Rows H, prime modulus p and residues beta: keep only H u = beta (mod p)."""

    rows: tuple[tuple[int, ...], ...]
    p: int
    beta: tuple[int, ...]

    def __post_init__(self):
        if not self.rows:
            raise ValueError("congruence block needs at least one row")
        object.__setattr__(
            self, "rows", tuple(tuple(h % self.p for h in row) for row in self.rows)
        )
        object.__setattr__(self, "beta", tuple(b % self.p for b in self.beta))
        if len(self.beta) != len(self.rows):
            raise ValueError("one beta residue per row required")


@dataclass(frozen=True)
class FlowSystem:
    """Flow-conservation system for one graph: A(S) u = M b with a sign mode.

    mode "F" asks for u >= 0, mode "E" for u >= 1 (handled internally by
    the substitution u = 1 + u').  m_total is the required entry sum M.
    """

    graph: DeBruijnGraph
    m_total: int
    mode: str = "F"
    congruence: CongruenceBlock | None = None

    def __post_init__(self):
        if self.mode not in ("F", "E"):
            raise ValueError(f"mode must be 'F' or 'E', got {self.mode!r}")
        if self.m_total < 0:
            raise ValueError("entry sum must be nonnegative")
        if self.congruence is not None and len(self.congruence.rows[0]) != self.graph.n_arcs:
            raise ValueError("congruence rows must have one entry per arc")


def flow_system(graph, m_total, mode="F", congruence=None) -> FlowSystem:
    return FlowSystem(graph, m_total, mode, congruence)


def flow_system_for_words(graph, n, mode="F", congruence=None) -> FlowSystem:
    """System whose points are profiles of closed words of length n."""
    return FlowSystem(graph, n - graph.gram_set.ell + 1, mode, congruence)


def _setup(system: FlowSystem):
    """Shared DFS preamble: transformed totals, targets and arc metadata."""
    graph = system.graph
    arcs = list(zip(graph.arc_init, graph.arc_term))
    nnodes = graph.n_nodes
    targets = [0] * nnodes
    base = 0
    total = system.m_total
    if system.mode == "E":
        base = 1
        total -= len(arcs)
        for a, b in arcs:
            if a != b:
                targets[a] += 1
                targets[b] -= 1
    in_rem = [0] * nnodes
    out_rem = [0] * nnodes
    for a, b in arcs:
        if a != b:
            out_rem[a] += 1
            in_rem[b] += 1
    cong = system.congruence
    res = None
    cols = None
    if cong is not None:
        p = cong.p
        cols = [tuple(row[i] for row in cong.rows) for i in range(len(arcs))]
        res = [0] * len(cong.rows)
        if base:
            for col in cols:
                for j, h in enumerate(col):
                    res[j] = (res[j] + h) % p
    return arcs, total, targets, in_rem, out_rem, base, cols, res


def _presolve(arcs, nnodes):
    """Static pass over the arc order: decisions vs forced levels, plus the
    sum-pinned decision.

    Classifies each level the way the runtime interval rules will: an arc
    whose assignment closes one of its endpoints has a forced value; the
    rest are free decisions.  Every arc value is an integer affine form in
    the decisions, so the total consumed by levels >= i* is affine in the
    decisions; solving that against the remaining sum at the last decision
    level i* removes one whole search dimension.  Returns (pinned_arc,
    pinned_dec, arc_dec, weights), with pinned_arc = -1 when no usable
    pinning exists (no decisions, or the last one has zero net weight).
    """
    n = len(arcs)
    in_rem = [0] * nnodes
    out_rem = [0] * nnodes
    for a, b in arcs:
        if a != b:
            out_rem[a] += 1
            in_rem[b] += 1
    zero: dict[int, int] = {}
    miss_f = [dict(zero) for _ in range(nnodes)]
    forms: list[dict[int, int]] = []
    arc_dec = [-1] * n
    ndec = 0

    def add(dst, src, sign):
        for k, c in src.items():
            dst[k] = dst.get(k, 0) + sign * c
            if dst[k] == 0:
                del dst[k]

    for i, (a, b) in enumerate(arcs):
        if a == b:
            form = {ndec: 1}
            arc_dec[i] = ndec
            ndec += 1
        else:
            out_rem[a] -= 1
            in_rem[b] -= 1
            if in_rem[a] == 0 and out_rem[a] == 0:
                form = {}
                add(form, miss_f[a], -1)
            elif in_rem[b] == 0 and out_rem[b] == 0:
                form = dict(miss_f[b])
            else:
                form = {ndec: 1}
                arc_dec[i] = ndec
                ndec += 1
            add(miss_f[a], form, 1)
            add(miss_f[b], form, -1)
        forms.append(form)

    if ndec == 0:
        return -1, -1, arc_dec, ()
    pinned_arc = max(i for i in range(n) if arc_dec[i] >= 0)
    pinned_dec = arc_dec[pinned_arc]
    # Aggregate consumption of levels >= pinned_arc as an affine form over
    # the decisions (constants enter separately via the runtime targets).
    weights = [0] * ndec
    for i in range(pinned_arc, n):
        for k, c in forms[i].items():
            weights[k] += c
    if weights[pinned_dec] == 0:
        return -1, -1, arc_dec, ()
    return pinned_arc, pinned_dec, arc_dec, tuple(weights)


def _forced_constants(arcs, nnodes, targets):
    """Constant part of each forced arc's affine form (decisions set to 0)."""
    n = len(arcs)
    in_rem = [0] * nnodes
    out_rem = [0] * nnodes
    for a, b in arcs:
        if a != b:
            out_rem[a] += 1
            in_rem[b] += 1
    miss_c = list(targets)
    consts = [0] * n
    for i, (a, b) in enumerate(arcs):
        if a == b:
            value = 0
        else:
            out_rem[a] -= 1
            in_rem[b] -= 1
            if in_rem[a] == 0 and out_rem[a] == 0:
                value = -miss_c[a]
            elif in_rem[b] == 0 and out_rem[b] == 0:
                value = miss_c[b]
            else:
                value = 0
            miss_c[a] += value
            miss_c[b] -= value
        consts[i] = value
    return consts


def _scan(system: FlowSystem, emit):
    """Depth-first scan calling emit(values) for every point (pre-base-shift)."""
    arcs, total, targets, in_rem, out_rem, base, cols, res = _setup(system)
    if total < 0:
        return
    n = len(arcs)
    miss = list(targets)
    pos0 = sum(m for m in miss if m > 0)
    if pos0 != -sum(m for m in miss if m < 0):
        return
    vals = [0] * n
    cong = system.congruence
    p = cong.p if cong is not None else 0
    beta = list(cong.beta) if cong is not None else None
    last = n - 1

    pinned_arc, pinned_dec, arc_dec, weights = _presolve(arcs, len(targets))
    pin_const = 0
    if pinned_arc >= 0:
        consts = _forced_constants(arcs, len(targets), targets)
        pin_const = sum(consts[pinned_arc:])
    dec_vals = [0] * (pinned_dec + 1 if pinned_arc >= 0 else 0)

    def pinned_value(rem):
        """The unique value balancing the total at the pinned level, or None."""
        need = rem - pin_const
        for k in range(pinned_dec):
            need -= weights[k] * dec_vals[k]
        value, leftover = divmod(need, weights[pinned_dec])
        if leftover:
            return None
        return value

    def rec(i, rem, pos):
        if i == n:
            if rem == 0 and pos == 0 and (beta is None or res == beta):
                emit(vals)
            return
        a, b = arcs[i]
        k = arc_dec[i] if pinned_arc >= 0 else -1
        if a == b:
            hi = rem - pos
            lo = 0
            if i == last:
                lo = rem
            if i == pinned_arc:
                pv = pinned_value(rem)
                if pv is None:
                    return
                lo = max(lo, pv)
                hi = min(hi, pv)
            if lo > hi:
                return
            if beta is not None:
                col = cols[i]
                saved = res[:]
                for j, h in enumerate(col):
                    res[j] = (res[j] + h * lo) % p
            for c in range(lo, hi + 1):
                if k >= 0:
                    dec_vals[k] = c
                vals[i] = c
                rec(i + 1, rem - c, pos)
                if beta is not None and c < hi:
                    for j, h in enumerate(col):
                        res[j] = (res[j] + h) % p
            if beta is not None:
                res[:] = saved
            return

        out_rem[a] -= 1
        in_rem[b] -= 1
        ma = miss[a]
        mb = miss[b]
        lo, hi = 0, rem
        ra_in, ra_out = in_rem[a], out_rem[a]
        rb_in, rb_out = in_rem[b], out_rem[b]
        if ra_in == 0:
            if ra_out == 0:
                lo = max(lo, -ma)
                hi = min(hi, -ma)
            else:
                hi = min(hi, -ma)
        elif ra_out == 0:
            lo = max(lo, -ma)
        if rb_in == 0:
            if rb_out == 0:
                lo = max(lo, mb)
                hi = min(hi, mb)
            else:
                lo = max(lo, mb)
        elif rb_out == 0:
            hi = min(hi, mb)
        if i == last:
            lo = max(lo, rem)
            hi = min(hi, rem)
        if i == pinned_arc:
            pv = pinned_value(rem)
            if pv is None:
                lo, hi = 1, 0
            else:
                lo = max(lo, pv)
                hi = min(hi, pv)
        if lo <= hi:
            pos_rest = pos - (ma if ma > 0 else 0) - (mb if mb > 0 else 0)
            if beta is not None:
                col = cols[i]
                saved = res[:]
                for j, h in enumerate(col):
                    res[j] = (res[j] + h * lo) % p
            for c in range(lo, hi + 1):
                na = ma + c
                nb = mb - c
                npos = pos_rest + (na if na > 0 else 0) + (nb if nb > 0 else 0)
                if npos + c > rem:
                    break
                if k >= 0:
                    dec_vals[k] = c
                miss[a] = na
                miss[b] = nb
                vals[i] = c
                rec(i + 1, rem - c, npos)
                if beta is not None and c < hi:
                    for j, h in enumerate(col):
                        res[j] = (res[j] + h) % p
            miss[a] = ma
            miss[b] = mb
            if beta is not None:
                res[:] = saved
        out_rem[a] += 1
        in_rem[b] += 1

    rec(0, total, pos0)


def count_points(system: FlowSystem) -> int:
    """Number of integer points of the system, exactly."""
    counter = [0]

    def emit(_vals):
        counter[0] += 1

    _scan(system, emit)
    return counter[0]


def enumerate_points(system: FlowSystem):
    """All integer points of the system as count tuples, in DFS order."""
    base = 1 if system.mode == "E" else 0
    points: list[tuple[int, ...]] = []
    if base:
        points_append = points.append

        def emit(vals):
            points_append(tuple(v + 1 for v in vals))

    else:
        def emit(vals):
            points.append(tuple(vals))

    _scan(system, emit)
    return points


def brute_force_profiles(n, s: GramSet, closed_only=False):
    """Exact profile sets by scanning all words of length n with grams in s.

    The independent oracle for everything else in this module.  Scanning
    prunes a word as soon as it leaves s, which does not change the
    result.  Guarded at q**n <= 10**8 steps.
    """
    if s.q**n > BRUTE_FORCE_GUARD:
        raise GuardExceeded(f"{s.q}**{n} words exceed the enumeration guard")
    ell = s.ell
    if n < ell:
        return set()
    profiles: set[tuple[int, ...]] = set()
    counts = [0] * len(s)
    prefix: list[int] = []
    index = s._index
    q = s.q

    def rec():
        depth = len(prefix)
        if depth == n:
            if not closed_only or tuple(prefix[: ell - 1]) == tuple(prefix[n - ell + 1 :]):
                profiles.add(tuple(counts))
            return
        for sym in range(q):
            prefix.append(sym)
            if depth + 1 >= ell:
                idx = index.get(tuple(prefix[-ell:]))
                if idx is None:
                    prefix.pop()
                    continue
                counts[idx] += 1
                rec()
                counts[idx] -= 1
            else:
                rec()
            prefix.pop()

    rec()
    return profiles


@dataclass(frozen=True)
class QuasiPolynomial:
    """One residue class of a lattice-count quasipolynomial, exactly fitted.

    coeffs are ascending-degree Fractions in the dilation variable t,
    where the counted total is M = period * t + residue.  leading_in_n
    rescales the leading coefficient to the natural M (word length)
    variable: lead / period**degree.
    """

    degree: int
    period: int
    residue: int
    mode: str
    coeffs: tuple[Fraction, ...]

    def evaluate(self, t: int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    @property
    def leading(self) -> Fraction:
        return self.coeffs[self.degree]

    @property
    def leading_in_n(self) -> Fraction:
        return self.leading / Fraction(self.period) ** self.degree


class FitMismatch(RuntimeError):
    """The held-out sample contradicts the fitted polynomial (wrong degree or period)."""


def _lagrange(xs, ys):
    """Exact interpolation through (xs[i], ys[i]); ascending coefficients."""
    k = len(xs)
    coeffs = [Fraction(0)] * k
    for i in range(k):
        num = [Fraction(1)]
        denom = Fraction(1)
        for j in range(k):
            if j == i:
                continue
            # multiply num by (x - xs[j])
            num = [Fraction(0)] + num
            for d in range(len(num) - 1):
                num[d] -= num[d + 1] * xs[j]
            denom *= xs[i] - xs[j]
        scale = Fraction(ys[i]) / denom
        for d in range(len(num)):
            coeffs[d] += num[d] * scale
    return tuple(coeffs)


def fit_quasipolynomial(
    s: GramSet, degree: int, lam: int, mode: str = "F", residue: int = 0,
    congruence: CongruenceBlock | None = None,
) -> QuasiPolynomial:
    """Fit the count polynomial of one dilation class, with a held-out check.

    Counts the points at M = lam*t + residue for t = 1..degree+1, runs
    exact Lagrange interpolation, then recounts at t = degree+2 and
    compares; a mismatch means the assumed degree or period is wrong
    and raises FitMismatch.
    """
    graph = build_graph(s)
    xs = list(range(1, degree + 2))
    ys = [
        count_points(FlowSystem(graph, lam * t + residue, mode, congruence)) for t in xs
    ]
    coeffs = _lagrange(xs, ys)
    poly = QuasiPolynomial(degree, lam, residue, mode, coeffs)
    t_check = degree + 2
    predicted = poly.evaluate(t_check)
    actual = count_points(FlowSystem(graph, lam * t_check + residue, mode, congruence))
    if predicted != actual:
        raise FitMismatch(
            f"held-out count at t={t_check} is {actual}, fit predicts {predicted}"
        )
    return poly


def reciprocity_check(f_poly: QuasiPolynomial, e_poly: QuasiPolynomial) -> bool:
    """Exact identity L_F(-t) == (-1)^D L_E(t), coefficient by coefficient."""
    if f_poly.degree != e_poly.degree:
        return False
    d = f_poly.degree
    sign = 1 if d % 2 == 0 else -1
    for k in range(d + 1):
        f_k = f_poly.coeffs[k] * (-1 if k % 2 else 1)
        if f_k != sign * e_poly.coeffs[k]:
            return False
    return True


def monotonicity_check(s: GramSet, m_max: int, mode: str = "F") -> bool:
    """count_points nondecreasing in the total for M = 1..m_max."""
    graph = build_graph(s)
    prev = count_points(FlowSystem(graph, 1, mode))
    for m in range(2, m_max + 1):
        cur = count_points(FlowSystem(graph, m, mode))
        if cur < prev:
            return False
        prev = cur
    return True


def profile_points(system: FlowSystem):
    """enumerate_points wrapped into ProfileVector values."""
    return [ProfileVector(pt) for pt in enumerate_points(system)]
