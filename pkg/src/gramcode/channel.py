"""Seeded simulation of the synthesis/coverage/sequencing channel.

A transmission applies, in order: exactly s_syn symbol substitutions at
distinct positions of the word, loss of t of its gram occurrences, and
a single-symbol substitution inside s_seq of the surviving occurrences.
The observation is the resulting count vector over the full gram cube.
Every random draw comes from a splitmix64 stream seeded explicitly, so
traces replay bit-exactly anywhere; `inject` applies a trace verbatim,
which is also how transmit itself works after sampling one.

Draw order, for reproducibility: (with --at-most, one draw per budget
entry first, each uniform on 0..budget) synthesis positions as a
k-of-n sample, then one new symbol per position in ascending position
order; dropped occurrence indices as a k-of-n sample; substituted
occurrence indices (relative to the survivors in position order) as a
k-of-n sample, then per occurrence in ascending order a position in the
gram and a different symbol (or a different whole gram in whole-gram
mode).  k-of-n sampling is a partial Fisher-Yates over range(n), and
every bounded draw uses rejection on 64-bit splitmix output.

Also here: the support-only and rank-only readout helpers, the exact
count of distinct gram supports for short binary words, and the
arc-disjoint decomposition of the full graph into q equal trails.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .grams import ChannelBudget, GramSet, ProfileVector, Word, full_gram_set, lex_index
from .graphs import SearchBudgetExceeded, build_graph

_MASK = (1 << 64) - 1


class Splitmix64:
    """splitmix64: z += 0x9E3779B97F4A7C15; mix via xorshift-multiply."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        limit = _MASK + 1 - ((_MASK + 1) % n)
        while True:
            x = self.next64()
            if x < limit:
                return x % n

    def sample(self, n: int, k: int) -> list[int]:
        """k distinct values from range(n): partial Fisher-Yates, sorted."""
        if k > n:
            raise ValueError(f"cannot sample {k} of {n}")
        pool = list(range(n))
        for i in range(k):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return sorted(pool[:k])


@dataclass(frozen=True)
class ChannelTrace:
    """Everything a transmission did, sufficient for bit-exact replay.

    synthesis: (position, new symbol) pairs, ascending positions.
    dropped: indices into the gram occurrences of the synthesized word.
    gram_subs: (survivor index, new gram) pairs; survivor indices count
    the occurrences left after drops, in position order.
    """

    seed: int | None
    synthesis: tuple[tuple[int, int], ...]
    dropped: tuple[int, ...]
    gram_subs: tuple[tuple[int, tuple[int, ...]], ...]


def inject(x: Word, ell: int, trace: ChannelTrace) -> ProfileVector:
    """Apply a trace to a word; the observation over the full gram cube."""
    n = len(x)
    if n < ell:
        raise ValueError("word shorter than the gram length")
    symbols = list(x.symbols)
    for pos, new in trace.synthesis:
        if not 0 <= pos < n:
            raise ValueError(f"synthesis position {pos} out of range")
        if symbols[pos] == new:
            raise ValueError("substitution must change the symbol")
        symbols[pos] = new
    occurrences = [tuple(symbols[i : i + ell]) for i in range(n - ell + 1)]
    dropped = set(trace.dropped)
    if any(not 0 <= i < len(occurrences) for i in dropped):
        raise ValueError("dropped index out of range")
    survivors = [g for i, g in enumerate(occurrences) if i not in dropped]
    for idx, new_gram in trace.gram_subs:
        if not 0 <= idx < len(survivors):
            raise ValueError(f"substitution index {idx} out of range")
        if tuple(new_gram) == survivors[idx]:
            raise ValueError("gram substitution must change the gram")
        survivors[idx] = tuple(new_gram)
    counts = [0] * x.q**ell
    for g in survivors:
        counts[lex_index(g, x.q, ell)] += 1
    return ProfileVector(tuple(counts))


def transmit(
    x: Word,
    ell: int,
    budget: ChannelBudget,
    seed: int,
    at_most: bool = False,
    whole_gram: bool = False,
):
    """One seeded channel use; returns (observation, trace).

    Budgets are used exactly unless at_most is set, in which case each
    actual count is drawn uniformly from 0..budget first (worst-case
    testing wants saturated budgets; the channel definition only
    promises "at most").
    """
    n = len(x)
    if n < ell:
        raise ValueError("word shorter than the gram length")
    rng = Splitmix64(seed)
    s_syn, t, s_seq = budget.s_syn, budget.t, budget.s_seq
    if at_most:
        s_syn = rng.below(s_syn + 1)
        t = rng.below(t + 1)
        s_seq = rng.below(s_seq + 1)
    n_grams = n - ell + 1
    if t + s_seq > n_grams:
        raise ValueError(f"t + s_seq = {t + s_seq} exceeds the {n_grams} occurrences")
    if s_syn > n:
        raise ValueError(f"cannot substitute {s_syn} of {n} positions")

    q = x.q
    synthesis = []
    symbols = list(x.symbols)
    for pos in rng.sample(n, s_syn):
        new = (symbols[pos] + 1 + rng.below(q - 1)) % q
        synthesis.append((pos, new))
        symbols[pos] = new
    dropped = tuple(rng.sample(n_grams, t))
    dropped_set = set(dropped)
    survivor_grams = [
        tuple(symbols[i : i + ell])
        for i in range(n_grams)
        if i not in dropped_set
    ]
    gram_subs = []
    for idx in rng.sample(len(survivor_grams), s_seq):
        old = survivor_grams[idx]
        if whole_gram:
            old_rank = lex_index(old, q, ell)
            new_rank = (old_rank + 1 + rng.below(q**ell - 1)) % q**ell
            new_gram = _gram_of_rank(new_rank, q, ell)
        else:
            inside = rng.below(ell)
            new_symbol = (old[inside] + 1 + rng.below(q - 1)) % q
            new_gram = old[:inside] + (new_symbol,) + old[inside + 1 :]
        gram_subs.append((idx, new_gram))
    trace = ChannelTrace(seed, tuple(synthesis), dropped, tuple(gram_subs))
    return inject(x, ell, trace), trace


def _gram_of_rank(rank, q, ell):
    out = []
    for _ in range(ell):
        rank, r = divmod(rank, q)
        out.append(r)
    return tuple(reversed(out))


def trace_to_json(trace: ChannelTrace) -> str:
    return json.dumps(
        {
            "seed": trace.seed,
            "synthesis": [list(pair) for pair in trace.synthesis],
            "dropped": list(trace.dropped),
            "gram_subs": [[idx, list(gram)] for idx, gram in trace.gram_subs],
        },
        indent=2,
    )


def trace_from_json(text: str) -> ChannelTrace:
    data = json.loads(text)
    return ChannelTrace(
        data.get("seed"),
        tuple((int(p), int(s)) for p, s in data["synthesis"]),
        tuple(int(i) for i in data["dropped"]),
        tuple((int(i), tuple(int(c) for c in g)) for i, g in data["gram_subs"]),
    )


# --- support-only readout ----------------------------------------------------

def support_readout(counts, s: GramSet):
    """The grams with positive count: all a presence/absence reader sees."""
    counts = tuple(counts)
    if len(counts) != len(s):
        raise ValueError(f"expected {len(s)} counts, got {len(counts)}")
    return tuple(g for g, c in zip(s.grams, counts) if c > 0)


def star_distance(x: Word, y: Word, q: int, ell: int) -> int:
    """Size of the symmetric difference of the words' gram supports."""
    sx = {tuple(g) for g in x.grams(ell)}
    sy = {tuple(g) for g in y.grams(ell)}
    return len(sx ^ sy)


def star_identification_bound(n: int, ell: int, d: int) -> int:
    """How many observed grams pin down a codeword at support distance d."""
    return n - ell + 1 - (d - 1) // 2


def _mobius(n: int) -> int:
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


def tan_shallit_count(n: int, ell: int) -> int:
    """Distinct gram supports among binary words of length n, for n < 2*ell.

    2^n minus a correction summing (k-1)/k * sum_{d|k} mobius(k/d) 2^d
    over k = 1..n-ell+1; the inner sum is k times a whole number, so the
    arithmetic stays exact.
    """
    if not ell <= n < 2 * ell:
        raise ValueError(f"count valid only for ell <= n < 2*ell, got n={n}, ell={ell}")
    total = 2**n
    for k in range(1, n - ell + 2):
        inner = sum(_mobius(k // d) * 2**d for d in range(1, k + 1) if k % d == 0)
        total -= (k - 1) * inner // k
    return total


def brute_force_support_count(n: int, ell: int) -> int:
    """Oracle: enumerate all binary words, collect distinct gram supports."""
    supports = set()
    for v in range(2**n):
        bits = tuple((v >> i) & 1 for i in range(n))
        supports.add(frozenset(bits[i : i + ell] for i in range(n - ell + 1)))
    return len(supports)


# --- equal trail decomposition -----------------------------------------------

def cycle_decomposition(q: int, ell: int, budget: int = 5_000_000):
    """Split all q^ell arcs of the full graph into q trails of q^(ell-1) arcs.

    Backtracking prefers closed trails (walks returning to their start);
    when no all-closed decomposition exists the search reruns allowing
    open trails.  Each trail is a list of arc indices into the full gram
    set, consecutive arcs chaining head to tail with no arc repeated.
    """
    if q**ell > 64:
        raise ValueError("decomposition search is desk-scale only (q^ell <= 64)")
    s = full_gram_set(q, ell)
    graph = build_graph(s)
    length = q ** (ell - 1)
    for closed_only in (True, False):
        found = _trail_partition(graph, q, length, closed_only, budget)
        if found is not None:
            return found
    raise SearchBudgetExceeded("no trail decomposition found within budget")


def _trail_partition(graph, count, length, closed_only, budget):
    n_arcs = graph.n_arcs
    used = [False] * n_arcs
    out_by_node = [[] for _ in range(graph.n_nodes)]
    in_by_node = [[] for _ in range(graph.n_nodes)]
    for a in range(n_arcs):
        out_by_node[graph.arc_init[a]].append(a)
        in_by_node[graph.arc_term[a]].append(a)
    trails: list[list[int]] = []
    steps = [0]

    def bump():
        steps[0] += 1
        if steps[0] > budget:
            raise SearchBudgetExceeded(f"decomposition exceeded {budget} steps")

    def forward(trail, remaining):
        bump()
        if remaining == 0:
            if closed_only and graph.arc_term[trail[-1]] != graph.arc_init[trail[0]]:
                return False
            trails.append(trail[:])
            if solve():
                return True
            trails.pop()
            return False
        node = graph.arc_term[trail[-1]]
        for a in out_by_node[node]:
            if used[a]:
                continue
            used[a] = True
            trail.append(a)
            if forward(trail, remaining - 1):
                return True
            trail.pop()
            used[a] = False
        return False

    def backward(trail, prepends, remaining):
        if prepends == 0:
            return forward(trail, remaining)
        bump()
        node = graph.arc_init[trail[0]]
        for a in in_by_node[node]:
            if used[a]:
                continue
            used[a] = True
            trail.insert(0, a)
            if backward(trail, prepends - 1, remaining):
                return True
            trail.pop(0)
            used[a] = False
        return False

    def solve():
        if len(trails) == count:
            return all(used)
        first = next((a for a in range(n_arcs) if not used[a]), None)
        if first is None:
            return False
        # The first unused arc sits somewhere in its trail.  Closed trails
        # can be rotated to start with it; open trails try every position.
        used[first] = True
        positions = (0,) if closed_only else range(length)
        for p in positions:
            if backward([first], p, length - 1 - p):
                return True
        used[first] = False
        return False

    return trails if solve() else None
