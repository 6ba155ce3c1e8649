"""Code constructions and the profile <-> word pipeline.

Two ways to build an l-gram reconstruction code: intersect a Varshamov
code with the realizable profiles of length-n words (interior flow
points, all of which a single Eulerian walk realizes), or extend short
message vectors into profiles with a systematic encoder built on a
Hamiltonian cycle plus a loop.  The deterministic Euler map turns any
feasible profile back into its canonical word, which is also how noisy
observations are decoded after a minimum-distance scan of the codebook.
Rank-modulation messages ride the same systematic encoder: permutations
go in as info counts and come back out as the relative order of counts.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .aecc import VarshamovCode
from .grams import (
    GramSet,
    ProfileVector,
    Word,
    asym_distance,
    full_gram_set,
    gram_set_spec,
    lex_index,
    parse_gram_set_spec,
)
from .graphs import DeBruijnGraph, build_graph, eulerian_walk, hamiltonian_cycle
from .lattice import CongruenceBlock, enumerate_points, flow_system_for_words


def euler_word(counts, s: GramSet, graph: DeBruijnGraph | None = None) -> Word:
    """The canonical word realizing a profile, via the deterministic walk.

    Valid for balanced (closed-word) profiles and for profiles with a
    single source/sink imbalance pair (open words); the multiset's
    support must be connected.  The result has profile exactly `counts`
    and length sum(counts) + ell - 1.
    """
    counts = tuple(counts)
    if len(counts) != len(s):
        raise ValueError(f"expected {len(s)} counts, got {len(counts)}")
    graph = graph or build_graph(s)
    walk = eulerian_walk(graph, counts)
    symbols = list(graph.nodes[walk[0]])
    for v in walk[1:]:
        symbols.append(graph.nodes[v][-1])
    return Word(tuple(symbols), s.q)


def rotation_start(values) -> int:
    """First index whose rotation has all running prefix sums nonnegative.

    Requires sum(values) == 0; the index right after the first minimal
    prefix sum always works and is the deterministic choice.
    """
    values = list(values)
    if sum(values) != 0:
        raise ValueError("rotation requires values summing to zero")
    best_idx = 0
    best = 0
    running = 0
    for i, r in enumerate(values[:-1]):
        running += r
        if running < best:
            best = running
            best_idx = i + 1
    return best_idx


@dataclass(frozen=True)
class SystematicLayout:
    """Coordinates of the systematic encoder on one graph.

    The arcs split three ways: a Hamiltonian cycle (flow repair), one
    loop (sum slack), and the info positions I carrying the message.
    m bounds the per-symbol message alphabet.
    """

    graph: DeBruijnGraph
    ham_cycle: tuple[int, ...]
    loop_arc: int
    info_positions: tuple[int, ...]
    m: int

    @property
    def gram_set(self) -> GramSet:
        return self.graph.gram_set

    def info_grams(self):
        return [self.gram_set.grams[a] for a in self.info_positions]


def message_bound(graph: DeBruijnGraph, n: int) -> int:
    """Largest safe message alphabet for words of length n on this graph."""
    s = graph.gram_set
    denom = comb(graph.n_nodes, 2) * (s.q - 1) + graph.n_arcs - graph.n_nodes - 1
    if denom <= 0:
        raise ValueError("graph has no info positions")
    return (n - s.ell + 1) // denom


def systematic_layout(
    graph: DeBruijnGraph,
    m: int,
    ham_cycle=None,
    loop_arc: int | None = None,
) -> SystematicLayout:
    """Build the encoder layout: Hamiltonian cycle, smallest loop, info rest."""
    if graph.n_nodes < 2:
        raise ValueError("layout needs at least two nodes")
    if ham_cycle is None:
        ham_cycle = hamiltonian_cycle(graph)
    ham_cycle = tuple(ham_cycle)
    if sorted(ham_cycle) != list(range(graph.n_nodes)):
        raise ValueError("cycle must visit every node exactly once")
    cycle_arcs = []
    for i, u in enumerate(ham_cycle):
        v = ham_cycle[(i + 1) % len(ham_cycle)]
        arc = graph.arc_between(u, v)
        if arc is None:
            raise ValueError(f"no arc from node {u} to node {v}")
        cycle_arcs.append(arc)
    if loop_arc is None:
        loops = graph.loops()
        if not loops:
            raise ValueError("layout needs a loop arc")
        loop_arc = loops[0]
    if not graph.is_loop(loop_arc) or loop_arc in cycle_arcs:
        raise ValueError("loop arc must be a loop off the cycle")
    info = tuple(
        a for a in range(graph.n_arcs) if a != loop_arc and a not in cycle_arcs
    )
    if m < 1:
        raise ValueError("message alphabet must be positive")
    return SystematicLayout(graph, ham_cycle, loop_arc, info, m)


def systematic_encode(
    layout: SystematicLayout, message, n: int, override: bool = False
) -> ProfileVector:
    """Extend a message over the info positions into a profile of length-n words.

    Info arcs carry the message verbatim; the cycle arcs absorb the node
    imbalances the message creates (each at least 1, via the rotation
    trick); the loop takes the leftover sum.  With override=True the
    alphabet bound is skipped and only the final leftover >= 0 check
    guards validity.
    """
    graph = layout.graph
    s = graph.gram_set
    message = tuple(message)
    if len(message) != len(layout.info_positions):
        raise ValueError(
            f"message length {len(message)} != {len(layout.info_positions)} info positions"
        )
    if any(v < 0 or v >= layout.m for v in message):
        raise ValueError(f"message symbols must lie in [0, {layout.m - 1}]")
    if not override and layout.m > message_bound(graph, n):
        raise ValueError(
            f"alphabet {layout.m} exceeds the bound {message_bound(graph, n)} for n={n}"
        )

    total = n - s.ell + 1
    counts = [0] * graph.n_arcs
    inflow = [0] * graph.n_nodes
    for a, v in zip(layout.info_positions, message):
        counts[a] = v
        if not graph.is_loop(a):
            inflow[graph.arc_term[a]] += v
            inflow[graph.arc_init[a]] -= v

    cycle = layout.ham_cycle
    k = len(cycle)
    start = rotation_start([inflow[c] for c in cycle])
    order = [cycle[(start + i) % k] for i in range(k)]
    running = 0
    for i, node in enumerate(order):
        arc = graph.arc_between(order[i - 1], node)
        counts[arc] = 1 + running
        running += inflow[node]

    leftover = total - sum(counts)
    if leftover < 0:
        raise ValueError(
            f"message too heavy for n={n}: loop count would be {leftover}"
        )
    counts[layout.loop_arc] += leftover
    _check_systematic(graph, counts, total)
    return ProfileVector(tuple(counts))


def _check_systematic(graph, counts, total):
    if sum(counts) != total:
        raise AssertionError("systematic encoding lost the sum constraint")
    flow = [0] * graph.n_nodes
    for a, c in enumerate(counts):
        if not graph.is_loop(a):
            flow[graph.arc_term[a]] += c
            flow[graph.arc_init[a]] -= c
    if any(flow):
        raise AssertionError("systematic encoding broke flow conservation")


@dataclass(frozen=True)
class GrcCodebook:
    """A reconstruction code: realizable profiles at pairwise distance >= d."""

    n: int
    gram_set: GramSet
    codewords: tuple[tuple[int, ...], ...]
    distance: int
    provenance: str

    def __len__(self):
        return len(self.codewords)


def grc_intersect(
    code: VarshamovCode, n: int, s: GramSet, interior_only: bool = True,
    certify: bool = True,
) -> GrcCodebook:
    """Codebook of Varshamov members among the profiles of length-n words.

    Interior flow points (every count >= 1) are guaranteed realizable,
    so the enumeration with the code's congruence block is the codebook.
    With interior_only=False the boundary points join too, filtered by
    an explicit realizability check.
    """
    if code.length != len(s):
        raise ValueError("code length must match the gram set size")
    graph = build_graph(s)
    cong = CongruenceBlock(code.rows, code.p, code.beta)
    mode = "E" if interior_only else "F"
    points = enumerate_points(flow_system_for_words(graph, n, mode, cong))
    if not interior_only:
        points = [u for u in points if _realizable(u, s, graph)]
    elif certify:
        for u in points:
            euler_word(u, s, graph)
    return GrcCodebook(n, s, tuple(points), code.design_distance, "intersection")


def _realizable(counts, s, graph):
    try:
        euler_word(counts, s, graph)
        return True
    except ValueError:
        return False


def systematic_grc(
    aecc_words, layout: SystematicLayout, n: int, distance: int,
    override: bool = False,
) -> GrcCodebook:
    """Image of an AECC under the systematic encoder; distance is preserved
    because restriction to the info positions recovers the original word."""
    codewords = tuple(
        systematic_encode(layout, v, n, override=override).counts for v in aecc_words
    )
    return GrcCodebook(n, layout.gram_set, codewords, distance, "systematic")


@dataclass(frozen=True)
class DecodeResult:
    index: int
    codeword: tuple[int, ...]
    word: Word
    distance: int
    foreign_mass: int
    tie: bool


def project_observed(observed, s: GramSet):
    """Split a full-cube observation into (counts over S, foreign mass)."""
    observed = tuple(observed)
    if len(observed) == len(s):
        return observed, 0
    if len(observed) != s.q**s.ell:
        raise ValueError(
            f"observation length {len(observed)} matches neither |S| nor q^ell"
        )
    projected = tuple(observed[lex_index(g, s.q, s.ell)] for g in s.grams)
    return projected, sum(observed) - sum(projected)


def decode_profile(codebook: GrcCodebook, observed) -> DecodeResult:
    """Minimum asymmetric-distance decoding against an explicit codebook.

    Out-of-set observation mass is reported but never matched: S-indexed
    codewords have no foreign coordinates.  Ties keep the first codeword
    in codebook order and set the tie flag.
    """
    if not codebook.codewords:
        raise ValueError("empty codebook")
    s = codebook.gram_set
    projected, foreign = project_observed(observed, s)
    best_idx = -1
    best = None
    tie = False
    for i, u in enumerate(codebook.codewords):
        dist = asym_distance(u, projected)
        if best is None or dist < best:
            best = dist
            best_idx = i
            tie = False
        elif dist == best:
            tie = True
    winner = codebook.codewords[best_idx]
    return DecodeResult(best_idx, winner, euler_word(winner, s), best, foreign, tie)


# --- rank modulation --------------------------------------------------------

def rank_modulation_layout(q: int, ell: int) -> SystematicLayout:
    """Layout on the full graph sized so permutations fit the info positions."""
    graph = build_graph(full_gram_set(q, ell))
    m = q**ell - q ** (ell - 1) - 1
    return systematic_layout(graph, m)


def rank_encode(layout: SystematicLayout, perm, n: int) -> ProfileVector:
    """Embed a permutation of [m] into a profile via the systematic encoder.

    The info counts are the permutation values themselves, so a reader
    that only recovers the relative order of those counts recovers the
    permutation.  The generic alphabet bound is deliberately bypassed
    (the leftover check still protects validity).
    """
    perm = tuple(perm)
    if sorted(perm) != list(range(len(perm))):
        raise ValueError("rank input must be a permutation of 0..m-1")
    if len(perm) != len(layout.info_positions):
        raise ValueError(
            f"permutation length {len(perm)} != {len(layout.info_positions)}"
        )
    return systematic_encode(layout, perm, n, override=True)


def rank_readout_decode(layout: SystematicLayout, observed):
    """Permutation read off the relative order of the info counts.

    Returns (permutation, had_ties); ties rank by gram order and raise
    the flag instead of failing.
    """
    s = layout.gram_set
    projected, _ = project_observed(observed, s)
    info_counts = [projected[a] for a in layout.info_positions]
    order = sorted(range(len(info_counts)), key=lambda i: (info_counts[i], i))
    perm = [0] * len(info_counts)
    for rank, i in enumerate(order):
        perm[i] = rank
    had_ties = len(set(info_counts)) != len(info_counts)
    return tuple(perm), had_ties


# --- codebook files ---------------------------------------------------------
#
# Header "n q ell <set-spec> d provenance", then one profile per line.

def format_codebook_file(book: GrcCodebook, spec: str | None = None) -> str:
    spec = spec or gram_set_spec(book.gram_set)
    lines = [
        f"{book.n} {book.gram_set.q} {book.gram_set.ell} {spec} "
        f"{book.distance} {book.provenance}"
    ]
    for u in book.codewords:
        lines.append(" ".join(map(str, u)))
    return "\n".join(lines) + "\n"


def parse_codebook_file(text: str) -> GrcCodebook:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    n, q, ell = int(head[0]), int(head[1]), int(head[2])
    provenance = head[-1]
    distance = int(head[-2])
    s = parse_gram_set_spec(q, ell, head[3:-2])
    words = []
    for ln in lines[1:]:
        u = tuple(int(t) for t in ln.split())
        if len(u) != len(s):
            raise ValueError(f"profile has {len(u)} counts, expected {len(s)}")
        words.append(u)
    return GrcCodebook(n, s, tuple(words), distance, provenance)
