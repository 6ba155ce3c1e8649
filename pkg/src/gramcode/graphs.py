"""Restricted de Bruijn graphs and their structural analyses.

The graph D(S) has the (l-1)-grams occurring in S as nodes and the
grams of S as arcs (a gram is an arc from its prefix to its suffix).
Everything here is exact integer combinatorics: connectivity, degree
balance, Eulerian walks with a fixed deterministic tie-break, simple
cycle lengths and their lcm, Hamiltonian cycles, and the growth
exponent of profile counts read off a condensation DAG.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .grams import GramSet, full_gram_set

DEFAULT_HAMILTONIAN_BUDGET = 10_000_000


class NotHamiltonianError(ValueError):
    """The graph provably has no Hamiltonian cycle."""


class SearchBudgetExceeded(RuntimeError):
    """A backtracking search ran out of its step budget."""


@dataclass(frozen=True)
class DeBruijnGraph:
    """D(S): nodes are the (l-1)-grams of S, arcs are the grams themselves."""

    gram_set: GramSet
    nodes: tuple[tuple[int, ...], ...]
    arc_init: tuple[int, ...]
    arc_term: tuple[int, ...]
    _node_index: dict = field(repr=False, compare=False, hash=False, default=None)

    @property
    def n_nodes(self):
        return len(self.nodes)

    @property
    def n_arcs(self):
        return len(self.gram_set)

    def node_index(self, node) -> int:
        return self._node_index[tuple(node)]

    def node_label(self, i: int) -> str:
        return "".join(map(str, self.nodes[i]))

    def is_loop(self, arc: int) -> bool:
        return self.arc_init[arc] == self.arc_term[arc]

    def loops(self) -> list[int]:
        return [a for a in range(self.n_arcs) if self.is_loop(a)]

    def out_arcs(self, v: int) -> list[int]:
        return [a for a in range(self.n_arcs) if self.arc_init[a] == v]

    def in_arcs(self, v: int) -> list[int]:
        return [a for a in range(self.n_arcs) if self.arc_term[a] == v]

    def arc_between(self, u: int, v: int) -> int | None:
        """Arc index from node u to node v, or None.  Arcs are simple in D(S)."""
        for a in range(self.n_arcs):
            if self.arc_init[a] == u and self.arc_term[a] == v:
                return a
        return None

    def successors(self, v: int) -> list[int]:
        return sorted({self.arc_term[a] for a in self.out_arcs(v)})


def build_graph(s: GramSet) -> DeBruijnGraph:
    """Construct D(S) with nodes in lexicographic order."""
    node_set = set()
    for g in s.grams:
        node_set.add(g[:-1])
        node_set.add(g[1:])
    nodes = tuple(sorted(node_set))
    index = {v: i for i, v in enumerate(nodes)}
    arc_init = tuple(index[g[:-1]] for g in s.grams)
    arc_term = tuple(index[g[1:]] for g in s.grams)
    g = DeBruijnGraph(s, nodes, arc_init, arc_term)
    object.__setattr__(g, "_node_index", index)
    return g


def incidence(graph: DeBruijnGraph) -> list[list[int]]:
    """Incidence matrix B(D): +1 at the terminal node, -1 at the initial node.

    Loop arcs give all-zero columns; for a connected graph the integer
    rank is |V| - 1.
    """
    m = [[0] * graph.n_arcs for _ in range(graph.n_nodes)]
    for a in range(graph.n_arcs):
        u, v = graph.arc_init[a], graph.arc_term[a]
        if u != v:
            m[u][a] = -1
            m[v][a] = 1
    return m


def integer_rank(matrix) -> int:
    """Exact rank of an integer matrix via fraction-free elimination."""
    rows = [list(r) for r in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    prev_pivot = 1
    row = 0
    for col in range(ncols):
        pivot_row = next((r for r in range(row, len(rows)) if rows[r][col] != 0), None)
        if pivot_row is None:
            continue
        rows[row], rows[pivot_row] = rows[pivot_row], rows[row]
        pivot = rows[row][col]
        for r in range(row + 1, len(rows)):
            # Bareiss update keeps all entries integral.
            factor = rows[r][col]
            for c in range(col, ncols):
                rows[r][c] = (rows[r][c] * pivot - factor * rows[row][c]) // prev_pivot
        prev_pivot = pivot
        row += 1
        rank += 1
        if row == len(rows):
            break
    return rank


def strongly_connected_components(graph: DeBruijnGraph) -> list[list[int]]:
    """Tarjan SCCs, returned as sorted node-index lists, sorted by least node."""
    n = graph.n_nodes
    succ = [graph.successors(v) for v in range(n)]
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        # Iterative Tarjan: (node, iterator position) frames.
        work = [(root, 0)]
        while work:
            v, pi = work.pop()
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            for i in range(pi, len(succ[v])):
                w = succ[v][i]
                if index[w] == -1:
                    work.append((v, i + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    comps.sort(key=min)
    return comps


def degrees(graph: DeBruijnGraph):
    """(in-degree, out-degree) per node, loops counting once on each side."""
    indeg = [0] * graph.n_nodes
    outdeg = [0] * graph.n_nodes
    for a in range(graph.n_arcs):
        outdeg[graph.arc_init[a]] += 1
        indeg[graph.arc_term[a]] += 1
    return indeg, outdeg


def is_eulerian(graph: DeBruijnGraph) -> bool:
    """True iff the graph is strongly connected and balanced at every node."""
    indeg, outdeg = degrees(graph)
    if any(i != o for i, o in zip(indeg, outdeg)):
        return False
    return len(strongly_connected_components(graph)) == 1


def eulerian_walk(graph: DeBruijnGraph, multiplicities) -> list[int]:
    """Deterministic Eulerian walk over a multigraph on D(S), as node indices.

    `multiplicities[a]` is how many times arc a must be traversed.  The
    multiset must be balanced (closed walk) or have exactly one node of
    out-surplus 1 and one of in-surplus 1 (open walk).  Tie-break: keep
    a stack seeded with the start node; while the top node has unused
    out-arcs, follow the arc with the lexicographically smallest
    terminal node; otherwise pop to the output; finally reverse.  For a
    closed walk the start is the smallest node with positive out-degree;
    for an open walk it is the out-surplus node.
    """
    mult = list(multiplicities)
    if len(mult) != graph.n_arcs:
        raise ValueError("one multiplicity per arc required")
    if any(m < 0 for m in mult):
        raise ValueError("negative multiplicity")
    total = sum(mult)
    if total == 0:
        raise ValueError("empty multigraph")

    surplus = [0] * graph.n_nodes
    for a, m in enumerate(mult):
        if m:
            surplus[graph.arc_init[a]] += m
            surplus[graph.arc_term[a]] -= m
    sources = [v for v in range(graph.n_nodes) if surplus[v] > 0]
    sinks = [v for v in range(graph.n_nodes) if surplus[v] < 0]
    if not sources and not sinks:
        start = min(
            graph.arc_init[a] for a, m in enumerate(mult) if m
        )
    elif (
        len(sources) == 1
        and len(sinks) == 1
        and surplus[sources[0]] == 1
        and surplus[sinks[0]] == -1
    ):
        start = sources[0]
    else:
        raise ValueError("arc multiset is neither balanced nor a single open walk")

    # Out-arcs per node sorted by terminal node; distinct out-arcs of a node
    # always have distinct terminals, so the order is well defined.
    out: list[list[int]] = [[] for _ in range(graph.n_nodes)]
    for a, m in enumerate(mult):
        if m:
            out[graph.arc_init[a]].append(a)
    for v in range(graph.n_nodes):
        out[v].sort(key=lambda a: graph.nodes[graph.arc_term[a]])
    cursor = [0] * graph.n_nodes

    stack = [start]
    output: list[int] = []
    remaining = mult[:]
    while stack:
        v = stack[-1]
        arcs = out[v]
        i = cursor[v]
        while i < len(arcs) and remaining[arcs[i]] == 0:
            i += 1
        cursor[v] = i
        if i < len(arcs):
            a = arcs[i]
            remaining[a] -= 1
            stack.append(graph.arc_term[a])
        else:
            output.append(stack.pop())
    if any(remaining):
        raise ValueError("arc support is disconnected; no single walk covers it")
    output.reverse()
    return output


def eulerian_circuit(graph: DeBruijnGraph, multiplicities) -> list[int]:
    """Eulerian circuit (closed walk) of the multigraph; see eulerian_walk."""
    walk = eulerian_walk(graph, multiplicities)
    if walk[0] != walk[-1]:
        raise ValueError("multigraph is not balanced; no closed walk exists")
    return walk


def hamiltonian_cycle(
    graph: DeBruijnGraph, budget: int = DEFAULT_HAMILTONIAN_BUDGET
) -> list[int]:
    """A cycle visiting every node exactly once, as node indices.

    For the full gram set the cycle is read off an Eulerian circuit of
    the order-(l-1) graph, whose arcs are exactly our nodes.  Otherwise
    a bounded backtracking search runs; exhausting the search space
    raises NotHamiltonianError while hitting the step budget raises
    SearchBudgetExceeded (the two are distinguishable on purpose).
    The cycle is rotated to start at the smallest node.
    """
    s = graph.gram_set
    if s.is_full():
        if s.ell == 2:
            return list(range(graph.n_nodes))
        sub = build_graph(full_gram_set(s.q, s.ell - 1))
        walk = eulerian_walk(sub, [1] * sub.n_arcs)
        cycle = []
        for u, v in zip(walk, walk[1:]):
            gram = sub.nodes[u] + (sub.nodes[v][-1],)
            cycle.append(graph.node_index(gram))
        return _rotate_min(cycle)

    n = graph.n_nodes
    succ = [graph.successors(v) for v in range(n)]
    visited = [False] * n
    path = [0]
    visited[0] = True
    steps = 0

    def extend() -> bool:
        nonlocal steps
        v = path[-1]
        if len(path) == n:
            return 0 in succ[v]
        for w in succ[v]:
            if visited[w]:
                continue
            steps += 1
            if steps > budget:
                raise SearchBudgetExceeded(f"hamiltonian search exceeded {budget} steps")
            visited[w] = True
            path.append(w)
            if extend():
                return True
            path.pop()
            visited[w] = False
        return False

    if len(strongly_connected_components(graph)) != 1:
        raise NotHamiltonianError("graph is not strongly connected")
    if extend():
        return _rotate_min(path)
    raise NotHamiltonianError("no Hamiltonian cycle exists")


def _rotate_min(cycle: list[int]) -> list[int]:
    k = cycle.index(min(cycle))
    return cycle[k:] + cycle[:k]


def simple_cycle_lengths(graph: DeBruijnGraph) -> set[int]:
    """Lengths of all simple cycles (closed walks with distinct nodes).

    DFS rooted at each node v, restricted to nodes >= v so every cycle
    is found exactly once from its smallest node.  Stops early once all
    lengths 1..|V| have been seen.
    """
    n = graph.n_nodes
    succ = [graph.successors(v) for v in range(n)]
    lengths: set[int] = set()

    for root in range(n):
        if len(lengths) == n:
            break
        on_path = [False] * n
        on_path[root] = True

        def dfs(v: int, depth: int):
            for w in succ[v]:
                if w == root:
                    lengths.add(depth)
                elif w > root and not on_path[w]:
                    on_path[w] = True
                    dfs(w, depth + 1)
                    on_path[w] = False

        dfs(root, 1)
    return lengths


def cycle_length_lcm(graph: DeBruijnGraph):
    """(lcm of simple cycle lengths, sorted lengths).  Needs strong connectivity."""
    if len(strongly_connected_components(graph)) != 1:
        raise ValueError("cycle lcm requires a strongly connected graph")
    lengths = simple_cycle_lengths(graph)
    return math.lcm(*lengths), sorted(lengths)


@dataclass(frozen=True)
class AuxiliaryDag:
    """Condensation of D(S) with the growth-exponent weighting.

    One node per strongly connected component plus a source and a sink.
    Source arcs weigh 0; arcs from component i weigh delta_i + 1 when
    they cross to another component and delta_i when they enter the
    sink, where delta_i = |S_i| - |V_i| counts intra-component arcs
    against nodes.
    """

    components: tuple[tuple[int, ...], ...]
    deltas: tuple[int, ...]
    cross_arcs: tuple[tuple[int, int], ...]


def auxiliary_dag(graph: DeBruijnGraph) -> AuxiliaryDag:
    comps = strongly_connected_components(graph)
    comp_of = {}
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    members = [set(c) for c in comps]
    deltas = []
    for i, comp in enumerate(comps):
        internal = sum(
            1
            for a in range(graph.n_arcs)
            if graph.arc_init[a] in members[i] and graph.arc_term[a] in members[i]
        )
        deltas.append(internal - len(comp))
    cross = sorted(
        {
            (comp_of[graph.arc_init[a]], comp_of[graph.arc_term[a]])
            for a in range(graph.n_arcs)
            if comp_of[graph.arc_init[a]] != comp_of[graph.arc_term[a]]
        }
    )
    return AuxiliaryDag(tuple(tuple(c) for c in comps), tuple(deltas), tuple(cross))


def growth_exponent(graph: DeBruijnGraph):
    """(Delta, Delta_bar): longest source-to-sink weight in the auxiliary
    DAG, and the largest per-component delta.

    Delta is the polynomial growth degree of the number of achievable
    profiles; Delta_bar is the closed-word analogue.
    """
    dag = auxiliary_dag(graph)
    k = len(dag.components)
    succ = [[] for _ in range(k)]
    indeg = [0] * k
    for i, j in dag.cross_arcs:
        succ[i].append(j)
        indeg[j] += 1
    # Longest path ending at each component, seeded from the source (weight 0).
    order = [i for i in range(k) if indeg[i] == 0]
    best = [0] * k
    seen = []
    while order:
        i = order.pop()
        seen.append(i)
        for j in succ[i]:
            w = best[i] + dag.deltas[i] + 1
            if w > best[j]:
                best[j] = w
            indeg[j] -= 1
            if indeg[j] == 0:
                order.append(j)
    if len(seen) != k:
        raise RuntimeError("condensation was not acyclic")
    delta = max(best[i] + dag.deltas[i] for i in range(k))
    delta_bar = max(dag.deltas)
    return delta, delta_bar
