"""Exact exponential-time references: the trust anchor for constructions.

max_chordal_exact branches over edge subsets with three sound prunes:
a cardinality bound, an all-remaining shortcut (if everything still
undecided can be kept, take it), and a dead-hole prune (an induced cycle
of the included set none of whose chords is still available can never be
fixed).  max_clique_exact wraps the coloring-bounded clique search, and the
census enumerates every labeled graph up to a small n, cross-checking the
PEO-based recognizer against direct induced-cycle detection.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .bitset import lowest_bit
from .chordal import is_chordal, is_peo, mcs_order
from .cliques import CliqueResult, max_clique
from .graph import Graph, connected_components

DEFAULT_EDGE_CAP = 28
DEFAULT_NODE_BUDGET = 5_000_000


@dataclass
class OracleResult:
    optimum: int
    witness_edges: list[tuple[int, int]]
    nodes_explored: int
    proved: bool


def _chordal_quick(g: Graph) -> bool:
    return is_peo(g, mcs_order(g)).ok


def _core_numbers(g: Graph) -> list[int]:
    n = g.n
    deg = [g.degree(v) for v in range(n)]
    alive = set(range(n))
    core = [0] * n
    k = 0
    while alive:
        v = min(alive, key=lambda x: (deg[x], x))
        k = max(k, deg[v])
        core[v] = k
        alive.remove(v)
        for w in g.neighbors(v):
            if w in alive:
                deg[w] -= 1
    return core


def max_chordal_exact(
    g: Graph,
    budget: int | None = None,
    edge_cap: int = DEFAULT_EDGE_CAP,
) -> OracleResult:
    """Exact maximum number of edges over all chordal subgraphs.

    Sized for tiny instances (default cap m <= 28); pass an explicit node
    budget to run larger, at the cost of proved=False when it runs out.
    """
    if budget is None:
        if g.m > edge_cap:
            raise ValueError(
                f"m={g.m} exceeds the default cap {edge_cap}; pass an explicit budget")
        budget = DEFAULT_NODE_BUDGET
    n = g.n
    core = _core_numbers(g)
    edges = sorted(
        g.edges(),
        key=lambda e: (min(core[e[0]], core[e[1]]), max(core[e[0]], core[e[1]]), e))
    m_total = len(edges)

    # suffix unions: everything still undecided from position idx on
    suffix = [[0] * n for _ in range(m_total + 1)]
    for idx in range(m_total - 1, -1, -1):
        rows = suffix[idx + 1][:]
        u, v = edges[idx]
        rows[u] |= 1 << v
        rows[v] |= 1 << u
        suffix[idx] = rows

    # seed the incumbent with a spanning forest (optimum >= n - #components)
    from .graph import spanning_forest

    forest = spanning_forest(g)
    best_edges = sorted(forest.edges)
    best_count = len(best_edges)

    inc_rows = [0] * n
    inc_list: list[tuple[int, int]] = []
    nodes = 0
    proved = True

    def node(idx: int, inc_chordal: bool) -> None:
        nonlocal best_edges, best_count, nodes, proved
        if nodes >= budget:
            proved = False
            return
        nodes += 1
        rem = m_total - idx
        if len(inc_list) + rem <= best_count:
            return
        opt_rows = [inc_rows[v] | suffix[idx][v] for v in range(n)]
        opt = Graph(n, opt_rows)
        if _chordal_quick(opt):
            best_count = len(inc_list) + rem
            best_edges = sorted(inc_list + edges[idx:])
            return
        if idx == m_total:
            # all decided; the optimistic graph equals the included graph
            return
        if not inc_chordal:
            # dead-hole prune: a hole of the included graph with no chord
            # left anywhere among included-or-undecided edges is permanent
            hole = is_chordal(Graph(n, inc_rows[:])).hole
            if hole is not None:
                ring = set()
                L = len(hole)
                for i in range(L):
                    a, b = hole[i], hole[(i + 1) % L]
                    ring.add((a, b) if a < b else (b, a))
                has_chord = False
                for a, b in combinations(sorted(hole), 2):
                    if (a, b) not in ring and opt_rows[a] >> b & 1:
                        has_chord = True
                        break
                if not has_chord:
                    return
        u, v = edges[idx]
        # exclude branch first (low-degeneracy edges dropped early)
        node(idx + 1, inc_chordal)
        inc_rows[u] |= 1 << v
        inc_rows[v] |= 1 << u
        inc_list.append((u, v))
        child_chordal = inc_chordal and _chordal_quick(Graph(n, inc_rows[:]))
        node(idx + 1, child_chordal)
        inc_list.pop()
        inc_rows[u] &= ~(1 << v)
        inc_rows[v] &= ~(1 << u)

    node(0, True)
    check = Graph.from_edges(n, best_edges)
    if not _chordal_quick(check):
        raise AssertionError("oracle produced a non-chordal witness")
    return OracleResult(best_count, best_edges, nodes, proved)


def max_clique_exact(g: Graph, budget: int = DEFAULT_NODE_BUDGET) -> CliqueResult:
    """Exact maximum clique (budget exhaustion is flagged, not silent)."""
    return max_clique(g, budget)


# ---------------------------------------------------------------------------
# Brute-force chordality and the labeled census
# ---------------------------------------------------------------------------


def induced_cycle_exists(g: Graph, min_len: int = 4) -> bool:
    """Direct subset scan for an induced cycle of length >= min_len.

    Independent of the PEO machinery on purpose: this is the ground-truth
    side of the recognizer cross-check.  Exponential; capped at 16 vertices.
    """
    n = g.n
    if n > 16:
        raise ValueError("subset scan capped at 16 vertices")
    rows = g.rows
    for smask in range(1 << n):
        if smask.bit_count() < min_len:
            continue
        if _induced_is_cycle(rows, smask):
            return True
    return False


def _induced_is_cycle(rows: list[int], smask: int) -> bool:
    size = 0
    t = smask
    while t:
        v = lowest_bit(t)
        t &= t - 1
        if (rows[v] & smask).bit_count() != 2:
            return False
        size += 1
    start = lowest_bit(smask)
    prev, cur, steps = -1, start, 0
    while True:
        nb = rows[cur] & smask
        if prev >= 0:
            nb &= ~(1 << prev)
        prev, cur = cur, lowest_bit(nb)
        steps += 1
        if cur == start:
            break
    return steps == size


def graph_from_edge_mask(n: int, pairs: list[tuple[int, int]], mask: int) -> Graph:
    rows = [0] * n
    m = 0
    for idx, (u, v) in enumerate(pairs):
        if mask >> idx & 1:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
            m += 1
    return Graph(n, rows, m)


def all_graphs_chordality_census(n_max: int) -> list[dict]:
    """Enumerate every labeled graph on 1..n_max vertices, tabulating chordal
    counts; raises if the PEO recognizer ever disagrees with the direct
    induced-cycle scan."""
    if n_max > 7:
        raise ValueError("census capped at 7 vertices (2^21 labeled graphs)")
    table = []
    for n in range(1, n_max + 1):
        pairs = list(combinations(range(n), 2))
        chordal = 0
        total = 1 << len(pairs)
        for mask in range(total):
            g = graph_from_edge_mask(n, pairs, mask)
            fast = _chordal_quick(g)
            truth = not induced_cycle_exists(g)
            if fast != truth:
                raise RuntimeError(
                    f"recognizer disagreement at n={n}, edge mask {mask:#x}")
            chordal += fast
        table.append({"n": n, "graphs": total, "chordal": chordal})
    return table


def sandwich_bounds(g: Graph) -> tuple[int, int]:
    """(spanning-forest floor, outdegree-bound ceiling) for the exact optimum:
    n - #components <= optimum <= n * (omega - 1)."""
    floor = g.n - len(connected_components(g))
    omega = max_clique_exact(g).size
    return floor, g.n * max(0, omega - 1)
