"""Exact clique search over bitset adjacency.

Branch-and-bound with pivoting for "find a clique of exactly size k"
(the partition workhorse) and a Tomita-style coloring-bounded search for
the exact maximum clique.  All searches are deterministic: candidates are
scanned in ascending vertex id and pivots break ties toward smaller ids.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bitset import iter_bits, lowest_bit
from .graph import Graph


def find_clique_of_size(g: Graph, candidates: int, k: int, budget: int = 100_000):
    """Search for a k-clique inside the candidate bitset.

    Returns (clique_mask | None, nodes_used).  None either proves absence or
    reports budget exhaustion; callers degrade k in both cases.
    """
    if k <= 0:
        return 0, 0
    rows = g.rows
    nodes = 0

    def rec(size: int, r_mask: int, p_mask: int):
        nonlocal nodes
        if size == k:
            return r_mask
        if nodes >= budget:
            return None
        nodes += 1
        if size + p_mask.bit_count() < k:
            return None
        # pivot on the candidate with the largest degree inside P
        best_u, best_cnt = -1, -1
        rest = p_mask
        while rest:
            u = lowest_bit(rest)
            rest &= rest - 1
            c = (p_mask & rows[u]).bit_count()
            if c > best_cnt:
                best_cnt, best_u = c, u
        branch = p_mask & ~rows[best_u]
        while branch:
            v = lowest_bit(branch)
            branch &= branch - 1
            found = rec(size + 1, r_mask | (1 << v), p_mask & rows[v])
            if found is not None:
                return found
            p_mask &= ~(1 << v)
            if size + p_mask.bit_count() < k or nodes >= budget:
                return None
        return None

    found = rec(0, 0, candidates)
    return found, nodes


@dataclass(frozen=True)
class CliqueResult:
    size: int
    vertices: list[int]
    proved: bool
    nodes_explored: int


def max_clique(g: Graph, budget: int = 5_000_000) -> CliqueResult:
    """Exact maximum clique via pivotless expansion with a greedy coloring bound."""
    rows = g.rows
    best_mask = 0
    best_size = 0
    nodes = 0
    proved = True

    def expand(size: int, r_mask: int, p_mask: int):
        nonlocal best_mask, best_size, nodes, proved
        if nodes >= budget:
            proved = False
            return
        nodes += 1
        if size > best_size:
            best_size, best_mask = size, r_mask
        if not p_mask or size + p_mask.bit_count() <= best_size:
            return
        # greedy coloring of P; color number is an upper bound on clique growth
        order: list[tuple[int, int]] = []
        uncolored = p_mask
        color = 0
        while uncolored:
            color += 1
            avail = uncolored
            while avail:
                v = lowest_bit(avail)
                order.append((v, color))
                uncolored &= ~(1 << v)
                avail &= ~(rows[v] | (1 << v))
                avail &= uncolored
        for v, c in reversed(order):
            if size + c <= best_size:
                return
            expand(size + 1, r_mask | (1 << v), p_mask & rows[v])
            p_mask &= ~(1 << v)
            if nodes >= budget:
                proved = False
                return

    expand(0, 0, (1 << g.n) - 1)
    return CliqueResult(best_size, list(iter_bits(best_mask)), proved, nodes)
