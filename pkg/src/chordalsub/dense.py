"""Dense-regime constructions of large chordal subgraphs.

Three builders, all emitting certified results:

* clique_union_baseline: partition the whole vertex set into k-cliques and
  keep their edges (disjoint unions of cliques are chordal).
* dense_lower_construct: partition a small head segment V into k-cliques,
  then let every remaining vertex contribute all of its edges into the
  single clique it hits hardest; ordering V before U certifies chordality.
* path_power_construct: grow disjoint k-th powers of paths block by block
  through bipartite perfect matchings, freezing chains whose matching round
  fails so the output is always a union of powers of paths.

The asymptotic clique-size formulas are negative at desk scale, so the
constructors clamp to k >= 2 and, when no explicit k is given, pick the k
maximizing a predicted edge count from exact binomial order statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bitset import bits_list, iter_bits, mask_of
from .certify import ConstructionResult, certify_construction
from .chordal import is_clique
from .cliques import find_clique_of_size
from .graph import Graph
from .matching import hopcroft_karp
from .theory import dense_params, k_minus, k_plus, log_recip

DEFAULT_CLIQUE_BUDGET = 60_000


@dataclass
class CliquePartition:
    """Disjoint cliques (size >= 2) extracted from a vertex set, plus leftovers."""

    cliques: list[list[int]]
    leftover: list[int]
    target_k: int
    nodes_explored: int = 0
    final_k: int = 0

    @property
    def covered(self) -> int:
        return sum(len(c) for c in self.cliques)


def clique_partition(g: Graph, vertices, k: int, budget: int = DEFAULT_CLIQUE_BUDGET) -> CliquePartition:
    """Greedy extraction of k-cliques by branch-and-bound under a per-extraction
    node budget; k degrades by one whenever no k-clique is found, and
    uncoverable vertices end in the leftover."""
    if k < 1:
        raise ValueError("target clique size must be >= 1")
    mask = mask_of(vertices)
    cliques: list[list[int]] = []
    total_nodes = 0
    cur_k = k
    while cur_k >= 2:
        avail = mask.bit_count()
        if avail < cur_k:
            cur_k = avail
            continue
        found, nodes = find_clique_of_size(g, mask, cur_k, budget)
        total_nodes += nodes
        if found is None:
            cur_k -= 1
            continue
        members = bits_list(found)
        if not is_clique(g, found):  # bit-intersection sanity on every extraction
            raise AssertionError(f"clique search returned a non-clique {members}")
        cliques.append(members)
        mask &= ~found
    return CliquePartition(cliques, bits_list(mask), k, total_nodes, max(cur_k, 2))


# ---------------------------------------------------------------------------
# Desk-scale default for the partition clique size
# ---------------------------------------------------------------------------


def _binom_cdf_table(k: int, p: float) -> list[float]:
    cdf = []
    acc = 0.0
    q = 1.0 - p
    term = q**k
    for s in range(k + 1):
        if s > 0:
            term = term * (k - s + 1) / s * (p / q)
        acc += term
        cdf.append(min(acc, 1.0))
    return cdf


def expected_best_attachment(k: int, p: float, n_cliques: int) -> float:
    """E[max of n_cliques iid Bin(k,p)]: the expected degree a fresh vertex
    sends into its best clique."""
    if n_cliques <= 0 or k <= 0:
        return 0.0
    cdf = _binom_cdf_table(k, p)
    return sum(1.0 - cdf[s - 1] ** n_cliques for s in range(1, k + 1))


def auto_partition_k(n_v: int, p: float, n_total: int) -> int:
    """Pick the clique size maximizing predicted edges of the split
    construction: head-clique edges plus expected best-clique attachment."""
    hi = max(3, k_plus(max(n_v, 2), p) + 2)
    best_k, best_val = 2, -1.0
    for k in range(2, min(hi, n_v) + 1):
        n_cl = n_v // k
        if n_cl == 0:
            break
        val = n_cl * k * (k - 1) / 2 + (n_total - n_v) * expected_best_attachment(k, p, n_cl)
        if val > best_val:
            best_val, best_k = val, k
    return best_k


def _estimate_p(g: Graph) -> float:
    if g.n < 2:
        return 0.5
    dens = 2.0 * g.m / (g.n * (g.n - 1))
    return min(max(dens, 1e-9), 1.0 - 1e-9)


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------


def clique_union_baseline(
    g: Graph, k: int, budget: int = DEFAULT_CLIQUE_BUDGET
) -> ConstructionResult:
    """Partition all vertices into cliques of target size k and keep exactly
    the within-clique edges: a disjoint union of cliques, trivially chordal."""
    if k < 2:
        raise ValueError("baseline needs k >= 2")
    part = clique_partition(g, range(g.n), k, budget)
    edges = []
    for cl in part.cliques:
        for i, u in enumerate(cl):
            for v in cl[i + 1 :]:
                edges.append((u, v))
    stats = {
        "k": k,
        "cliquesFound": len(part.cliques),
        "coveredVertices": part.covered,
        "leftover": len(part.leftover),
        "searchNodes": part.nodes_explored,
    }
    return certify_construction(
        g, edges, "clique-union", order=list(range(g.n)),
        phase_stats=stats, params={"k": k})


def dense_lower_construct(
    g: Graph,
    p: float | None = None,
    k: int | None = None,
    v_fraction: float | None = None,
    budget: int = DEFAULT_CLIQUE_BUDGET,
) -> ConstructionResult:
    """Head/tail split construction: clique-partition the head V, then attach
    every tail vertex to the single clique it hits hardest, keeping all those
    edges.  Ordering V before U makes every earlier neighborhood a clique."""
    n = g.n
    if n < 8:
        raise ValueError("split construction needs n >= 8")
    if p is not None and not 0.0 < p < 1.0:
        raise ValueError(f"p={p} outside (0,1)")
    p_eff = p if p is not None else _estimate_p(g)
    if v_fraction is not None:
        if not 0.0 < v_fraction <= 1.0:
            raise ValueError("v_fraction must be in (0,1]")
        n_v = int(v_fraction * n)
    else:
        n_v = int(n / math.log(n))
    n_v = max(2, min(n_v, n))
    raw_km = k_minus(n_v, p_eff)
    k_req = k if k is not None else auto_partition_k(n_v, p_eff, n)
    k_res = max(2, raw_km, k_req)
    part = clique_partition(g, range(n_v), k_res, budget)

    edges = []
    clique_masks = []
    for cl in part.cliques:
        cm = mask_of(cl)
        clique_masks.append(cm)
        for i, u in enumerate(cl):
            for v in cl[i + 1 :]:
                edges.append((u, v))

    attach = []
    unattached = 0
    for u in range(n_v, n):
        row = g.rows[u]
        best_c, best_j = 0, -1
        for j, cm in enumerate(clique_masks):
            c = (row & cm).bit_count()
            if c > best_c:  # ties keep the lowest clique index
                best_c, best_j = c, j
        if best_j < 0:
            unattached += 1
            continue
        for w in iter_bits(row & clique_masks[best_j]):
            edges.append((w, u))
        attach.append(best_c)

    degenerate = None
    if n >= 3:
        try:
            degenerate = dense_params(n, p_eff).s_lower_degenerate
        except (ValueError, RuntimeError):
            degenerate = None
    stats = {
        "vSize": n_v,
        "k": k_res,
        "kMinusRaw": raw_km,
        "cliquesFound": len(part.cliques),
        "coverage": part.covered / max(1, n_v),
        "leftover": len(part.leftover),
        "attachMean": sum(attach) / len(attach) if attach else 0.0,
        "attachMin": min(attach) if attach else 0,
        "unattached": unattached,
        "bestEffortAttachment": degenerate,
        "searchNodes": part.nodes_explored,
    }
    return certify_construction(
        g, edges, "dense-lb", order=list(range(n)), phase_stats=stats,
        params={"p": p_eff, "k": k_res, "vFraction": v_fraction})


def path_power_construct(
    g: Graph,
    m: int | None = None,
    k: int | None = None,
    p: float | None = None,
) -> ConstructionResult:
    """Disjoint k-th powers of m-vertex paths via round-by-round bipartite
    matchings; imperfect rounds freeze their unmatched chains, so the output
    is a union of powers of paths of various lengths, always chordal."""
    n = g.n
    p_eff = p if p is not None else _estimate_p(g)
    clamped = False
    if m is None:
        m = max(2, int(math.log(n) ** 2)) if n >= 2 else 2
    if k is None:
        raw = math.floor(log_recip(n, p_eff) - 4.0 * log_recip(math.log(n), p_eff)) if n >= 3 else 1
        clamped = raw < 1
        k = max(1, raw)
    if m < 2:
        raise ValueError("path length m must be >= 2")
    if k < 1:
        raise ValueError("power k must be >= 1")
    if m > n:
        raise ValueError(f"m={m} exceeds n={n}")
    npr = n // m
    chains = [[j] for j in range(npr)]
    alive = list(range(npr))
    rounds = []
    for bi in range(1, m):
        if not alive:
            break
        lo = bi * npr
        block_mask = ((1 << npr) - 1) << lo
        adj = []
        for j in alive:
            window = chains[j][-min(len(chains[j]), k):]
            cand = block_mask
            for v in window:
                cand &= g.rows[v]
            adj.append([b - lo for b in iter_bits(cand)])
        size, match_l, _ = hopcroft_karp(adj, npr)
        perfect = size == len(alive)
        nxt = []
        for idx, j in enumerate(alive):
            v = match_l[idx]
            if v >= 0:
                chains[j].append(lo + v)
                nxt.append(j)
        rounds.append({"block": bi, "alive": len(alive), "matched": size, "perfect": perfect})
        alive = nxt

    edges = []
    used = 0
    for ch in chains:
        for t in range(1, len(ch)):
            for s in range(1, min(t, k) + 1):
                a, b = ch[t - s], ch[t]
                edges.append((a, b) if a < b else (b, a))
        used |= mask_of(ch)
    order = [v for ch in chains for v in ch]
    order += [v for v in range(n) if not used >> v & 1]

    all_perfect = len(rounds) == m - 1 and all(r["perfect"] for r in rounds)
    full_target = npr * sum(min(d, k) for d in range(1, m))
    stats = {
        "m": m,
        "k": k,
        "kClamped": clamped,
        "chains": [list(ch) for ch in chains],
        "rounds": rounds,
        "allMatchingsPerfect": all_perfect,
        "frozenChains": npr - len(alive),
        "fullChainEdgeTarget": full_target,
    }
    return certify_construction(
        g, edges, "path-power", order=order, phase_stats=stats,
        params={"m": m, "k": k, "p": p_eff})
