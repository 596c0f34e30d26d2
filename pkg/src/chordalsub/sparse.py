"""Sparse-regime gadgets, 1-density machinery, and greedy tilings.

Gadgets are small certified-chordal pattern graphs: chains of glued path
squares, powers of paths, and the recursively defined prefix graphs whose
1-density creeps up to 1/alpha.  Densities are exact rationals throughout:
the defining recursion compares prefix densities against 1/alpha and a
float tie would corrupt it, so alpha enters as a Fraction.

The dispatcher picks a regime from alpha, greedily tiles with the regime's
gadget, and finishes with spanning-forest edges on uncovered vertices plus
bridges between components (a forest on the quotient, so chordality is
preserved; the final subgraph is re-certified regardless).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .bitset import bit_positions, bits_list, lowest_bit, mask_of
from .certify import ConstructionResult, certify_construction
from .chordal import is_peo
from .graph import Graph
from .theory import BoundaryAlphaError, k_alpha

MAX_TILE_VERTICES = 16
MAX_EXHAUSTIVE_VERTICES = 24
# per-root search cap: abandoning deep backtracks loses some tiles but
# bounds the sweep at O(n * budget); calibrated so desk-scale tilings keep
# most of their yield while a full sweep stays in the minutes
DEFAULT_TILE_BUDGET = 400


# ---------------------------------------------------------------------------
# Exact 1-density machinery
# ---------------------------------------------------------------------------


def _as_graph(obj) -> Graph:
    return obj.graph if isinstance(obj, Gadget) else obj


def one_density(f) -> Fraction:
    """|E| / (|V| - 1) as an exact rational."""
    g = _as_graph(f)
    if g.n < 2:
        raise ValueError("1-density needs at least 2 vertices")
    return Fraction(g.m, g.n - 1)


def _induced_edge_counts(g: Graph) -> list[int]:
    """counts[mask] = number of edges induced by the vertex bitset `mask`."""
    n = g.n
    rows = g.rows
    counts = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        rest = mask ^ low
        counts[mask] = counts[rest] + (rows[low.bit_length() - 1] & rest).bit_count()
    return counts


def max_one_density(f) -> tuple[Fraction, list[int]]:
    """Maximum 1-density over all subgraphs, with an attaining vertex set.

    Induced subgraphs dominate all subgraphs on the same vertex set, so the
    exhaustive scan over vertex subsets is exact.  Capped at 24 vertices.
    """
    g = _as_graph(f)
    if g.n < 2:
        raise ValueError("1-density needs at least 2 vertices")
    if g.n > MAX_EXHAUSTIVE_VERTICES:
        raise ValueError(f"exhaustive density scan capped at {MAX_EXHAUSTIVE_VERTICES} vertices")
    counts = _induced_edge_counts(g)
    best_num, best_den, best_mask = 0, 1, 3
    for mask in range(3, 1 << g.n):
        pc = mask.bit_count()
        if pc < 2:
            continue
        # compare counts/(pc-1) > best_num/best_den by cross multiplication
        if counts[mask] * best_den > best_num * (pc - 1):
            best_num, best_den, best_mask = counts[mask], pc - 1, mask
    return Fraction(best_num, best_den), bits_list(best_mask)


def is_strictly_1_balanced(f) -> bool:
    """True iff every proper subgraph has 1-density strictly below the whole.

    Checking proper induced subgraphs on proper vertex subsets suffices:
    dropping edges only lowers density, so spanning proper subgraphs are
    dominated by the whole graph and subset subgraphs by their induced form.
    """
    g = _as_graph(f)
    if g.n < 2:
        raise ValueError("1-density needs at least 2 vertices")
    if g.n > MAX_EXHAUSTIVE_VERTICES:
        raise ValueError(f"exhaustive balance scan capped at {MAX_EXHAUSTIVE_VERTICES} vertices")
    counts = _induced_edge_counts(g)
    m, den = g.m, g.n - 1
    full = (1 << g.n) - 1
    for mask in range(3, full):
        pc = mask.bit_count()
        if pc < 2:
            continue
        if counts[mask] * den >= m * (pc - 1):
            return False
    return True


# ---------------------------------------------------------------------------
# Gadgets
# ---------------------------------------------------------------------------


@dataclass
class Gadget:
    """A certified-chordal tiling pattern with exact density bookkeeping.

    strictly_balanced is tri-state: None until an exhaustive scan has run.
    """

    graph: Graph
    kind: str
    rho: Fraction
    rho_star: Fraction | None = None
    strictly_balanced: bool | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if not is_peo(self.graph, list(range(self.graph.n))).ok:
            raise AssertionError(f"gadget {self.kind} is not chordal under its natural order")
        if self.rho != Fraction(self.graph.m, self.graph.n - 1):
            raise AssertionError(f"gadget {self.kind} density mismatch")


def square_path_gadget(k: int, copies: int = 1) -> Gadget:
    """Chain of `copies` squares of a (k+2)-vertex path, glued end to end.

    Each copy contributes k+1 vertices beyond the shared endpoint and 2k+1
    edges; the maximum 1-density is (1+2k)/(1+k) regardless of the number
    of copies.
    """
    if k < 1 or copies < 1:
        raise ValueError("need k >= 1 and copies >= 1")
    n = copies * (k + 1) + 1
    edges = []
    for c in range(copies):
        base = c * (k + 1)
        for a in range(k + 2):
            for b in range(a + 1, min(a + 2, k + 1) + 1):
                edges.append((base + a, base + b))
    g = Graph.from_edges(n, edges)
    return Gadget(
        graph=g,
        kind="square-path",
        rho=Fraction(g.m, n - 1),
        rho_star=Fraction(1 + 2 * k, 1 + k),
        meta={"k": k, "copies": copies},
    )


def power_path_gadget(ell: int, length: int) -> Gadget:
    """ell-th power of a path on length+1 vertices: vertex i joins its
    min(i, ell) immediate predecessors."""
    if ell < 1 or length < 1:
        raise ValueError("need ell >= 1 and length >= 1")
    edges = []
    for i in range(1, length + 1):
        for s in range(1, min(i, ell) + 1):
            edges.append((i - s, i))
    g = Graph.from_edges(length + 1, edges)
    return Gadget(
        graph=g, kind="power-path", rho=Fraction(g.m, length),
        meta={"ell": ell, "length": length},
    )


# ---------------------------------------------------------------------------
# The density recursion and its prefix gadgets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensitySequence:
    alpha: Fraction
    ell: int                       # minimum integer > 1/alpha
    xs: list[int]                  # xs[i-1] = x_i
    rhos: list[Fraction]           # rhos[i-1] = (x_1+..+x_i)/i
    s_indices: list[int]           # strict records of rho above ell-1


def _as_alpha(alpha) -> Fraction:
    if isinstance(alpha, Fraction):
        return alpha
    if isinstance(alpha, (str, int)):
        return Fraction(alpha)
    raise TypeError(
        f"alpha must be an exact rational (Fraction, str, or int), got {type(alpha).__name__}; "
        "the density recursion is tie-sensitive and floats corrupt it")


def x_sequence(alpha, length: int) -> DensitySequence:
    """The defining recursion: after the forced prefix (1, 2, ..., ell),
    each x_i is the largest integer in [2, ell] keeping the prefix density
    strictly below 1/alpha.  Also records the strict density records above
    ell - 1 (the prefix lengths whose graphs are the tiling gadgets)."""
    a = _as_alpha(alpha)
    if a <= 0:
        raise ValueError("alpha must be positive")
    inv = 1 / a
    if inv.denominator == 1:
        raise ValueError(f"1/alpha = {inv} is an integer; use power-of-path gadgets instead")
    ell = math.floor(inv) + 1
    if length < ell:
        raise ValueError(f"length must be at least ell = {ell}")
    xs = list(range(1, ell + 1))
    total = ell * (ell + 1) // 2
    rhos = [Fraction(sum(xs[:i]), i) for i in range(1, ell + 1)]
    for i in range(ell + 1, length + 1):
        bound = inv * i - total  # x_i must be strictly below this
        x = (bound.numerator // bound.denominator)
        if Fraction(x) == bound:
            x -= 1
        x = min(ell, x)
        if x < 2:
            raise AssertionError(f"recursion broke at i={i}: no admissible x")
        xs.append(x)
        total += x
        rho = Fraction(total, i)
        if rho >= inv:
            raise AssertionError(f"density invariant violated at i={i}")
        rhos.append(rho)
    s_indices = []
    running = None
    for i, rho in enumerate(rhos, start=1):
        if rho > ell - 1 and (running is None or rho > running):
            s_indices.append(i)
        running = rho if running is None or rho > running else running
    return DensitySequence(a, ell, xs, rhos, s_indices)


def _records_up_to_size(alpha, max_vertices: int) -> list[int]:
    """All record prefix lengths s with s+1 <= max_vertices (final: records
    strictly increase, so once one overflows the cap the list is complete)."""
    length = max(4 * MAX_TILE_VERTICES, 64)
    while True:
        seq = x_sequence(alpha, length)
        over = [s for s in seq.s_indices if s + 1 > max_vertices]
        if over:
            return [s for s in seq.s_indices if s + 1 <= max_vertices]
        if length >= (1 << 16):
            return [s for s in seq.s_indices if s + 1 <= max_vertices]
        length *= 2


def build_Fj(alpha, j: int) -> Gadget:
    """The j-th record prefix graph: one root plus s_j vertices, vertex i
    adjacent to its x_i immediate predecessors.  Chordal with the natural
    order as a PEO; 1-density is exactly the record density rho_{s_j}."""
    if j < 1:
        raise ValueError("j must be >= 1")
    length = 64
    seq = x_sequence(alpha, length)
    while len(seq.s_indices) < j:
        length *= 2
        if length > (1 << 20):
            raise RuntimeError(f"could not locate record {j} within {length} terms")
        seq = x_sequence(alpha, length)
    s = seq.s_indices[j - 1]
    edges = []
    for i in range(1, s + 1):
        for t in range(1, seq.xs[i - 1] + 1):
            edges.append((i - t, i))
    g = Graph.from_edges(s + 1, edges)
    gadget = Gadget(
        graph=g, kind="fj", rho=Fraction(g.m, s),
        meta={"j": j, "s": s, "xs": seq.xs[:s], "alpha": str(seq.alpha)},
    )
    if gadget.rho != seq.rhos[s - 1]:
        raise AssertionError("prefix gadget density disagrees with the recursion")
    return gadget


# ---------------------------------------------------------------------------
# Greedy tiling
# ---------------------------------------------------------------------------


def _pattern_preds(pattern: Graph) -> list[list[int]]:
    preds = [[] for _ in range(pattern.n)]
    for t in range(1, pattern.n):
        preds[t] = [q for q in range(t) if pattern.has_edge(q, t)]
        if not preds[t]:
            raise ValueError("tiling patterns must be connected under their natural order")
    return preds


def _future_state_indices(preds: list[list[int]]) -> list[list[int]]:
    """For each level t, the earlier pattern indices that levels >= t still
    reference; the embedded images of these are the only history that can
    influence the remaining search (small for windowed patterns)."""
    pv = len(preds)
    out = []
    for t in range(pv):
        refs = {q for t2 in range(t, pv) for q in preds[t2] if q < t}
        out.append(sorted(refs))
    return out


def _tile_sweep(
    g: Graph, pattern: Graph, uncovered: int, per_tile_budget: int
) -> tuple[list[list[int]], int, int]:
    """Greedily embed disjoint copies of `pattern` into the uncovered set.

    Roots sweep vertex ids in ascending order; coverage only shrinks the
    candidate sets, so a failed root can never succeed later and is never
    retried.  Interior failures are memoized by (level, embedded vertices
    still visible to future levels) - a heuristic prune: such a failure is
    permanent unless it was caused by overlap with the then-partial tile,
    so the memo can only skip placements, never corrupt output.
    Backtracking is iterative with one candidate bitset cursor per level
    (the intersection of all embedded-neighbor rows with the uncovered
    set).  Returns (tiles, uncovered_after, exhausted_roots).
    """
    pv = pattern.n
    preds = _pattern_preds(pattern)
    state_idx = _future_state_indices(preds)
    # a level whose predecessor list extends the previous level's by one can
    # reuse that level's intersection (the clique-prefix hot path)
    extends_prev = [False] * pv
    for t in range(2, pv):
        extends_prev[t] = preds[t][:-1] == preds[t - 1]
    rows = g.rows
    nbytes = (g.n + 7) // 8
    tiles: list[list[int]] = []
    exhausted = 0
    phi = [0] * pv
    full: list[int] = [0] * pv          # pristine candidate bitset per level
    cand_list: list[list[int]] = [[] for _ in range(pv)]
    cand_pos: list[int] = [0] * pv
    state_key: list[tuple] = [()] * pv
    failed_states: set[tuple] = set()

    def child_candidates(t: int) -> int:
        if extends_prev[t]:
            return full[t - 1] & rows[phi[preds[t][-1]]]
        cand = uncovered
        for q in preds[t]:
            cand &= rows[phi[q]]
        return cand

    for root in range(g.n):
        if not uncovered >> root & 1:
            continue
        phi[0] = root
        in_tile = {root}
        nodes = 0
        t = 1
        full[1] = child_candidates(1)
        cand_list[1] = bit_positions(full[1], nbytes)
        cand_pos[1] = 0
        state_key[1] = (1, root)
        success = False
        while t >= 1:
            lst = cand_list[t]
            pos = cand_pos[t]
            moved = False
            while pos < len(lst):
                v = lst[pos]
                pos += 1
                nodes += 1
                if nodes > per_tile_budget:
                    pos = len(lst)
                    break
                if v in in_tile:
                    continue
                phi[t] = v
                if t + 1 == pv:
                    cand_pos[t] = pos
                    in_tile.add(v)
                    t += 1
                    success = True
                    moved = True
                    break
                key = (t + 1,) + tuple(phi[q] for q in state_idx[t + 1])
                if key in failed_states:
                    continue
                cand = child_candidates(t + 1)
                if not cand:
                    # dead child: record and keep scanning without descending
                    failed_states.add(key)
                    continue
                cand_pos[t] = pos  # save the cursor before descending
                in_tile.add(v)
                t += 1
                state_key[t] = key
                full[t] = cand
                cand_list[t] = bit_positions(cand, nbytes)
                cand_pos[t] = 0
                moved = True
                break
            if success or nodes > per_tile_budget:
                break
            if not moved:
                # level exhausted: its state can never succeed again
                failed_states.add(state_key[t])
                t -= 1
                if t >= 1:
                    in_tile.discard(phi[t])
        if success:
            tile = phi[:]
            for u, v in pattern.edges():  # structural per-tile verification
                if not g.has_edge(tile[u], tile[v]):
                    raise AssertionError("embedded tile is not a copy of the pattern")
            tiles.append(tile)
            uncovered &= ~mask_of(tile)
        elif nodes > per_tile_budget:
            exhausted += 1
    return tiles, uncovered, exhausted


def _tile_edges(pattern: Graph, tiles: list[list[int]]) -> list[tuple[int, int]]:
    edges = []
    pattern_edges = pattern.edges()
    for tile in tiles:
        for u, v in pattern_edges:
            a, b = tile[u], tile[v]
            edges.append((a, b) if a < b else (b, a))
    return edges


def greedy_tiling(
    g: Graph, gadget: Gadget, per_tile_budget: int = DEFAULT_TILE_BUDGET
) -> ConstructionResult:
    """Vertex-disjoint copies of the gadget found by backtracking embedding
    along its natural elimination order; output is certified chordal."""
    if gadget.graph.n > MAX_TILE_VERTICES:
        raise ValueError(f"tiling gadgets are capped at {MAX_TILE_VERTICES} vertices")
    tiles, uncovered, exhausted = _tile_sweep(
        g, gadget.graph, (1 << g.n) - 1, per_tile_budget)
    edges = _tile_edges(gadget.graph, tiles)
    order = [v for tile in tiles for v in tile]
    order += bits_list(uncovered)
    stats = {
        "tilesPlaced": len(tiles),
        "coveredVertices": len(tiles) * gadget.graph.n,
        "gadget": {"kind": gadget.kind, "vertices": gadget.graph.n,
                   "edges": gadget.graph.m, "rho": str(gadget.rho)},
        "budgetExhaustedRoots": exhausted,
        "tiles": tiles,
    }
    return certify_construction(
        g, edges, "tiling", order=order, phase_stats=stats,
        params={"gadget": gadget.kind, "perTileBudget": per_tile_budget})


# ---------------------------------------------------------------------------
# Regime dispatcher
# ---------------------------------------------------------------------------


def _forest_complete(g: Graph, tiles: list[list[int]], covered: int):
    """Spanning-forest edges over the tile quotient, by BFS with each tile
    contracted to a super-node: every newly reached vertex (or whole tile)
    attaches through exactly one edge, so no added edge closes a cycle and
    chordality of the union is preserved.  Edges between two uncovered
    vertices are reported as forest edges, edges touching a tile as
    bridges."""
    n = g.n
    rows = g.rows
    tile_mask: dict[int, int] = {}
    tile_members: dict[int, list[int]] = {}
    for tile in tiles:
        tm = mask_of(tile)
        for v in tile:
            tile_mask[v] = tm
            tile_members[v] = tile
    forest_edges: list[tuple[int, int]] = []
    bridge_edges: list[tuple[int, int]] = []
    visited = 0
    for start in range(n):
        if visited >> start & 1:
            continue
        queue = tile_members.get(start, [start])
        visited |= tile_mask.get(start, 1 << start)
        qi = 0
        while qi < len(queue):
            x = queue[qi]
            qi += 1
            fresh = rows[x] & ~visited
            while fresh:
                b = fresh & -fresh
                fresh ^= b
                w = b.bit_length() - 1
                if visited >> w & 1:
                    continue
                parent = lowest_bit(rows[w] & visited)
                edge = (parent, w) if parent < w else (w, parent)
                if covered >> parent & 1 or covered >> w & 1:
                    bridge_edges.append(edge)
                else:
                    forest_edges.append(edge)
                members = tile_members.get(w)
                if members is None:
                    visited |= 1 << w
                    queue.append(w)
                else:
                    visited |= tile_mask[w]
                    queue.extend(members)
    return forest_edges, bridge_edges


def sparse_construct(
    g: Graph,
    alpha,
    gadget: Gadget | None = None,
    per_tile_budget: int = DEFAULT_TILE_BUDGET,
) -> ConstructionResult:
    """Regime dispatcher for p = n^(-alpha+o(1)).

    alpha >= 2/3 (and the very sparse alpha >= 1): spanning forest.
    alpha in (1/2, 2/3): tile chains of glued path squares at k = k_alpha.
    alpha <= 1/2, 1/alpha an integer ell: tile ell-th powers of paths.
    alpha <= 1/2 otherwise: tile the largest record prefix gadget that fits.
    Tiling regimes finish with forest/bridge completion; everything is
    re-certified from scratch.
    """
    if isinstance(alpha, float):
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        if alpha <= 0.5:
            raise TypeError(
                "pass alpha as a Fraction or string for alpha <= 1/2; the gadget "
                "recursion is tie-sensitive and floats corrupt it")
        af: Fraction | float = alpha
    else:
        af = _as_alpha(alpha)
        if af <= 0:
            raise ValueError("alpha must be positive")

    regime: str
    chosen = gadget
    if af >= 1:
        regime = "forest-very-sparse"
    elif af > Fraction(2, 3):
        regime = "forest-giant"
    elif af > Fraction(1, 2):
        regime = "square-path-tiling"
        if chosen is None:
            ka = k_alpha(af)
            if ka < 1:  # alpha is exactly 2/3: the tiling regime is open there
                raise BoundaryAlphaError(
                    f"alpha={af} is the open boundary between the forest and tiling regimes")
            copies = max(1, (MAX_TILE_VERTICES - 1) // (ka + 1))
            chosen = square_path_gadget(ka, copies)
    else:
        inv = 1 / af
        if inv.denominator == 1:
            regime = "power-path-tiling"
            if chosen is None:
                ell = int(inv)
                chosen = power_path_gadget(ell, MAX_TILE_VERTICES - 1)
        else:
            regime = "prefix-gadget-tiling"
            if chosen is None:
                records = _records_up_to_size(af, MAX_TILE_VERTICES)
                if records:
                    chosen = build_Fj(af, len(records))
                else:
                    # no record prefix fits the tiling cap (1/alpha barely
                    # above an integer); fall back to the power-path gadget
                    # one level down, which is still chordal with density
                    # approaching ell - 1 < 1/alpha
                    ell = math.floor(inv)
                    chosen = power_path_gadget(ell, MAX_TILE_VERTICES - 1)
                    regime = "prefix-gadget-fallback"

    if chosen is not None and chosen.graph.n > MAX_TILE_VERTICES:
        raise ValueError(f"tiling gadgets are capped at {MAX_TILE_VERTICES} vertices")

    tiles: list[list[int]] = []
    exhausted = 0
    covered = 0
    if chosen is not None:
        tiles, uncovered, exhausted = _tile_sweep(
            g, chosen.graph, (1 << g.n) - 1, per_tile_budget)
        covered = ((1 << g.n) - 1) & ~uncovered
        edges = _tile_edges(chosen.graph, tiles)
    else:
        edges = []

    forest_edges, bridge_edges = _forest_complete(g, tiles, covered)
    edges.extend(forest_edges)
    edges.extend(bridge_edges)

    stats = {
        "regime": regime,
        "tilesPlaced": len(tiles),
        "tileEdges": len(tiles) * (chosen.graph.m if chosen else 0),
        "forestEdgesAdded": len(forest_edges),
        "bridgeEdgesAdded": len(bridge_edges),
        "budgetExhaustedRoots": exhausted,
        "tiles": tiles,
    }
    if chosen is not None:
        stats["gadget"] = {"kind": chosen.kind, "vertices": chosen.graph.n,
                           "edges": chosen.graph.m, "rho": str(chosen.rho)}
    return certify_construction(
        g, edges, "sparse", order=None, phase_stats=stats,
        params={"alpha": str(af), "regime": regime})
