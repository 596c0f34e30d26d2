"""Chordal graph recognition, PEO certificates, and the tree/vector code.

A perfect elimination ordering (PEO) lists vertices so that each vertex's
earlier neighbors induce a clique; a graph is chordal iff it has one.
Connected chordal graphs are losslessly encoded as a rooted tree (each
vertex joined to its latest earlier neighbor) plus one binary vector per
non-root vertex selecting its remaining earlier neighbors inside the
parent's clique.  All operations here are pure functions of immutable
inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bitset import iter_bits, lowest_bit
from .graph import Graph, connected_components


class CorruptCodeError(ValueError):
    """Tree/vector code is internally inconsistent or fails certification."""


@dataclass
class ChordalWitness:
    """A certified PEO: order plus per-vertex outdegree and latest earlier neighbor."""

    order: list[int]
    outdeg: list[int]            # indexed by vertex id
    nu: list[int | None]         # latest earlier neighbor, None if outdeg 0

    @property
    def edge_count(self) -> int:
        return sum(self.outdeg)


@dataclass
class PeoResult:
    ok: bool
    witness: ChordalWitness | None = None
    # failing vertex plus a non-adjacent pair of its earlier neighbors
    violation: tuple[int, tuple[int, int]] | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class ChordalityResult:
    chordal: bool
    witness: ChordalWitness | None = None
    hole: list[int] | None = None  # an induced cycle of length >= 4

    def __bool__(self) -> bool:
        return self.chordal


def is_clique(g: Graph, mask: int) -> bool:
    """True iff the vertex bitset `mask` induces a clique in g."""
    for w in iter_bits(mask):
        if (mask & ~(1 << w)) & ~g.rows[w]:
            return False
    return True


# ---------------------------------------------------------------------------
# Maximum cardinality search and PEO certification
# ---------------------------------------------------------------------------


def mcs_order(g: Graph) -> list[int]:
    """Maximum cardinality search; the returned order (earliest-eliminated
    first) is a PEO iff g is chordal.  Ties break to the smallest vertex id."""
    n = g.n
    if n == 0:
        return []
    if n <= 512:
        return _mcs_small(g)
    return _mcs_large(g)


def _mcs_small(g: Graph) -> list[int]:
    # the visit sequence itself is the earliest-first PEO: each vertex's
    # previously-visited neighbors form a clique when g is chordal
    n = g.n
    weight = [0] * n
    alive = (1 << n) - 1
    visit = []
    for _ in range(n):
        best, best_w = -1, -1
        rest = alive
        while rest:
            v = lowest_bit(rest)
            rest &= rest - 1
            if weight[v] > best_w:
                best, best_w = v, weight[v]
        visit.append(best)
        alive &= ~(1 << best)
        for w in iter_bits(g.rows[best] & alive):
            weight[w] += 1
    return visit


def _mcs_large(g: Graph) -> list[int]:
    n = g.n
    adj = g.adjacency_lists()
    weight = np.zeros(n, dtype=np.int64)
    visit = []
    for _ in range(n):
        v = int(np.argmax(weight))  # first max = smallest id on ties
        visit.append(v)
        weight[v] = -1
        for w in adj[v]:
            if weight[w] >= 0:
                weight[w] += 1
    return visit


def is_peo(g: Graph, order) -> PeoResult:
    """Check whether `order` (earliest first) is a perfect elimination ordering.

    On success carries a ChordalWitness; on failure reports the first vertex
    whose earlier neighborhood is not a clique, with a non-adjacent pair.
    """
    n = g.n
    order = [int(v) for v in order]  # tolerate numpy integers
    if sorted(order) != list(range(n)):
        raise ValueError("order is not a permutation of the vertex set")
    pos = [0] * n
    for r, v in enumerate(order):
        pos[v] = r
    outdeg = [0] * n
    nu: list[int | None] = [None] * n
    earlier = 0
    for v in order:
        s = g.rows[v] & earlier
        d = s.bit_count()
        outdeg[v] = d
        if d:
            best_rank, best = -1, -1
            for w in iter_bits(s):
                if pos[w] > best_rank:
                    best_rank, best = pos[w], w
            nu[v] = best
            rest = s & ~(1 << best)
            bad = rest & ~g.rows[best]
            if bad:
                return PeoResult(False, None, (v, (lowest_bit(bad), best)))
        earlier |= 1 << v
    return PeoResult(True, ChordalWitness(order, outdeg, nu), None)


def is_chordal(g: Graph) -> ChordalityResult:
    """Chordality test with a certificate: a PEO witness, or an induced
    cycle of length >= 4 extracted from the failed PEO check."""
    order = mcs_order(g)
    res = is_peo(g, order)
    if res.ok:
        return ChordalityResult(True, res.witness, None)
    v, (a, b) = res.violation
    hole = _hole_from_triple(g, v, a, b)
    if hole is None:
        hole = _find_any_hole(g)
    return ChordalityResult(False, None, hole)


def _hole_from_triple(g: Graph, v: int, a: int, b: int) -> list[int] | None:
    """Induced cycle through v from non-adjacent a,b in N(v): v plus a
    shortest a-b path avoiding N[v] (shortest paths are induced)."""
    allowed = ~(g.rows[v] | (1 << v)) | (1 << a) | (1 << b)
    prev = {a: -1}
    frontier = [a]
    while frontier:
        nxt = []
        for x in frontier:
            for y in iter_bits(g.rows[x] & allowed):
                if y not in prev:
                    prev[y] = x
                    if y == b:
                        path = [b]
                        while path[-1] != a:
                            path.append(prev[path[-1]])
                        return [v] + path[::-1]
                    nxt.append(y)
        frontier = nxt
    return None


def _find_any_hole(g: Graph) -> list[int] | None:
    for v in range(g.n):
        nbrs = list(iter_bits(g.rows[v]))
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1 :]:
                if not g.has_edge(a, b):
                    hole = _hole_from_triple(g, v, a, b)
                    if hole is not None:
                        return hole
    return None


def peo_tree(g: Graph, order) -> list[int]:
    """Parent array of the elimination tree: parent[v] = latest earlier
    neighbor of v, -1 for roots.  A forest; a tree iff g is connected."""
    res = is_peo(g, order)
    if not res.ok:
        raise ValueError(f"order is not a perfect elimination ordering: violation {res.violation}")
    return [p if p is not None else -1 for p in res.witness.nu]


# ---------------------------------------------------------------------------
# Tree + vector code for connected chordal graphs
# ---------------------------------------------------------------------------


@dataclass
class PeoCode:
    """Lossless code: rank-space elimination tree plus per-vertex bit vectors.

    Vertices are elimination ranks 0..n-1 (parent[r] < r, parent[0] = -1);
    vectors[r] selects, inside the parent's clique minus the parent, the
    remaining earlier neighbors of rank r, coordinates ordered by increasing
    rank.  `labels` maps ranks back to the encoded graph's vertex ids.
    """

    n: int
    parent: list[int]
    vectors: list[list[int]]
    labels: list[int] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.labels is None:
            self.labels = list(range(self.n))

    @property
    def roots(self) -> list[int]:
        return [r for r in range(self.n) if self.parent[r] == -1]

    def __eq__(self, other):
        if not isinstance(other, PeoCode):
            return NotImplemented
        return (self.n, self.parent, self.vectors, self.labels) == (
            other.n, other.parent, other.vectors, other.labels)


def encode_chordal(g: Graph, order) -> PeoCode:
    """Encode a connected chordal graph under the given PEO."""
    res = is_peo(g, order)
    if not res.ok:
        raise ValueError(f"order is not a perfect elimination ordering: violation {res.violation}")
    if g.n == 0:
        raise ValueError("cannot encode the empty graph")
    if len(connected_components(g)) != 1:
        raise ValueError("encode requires a connected graph; encode components separately")
    order = res.witness.order
    pos = [0] * g.n
    for r, v in enumerate(order):
        pos[v] = r
    # cliques K_v = {v} + earlier neighbors of v
    clique_mask = [0] * g.n
    earlier = 0
    for v in order:
        clique_mask[v] = (g.rows[v] & earlier) | (1 << v)
        earlier |= 1 << v
    parent = [-1] * g.n
    vectors: list[list[int]] = [[] for _ in range(g.n)]
    for r in range(1, g.n):
        v = order[r]
        nu = res.witness.nu[v]
        parent[r] = pos[nu]
        members = sorted(iter_bits(clique_mask[nu] & ~(1 << nu)), key=lambda w: pos[w])
        vectors[r] = [1 if g.rows[v] >> w & 1 else 0 for w in members]
    return PeoCode(g.n, parent, vectors, labels=order)


def decode_chordal(code: PeoCode) -> Graph:
    """Rebuild the graph from its code; inverse of encode_chordal.

    Ranks are processed left to right, so each parent clique is fully known
    before any vector that indexes into it: vector lengths are recomputable
    and any mismatch signals a corrupt code.
    """
    n = code.n
    if n == 0:
        raise CorruptCodeError("empty code")
    if len(code.parent) != n or len(code.vectors) != n:
        raise CorruptCodeError("parent/vector arrays must have length n")
    if code.parent[0] != -1 or code.vectors[0]:
        raise CorruptCodeError("rank 0 must be the root with an empty vector")
    rows = [0] * n
    clique_mask = [0] * n
    clique_mask[0] = 1
    for r in range(1, n):
        pa = code.parent[r]
        if not 0 <= pa < r:
            raise CorruptCodeError(f"parent of rank {r} is {pa}, not an earlier rank")
        members = list(iter_bits(clique_mask[pa] & ~(1 << pa)))  # ascending rank
        vec = code.vectors[r]
        if len(vec) != len(members):
            raise CorruptCodeError(
                f"rank {r}: vector length {len(vec)} != clique size {len(members)}")
        nbrs = 1 << pa
        for bit, w in zip(vec, members):
            if bit not in (0, 1):
                raise CorruptCodeError(f"rank {r}: vector entries must be 0/1")
            if bit:
                nbrs |= 1 << w
        for w in iter_bits(nbrs):
            rows[r] |= 1 << w
            rows[w] |= 1 << r
        clique_mask[r] = nbrs | (1 << r)
    decoded = Graph(n, rows)
    check = is_peo(decoded, list(range(n)))
    if not check.ok or len(connected_components(decoded)) != 1:
        raise CorruptCodeError("decoded graph fails PEO certification")
    if code.labels != list(range(n)):
        decoded = Graph.from_edges(
            n, [(code.labels[u], code.labels[v]) for u, v in decoded.edges()])
    return decoded


def write_peocode(code: PeoCode, path) -> None:
    """Text format: "n root", the parent array, then "rank k bits" per non-root.

    Only rank-canonical codes (identity labels) are serializable; the format
    does not carry a relabeling.
    """
    if code.labels != list(range(code.n)):
        raise ValueError("only rank-canonical codes (identity labels) can be written")
    roots = code.roots
    if len(roots) != 1:
        raise ValueError("code must have exactly one root")
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{code.n} {roots[0]}\n")
        fh.write(" ".join(str(p) for p in code.parent) + "\n")
        for r in range(code.n):
            if code.parent[r] == -1:
                continue
            bits = "".join(str(b) for b in code.vectors[r])
            if bits:
                fh.write(f"{r} {len(bits)} {bits}\n")
            else:
                fh.write(f"{r} 0\n")


def read_peocode(path) -> PeoCode:
    with open(path, "r", encoding="ascii") as fh:
        n_str, root_str = fh.readline().split()
        n, root = int(n_str), int(root_str)
        parent = [int(t) for t in fh.readline().split()]
        if len(parent) != n:
            raise CorruptCodeError(f"parent array has {len(parent)} entries, expected {n}")
        if parent[root] != -1:
            raise CorruptCodeError("declared root has a parent")
        vectors: list[list[int]] = [[] for _ in range(n)]
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            r, k = int(parts[0]), int(parts[1])
            if k == 0:
                if len(parts) != 2:
                    raise CorruptCodeError(f"rank {r}: unexpected bits for k=0")
                vectors[r] = []
                continue
            if len(parts) != 3 or len(parts[2]) != k:
                raise CorruptCodeError(f"rank {r}: expected {k} bits")
            vectors[r] = [int(c) for c in parts[2]]
    return PeoCode(n, parent, vectors)


# ---------------------------------------------------------------------------
# The incremental-clique family (= 2-connected chordal graphs)
# ---------------------------------------------------------------------------


def h_family_member(g: Graph, method: str = "auto") -> bool:
    """Membership in the family built from an edge by repeatedly adding a
    vertex adjacent to >= 2 earlier vertices that form a clique.

    Two routes: definition-driven ordering search (small n) and the
    structural equivalence (2-connected and chordal); they agree.
    """
    if g.n < 2:
        raise ValueError("membership is defined for graphs on >= 2 vertices")
    if method == "auto":
        method = "search" if g.n <= 9 else "equivalence"
    if method == "search":
        return _h_family_search(g)
    if method == "equivalence":
        return _h_family_equivalence(g)
    raise ValueError(f"unknown method {method!r}")


def _h_family_equivalence(g: Graph) -> bool:
    if g.m == 0:
        return False
    if len(connected_components(g)) != 1:
        return False
    from .graph import blocks  # local import: graph does not import chordal

    blks = blocks(g)
    if len(blks) != 1:
        return False
    return bool(is_chordal(g)) and len(blks[0].vertex_span) == g.n


def _h_family_search(g: Graph) -> bool:
    n = g.n
    full = (1 << n) - 1
    dead: set[int] = set()

    def extend(chosen: int) -> bool:
        if chosen == full:
            return True
        if chosen in dead:
            return False
        rest = full & ~chosen
        for v in iter_bits(rest):
            s = g.rows[v] & chosen
            if s.bit_count() >= 2 and is_clique(g, s):
                if extend(chosen | (1 << v)):
                    return True
        dead.add(chosen)
        return False

    if n == 2:
        return g.m == 1
    for u, v in g.edges():
        if extend((1 << u) | (1 << v)):
            return True
    return False


# ---------------------------------------------------------------------------
# Random connected chordal graphs (for round-trip and property testing)
# ---------------------------------------------------------------------------


def random_connected_chordal(n: int, rng: np.random.Generator, edge_bias: float = 0.5) -> Graph:
    """Sample a connected chordal graph by drawing a random code: random
    earlier parent per rank, then Bernoulli bits inside the parent clique."""
    if n < 1:
        raise ValueError("n must be >= 1")
    parent = [-1] + [int(rng.integers(0, r)) for r in range(1, n)]
    rows = [0] * n
    clique_mask = [0] * n
    clique_mask[0] = 1
    vectors: list[list[int]] = [[] for _ in range(n)]
    for r in range(1, n):
        pa = parent[r]
        members = list(iter_bits(clique_mask[pa] & ~(1 << pa)))
        vec = [1 if rng.random() < edge_bias else 0 for _ in members]
        vectors[r] = vec
        nbrs = 1 << pa
        for bit, w in zip(vec, members):
            if bit:
                nbrs |= 1 << w
        for w in iter_bits(nbrs):
            rows[r] |= 1 << w
            rows[w] |= 1 << r
        clique_mask[r] = nbrs | (1 << r)
    return Graph(n, rows)
