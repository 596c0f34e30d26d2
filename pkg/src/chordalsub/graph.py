"""Undirected simple graphs on vertices 0..n-1 with bitset adjacency.

The adjacency matrix is stored as one Python int per vertex (bit j of
``rows[i]`` set iff {i,j} is an edge), so neighborhood intersections,
unions and popcounts run at O(n/64) word speed.  Graphs are immutable
after construction and safe to share between threads.

Also houses the seeded G(n,p) generator, decomposition primitives
(connected components, spanning forest, block decomposition) and the
edge-list file format.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bitset import BYTE_BITS, iter_bits, lowest_bit

MASK64 = (1 << 64) - 1

# Default guard against accidentally allocating huge bit matrices.
DEFAULT_MEMORY_CAP_BYTES = 2 << 30

# Dense per-pair Bernoulli sampling below this probability is wasteful;
# switch to geometric skipping over the pair ordering.
BERNOULLI_MIN_P = 0.01


class EdgeListError(ValueError):
    """Malformed edge-list file (bad header, duplicate, self-loop, range)."""


@dataclass(frozen=True)
class RngSeed:
    """Master seed plus substream id; identical pairs reproduce graphs bit-for-bit."""

    master: int = 0
    stream: int = 0


def mix64(*values: int) -> int:
    """Deterministically mix integers into one 64-bit value (splitmix64 chain)."""
    x = 0x9E3779B97F4A7C15
    for v in values:
        x = (x + (v & MASK64)) & MASK64
        x ^= x >> 30
        x = (x * 0xBF58476D1CE4E5B9) & MASK64
        x ^= x >> 27
        x = (x * 0x94D049BB133111EB) & MASK64
        x ^= x >> 31
    return x


def _as_seed(seed: RngSeed | int | tuple[int, int]) -> RngSeed:
    if isinstance(seed, RngSeed):
        return seed
    if isinstance(seed, tuple):
        return RngSeed(int(seed[0]), int(seed[1]))
    return RngSeed(int(seed), 0)


def derive_rng(seed: RngSeed | int | tuple[int, int]) -> np.random.Generator:
    """PCG64 generator for a (master, stream) pair; streams are independent."""
    s = _as_seed(seed)
    return np.random.Generator(np.random.PCG64(mix64(s.master, s.stream)))


class Graph:
    """Immutable simple graph; ``rows[v]`` is the neighbor bitset of v."""

    __slots__ = ("n", "rows", "m", "_edge_cache", "_packed_cache")

    def __init__(self, n: int, rows: list[int], m: int | None = None):
        self.n = n
        self.rows = rows
        if m is None:
            m = sum(r.bit_count() for r in rows) // 2
        self.m = m
        self._edge_cache = None
        self._packed_cache = None

    # -- constructors -------------------------------------------------

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, [0] * n, 0)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, [full ^ (1 << i) for i in range(n)], n * (n - 1) // 2)

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        rows = [0] * n
        m = 0
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if not rows[u] >> v & 1:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
                m += 1
        return cls(n, rows, m)

    # -- queries ------------------------------------------------------

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.rows[v]))

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in range(self.n):
            r = self.rows[u] >> (u + 1)
            v = u + 1
            while r:
                b = r & -r
                out.append((u, v + b.bit_length() - 1))
                r ^= b
        return out

    def edge_array(self) -> tuple[np.ndarray, np.ndarray]:
        """All edges (u < v) as two numpy int64 arrays, lexicographic order.

        Scans the packed adjacency bytes and decodes only nonzero bytes, so
        the cost is O(n^2/8) memory bandwidth plus O(m) decoding.  Cached.
        """
        if self._edge_cache is not None:
            return self._edge_cache
        n = self.n
        if n == 0 or self.m == 0:
            self._edge_cache = (np.empty(0, np.int64), np.empty(0, np.int64))
            return self._edge_cache
        nb = (n + 7) // 8
        us: list[int] = []
        vs: list[int] = []
        chunk = max(1, (1 << 25) // nb)
        for r0 in range(0, n, chunk):
            r1 = min(r0 + chunk, n)
            buf = b"".join(self.rows[i].to_bytes(nb, "little") for i in range(r0, r1))
            arr = np.frombuffer(buf, np.uint8)
            nz = np.flatnonzero(arr)
            if len(nz) == 0:
                continue
            vals = arr[nz].tolist()
            rows_idx = (nz // nb + r0).tolist()
            base_cols = ((nz % nb) * 8).tolist()
            for u, base, val in zip(rows_idx, base_cols, vals):
                for off in BYTE_BITS[val]:
                    v = base + off
                    if v > u:
                        us.append(u)
                        vs.append(v)
        self._edge_cache = (np.asarray(us, np.int64), np.asarray(vs, np.int64))
        return self._edge_cache

    def packed(self) -> np.ndarray:
        """Adjacency as an (n, ceil(n/8)) uint8 matrix (little bit order).

        O(1) single-bit membership tests: packed[u, v >> 3] >> (v & 7) & 1.
        Cached; treat as read-only.
        """
        if self._packed_cache is None:
            nb = (self.n + 7) // 8
            buf = b"".join(r.to_bytes(nb, "little") for r in self.rows)
            self._packed_cache = np.frombuffer(buf, np.uint8).reshape(self.n, nb)
        return self._packed_cache

    def adjacency_lists(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        u_arr, v_arr = self.edge_array()
        for u, v in zip(u_arr.tolist(), v_arr.tolist()):
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def induced(self, vertices: list[int]) -> "Graph":
        """Induced subgraph relabeled to 0..k-1 following the given order."""
        pos = {v: i for i, v in enumerate(vertices)}
        k = len(vertices)
        rows = [0] * k
        for i, v in enumerate(vertices):
            for w in iter_bits(self.rows[v]):
                j = pos.get(w)
                if j is not None:
                    rows[i] |= 1 << j
        return Graph(k, rows)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self):
        return hash((self.n, tuple(self.rows)))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class EdgeSubgraph:
    """A subset of a parent graph's edges (a witness-carrying subgraph)."""

    parent: Graph
    edges: frozenset[tuple[int, int]]
    vertex_span: frozenset[int] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        span = set()
        for u, v in self.edges:
            if u >= v:
                raise ValueError(f"edge ({u},{v}) not normalized u<v")
            if not self.parent.has_edge(u, v):
                raise ValueError(f"edge ({u},{v}) not present in parent graph")
            span.add(u)
            span.add(v)
        object.__setattr__(self, "vertex_span", frozenset(span))

    @classmethod
    def from_edges(cls, parent: Graph, edges) -> "EdgeSubgraph":
        return cls(parent, frozenset((u, v) if u < v else (v, u) for u, v in edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def to_graph(self) -> Graph:
        """Materialize as a Graph on the parent's full vertex set."""
        return Graph.from_edges(self.parent.n, self.edges)

    def compact(self) -> tuple[Graph, list[int]]:
        """Copy on the span relabeled to 0..k-1; returns (graph, labels)."""
        labels = sorted(self.vertex_span)
        pos = {v: i for i, v in enumerate(labels)}
        compacted = Graph.from_edges(len(labels), [(pos[u], pos[v]) for u, v in self.edges])
        return compacted, labels


# ---------------------------------------------------------------------------
# G(n, p) generation
# ---------------------------------------------------------------------------


def gen_gnp(
    n: int,
    p: float,
    seed: RngSeed | int | tuple[int, int],
    memory_cap_bytes: int = DEFAULT_MEMORY_CAP_BYTES,
) -> Graph:
    """Sample G(n,p): every unordered pair is an edge independently with prob p.

    Deterministic per (master, stream) seed.  Two sampling paths with the same
    distribution: exact per-pair Bernoulli for p >= 0.01, geometric skipping
    over the lexicographic pair ordering for smaller p.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0,1]")
    if n < 0:
        raise ValueError("n must be nonnegative")
    nbytes = n * ((n + 7) // 8)
    if nbytes > memory_cap_bytes:
        raise MemoryError(
            f"bit matrix for n={n} needs {nbytes} bytes > cap {memory_cap_bytes}"
        )
    if n <= 1 or p == 0.0:
        return Graph.empty(n)
    if p == 1.0:
        return Graph.complete(n)
    rng = derive_rng(seed)
    if p >= BERNOULLI_MIN_P:
        return _gen_dense(n, p, rng)
    return _gen_sparse(n, p, rng)


def _gen_dense(n: int, p: float, rng: np.random.Generator) -> Graph:
    nb = (n + 7) // 8
    packed = np.zeros((n, nb), np.uint8)
    row = np.zeros(n, dtype=bool)
    for i in range(n - 1):
        row[: i + 1] = False
        row[i + 1 :] = rng.random(n - 1 - i) < p
        packed[i] = np.packbits(row, bitorder="little")
    _mirror_upper(packed, n)
    rows = [int.from_bytes(packed[i].tobytes(), "little") for i in range(n)]
    return Graph(n, rows)


def _mirror_upper(packed: np.ndarray, n: int) -> None:
    """OR the bit-transpose into `packed`, symmetrizing an upper-triangular fill."""
    nb = packed.shape[1]
    # column blocks sized to keep the unpacked bool slab around 128 MB
    blk = max(8, min(8192, ((1 << 27) // max(n, 1)) // 8 * 8))
    for c0 in range(0, n, blk):
        c1 = min(c0 + blk, n)
        b0, b1 = c0 // 8, (c1 + 7) // 8
        cols = np.unpackbits(packed[:, b0:b1], axis=1, bitorder="little")
        cols = cols[:, : c1 - c0] if b0 * 8 == c0 else cols[:, c0 - b0 * 8 : c1 - b0 * 8]
        packed_t = np.packbits(np.ascontiguousarray(cols.T), axis=1, bitorder="little")
        packed[c0:c1, : packed_t.shape[1]] |= packed_t


def _gen_sparse(n: int, p: float, rng: np.random.Generator) -> Graph:
    total = n * (n - 1) // 2
    positions = []
    pos = -1
    batch = max(1024, int(total * p * 1.25) + 16)
    while pos < total - 1:
        steps = rng.geometric(p, size=batch)
        cum = pos + np.cumsum(steps, dtype=np.int64)
        take = cum[cum < total]
        positions.append(take)
        if len(take) < len(cum):
            break
        pos = int(cum[-1])
    r = np.concatenate(positions) if positions else np.empty(0, np.int64)
    u, v = _pair_from_index(n, r)
    nb = (n + 7) // 8
    if n * nb <= (1 << 29):
        packed = np.zeros((n, nb), np.uint8)
        for a, b in ((u, v), (v, u)):
            np.bitwise_or.at(packed, (a, b >> 3), (1 << (b & 7)).astype(np.uint8))
        rows = [int.from_bytes(packed[i].tobytes(), "little") for i in range(n)]
        return Graph(n, rows, len(r))
    rows = [0] * n
    for a, b in zip(u.tolist(), v.tolist()):
        rows[a] |= 1 << b
        rows[b] |= 1 << a
    return Graph(n, rows, len(r))


def _pair_from_index(n: int, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Invert the lexicographic pair ordering: index -> (i, j), i < j."""
    if len(r) == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    tw = 2 * n - 1
    i = np.floor((tw - np.sqrt(tw * tw - 8.0 * r)) / 2).astype(np.int64)
    i = np.clip(i, 0, n - 2)
    for _ in range(2):  # fix float-rounding off-by-ones
        off = i * (2 * n - i - 1) // 2
        i = np.where(off > r, i - 1, i)
        off = i * (2 * n - i - 1) // 2
        nxt = (i + 1) * (2 * n - i - 2) // 2
        i = np.where(nxt <= r, i + 1, i)
    off = i * (2 * n - i - 1) // 2
    j = r - off + i + 1
    return i, j


# ---------------------------------------------------------------------------
# Decomposition primitives
# ---------------------------------------------------------------------------


def connected_components(g: Graph) -> list[list[int]]:
    """Maximal connected vertex sets, each sorted, ordered by smallest member."""
    n = g.n
    comps = []
    unvisited = (1 << n) - 1
    while unvisited:
        start = lowest_bit(unvisited)
        comp = 1 << start
        frontier = comp
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= g.rows[v]
            frontier = nxt & unvisited & ~comp
            comp |= frontier
        unvisited &= ~comp
        comps.append(list(iter_bits(comp)))
    return comps


def spanning_forest(g: Graph) -> EdgeSubgraph:
    """A maximal spanning forest: acyclic, n - (#components) edges."""
    n = g.n
    edges = []
    unvisited = (1 << n) - 1
    while unvisited:
        start = lowest_bit(unvisited)
        visited = 1 << start
        unvisited ^= 1 << start
        frontier = 1 << start
        while frontier:
            nxt = 0
            for v in iter_bits(frontier):
                nxt |= g.rows[v]
            nxt &= unvisited
            for w in iter_bits(nxt):
                parent = lowest_bit(g.rows[w] & visited)
                edges.append((parent, w) if parent < w else (w, parent))
            visited |= nxt
            unvisited &= ~nxt
            frontier = nxt
    return EdgeSubgraph.from_edges(g, edges)


def blocks(g: Graph) -> list[EdgeSubgraph]:
    """Block decomposition: maximal 2-connected subgraphs plus bridge edges.

    Every edge lands in exactly one block; isolated vertices yield none.
    Iterative Hopcroft-Tarjan (explicit stack, safe for large graphs).
    """
    n = g.n
    adj = g.adjacency_lists()
    disc = [-1] * n
    low = [0] * n
    out: list[list[tuple[int, int]]] = []
    estack: list[tuple[int, int]] = []
    timer = 0
    for root in range(n):
        if disc[root] != -1 or not adj[root]:
            continue
        # stack entries: (vertex, parent, iterator index into adj[vertex])
        stack = [(root, -1, 0)]
        disc[root] = low[root] = timer
        timer += 1
        while stack:
            v, parent, idx = stack[-1]
            if idx < len(adj[v]):
                stack[-1] = (v, parent, idx + 1)
                w = adj[v][idx]
                if disc[w] == -1:
                    estack.append((v, w))
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, v, 0))
                elif w != parent and disc[w] < disc[v]:
                    estack.append((v, w))
                    low[v] = min(low[v], disc[w])
            else:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] >= disc[u]:
                        comp = []
                        while True:
                            e = estack.pop()
                            comp.append(e)
                            if e == (u, v):
                                break
                        out.append(comp)
    return [EdgeSubgraph.from_edges(g, comp) for comp in out]


# ---------------------------------------------------------------------------
# Edge-list files: "n m" header then one "u v" line per edge, 0 <= u < v < n.
# ---------------------------------------------------------------------------


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{g.n} {g.m}\n")
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


def read_edge_list(path) -> Graph:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise EdgeListError(f"bad header {header!r}, expected 'n m'")
        try:
            n, m = int(header[0]), int(header[1])
        except ValueError as exc:
            raise EdgeListError(f"non-integer header {header!r}") from exc
        if n < 0 or m < 0:
            raise EdgeListError(f"negative header values {header!r}")
        rows = [0] * n
        count = 0
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 2:
                raise EdgeListError(f"line {lineno}: expected 'u v', got {line!r}")
            u, v = int(parts[0]), int(parts[1])
            if u == v:
                raise EdgeListError(f"line {lineno}: self-loop {u}")
            if not (0 <= u < v < n):
                raise EdgeListError(f"line {lineno}: edge ({u},{v}) violates 0<=u<v<n={n}")
            if rows[u] >> v & 1:
                raise EdgeListError(f"line {lineno}: duplicate edge ({u},{v})")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
            count += 1
        if count != m:
            raise EdgeListError(f"header declared m={m} but found {count} edges")
    return Graph(n, rows, count)
