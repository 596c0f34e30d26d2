"""Shared construction result type and the always-on certification gate.

Every construction routes its output through certify_construction: the edge
set is validated against the host graph, the claimed (or MCS-derived)
ordering is checked as a PEO of the subgraph, and the outdegree-based edge
bound is asserted.  A construction that fails any of these raises instead
of returning, so an emitted result is always a certified chordal subgraph.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .chordal import ChordalWitness, is_peo, mcs_order
from .graph import EdgeSubgraph, Graph


class CertificationError(RuntimeError):
    """A construction produced an uncertifiable result (always a bug)."""


@dataclass
class ConstructionResult:
    method: str
    subgraph: EdgeSubgraph
    witness: ChordalWitness
    achieved_edges: int
    phase_stats: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)

    @property
    def graph(self) -> Graph:
        return self.subgraph.parent


def certify_construction(
    host: Graph,
    edges,
    method: str,
    order: list[int] | None = None,
    phase_stats: dict | None = None,
    params: dict | None = None,
) -> ConstructionResult:
    """Validate and package a construction; raises CertificationError on any failure."""
    try:
        sub = EdgeSubgraph.from_edges(host, edges)
    except ValueError as exc:
        raise CertificationError(f"{method}: edge set not contained in host graph: {exc}") from exc
    h = sub.to_graph()
    if order is None:
        order = mcs_order(h)
    res = is_peo(h, order)
    if not res.ok:
        raise CertificationError(f"{method}: witness order is not a PEO, violation {res.violation}")
    witness = res.witness
    achieved = sub.edge_count
    if witness.edge_count != achieved:
        raise CertificationError(
            f"{method}: witness outdegrees sum to {witness.edge_count}, expected {achieved}")
    stats = dict(phase_stats or {})
    # outdegree edge bound: |E(H)| <= n * (omega_hat - 1) with omega_hat the
    # largest clique the witness exhibits (exact for the subgraph itself)
    omega_hat = 1 + max(witness.outdeg, default=0)
    stats.setdefault("omegaHatSubgraph", omega_hat)
    if achieved > host.n * max(0, omega_hat - 1):
        raise CertificationError(f"{method}: edge count exceeds outdegree bound")
    return ConstructionResult(
        method=method,
        subgraph=sub,
        witness=witness,
        achieved_edges=achieved,
        phase_stats=stats,
        params=dict(params or {}),
    )
