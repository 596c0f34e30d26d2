from itertools import combinations

import pytest

from chordalsub.chordal import is_chordal
from chordalsub.oracle import graph_from_edge_mask

PAIRS6 = list(combinations(range(6), 2))


@pytest.fixture(scope="session")
def six_vertex_graphs():
    """All 2^15 labeled graphs on 6 vertices with their chordality."""
    out = []
    for mask in range(1 << len(PAIRS6)):
        g = graph_from_edge_mask(6, PAIRS6, mask)
        out.append((g, is_chordal(g).chordal))
    return out
