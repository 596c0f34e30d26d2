"""Small helpers for int-backed vertex bitsets.

Vertex sets are plain Python ints: bit v set means vertex v is in the set.
Arbitrary-precision ints give O(n/64) AND/OR/popcount, which is the hot
loop of clique search, PEO checks and tiling.
"""

import numpy as np

# bit offsets of the set bits of every byte value, for packed decoding
BYTE_BITS = [tuple(b for b in range(8) if v >> b & 1) for v in range(256)]


def iter_bits(x: int):
    """Yield the positions of set bits of x in increasing order."""
    while x:
        b = x & -x
        yield b.bit_length() - 1
        x ^= b


def bits_list(x: int) -> list[int]:
    return list(iter_bits(x))


def mask_of(vertices) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def lowest_bit(x: int) -> int:
    """Position of the least significant set bit (x must be nonzero)."""
    return (x & -x).bit_length() - 1


def highest_bit(x: int) -> int:
    """Position of the most significant set bit (x must be nonzero)."""
    return x.bit_length() - 1


def bit_positions(x: int, nbytes: int) -> list[int]:
    """Set-bit positions of x, fastest path chosen by population count.

    Wide, well-populated sets go through a numpy nonzero-byte scan (one
    O(nbytes) pass); narrow ones use the O(popcount * words) pop loop.
    `nbytes` must cover x.
    """
    pc = x.bit_count()
    if pc == 0:
        return []
    out: list[int] = []
    if pc >= 24 and nbytes >= 512:
        arr = np.frombuffer(x.to_bytes(nbytes, "little"), np.uint8)
        nz = np.flatnonzero(arr)
        for base, val in zip((nz.astype(np.int64) * 8).tolist(), arr[nz].tolist()):
            for off in BYTE_BITS[val]:
                out.append(base + off)
        return out
    while x:
        b = x & -x
        out.append(b.bit_length() - 1)
        x ^= b
    return out
