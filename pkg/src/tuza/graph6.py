"""graph6 encoding and decoding.

Format: an ``N(n)`` header followed by the upper triangle of the adjacency
matrix in column order (``(0,1), (0,2), (1,2), (0,3), ...``), packed six
bits per byte with each byte offset by 63. An optional ``>>graph6<<``
prefix is accepted on input.
"""

from __future__ import annotations

from .graph import Graph, GraphError

_HEADER = ">>graph6<<"


class Graph6Error(GraphError):
    pass


def _encode_n(n: int) -> bytes:
    if n < 63:
        return bytes([n + 63])
    if n < 258048:
        return bytes([126, 63 + (n >> 12 & 63), 63 + (n >> 6 & 63), 63 + (n & 63)])
    if n < 68719476736:
        return bytes([126, 126] + [63 + (n >> s & 63) for s in (30, 24, 18, 12, 6, 0)])
    raise Graph6Error("graph too large for graph6")


def _decode_n(data: bytes) -> tuple[int, int]:
    if not data:
        raise Graph6Error("empty graph6 string")
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        chunk, off = data[2:8], 8
    else:
        chunk, off = data[1:4], 4
    if len(chunk) != (6 if off == 8 else 3):
        raise Graph6Error("truncated graph6 size header")
    n = 0
    for b in chunk:
        n = (n << 6) | (b - 63)
    return n, off


def encode(g: Graph) -> bytes:
    """Encode ``g`` as graph6 bytes (no header, no newline)."""
    bits = [1 if g.has_edge(i, j) else 0 for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    body = bytes(
        63 + (bits[k] << 5 | bits[k + 1] << 4 | bits[k + 2] << 3 | bits[k + 3] << 2 | bits[k + 4] << 1 | bits[k + 5])
        for k in range(0, len(bits), 6)
    )
    return _encode_n(g.n) + body


def decode(data: bytes | str) -> Graph:
    if isinstance(data, str):
        data = data.encode("ascii")
    data = data.strip()
    if data.startswith(_HEADER.encode()):
        data = data[len(_HEADER):]
    if any(b < 63 or b > 126 for b in data):
        raise Graph6Error("graph6 bytes must lie in 63..126")
    n, off = _decode_n(data)
    body = data[off:]
    need = n * (n - 1) // 2
    if len(body) != (need + 5) // 6:
        raise Graph6Error(f"graph6 body has {len(body)} bytes, expected {(need + 5) // 6} for n={n}")
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = body[k // 6] - 63
            if byte >> (5 - k % 6) & 1:
                edges.append((i, j))
            k += 1
    return Graph(n, edges)


def read_graph6_file(path: str) -> list[Graph]:
    with open(path, "rb") as fh:
        return [decode(line) for line in fh.read().splitlines() if line.strip()]


def write_graph6_file(path: str, graphs: list[Graph]) -> None:
    with open(path, "wb") as fh:
        for g in graphs:
            fh.write(encode(g) + b"\n")
