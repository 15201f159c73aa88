"""Layered-graph gadget algebra.

A group-layered graph has d layers; each layer holds w groups of two vertices,
called the `a` and `b` side.  Consecutive layers are joined by a perfect
matching that respects groups: every matching factors into a permutation on
groups plus one crossing bit per group, which is exactly how we encode it
(``MatchingSpec``).  On top of that sit the composite gadgets: XOR matchings,
perm matchings, blocks (perm | xor | perm-inverse), multi-blocks, Perm-XOR
matchings, segments, and multi-segments.

Two derived queries matter downstream: ``group_map(g, j)`` — the last-layer
group reachable from first-layer group j — and ``parity(g, j)`` — the XOR of
crossing bits picked up along group j's path, which decides whether the a/b
strands stay parallel (0) or swap sides (1).

Indices are 1-based to match the construction's arithmetic; the canonical
integer vertex ids used in edge lists and files are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

Perm = tuple[int, ...]  # 1-based images: perm[j-1] is the image of group j
Bits = tuple[int, ...]
Edge = tuple[int, int]

SIDE_A = 0
SIDE_B = 1


def identity_perm(w: int) -> Perm:
    return tuple(range(1, w + 1))


def invert_perm(perm: Perm) -> Perm:
    inv = [0] * len(perm)
    for j, image in enumerate(perm, start=1):
        inv[image - 1] = j
    return tuple(inv)


def _check_perm(perm: Sequence[int]) -> Perm:
    w = len(perm)
    if sorted(perm) != list(range(1, w + 1)):
        raise ValueError(f"not a permutation of 1..{w}: {perm!r}")
    return tuple(perm)


def _check_bits(bits: Sequence[int]) -> Bits:
    if any(b not in (0, 1) for b in bits):
        raise ValueError(f"cross vector must be 0/1: {bits!r}")
    return tuple(bits)


@dataclass(frozen=True)
class VertexRef:
    """A vertex named by (layer, group, side); all 1-based except side."""

    layer: int
    group: int
    side: int  # SIDE_A or SIDE_B

    def to_id(self, width: int) -> int:
        return (self.layer - 1) * 2 * width + 2 * (self.group - 1) + self.side


def vertex_id(layer: int, group: int, side: int, width: int) -> int:
    return (layer - 1) * 2 * width + 2 * (group - 1) + side


def vertex_from_id(vid: int, width: int) -> VertexRef:
    layer, rest = divmod(vid, 2 * width)
    group, side = divmod(rest, 2)
    return VertexRef(layer + 1, group + 1, side)


@dataclass(frozen=True)
class MatchingSpec:
    """One inter-layer perfect matching: group permutation + per-group cross bit.

    Group j's two vertices both map into group pi(j); cross[j-1] == 0 keeps
    a->a, b->b, cross[j-1] == 1 swaps a->b, b->a.
    """

    pi: Perm
    cross: Bits

    def __post_init__(self) -> None:
        _check_perm(self.pi)
        _check_bits(self.cross)
        if len(self.pi) != len(self.cross):
            raise ValueError("pi and cross lengths differ")

    @property
    def width(self) -> int:
        return len(self.pi)


@dataclass(frozen=True)
class GroupLayeredGraph:
    width: int
    matchings: tuple[MatchingSpec, ...]

    def __post_init__(self) -> None:
        for m in self.matchings:
            if m.width != self.width:
                raise ValueError("matching width differs from graph width")

    @property
    def depth(self) -> int:
        return len(self.matchings) + 1

    @property
    def n_vertices(self) -> int:
        return 2 * self.width * self.depth


def make_xor_matching(x: Sequence[int]) -> MatchingSpec:
    """Matching that keeps every group in place and crosses group j iff x_j=1."""
    bits = _check_bits(x)
    return MatchingSpec(identity_perm(len(bits)), bits)


def make_perm_matching(sigma: Sequence[int]) -> MatchingSpec:
    """Matching that routes group j to group sigma(j) without crossing."""
    perm = _check_perm(sigma)
    return MatchingSpec(perm, (0,) * len(perm))


def graph_of(*matchings: MatchingSpec) -> GroupLayeredGraph:
    if not matchings:
        raise ValueError("need at least one matching")
    return GroupLayeredGraph(matchings[0].width, tuple(matchings))


def concat(g1: GroupLayeredGraph, g2: GroupLayeredGraph) -> GroupLayeredGraph:
    """Glue g2 onto g1, identifying g1's last layer with g2's first."""
    if g1.width != g2.width:
        raise ValueError(f"width mismatch: {g1.width} vs {g2.width}")
    return GroupLayeredGraph(g1.width, g1.matchings + g2.matchings)


def make_block(x: Sequence[int], sigma: Sequence[int]) -> GroupLayeredGraph:
    """Depth-4 gadget perm(sigma) | xor(x) | perm(sigma^-1).

    Routes every group back to itself; the crossing picked up by start group j
    is x_{sigma(j)}.
    """
    perm = _check_perm(sigma)
    bits = _check_bits(x)
    if len(perm) != len(bits):
        raise ValueError("x and sigma lengths differ")
    return graph_of(
        make_perm_matching(perm),
        make_xor_matching(bits),
        make_perm_matching(invert_perm(perm)),
    )


def make_multi_block(
    X: Sequence[Sequence[int]], Sigma: Sequence[Sequence[int]]
) -> GroupLayeredGraph:
    """t concatenated blocks; depth 3t+1; parity(j) = XOR_i x^i_{sigma^i(j)}."""
    if len(X) != len(Sigma) or not X:
        raise ValueError("need equally many cross vectors and permutations, t >= 1")
    g = make_block(X[0], Sigma[0])
    for x, sigma in zip(X[1:], Sigma[1:]):
        g = concat(g, make_block(x, sigma))
    return g


def make_perm_xor(sigma: Sequence[int], x: Sequence[int]) -> GroupLayeredGraph:
    """Depth-3 gadget perm(sigma) | xor(x): group j lands on sigma(j), crossing x_{sigma(j)}."""
    perm = _check_perm(sigma)
    bits = _check_bits(x)
    if len(perm) != len(bits):
        raise ValueError("x and sigma lengths differ")
    return graph_of(make_perm_matching(perm), make_xor_matching(bits))


def make_segment(
    X_i: Sequence[Sequence[int]], Sigma_i: Sequence[Sequence[int]]
) -> GroupLayeredGraph:
    """t chained Perm-XOR gadgets closed by a plain perm matching; depth 2t+2.

    Gadget i >= 2 carries the group map g -> sigma^i((sigma^{i-1})^-1(g)) and the
    closer is (sigma^t)^-1, so the whole segment maps every group to itself and
    start group j accumulates crossing XOR_i x^i_{sigma^i(j)}.
    """
    if len(X_i) != len(Sigma_i) or not X_i:
        raise ValueError("need equally many cross vectors and permutations, t >= 1")
    perms = [_check_perm(s) for s in Sigma_i]
    g = make_perm_xor(perms[0], X_i[0])
    for i in range(1, len(perms)):
        prev_inv = invert_perm(perms[i - 1])
        step = tuple(perms[i][prev_inv[g - 1] - 1] for g in range(1, len(prev_inv) + 1))
        g = concat(g, make_perm_xor(step, X_i[i]))
    return concat(g, graph_of(make_perm_matching(invert_perm(perms[-1]))))


def make_multi_segment(
    X: Sequence[Sequence[Sequence[int]]], Sigma: Sequence[Sequence[Sequence[int]]]
) -> GroupLayeredGraph:
    """s concatenated segments of t gadgets each; depth (2t+1)s+1."""
    if len(X) != len(Sigma) or not X:
        raise ValueError("need equally many segment rows, s >= 1")
    t = len(X[0])
    if any(len(row) != t for row in X) or any(len(row) != t for row in Sigma):
        raise ValueError("ragged input: every segment needs exactly t gadgets")
    g = make_segment(X[0], Sigma[0])
    for xs, sigmas in zip(X[1:], Sigma[1:]):
        g = concat(g, make_segment(xs, sigmas))
    return g


def group_map(g: GroupLayeredGraph, j: int) -> int:
    """Last-layer group reachable from first-layer group j."""
    if not 1 <= j <= g.width:
        raise ValueError(f"group index {j} out of range 1..{g.width}")
    for m in g.matchings:
        j = m.pi[j - 1]
    return j


def parity(g: GroupLayeredGraph, j: int) -> int:
    """XOR of crossing bits along group j's path.

    0 means a^1_j leads to the a-side vertex of group_map(g, j) in the last
    layer (and b to b); 1 means the sides swap.
    """
    if not 1 <= j <= g.width:
        raise ValueError(f"group index {j} out of range 1..{g.width}")
    bit = 0
    for m in g.matchings:
        bit ^= m.cross[j - 1]
        j = m.pi[j - 1]
    return bit


def to_edges(g: GroupLayeredGraph) -> list[Edge]:
    """Expand to 2w(d-1) edges on canonical ids, ordered by layer, group, side."""
    w = g.width
    edges: list[Edge] = []
    for layer, m in enumerate(g.matchings, start=1):
        for j in range(1, w + 1):
            target = m.pi[j - 1]
            flip = m.cross[j - 1]
            for side in (SIDE_A, SIDE_B):
                u = vertex_id(layer, j, side, w)
                v = vertex_id(layer + 1, target, side ^ flip, w)
                edges.append((u, v))
    return edges


def check_layered_degrees(g: GroupLayeredGraph) -> None:
    """Assert the defining degree profile: 1 on boundary layers, 2 inside."""
    degree: dict[int, int] = {}
    for u, v in to_edges(g):
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1
    for vid in range(g.n_vertices):
        ref = vertex_from_id(vid, g.width)
        want = 1 if ref.layer in (1, g.depth) else 2
        if degree.get(vid, 0) != want:
            raise AssertionError(
                f"vertex {vid} (layer {ref.layer}) has degree {degree.get(vid, 0)}, wanted {want}"
            )
