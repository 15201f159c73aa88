"""Hard-instance distributions over layered cycle/path graphs.

The flagship sampler draws a hidden bit theta and a uniformly random witness
(cross vectors X, permutations Sigma) conditioned so that the first m groups
all accumulate crossing parity theta; auxiliary edges then close those groups
into cycles.  The result is a graph that is, component for component, either
n/2k cycles of length k (theta=0) or n/4k cycles of length 2k (theta=1), plus
n/2k camouflage paths — the gap a counting algorithm has to detect.

Also here: the hybrid interpolation family (first h groups parity 0, the rest
of the constrained groups parity 1), the fully unconditioned distribution used
as a reduction target, depth padding for k not of the exact gadget shape,
the weighted augmentation that turns the cycle gap into a spanning-tree gap,
and the batched multi-segment variant whose edges arrive in size-2 batches.

Conditioning is realized by forcing the last gadget: all permutations and all
earlier cross vectors are uniform, then the constrained coordinates of the
final cross vector are set to hit the target parities and the rest filled
uniformly.  The constrained coordinates are distinct, so this is exactly the
uniform conditional law (pinned by a chi-square test over the enumerated
support at small parameters).
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field, replace

from .gadgets import (
    Edge,
    GroupLayeredGraph,
    MatchingSpec,
    identity_perm,
    make_multi_block,
    make_multi_segment,
    to_edges,
    vertex_id,
)
from .seeds import Seed, as_seed

SIDE_A = 0
SIDE_B = 1


def canon(edge: Edge) -> Edge:
    u, v = edge
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Witness:
    """The random bits that define an instance's core graph.

    Block form: X and Sigma are length-t tuples (one cross vector / one
    permutation per block).  Segment form: s x t nested tuples, one entry per
    gadget of each segment.  The witness describes the unpadded core.
    """

    form: str  # "block" | "segment"
    X: tuple
    Sigma: tuple

    def __post_init__(self) -> None:
        if self.form not in ("block", "segment"):
            raise ValueError(f"unknown witness form {self.form!r}")

    def build(self) -> GroupLayeredGraph:
        if self.form == "block":
            return make_multi_block(self.X, self.Sigma)
        return make_multi_segment(self.X, self.Sigma)


@dataclass(frozen=True)
class HybridSpec:
    m: int
    t: int
    h: int

    def __post_init__(self) -> None:
        if not 0 <= self.h <= self.m:
            raise ValueError(f"cut index h={self.h} outside [0, {self.m}]")


@dataclass(frozen=True)
class NgcInstance:
    n: int
    k: int
    m: int
    t: int
    theta: int | None
    graph: GroupLayeredGraph
    witness: Witness
    auxiliary_edges: tuple[Edge, ...]
    weights: dict[Edge, int] | None = None
    batches: tuple[tuple[Edge, Edge], ...] | None = None
    extra_edges: tuple[Edge, ...] = ()
    s: int | None = None

    @property
    def width(self) -> int:
        return self.graph.width

    @property
    def form(self) -> str:
        return self.witness.form

    @property
    def core_k(self) -> int:
        if self.form == "block":
            return 3 * self.t + 1
        assert self.s is not None
        return (2 * self.t + 1) * self.s + 1

    def all_edges(self) -> list[Edge]:
        """Core edges, then auxiliary closers, then any augmentation edges."""
        return list(to_edges(self.graph)) + list(self.auxiliary_edges) + list(
            self.extra_edges
        )

    def edge_weight(self, edge: Edge) -> int:
        if self.weights is None:
            return 1
        return self.weights[canon(edge)]


def auxiliary_edges_for(k: int, m: int, width: int) -> tuple[Edge, ...]:
    """Closers (a^k_j, a^1_j), (b^k_j, b^1_j) for the first m groups."""
    out = []
    for j in range(1, m + 1):
        out.append((vertex_id(k, j, SIDE_A, width), vertex_id(1, j, SIDE_A, width)))
        out.append((vertex_id(k, j, SIDE_B, width), vertex_id(1, j, SIDE_B, width)))
    return tuple(out)


def _uniform_perm(rng: random.Random, w: int) -> tuple[int, ...]:
    return tuple(rng.sample(range(1, w + 1), w))


def _uniform_bits(rng: random.Random, w: int) -> list[int]:
    return [rng.randrange(2) for _ in range(w)]


def _sample_blocks_conditioned(
    w: int, t: int, targets: dict[int, int], rng: random.Random
) -> Witness:
    """Uniform (X, Sigma) given parity(j) = targets[j]; forces the last block."""
    Sigma = [_uniform_perm(rng, w) for _ in range(t)]
    X = [_uniform_bits(rng, w) for _ in range(t)]
    for j, bit in targets.items():
        acc = 0
        for i in range(t - 1):
            acc ^= X[i][Sigma[i][j - 1] - 1]
        X[t - 1][Sigma[t - 1][j - 1] - 1] = bit ^ acc
    return Witness("block", tuple(tuple(x) for x in X), tuple(Sigma))


def _sample_segments_conditioned(
    w: int, s: int, t: int, targets: dict[int, int], rng: random.Random
) -> Witness:
    """Segment-form analogue; forces gadget (s, t), the last of the last segment."""
    Sigma = [[_uniform_perm(rng, w) for _ in range(t)] for _ in range(s)]
    X = [[_uniform_bits(rng, w) for _ in range(t)] for _ in range(s)]
    for j, bit in targets.items():
        acc = 0
        for i in range(s):
            for ip in range(t):
                if (i, ip) == (s - 1, t - 1):
                    continue
                acc ^= X[i][ip][Sigma[i][ip][j - 1] - 1]
        X[s - 1][t - 1][Sigma[s - 1][t - 1][j - 1] - 1] = bit ^ acc
    return Witness(
        "segment",
        tuple(tuple(tuple(x) for x in row) for row in X),
        tuple(tuple(row) for row in Sigma),
    )


def sample_ngc(n: int, k: int, seed: Seed | int | None = None) -> NgcInstance:
    """Draw theta and a conditioned witness; attach auxiliary edges.

    Requires k = 3t+1 and n = 4km.  The first m of the 2m groups are
    conditioned to parity theta and closed into cycles; the remaining m stay
    open paths with unconstrained parity.
    """
    if k < 4 or (k - 1) % 3 != 0:
        raise ValueError(f"k={k} is not of the form 3t+1 with t >= 1")
    t = (k - 1) // 3
    if n % (4 * k) != 0 or n < 4 * k:
        raise ValueError(f"n={n} is not a positive multiple of 4k={4 * k}")
    m = n // (4 * k)
    w = 2 * m
    rng = as_seed(seed).rng()
    theta = rng.randrange(2)
    witness = _sample_blocks_conditioned(w, t, {j: theta for j in range(1, m + 1)}, rng)
    return NgcInstance(
        n=n,
        k=k,
        m=m,
        t=t,
        theta=theta,
        graph=witness.build(),
        witness=witness,
        auxiliary_edges=auxiliary_edges_for(k, m, w),
    )


def sample_hybrid(
    m: int,
    t: int,
    h: int,
    seed: Seed | int | None = None,
    with_auxiliary: bool = False,
) -> NgcInstance:
    """Interpolation step h: parity 0 for groups j <= h, parity 1 for h < j <= m.

    h=0 reproduces the theta=1 branch and h=m the theta=0 branch; intermediate
    h mixes them groupwise.  theta is recorded only at the endpoints.
    """
    spec = HybridSpec(m, t, h)
    w = 2 * m
    k = 3 * t + 1
    rng = as_seed(seed).rng()
    targets = {j: (0 if j <= spec.h else 1) for j in range(1, m + 1)}
    witness = _sample_blocks_conditioned(w, t, targets, rng)
    theta = 0 if h == m else (1 if h == 0 else None)
    return NgcInstance(
        n=4 * k * m,
        k=k,
        m=m,
        t=t,
        theta=theta,
        graph=witness.build(),
        witness=witness,
        auxiliary_edges=auxiliary_edges_for(k, m, w) if with_auxiliary else (),
    )


def sample_dhx(
    w: int, t: int, seed: Seed | int | None = None
) -> tuple[GroupLayeredGraph, Witness]:
    """Fully unconditioned multi-block draw: the reduction's target problem

    (decide the crossing parity of group 1).  No auxiliary edges, no theta.
    """
    if w < 1 or t < 1:
        raise ValueError("need w >= 1 and t >= 1")
    rng = as_seed(seed).rng()
    witness = Witness(
        "block",
        tuple(tuple(_uniform_bits(rng, w)) for _ in range(t)),
        tuple(_uniform_perm(rng, w) for _ in range(t)),
    )
    return witness.build(), witness


def sample_dhx_segment(
    w: int, s: int, t: int, seed: Seed | int | None = None
) -> tuple[GroupLayeredGraph, Witness]:
    """Unconditioned multi-segment draw, the batched reduction's target."""
    if w < 1 or s < 1 or t < 1:
        raise ValueError("need w, s, t >= 1")
    rng = as_seed(seed).rng()
    witness = Witness(
        "segment",
        tuple(tuple(tuple(_uniform_bits(rng, w)) for _ in range(t)) for _ in range(s)),
        tuple(tuple(_uniform_perm(rng, w) for _ in range(t)) for _ in range(s)),
    )
    return witness.build(), witness


def _rebatch(instance: NgcInstance) -> tuple[tuple[Edge, Edge], ...]:
    """Pair consecutive core edges (one group-transition each) plus a/b closers."""
    core = to_edges(instance.graph)
    assert len(core) % 2 == 0
    batches = [(core[i], core[i + 1]) for i in range(0, len(core), 2)]
    aux = instance.auxiliary_edges
    batches.extend((aux[i], aux[i + 1]) for i in range(0, len(aux), 2))
    return tuple(batches)


def sample_ngc_batched(
    n: int, k: int, s: int, t: int, seed: Seed | int | None = None
) -> NgcInstance:
    """Segment-form sampler whose edges come pre-grouped into size-2 batches.

    Requires k = (2t+1)s+1 and n = 4km.  Each batch holds the a/b edge pair of
    one group-transition of one gadget (or one group's pair of closers), so a
    batch reveals one coordinate of one cross vector and one permutation image.
    """
    if k != (2 * t + 1) * s + 1:
        raise ValueError(f"k={k} != (2t+1)s+1 for s={s}, t={t}")
    if n % (4 * k) != 0 or n < 4 * k:
        raise ValueError(f"n={n} is not a positive multiple of 4k={4 * k}")
    m = n // (4 * k)
    w = 2 * m
    rng = as_seed(seed).rng()
    theta = rng.randrange(2)
    witness = _sample_segments_conditioned(
        w, s, t, {j: theta for j in range(1, m + 1)}, rng
    )
    instance = NgcInstance(
        n=n,
        k=k,
        m=m,
        t=t,
        theta=theta,
        graph=witness.build(),
        witness=witness,
        auxiliary_edges=auxiliary_edges_for(k, m, w),
        s=s,
    )
    return replace(instance, batches=_rebatch(instance))


def sample_hybrid_batched(
    m: int,
    s: int,
    t: int,
    h: int,
    seed: Seed | int | None = None,
    with_auxiliary: bool = False,
) -> NgcInstance:
    """Batched counterpart of sample_hybrid on the multi-segment family."""
    spec = HybridSpec(m, t, h)
    w = 2 * m
    k = (2 * t + 1) * s + 1
    rng = as_seed(seed).rng()
    targets = {j: (0 if j <= spec.h else 1) for j in range(1, m + 1)}
    witness = _sample_segments_conditioned(w, s, t, targets, rng)
    theta = 0 if h == m else (1 if h == 0 else None)
    instance = NgcInstance(
        n=4 * k * m,
        k=k,
        m=m,
        t=t,
        theta=theta,
        graph=witness.build(),
        witness=witness,
        auxiliary_edges=auxiliary_edges_for(k, m, w) if with_auxiliary else (),
        s=s,
    )
    return replace(instance, batches=_rebatch(instance))


def pad_to_k(instance: NgcInstance, k: int) -> NgcInstance:
    """Stretch an instance to depth k by prepending identity layers.

    k = core+1 or core+2 handles every k >= 4 (k mod 3 = 2 or 0); k = core is
    the identity.  Group structure and parities are untouched, auxiliary edges
    are rewired to span the new depth, so cycle lengths land exactly on k.
    """
    if k < 4:
        raise ValueError("padding target k must be >= 4")
    if instance.weights is not None:
        raise ValueError("pad before weighting, not after")
    pad = k - instance.k
    if pad == 0:
        return instance
    if pad not in (1, 2):
        raise ValueError(
            f"cannot pad core k={instance.k} to k={k}: only 1 or 2 identity layers"
        )
    w = instance.width
    ident = MatchingSpec(identity_perm(w), (0,) * w)
    graph = GroupLayeredGraph(w, (ident,) * pad + instance.graph.matchings)
    aux = (
        auxiliary_edges_for(k, instance.m, w) if instance.auxiliary_edges else ()
    )
    padded = replace(
        instance,
        n=2 * w * k,
        k=k,
        graph=graph,
        auxiliary_edges=aux,
    )
    if instance.batches is not None:
        padded = replace(padded, batches=_rebatch(padded))
    return padded


def mst_augment(instance: NgcInstance, W: int) -> NgcInstance:
    """Add the weighted scaffolding that converts the cycle gap to an MST gap.

    All existing edges get weight 1.  New edges: (a^k_j, b^k_j) of weight W
    for j in [m]; weight-1 links (a^1_j, a^1_{m+j}) and (a^1_j, b^1_{m+j});
    and a weight-1 ring (a^1_j, b^1_{j+1}) for j in [m-1] closed by
    (a^1_m, b^1_1).  theta=1 then admits a spanning tree of weight n-1, while
    theta=0 forces m-1 of the weight-W edges.
    """
    if not isinstance(W, int) or W < 2:
        raise ValueError("weight W must be an integer >= 2")
    if not instance.auxiliary_edges:
        raise ValueError("mst_augment needs the auxiliary closing edges")
    m, w, k = instance.m, instance.width, instance.k
    if m < 2:
        warnings.warn("m=1 makes the MST gap degenerate (W multiplier is m-1=0)")
    extra: list[Edge] = []
    weights: dict[Edge, int] = {}
    for e in instance.all_edges():
        weights[canon(e)] = 1
    for j in range(1, m + 1):
        bridge = (vertex_id(k, j, SIDE_A, w), vertex_id(k, j, SIDE_B, w))
        extra.append(bridge)
        weights[canon(bridge)] = W
    for j in range(1, m + 1):
        for side in (SIDE_A, SIDE_B):
            link = (vertex_id(1, j, SIDE_A, w), vertex_id(1, m + j, side, w))
            extra.append(link)
            weights[canon(link)] = 1
    for j in range(1, m):
        ring = (vertex_id(1, j, SIDE_A, w), vertex_id(1, j + 1, SIDE_B, w))
        extra.append(ring)
        weights[canon(ring)] = 1
    closing = (vertex_id(1, m, SIDE_A, w), vertex_id(1, 1, SIDE_B, w))
    extra.append(closing)
    weights[canon(closing)] = 1
    return replace(instance, extra_edges=tuple(extra), weights=weights)


@dataclass
class Census:
    """Exact component census: cycle/path multiplicity by length (in edges)."""

    cycles: dict[int, int] = field(default_factory=dict)
    paths: dict[int, int] = field(default_factory=dict)
    components: int = 0
    degree_violations: tuple[int, ...] = ()

    def count_cycles(self, length: int) -> int:
        return self.cycles.get(length, 0)

    def count_paths(self, length: int) -> int:
        return self.paths.get(length, 0)


class _UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.size = [1] * n
        self.edges = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, u: int, v: int) -> None:
        ru, rv = self.find(u), self.find(v)
        if ru == rv:
            self.edges[ru] += 1
            return
        if self.size[ru] < self.size[rv]:
            ru, rv = rv, ru
        self.parent[rv] = ru
        self.size[ru] += self.size[rv]
        self.edges[ru] += self.edges[rv] + 1


def census_of_edges(n_vertices: int, edges: list[Edge]) -> Census:
    """Union-find census.  A component with #edges == #vertices and all degrees

    2 is a cycle of that length; otherwise it is reported as a path keyed by
    edge count (isolated vertex = path of length 0).  Vertices of degree > 2
    are flagged, not crashed on.
    """
    uf = _UnionFind(n_vertices)
    degree = [0] * n_vertices
    for u, v in edges:
        uf.union(u, v)
        degree[u] += 1
        degree[v] += 1
    census = Census()
    violations = [v for v in range(n_vertices) if degree[v] > 2]
    two_regular: dict[int, bool] = {}
    for v in range(n_vertices):
        r = uf.find(v)
        two_regular[r] = two_regular.get(r, True) and degree[v] == 2
    census.components = len(two_regular)
    for r, regular in two_regular.items():
        size, nedges = uf.size[r], uf.edges[r]
        if regular and nedges == size:
            census.cycles[size] = census.cycles.get(size, 0) + 1
        else:
            census.paths[nedges] = census.paths.get(nedges, 0) + 1
    census.cycles = dict(sorted(census.cycles.items()))
    census.paths = dict(sorted(census.paths.items()))
    census.degree_violations = tuple(violations)
    return census


def validate_instance(instance: NgcInstance) -> Census:
    """Exact structural census of the full edge set (core + closers + extras)."""
    return census_of_edges(instance.n, instance.all_edges())
