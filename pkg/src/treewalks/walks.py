"""Brute-force tree walks: enumeration, induced trees, kernel reduction.

Walks are vertex sequences ``(v_1, ..., v_2l)`` with the closing step
``v_2l -> v_1`` implicit.  The single-vertex empty walk is ``(1,)``.
"""

from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from math import factorial
from typing import Iterator, Optional, Sequence

MAX_TWO_L = 14


class NotATreeWalk(ValueError):
    pass


class ResourceGuardError(RuntimeError):
    pass


@dataclass(frozen=True)
class TreeWalk:
    vertices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        if not self.vertices:
            raise NotATreeWalk("a walk has at least its root")
        induced_tree(self)  # validates: labels 1..m, no loops, a tree, even counts

    @property
    def length(self) -> int:
        return 0 if len(self.vertices) == 1 else len(self.vertices)

    @property
    def half_length(self) -> int:
        return self.length // 2

    @property
    def root(self) -> int:
        return self.vertices[0]

    def steps(self) -> Iterator[tuple[int, int]]:
        vs = self.vertices
        if len(vs) == 1:
            return iter(())
        return ((vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))


@dataclass(frozen=True)
class InducedTree:
    root: int
    counts: dict  # frozenset({a, b}) -> traversal count
    children: dict  # vertex -> tuple of children in first-traversal order
    parent: dict

    @property
    def edges(self) -> set:
        return set(self.counts)

    def degree(self, v: int) -> int:
        return len(self.children.get(v, ())) + (0 if v == self.root else 1)

    def is_simple(self, a: int, b: int) -> bool:
        return self.counts[frozenset((a, b))] == 2

    def excess(self) -> int:
        return sum(c // 2 - 1 for c in self.counts.values())

    def simple_edge_count(self) -> int:
        return sum(1 for c in self.counts.values() if c == 2)

    def vertices(self) -> list[int]:
        return [self.root] + list(self.parent)

    def neighbours(self, v: int) -> list[int]:
        out = list(self.children.get(v, ()))
        if v != self.root:
            out.append(self.parent[v])
        return out

    def shape(self, v: Optional[int] = None) -> tuple:
        """Rooted plane tree with edge colours: nested ``(is_excess, subtree)`` tuples."""
        v = self.root if v is None else v
        return tuple(
            (self.counts[frozenset((v, c))] > 2, self.shape(c))
            for c in self.children.get(v, ())
        )


def induced_tree(walk: TreeWalk) -> InducedTree:
    """The tree traced by the walk, with traversal counts and first-visit child order."""
    vs = walk.vertices
    labels = set(vs)
    if labels != set(range(1, len(labels) + 1)):
        raise NotATreeWalk(f"labels of {vs} are not 1..m")
    counts: Counter = Counter()
    children: dict[int, list[int]] = defaultdict(list)
    parent: dict[int, int] = {}
    seen = {vs[0]}
    for a, b in walk.steps():
        if a == b:
            raise NotATreeWalk(f"loop at {a} in {vs}")
        counts[frozenset((a, b))] += 1
        if b not in seen:
            seen.add(b)
            parent[b] = a
            children[a].append(b)
    if len(counts) != len(labels) - 1:
        raise NotATreeWalk(f"{vs} does not induce a tree")
    for e in counts:
        a, b = tuple(e)
        if parent.get(a) != b and parent.get(b) != a:
            raise NotATreeWalk(f"{vs} does not induce a tree")
    if any(c % 2 for c in counts.values()):
        raise NotATreeWalk(f"odd traversal count in {vs}")
    return InducedTree(vs[0], dict(counts), {k: tuple(v) for k, v in children.items()}, parent)


def excess(walk: TreeWalk) -> int:
    return walk.half_length - len(induced_tree(walk).counts)


def relabel(vertices: Sequence[int]) -> tuple[int, ...]:
    """Order-preserving relabelling of the surviving labels onto 1..m."""
    rank = {v: i + 1 for i, v in enumerate(sorted(set(vertices)))}
    return tuple(rank[v] for v in vertices)


def canonical(vertices: Sequence[int]) -> tuple[int, ...]:
    """First-visit labelling: labels 1, 2, 3, ... in order of first appearance."""
    rank: dict[int, int] = {}
    for v in vertices:
        rank.setdefault(v, len(rank) + 1)
    return tuple(rank[v] for v in vertices)


# kernel reduction ---------------------------------------------------------


def _step2_candidates(vs: tuple[int, ...], tree: InducedTree) -> list[int]:
    """Non-root leaves hanging on a simple edge."""
    return [
        v
        for v, p in tree.parent.items()
        if not tree.children.get(v) and tree.is_simple(v, p)
    ]


def _apply_step2(vs: tuple[int, ...], leaf: int) -> tuple[int, ...]:
    k = vs.index(leaf)
    n = len(vs)
    if k + 1 < n:
        drop = {k, k + 1}
    else:
        drop = {k - 1, k}
    out = tuple(v for i, v in enumerate(vs) if i not in drop)
    return relabel(out) if out else (1,)


def _step3_applies(tree: InducedTree) -> bool:
    kids = tree.children.get(tree.root, ())
    return len(kids) == 1 and tree.is_simple(tree.root, kids[0])


def _apply_step3(vs: tuple[int, ...]) -> tuple[int, ...]:
    # (u, v, ..., v) closing to u: drop u and the final v; v becomes the root
    if len(vs) == 2:
        return (1,)
    return relabel(vs[1:-1])


def _step4_candidates(tree: InducedTree) -> list[int]:
    out = []
    for v, p in tree.parent.items():
        kids = tree.children.get(v, ())
        if len(kids) == 1 and tree.is_simple(v, p) and tree.is_simple(v, kids[0]):
            out.append(v)
    return out


def _apply_step4(vs: tuple[int, ...], v: int) -> tuple[int, ...]:
    return relabel(tuple(w for w in vs if w != v))


def reduce_to_kernel(walk: TreeWalk, rng: Optional[random.Random] = None) -> TreeWalk:
    """Kernel walk: prune simple pendant edges, migrate the root, contract simple paths.

    Without ``rng`` the steps run as sequential loops (all of step 2, then
    step 3, then step 4, repeated to a fixpoint).  With ``rng`` an applicable
    step and candidate are chosen at random each time.
    """
    vs = walk.vertices
    while True:
        tree = induced_tree(TreeWalk(vs))
        moves = []
        two = _step2_candidates(vs, tree)
        three = _step3_applies(tree)
        four = _step4_candidates(tree)
        if rng is None:
            if two:
                vs = _apply_step2(vs, two[0])
            elif three:
                vs = _apply_step3(vs)
            elif four:
                vs = _apply_step4(vs, four[0])
            else:
                return TreeWalk(vs)
            continue
        moves = [("2", v) for v in two] + ([("3", None)] if three else []) + [("4", v) for v in four]
        if not moves:
            return TreeWalk(vs)
        kind, v = rng.choice(moves)
        if kind == "2":
            vs = _apply_step2(vs, v)
        elif kind == "3":
            vs = _apply_step3(vs)
        else:
            vs = _apply_step4(vs, v)


@dataclass(frozen=True)
class WalkClass:
    excess: int
    simple_edge_count: int
    is_kernel: bool
    is_superreduced: bool
    root_departures: int


def classify(walk: TreeWalk) -> WalkClass:
    tree = induced_tree(walk)
    simple = tree.simple_edge_count()
    departures = 0 if walk.length == 0 else walk.vertices.count(walk.root)
    return WalkClass(
        excess=walk.half_length - len(tree.counts),
        simple_edge_count=simple,
        is_kernel=reduce_to_kernel(walk) == walk,
        is_superreduced=simple == 0,
        root_departures=departures,
    )


def kernel_conditions(tree: InducedTree) -> tuple[bool, bool]:
    """The leaf condition and the inner-vertex condition of a kernel's induced tree.

    (a) every leaf (root included when it has degree 1) touches an excess edge;
    (b) every inner vertex has outdegree >= 2 or touches an excess edge.
    """

    def touches_excess(v):
        return any(not tree.is_simple(v, w) for w in tree.neighbours(v))

    leaf_ok = inner_ok = True
    for v in tree.vertices():
        deg = tree.degree(v)
        if deg == 0:
            continue
        if deg == 1:
            leaf_ok &= touches_excess(v)
        elif len(tree.children.get(v, ())) < 2:
            inner_ok &= touches_excess(v)
    return leaf_ok, inner_ok


# enumeration ----------------------------------------------------------------


def iter_canonical_walks(two_l: int) -> Iterator[tuple[int, ...]]:
    """All tree walks of length ``two_l`` in first-visit canonical labelling."""
    if two_l == 0:
        yield (1,)
        return
    if two_l % 2:
        return
    seq = [1]
    depth = {1: 0}
    parent = {1: 0}
    nbrs: dict[int, list[int]] = {1: []}

    def rec(pos: int, m: int):
        # seq holds positions 0..pos-1; choose seq[pos]
        u = seq[-1]
        remaining = two_l - pos  # steps back to the root once seq[pos] is placed
        if pos == two_l:
            if 1 in nbrs[u]:
                yield tuple(seq)
            return
        for w in nbrs[u]:
            if depth[w] <= remaining:
                seq.append(w)
                yield from rec(pos + 1, m)
                seq.pop()
        w = m + 1
        d = depth[u] + 1
        if d <= remaining:
            depth[w] = d
            parent[w] = u
            nbrs[w] = [u]
            nbrs[u].append(w)
            seq.append(w)
            yield from rec(pos + 1, w)
            seq.pop()
            nbrs[u].pop()
            del nbrs[w], depth[w], parent[w]

    yield from rec(1, 1)


@dataclass
class WalkCensus:
    """Labelled counts: ``w[(m, 2l)]``, ``k[(xi, s, 2l)]``, ``sr[(m, 2l)]``."""

    l_max: int
    w: dict = field(default_factory=dict)
    k: dict = field(default_factory=dict)
    sr: dict = field(default_factory=dict)

    def merge(self, other: "WalkCensus") -> "WalkCensus":
        out = WalkCensus(max(self.l_max, other.l_max))
        for name in ("w", "k", "sr"):
            acc = Counter(getattr(self, name))
            acc.update(getattr(other, name))
            setattr(out, name, dict(acc))
        return out

    def w_count(self, m: int, two_l: int) -> int:
        return self.w.get((m, two_l), 0)

    def k_count(self, xi: int, s: int, two_l: int) -> int:
        return self.k.get((xi, s, two_l), 0)

    def sr_count(self, m: int, two_l: int) -> int:
        return self.sr.get((m, two_l), 0)


def enumerate_census(l_max: int) -> WalkCensus:
    """Exhaustive census of tree, kernel and superreduced walks up to length 2*l_max."""
    if l_max < 0:
        raise ValueError("l_max must be non-negative")
    if 2 * l_max > MAX_TWO_L:
        raise ResourceGuardError(f"2*l_max = {2 * l_max} exceeds the guard {MAX_TWO_L}")
    census = WalkCensus(l_max)
    w: Counter = Counter()
    k: Counter = Counter()
    sr: Counter = Counter()
    for ell in range(l_max + 1):
        two_l = 2 * ell
        for vs in iter_canonical_walks(two_l):
            m = max(vs)
            labelled = factorial(m)
            w[(m, two_l)] += labelled
            walk = TreeWalk(vs)
            tree = induced_tree(walk)
            simple = tree.simple_edge_count()
            if simple == 0:
                sr[(m, two_l)] += labelled
            # kernels are closed under relabelling, so the canonical form decides
            if reduce_to_kernel(walk) == walk:
                xi = ell - len(tree.counts)
                k[(xi, simple, two_l)] += labelled
    census.w, census.k, census.sr = dict(w), dict(k), dict(sr)
    return census


def census_rows(table: dict) -> list[tuple]:
    return [key + (count,) for key, count in sorted(table.items())]


# plane trees and witnesses ----------------------------------------------------


def contour_kernel(shape: tuple) -> TreeWalk:
    """Build a walk from a coloured plane tree: contour walk, with every excess
    edge traversed one extra time back and forth right after its first use."""
    seq: list[int] = [1]
    counter = [1]

    def visit(v: int, sub: tuple):
        for is_excess, child_shape in sub:
            counter[0] += 1
            c = counter[0]
            seq.append(c)
            if is_excess:
                seq.extend([v, c])
            visit(c, child_shape)
            seq.append(v)

    visit(1, shape)
    if len(seq) > 1:
        seq.pop()  # the final return to the root is the implicit closing step
    return TreeWalk(canonical(seq))


def iter_plane_shapes(n_edges: int) -> Iterator[tuple]:
    """Rooted plane trees with ``n_edges`` edges, each edge coloured simple/excess."""
    if n_edges == 0:
        yield ()
        return
    # first child subtree has j edges below the first edge; the rest hangs at the root
    for j in range(n_edges):
        for first in iter_plane_shapes(j):
            for rest in iter_plane_shapes(n_edges - 1 - j):
                for colour in (False, True):
                    yield ((colour, first),) + rest


def shape_satisfies_kernel_conditions(shape: tuple) -> bool:
    walk = contour_kernel(shape)
    return all(kernel_conditions(induced_tree(walk)))


def optimal_kernel_witness(xi: int) -> TreeWalk:
    """Kernel of excess ``xi`` attaining the vertex and simple-edge maxima.

    A full binary tree with ``xi`` leaves on simple edges, with one excess edge
    (traversed four times) hanging from each leaf.
    """
    if xi < 1:
        raise ValueError("xi >= 1")

    def binary(leaves: int) -> tuple:
        if leaves == 1:
            return ((True, ()),)
        left = leaves // 2
        return ((False, binary(left)), (False, binary(leaves - left)))

    return contour_kernel(binary(xi))


# general closed walks (finite-n moments) ---------------------------------------


def iter_canonical_closed_walks(length: int) -> Iterator[tuple[int, ...]]:
    """All closed walks without loops on an unlabelled complete graph, first-visit labelled."""
    if length == 0:
        yield (1,)
        return
    seq = [1]

    def rec(m: int):
        if len(seq) == length:
            if seq[-1] != 1:
                yield tuple(seq)
            return
        u = seq[-1]
        for w in range(1, m + 2):
            if w == u:
                continue
            seq.append(w)
            yield from rec(max(m, w))
            seq.pop()

    yield from rec(1)


def closed_walk_shapes(length: int) -> Counter:
    """Counter of (vertex count, distinct edge count) over canonical closed walks."""
    out: Counter = Counter()
    for vs in iter_canonical_closed_walks(length):
        if len(vs) == 1:
            out[(1, 0)] += 1
            continue
        edges = {frozenset((vs[i], vs[(i + 1) % len(vs)])) for i in range(len(vs))}
        out[(max(vs), len(edges))] += 1
    return out
