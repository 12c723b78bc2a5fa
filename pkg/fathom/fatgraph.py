"""**Fatgraphs** (ribbon graphs) stored as rotation systems.

A fatgraph is a graph with a cyclic order of half-edges at every vertex. Here
it is the pair of permutations (σ, α) on half-edges: the cycles of σ are the
vertex rotations, and α swaps the two halves of every edge. Thickening each
vertex into a disc and each edge into an untwisted band gives an orientable
surface with boundary, and every statistic the invariants need comes from it:

 * `v`, `e` count vertices and edges,
 * `k` counts connected components, `r = v - k` is the rank and
   `n = e - v + k` the nullity,
 * `p` counts boundary circles, the orbits of σ∘α plus one circle for every
   vertex without present half-edges,
 * `g = (k - p + n) / 2` is the genus.

A **state** is a spanning subfatgraph: all vertices and a subset of the edges.
States are addressed by a bitmask over edge ids and cache their statistics.
After parsing, edge `i` always owns the half-edges `2i` and `2i + 1`, which
keeps serialized output byte-stable.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Optional, Sequence

import networkx as nx
from networkx.utils import UnionFind

log = logging.getLogger(__name__)

NEGATIVE = '-'
POSITIVE = '+'

# Largest edge count for which all 2^e states may be enumerated.
MAX_STATE_EDGES = 20
# Largest number of rotation systems `enumerate_rotation_systems` will emit.
MAX_ROTATION_SYSTEMS = 10 ** 6


class FatgraphError(ValueError):
    """Raised for an invalid rotation system or an invalid edit of one."""


class CapExceeded(RuntimeError):
    """Raised when a computation would exceed one of the configured caps."""


### Abstract Graphs

@dataclass(frozen=True)
class AbstractGraph:
    """A multigraph on vertices `0..n-1`. Loops and parallel edges are allowed."""
    n: int
    edges: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'edges', tuple((int(u), int(v)) for u, v in self.edges))
        for i, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise FatgraphError('edge %d has endpoint outside 0..%d: (%d, %d)' % (i, self.n - 1, u, v))

    @property
    def e(self) -> int:
        return len(self.edges)

    @property
    def has_loop(self) -> bool:
        return any(u == v for u, v in self.edges)

    def degree(self, vertex:int) -> int:
        return sum((u == vertex) + (v == vertex) for u, v in self.edges)

    def components(self, mask:int) -> int:
        """Number of connected components of the spanning subgraph `mask`."""
        forest = UnionFind(range(self.n))
        for i, (u, v) in enumerate(self.edges):
            if mask >> i & 1:
                forest.union(u, v)
        return len({forest[x] for x in range(self.n)})

    def rank(self, mask:int) -> int:
        return self.n - self.components(mask)

    def nullity(self, mask:int) -> int:
        return bin(mask).count('1') - self.n + self.components(mask)

    def is_connected(self) -> bool:
        return self.n > 0 and self.components((1 << self.e) - 1) == 1

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.n))
        for i, (u, v) in enumerate(self.edges):
            graph.add_edge(u, v, key=i)
        return graph

    @classmethod
    def from_networkx(cls, graph) -> 'AbstractGraph':
        index = {node: i for i, node in enumerate(sorted(graph.nodes))}
        return cls(len(index), tuple((index[u], index[v]) for u, v in graph.edges()))


### Fatgraphs

@dataclass(frozen=True)
class Fatgraph:
    """A rotation system. `rotations[x]` is the cyclic order of half-edges at
    vertex `x`, `edges[i]` the pair of halves of edge `i` and `signs[i]` its
    sign (`'-'` unless given).

    Instances built through `Fatgraph.build` are validated and normalized;
    the raw constructor does neither, so that `validate` can inspect
    malformed input.
    """
    rotations: tuple
    edges: tuple
    signs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'rotations', tuple(tuple(r) for r in self.rotations))
        object.__setattr__(self, 'edges', tuple(tuple(pair) for pair in self.edges))
        if not self.signs:
            object.__setattr__(self, 'signs', (NEGATIVE,) * len(self.edges))
        else:
            object.__setattr__(self, 'signs', tuple(self.signs))

    @classmethod
    def build(cls, rotations:Sequence, edges:Sequence, signs:Optional[Sequence] = None) -> 'Fatgraph':
        """Validate a raw rotation system and return it in normalized form."""
        raw = cls(rotations, edges, tuple(signs or ()))
        validate(raw)
        return raw.normalized()

    @classmethod
    def from_graph(cls, graph:AbstractGraph, signs:Optional[Sequence] = None) -> 'Fatgraph':
        """The rotation system listing each vertex's half-edges in increasing order."""
        return next(iter(rotation_systems(graph, signs)))

    def normalized(self) -> 'Fatgraph':
        relabel = {}
        for i, (h, h_) in enumerate(self.edges):
            relabel[h], relabel[h_] = 2 * i, 2 * i + 1
        rotations = tuple(_canonical_rotation(relabel[h] for h in rotation) for rotation in self.rotations)
        edges = tuple((2 * i, 2 * i + 1) for i in range(len(self.edges)))
        return Fatgraph(rotations, edges, self.signs)

    @property
    def v(self) -> int:
        return len(self.rotations)

    @property
    def e(self) -> int:
        return len(self.edges)

    @cached_property
    def vertex_of(self) -> dict:
        return {h: x for x, rotation in enumerate(self.rotations) for h in rotation}

    @property
    def negative_mask(self) -> int:
        return sum(1 << i for i, sign in enumerate(self.signs) if sign == NEGATIVE)

    @property
    def full_mask(self) -> int:
        return (1 << self.e) - 1

    def endpoints(self, edge:int) -> tuple:
        h, h_ = self.edges[edge]
        return self.vertex_of[h], self.vertex_of[h_]

    def is_loop(self, edge:int) -> bool:
        u, w = self.endpoints(edge)
        return u == w

    def state(self, mask:int) -> 'State':
        return _trace_state(self, mask)

    @property
    def genus(self) -> int:
        return self.state(self.full_mask).g

    def underlying_graph(self) -> AbstractGraph:
        return AbstractGraph(self.v, tuple(self.endpoints(i) for i in range(self.e)))

    def with_signs(self, signs:Sequence) -> 'Fatgraph':
        if len(signs) != self.e:
            raise FatgraphError('expected %d signs, got %d' % (self.e, len(signs)))
        return Fatgraph(self.rotations, self.edges, tuple(signs))

    def to_document(self) -> dict:
        """The FatgraphDocument (JSON-ready `dict`) for this fatgraph."""
        return {
            'vertices': [{'id': x, 'rotation': list(rotation)} for x, rotation in enumerate(self.rotations)],
            'edges': [{'id': i, 'halves': list(pair), 'sign': sign}
                      for i, (pair, sign) in enumerate(zip(self.edges, self.signs))],
        }


def _canonical_rotation(halves) -> tuple:
    # Cyclic sequences are stored starting from their smallest half-edge.
    halves = list(halves)
    if not halves:
        return ()
    start = halves.index(min(halves))
    return tuple(halves[start:] + halves[:start])


def from_document(doc:dict) -> Fatgraph:
    """Build a normalized fatgraph from a FatgraphDocument `dict`. Vertices
    and edges are taken in order of their ids."""
    vertices = sorted(doc['vertices'], key=lambda vertex: vertex['id'])
    edges = sorted(doc['edges'], key=lambda edge: edge['id'])
    for kind, items in (('vertex', vertices), ('edge', edges)):
        ids = [item['id'] for item in items]
        if len(set(ids)) != len(ids):
            raise FatgraphError('duplicate %s id in %r' % (kind, ids))
    signs = []
    for edge in edges:
        sign = edge.get('sign', NEGATIVE)
        if sign not in (NEGATIVE, POSITIVE):
            raise FatgraphError('edge %r has sign %r, expected "+" or "-"' % (edge['id'], sign))
        signs.append(sign)
    return Fatgraph.build([vertex['rotation'] for vertex in vertices],
                         [tuple(edge['halves']) for edge in edges], signs)


def validate(fg:Fatgraph):
    """Return normally iff `fg` is a valid rotation system, otherwise raise
    `FatgraphError` naming the first violated invariant."""
    owner = {}
    for i, pair in enumerate(fg.edges):
        if len(pair) != 2:
            raise FatgraphError('edge %d must have exactly two half-edges, got %r' % (i, list(pair)))
        h, h_ = pair
        if h == h_:
            raise FatgraphError('α has fixed point: edge %d pairs half-edge %d with itself' % (i, h))
        for half in pair:
            if half in owner:
                raise FatgraphError('duplicate half-edge %d in edges %d and %d' % (half, owner[half], i))
            owner[half] = i
    placed = {}
    for x, rotation in enumerate(fg.rotations):
        for half in rotation:
            if half in placed:
                raise FatgraphError('duplicate half-edge %d in rotations of vertices %d and %d'
                                    % (half, placed[half], x))
            if half not in owner:
                raise FatgraphError('orphan half-edge %d at vertex %d belongs to no edge' % (half, x))
            placed[half] = x
    for half, i in sorted(owner.items()):
        if half not in placed:
            raise FatgraphError('orphan half-edge %d of edge %d is in no vertex rotation' % (half, i))
    if len(fg.signs) != len(fg.edges):
        raise FatgraphError('expected %d edge signs, got %d' % (len(fg.edges), len(fg.signs)))
    for i, sign in enumerate(fg.signs):
        if sign not in (NEGATIVE, POSITIVE):
            raise FatgraphError('edge %d has sign %r, expected "+" or "-"' % (i, sign))


### States

@dataclass(frozen=True)
class State:
    """A spanning subfatgraph with its cached surface statistics.

    `boundaries` lists the boundary circles in canonical order: σ∘α orbits
    (as frozensets of half-edges) by smallest half-edge, then one
    `('vertex', x)` key per isolated vertex by vertex id. `components` lists
    vertex sets by smallest vertex.
    """
    fatgraph: Fatgraph = field(repr=False, compare=False)
    mask: int
    v: int
    e: int
    k: int
    p: int
    n: int
    g: int
    height: int
    signed_height: int
    boundaries: tuple = field(repr=False)
    components: tuple = field(repr=False)

    @property
    def r(self) -> int:
        return self.v - self.k


@lru_cache(maxsize=1 << 16)
def _trace_state(fg:Fatgraph, mask:int) -> State:
    successor = {}
    isolated = []
    for x, rotation in enumerate(fg.rotations):
        kept = [h for h in rotation if mask >> (h >> 1) & 1]
        if not kept:
            isolated.append(x)
            continue
        for a, b in zip(kept, kept[1:] + kept[:1]):
            successor[a] = b

    # Orbits of σ∘α: apply α, then σ. Scanning in increasing order starts
    # every orbit at its smallest half-edge.
    seen = set()
    orbits = []
    for start in sorted(successor):
        if start in seen:
            continue
        orbit = []
        half = start
        while half not in seen:
            seen.add(half)
            orbit.append(half)
            half = successor[half ^ 1]
        orbits.append(frozenset(orbit))

    forest = UnionFind(range(fg.v))
    for i in range(fg.e):
        if mask >> i & 1:
            forest.union(*fg.endpoints(i))
    groups = {}
    for x in range(fg.v):
        groups.setdefault(forest[x], []).append(x)
    components = tuple(sorted((frozenset(group) for group in groups.values()), key=min))

    e = bin(mask).count('1')
    k = len(components)
    p = len(orbits) + len(isolated)
    n = e - fg.v + k
    two_g = k - p + n
    if two_g < 0 or two_g % 2:
        raise RuntimeError('boundary tracing produced 2g = %d for state %s of %r' % (two_g, bin(mask), fg))

    negative = fg.negative_mask
    e_minus = bin(mask & negative).count('1')
    e_plus = e - e_minus
    return State(
        fatgraph=fg,
        mask=mask,
        v=fg.v,
        e=e,
        k=k,
        p=p,
        n=n,
        g=two_g // 2,
        height=fg.e - e,
        signed_height=bin(negative).count('1') - e_minus + e_plus,
        boundaries=tuple(orbits) + tuple(('vertex', x) for x in isolated),
        components=components,
    )


def states(fg:Fatgraph, max_edges:int = None) -> Iterator[State]:
    """All `2^e` states of `fg`, ordered by bitmask value."""
    cap = MAX_STATE_EDGES if max_edges is None else max_edges
    if fg.e > cap:
        raise CapExceeded('%d edges exceeds the state enumeration cap of %d' % (fg.e, cap))
    for mask in range(1 << fg.e):
        yield fg.state(mask)


def boundary_count(st:State) -> int:
    return st.p


def genus(st:State) -> int:
    return st.g


### Edits

def _drop_edge(fg:Fatgraph, edge:int, rotations) -> Fatgraph:
    # Renumber the half-edges of every edge after `edge` down by one edge.
    def renumber(h):
        i = h >> 1
        return 2 * (i - (i > edge)) + (h & 1)
    rotations = [_canonical_rotation(renumber(h) for h in rotation if h >> 1 != edge) for rotation in rotations]
    count = fg.e - 1
    signs = fg.signs[:edge] + fg.signs[edge + 1:]
    return Fatgraph(tuple(rotations), tuple((2 * i, 2 * i + 1) for i in range(count)), signs)


def _check_edge(fg:Fatgraph, edge:int):
    if not isinstance(edge, int) or not 0 <= edge < fg.e:
        raise FatgraphError('unknown edge id %r (fatgraph has %d edges)' % (edge, fg.e))


def delete_edge(fg:Fatgraph, edge:int) -> Fatgraph:
    _check_edge(fg, edge)
    return _drop_edge(fg, edge, fg.rotations)


def contract_edge(fg:Fatgraph, edge:int) -> Fatgraph:
    """Merge the endpoints of a non-loop `edge`. The half of `edge` at the
    first endpoint is replaced, in place, by the rotation at the second
    endpoint read from just after the other half. The second endpoint's
    vertex id disappears."""
    _check_edge(fg, edge)
    h, h_ = fg.edges[edge]
    u, w = fg.vertex_of[h], fg.vertex_of[h_]
    if u == w:
        raise FatgraphError('edge %d is a loop; contracting a loop is undefined' % edge)
    far = list(fg.rotations[w])
    at = far.index(h_)
    spliced = far[at + 1:] + far[:at]
    near = list(fg.rotations[u])
    at = near.index(h)
    merged = near[:at] + spliced + near[at + 1:]
    rotations = [merged if x == u else rotation for x, rotation in enumerate(fg.rotations) if x != w]
    return _drop_edge(fg, edge, rotations)


def disjoint_union(a:Fatgraph, b:Fatgraph) -> Fatgraph:
    shift = 2 * a.e
    rotations = a.rotations + tuple(tuple(h + shift for h in rotation) for rotation in b.rotations)
    count = a.e + b.e
    return Fatgraph(rotations, tuple((2 * i, 2 * i + 1) for i in range(count)), a.signs + b.signs)


def relabel_edges(fg:Fatgraph, permutation:Sequence) -> Fatgraph:
    """Give edge `i` the new id `permutation[i]`."""
    if sorted(permutation) != list(range(fg.e)):
        raise FatgraphError('%r is not a permutation of the %d edge ids' % (list(permutation), fg.e))
    rotations = tuple(_canonical_rotation(2 * permutation[h >> 1] + (h & 1) for h in rotation)
                      for rotation in fg.rotations)
    signs = [None] * fg.e
    for i, sign in enumerate(fg.signs):
        signs[permutation[i]] = sign
    return Fatgraph(rotations, tuple((2 * i, 2 * i + 1) for i in range(fg.e)), tuple(signs))


def move_edge_last(fg:Fatgraph, edge:int) -> Fatgraph:
    _check_edge(fg, edge)
    permutation = [i - (i > edge) for i in range(fg.e)]
    permutation[edge] = fg.e - 1
    return relabel_edges(fg, permutation)


### Embedding Enumeration

def rotation_systems(graph:AbstractGraph, signs:Optional[Sequence] = None) -> Iterator[Fatgraph]:
    # Edge `i` places half `2i` at its first endpoint and `2i + 1` at its
    # second; each vertex pins its smallest half first.
    incident = [[] for _ in range(graph.n)]
    for i, (u, w) in enumerate(graph.edges):
        incident[u].append(2 * i)
        incident[w].append(2 * i + 1)
    choices = [[(halves[0],) + rest for rest in itertools.permutations(halves[1:])] if halves else [()]
               for halves in incident]
    edges = tuple((2 * i, 2 * i + 1) for i in range(graph.e))
    for rotations in itertools.product(*choices):
        yield Fatgraph(rotations, edges, tuple(signs or ()))


def rotation_system_count(graph:AbstractGraph) -> int:
    return math.prod(math.factorial(max(graph.degree(x) - 1, 0)) for x in range(graph.n))


def enumerate_rotation_systems(graph:AbstractGraph, genus_filter:Optional[int] = None,
                               max_systems:int = None) -> Iterator[Fatgraph]:
    """Every fatgraph with underlying graph `graph`, one per choice of cyclic
    order at each vertex. With `genus_filter`, only those whose full edge
    set has that genus."""
    cap = MAX_ROTATION_SYSTEMS if max_systems is None else max_systems
    count = rotation_system_count(graph)
    if count > cap:
        raise CapExceeded('%d rotation systems exceeds the cap of %d' % (count, cap))
    log.debug('enumerating %d rotation systems of %r', count, graph)
    for fg in rotation_systems(graph):
        if genus_filter is None or fg.genus == genus_filter:
            yield fg
