"""Complex families on fatgraphs, and the chain maps between them.

Every family is a cube of states. A `ModuleRecipe` says which factor blocks
the module of a state carries, in this order:

    [component M] [vertex V] [boundary V] [genus V or U] [coefficient R]

and whether the state's height is added to the degree. The cube direction
is fixed by a `flip` mask: the state at cube vertex `alpha` keeps the edges
`alpha ^ flip`.

| family                | blocks                          | flip          | grading   |
|-----------------------|---------------------------------|---------------|-----------|
| chromatic             | vertex, boundary, genus V, R    | all edges     | q         |
| restricted            | vertex, boundary, genus V       | all edges     | q         |
| trigraded             | vertex, boundary, genus U, R    | negative      | q, r, s   |
| trigraded-restricted  | boundary, genus U               | negative      | q, r, s   |
| khovanov              | boundary                        | negative / 0  | q         |
| hgr                   | component (no height shift)     | 0             | r         |
| b                     | component, boundary             | 0             | q, r      |
"""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import sympy

from . import cube as cb
from .cube import (ChainComplex, ChainComplexError, ChainMap, GradedBasisWord, MultiDegree, SparseMatrix,
                   M_0, M_1, U_MINUS, U_PLUS, V_MINUS, V_PLUS, X_0, X_MINUS_2)
from .fatgraph import (AbstractGraph, CapExceeded, Fatgraph, FatgraphError, contract_edge, delete_edge,
                       move_edge_last, relabel_edges)
from .homology import HomologyTable, invariant_factors, rational_rank, dense_block

log = logging.getLogger(__name__)

ORBIT_ORDERS = ('canonical', 'reversed')


@dataclass(frozen=True)
class ModuleRecipe:
    name: str
    components: bool = False
    vertices: bool = False
    boundaries: bool = False
    genus: Optional[tuple] = None
    coefficients: bool = False
    height_shift: bool = True
    arity: int = 1
    variables: tuple = ('q',)


CHROMATIC = ModuleRecipe('chromatic', vertices=True, boundaries=True, genus=(V_PLUS, V_MINUS), coefficients=True)
RESTRICTED = ModuleRecipe('restricted', vertices=True, boundaries=True, genus=(V_PLUS, V_MINUS))
TRIGRADED = ModuleRecipe('trigraded', vertices=True, boundaries=True, genus=(U_PLUS, U_MINUS),
                         coefficients=True, arity=3, variables=('q', 'r', 's'))
TRIGRADED_RESTRICTED = ModuleRecipe('trigraded-restricted', boundaries=True, genus=(U_PLUS, U_MINUS),
                                    arity=3, variables=('q', 'r', 's'))
KHOVANOV = ModuleRecipe('khovanov', boundaries=True)
HGR = ModuleRecipe('hgr', components=True, height_shift=False, variables=('r',))
BIGRADED = ModuleRecipe('b', components=True, boundaries=True, arity=2, variables=('q', 'r'))


### State Cubes

class StateCube(object):
    """The cube of states of `fg` under `recipe`, with `flip` fixing the
    cube direction."""

    def __init__(self, fg:Fatgraph, recipe:ModuleRecipe, flip:int, orbit_order:str = 'canonical'):
        if orbit_order not in ORBIT_ORDERS:
            raise ValueError('orbit order must be one of %s, got %r' % (ORBIT_ORDERS, orbit_order))
        self.fg = fg
        self.recipe = recipe
        self.flip = flip
        self.orbit_order = orbit_order
        self._bases = {}

    def state(self, alpha:int):
        return self.fg.state(alpha ^ self.flip)

    def boundary_keys(self, st) -> tuple:
        keys = st.boundaries
        return tuple(reversed(keys)) if self.orbit_order == 'reversed' else keys

    def blocks(self, alpha:int) -> list:
        """`(kind, length, symbols)` for every factor block at `alpha`."""
        st, recipe = self.state(alpha), self.recipe
        blocks = []
        if recipe.components:
            blocks.append(('components', st.k, (M_0, M_1)))
        if recipe.vertices:
            blocks.append(('vertices', st.v, (V_PLUS, V_MINUS)))
        if recipe.boundaries:
            blocks.append(('boundaries', st.p, (V_PLUS, V_MINUS)))
        if recipe.genus:
            blocks.append(('genus', 2 * st.g, recipe.genus))
        if recipe.coefficients:
            blocks.append(('coefficients', bin(alpha).count('1'), (X_0, X_MINUS_2)))
        return blocks

    def shift_of(self, alpha:int) -> MultiDegree:
        return MultiDegree(bin(alpha).count('1') if self.recipe.height_shift else 0)

    def generator_count(self) -> int:
        return sum(2 ** sum(length for _, length, _ in self.blocks(alpha)) for alpha in range(1 << self.fg.e))

    def basis(self, alpha:int) -> list:
        if alpha not in self._bases:
            shift = self.shift_of(alpha)
            words = itertools.product(*[itertools.product(symbols, repeat=length)
                                        for _, length, symbols in self.blocks(alpha)])
            self._bases[alpha] = [GradedBasisWord(alpha, word, cb.word_degree(word, self.recipe.arity, shift))
                                  for word in (sum(parts, ()) for parts in words)]
        return self._bases[alpha]

    def split(self, alpha:int, word:tuple) -> list:
        parts, at = [], 0
        for kind, length, _ in self.blocks(alpha):
            parts.append((kind, word[at:at + length]))
            at += length
        assert at == len(word), 'word %r does not fit the blocks at %s' % (word, bin(alpha))
        return parts

    def edge_map(self, alpha:int, j:int, word:tuple) -> dict:
        source, target = self.state(alpha), self.state(alpha | 1 << j)
        images = []
        for kind, block in self.split(alpha, word):
            if kind == 'components':
                images.append(cb.relocate(block, source.components, target.components))
            elif kind == 'vertices':
                images.append([(block, 1)])
            elif kind == 'boundaries':
                images.append(cb.relocate(block, self.boundary_keys(source), self.boundary_keys(target)))
            elif kind == 'genus':
                images.append(cb.genus_map(block, 2 * target.g, *self.recipe.genus))
            else:
                images.append(cb.r_comul(block))
        return cb.combine(*images)

    def complex(self, metadata:dict = None, check:bool = True) -> ChainComplex:
        count = self.generator_count()
        cap = cb.generator_cap()
        if count > cap:
            raise CapExceeded('%s complex of %d edges needs %d generators, over the cap of %d (set %s to raise it)'
                              % (self.recipe.name, self.fg.e, count, cap, cb.MAX_GENERATORS_ENV))
        log.debug('building %s complex: %d edges, %d generators', self.recipe.name, self.fg.e, count)
        metadata = dict(metadata or {})
        metadata.setdefault('fatgraph', self.fg.to_document())
        metadata['orbit_order'] = self.orbit_order
        return cb.assemble_differentials(self.fg.e, self.basis, self.edge_map, arity=self.recipe.arity,
                                         variables=self.recipe.variables, family=self.recipe.name,
                                         metadata=metadata, check=check)


def _require_genus_zero(fg:Fatgraph, family:str):
    if fg.genus:
        raise FatgraphError('%s complex needs a genus 0 fatgraph, got genus %d' % (family, fg.genus))


### Complex Families

def chromatic_complex(fg:Fatgraph, normalized:bool = True, orbit_order:str = 'canonical',
                      check:bool = True) -> ChainComplex:
    """The chromatic complex. Unnormalized, column `h` holds the states of
    height `h`; normalized, everything moves down by `e(F)`."""
    c = StateCube(fg, CHROMATIC, fg.full_mask, orbit_order).complex({'normalized': normalized}, check)
    return cb.shift(c, -fg.e) if normalized else c


def restricted_br_complex(fg:Fatgraph, orbit_order:str = 'canonical', check:bool = True) -> ChainComplex:
    return StateCube(fg, RESTRICTED, fg.full_mask, orbit_order).complex(check=check)


def trigraded_br_complex(fg:Fatgraph, restricted:bool = False, check:bool = True) -> ChainComplex:
    """The signed trigraded complex, or with `restricted` its subcomplex
    without vertex and coefficient factors. Column `i` holds the states of
    signed height `i`."""
    recipe = TRIGRADED_RESTRICTED if restricted else TRIGRADED
    return StateCube(fg, recipe, fg.negative_mask).complex(check=check)


def khovanov_cube(fg:Fatgraph, reflect:bool = False, check:bool = True) -> ChainComplex:
    """The unnormalized Khovanov complex of the link associated with a genus
    0 fatgraph. With `reflect`, the cube runs in the edge-adding direction
    with height `e(H)` whatever the signs."""
    _require_genus_zero(fg, 'khovanov')
    flip = 0 if reflect else fg.negative_mask
    return StateCube(fg, KHOVANOV, flip).complex({'reflect': reflect}, check)


def khovanov_reindex(table:HomologyTable, n_minus:int, n_plus:int) -> HomologyTable:
    """Normalize `[-n_-]{n_+ - 2n_-}`."""
    reindexed = table.reindex(-n_minus, n_plus - 2 * n_minus)
    reindexed.metadata.update(n_minus=n_minus, n_plus=n_plus)
    return reindexed


def hgr_complex(graph:AbstractGraph, check:bool = True) -> ChainComplex:
    fg = Fatgraph.from_graph(graph)
    metadata = {'fatgraph': None, 'graph': {'n': graph.n, 'edges': [list(edge) for edge in graph.edges]}}
    return StateCube(fg, HGR, 0).complex(metadata, check)


def b_complex(fg:Fatgraph, check:bool = True) -> ChainComplex:
    _require_genus_zero(fg, 'b')
    return StateCube(fg, BIGRADED, 0).complex(check=check)


FAMILIES = {
    'chromatic': lambda fg: chromatic_complex(fg),
    'chromatic-unnormalized': lambda fg: chromatic_complex(fg, normalized=False),
    'restricted': restricted_br_complex,
    'trigraded': trigraded_br_complex,
    'trigraded-restricted': lambda fg: trigraded_br_complex(fg, restricted=True),
    'khovanov': khovanov_cube,
    'hgr': lambda fg: hgr_complex(fg.underlying_graph()),
    'b': b_complex,
}


def coefficient_factor(arity:int = 1, variables:Sequence = ('q',)) -> ChainComplex:
    """`R{1}`, one column with basis `x0`, `x-2`."""
    return cb.coefficient_complex([(X_0,), (X_MINUS_2,)], 1, arity, variables, 'R{1}')


def vertex_factor(arity:int = 1, variables:Sequence = ('q',)) -> ChainComplex:
    return cb.coefficient_complex([(V_PLUS,), (V_MINUS,)], 0, arity, variables, 'V')


### Deletion and Contraction

def _split_all(images:dict) -> dict:
    result = {}
    for word, coefficient in images.items():
        for image, value in cb.r_comul(word):
            result[image] = result.get(image, 0) + coefficient * value
    return {word: c for word, c in result.items() if c}


@lru_cache(maxsize=None)
def _absorb(word:tuple, y:str) -> tuple:
    # The degree-preserving isomorphism R^m ⊗ R -> R^{m+1} that turns
    # "split the last factor, then append y" into "append, then split".
    if not word:
        return (((y,), 1),)
    if word[-1] == X_MINUS_2:
        if y == X_MINUS_2:
            return ((word + (X_MINUS_2,), 1),)
        return ((word[:-1] + (X_0, X_MINUS_2), 1),)
    images = _split_all(dict(_absorb(word[:-1], y)))
    if len(word) >= 2 and word[-2] == X_MINUS_2:
        for image, coefficient in _absorb(word[:-2] + (X_0, X_MINUS_2), y):
            images[image] = images.get(image, 0) - coefficient
    return tuple(sorted((image, c) for image, c in images.items() if c))


def absorb_coefficient(word:tuple, y:str) -> dict:
    return dict(_absorb(tuple(word), y))


@dataclass
class DeletionContraction:
    """The short exact sequence `0 -> C(F-e) ⊗ R{1} -> C(F) -> C(F/e) ⊗ V -> 0`
    of unnormalized complexes, with `e` moved to the last position."""
    fatgraph: Fatgraph
    deleted: Fatgraph
    contracted: Fatgraph
    family: str
    middle: ChainComplex
    eta: ChainMap
    nu: ChainMap

    def exactness_failures(self) -> list:
        """`(index, degree, reason)` wherever the sequence fails to be a
        split short exact sequence of free groups."""
        failures = []
        for n in self.middle.indices():
            composite = self.nu.matrix(n).compose(self.eta.matrix(n - 1))
            if not composite.is_zero():
                failures.append((n, None, 'nu after eta is not zero'))
            for degree, positions in sorted(self.middle.degree_positions(n).items()):
                _, columns = block = self.eta.block(n - 1, degree)
                eta_factors = invariant_factors(*block)
                rows, _ = block = self.nu.block(n, degree)
                nu_factors = invariant_factors(*block)
                if len(eta_factors) != len(columns) or any(d != 1 for d in eta_factors):
                    failures.append((n, degree, 'eta is not a split injection'))
                if len(nu_factors) != rows or any(d != 1 for d in nu_factors):
                    failures.append((n, degree, 'nu is not surjective'))
                if len(eta_factors) + len(nu_factors) != len(positions):
                    failures.append((n, degree, 'image of eta differs from kernel of nu'))
        return failures


def deletion_contraction(fg:Fatgraph, edge:int, family:str = 'chromatic') -> DeletionContraction:
    if family not in ('chromatic', 'restricted'):
        raise ValueError('deletion-contraction is built for the chromatic and restricted families, not %r' % family)
    if fg.is_loop(edge):
        raise FatgraphError('edge %d is a loop; deletion-contraction needs a non-loop edge' % edge)
    fg = move_edge_last(fg, edge)
    last = fg.e - 1
    deleted, contracted = delete_edge(fg, last), contract_edge(fg, last)
    if family == 'chromatic':
        build = lambda f: chromatic_complex(f, normalized=False)
        left = cb.tensor(build(deleted), coefficient_factor())
    else:
        build = restricted_br_complex
        left = cb.shift(build(deleted), 0, 1)
    middle = build(fg)
    right = cb.tensor(build(contracted), vertex_factor())
    eta = ChainMap(left, middle, _eta_maps(left, middle, last, family), index_shift=1)
    nu = ChainMap(middle, right, _nu_maps(fg, middle, right, contracted))
    return DeletionContraction(fg, deleted, contracted, family, middle, eta, nu)


def eta_chain_map(fg:Fatgraph, edge:int, family:str = 'chromatic') -> ChainMap:
    return deletion_contraction(fg, edge, family).eta


def nu_chain_map(fg:Fatgraph, edge:int, family:str = 'chromatic') -> ChainMap:
    return deletion_contraction(fg, edge, family).nu


def _eta_maps(left:ChainComplex, middle:ChainComplex, last:int, family:str) -> dict:
    maps = {}
    for i in left.indices():
        target = middle.lookup(i + 1)
        matrix = SparseMatrix(middle.rank(i + 1), left.rank(i))
        for col, w in enumerate(left.basis(i)):
            if family == 'chromatic':
                alpha = w.state[0] | 1 << last
                # The last i+1 symbols are the i coefficient factors and y.
                head, tower, y = w.word[:-(i + 1)], w.word[-(i + 1):-1], w.word[-1]
                for image, coefficient in absorb_coefficient(tower, y).items():
                    matrix.add(target[(alpha, head + image)], col, coefficient)
            else:
                matrix.add(target[(w.state | 1 << last, w.word)], col, 1)
        maps[i] = matrix
    return maps


def _nu_maps(fg:Fatgraph, middle:ChainComplex, right:ChainComplex, contracted:Fatgraph) -> dict:
    last = fg.e - 1
    u, w = fg.vertex_of[2 * last], fg.vertex_of[2 * last + 1]

    def vertex(x):
        return x - (x > w)

    def boundary(key):
        if isinstance(key, tuple):
            return ('vertex', vertex(key[1]))
        rest = key - {2 * last, 2 * last + 1}
        return frozenset(rest) if rest else ('vertex', vertex(u))

    maps = {}
    for i in middle.indices():
        target = right.lookup(i)
        matrix = SparseMatrix(right.rank(i), middle.rank(i))
        for col, g in enumerate(middle.basis(i)):
            if g.state >> last & 1:
                continue
            source = fg.state(g.state ^ fg.full_mask)
            image_state = contracted.state(g.state ^ contracted.full_mask)
            v, p = source.v, source.p
            vertices, boundaries, rest = g.word[:v], g.word[v:v + p], g.word[v + p:]
            slots = [None] * (v - 1)
            for x, symbol in enumerate(vertices):
                if x == u:
                    continue
                slots[vertex(u) if x == w else vertex(x)] = symbol
            by_key = {boundary(key): symbol for key, symbol in zip(source.boundaries, boundaries)}
            if set(by_key) != set(image_state.boundaries):
                raise ChainComplexError('contracting edge %d does not carry the boundary circles of state %s'
                                        % (last, bin(g.state)))
            word = tuple(slots) + tuple(by_key[key] for key in image_state.boundaries) + rest + (vertices[u],)
            matrix.add(target[((g.state, 0), word)], col, 1)
        maps[i] = matrix
    return maps


### Inclusions

def _embedding_halves(sub:Fatgraph, sup:Fatgraph, vertex_map:Sequence, edge_map:Sequence):
    """Half-edge maps from `sub` into `sup` under which rotations agree."""
    loops = []
    base = {}
    for i, target in enumerate(edge_map):
        a, b = sub.endpoints(i)
        c, d = sup.endpoints(target)
        if sorted((vertex_map[a], vertex_map[b])) != sorted((c, d)):
            raise FatgraphError('edge %d (%d, %d) does not map onto edge %d (%d, %d)' % (i, a, b, target, c, d))
        if a == b:
            loops.append(i)
        elif vertex_map[a] == c:
            base[2 * i], base[2 * i + 1] = 2 * target, 2 * target + 1
        else:
            base[2 * i], base[2 * i + 1] = 2 * target + 1, 2 * target
    for flips in itertools.product((False, True), repeat=len(loops)):
        halves = dict(base)
        for i, flipped in zip(loops, flips):
            target = edge_map[i]
            halves[2 * i], halves[2 * i + 1] = (2 * target + flipped, 2 * target + 1 - flipped)
        if all(_same_cycle([halves[h] for h in sub.rotations[x]],
                           [h for h in sup.rotations[vertex_map[x]] if h in halves.values()])
               for x in range(sub.v)):
            return halves
    raise FatgraphError('rotations of the subfatgraph do not agree with the superfatgraph')


def _same_cycle(a:list, b:list) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    if a[0] not in b:
        return False
    start = b.index(a[0])
    return a == b[start:] + b[:start]


def inclusion_chain_map(sub:Fatgraph, sup:Fatgraph, vertex_map:Sequence, edge_map:Sequence,
                        family:str = 'chromatic') -> ChainMap:
    """The map of unnormalized complexes induced by including `sub` into
    `sup`: a state `H` goes to `H` with the extra vertices as islands, whose
    vertex and island factors are `v+`. Edges of `sup` are relabeled so the
    image of edge `i` is edge `i`."""
    if family not in ('chromatic', 'restricted'):
        raise ValueError('inclusions are built for the chromatic and restricted families, not %r' % family)
    if len(vertex_map) != sub.v or len(set(vertex_map)) != sub.v or not all(0 <= x < sup.v for x in vertex_map):
        raise FatgraphError('vertex map %r is not injective into %d vertices' % (list(vertex_map), sup.v))
    if len(edge_map) != sub.e or len(set(edge_map)) != sub.e or not all(0 <= i < sup.e for i in edge_map):
        raise FatgraphError('edge map %r is not injective into %d edges' % (list(edge_map), sup.e))
    extra = [i for i in range(sup.e) if i not in edge_map]
    permutation = [None] * sup.e
    for new, old in enumerate(list(edge_map) + extra):
        permutation[old] = new
    sup = relabel_edges(sup, permutation)
    halves = _embedding_halves(sub, sup, vertex_map, range(sub.e))

    build = (lambda f: chromatic_complex(f, normalized=False)) if family == 'chromatic' else restricted_br_complex
    source, target = build(sub), build(sup)
    extra_mask = sum(1 << i for i in range(sub.e, sup.e))
    dv, de = sup.v - sub.v, sup.e - sub.e
    vertex_slot = {x: vertex_map[x] for x in range(sub.v)}

    def key_of(key):
        if isinstance(key, tuple):
            return ('vertex', vertex_map[key[1]])
        return frozenset(halves[h] for h in key)

    maps = {}
    for i in source.indices():
        lookup = target.lookup(i + de)
        matrix = SparseMatrix(target.rank(i + de), source.rank(i))
        for col, g in enumerate(source.basis(i)):
            st = sub.state(g.state ^ sub.full_mask)
            alpha = g.state | extra_mask
            image = sup.state(alpha ^ sup.full_mask)
            v, p = st.v, st.p
            vertices, boundaries, genus = g.word[:v], g.word[v:v + p], g.word[v + p:v + p + 2 * st.g]
            tower = g.word[v + p + 2 * st.g:]
            slots = [V_PLUS] * sup.v
            for x, symbol in enumerate(vertices):
                slots[vertex_slot[x]] = symbol
            by_key = {key_of(key): symbol for key, symbol in zip(st.boundaries, boundaries)}
            if not set(by_key) <= set(image.boundaries) or image.g != st.g:
                raise FatgraphError('state %s of the subfatgraph is not a state of the superfatgraph' % bin(g.state))
            word = tuple(slots) + tuple(by_key.get(key, V_PLUS) for key in image.boundaries) + genus
            if family == 'chromatic':
                word += (X_0,) * de + tower
            matrix.add(lookup[(alpha, word)], col, 1)
        maps[i] = matrix
    return ChainMap(source, target, maps, index_shift=de, degree_shift=MultiDegree(2 * dv + de))


def induced_rank(f:ChainMap, i:int) -> int:
    """Rank over the rationals of the map `H^i(source) -> H^{i+s}(target)`."""
    total = 0
    for degree, positions in f.source.degree_positions(i).items():
        rows, columns = f.source.differential_block(i, degree)
        if rows:
            cycles = [list(v) for v in sympy.Matrix(dense_block(rows, columns)).nullspace()]
        else:
            cycles = [[int(j == k) for j in range(len(positions))] for k in range(len(positions))]
        map_rows, map_columns = f.block(i, degree)
        if not cycles or not map_rows:
            continue
        mapped = sympy.Matrix(dense_block(map_rows, map_columns)) * sympy.Matrix(cycles).T
        _, boundary_columns = f.target.differential_block(i + f.index_shift - 1, degree + f.degree_shift)
        boundaries = dense_block(map_rows, boundary_columns)
        spanned = [row + list(mapped.row(r)) for r, row in enumerate(boundaries)]
        total += rational_rank(spanned) - rational_rank(boundaries)
    return total


### Augmentations

def augmentation_chain_map(fg:Fatgraph, kind:str = 'f', values:Sequence = (0, 0)) -> ChainMap:
    """Augmentations out of the B complex. `f` kills every word with an
    `m1` factor and keeps the boundary factors, landing in the reflected
    Khovanov cube. `g` keeps the component factors and sends each boundary
    factor `v+`, `v-` to `values`, landing in the graph complex."""
    source = b_complex(fg)
    if kind == 'f':
        target = khovanov_cube(fg, reflect=True)
    elif kind == 'g':
        target = hgr_complex(fg.underlying_graph())
    else:
        raise ValueError('augmentation must be "f" or "g", got %r' % (kind,))
    a, b = values
    maps = {}
    for i in source.indices():
        lookup = target.lookup(i)
        matrix = SparseMatrix(target.rank(i), source.rank(i))
        for col, g in enumerate(source.basis(i)):
            k = fg.state(g.state).k
            components, boundaries = g.word[:k], g.word[k:]
            if kind == 'f':
                if all(symbol == M_0 for symbol in components):
                    matrix.add(lookup[(g.state, boundaries)], col, 1)
            else:
                coefficient = 1
                for symbol in boundaries:
                    coefficient *= a if symbol == V_PLUS else b
                if coefficient:
                    matrix.add(lookup[(g.state, components)], col, coefficient)
        maps[i] = matrix
    return ChainMap(source, target, maps)


def check_augmentation(fg:Fatgraph, kind:str = 'g', values:Sequence = (0, 0)) -> list:
    """Source indices where the augmentation fails to commute with the
    differentials."""
    return augmentation_chain_map(fg, kind, values).commutation_failures()
