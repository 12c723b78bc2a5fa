"""Cube-of-states chain complexes.

A complex here is a family of free modules with an enumerated basis of
**graded basis words**, one column per cohomological index, and exact integer
differentials stored as sparse matrices. Builders describe a cube by two
callables,

 * `basis(alpha)`, the basis words of the module at cube vertex `alpha`, and
 * `edge_map(alpha, j, word)`, the image of `word` along the cube edge that
   sets bit `j` of `alpha`, as a `{word: coefficient}` mapping,

and `assemble_differentials` sums the per-edge maps with the cube sign
`(-1)^{#set bits below j}` into one matrix per index.

Factor symbols and their degrees:

    v+ v-   (±1, 0, 0)     boundary, vertex and genus factors (V)
    u+ u-   (0, ±1, 0)     genus factors of the trigraded family (U)
    x0 x-2  (0, 0, 0) and (0, 0, -2)   coefficient factors (R)
    m0 m1   (0, 0, 0) and (0, 1, 0)    component factors (M)

Degrees are kept as triples and projected to the complex's grading arity:
arity 1 sums all three entries, arity 2 folds the last two together.
"""

import itertools
import logging
import os
from dataclasses import dataclass, field
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence

from .fatgraph import CapExceeded
from .laurent import LaurentPoly

log = logging.getLogger(__name__)

# Default cap on the total number of generators in one complex.
MAX_GENERATORS = 250000
MAX_GENERATORS_ENV = 'FATHOM_MAX_GENERATORS'


def generator_cap() -> int:
    return int(os.environ.get(MAX_GENERATORS_ENV, MAX_GENERATORS))


class ChainComplexError(RuntimeError):
    """Raised when a differential fails to be a degree-0 square-zero map, or
    a per-edge map is applied to the wrong kind of factor."""


V_PLUS, V_MINUS = 'v+', 'v-'
U_PLUS, U_MINUS = 'u+', 'u-'
X_0, X_MINUS_2 = 'x0', 'x-2'
M_0, M_1 = 'm0', 'm1'


### Degrees

class MultiDegree(NamedTuple):
    a: int = 0
    b: int = 0
    c: int = 0

    def __add__(self, other):
        return MultiDegree(self.a + other[0], self.b + other[1], self.c + other[2])

    def __neg__(self):
        return MultiDegree(-self.a, -self.b, -self.c)

    @property
    def total(self) -> int:
        return self.a + self.b + self.c

    def project(self, arity:int) -> 'MultiDegree':
        if arity == 1:
            return MultiDegree(self.total)
        if arity == 2:
            return MultiDegree(self.a, self.b + self.c)
        return self

    def monomial(self, variables:Sequence) -> LaurentPoly:
        return LaurentPoly({tuple(self[:len(variables)]): 1}, variables)


SYMBOL_DEGREES = {
    V_PLUS: MultiDegree(1), V_MINUS: MultiDegree(-1),
    U_PLUS: MultiDegree(0, 1), U_MINUS: MultiDegree(0, -1),
    X_0: MultiDegree(), X_MINUS_2: MultiDegree(0, 0, -2),
    M_0: MultiDegree(), M_1: MultiDegree(0, 1),
}


def as_degree(shift) -> MultiDegree:
    if isinstance(shift, int):
        return MultiDegree(shift)
    return MultiDegree(*shift)


def word_degree(word:Sequence, arity:int, shift=MultiDegree()) -> MultiDegree:
    degree = as_degree(shift)
    for symbol in word:
        degree = degree + SYMBOL_DEGREES[symbol]
    return degree.project(arity)


@dataclass(frozen=True)
class GradedBasisWord:
    """One generator: the cube vertex it lives at, its tensor word and its
    (projected) multidegree."""
    state: object
    word: tuple
    degree: MultiDegree

    @property
    def key(self) -> tuple:
        return self.state, self.word


### Per-edge Maps

# Multiplication and comultiplication tables of the Frobenius algebras on V
# and on M. Missing entries are zero.
MULTIPLICATION = {
    (V_PLUS, V_PLUS): V_PLUS, (V_PLUS, V_MINUS): V_MINUS, (V_MINUS, V_PLUS): V_MINUS,
    (M_0, M_0): M_0, (M_0, M_1): M_1, (M_1, M_0): M_1,
}
MULTIPLICATION_ZERO = {(V_MINUS, V_MINUS), (M_1, M_1)}
COMULTIPLICATION = {
    V_PLUS: ((V_PLUS, V_MINUS), (V_MINUS, V_PLUS)),
    V_MINUS: ((V_MINUS, V_MINUS),),
}


def frobenius_mul(word:tuple, a:int, b:int, target:int) -> list:
    """Multiply the factors at positions `a < b` of `word`. The product is
    placed at position `target` of the shorter word; the other factors keep
    their relative order. Returns a list of `(word, coefficient)`."""
    pair = (word[a], word[b])
    if pair in MULTIPLICATION_ZERO:
        return []
    if pair not in MULTIPLICATION:
        raise ChainComplexError('cannot multiply factors %r and %r' % pair)
    rest = [s for i, s in enumerate(word) if i not in (a, b)]
    rest.insert(target, MULTIPLICATION[pair])
    return [(tuple(rest), 1)]


def frobenius_comul(word:tuple, a:int, targets:tuple) -> list:
    """Split the factor at position `a` into positions `targets = (c, d)`,
    `c < d`, of the longer word."""
    if word[a] not in COMULTIPLICATION:
        raise ChainComplexError('cannot comultiply factor %r' % (word[a],))
    c, d = targets
    images = []
    for left, right in COMULTIPLICATION[word[a]]:
        rest = list(word[:a] + word[a + 1:])
        rest.insert(c, left)
        rest.insert(d, right)
        images.append((tuple(rest), 1))
    return images


def relocate(word:tuple, source_keys:Sequence, target_keys:Sequence) -> list:
    """The per-edge map on a factor block indexed by `source_keys` (boundary
    circles or components) into one indexed by `target_keys`. Keys present
    on both sides are carried in order; the changed keys decide between
    identity, merge and split."""
    assert len(word) == len(source_keys)
    target_set, source_set = set(target_keys), set(source_keys)
    gone = [i for i, key in enumerate(source_keys) if key not in target_set]
    new = [i for i, key in enumerate(target_keys) if key not in source_set]
    if not gone and not new:
        return [(word, 1)]
    if len(gone) == 1 and len(new) == 1:
        rest = list(word[:gone[0]] + word[gone[0] + 1:])
        rest.insert(new[0], word[gone[0]])
        return [(tuple(rest), 1)]
    if len(gone) == 2 and len(new) == 1:
        return frobenius_mul(word, gone[0], gone[1], new[0])
    if len(gone) == 1 and len(new) == 2:
        return frobenius_comul(word, gone[0], tuple(new))
    raise ChainComplexError('%d factors replaced by %d: not a merge or a split' % (len(gone), len(new)))


def genus_map(word:tuple, target_length:int, plus:str = V_PLUS, minus:str = V_MINUS) -> list:
    """Identity when the genus is unchanged; otherwise the sum of every
    target word whose degree equals the degree of `word`."""
    if target_length < 0 or target_length % 2:
        raise ChainComplexError('genus block of length %d' % target_length)
    if target_length == len(word):
        return [(word, 1)]
    if any(symbol not in (plus, minus) for symbol in word):
        raise ChainComplexError('genus block %r is not over %s/%s' % (word, plus, minus))
    degree = word.count(plus) - word.count(minus)
    pluses, odd = divmod(target_length + degree, 2)
    if odd or not 0 <= pluses <= target_length:
        return []
    images = []
    for positions in itertools.combinations(range(target_length), pluses):
        image = [minus] * target_length
        for i in positions:
            image[i] = plus
        images.append((tuple(image), 1))
    return images


def r_comul(word:tuple) -> list:
    """`1 ↦ x0` on the empty word, otherwise split the last coefficient factor."""
    if not word:
        return [((X_0,), 1)]
    rest, last = word[:-1], word[-1]
    if last == X_0:
        return [(rest + (X_0, X_0), 1)]
    if last == X_MINUS_2:
        return [(rest + (X_MINUS_2, X_0), 1), (rest + (X_0, X_MINUS_2), 1)]
    raise ChainComplexError('cannot split coefficient factor %r' % (last,))


def cube_sign(alpha:int, j:int) -> int:
    if alpha >> j & 1:
        raise ChainComplexError('coordinate %d of %s is already set' % (j, bin(alpha)))
    return -1 if bin(alpha & ((1 << j) - 1)).count('1') % 2 else 1


def combine(*factors) -> dict:
    """Tensor product of per-block images. Each factor is a list of
    `(block, coefficient)`; blocks are concatenated."""
    images = {}
    for parts in itertools.product(*factors):
        word = sum((block for block, _ in parts), ())
        coefficient = 1
        for _, c in parts:
            coefficient *= c
        images[word] = images.get(word, 0) + coefficient
    return {word: c for word, c in images.items() if c}


### Sparse Matrices

class SparseMatrix(object):
    """A `rows × cols` integer matrix stored as one `{row: value}` dict per column."""

    def __init__(self, rows:int, cols:int, columns:Optional[List[dict]] = None):
        self.rows = rows
        self.cols = cols
        self.columns = columns if columns is not None else [{} for _ in range(cols)]

    @classmethod
    def identity(cls, n:int) -> 'SparseMatrix':
        return cls(n, n, [{i: 1} for i in range(n)])

    def add(self, row:int, col:int, value:int):
        column = self.columns[col]
        total = column.get(row, 0) + value
        if total:
            column[row] = total
        else:
            column.pop(row, None)

    def entries(self):
        for col, column in enumerate(self.columns):
            for row, value in sorted(column.items()):
                yield row, col, value

    def compose(self, other:'SparseMatrix') -> 'SparseMatrix':
        """`self ∘ other`."""
        if other.rows != self.cols:
            raise ChainComplexError('cannot compose %dx%d after %dx%d'
                                    % (self.rows, self.cols, other.rows, other.cols))
        product = SparseMatrix(self.rows, other.cols)
        for col, column in enumerate(other.columns):
            for middle, value in column.items():
                for row, entry in self.columns[middle].items():
                    product.add(row, col, value * entry)
        return product

    def is_zero(self) -> bool:
        return not any(self.columns)

    def nonzero_columns(self) -> list:
        return [col for col, column in enumerate(self.columns) if column]

    def to_dense(self) -> list:
        dense = [[0] * self.cols for _ in range(self.rows)]
        for row, col, value in self.entries():
            dense[row][col] = value
        return dense

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.columns) == (other.rows, other.cols, other.columns)

    def __repr__(self):
        return 'SparseMatrix(%dx%d, %d entries)' % (self.rows, self.cols, sum(map(len, self.columns)))


### Chain Complexes

@dataclass
class CubeData:
    """What a complex was assembled from, kept for the 2-face check."""
    dimension: int
    basis: Callable
    edge_map: Callable
    index_offset: int = 0


@dataclass
class ChainComplex:
    bases: Dict[int, list]
    differentials: Dict[int, SparseMatrix]
    arity: int = 1
    variables: tuple = ('q',)
    family: str = ''
    metadata: dict = field(default_factory=dict)
    cube: Optional[CubeData] = field(default=None, repr=False)

    def __post_init__(self):
        self._lookup = {}
        self._positions = {}

    def indices(self) -> list:
        return sorted(self.bases)

    def basis(self, i:int) -> list:
        return self.bases.get(i, [])

    def rank(self, i:int) -> int:
        return len(self.basis(i))

    def differential(self, i:int) -> SparseMatrix:
        if i in self.differentials:
            return self.differentials[i]
        return SparseMatrix(self.rank(i + 1), self.rank(i))

    def lookup(self, i:int) -> dict:
        """`(state, word) -> position` in column `i`."""
        if i not in self._lookup:
            self._lookup[i] = {w.key: position for position, w in enumerate(self.basis(i))}
        return self._lookup[i]

    def degree_positions(self, i:int) -> dict:
        if i not in self._positions:
            positions = {}
            for position, w in enumerate(self.basis(i)):
                positions.setdefault(w.degree, []).append(position)
            self._positions[i] = positions
        return self._positions[i]

    def degrees(self) -> set:
        return {w.degree for i in self.indices() for w in self.basis(i)}

    def differential_block(self, i:int, degree:MultiDegree) -> tuple:
        """The block of `d^i` between the degree-`degree` pieces of columns
        `i` and `i+1`, as `(row_count, columns)` with local row indices."""
        rows = {position: local for local, position in enumerate(self.degree_positions(i + 1).get(degree, []))}
        matrix = self.differential(i)
        columns = []
        for position in self.degree_positions(i).get(degree, []):
            columns.append({rows[row]: value for row, value in matrix.columns[position].items()})
        return len(rows), columns

    def qdim(self, i:int) -> LaurentPoly:
        total = LaurentPoly({}, self.variables)
        for degree, positions in self.degree_positions(i).items():
            total = total + len(positions) * degree.monomial(self.variables)
        return total

    def euler_from_chains(self) -> LaurentPoly:
        total = LaurentPoly({}, self.variables)
        for i in self.indices():
            total = total + (-1) ** (i % 2) * self.qdim(i)
        return total

    def generator_count(self) -> int:
        return sum(map(len, self.bases.values()))

    def to_json(self) -> dict:
        return {
            'family': self.family,
            'arity': self.arity,
            'variables': list(self.variables),
            'metadata': self.metadata,
            'columns': [{
                'index': i,
                'basis': [{'state': w.state, 'word': list(w.word), 'degree': list(w.degree[:self.arity])}
                          for w in self.basis(i)],
                'differential': {
                    'rows': self.differential(i).rows,
                    'cols': self.differential(i).cols,
                    'entries': [list(entry) for entry in self.differential(i).entries()],
                },
            } for i in self.indices()],
        }


def assemble_differentials(dimension:int, basis:Callable, edge_map:Callable, *, arity:int = 1,
                           variables:Sequence = ('q',), family:str = '', metadata:dict = None,
                           check:bool = True) -> ChainComplex:
    """Build the complex of a `dimension`-cube. Column `i` collects the
    vertices with `i` set bits in increasing `alpha`; `d^i` is the signed sum
    of the per-edge maps."""
    cap = generator_cap()
    bases = {}
    total = 0
    for alpha in range(1 << dimension):
        words = basis(alpha)
        total += len(words)
        if total > cap:
            raise CapExceeded('%s complex exceeds the generator cap of %d (set %s to raise it)'
                              % (family or 'cube', cap, MAX_GENERATORS_ENV))
        bases.setdefault(bin(alpha).count('1'), []).extend(words)
    for i in range(dimension + 1):
        bases.setdefault(i, [])
    c = ChainComplex(bases, {}, arity, tuple(variables), family, dict(metadata or {}),
                     CubeData(dimension, basis, edge_map))
    log.debug('%s: %d generators over %d columns', family, total, dimension + 1)

    for i in range(dimension):
        source, target = c.basis(i), c.lookup(i + 1)
        matrix = SparseMatrix(c.rank(i + 1), c.rank(i))
        for col, w in enumerate(source):
            for j in range(dimension):
                if w.state >> j & 1:
                    continue
                sign = cube_sign(w.state, j)
                for image, coefficient in edge_map(w.state, j, w.word).items():
                    row = target.get((w.state | 1 << j, image))
                    if row is None:
                        raise ChainComplexError('edge %d maps %r at state %s outside the basis: %r'
                                                % (j, w.word, bin(w.state), image))
                    if c.basis(i + 1)[row].degree != w.degree:
                        raise ChainComplexError('edge %d is not degree 0: %r %s -> %r %s'
                                                % (j, w.word, tuple(w.degree), image,
                                                   tuple(c.basis(i + 1)[row].degree)))
                    matrix.add(row, col, sign * coefficient)
        c.differentials[i] = matrix

    if check:
        failures = check_square_zero(c)
        if failures:
            faces = check_faces(c, limit=1)
            where = ('state %s, edges %d and %d' % (bin(faces[0][0]), faces[0][1], faces[0][2])
                     if faces else 'columns %r' % failures)
            raise ChainComplexError('%s differential does not square to zero at %s' % (family, where))
    return c


def check_square_zero(c:ChainComplex) -> list:
    """Indices `i` with `d^{i+1} ∘ d^i ≠ 0`."""
    return [i for i in c.indices() if not c.differential(i + 1).compose(c.differential(i)).is_zero()]


def check_faces(c:ChainComplex, limit:int = None) -> list:
    """Every 2-face `(alpha, j, k)` of the cube whose two signed paths do
    not cancel on some basis word."""
    if c.cube is None:
        raise ChainComplexError('%s complex was not assembled from a cube' % c.family)
    cube = c.cube
    failures = []

    def along(alpha, j, images):
        sign = cube_sign(alpha, j)
        result = {}
        for word, coefficient in images.items():
            for image, value in cube.edge_map(alpha, j, word).items():
                result[image] = result.get(image, 0) + sign * coefficient * value
        return result

    for alpha in range(1 << cube.dimension):
        free = [j for j in range(cube.dimension) if not alpha >> j & 1]
        for j, k in itertools.combinations(free, 2):
            for w in cube.basis(alpha):
                start = {w.word: 1}
                first = along(alpha | 1 << j, k, along(alpha, j, start))
                second = along(alpha | 1 << k, j, along(alpha, k, start))
                for word in set(first) | set(second):
                    if first.get(word, 0) + second.get(word, 0):
                        failures.append((alpha, j, k, w.word))
                        break
                else:
                    continue
                break
            if limit and len(failures) >= limit:
                return failures
    return failures


### Shifts and Tensor Products

def shift(c:ChainComplex, s:int = 0, l=0) -> ChainComplex:
    """Height shift `[s]` (column `i` moves to `i + s`) and degree shift `{l}`."""
    l = as_degree(l).project(c.arity)
    bases = {i + s: [GradedBasisWord(w.state, w.word, w.degree + l) for w in words]
             for i, words in c.bases.items()}
    differentials = {i + s: matrix for i, matrix in c.differentials.items()}
    metadata = dict(c.metadata)
    metadata['height_shift'] = metadata.get('height_shift', 0) + s
    cube = None
    if c.cube is not None:
        cube = CubeData(c.cube.dimension, c.cube.basis, c.cube.edge_map, c.cube.index_offset + s)
    return ChainComplex(bases, differentials, c.arity, c.variables, c.family, metadata, cube)


def tensor(a:ChainComplex, b:ChainComplex) -> ChainComplex:
    """`a ⊗ b` with `d(x ⊗ y) = dx ⊗ y + (-1)^i x ⊗ dy` for `x` in column `i`.
    Words are concatenated and states paired."""
    if a.arity != b.arity:
        raise ChainComplexError('cannot tensor arity %d with arity %d' % (a.arity, b.arity))
    blocks = {}
    for p in a.indices():
        for q in b.indices():
            blocks.setdefault(p + q, []).append((p, q))
    bases = {}
    for n, pairs in blocks.items():
        bases[n] = [GradedBasisWord((x.state, y.state), x.word + y.word, x.degree + y.degree)
                    for p, q in pairs for x in a.basis(p) for y in b.basis(q)]
    c = ChainComplex(bases, {}, a.arity, a.variables, '%s*%s' % (a.family, b.family),
                     {'factors': [a.metadata, b.metadata]})

    for n, pairs in blocks.items():
        target = c.lookup(n + 1)
        matrix = SparseMatrix(c.rank(n + 1), c.rank(n))
        col = 0
        for p, q in pairs:
            da, db = a.differential(p), b.differential(q)
            for x_pos, x in enumerate(a.basis(p)):
                for y_pos, y in enumerate(b.basis(q)):
                    for row, value in da.columns[x_pos].items():
                        image = a.basis(p + 1)[row]
                        matrix.add(target[((image.state, y.state), image.word + y.word)], col, value)
                    sign = -1 if p % 2 else 1
                    for row, value in db.columns[y_pos].items():
                        image = b.basis(q + 1)[row]
                        matrix.add(target[((x.state, image.state), x.word + image.word)], col, sign * value)
                    col += 1
        c.differentials[n] = matrix
    return c


def coefficient_complex(words:Sequence, shift=0, arity:int = 1, variables:Sequence = ('q',),
                        family:str = '') -> ChainComplex:
    """A one-column complex at index 0 on the given basis words, used as a
    tensor factor (`R{1}`, `V`)."""
    basis = [GradedBasisWord(0, tuple(word), word_degree(word, arity, shift)) for word in words]
    return ChainComplex({0: basis}, {}, arity, tuple(variables), family)


### Chain Maps

@dataclass
class ChainMap:
    """`maps[i]` sends column `i` of `source` to column `i + index_shift` of
    `target`, raising degrees by `degree_shift`."""
    source: ChainComplex
    target: ChainComplex
    maps: Dict[int, SparseMatrix]
    index_shift: int = 0
    degree_shift: MultiDegree = MultiDegree()

    def matrix(self, i:int) -> SparseMatrix:
        if i in self.maps:
            return self.maps[i]
        return SparseMatrix(self.target.rank(i + self.index_shift), self.source.rank(i))

    def block(self, i:int, degree:MultiDegree) -> tuple:
        """`(row_count, columns)` of `maps[i]` from the degree-`degree` piece
        of the source into the matching piece of the target."""
        target_degree = degree + self.degree_shift
        rows = {position: local for local, position
                in enumerate(self.target.degree_positions(i + self.index_shift).get(target_degree, []))}
        matrix = self.matrix(i)
        columns = []
        for position in self.source.degree_positions(i).get(degree, []):
            columns.append({rows[row]: value for row, value in matrix.columns[position].items()})
        return len(rows), columns

    def degree_failures(self) -> list:
        failures = []
        for i in self.source.indices():
            source, target = self.source.basis(i), self.target.basis(i + self.index_shift)
            for row, col, _ in self.matrix(i).entries():
                if target[row].degree != source[col].degree + self.degree_shift:
                    failures.append((i, col))
        return failures

    def commutation_failures(self) -> list:
        """Source indices `i` where `d ∘ f^i ≠ f^{i+1} ∘ d`."""
        failures = []
        for i in self.source.indices():
            left = self.target.differential(i + self.index_shift).compose(self.matrix(i))
            right = self.matrix(i + 1).compose(self.source.differential(i))
            if left != right:
                failures.append(i)
        return failures

    def is_chain_map(self) -> bool:
        return not self.commutation_failures() and not self.degree_failures()
