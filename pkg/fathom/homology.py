"""Integral homology of cube complexes.

Differentials are degree 0, so every column splits into graded pieces and
`H^i_j = ker d^i_j / im d^{i-1}_j` is computed one piece at a time from the
invariant factors of the two blocks:

    free    = dim C^i_j - rank d^i_j - rank d^{i-1}_j
    torsion = invariant factors of d^{i-1}_j that exceed 1

Invariant factors come from sparse integral elimination (unit pivots first,
chosen to keep fill-in low, then the entry of least absolute value), and
`SmithNormalForm` gives the dense form with its unimodular transforms.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import sympy
from joblib import Parallel, delayed

from .cube import ChainComplex, ChainComplexError, MultiDegree, X_0, X_MINUS_2, r_comul, word_degree
from .laurent import LaurentPoly

log = logging.getLogger(__name__)


### Smith Normal Form

class SmithNormalForm(object):
    """Smith normal form of a dense integer matrix (a list of rows) by
    elementary operations, pivoting on the entry of least absolute value.

    After `compute()`, `left * matrix * right == diagonal`, with `left` and
    `right` unimodular and the diagonal entries `d_1 | d_2 | ...` positive.
    """

    def __init__(self, matrix:Sequence, transforms:bool = True):
        self.matrix = [list(row) for row in matrix]
        self.rows = len(self.matrix)
        self.cols = len(self.matrix[0]) if self.matrix else 0
        assert all(len(row) == self.cols for row in self.matrix), 'ragged matrix'
        self.transforms = transforms
        self.a = [list(row) for row in self.matrix]
        self.left = _identity(self.rows) if transforms else None
        self.right = _identity(self.cols) if transforms else None

    def compute(self) -> 'SmithNormalForm':
        s = 0
        while s < min(self.rows, self.cols):
            pivot = self._min_abs(s)
            if pivot is None:
                break
            row, col = pivot
            self._swap_rows(s, row)
            self._swap_cols(s, col)
            p = self.a[s][s]
            for i in range(s + 1, self.rows):
                if self.a[i][s]:
                    self._add_row(i, s, -(self.a[i][s] // p))
            for j in range(s + 1, self.cols):
                if self.a[s][j]:
                    self._add_col(j, s, -(self.a[s][j] // p))
            if any(self.a[i][s] for i in range(s + 1, self.rows)) or any(self.a[s][j] for j in range(s + 1, self.cols)):
                continue
            stray = self._non_divisible(s)
            if stray is not None:
                self._add_row(s, stray, 1)
                continue
            if p < 0:
                self._negate_row(s)
            s += 1
        return self

    @property
    def diagonal(self) -> list:
        return self.a

    @property
    def invariant_factors(self) -> list:
        return [self.a[i][i] for i in range(min(self.rows, self.cols)) if self.a[i][i]]

    def _min_abs(self, s):
        best = None
        for i in range(s, self.rows):
            for j in range(s, self.cols):
                value = self.a[i][j]
                if value and (best is None or abs(value) < best[0]):
                    best = (abs(value), i, j)
                    if best[0] == 1:
                        return i, j
        return None if best is None else best[1:]

    def _non_divisible(self, s):
        p = self.a[s][s]
        for i in range(s + 1, self.rows):
            if any(self.a[i][j] % p for j in range(s + 1, self.cols)):
                return i
        return None

    def _swap_rows(self, i, k):
        self.a[i], self.a[k] = self.a[k], self.a[i]
        if self.transforms:
            self.left[i], self.left[k] = self.left[k], self.left[i]

    def _swap_cols(self, j, k):
        for row in self.a:
            row[j], row[k] = row[k], row[j]
        if self.transforms:
            for row in self.right:
                row[j], row[k] = row[k], row[j]

    def _negate_row(self, i):
        self.a[i] = [-x for x in self.a[i]]
        if self.transforms:
            self.left[i] = [-x for x in self.left[i]]

    def _add_row(self, target, source, k):
        # row target += k * row source
        self.a[target] = [x + k * y for x, y in zip(self.a[target], self.a[source])]
        if self.transforms:
            self.left[target] = [x + k * y for x, y in zip(self.left[target], self.left[source])]

    def _add_col(self, target, source, k):
        for row in self.a:
            row[target] += k * row[source]
        if self.transforms:
            for row in self.right:
                row[target] += k * row[source]


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a:Sequence, b:Sequence) -> list:
    cols = len(b[0]) if b else 0
    return [[sum(x * b[k][j] for k, x in enumerate(row)) for j in range(cols)] for row in a]


def smith_normal_form(matrix:Sequence, transforms:bool = False):
    """Invariant factors of `matrix`, or `(factors, left, diagonal, right)`
    with `transforms=True`."""
    snf = SmithNormalForm(matrix, transforms).compute()
    if transforms:
        return snf.invariant_factors, snf.left, snf.diagonal, snf.right
    return snf.invariant_factors


def normalize_diagonal(entries:Sequence) -> list:
    """Turn any list of nonzero diagonal entries into the invariant-factor
    chain `d_1 | d_2 | ...` of the same diagonal matrix."""
    d = sorted(abs(x) for x in entries if x)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = math.gcd(d[i], d[j])
            d[i], d[j] = g, d[i] * d[j] // g
    return d


def invariant_factors(rows:int, columns:List[dict]) -> list:
    """Invariant factors of a sparse matrix given as `{row: value}` columns."""
    matrix = {}
    by_col = {}
    for col, column in enumerate(columns):
        for row, value in column.items():
            if value:
                matrix.setdefault(row, {})[col] = value
                by_col.setdefault(col, set()).add(row)

    diagonal = []
    while matrix:
        row, col = _choose_pivot(matrix, by_col)
        p = matrix[row][col]
        clean = True
        # Clear the pivot column with row operations.
        for other in list(by_col[col]):
            if other == row:
                continue
            q = matrix[other][col] // p
            if q:
                _row_axpy(matrix, by_col, other, row, -q)
            if col in matrix.get(other, {}):
                clean = False
        if clean and len(matrix[row]) > 1:
            # The pivot column is now a single entry, so column operations
            # only touch the pivot row.
            for other in list(matrix[row]):
                if other == col:
                    continue
                q = matrix[row][other] // p
                value = matrix[row][other] - q * p
                _set(matrix, by_col, row, other, value)
                if value:
                    clean = False
        if clean:
            diagonal.append(p)
            del matrix[row]
            del by_col[col]
    return normalize_diagonal(diagonal)


def _choose_pivot(matrix, by_col):
    unit, best = None, None
    for row, entries in matrix.items():
        for col, value in entries.items():
            if abs(value) == 1:
                cost = (len(entries) - 1) * (len(by_col[col]) - 1)
                if unit is None or cost < unit[0]:
                    unit = (cost, row, col)
                    if cost == 0:
                        return row, col
            elif unit is None and (best is None or abs(value) < best[0]):
                best = (abs(value), row, col)
    return (unit or best)[1:]


def _set(matrix, by_col, row, col, value):
    if value:
        matrix.setdefault(row, {})[col] = value
        by_col.setdefault(col, set()).add(row)
        return
    entries = matrix.get(row)
    if entries is not None and col in entries:
        del entries[col]
        if not entries:
            del matrix[row]
        by_col[col].discard(row)
        if not by_col[col]:
            del by_col[col]


def _row_axpy(matrix, by_col, target, source, k):
    # row target += k * row source
    for col, value in list(matrix[source].items()):
        _set(matrix, by_col, target, col, matrix.get(target, {}).get(col, 0) + k * value)


def rank(rows:int, columns:List[dict]) -> int:
    return len(invariant_factors(rows, columns))


def rational_rank(dense:Sequence) -> int:
    """Rank over the rationals, by exact Gaussian elimination in sympy."""
    if not dense or not dense[0]:
        return 0
    return sympy.Matrix(dense).rank()


def dense_block(rows:int, columns:List[dict]) -> list:
    dense = [[0] * len(columns) for _ in range(rows)]
    for col, column in enumerate(columns):
        for row, value in column.items():
            dense[row][col] = value
    return dense


### Finitely Generated Groups

@dataclass(frozen=True)
class HomologyGroup:
    """`Z^free ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `d_1 | ... | d_k`, all `d_i > 1`."""
    free: int = 0
    torsion: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, 'torsion', tuple(d for d in normalize_diagonal(self.torsion) if d > 1))

    @classmethod
    def from_cyclic(cls, orders:Sequence, free:int = 0) -> 'HomologyGroup':
        """A direct sum of cyclic groups of the given (not necessarily
        divisibility-ordered) orders."""
        return cls(free, tuple(orders))

    def is_zero(self) -> bool:
        return not self.free and not self.torsion

    def direct_sum(self, other:'HomologyGroup') -> 'HomologyGroup':
        return HomologyGroup(self.free + other.free, self.torsion + other.torsion)

    __add__ = direct_sum

    def scaled(self, copies:int) -> 'HomologyGroup':
        return HomologyGroup(self.free * copies, self.torsion * copies)

    def tensor(self, other:'HomologyGroup') -> 'HomologyGroup':
        torsion = list(self.torsion * other.free) + list(other.torsion * self.free)
        torsion += [math.gcd(a, b) for a in self.torsion for b in other.torsion]
        return HomologyGroup(self.free * other.free, tuple(torsion))

    def tor(self, other:'HomologyGroup') -> 'HomologyGroup':
        return HomologyGroup(0, tuple(math.gcd(a, b) for a in self.torsion for b in other.torsion))

    def elementary_divisors(self) -> list:
        """Prime powers of the torsion part, sorted."""
        divisors = []
        for d in self.torsion:
            divisors.extend(p ** k for p, k in sympy.factorint(d).items())
        return sorted(divisors)

    def to_json(self) -> dict:
        return {'free': self.free, 'torsion': list(self.torsion)}

    def __str__(self):
        parts = ['Z^%d' % self.free] if self.free > 1 else ['Z'] if self.free else []
        parts += ['Z/%d' % d for d in self.torsion]
        return ' + '.join(parts) or '0'


### Homology Tables

@dataclass
class HomologyTable:
    """`(index, degree) -> HomologyGroup`, nonzero entries only."""
    groups: Dict[tuple, HomologyGroup] = field(default_factory=dict)
    arity: int = 1
    variables: tuple = ('q',)
    family: str = ''
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.groups = {(i, MultiDegree(*degree)): group for (i, degree), group in self.groups.items()
                       if not group.is_zero()}

    def group(self, i:int, degree) -> HomologyGroup:
        return self.groups.get((i, MultiDegree(*degree)), HomologyGroup())

    def indices(self) -> list:
        return sorted({i for i, _ in self.groups})

    def entries(self) -> list:
        return sorted(self.groups.items())

    def _derived(self, groups) -> 'HomologyTable':
        return HomologyTable(groups, self.arity, self.variables, self.family, dict(self.metadata))

    def reindex(self, s:int = 0, l=0) -> 'HomologyTable':
        """Move `H^i_j` to `H^{i+s}_{j+l}`."""
        l = MultiDegree(l) if isinstance(l, int) else MultiDegree(*l)
        return self._derived({(i + s, degree + l): group for (i, degree), group in self.groups.items()})

    def project(self, arity:int, variables:Sequence = None) -> 'HomologyTable':
        groups = {}
        for (i, degree), group in self.groups.items():
            key = (i, degree.project(arity))
            groups[key] = groups.get(key, HomologyGroup()) + group
        table = self._derived(groups)
        table.arity = arity
        table.variables = tuple(variables or self.variables[:arity])
        return table

    def slice(self, axis:int, value:int) -> 'HomologyTable':
        return self._derived({key: group for key, group in self.groups.items() if key[1][axis] == value})

    def qdim(self, i:int) -> LaurentPoly:
        total = LaurentPoly({}, self.variables)
        for (index, degree), group in self.groups.items():
            if index == i and group.free:
                total = total + group.free * degree.monomial(self.variables)
        return total

    def total_rank(self, i:int = None) -> int:
        return sum(group.free for (index, _), group in self.groups.items() if i is None or index == i)

    def has_torsion(self) -> bool:
        return any(group.torsion for group in self.groups.values())

    def to_json(self) -> dict:
        return {
            'family': self.family,
            'arity': self.arity,
            'variables': list(self.variables),
            'metadata': self.metadata,
            'groups': [dict(index=i, degree=list(degree[:self.arity]), **group.to_json())
                       for (i, degree), group in self.entries()],
        }

    @classmethod
    def from_json(cls, doc:dict) -> 'HomologyTable':
        groups = {(entry['index'], MultiDegree(*entry['degree'])): HomologyGroup(entry['free'], tuple(entry['torsion']))
                  for entry in doc['groups']}
        return cls(groups, doc['arity'], tuple(doc['variables']), doc.get('family', ''), doc.get('metadata', {}))

    def __eq__(self, other):
        if not isinstance(other, HomologyTable):
            return NotImplemented
        return self.groups == other.groups


### Homology

def _check_homogeneous(c:ChainComplex):
    for i in c.indices():
        source, target = c.basis(i), c.basis(i + 1)
        for row, col, _ in c.differential(i).entries():
            if source[col].degree != target[row].degree:
                raise ChainComplexError('d^%d is not degree 0 at column %d: %s -> %s'
                                        % (i, col, tuple(source[col].degree), tuple(target[row].degree)))


def block_factors(c:ChainComplex, n_jobs:int = 1) -> dict:
    """Invariant factors of every graded block `d^i_j`, keyed by `(i, j)`."""
    _check_homogeneous(c)
    keys = [(i, degree) for i in c.indices() for degree in sorted(c.degree_positions(i))
            if c.degree_positions(i + 1).get(degree)]
    blocks = [c.differential_block(i, degree) for i, degree in keys]
    if n_jobs == 1:
        factors = [invariant_factors(*block) for block in blocks]
    else:
        factors = Parallel(n_jobs=n_jobs, prefer='threads')(delayed(invariant_factors)(*block) for block in blocks)
    return dict(zip(keys, factors))


def homology_of(c:ChainComplex, n_jobs:int = 1) -> HomologyTable:
    factors = block_factors(c, n_jobs)
    groups = {}
    for i in c.indices():
        for degree, positions in c.degree_positions(i).items():
            outgoing = factors.get((i, degree), [])
            incoming = factors.get((i - 1, degree), [])
            free = len(positions) - len(outgoing) - len(incoming)
            groups[(i, degree)] = HomologyGroup(free, tuple(d for d in incoming if d > 1))
    log.debug('%s homology: %d nonzero groups', c.family, sum(not g.is_zero() for g in groups.values()))
    metadata = dict(c.metadata)
    return HomologyTable(groups, c.arity, c.variables, c.family, metadata)


def cycle_ranks(c:ChainComplex, n_jobs:int = 1) -> dict:
    """`(i, degree) -> rank ker d^i_degree`."""
    factors = block_factors(c, n_jobs)
    return {(i, degree): len(positions) - len(factors.get((i, degree), []))
            for i in c.indices() for degree, positions in c.degree_positions(i).items()}


def rational_free_ranks(c:ChainComplex) -> dict:
    """Free ranks by Gaussian elimination over the rationals; an oracle for
    `homology_of`."""
    ranks = {}
    for i in c.indices():
        for degree in c.degree_positions(i):
            ranks[(i, degree)] = rational_rank(dense_block(*c.differential_block(i, degree)))
    return {(i, degree): len(positions) - ranks[(i, degree)] - ranks.get((i - 1, degree), 0)
            for i in c.indices() for degree, positions in c.degree_positions(i).items()}


def poincare(h:HomologyTable, projection:int = None) -> LaurentPoly:
    """`Σ t^i qdim(H^i)`; with `projection`, degrees are first projected to
    that many grading variables."""
    if projection is not None:
        h = h.project(projection)
    total = LaurentPoly({}, ('t',) + tuple(h.variables))
    for i in h.indices():
        total = total + LaurentPoly.var('t', i) * h.qdim(i)
    return total


def euler(h:HomologyTable) -> LaurentPoly:
    total = LaurentPoly({}, h.variables)
    for i in h.indices():
        total = total + (-1) ** (i % 2) * h.qdim(i)
    return total


def kunneth_predict(a:HomologyTable, b:HomologyTable) -> HomologyTable:
    """Homology of `A ⊗ B` from that of the factors. Differentials raise the
    index, so `Tor(H^p, H^q)` lands in index `p + q - 1`."""
    groups = {}

    def add(key, group):
        groups[key] = groups.get(key, HomologyGroup()) + group
    for (p, da), x in a.groups.items():
        for (q, db), y in b.groups.items():
            add((p + q, da + db), x.tensor(y))
            tor = x.tor(y)
            if not tor.is_zero():
                add((p + q - 1, da + db), tor)
    return HomologyTable(groups, a.arity, a.variables, a.family, {'kunneth': [a.metadata, b.metadata]})


### Coefficient Towers

def coefficient_words(m:int) -> list:
    return [tuple(word) for word in _words(m)]


def _words(m):
    if m == 0:
        yield ()
        return
    for rest in _words(m - 1):
        for symbol in (X_0, X_MINUS_2):
            yield rest + (symbol,)


def coefficient_quotients(m:int, axis:int = 0) -> dict:
    """For the coefficient tower `R^{⊗m}`, `degree -> (M, P, torsion)` where
    `M` is the rank of the image of the split map from `R^{⊗(m-1)}` in that
    degree, `P` the rank of the quotient and `torsion` the invariant factors
    of the quotient above 1. Degrees sit on `axis`."""
    target = coefficient_words(m)
    by_degree = {}
    for word in target:
        by_degree.setdefault(word_degree(word, 3).c, []).append(word)
    result = {}
    sources = coefficient_words(m - 1) if m else []
    for degree, words in by_degree.items():
        position = {word: i for i, word in enumerate(words)}
        columns = []
        for word in sources:
            if word_degree(word, 3).c != degree:
                continue
            column = {}
            for image, coefficient in r_comul(word):
                column[position[image]] = column.get(position[image], 0) + coefficient
            columns.append(column)
        factors = invariant_factors(len(words), columns)
        key = [0, 0, 0]
        key[axis] = degree
        result[MultiDegree(*key)] = (len(factors), len(words) - len(factors), tuple(d for d in factors if d > 1))
    return result
