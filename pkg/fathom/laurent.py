"""Exact sparse Laurent polynomials and the polynomial invariants built from
fatgraph state sums.

`LaurentPoly` keeps a `dict` from exponent tuples (one entry per variable
name, negative entries allowed) to Python integers. Coefficients are never
reduced modulo anything, so state sums over `2^e` terms stay exact.

Every invariant is a sum over the states `H` of a graph or fatgraph:

 * `tutte` is `T(G,x,y)`, `chromatic` is `M(G,u)` and `bollobas_riordan`
   is `R(F,x,y,z)`.
 * `z_poly` is the scaled chromatic polynomial `Z(F,q)` and `z_tilde` is its
   unnormalized state sum.
 * `restricted_br` is `R̂(F,q)`, `r_prime_signed` is `R'(F_s,q,r,s)` and
   `r_hat_prime_signed` is `R̂'(F_s,q,r)`.
 * `b_poly` is `B(F,q,r)`, `hgr_poly` is `M(G,1+r)`, and `jones_state_sum` /
   `jones_normalized` give the Jones state sums of a genus-0 fatgraph.

`z_poly` and `restricted_br` evaluate both sides of their defining identity
and raise `IdentityMismatch` if the two sides disagree.
"""

import itertools
import logging
import math
from typing import Mapping, Union

import sympy

from .fatgraph import AbstractGraph, CapExceeded, Fatgraph, MAX_STATE_EDGES, states

log = logging.getLogger(__name__)

MAX_ORACLE_VERTICES = 8
MAX_ORACLE_COLOURS = 5


class SubstitutionError(ValueError):
    """Raised when a substitution would need the inverse of a non-unit."""


class IdentityMismatch(AssertionError):
    """Raised when the two sides of a polynomial identity disagree."""


### Laurent Polynomials

class LaurentPoly(object):
    """A Laurent polynomial with integer coefficients in the variables `names`."""

    __slots__ = ('names', 'terms')

    def __init__(self, terms:Mapping = None, names=('q',)):
        self.names = tuple(names)
        self.terms = {}
        for exponents, coefficient in (terms or {}).items():
            exponents = tuple(exponents)
            if len(exponents) != len(self.names):
                raise ValueError('exponent %r does not match variables %r' % (exponents, self.names))
            total = self.terms.get(exponents, 0) + coefficient
            if total:
                self.terms[exponents] = total
            else:
                self.terms.pop(exponents, None)

    @classmethod
    def var(cls, name:str, power:int = 1) -> 'LaurentPoly':
        return cls({(power,): 1}, (name,))

    @classmethod
    def const(cls, value:int) -> 'LaurentPoly':
        return cls({(): value}, ()) if value else cls({}, ())

    @classmethod
    def monomial(cls, exponents:Mapping, coefficient:int = 1) -> 'LaurentPoly':
        names = tuple(exponents)
        return cls({tuple(exponents[name] for name in names): coefficient}, names)

    @staticmethod
    def coerce(value) -> 'LaurentPoly':
        if isinstance(value, LaurentPoly):
            return value
        if isinstance(value, int):
            return LaurentPoly.const(value)
        raise TypeError('cannot use %r as a Laurent polynomial' % (value,))

    def widened(self, names) -> dict:
        """The terms re-keyed by exponent tuples over `names` (a superset)."""
        if names == self.names:
            return self.terms
        slots = [names.index(name) for name in self.names]
        widened = {}
        for exponents, coefficient in self.terms.items():
            full = [0] * len(names)
            for slot, exponent in zip(slots, exponents):
                full[slot] = exponent
            widened[tuple(full)] = coefficient
        return widened

    def _common(self, other:'LaurentPoly'):
        names = self.names + tuple(name for name in other.names if name not in self.names)
        return names, self.widened(names), other.widened(names)

    def __add__(self, other):
        other = LaurentPoly.coerce(other)
        names, mine, theirs = self._common(other)
        total = dict(mine)
        for exponents, coefficient in theirs.items():
            total[exponents] = total.get(exponents, 0) + coefficient
        return LaurentPoly(total, names)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({exponents: -c for exponents, c in self.terms.items()}, self.names)

    def __sub__(self, other):
        return self + (-LaurentPoly.coerce(other))

    def __rsub__(self, other):
        return LaurentPoly.coerce(other) - self

    def __mul__(self, other):
        other = LaurentPoly.coerce(other)
        names, mine, theirs = self._common(other)
        product = {}
        for (a, x), (b, y) in itertools.product(mine.items(), theirs.items()):
            exponents = tuple(i + j for i, j in zip(a, b))
            product[exponents] = product.get(exponents, 0) + x * y
        return LaurentPoly(product, names)

    __rmul__ = __mul__

    def __pow__(self, power:int):
        if power < 0:
            if not self.is_unit_monomial():
                raise SubstitutionError('%s is not invertible in the Laurent ring' % self)
            (exponents, coefficient), = self.terms.items()
            return LaurentPoly({tuple(x * power for x in exponents): coefficient ** -power}, self.names)
        result = LaurentPoly.const(1)
        base = self
        while power:
            if power & 1:
                result = result * base
            power >>= 1
            if power:
                base = base * base
        return result

    def is_unit_monomial(self) -> bool:
        return len(self.terms) == 1 and abs(next(iter(self.terms.values()))) == 1

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def canonical(self) -> dict:
        """Terms keyed by their nonzero `(name, exponent)` pairs, so that
        polynomials over different variable lists compare equal."""
        return {tuple((name, x) for name, x in zip(self.names, exponents) if x): coefficient
                for exponents, coefficient in self.terms.items()}

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(frozenset(self.canonical().items()))

    def exponents_of(self, name:str) -> set:
        if name not in self.names:
            return {0} if self.terms else set()
        slot = self.names.index(name)
        return {exponents[slot] for exponents in self.terms}

    def substitute(self, name:str, value) -> 'LaurentPoly':
        """Replace variable `name` by an integer or polynomial. Negative
        powers are expanded only when `value` is a unit (±1 or a monomial
        with coefficient ±1)."""
        if name not in self.names:
            return LaurentPoly(self.terms, self.names)
        value = LaurentPoly.coerce(value)
        slot = self.names.index(name)
        rest = self.names[:slot] + self.names[slot + 1:]
        powers = {}
        result = LaurentPoly({}, rest)
        grouped = {}
        for exponents, coefficient in self.terms.items():
            remainder = exponents[:slot] + exponents[slot + 1:]
            grouped.setdefault(exponents[slot], {})[remainder] = coefficient
        for power, terms in sorted(grouped.items()):
            if power not in powers:
                if power < 0 and not value.is_unit_monomial():
                    raise SubstitutionError('cannot substitute %s for %s into exponent %d' % (value, name, power))
                powers[power] = value ** power
            result = result + LaurentPoly(terms, rest) * powers[power]
        return result

    def substitute_cleared(self, name:str, value) -> tuple:
        """General substitution into negative exponents. Returns `(poly, m)`
        with `poly = self(value) * value^m`, where `m` is the smallest power
        that clears every negative exponent of `name`."""
        lowest = min(self.exponents_of(name) | {0})
        m = -lowest
        cleared = self * LaurentPoly.var(name, m) if m else self
        return cleared.substitute(name, value), m

    def evaluate(self, **values):
        result = self
        for name, value in values.items():
            result = result.substitute(name, value)
        if all(not any(exponents) for exponents in result.terms):
            return sum(result.terms.values())
        return result

    def to_sympy(self):
        symbols = [sympy.Symbol(name) for name in self.names]
        return sympy.Add(*[coefficient * sympy.Mul(*[s ** x for s, x in zip(symbols, exponents)])
                           for exponents, coefficient in self.terms.items()])

    def __str__(self):
        if not self.terms:
            return '0'
        pieces = []
        for exponents, coefficient in sorted(self.terms.items(), reverse=True):
            factors = []
            for name, x in zip(self.names, exponents):
                if x == 1:
                    factors.append(name)
                elif x:
                    factors.append('%s^%d' % (name, x))
            magnitude = abs(coefficient)
            if not factors:
                body = str(magnitude)
            elif magnitude == 1:
                body = '*'.join(factors)
            else:
                body = '%d*%s' % (magnitude, '*'.join(factors))
            sign = '-' if coefficient < 0 else '+'
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        text = ('-' if first_sign == '-' else '') + first
        return text + ''.join(sign + body for sign, body in pieces[1:])

    def __repr__(self):
        return 'LaurentPoly(%s)' % self


Poly = Union[LaurentPoly, int]


def v_dim(name:str = 'q') -> LaurentPoly:
    """Graded dimension `name + name^-1` of the rank-two module V."""
    return LaurentPoly.var(name) + LaurentPoly.var(name, -1)


class _Powers(dict):
    # Memoized nonnegative powers of one polynomial.
    def __init__(self, base):
        super().__init__()
        self.base = base

    def __missing__(self, power):
        value = self.base ** power
        self[power] = value
        return value


def _check_cap(count:int):
    if count > MAX_STATE_EDGES:
        raise CapExceeded('%d edges exceeds the state-sum cap of %d' % (count, MAX_STATE_EDGES))


### Graph Polynomials

def tutte(g:AbstractGraph) -> LaurentPoly:
    _check_cap(g.e)
    x1 = _Powers(LaurentPoly.var('x') - 1)
    y1 = _Powers(LaurentPoly.var('y') - 1)
    full_rank = g.rank((1 << g.e) - 1)
    total = LaurentPoly({}, ('x', 'y'))
    for mask in range(1 << g.e):
        total = total + x1[full_rank - g.rank(mask)] * y1[g.nullity(mask)]
    return total


def tutte_by_deletion_contraction(g:AbstractGraph) -> LaurentPoly:
    """Independent recursive oracle for `tutte`."""
    if not g.edges:
        return LaurentPoly.const(1)
    (u, w), rest = g.edges[-1], g.edges[:-1]
    deleted = AbstractGraph(g.n, rest)
    if u == w:
        return LaurentPoly.var('y') * tutte_by_deletion_contraction(deleted)

    def merge(x):
        x = u if x == w else x
        return x - (x > w)
    contracted = AbstractGraph(g.n - 1, tuple((merge(a), merge(b)) for a, b in rest))
    if deleted.components((1 << deleted.e) - 1) > g.components((1 << g.e) - 1):
        return LaurentPoly.var('x') * tutte_by_deletion_contraction(contracted)
    return tutte_by_deletion_contraction(deleted) + tutte_by_deletion_contraction(contracted)


def chromatic(g:AbstractGraph, name:str = 'u') -> LaurentPoly:
    _check_cap(g.e)
    terms = {}
    for mask in range(1 << g.e):
        k = g.components(mask)
        terms[(k,)] = terms.get((k,), 0) + (-1) ** bin(mask).count('1')
    return LaurentPoly(terms, (name,))


def colorings_oracle(g:AbstractGraph, k:int) -> int:
    """Number of proper `k`-colourings, by brute force."""
    if g.n > MAX_ORACLE_VERTICES or k > MAX_ORACLE_COLOURS:
        raise CapExceeded('colouring oracle is capped at %d vertices and %d colours'
                          % (MAX_ORACLE_VERTICES, MAX_ORACLE_COLOURS))
    return sum(all(colours[u] != colours[w] for u, w in g.edges)
               for colours in itertools.product(range(k), repeat=g.n))


def hgr_poly(g:AbstractGraph) -> LaurentPoly:
    """`M(G, 1+r)`, the graded Euler characteristic of the graph complex."""
    return chromatic(g).substitute('u', 1 + LaurentPoly.var('r'))


### Fatgraph Polynomials

def bollobas_riordan(fg:Fatgraph) -> LaurentPoly:
    full_rank = fg.v - fg.state(fg.full_mask).k
    terms = {}
    for st in states(fg):
        exponents = (full_rank - st.r, st.n, 2 * st.g)
        terms[exponents] = terms.get(exponents, 0) + 1
    return LaurentPoly(terms, ('x', 'y', 'z'))


def _minus_q():
    return -LaurentPoly.var('q')


def z_tilde(fg:Fatgraph) -> LaurentPoly:
    """Unnormalized state sum `Σ (q+q⁻¹)^{v+p+2g} ((-q)(1+q⁻²))^h`."""
    qq = _Powers(v_dim('q'))
    step = _Powers(_minus_q() * (1 + LaurentPoly.var('q', -2)))
    total = LaurentPoly({}, ('q',))
    for st in states(fg):
        total = total + qq[st.v + st.p + 2 * st.g] * step[st.height]
    return total


def z_poly(fg:Fatgraph) -> LaurentPoly:
    """`Z(F,q) = (q+q⁻¹)^{e(F)} M(G,(q+q⁻¹)²)`, cross-checked against the
    state sum over fatgraph states."""
    qq = v_dim('q')
    by_graph = qq ** fg.e * chromatic(fg.underlying_graph()).substitute('u', qq ** 2)
    by_states = (-1) ** fg.e * z_tilde(fg)
    if by_graph != by_states:
        raise IdentityMismatch('Z(F,q) sides disagree for %r: %s != %s' % (fg, by_graph, by_states))
    return by_graph


def restricted_br(fg:Fatgraph) -> LaurentPoly:
    """`R̂(F,q) = Σ (q+q⁻¹)^{v+p+2g} (-q)^h`, cross-checked against the
    Bollobás–Riordan polynomial at `x = -q(q+q⁻¹)`, `y = -q⁻¹(q+q⁻¹)`, `z = 1`."""
    q = LaurentPoly.var('q')
    qq = _Powers(v_dim('q'))
    minus_q = _Powers(_minus_q())
    total = LaurentPoly({}, ('q',))
    for st in states(fg):
        total = total + qq[st.v + st.p + 2 * st.g] * minus_q[st.height]

    x = -q * qq[1]
    y = -LaurentPoly.var('q', -1) * qq[1]
    full = fg.state(fg.full_mask)
    # With these values -y⁻¹(xy)^{1/2} = q.
    substituted = bollobas_riordan(fg).substitute('z', 1).substitute('x', x).substitute('y', y)
    normalized = x ** full.k * y ** fg.v * q ** fg.e * substituted
    if normalized != (-1) ** fg.e * total:
        raise IdentityMismatch('R̂(F,q) disagrees with the substituted R(F) for %r' % (fg,))
    return total


def r_prime_signed(fg:Fatgraph) -> LaurentPoly:
    """`R'(F_s,q,r,s) = Σ (q+q⁻¹)^{v+p} (r+r⁻¹)^{2g} (-q(1+s⁻²))^{h_s}`."""
    qq = _Powers(v_dim('q'))
    rr = _Powers(v_dim('r'))
    step = _Powers(_minus_q() * (1 + LaurentPoly.var('s', -2)))
    total = LaurentPoly({}, ('q', 'r', 's'))
    for st in states(fg):
        total = total + qq[st.v + st.p] * rr[2 * st.g] * step[st.signed_height]
    return total


def r_hat_prime_signed(fg:Fatgraph) -> LaurentPoly:
    qq = _Powers(v_dim('q'))
    rr = _Powers(v_dim('r'))
    minus_q = _Powers(_minus_q())
    total = LaurentPoly({}, ('q', 'r'))
    for st in states(fg):
        total = total + qq[st.p] * rr[2 * st.g] * minus_q[st.signed_height]
    return total


def b_poly(fg:Fatgraph) -> LaurentPoly:
    qq = _Powers(v_dim('q'))
    one_r = _Powers(1 + LaurentPoly.var('r'))
    minus_q = _Powers(_minus_q())
    total = LaurentPoly({}, ('q', 'r'))
    for st in states(fg):
        total = total + one_r[st.k] * minus_q[st.e] * qq[st.p]
    return total


def jones_state_sum(fg:Fatgraph) -> LaurentPoly:
    """Unnormalized Jones state sum `Σ (q+q⁻¹)^p (-q)^{h_s}` of the link
    associated with a genus-0 fatgraph."""
    qq = _Powers(v_dim('q'))
    minus_q = _Powers(_minus_q())
    total = LaurentPoly({}, ('q',))
    for st in states(fg):
        total = total + qq[st.p] * minus_q[st.signed_height]
    return total


def jones_normalized(fg:Fatgraph, n_minus:int, n_plus:int) -> LaurentPoly:
    return (-1) ** n_minus * LaurentPoly.var('q', n_plus - 2 * n_minus) * jones_state_sum(fg)


def binomial_dims(count:int) -> dict:
    """Ranks of the degree pieces of `V^{⊗count}`: degree -> rank."""
    return {count - 2 * minus: math.comb(count, minus) for minus in range(count + 1)}
