"""Document formats and the commands behind `fathom`.

Inputs are JSON. A fatgraph document lists vertex rotations and edge halves:

    {"vertices": [{"id": 0, "rotation": [0, 1]}],
     "edges": [{"id": 0, "halves": [0, 1], "sign": "-"}]}

and a graph document gives an abstract multigraph:

    {"graph": {"n": 3, "edges": [[0, 1], [1, 2], [2, 0]]}}

Every `cmd_*` function returns the text to print, so the commands can be
driven (and tested) without a shell.
"""

import json
import logging
from typing import Optional, Sequence, Union

from . import builders, laurent, render, verify
from .fatgraph import AbstractGraph, Fatgraph, FatgraphError, NEGATIVE, enumerate_rotation_systems, from_document
from .homology import euler, homology_of, poincare
from .laurent import LaurentPoly

log = logging.getLogger(__name__)

POLYNOMIALS = ('tutte', 'chromatic', 'br', 'z', 'ztilde', 'rhat', 'rprime', 'rhatprime', 'b', 'hgr', 'jones',
               'jones-unnormalized')
HOMOLOGY_FAMILIES = ('chromatic', 'rbr', 'tri', 'trihat', 'khovanov', 'hgr', 'b')


class DocumentError(ValueError):
    """A malformed input document. `path` names the offending field."""

    def __init__(self, message:str, path:str = '$'):
        super().__init__('%s: %s' % (path, message))
        self.path = path


### Parsing and Serialization

def _require(doc, key:str, kind, path:str):
    if not isinstance(doc, dict) or key not in doc:
        raise DocumentError('missing field %r' % key, path)
    value = doc[key]
    if not isinstance(value, kind):
        raise DocumentError('expected %s, got %r' % (kind.__name__, value), '%s.%s' % (path, key))
    return value


def _check_int_list(values, path:str):
    if not isinstance(values, list) or not all(isinstance(x, int) for x in values):
        raise DocumentError('expected a list of integers, got %r' % (values,), path)


def parse_document(doc) -> Union[Fatgraph, AbstractGraph]:
    """A `Fatgraph` for a fatgraph document, an `AbstractGraph` for a graph
    document."""
    if not isinstance(doc, dict):
        raise DocumentError('expected an object, got %r' % (doc,))
    if 'graph' in doc:
        graph = _require(doc, 'graph', dict, '$')
        n = _require(graph, 'n', int, '$.graph')
        edges = _require(graph, 'edges', list, '$.graph')
        for i, edge in enumerate(edges):
            path = '$.graph.edges[%d]' % i
            _check_int_list(edge, path)
            if len(edge) != 2:
                raise DocumentError('an edge needs two endpoints, got %r' % (edge,), path)
        try:
            return AbstractGraph(n, tuple(tuple(edge) for edge in edges))
        except FatgraphError as e:
            raise DocumentError(str(e), '$.graph')
    vertices = _require(doc, 'vertices', list, '$')
    edges = _require(doc, 'edges', list, '$')
    for i, vertex in enumerate(vertices):
        path = '$.vertices[%d]' % i
        _require(vertex, 'id', int, path)
        _check_int_list(_require(vertex, 'rotation', list, path), path + '.rotation')
    for i, edge in enumerate(edges):
        path = '$.edges[%d]' % i
        _require(edge, 'id', int, path)
        _check_int_list(_require(edge, 'halves', list, path), path + '.halves')
    return from_document(doc)


def load_document(path:str) -> Union[Fatgraph, AbstractGraph]:
    with open(path) as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise DocumentError('invalid JSON at line %d column %d: %s' % (e.lineno, e.colno, e.msg))
    return parse_document(doc)


def serialize(doc) -> str:
    """Stable JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + '\n'


def as_fatgraph(item:Union[Fatgraph, AbstractGraph]) -> Fatgraph:
    if isinstance(item, AbstractGraph):
        log.info('using the canonical rotation system of the input graph')
        return Fatgraph.from_graph(item)
    return item


def as_graph(item:Union[Fatgraph, AbstractGraph]) -> AbstractGraph:
    return item.underlying_graph() if isinstance(item, Fatgraph) else item


### Polynomials

def _sign_counts(fg:Fatgraph, n_minus:Optional[int], n_plus:Optional[int]) -> tuple:
    minus = fg.signs.count(NEGATIVE)
    return (minus if n_minus is None else n_minus), (fg.e - minus if n_plus is None else n_plus)


def polynomial(item, which:str, n_minus:Optional[int] = None, n_plus:Optional[int] = None) -> LaurentPoly:
    if which == 'tutte':
        return laurent.tutte(as_graph(item))
    if which == 'chromatic':
        return laurent.chromatic(as_graph(item))
    if which == 'hgr':
        return laurent.hgr_poly(as_graph(item))
    fg = as_fatgraph(item)
    if which == 'br':
        return laurent.bollobas_riordan(fg)
    if which == 'z':
        return laurent.z_poly(fg)
    if which == 'ztilde':
        return laurent.z_tilde(fg)
    if which == 'rhat':
        return laurent.restricted_br(fg)
    if which == 'rprime':
        return laurent.r_prime_signed(fg)
    if which == 'rhatprime':
        return laurent.r_hat_prime_signed(fg)
    if which == 'b':
        return laurent.b_poly(fg)
    if which in ('jones', 'jones-unnormalized'):
        if fg.genus:
            raise FatgraphError('the Jones polynomial needs a genus 0 fatgraph, got genus %d' % fg.genus)
        if which == 'jones-unnormalized':
            return laurent.jones_state_sum(fg)
        return laurent.jones_normalized(fg, *_sign_counts(fg, n_minus, n_plus))
    raise ValueError('unknown polynomial %r, expected one of %s' % (which, ', '.join(POLYNOMIALS)))


def polynomial_json(poly:LaurentPoly) -> dict:
    return {
        'variables': list(poly.names),
        'text': str(poly),
        'terms': [list(exponents) + [coefficient] for exponents, coefficient in sorted(poly.terms.items())],
    }


def cmd_poly(item, which:str, as_json:bool = False, n_minus:Optional[int] = None,
             n_plus:Optional[int] = None) -> str:
    poly = polynomial(item, which, n_minus, n_plus)
    if as_json:
        return serialize(dict(polynomial_json(poly), which=which))
    return str(poly) + '\n'


def cmd_table(item) -> str:
    """Every polynomial that applies to the input, keyed by name."""
    fg = as_fatgraph(item)
    rows = {}
    for which in POLYNOMIALS:
        if which in ('jones', 'jones-unnormalized') and fg.genus:
            continue
        rows[which] = str(polynomial(fg, which))
    return serialize({'genus': fg.genus, 'polynomials': rows})


### Complexes and Homology

def build_complex(item, family:str, normalized:bool = False, reflect:bool = False):
    if family == 'hgr':
        return builders.hgr_complex(as_graph(item))
    fg = as_fatgraph(item)
    if family == 'chromatic':
        return builders.chromatic_complex(fg, normalized=normalized)
    if family == 'rbr':
        return builders.restricted_br_complex(fg)
    if family == 'tri':
        return builders.trigraded_br_complex(fg)
    if family == 'trihat':
        return builders.trigraded_br_complex(fg, restricted=True)
    if family == 'khovanov':
        return builders.khovanov_cube(fg, reflect=reflect)
    if family == 'b':
        return builders.b_complex(fg)
    raise ValueError('unknown family %r, expected one of %s' % (family, ', '.join(HOMOLOGY_FAMILIES)))


def homology(item, family:str, normalized:bool = False, n_minus:Optional[int] = None,
             n_plus:Optional[int] = None, n_jobs:int = 1):
    table = homology_of(build_complex(item, family, normalized), n_jobs)
    if family == 'khovanov' and (n_minus is not None or n_plus is not None):
        table = builders.khovanov_reindex(table, *_sign_counts(as_fatgraph(item), n_minus, n_plus))
    return table


def cmd_homology(item, family:str, normalized:bool = False, n_minus:Optional[int] = None,
                 n_plus:Optional[int] = None, show_poincare:bool = False, show_euler:bool = False,
                 n_jobs:int = 1) -> str:
    table = homology(item, family, normalized, n_minus, n_plus, n_jobs)
    if show_poincare or show_euler:
        lines = []
        if show_poincare:
            lines.append(str(poincare(table)))
        if show_euler:
            lines.append(str(euler(table)))
        return '\n'.join(lines) + '\n'
    return serialize(table.to_json())


def cmd_complex(item, family:str, normalized:bool = False, reflect:bool = False) -> str:
    return serialize(build_complex(item, family, normalized, reflect).to_json())


def cmd_augmentation(item, kind:str, values:Sequence) -> str:
    """Report where a candidate augmentation out of the B complex fails to
    be a chain map."""
    failures = builders.check_augmentation(as_fatgraph(item), kind, tuple(values))
    return serialize({'kind': kind, 'values': list(values), 'chain_map': not failures, 'failures': failures})


### Embeddings

def cmd_embeddings(item, genus:Optional[int] = None, max_systems:Optional[int] = None) -> str:
    graph = as_graph(item)
    docs = [fg.to_document() for fg in enumerate_rotation_systems(graph, genus, max_systems)]
    return serialize(docs)


### Verification

def cmd_verify(suite:str, options:verify.SuiteOptions) -> tuple:
    """The JSON report and whether every case passed."""
    report = verify.run_suite(suite, options)
    for case in report.failures[:5]:
        log.warning('%s failed: %s', case.name, case.detail)
    return serialize(report.to_json()), report.ok


### Reports

def cmd_report(item, name:str, families:Sequence = ('chromatic',), markdown_only:bool = False) -> str:
    fg = as_fatgraph(item)
    tables = {family: homology(fg, family) for family in families}
    return render.report(name, fg, tables, markdown_only)
