"""Verification suites.

Each suite runs one family of identities over a generated corpus and returns
a `VerificationReport` whose failing cases carry a reproducible witness (the
fatgraph document plus the parameters of the check). Corpora are
deterministic for a given seed:

 * `abstract_graphs`, every multigraph up to isomorphism within the caps,
 * `fatgraph_corpus`, their rotation systems (all of them, or a seeded
   sample per graph),
 * `signed_corpus`, the same fatgraphs with all-negative, all-positive or
   seeded random signs,
 * `simple_graphs`, the loopless simple graphs of the networkx atlas,
 * `union_pairs`, pairs of small corpus members for disjoint unions.
"""

import itertools
import json
import logging
import os
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import networkx as nx
from joblib import Parallel, delayed

from . import builders, laurent
from .cube import ChainComplexError, MultiDegree, check_faces, check_square_zero
from .fatgraph import (AbstractGraph, CapExceeded, Fatgraph, FatgraphError, NEGATIVE, POSITIVE, disjoint_union,
                       enumerate_rotation_systems, relabel_edges, rotation_systems)
from .homology import (HomologyGroup, HomologyTable, coefficient_quotients, cycle_ranks, euler, homology_of,
                       kunneth_predict, poincare)
from .laurent import LaurentPoly

log = logging.getLogger(__name__)

DECOMPOSITIONS = ('prop52', 'prop54', 'thm65')


### Reports

@dataclass
class CaseOutcome:
    name: str
    passed: bool
    witness: dict = field(default_factory=dict)
    detail: str = ''

    def to_json(self) -> dict:
        doc = {'name': self.name, 'passed': self.passed}
        if self.detail:
            doc['detail'] = self.detail
        if self.witness:
            doc['witness'] = self.witness
        return doc


@dataclass
class VerificationReport:
    suite: str
    corpus: str
    cases: List[CaseOutcome] = field(default_factory=list)
    findings: list = field(default_factory=list)

    def __post_init__(self):
        self.cases = sorted(self.cases, key=lambda case: case.name)

    @property
    def ok(self) -> bool:
        return all(case.passed for case in self.cases)

    @property
    def failures(self) -> list:
        return [case for case in self.cases if not case.passed]

    def summary(self) -> dict:
        failed = len(self.failures)
        return {'cases': len(self.cases), 'passed': len(self.cases) - failed, 'failed': failed}

    def to_json(self) -> dict:
        return {
            'suite': self.suite,
            'corpus': self.corpus,
            'summary': self.summary(),
            'cases': [case.to_json() for case in self.cases],
            'findings': self.findings,
        }


### Corpora

@dataclass(frozen=True)
class CorpusMember:
    name: str
    fatgraph: Fatgraph

    def witness(self, **params) -> dict:
        return dict(fatgraph=self.fatgraph.to_document(), **params)


def _canonical_edges(n:int, edges:Sequence) -> tuple:
    best = None
    for perm in itertools.permutations(range(n)):
        relabeled = tuple(sorted(tuple(sorted((perm[u], perm[w]))) for u, w in edges))
        if best is None or relabeled < best:
            best = relabeled
    return best


def abstract_graphs(max_vertices:int = 3, max_edges:int = 3, connected:bool = False) -> List[AbstractGraph]:
    """Every multigraph (loops allowed) on 1 to `max_vertices` vertices with
    at most `max_edges` edges, one per isomorphism class."""
    graphs = []
    for n in range(1, max_vertices + 1):
        slots = list(itertools.combinations_with_replacement(range(n), 2))
        seen = set()
        for e in range(max_edges + 1):
            for edges in itertools.combinations_with_replacement(slots, e):
                key = _canonical_edges(n, edges)
                if key in seen:
                    continue
                seen.add(key)
                graph = AbstractGraph(n, key)
                if not connected or graph.is_connected():
                    graphs.append(graph)
    log.debug('%d abstract graphs with at most %d vertices and %d edges', len(graphs), max_vertices, max_edges)
    return graphs


def fatgraph_corpus(max_edges:int = 3, max_vertices:int = 3, seed:int = 0,
                    rotations_per_graph:Optional[int] = None, connected:bool = False) -> List[CorpusMember]:
    rng = random.Random(seed)
    members = []
    for g_id, graph in enumerate(abstract_graphs(max_vertices, max_edges, connected)):
        systems = list(rotation_systems(graph))
        picks = range(len(systems))
        if rotations_per_graph is not None and len(systems) > rotations_per_graph:
            picks = sorted(rng.sample(range(len(systems)), rotations_per_graph))
        for r_id in picks:
            members.append(CorpusMember('v%d-e%d-g%d-r%d' % (graph.n, graph.e, g_id, r_id), systems[r_id]))
    return members


def signed_corpus(pattern:str = 'negative', max_edges:int = 3, max_vertices:int = 3, seed:int = 0,
                  rotations_per_graph:Optional[int] = None, genus:Optional[int] = None) -> List[CorpusMember]:
    if pattern not in ('negative', 'positive', 'mixed'):
        raise ValueError('sign pattern must be negative, positive or mixed, not %r' % pattern)
    rng = random.Random(seed)
    members = []
    for member in fatgraph_corpus(max_edges, max_vertices, seed, rotations_per_graph):
        fg = member.fatgraph
        if genus is not None and fg.genus != genus:
            continue
        if pattern == 'negative':
            signs = (NEGATIVE,) * fg.e
        elif pattern == 'positive':
            signs = (POSITIVE,) * fg.e
        else:
            signs = tuple(rng.choice((NEGATIVE, POSITIVE)) for _ in range(fg.e))
        members.append(CorpusMember('%s-%s' % (member.name, ''.join(signs) or 'o'), fg.with_signs(signs)))
    return members


def simple_graphs(max_vertices:int = 6, max_edges:int = 8) -> List[AbstractGraph]:
    """Simple graphs from the networkx atlas (all graphs up to 7 vertices)."""
    return [AbstractGraph.from_networkx(g) for g in nx.graph_atlas_g()
            if 1 <= g.number_of_nodes() <= max_vertices and g.number_of_edges() <= max_edges]


def union_pairs(members:Sequence[CorpusMember], max_edges:int = 2) -> list:
    small = [m for m in members if m.fatgraph.e <= max_edges]
    return list(itertools.combinations_with_replacement(small, 2))


### Running

def _guarded(name:str, check:Callable, *args) -> CaseOutcome:
    try:
        return check(*args)
    except (CapExceeded, ChainComplexError, FatgraphError, laurent.IdentityMismatch,
            laurent.SubstitutionError) as e:
        log.info('%s raised %s: %s', name, type(e).__name__, e)
        return CaseOutcome(name, False, {}, '%s: %s' % (type(e).__name__, e))


def _run(suite:str, corpus:str, jobs:list, n_jobs:int = 1, findings:list = None) -> VerificationReport:
    """`jobs` is a list of `(name, check, args)`; each check returns a
    `CaseOutcome` (or a list of them)."""
    if n_jobs == 1:
        outcomes = [_guarded(name, check, *args) for name, check, args in jobs]
    else:
        outcomes = Parallel(n_jobs=n_jobs, prefer='threads')(
            delayed(_guarded)(name, check, *args) for name, check, args in jobs)
    cases = []
    for outcome in outcomes:
        cases.extend(outcome if isinstance(outcome, list) else [outcome])
    report = VerificationReport(suite, corpus, cases, findings if findings is not None else [])
    log.info('%s over %s: %s', suite, corpus, report.summary())
    return report


def _describe(members:Sequence[CorpusMember], **options) -> str:
    params = ', '.join('%s=%s' % item for item in sorted(options.items()))
    return '%d fatgraphs (%s)' % (len(members), params)


def _compare_polys(name:str, member:CorpusMember, got:LaurentPoly, expected:LaurentPoly, **params) -> CaseOutcome:
    if got == expected:
        return CaseOutcome(name, True)
    return CaseOutcome(name, False, member.witness(expected=str(expected), got=str(got), **params),
                       'expected %s, got %s' % (expected, got))


def _compare_tables(name:str, member:CorpusMember, got:HomologyTable, expected:HomologyTable,
                    **params) -> CaseOutcome:
    if got == expected:
        return CaseOutcome(name, True)
    keys = sorted(set(got.groups) | set(expected.groups))
    diff = next(key for key in keys if got.group(*key) != expected.group(*key))
    i, degree = diff
    return CaseOutcome(name, False, member.witness(index=i, degree=list(degree), expected=str(expected.group(*diff)),
                                                   got=str(got.group(*diff)), **params),
                       'H^%d at degree %s: expected %s, got %s'
                       % (i, tuple(degree), expected.group(*diff), got.group(*diff)))


### Euler Characteristics

def _polynomial(family:str, fg:Fatgraph) -> LaurentPoly:
    if family == 'chromatic':
        return laurent.z_poly(fg)
    if family == 'chromatic-unnormalized':
        return laurent.z_tilde(fg)
    if family == 'restricted':
        return laurent.restricted_br(fg)
    if family == 'trigraded':
        return laurent.r_prime_signed(fg)
    if family == 'trigraded-restricted':
        return laurent.r_hat_prime_signed(fg)
    if family == 'khovanov':
        return laurent.jones_state_sum(fg)
    if family == 'hgr':
        return laurent.hgr_poly(fg.underlying_graph())
    if family == 'b':
        return laurent.b_poly(fg)
    raise ValueError('unknown family %r' % family)


EULER_FAMILIES = ('chromatic', 'chromatic-unnormalized', 'restricted', 'trigraded', 'trigraded-restricted',
                  'khovanov', 'jones', 'hgr', 'b')
GENUS_ZERO_FAMILIES = ('khovanov', 'jones', 'b')


def _euler_case(member:CorpusMember, family:str) -> CaseOutcome:
    fg = member.fatgraph
    name = '%s/%s' % (member.name, family)
    if family == 'jones':
        n_minus = fg.signs.count(NEGATIVE)
        n_plus = fg.e - n_minus
        table = builders.khovanov_reindex(homology_of(builders.khovanov_cube(fg)), n_minus, n_plus)
        return _compare_polys(name, member, euler(table), laurent.jones_normalized(fg, n_minus, n_plus),
                              family=family, n_minus=n_minus, n_plus=n_plus)
    c = builders.FAMILIES[family](fg)
    h = homology_of(c)
    chi = euler(h)
    if chi != c.euler_from_chains():
        return CaseOutcome(name, False, member.witness(family=family),
                           'homology and chains disagree: %s != %s' % (chi, c.euler_from_chains()))
    return _compare_polys(name, member, chi, _polynomial(family, fg), family=family)


def check_euler(members:Sequence[CorpusMember], families:Sequence = EULER_FAMILIES, n_jobs:int = 1) -> VerificationReport:
    """The graded Euler characteristic of every family's homology equals its
    polynomial. Genus 0 families skip members of higher genus."""
    jobs = []
    for member in members:
        for family in families:
            if family in GENUS_ZERO_FAMILIES and member.fatgraph.genus:
                continue
            jobs.append(('%s/%s' % (member.name, family), _euler_case, (member, family)))
    return _run('euler', _describe(members, families='+'.join(families)), jobs, n_jobs)


def _square_zero_case(member:CorpusMember, family:str) -> CaseOutcome:
    name = '%s/%s' % (member.name, family)
    fg = member.fatgraph
    if family == 'chromatic':
        c = builders.chromatic_complex(fg, normalized=False, check=False)
    elif family == 'hgr':
        c = builders.hgr_complex(fg.underlying_graph(), check=False)
    elif family == 'trigraded':
        c = builders.trigraded_br_complex(fg, check=False)
    elif family == 'khovanov':
        c = builders.khovanov_cube(fg, check=False)
    elif family == 'b':
        c = builders.b_complex(fg, check=False)
    else:
        c = builders.restricted_br_complex(fg, check=False)
    squares, faces = check_square_zero(c), check_faces(c, limit=1)
    if squares or faces:
        witness = member.witness(family=family, columns=squares,
                                 face=[faces[0][0], faces[0][1], faces[0][2]] if faces else None)
        return CaseOutcome(name, False, witness, 'd^2 != 0 at %r, failing faces %r' % (squares, faces[:1]))
    return CaseOutcome(name, True)


def check_square_zero_suite(members:Sequence[CorpusMember], n_jobs:int = 1) -> VerificationReport:
    """Every differential squares to zero and every 2-face anti-commutes
    (degree 0 is enforced while assembling)."""
    jobs = []
    for member in members:
        for family in ('chromatic', 'restricted', 'trigraded', 'hgr', 'khovanov', 'b'):
            if family in GENUS_ZERO_FAMILIES and member.fatgraph.genus:
                continue
            jobs.append(('%s/%s' % (member.name, family), _square_zero_case, (member, family)))
    return _run('square-zero', _describe(members), jobs, n_jobs)


### Polynomial Identities

def _oracle_case(index:int, graph:AbstractGraph, colours:Sequence) -> CaseOutcome:
    name = 'simple-%d-n%d-e%d' % (index, graph.n, graph.e)
    witness = {'graph': {'n': graph.n, 'edges': [list(edge) for edge in graph.edges]}}
    m = laurent.chromatic(graph)
    for k in colours:
        count = laurent.colorings_oracle(graph, k)
        if m.evaluate(u=k) != count:
            return CaseOutcome(name, False, dict(witness, colours=k), 'M(G,%d) = %s but %d colourings'
                               % (k, m.evaluate(u=k), count))
    t = laurent.tutte(graph)
    if t != laurent.tutte_by_deletion_contraction(graph):
        return CaseOutcome(name, False, witness, 'state-sum and deletion-contraction Tutte polynomials differ')
    u = LaurentPoly.var('u')
    full = (1 << graph.e) - 1
    via_tutte = (-1) ** graph.rank(full) * u ** graph.components(full) * t.substitute('x', 1 - u).substitute('y', 0)
    if via_tutte != m:
        return CaseOutcome(name, False, witness, 'M(G,u) != (-1)^r u^k T(1-u, 0)')
    return CaseOutcome(name, True)


def check_chromatic_oracle(max_vertices:int = 6, max_edges:int = 8, colours:Sequence = (1, 2, 3, 4),
                           n_jobs:int = 1) -> VerificationReport:
    graphs = simple_graphs(max_vertices, max_edges)
    jobs = [('simple-%d' % i, _oracle_case, (i, graph, colours)) for i, graph in enumerate(graphs)]
    return _run('chromatic-oracle', '%d simple graphs (max_vertices=%d, max_edges=%d)'
                % (len(graphs), max_vertices, max_edges), jobs, n_jobs)


def _identities_case(member:CorpusMember) -> CaseOutcome:
    fg = member.fatgraph
    x, y = LaurentPoly.var('x'), LaurentPoly.var('y')
    br = laurent.bollobas_riordan(fg).substitute('z', 1).substitute('x', x - 1).substitute('y', y - 1)
    tutte = laurent.tutte(fg.underlying_graph())
    if br != tutte:
        return CaseOutcome(member.name, False, member.witness(identity='R(F,x-1,y-1,1) = T(G,x,y)'),
                           '%s != %s' % (br, tutte))
    # Both of these raise IdentityMismatch on failure.
    z = laurent.z_poly(fg)
    laurent.restricted_br(fg)
    q = LaurentPoly.var('q')
    collapsed = laurent.r_prime_signed(fg.with_signs((NEGATIVE,) * fg.e)).substitute('r', q).substitute('s', q)
    if collapsed != (-1) ** fg.e * z:
        return CaseOutcome(member.name, False, member.witness(identity="R'(F,q,q,q) = (-1)^e Z(F,q)"),
                           '%s != %s' % (collapsed, (-1) ** fg.e * z))
    return CaseOutcome(member.name, True)


def check_polynomial_identities(members:Sequence[CorpusMember], n_jobs:int = 1) -> VerificationReport:
    jobs = [(member.name, _identities_case, (member,)) for member in members]
    return _run('identities', _describe(members), jobs, n_jobs)


### Universal-coefficient Decompositions

def v_ranks(count:int) -> dict:
    return laurent.binomial_dims(count)


def predicted_decomposition(small:HomologyTable, cycles:dict, v_extra:int, axis:int, arity:int,
                            indices:Sequence) -> tuple:
    """The groups `⊕ (Ĥ^i_p ⊗ △̄(R^{⊗(i-1)})_q ⊕ Ẑ^i_p ⊗ (R^{⊗i}/△̄)_q) ⊗ V^{⊗v}_r`
    keyed by `(i, p + q + r)`, and any torsion met in the quotients."""
    predicted = {}
    torsion = []
    vertex_pieces = v_ranks(v_extra)
    for i in indices:
        quotients = coefficient_quotients(i, axis)
        for q, (m, p_rank, quotient_torsion) in quotients.items():
            if quotient_torsion:
                torsion.append((i, tuple(q), quotient_torsion))
            for (index, p), rank in cycles.items():
                if index != i:
                    continue
                group = small.group(i, p).scaled(m) + HomologyGroup(rank * p_rank)
                for r, copies in vertex_pieces.items():
                    key = (i, (p + q + MultiDegree(r)).project(arity))
                    predicted[key] = predicted.get(key, HomologyGroup()) + group.scaled(copies)
    return HomologyTable(predicted, arity), torsion


def _decomposition_case(member:CorpusMember, kind:str) -> CaseOutcome:
    fg = member.fatgraph
    name = '%s/%s' % (member.name, kind)
    if kind == 'prop52':
        big = homology_of(builders.chromatic_complex(fg, normalized=False))
        small_complex = builders.restricted_br_complex(fg)
        v_extra, axis, arity = 0, 0, 1
        normalized = homology_of(builders.chromatic_complex(fg)).reindex(fg.e)
        if normalized != big:
            return _compare_tables(name, member, normalized, big, kind=kind, check='H^{i+e}(unnormalized) = H^i')
    elif kind == 'prop54':
        big = homology_of(builders.trigraded_br_complex(fg))
        small_complex = builders.trigraded_br_complex(fg, restricted=True)
        v_extra, axis, arity = fg.v, 2, 3
    elif kind == 'thm65':
        big = homology_of(builders.chromatic_complex(fg, normalized=False))
        small_complex = builders.khovanov_cube(fg)
        v_extra, axis, arity = fg.v, 0, 1
    else:
        raise ValueError('decomposition must be one of %s, not %r' % (DECOMPOSITIONS, kind))
    small = homology_of(small_complex)
    predicted, torsion = predicted_decomposition(small, cycle_ranks(small_complex), v_extra, axis, arity,
                                                 small_complex.indices())
    if torsion:
        return CaseOutcome(name, False, member.witness(kind=kind, torsion=[[i, list(q)] for i, q, _ in torsion]),
                           'coefficient quotient has torsion: %r' % torsion)
    return _compare_tables(name, member, big, predicted, kind=kind)


def check_decomposition(members:Sequence[CorpusMember], kind:str = 'prop52', n_jobs:int = 1) -> VerificationReport:
    jobs = []
    for member in members:
        if kind == 'thm65' and member.fatgraph.genus:
            continue
        jobs.append(('%s/%s' % (member.name, kind), _decomposition_case, (member, kind)))
    return _run('decomposition-%s' % kind, _describe(members, kind=kind), jobs, n_jobs)


### Deletion and Contraction

def _delcon_case(member:CorpusMember, edge:int, family:str) -> CaseOutcome:
    name = '%s/e%d/%s' % (member.name, edge, family)
    dc = builders.deletion_contraction(member.fatgraph, edge, family)
    problems = [('eta', i, 'does not commute') for i in dc.eta.commutation_failures()]
    problems += [('nu', i, 'does not commute') for i in dc.nu.commutation_failures()]
    problems += [('eta', i, 'not degree 0') for i, _ in dc.eta.degree_failures()[:1]]
    problems += [('nu', i, 'not degree 0') for i, _ in dc.nu.degree_failures()[:1]]
    # Degree blocks of the sequence only make sense for degree 0 maps.
    if not problems:
        problems = [('sequence', n, reason) for n, _, reason in dc.exactness_failures()]
    if problems:
        return CaseOutcome(name, False, member.witness(edge=edge, family=family),
                           '; '.join('%s at %s: %s' % problem for problem in problems[:5]))
    return CaseOutcome(name, True)


def check_delcon(members:Sequence[CorpusMember], families:Sequence = ('chromatic', 'restricted'),
                 n_jobs:int = 1) -> VerificationReport:
    jobs = []
    for member in members:
        fg = member.fatgraph
        for edge in range(fg.e):
            if fg.is_loop(edge):
                continue
            for family in families:
                jobs.append(('%s/e%d/%s' % (member.name, edge, family), _delcon_case, (member, edge, family)))
    return _run('delcon', _describe(members, families='+'.join(families)), jobs, n_jobs)


### Embeddings

def _embedding_case(index:int, graph:AbstractGraph, max_embeddings:Optional[int]) -> CaseOutcome:
    name = 'graph-%d-n%d-e%d' % (index, graph.n, graph.e)
    planar = enumerate_rotation_systems(graph, genus_filter=0)
    if max_embeddings is not None:
        planar = itertools.islice(planar, max_embeddings + 1)
    planar = list(planar)
    truncated = max_embeddings is not None and len(planar) > max_embeddings
    if truncated:
        planar = planar[:max_embeddings]
    tables = [homology_of(builders.chromatic_complex(fg)) for fg in planar]
    for fg, table in zip(planar[1:], tables[1:]):
        if poincare(table) != poincare(tables[0]):
            return CaseOutcome(name, False, {'fatgraphs': [planar[0].to_document(), fg.to_document()]},
                               'Poincaré polynomials differ: %s != %s' % (poincare(tables[0]), poincare(table)))
    outcome = CaseOutcome(name, True, detail='%d genus 0 rotation systems' % len(planar))
    torsion = [fg.to_document() for fg, table in zip(planar[1:], tables[1:]) if table != tables[0]]
    if torsion:
        outcome.witness['torsion_differs'] = [planar[0].to_document()] + torsion
    if truncated:
        outcome.witness['truncated'] = max_embeddings
    return outcome


def check_embedding_invariance(max_edges:int = 4, max_vertices:Optional[int] = None,
                               max_embeddings:Optional[int] = None, n_jobs:int = 1) -> VerificationReport:
    """Every genus 0 rotation system of each connected planar graph gives the
    same Poincaré polynomial. Full tables that differ (only possible in
    torsion) are recorded as findings. With `max_embeddings`, graphs with more
    genus 0 rotation systems than that are only partly compared, and each is
    recorded as a finding."""
    max_vertices = max_edges + 1 if max_vertices is None else max_vertices
    graphs = [g for g in abstract_graphs(max_vertices, max_edges, connected=True)
              if next(enumerate_rotation_systems(g, genus_filter=0), None) is not None]
    jobs = [('graph-%d' % i, _embedding_case, (i, graph, max_embeddings)) for i, graph in enumerate(graphs)]
    report = _run('embedding', '%d connected planar graphs (max_edges=%d)' % (len(graphs), max_edges), jobs, n_jobs)
    for case in report.cases:
        if not case.passed:
            continue
        if 'torsion_differs' in case.witness:
            report.findings.append({'case': case.name, 'finding': 'tables differ in torsion only',
                                    'fatgraphs': case.witness['torsion_differs']})
        if 'truncated' in case.witness:
            report.findings.append({'case': case.name, 'finding': 'only the first %d genus 0 rotation systems '
                                    'were compared' % case.witness['truncated']})
        case.witness = {}
    return report


def _write_witness(path:Optional[str], doc:dict):
    if path:
        with open(path, 'w') as f:
            json.dump(doc, f, indent=2, sort_keys=True)
            f.write('\n')


def check_genus_sensitivity(max_edges:int = 3, max_vertices:int = 3, witness_path:Optional[str] = None,
                            n_jobs:int = 1) -> VerificationReport:
    """Search for a graph with a genus 0 and a genus 1 rotation system whose
    chromatic homology differs."""
    witness = None
    examined = 0
    for graph in abstract_graphs(max_vertices, max_edges, connected=True):
        by_genus = {}
        for fg in enumerate_rotation_systems(graph):
            by_genus.setdefault(fg.genus, []).append(fg)
        if 0 not in by_genus or 1 not in by_genus:
            continue
        examined += 1
        planar = by_genus[0][0]
        planar_table = homology_of(builders.chromatic_complex(planar))
        tables = Parallel(n_jobs=n_jobs, prefer='threads')(
            delayed(homology_of)(builders.chromatic_complex(fg)) for fg in by_genus[1])
        for fg, table in zip(by_genus[1], tables):
            if table != planar_table:
                witness = {'genus0': planar.to_document(), 'genus1': fg.to_document(),
                           'table0': planar_table.to_json()['groups'], 'table1': table.to_json()['groups']}
                break
        if witness:
            break
    corpus = 'connected graphs with genus 0 and genus 1 embeddings (max_edges=%d)' % max_edges
    if witness is None:
        return VerificationReport('genus-sensitivity', corpus, [CaseOutcome(
            'genus-sensitivity', False, {}, 'no witness among %d graphs' % examined)])
    _write_witness(witness_path, witness)
    return VerificationReport('genus-sensitivity', corpus, [CaseOutcome('genus-sensitivity', True, witness)])


def search_stronger_than_chromatic(max_edges:int = 3, max_vertices:int = 3, witness_path:Optional[str] = None,
                                   n_jobs:int = 1) -> VerificationReport:
    """Search for two fatgraphs with the same `Z(F,q)` and different
    chromatic homology."""
    members = fatgraph_corpus(max_edges, max_vertices)
    by_poly = {}
    for member in members:
        by_poly.setdefault(laurent.z_poly(member.fatgraph), []).append(member)
    witness = None
    for poly, group in sorted(by_poly.items(), key=lambda item: str(item[0])):
        if len(group) < 2:
            continue
        tables = Parallel(n_jobs=n_jobs, prefer='threads')(
            delayed(homology_of)(builders.chromatic_complex(m.fatgraph)) for m in group)
        for (a, ta), (b, tb) in itertools.combinations(zip(group, tables), 2):
            if ta != tb:
                witness = {'z': str(poly), 'first': a.fatgraph.to_document(), 'second': b.fatgraph.to_document(),
                           'table_first': ta.to_json()['groups'], 'table_second': tb.to_json()['groups']}
                break
        if witness:
            break
    corpus = _describe(members, max_edges=max_edges)
    if witness is None:
        return VerificationReport('stronger-than-chromatic', corpus, [CaseOutcome(
            'stronger-than-chromatic', False, {}, 'no pair with equal Z and different homology')])
    _write_witness(witness_path, witness)
    return VerificationReport('stronger-than-chromatic', corpus,
                              [CaseOutcome('stronger-than-chromatic', True, witness)])


def _labeling_case(member:CorpusMember, permutations:list) -> CaseOutcome:
    fg = member.fatgraph
    base = homology_of(builders.chromatic_complex(fg))
    for permutation in permutations:
        table = homology_of(builders.chromatic_complex(relabel_edges(fg, permutation)))
        if table != base:
            return _compare_tables(member.name, member, table, base, permutation=list(permutation))
    reversed_table = homology_of(builders.chromatic_complex(fg, orbit_order='reversed'))
    if reversed_table != base:
        return _compare_tables(member.name, member, reversed_table, base, orbit_order='reversed')
    return CaseOutcome(member.name, True)


def check_labeling_and_correspondence_invariance(members:Sequence[CorpusMember], permutations:int = 5,
                                                 seed:int = 0, n_jobs:int = 1) -> VerificationReport:
    rng = random.Random(seed)
    jobs = []
    for member in members:
        edges = list(range(member.fatgraph.e))
        perms = []
        for _ in range(permutations):
            rng.shuffle(edges)
            perms.append(list(edges))
        jobs.append((member.name, _labeling_case, (member, perms)))
    return _run('labeling', _describe(members, permutations=permutations, seed=seed), jobs, n_jobs)


### Recovery From The Trigraded Theory

def _divisor_counts(group:HomologyGroup) -> tuple:
    return group.free, Counter(group.elementary_divisors())


def deconvolve(table:HomologyTable, count:int, axis:int = 0) -> HomologyTable:
    """Undo `⊗ V^{⊗count}` along `axis`: find `X` with
    `table = ⊕_r X{r} ⊗ Z^{N_r}`. Raises `ValueError` if no such `X` exists."""
    pieces = v_ranks(count)

    def moved(degree, r):
        return MultiDegree(*(x + r if a == axis else x for a, x in enumerate(degree)))
    remaining = {key: _divisor_counts(group) for key, group in table.groups.items()}
    solved = {}
    # The top piece of V^{⊗count} has rank 1, so the highest degree left on
    # each line is a copy of X shifted by `count`.
    for i, degree in sorted(table.groups, key=lambda key: key[1][axis], reverse=True):
        free, divisors = remaining[(i, degree)]
        if free < 0 or any(n < 0 for n in divisors.values()):
            raise ValueError('H^%d at %s is not a multiple of V^%d' % (i, tuple(degree), count))
        if not free and not any(divisors.values()):
            continue
        x = moved(degree, -count)
        solved[(i, x)] = HomologyGroup.from_cyclic(list(divisors.elements()), free)
        for r, copies in pieces.items():
            target = (i, moved(x, r))
            f, d = remaining.get(target, (0, Counter()))
            d = Counter(d)
            d.subtract({order: n * copies for order, n in divisors.items()})
            remaining[target] = (f - free * copies, d)
    for (i, degree), (free, divisors) in remaining.items():
        if free or any(divisors.values()):
            raise ValueError('H^%d at %s is not a multiple of V^%d' % (i, tuple(degree), count))
    return HomologyTable(solved, table.arity, table.variables, table.family, dict(table.metadata))


def _recovery_case(member:CorpusMember) -> CaseOutcome:
    fg = member.fatgraph
    trigraded = homology_of(builders.trigraded_br_complex(fg))
    small_complex = builders.trigraded_br_complex(fg, restricted=True)
    small = homology_of(small_complex)
    cycles = cycle_ranks(small_complex)
    try:
        recovered = deconvolve(trigraded.slice(2, 0), fg.v)
        extremal = {}
        for i in trigraded.indices():
            layer = HomologyTable({(i, degree + MultiDegree(0, 0, 2 * i)): group
                                   for (j, degree), group in trigraded.groups.items()
                                   if j == i and degree.c == -2 * i}, 3)
            extremal.update(deconvolve(layer, fg.v).groups)
    except ValueError as e:
        return CaseOutcome(member.name, False, member.witness(step='deconvolution'), str(e))
    if recovered != small:
        return _compare_tables(member.name, member, recovered, small, step='slice (j,k,0)')
    expected_cycles = HomologyTable({key: HomologyGroup(rank) for key, rank in cycles.items()}, 3)
    if HomologyTable(extremal, 3) != expected_cycles:
        return _compare_tables(member.name, member, HomologyTable(extremal, 3), expected_cycles,
                               step='slice (j,k,-2i)')
    if all(sign == NEGATIVE for sign in fg.signs):
        chromatic = homology_of(builders.chromatic_complex(fg, normalized=False))
        projected = trigraded.project(1, ('q',))
        if projected != chromatic:
            return _compare_tables(member.name, member, projected, chromatic, step='total degree projection')
    if not fg.genus:
        khovanov = homology_of(builders.khovanov_cube(fg))
        projected = recovered.project(1, ('q',))
        if projected != khovanov:
            return _compare_tables(member.name, member, projected, khovanov, step='khovanov recovery')
    return CaseOutcome(member.name, True)


def check_recovery(members:Sequence[CorpusMember], n_jobs:int = 1) -> VerificationReport:
    """Recover the restricted trigraded homology from the trigraded one
    (the `(j,k,0)` slice), its cycles (the `(j,k,-2i)` slice), the chromatic
    table (all-negative members) and the Khovanov table (genus 0 members)."""
    jobs = [(member.name, _recovery_case, (member,)) for member in members]
    return _run('recovery', _describe(members), jobs, n_jobs)


### Künneth

KUNNETH_FAMILIES = ('restricted', 'khovanov', 'hgr', 'b', 'chromatic')


def _kunneth_table(family:str, fg:Fatgraph) -> HomologyTable:
    if family == 'chromatic':
        return homology_of(builders.chromatic_complex(fg, normalized=False))
    return homology_of(builders.FAMILIES[family](fg))


def _kunneth_case(a:CorpusMember, b:CorpusMember, family:str) -> CaseOutcome:
    name = '%s+%s/%s' % (a.name, b.name, family)
    union = disjoint_union(a.fatgraph, b.fatgraph)
    predicted = kunneth_predict(_kunneth_table(family, a.fatgraph), _kunneth_table(family, b.fatgraph))
    actual = _kunneth_table(family, union)
    member = CorpusMember(name, union)
    outcome = _compare_tables(name, member, actual, predicted, family=family, first=a.name, second=b.name)
    if family == 'chromatic' and not outcome.passed:
        # The chromatic complex of a union is not the tensor product of the
        # factors' complexes; mismatches are findings.
        return CaseOutcome(name, True, {'finding': outcome.detail, 'first': a.name, 'second': b.name,
                                        'predicted_ranks': predicted.total_rank(), 'actual_ranks': actual.total_rank()})
    return outcome


def check_kunneth(members:Sequence[CorpusMember], families:Sequence = KUNNETH_FAMILIES, max_edges:int = 2,
                  n_jobs:int = 1) -> VerificationReport:
    jobs = []
    for a, b in union_pairs(members, max_edges):
        for family in families:
            if family in GENUS_ZERO_FAMILIES and (a.fatgraph.genus or b.fatgraph.genus):
                continue
            jobs.append(('%s+%s/%s' % (a.name, b.name, family), _kunneth_case, (a, b, family)))
    report = _run('kunneth', _describe(members, families='+'.join(families)), jobs, n_jobs)
    for case in report.cases:
        if case.passed and 'finding' in case.witness:
            report.findings.append(dict(case=case.name, **case.witness))
            case.witness = {}
    return report


### Registry

@dataclass
class SuiteOptions:
    max_edges: int = 3
    max_vertices: int = 3
    seed: int = 0
    rotations_per_graph: Optional[int] = None
    n_jobs: int = 1
    kind: str = 'prop52'
    witness_dir: Optional[str] = None
    max_embeddings: Optional[int] = None

    def corpus(self, **overrides) -> List[CorpusMember]:
        options = dict(max_edges=self.max_edges, max_vertices=self.max_vertices, seed=self.seed,
                       rotations_per_graph=self.rotations_per_graph)
        options.update(overrides)
        return fatgraph_corpus(**options)

    def witness_path(self, name:str) -> Optional[str]:
        if not self.witness_dir:
            return None
        return os.path.join(self.witness_dir, '%s.json' % name)


def _signed_members(o:SuiteOptions) -> List[CorpusMember]:
    members = signed_corpus('negative', o.max_edges, o.max_vertices, o.seed, o.rotations_per_graph)
    for pattern in ('positive', 'mixed'):
        members += signed_corpus(pattern, o.max_edges, o.max_vertices, o.seed, o.rotations_per_graph, genus=0)
    return members


SUITES = {
    'euler': lambda o: check_euler(_signed_members(o), n_jobs=o.n_jobs),
    'square-zero': lambda o: check_square_zero_suite(o.corpus(), o.n_jobs),
    'oracle': lambda o: check_chromatic_oracle(n_jobs=o.n_jobs),
    'identities': lambda o: check_polynomial_identities(o.corpus(), o.n_jobs),
    'decomposition': lambda o: check_decomposition(
        signed_corpus('negative', o.max_edges, o.max_vertices, o.seed, o.rotations_per_graph)
        if o.kind == 'prop54' else o.corpus(), o.kind, o.n_jobs),
    'delcon': lambda o: check_delcon(o.corpus(), n_jobs=o.n_jobs),
    'embedding': lambda o: check_embedding_invariance(o.max_edges, max_embeddings=o.max_embeddings, n_jobs=o.n_jobs),
    'genus': lambda o: check_genus_sensitivity(o.max_edges, o.max_vertices, o.witness_path('genus'), o.n_jobs),
    'stronger': lambda o: search_stronger_than_chromatic(o.max_edges, o.max_vertices, o.witness_path('stronger'),
                                                         o.n_jobs),
    'labeling': lambda o: check_labeling_and_correspondence_invariance(o.corpus(), seed=o.seed, n_jobs=o.n_jobs),
    'recovery': lambda o: check_recovery(_signed_members(o), o.n_jobs),
    'kunneth': lambda o: check_kunneth(o.corpus(max_edges=min(o.max_edges, 2), max_vertices=min(o.max_vertices, 2)),
                                       n_jobs=o.n_jobs),
}


def run_suite(name:str, options:SuiteOptions = None) -> VerificationReport:
    if name not in SUITES:
        raise ValueError('unknown suite %r, expected one of %s' % (name, ', '.join(sorted(SUITES))))
    return SUITES[name](options or SuiteOptions())
