import os
import tempfile
import unittest

from fathom import verify
from fathom.fatgraph import AbstractGraph, enumerate_rotation_systems
from fathom.homology import HomologyGroup, HomologyTable
from fathom.tests.utils import load_fixture


def tiny_corpus():
    return verify.fatgraph_corpus(max_edges=2, max_vertices=2)


class CorpusTests(unittest.TestCase):

    def test_abstract_graphs(self):
        self.assertEqual(len(verify.abstract_graphs(1, 1)), 2)
        self.assertEqual(len(verify.abstract_graphs(2, 1)), 5)
        self.assertEqual(len(verify.abstract_graphs(2, 1, connected=True)), 3)

    def test_fatgraph_corpus(self):
        members = verify.fatgraph_corpus(max_edges=1, max_vertices=2)
        self.assertEqual(len(members), 5)
        self.assertEqual(members[0].name, 'v1-e0-g0-r0')
        self.assertEqual(members[0].witness(family='b')['family'], 'b')

    def test_sampled_rotations(self):
        members = verify.fatgraph_corpus(max_edges=2, max_vertices=1, rotations_per_graph=1)
        self.assertEqual(len(members), 3)

    def test_signed_corpus(self):
        first = verify.signed_corpus('mixed', 2, 2, seed=3)
        second = verify.signed_corpus('mixed', 2, 2, seed=3)
        self.assertEqual([m.name for m in first], [m.name for m in second])
        self.assertTrue(all(m.fatgraph.signs == ('+',) * m.fatgraph.e
                            for m in verify.signed_corpus('positive', 2, 2)))
        self.assertTrue(verify.signed_corpus('negative', 1, 1)[0].name.endswith('-o'))
        with self.assertRaises(ValueError):
            verify.signed_corpus('striped')

    def test_genus_filter(self):
        members = verify.signed_corpus('negative', 2, 1, genus=1)
        self.assertEqual([m.fatgraph.genus for m in members], [1, 1])

    def test_simple_graphs(self):
        graphs = verify.simple_graphs(3, 3)
        # One, two and three vertices: 1 + 2 + 4 graphs.
        self.assertEqual(len(graphs), 7)
        self.assertFalse(any(graph.has_loop for graph in graphs))

    def test_union_pairs(self):
        members = verify.fatgraph_corpus(max_edges=1, max_vertices=1)
        self.assertEqual(len(verify.union_pairs(members, max_edges=1)), 3)


class ReportTests(unittest.TestCase):

    def test_summary(self):
        report = verify.VerificationReport('s', 'c', [verify.CaseOutcome('b', False, detail='no'),
                                                      verify.CaseOutcome('a', True)])
        self.assertEqual([case.name for case in report.cases], ['a', 'b'])
        self.assertFalse(report.ok)
        self.assertEqual(report.summary(), {'cases': 2, 'passed': 1, 'failed': 1})
        self.assertEqual(report.to_json()['cases'][1], {'name': 'b', 'passed': False, 'detail': 'no'})

    def test_table_witness(self):
        member = verify.CorpusMember('edge', load_fixture('single_edge'))
        got = HomologyTable({(0, (0,)): HomologyGroup(1)})
        expected = HomologyTable({(0, (0,)): HomologyGroup(2)})
        outcome = verify._compare_tables('edge', member, got, expected)
        self.assertFalse(outcome.passed)
        self.assertEqual(outcome.witness['index'], 0)
        self.assertEqual(outcome.witness['expected'], 'Z^2')
        self.assertIn('fatgraph', outcome.witness)

    def test_library_errors_become_failures(self):
        member = verify.CorpusMember('loop', load_fixture('planar_loop'))
        outcome = verify._guarded('loop', verify._delcon_case, member, 0, 'chromatic')
        self.assertFalse(outcome.passed)
        self.assertIn('FatgraphError', outcome.detail)


class DeconvolveTests(unittest.TestCase):

    def test_free(self):
        table = HomologyTable({(0, (1,)): HomologyGroup(1), (0, (-1,)): HomologyGroup(1)})
        self.assertEqual(verify.deconvolve(table, 1), HomologyTable({(0, (0,)): HomologyGroup(1)}))

    def test_torsion(self):
        table = HomologyTable({(2, (3,)): HomologyGroup(0, (2,)), (2, (1,)): HomologyGroup(1, (2,)),
                               (2, (-1,)): HomologyGroup(1)})
        expected = HomologyTable({(2, (2,)): HomologyGroup(0, (2,)), (2, (0,)): HomologyGroup(1)})
        self.assertEqual(verify.deconvolve(table, 1), expected)

    def test_not_a_multiple(self):
        with self.assertRaises(ValueError):
            verify.deconvolve(HomologyTable({(0, (1,)): HomologyGroup(1)}), 1)

    def test_axis(self):
        table = HomologyTable({(0, (0, 0, 2)): HomologyGroup(1), (0, (0, 0, 0)): HomologyGroup(2),
                               (0, (0, 0, -2)): HomologyGroup(1)}, 3)
        self.assertEqual(verify.deconvolve(table, 2, axis=2), HomologyTable({(0, (0, 0, 0)): HomologyGroup(1)}, 3))


class SuiteTests(unittest.TestCase):

    def assertPasses(self, report):
        self.assertTrue(report.cases, report.suite)
        self.assertEqual(report.failures, [], [case.to_json() for case in report.failures])

    def test_euler(self):
        self.assertPasses(verify.check_euler(tiny_corpus()))
        for pattern in ('positive', 'mixed'):
            self.assertPasses(verify.check_euler(verify.signed_corpus(pattern, 2, 2, genus=0)))
        self.assertPasses(verify.check_euler(verify.signed_corpus('mixed', 2, 2, genus=0), ('jones',)))

    def test_euler_suite_covers_signed_corpora(self):
        report = verify.run_suite('euler', verify.SuiteOptions(max_edges=1, max_vertices=1))
        self.assertTrue(report.ok)
        self.assertTrue(any(case.name.split('/')[0].endswith('-+') for case in report.cases))

    def test_square_zero(self):
        self.assertPasses(verify.check_square_zero_suite(tiny_corpus()))

    def test_oracle(self):
        self.assertPasses(verify.check_chromatic_oracle(max_vertices=4, max_edges=4))

    def test_identities(self):
        self.assertPasses(verify.check_polynomial_identities(tiny_corpus()))

    def test_decompositions(self):
        for kind in verify.DECOMPOSITIONS:
            corpus = verify.signed_corpus('negative', 2, 2) if kind == 'prop54' else tiny_corpus()
            self.assertPasses(verify.check_decomposition(corpus, kind))
        with self.assertRaises(ValueError):
            verify._decomposition_case(tiny_corpus()[0], 'prop99')

    def test_delcon(self):
        self.assertPasses(verify.check_delcon(tiny_corpus()))

    def test_embedding(self):
        report = verify.check_embedding_invariance(max_edges=2)
        self.assertPasses(report)
        self.assertEqual(report.findings, [])

    def test_embedding_compares_every_rotation_system(self):
        bouquet = AbstractGraph(1, ((0, 0),) * 3)
        planar = list(enumerate_rotation_systems(bouquet, genus_filter=0))
        self.assertGreater(len(planar), 24)
        outcome = verify._embedding_case(0, bouquet, None)
        self.assertTrue(outcome.passed)
        self.assertEqual(outcome.detail, '%d genus 0 rotation systems' % len(planar))

    def test_capped_embedding_run_is_a_finding(self):
        report = verify.check_embedding_invariance(max_edges=2, max_embeddings=1)
        self.assertPasses(report)
        self.assertTrue(report.findings)
        self.assertTrue(all('only the first 1' in finding['finding'] for finding in report.findings))

    def test_labeling(self):
        self.assertPasses(verify.check_labeling_and_correspondence_invariance(tiny_corpus(), permutations=2))

    def test_recovery(self):
        self.assertPasses(verify.check_recovery(verify.signed_corpus('negative', 2, 2)))

    def test_kunneth(self):
        members = verify.fatgraph_corpus(max_edges=1, max_vertices=2)
        self.assertPasses(verify.check_kunneth(members, ('restricted', 'khovanov', 'hgr', 'b'), max_edges=1))

    def test_kunneth_chromatic_mismatch_is_a_finding(self):
        members = verify.fatgraph_corpus(max_edges=1, max_vertices=2)
        report = verify.check_kunneth(members, ('chromatic',), max_edges=1)
        self.assertTrue(report.ok)
        for finding in report.findings:
            self.assertIn('finding', finding)

    def test_kunneth_chromatic_finding_on_two_edges(self):
        edge = verify.CorpusMember('edge', load_fixture('single_edge'))
        outcome = verify._kunneth_case(edge, edge, 'chromatic')
        self.assertTrue(outcome.passed)
        self.assertEqual(outcome.witness['predicted_ranks'], 24 * 24)
        self.assertIn('expected 0,', outcome.witness['finding'])

    def test_parallel(self):
        serial = verify.check_polynomial_identities(tiny_corpus())
        parallel = verify.check_polynomial_identities(tiny_corpus(), n_jobs=2)
        self.assertEqual(parallel.to_json(), serial.to_json())

    def test_searches_report_one_case(self):
        for report in (verify.check_genus_sensitivity(max_edges=2, max_vertices=1),
                       verify.search_stronger_than_chromatic(max_edges=1, max_vertices=2)):
            self.assertEqual(len(report.cases), 1)


class RegistryTests(unittest.TestCase):

    def test_options(self):
        options = verify.SuiteOptions(max_edges=1, max_vertices=1)
        self.assertEqual(len(options.corpus()), 2)
        self.assertIsNone(options.witness_path('genus'))
        with tempfile.TemporaryDirectory() as d:
            self.assertEqual(verify.SuiteOptions(witness_dir=d).witness_path('genus'), os.path.join(d, 'genus.json'))

    def test_run_suite(self):
        report = verify.run_suite('identities', verify.SuiteOptions(max_edges=1, max_vertices=2))
        self.assertEqual(report.suite, 'identities')
        self.assertTrue(report.ok)

    def test_unknown_suite(self):
        with self.assertRaises(ValueError):
            verify.run_suite('everything')


if __name__ == '__main__':
    unittest.main()
