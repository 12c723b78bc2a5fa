import io
import json
import os
import tempfile
import unittest
from unittest import mock

from fathom import cli, verify
from fathom.__main__ import run
from fathom.fatgraph import AbstractGraph, Fatgraph, FatgraphError
from fathom.tests.utils import fixture_path, load_fixture, with_fatgraph


class DocumentTests(unittest.TestCase):

    def test_kinds(self):
        self.assertIsInstance(load_fixture('theta'), Fatgraph)
        self.assertIsInstance(load_fixture('triangle'), AbstractGraph)

    def test_missing_field(self):
        with self.assertRaisesRegex(cli.DocumentError, r"^\$: missing field 'edges'"):
            cli.parse_document({'vertices': []})

    def test_bad_halves(self):
        doc = {'vertices': [{'id': 0, 'rotation': [0, 1]}], 'edges': [{'id': 0, 'halves': [0, 'x']}]}
        with self.assertRaises(cli.DocumentError) as cm:
            cli.parse_document(doc)
        self.assertEqual(cm.exception.path, '$.edges[0].halves')

    def test_bad_graph_edge(self):
        with self.assertRaises(cli.DocumentError) as cm:
            cli.parse_document({'graph': {'n': 2, 'edges': [[0, 1, 1]]}})
        self.assertEqual(cm.exception.path, '$.graph.edges[0]')
        with self.assertRaises(cli.DocumentError):
            cli.parse_document({'graph': {'n': 2, 'edges': [[0, 5]]}})

    def test_invalid_json(self):
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, 'broken.json')
            with open(path, 'w') as f:
                f.write('{"vertices": [\n')
            with self.assertRaisesRegex(cli.DocumentError, 'invalid JSON at line 2'):
                cli.load_document(path)

    def test_serialize(self):
        self.assertEqual(cli.serialize({'b': 1, 'a': [2]}), '{\n  "a": [\n    2\n  ],\n  "b": 1\n}\n')


class PolynomialCommandTests(unittest.TestCase):

    @with_fatgraph
    def test_single_edge(self):
        self.assertEqual(cli.cmd_poly(self.fg, 'jones'), 'q+q^-1\n')
        self.assertEqual(cli.cmd_poly(self.fg, 'jones-unnormalized'), '-q^3-q\n')
        self.assertEqual(cli.cmd_poly(self.fg, 'jones', n_minus=0, n_plus=0), '-q^3-q\n')

    @with_fatgraph
    def test_triangle(self):
        self.assertEqual(cli.cmd_poly(self.graph, 'chromatic'), 'u^3-3*u^2+2*u\n')
        doc = json.loads(cli.cmd_poly(self.graph, 'chromatic', as_json=True))
        self.assertEqual(doc, {'which': 'chromatic', 'variables': ['u'], 'text': 'u^3-3*u^2+2*u',
                               'terms': [[1, 2], [2, -3], [3, 1]]})

    @with_fatgraph
    def test_interleaved_two_loops(self):
        with self.assertRaisesRegex(FatgraphError, 'genus 0'):
            cli.cmd_poly(self.fg, 'jones')
        table = json.loads(cli.cmd_table(self.fg))
        self.assertEqual(table['genus'], 1)
        self.assertNotIn('jones', table['polynomials'])
        self.assertEqual(table['polynomials']['tutte'], 'y^2')

    def test_unknown(self):
        with self.assertRaises(ValueError):
            cli.polynomial(load_fixture('single_edge'), 'alexander')


class HomologyCommandTests(unittest.TestCase):

    @with_fatgraph
    def test_planar_loop(self):
        doc = json.loads(cli.cmd_homology(self.fg, 'khovanov'))
        self.assertEqual(doc['groups'], [{'index': 0, 'degree': [-2], 'free': 1, 'torsion': []},
                                         {'index': 0, 'degree': [0], 'free': 1, 'torsion': []}])
        self.assertEqual(cli.cmd_homology(self.fg, 'khovanov', show_euler=True), '1+q^-2\n')

    @with_fatgraph
    def test_single_edge(self):
        doc = json.loads(cli.cmd_homology(self.fg, 'khovanov', n_minus=1, n_plus=0))
        self.assertEqual([(g['index'], g['degree']) for g in doc['groups']], [(0, [-1]), (0, [1])])
        self.assertEqual(doc['metadata']['n_minus'], 1)
        complex_doc = json.loads(cli.cmd_complex(self.fg, 'rbr'))
        self.assertEqual([column['index'] for column in complex_doc['columns']], [0, 1])

    @with_fatgraph
    def test_triangle(self):
        doc = json.loads(cli.cmd_homology(self.graph, 'hgr'))
        self.assertEqual(doc['variables'], ['r'])

    def test_unknown_family(self):
        with self.assertRaises(ValueError):
            cli.build_complex(load_fixture('single_edge'), 'odd')


class OtherCommandTests(unittest.TestCase):

    @with_fatgraph
    def test_theta_graph(self):
        self.assertEqual(len(json.loads(cli.cmd_embeddings(self.graph))), 4)
        self.assertEqual(len(json.loads(cli.cmd_embeddings(self.graph, genus=0))), 2)

    @with_fatgraph
    def test_planar_loop(self):
        doc = json.loads(cli.cmd_augmentation(self.fg, 'g', [1, 0]))
        self.assertEqual(doc, {'kind': 'g', 'values': [1, 0], 'chain_map': False, 'failures': [0]})

    def test_verify(self):
        text, ok = cli.cmd_verify('identities', verify.SuiteOptions(max_edges=1, max_vertices=2))
        self.assertTrue(ok)
        self.assertEqual(json.loads(text)['suite'], 'identities')

    @with_fatgraph
    def test_single_edge(self):
        markdown = cli.cmd_report(self.fg, 'edge', markdown_only=True)
        self.assertTrue(markdown.startswith('# edge'))
        self.assertIn('```json', markdown)
        self.assertIn('## Chromatic homology', markdown)
        html = cli.cmd_report(self.fg, 'edge', ('chromatic', 'khovanov'))
        self.assertIn('<title>edge</title>', html)
        self.assertIn('Khovanov homology', html)


class MainTests(unittest.TestCase):

    def run_main(self, *argv):
        with mock.patch('sys.stdout', new_callable=io.StringIO) as stdout:
            status = run(list(argv))
        return status, stdout.getvalue()

    def test_poly(self):
        self.assertEqual(self.run_main('poly', fixture_path('single_edge'), 'jones'), (0, 'q+q^-1\n'))

    def test_missing_file(self):
        with self.assertLogs(level='ERROR'):
            status, _ = self.run_main('poly', fixture_path('no_such_fatgraph'), 'z')
        self.assertEqual(status, 1)

    def test_library_error(self):
        with self.assertLogs(level='ERROR') as logs:
            status, _ = self.run_main('poly', fixture_path('interleaved_two_loops'), 'jones')
        self.assertEqual(status, 1)
        self.assertIn('FatgraphError', logs.output[0])

    def test_output_file(self):
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, 'table.json')
            status, printed = self.run_main('table', fixture_path('planar_loop'), '-o', path)
            self.assertEqual((status, printed), (0, ''))
            with open(path) as f:
                self.assertEqual(json.load(f)['genus'], 0)

    def test_report_directory(self):
        with tempfile.TemporaryDirectory() as d:
            status, _ = self.run_main('report', fixture_path('single_edge'), '-d', d)
            self.assertEqual(status, 0)
            self.assertTrue(os.path.exists(os.path.join(d, 'single_edge.html')))
            self.assertTrue(os.path.exists(os.path.join(d, 'fathom.css')))

    def test_verify(self):
        status, printed = self.run_main('verify', 'identities', '--max-edges', '1', '--max-vertices', '2')
        self.assertEqual(status, 0)
        self.assertTrue(json.loads(printed)['summary']['cases'])


if __name__ == '__main__':
    unittest.main()
