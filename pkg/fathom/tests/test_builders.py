import os
import unittest
from unittest import mock

from fathom import builders, cube, laurent
from fathom.fatgraph import CapExceeded, Fatgraph, FatgraphError
from fathom.homology import HomologyGroup, euler, homology_of
from fathom.laurent import LaurentPoly, v_dim
from fathom.tests.utils import load_fixture, with_fatgraph

q = LaurentPoly.var('q')
qq = v_dim('q')


class ChromaticTests(unittest.TestCase):

    @with_fatgraph
    def test_isolated_vertex(self):
        h = homology_of(builders.chromatic_complex(self.fg))
        self.assertEqual(h.indices(), [0])
        self.assertEqual(h.qdim(0), qq ** 2)

    @with_fatgraph
    def test_single_edge(self):
        c = builders.chromatic_complex(self.fg)
        self.assertEqual(c.indices(), [-1, 0])
        self.assertEqual((c.differential(-1).rows, c.differential(-1).cols), (32, 8))
        h = homology_of(c)
        self.assertEqual(h.indices(), [0])
        self.assertEqual(h.total_rank(0), 24)
        self.assertFalse(h.has_torsion())
        self.assertEqual(euler(h), laurent.z_poly(self.fg))

    @with_fatgraph
    def test_planar_loop(self):
        h = homology_of(builders.chromatic_complex(self.fg))
        self.assertEqual(h.qdim(-1), qq * (1 + q ** -2))
        self.assertEqual(h.qdim(0), q ** -1 * qq ** 2)

    def test_unnormalized_is_a_shift(self):
        fg = load_fixture('planar_two_loops')
        normalized = homology_of(builders.chromatic_complex(fg))
        unnormalized = homology_of(builders.chromatic_complex(fg, normalized=False))
        self.assertEqual(normalized.reindex(fg.e), unnormalized)
        self.assertEqual(euler(normalized), laurent.z_poly(fg))

    def test_orbit_order(self):
        fg = load_fixture('interleaved_two_loops')
        reversed_order = builders.chromatic_complex(fg, orbit_order='reversed')
        self.assertEqual(homology_of(reversed_order), homology_of(builders.chromatic_complex(fg)))
        with self.assertRaises(ValueError):
            builders.chromatic_complex(fg, orbit_order='sideways')

    def test_faces_commute(self):
        c = builders.chromatic_complex(load_fixture('theta'), check=False)
        self.assertEqual(cube.check_square_zero(c), [])
        self.assertEqual(cube.check_faces(c), [])


class RestrictedTests(unittest.TestCase):

    @with_fatgraph
    def test_single_edge(self):
        c = builders.restricted_br_complex(self.fg)
        self.assertEqual((c.differential(0).rows, c.differential(0).cols), (16, 8))
        self.assertEqual(euler(homology_of(c)), laurent.restricted_br(self.fg))

    @with_fatgraph
    def test_interleaved_two_loops(self):
        h = homology_of(builders.restricted_br_complex(self.fg))
        self.assertEqual(euler(h), laurent.restricted_br(self.fg))


class TrigradedTests(unittest.TestCase):

    def assertCollapsesToChromatic(self, fg):
        trigraded = homology_of(builders.trigraded_br_complex(fg))
        self.assertEqual(trigraded.arity, 3)
        chromatic = homology_of(builders.chromatic_complex(fg, normalized=False))
        self.assertEqual(trigraded.project(1), chromatic)

    def test_single_edge(self):
        self.assertCollapsesToChromatic(load_fixture('single_edge'))

    def test_interleaved_two_loops(self):
        self.assertCollapsesToChromatic(load_fixture('interleaved_two_loops'))

    def test_restricted_subcomplex(self):
        c = builders.trigraded_br_complex(load_fixture('interleaved_two_loops'), restricted=True)
        # Full state: one boundary circle and a genus-1 block of two U factors.
        self.assertEqual(c.rank(0), 8)
        self.assertEqual(cube.check_square_zero(c), [])


class KhovanovTests(unittest.TestCase):

    @with_fatgraph
    def test_single_edge(self):
        h = homology_of(builders.khovanov_cube(self.fg))
        self.assertEqual(h.indices(), [1])
        self.assertEqual(h.qdim(1), q ** 3 + q)
        normalized = builders.khovanov_reindex(h, 1, 0)
        self.assertEqual(normalized.qdim(0), qq)
        self.assertEqual(normalized.metadata['n_minus'], 1)
        self.assertEqual(euler(normalized), laurent.jones_normalized(self.fg, 1, 0))

    @with_fatgraph
    def test_planar_loop(self):
        h = homology_of(builders.khovanov_cube(self.fg))
        self.assertEqual(h.indices(), [0])
        self.assertEqual(h.qdim(0), 1 + q ** -2)

    def test_reflected(self):
        fg = load_fixture('single_edge')
        c = builders.khovanov_cube(fg, reflect=True)
        self.assertEqual(c.rank(0), 4)
        self.assertEqual(c.metadata['reflect'], True)

    def test_genus_one(self):
        with self.assertRaisesRegex(FatgraphError, 'genus 0'):
            builders.khovanov_cube(load_fixture('interleaved_two_loops'))


class GraphComplexTests(unittest.TestCase):

    @with_fatgraph
    def test_triangle(self):
        h = homology_of(builders.hgr_complex(self.graph))
        self.assertEqual(h.variables, ('r',))
        self.assertEqual(euler(h), laurent.hgr_poly(self.graph))

    def test_b_complex(self):
        c = builders.b_complex(load_fixture('single_edge'))
        self.assertEqual((c.arity, c.variables), (2, ('q', 'r')))
        self.assertEqual([c.rank(i) for i in c.indices()], [16, 4])

    def test_families(self):
        fg = load_fixture('planar_2cycle')
        for name, build in sorted(builders.FAMILIES.items()):
            self.assertEqual(cube.check_square_zero(build(fg)), [], name)


class DeletionContractionTests(unittest.TestCase):

    def assertExact(self, fg, edge, family):
        dc = builders.deletion_contraction(fg, edge, family)
        self.assertEqual(dc.eta.degree_failures(), [])
        self.assertEqual(dc.nu.degree_failures(), [])
        self.assertTrue(dc.eta.is_chain_map())
        self.assertTrue(dc.nu.is_chain_map())
        self.assertEqual(dc.exactness_failures(), [])

    def test_single_edge(self):
        fg = load_fixture('single_edge')
        self.assertExact(fg, 0, 'chromatic')
        self.assertExact(fg, 0, 'restricted')

    def test_planar_2cycle(self):
        self.assertExact(load_fixture('planar_2cycle'), 0, 'chromatic')

    def test_loop(self):
        with self.assertRaisesRegex(FatgraphError, 'loop'):
            builders.deletion_contraction(load_fixture('planar_loop'), 0)

    def test_family(self):
        with self.assertRaises(ValueError):
            builders.deletion_contraction(load_fixture('single_edge'), 0, 'khovanov')

    def test_absorb(self):
        self.assertEqual(builders.absorb_coefficient((), cube.X_0), {(cube.X_0,): 1})
        self.assertEqual(builders.absorb_coefficient((cube.X_MINUS_2,), cube.X_0),
                         {(cube.X_0, cube.X_MINUS_2): 1})


class InclusionTests(unittest.TestCase):

    def test_vertex_into_edge(self):
        f = builders.inclusion_chain_map(load_fixture('isolated_vertex'), load_fixture('single_edge'), [0], [])
        self.assertEqual(f.index_shift, 1)
        self.assertTrue(f.is_chain_map())
        self.assertEqual(builders.induced_rank(f, 0), 4)

    def test_bad_vertex_map(self):
        with self.assertRaises(FatgraphError):
            builders.inclusion_chain_map(load_fixture('single_edge'), load_fixture('single_edge'), [0, 0], [0])


class AugmentationTests(unittest.TestCase):

    def test_f_commutes(self):
        for name in ('single_edge', 'planar_loop'):
            self.assertEqual(builders.check_augmentation(load_fixture(name), 'f'), [], name)

    def test_g(self):
        self.assertEqual(builders.check_augmentation(load_fixture('planar_loop'), 'g', (0, 0)), [])
        self.assertEqual(builders.check_augmentation(load_fixture('planar_loop'), 'g', (1, 0)), [0])
        self.assertEqual(builders.check_augmentation(load_fixture('single_edge'), 'g', (0, 1)), [0])

    def test_kind(self):
        with self.assertRaises(ValueError):
            builders.augmentation_chain_map(load_fixture('single_edge'), 'h')


class CapTests(unittest.TestCase):

    def test_generator_cap(self):
        with mock.patch.dict(os.environ, {cube.MAX_GENERATORS_ENV: '10'}):
            with self.assertRaisesRegex(CapExceeded, 'chromatic'):
                builders.chromatic_complex(load_fixture('single_edge'))

    def test_from_graph_keeps_structure(self):
        fg = Fatgraph.from_graph(load_fixture('triangle'))
        c = builders.hgr_complex(fg.underlying_graph())
        self.assertEqual(c.rank(0), 2 ** 3)


if __name__ == '__main__':
    unittest.main()
