import unittest

from fathom import homology
from fathom.cube import ChainComplex, GradedBasisWord, MultiDegree, SparseMatrix, X_0, X_MINUS_2, tensor
from fathom.homology import HomologyGroup, HomologyTable
from fathom.laurent import LaurentPoly

q, t = LaurentPoly.var('q'), LaurentPoly.var('t')


def two_term(multiplier:int = 2) -> ChainComplex:
    bases = {0: [GradedBasisWord(0, ('a',), MultiDegree())], 1: [GradedBasisWord(1, ('b',), MultiDegree())]}
    return ChainComplex(bases, {0: SparseMatrix(1, 1, [{0: multiplier}])})


class SmithNormalFormTests(unittest.TestCase):

    def test_dense(self):
        m = [[2, 4], [6, 8]]
        factors, left, diagonal, right = homology.smith_normal_form(m, transforms=True)
        self.assertEqual(factors, [2, 4])
        self.assertEqual(homology.matmul(homology.matmul(left, m), right), diagonal)

    def test_sparse_agrees_with_dense(self):
        m = [[2, 4, 0], [6, 8, 3], [0, 0, 6]]
        columns = [{row: m[row][col] for row in range(3) if m[row][col]} for col in range(3)]
        self.assertEqual(homology.invariant_factors(3, columns), homology.smith_normal_form(m))

    def test_normalize_diagonal(self):
        self.assertEqual(homology.normalize_diagonal([4, 6]), [2, 12])
        self.assertEqual(homology.normalize_diagonal([0, -3]), [3])

    def test_ranks(self):
        self.assertEqual(homology.rank(2, [{0: 1, 1: 2}, {0: 2, 1: 4}]), 1)
        self.assertEqual(homology.rational_rank([[1, 2], [2, 4]]), 1)
        self.assertEqual(homology.rational_rank([]), 0)


class GroupTests(unittest.TestCase):

    def test_normal_form(self):
        self.assertEqual(HomologyGroup(1, (4, 6)).torsion, (2, 12))
        self.assertEqual(HomologyGroup.from_cyclic([2, 3]), HomologyGroup(0, (6,)))
        self.assertEqual(HomologyGroup.from_cyclic([2, 3]).elementary_divisors(), [2, 3])
        self.assertTrue(HomologyGroup(0, (1,)).is_zero())

    def test_rendering(self):
        self.assertEqual(str(HomologyGroup(2, (2,))), 'Z^2 + Z/2')
        self.assertEqual(str(HomologyGroup(1)), 'Z')
        self.assertEqual(str(HomologyGroup()), '0')

    def test_tensor_and_tor(self):
        z2, z4, z = HomologyGroup(0, (2,)), HomologyGroup(0, (4,)), HomologyGroup(1)
        self.assertEqual(z2.tensor(z4), z2)
        self.assertEqual(z.tensor(HomologyGroup(0, (3,))), HomologyGroup(0, (3,)))
        self.assertEqual(z2.tor(z4), z2)
        self.assertTrue(z.tor(z4).is_zero())
        self.assertEqual(z2 + z.scaled(2), HomologyGroup(2, (2,)))


class TableTests(unittest.TestCase):

    def setUp(self):
        self.table = HomologyTable({(0, (1, 0, 0)): HomologyGroup(1), (1, (0, 0, -2)): HomologyGroup(0, (2,)),
                                    (1, (-1, 0, 0)): HomologyGroup()}, 3, ('q', 'r', 's'))

    def test_zero_groups_are_dropped(self):
        self.assertEqual(len(self.table.groups), 2)
        self.assertEqual(self.table.indices(), [0, 1])
        self.assertTrue(self.table.has_torsion())

    def test_slice(self):
        self.assertEqual(list(self.table.slice(2, -2).groups), [(1, MultiDegree(0, 0, -2))])

    def test_project(self):
        projected = self.table.project(1)
        self.assertEqual(projected.variables, ('q',))
        self.assertEqual(projected.group(1, (-2,)), HomologyGroup(0, (2,)))

    def test_reindex(self):
        moved = self.table.reindex(-1, 2)
        self.assertEqual(moved.group(-1, (3, 0, 0)), HomologyGroup(1))

    def test_json(self):
        doc = self.table.to_json()
        self.assertEqual(doc['groups'][0], {'index': 0, 'degree': [1, 0, 0], 'free': 1, 'torsion': []})
        self.assertEqual(HomologyTable.from_json(doc), self.table)

    def test_poincare_and_euler(self):
        table = HomologyTable({(0, (1,)): HomologyGroup(1), (1, (-1,)): HomologyGroup(2, (3,))})
        self.assertEqual(homology.poincare(table), q + 2 * t * q ** -1)
        self.assertEqual(homology.euler(table), q - 2 * q ** -1)
        self.assertEqual(table.total_rank(), 3)


class ComplexHomologyTests(unittest.TestCase):

    def test_two_term(self):
        h = homology.homology_of(two_term())
        self.assertEqual(h.entries(), [((1, MultiDegree()), HomologyGroup(0, (2,)))])
        self.assertEqual(homology.homology_of(two_term(1)).entries(), [])

    def test_tensor_square(self):
        c = tensor(two_term(), two_term())
        h = homology.homology_of(c)
        self.assertEqual(h.group(1, (0,)), HomologyGroup(0, (2,)))
        self.assertEqual(h.group(2, (0,)), HomologyGroup(0, (2,)))
        self.assertTrue(h.group(0, (0,)).is_zero())
        # Tor(Z/2, Z/2) lands one index below the tensor product.
        self.assertEqual(homology.kunneth_predict(homology.homology_of(two_term()),
                                                  homology.homology_of(two_term())), h)

    def test_cycle_and_rational_ranks(self):
        c = tensor(two_term(), two_term())
        degree = MultiDegree()
        self.assertEqual(homology.cycle_ranks(c), {(0, degree): 0, (1, degree): 1, (2, degree): 1})
        self.assertEqual(homology.rational_free_ranks(c), {(0, degree): 0, (1, degree): 0, (2, degree): 0})

    def test_parallel_blocks(self):
        c = tensor(two_term(), two_term())
        self.assertEqual(homology.homology_of(c, n_jobs=2), homology.homology_of(c))


class CoefficientTowerTests(unittest.TestCase):

    def test_words(self):
        self.assertEqual(homology.coefficient_words(2),
                         [(X_0, X_0), (X_0, X_MINUS_2), (X_MINUS_2, X_0), (X_MINUS_2, X_MINUS_2)])

    def test_quotients(self):
        self.assertEqual(homology.coefficient_quotients(1),
                         {MultiDegree(0): (1, 0, ()), MultiDegree(-2): (0, 1, ())})
        self.assertEqual(homology.coefficient_quotients(2, axis=2),
                         {MultiDegree(): (1, 0, ()), MultiDegree(0, 0, -2): (1, 1, ()),
                          MultiDegree(0, 0, -4): (0, 1, ())})


if __name__ == '__main__':
    unittest.main()
