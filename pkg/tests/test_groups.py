import os
import tempfile
import unittest

from flat_witness.groups.core import (
    GroupTableError,
    NotNormalError,
    direct_product,
    dump_group,
    exponent,
    from_table,
    homomorphisms,
    isomorphism,
    load_group,
    quotient_by,
    restrict,
    subgroup_generated,
)
from flat_witness.groups.named import (
    SizeLimitExceededError,
    UnknownSpecError,
    cyclic_group,
    dihedral_group,
    named_family,
    named_group,
    quaternion_group,
    symmetric_group,
)
from flat_witness.groups.series import (
    composition_series,
    is_simple,
    normal_closure,
    sylow_classification,
)

KLEIN_TABLE = [[i ^ j for j in range(4)] for i in range(4)]

# symmetric:3 lists permutations in sorted order: 1 is a transposition, 3 a 3-cycle
S3_TRANSPOSITION = 1
S3_THREE_CYCLE = 3


class TestFromTable(unittest.TestCase):
    def test_trivial_group(self):
        group = from_table(1, [[0]])
        self.assertEqual(group.order, 1)
        self.assertEqual(group.identity, 0)

    def test_klein_four(self):
        group = from_table(4, KLEIN_TABLE)
        self.assertTrue(group.is_abelian)
        self.assertEqual(exponent(group), 2)

    def test_missing_inverse_is_rejected(self):
        with self.assertRaises(GroupTableError):
            from_table(2, [[0, 1], [1, 1]])

    def test_wrong_shape_is_rejected(self):
        with self.assertRaises(GroupTableError):
            from_table(3, [[0, 1], [1, 0]])

    def test_json_round_trip(self):
        group = dihedral_group(3)
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "d3.json")
            dump_group(group, path)
            loaded = load_group(path)
        self.assertEqual(loaded.order, 6)
        self.assertEqual(loaded.label, "dihedral:3")
        self.assertEqual(loaded.table.tolist(), group.table.tolist())


class TestNamedGroups(unittest.TestCase):
    def test_cyclic(self):
        group = named_group("cyclic:4")
        self.assertEqual(group.order, 4)
        self.assertEqual(group.mul(3, 2), 1)

    def test_quaternion(self):
        group = named_group("quaternion")
        self.assertEqual(group.order, 8)
        self.assertFalse(group.is_abelian)
        self.assertEqual(exponent(group), 4)

    def test_product(self):
        group = named_group("product:(cyclic:2,cyclic:3)")
        self.assertEqual(group.order, 6)
        self.assertTrue(group.is_abelian)
        self.assertEqual(exponent(group), 6)

    def test_exponents(self):
        self.assertEqual(exponent(named_group("trivial")), 1)
        self.assertEqual(exponent(symmetric_group(3)), 6)

    def test_unknown_spec(self):
        with self.assertRaises(UnknownSpecError):
            named_group("nonsense:3")
        with self.assertRaises(UnknownSpecError):
            named_group("product:(cyclic:2)")

    def test_size_limit(self):
        with self.assertRaises(SizeLimitExceededError):
            named_group("symmetric:8")
        with self.assertRaises(SizeLimitExceededError):
            named_group("cyclic:100", max_order=50)

    def test_families(self):
        family = named_family("cyclic2powers:4..256")
        self.assertEqual([g.order for g in family], [4, 8, 16, 32, 64, 128, 256])
        self.assertEqual([g.order for g in named_family("dihedral:3..5")], [6, 8, 10])
        self.assertEqual([g.order for g in named_family("quaternion;cyclic:3")], [3, 8])


class TestSubgroups(unittest.TestCase):
    def setUp(self):
        self.s3 = symmetric_group(3)

    def test_generated_by_transposition(self):
        self.assertEqual(len(subgroup_generated(self.s3, [S3_TRANSPOSITION])), 2)

    def test_generated_by_nothing(self):
        self.assertEqual(subgroup_generated(self.s3, []), frozenset([self.s3.identity]))

    def test_generated_by_cycle_and_transposition(self):
        generated = subgroup_generated(self.s3, [S3_THREE_CYCLE, S3_TRANSPOSITION])
        self.assertEqual(len(generated), 6)

    def test_restrict_relabels_sorted(self):
        a3 = subgroup_generated(self.s3, [S3_THREE_CYCLE])
        sub, inclusion = restrict(self.s3, a3)
        self.assertEqual(sub.order, 3)
        self.assertEqual(inclusion.key(), (0, 3, 4))
        self.assertTrue(inclusion.is_homomorphism())

    def test_normal_closure_of_transposition(self):
        self.assertEqual(len(normal_closure(self.s3, [S3_TRANSPOSITION])), 6)


class TestQuotients(unittest.TestCase):
    def test_s3_by_a3(self):
        s3 = symmetric_group(3)
        quotient, projection = quotient_by(s3, [0, 3, 4])
        self.assertEqual(quotient.order, 2)
        self.assertTrue(projection.is_homomorphism())
        self.assertEqual(projection.kernel, frozenset([0, 3, 4]))

    def test_by_identity_is_isomorphic(self):
        group = dihedral_group(4)
        quotient, _ = quotient_by(group, [group.identity])
        self.assertIsNotNone(isomorphism(quotient, group))

    def test_z4_by_even(self):
        quotient, projection = quotient_by(cyclic_group(4), [0, 2])
        self.assertEqual(quotient.order, 2)
        self.assertEqual(projection(3), 1)

    def test_non_normal(self):
        with self.assertRaises(NotNormalError):
            quotient_by(symmetric_group(3), [0, S3_TRANSPOSITION])


class TestCompositionSeries(unittest.TestCase):
    def test_z4(self):
        series = composition_series(cyclic_group(4))
        self.assertEqual(series.orders, [1, 2, 4])
        self.assertEqual([f.order for f in series.factors], [2, 2])
        self.assertEqual(series.length, 2)

    def test_trivial(self):
        series = composition_series(cyclic_group(1))
        self.assertEqual(series.orders, [1])
        self.assertEqual(series.length, 0)

    def test_s3(self):
        series = composition_series(symmetric_group(3))
        self.assertEqual(series.orders, [1, 3, 6])
        self.assertEqual([f.order for f in series.factors], [3, 2])
        self.assertEqual(series.subgroups[1], frozenset([0, 3, 4]))

    def test_factors_are_simple(self):
        for group in (quaternion_group(), dihedral_group(6), symmetric_group(4)):
            series = composition_series(group)
            self.assertTrue(all(is_simple(f) for f in series.factors), group.label)
            self.assertEqual(series.orders[-1], group.order)

    def test_simplicity(self):
        self.assertTrue(is_simple(named_group("alternating:5")))
        self.assertTrue(is_simple(cyclic_group(5)))
        self.assertFalse(is_simple(cyclic_group(4)))
        self.assertFalse(is_simple(cyclic_group(1)))


class TestHomomorphisms(unittest.TestCase):
    def test_z2_to_z2(self):
        self.assertEqual(len(homomorphisms(cyclic_group(2), cyclic_group(2))), 2)

    def test_z4_to_z2_kill_two(self):
        homs = homomorphisms(cyclic_group(4), cyclic_group(2))
        self.assertEqual(len(homs), 2)
        self.assertTrue(all(h(2) == 0 for h in homs))

    def test_z3_to_z2_trivial_only(self):
        homs = homomorphisms(cyclic_group(3), cyclic_group(2))
        self.assertEqual(len(homs), 1)
        self.assertEqual(homs[0].key(), (0, 0, 0))

    def test_every_map_is_a_homomorphism(self):
        for h in homomorphisms(dihedral_group(4), symmetric_group(3)):
            self.assertTrue(h.is_homomorphism())

    def test_isomorphism(self):
        klein = from_table(4, KLEIN_TABLE)
        product = direct_product(cyclic_group(2), cyclic_group(2))
        self.assertIsNotNone(isomorphism(klein, product))
        self.assertIsNone(isomorphism(klein, cyclic_group(4)))


class TestSylow(unittest.TestCase):
    def test_nonabelian_sylow(self):
        self.assertTrue(sylow_classification(quaternion_group()).has_nonabelian_sylow)
        self.assertTrue(sylow_classification(dihedral_group(4)).has_nonabelian_sylow)

    def test_s3(self):
        report = sylow_classification(symmetric_group(3))
        self.assertFalse(report.has_nonabelian_sylow)
        self.assertEqual([(s.prime, len(s.elements)) for s in report.subgroups], [(2, 2), (3, 3)])

    def test_abelian(self):
        for group in (cyclic_group(12), from_table(4, KLEIN_TABLE)):
            self.assertFalse(sylow_classification(group).has_nonabelian_sylow)


if __name__ == "__main__":
    unittest.main()
