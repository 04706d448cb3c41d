import io
import math
import unittest

from flat_witness.flat.extension import flat_extension
from flat_witness.groups.core import from_table
from flat_witness.groups.named import (
    cyclic_group,
    dihedral_group,
    named_family,
    named_group,
    quaternion_group,
    symmetric_group,
)
from flat_witness.membership.growth import (
    CSV_COLUMNS,
    GrowthRecord,
    RatioBoundExceededError,
    growth_experiment,
    write_growth_csv,
)
from flat_witness.membership.quasivariety import MembershipKind, embedding_oracle, in_quasivariety
from flat_witness.membership.variety import (
    BOUNDED,
    UNBOUNDED,
    NotCliffordError,
    classify_clifford,
    complexity_prediction,
    group_for_clifford,
    in_variety_of_flat,
    shortest_failing_equation,
)
from flat_witness.membership.witness import (
    PreconditionViolatedError,
    witness_equation_flat,
    witness_quasi_equation,
)
from flat_witness.model.algebra import (
    evaluate_at,
    group_algebra,
    satisfies_equation,
    satisfies_quasiequation,
)
from flat_witness.model.terms import FLAT_UNIT, MONOID, SEMIRING, prefix_length
from flat_witness.presentation.lifting import SimpleCatalog

KLEIN = from_table(4, [[i ^ j for j in range(4)] for i in range(4)], label="klein")

Z4_PREMISES = ["* a a = 1", "* * * a b inv a inv b = 1", "* * inv a b b = 1"]

# fitted once on the witness corpus below, then frozen
QUASI_EQUATION_BOUND = 16
GROWTH_RATIO_BOUND = 16
# above this the flat extension of H is checked at the generator assignment only
GROWTH_ASSIGNMENT_BUDGET = 10**6

WITNESS_MEMBER_SPECS = (
    [f"cyclic:{n}" for n in range(2, 17)]
    + [f"dihedral:{n}" for n in range(3, 9)]
    + ["quaternion", "alternating:4", "product:(cyclic:2,cyclic:2)", "product:(cyclic:2,cyclic:4)",
       "product:(cyclic:3,cyclic:3)", "product:(cyclic:2,symmetric:3)"]
)


def small_groups():
    return [cyclic_group(n) for n in range(1, 9)] + [KLEIN, symmetric_group(3), dihedral_group(4), quaternion_group()]


class TestQuasivariety(unittest.TestCase):
    def test_subgroup_is_member(self):
        verdict = in_quasivariety(cyclic_group(2), cyclic_group(4))
        self.assertIs(verdict.kind, MembershipKind.IN_QUASIVARIETY)
        self.assertTrue(verdict.holds)
        self.assertEqual(len(verdict.certificates), 1)

    def test_z4_not_in_sp_z2(self):
        verdict = in_quasivariety(cyclic_group(4), cyclic_group(2))
        self.assertIs(verdict.kind, MembershipKind.NOT_IN_QUASIVARIETY)
        self.assertEqual(verdict.witness_element, 2)
        self.assertEqual(len(verdict.certificates), 2)

    def test_klein_is_a_subdirect_power(self):
        self.assertTrue(in_quasivariety(KLEIN, cyclic_group(2)).holds)
        self.assertTrue(in_quasivariety(KLEIN, cyclic_group(4)).holds)
        self.assertFalse(in_quasivariety(cyclic_group(4), KLEIN).holds)

    def test_trivial_member(self):
        verdict = in_quasivariety(cyclic_group(1), symmetric_group(3))
        self.assertTrue(verdict.holds)
        self.assertEqual(verdict.certificates, ())

    def test_verdict_json(self):
        data = in_quasivariety(cyclic_group(4), cyclic_group(2)).to_json()
        self.assertEqual(data["kind"], "not-in-quasivariety")
        self.assertEqual(data["witness_element"], 2)
        self.assertEqual(data["certificates"][0], {"homomorphism": [0, 0, 0, 0]})

    def test_oracle_agrees(self):
        for generator in small_groups():
            for member in small_groups():
                self.assertEqual(in_quasivariety(member, generator).holds,
                                 embedding_oracle(member, generator),
                                 f"{member.label} in SP({generator.label})")


class TestWitnessQuasiEquation(unittest.TestCase):
    def test_z4_against_z2(self):
        witness = witness_quasi_equation(cyclic_group(2), cyclic_group(4))
        quasi = witness.quasi_equation
        self.assertEqual(witness.element, 2)
        self.assertEqual(witness.word.format(), "a")
        self.assertEqual([p.format() for p in quasi.premises], Z4_PREMISES)
        self.assertEqual(quasi.conclusion.format(), "a = 1")
        self.assertEqual(quasi.length, 23)
        self.assertEqual(witness.assignment, {"a": 2, "b": 1})
        self.assertTrue(satisfies_quasiequation(group_algebra(cyclic_group(2)), quasi).holds)
        self.assertFalse(satisfies_quasiequation(group_algebra(cyclic_group(4)), quasi).holds)

    def test_z2_against_z3(self):
        witness = witness_quasi_equation(cyclic_group(3), cyclic_group(2))
        self.assertEqual(witness.quasi_equation.format(), "* a a = 1 -> a = 1")

    def test_member_has_no_witness(self):
        with self.assertRaises(PreconditionViolatedError):
            witness_quasi_equation(cyclic_group(4), cyclic_group(2))
        with self.assertRaises(PreconditionViolatedError):
            witness_quasi_equation(cyclic_group(2), KLEIN)


class TestWitnessEquation(unittest.TestCase):
    def test_z4_against_z2(self):
        witness = witness_equation_flat(cyclic_group(2), cyclic_group(4))
        self.assertEqual(witness.exponent, 2)
        self.assertEqual(witness.equation.length, 114)
        self.assertIs(witness.signature, FLAT_UNIT)
        self.assertTrue(witness.holds_checked)
        self.assertFalse(witness.inconclusive)
        flat_h = flat_extension(cyclic_group(4), FLAT_UNIT).algebra
        self.assertFalse(satisfies_equation(flat_h, witness.equation).holds)

    def test_trivial_generator(self):
        witness = witness_equation_flat(cyclic_group(1), cyclic_group(2))
        self.assertEqual(witness.exponent, 1)
        self.assertTrue(witness.holds_checked)
        self.assertTrue(satisfies_equation(flat_extension(cyclic_group(1), FLAT_UNIT).algebra, witness.equation).holds)

    def test_semiring(self):
        witness = witness_equation_flat(cyclic_group(2), cyclic_group(4), SEMIRING)
        self.assertEqual(witness.exponent, 4)
        self.assertNotIn("inv", witness.equation.format().split())
        self.assertNotIn("1", witness.equation.format().split())
        self.assertTrue(satisfies_equation(flat_extension(cyclic_group(2), SEMIRING).algebra, witness.equation).holds)
        self.assertFalse(satisfies_equation(flat_extension(cyclic_group(4), SEMIRING).algebra, witness.equation).holds)

    def assertSeparates(self, generator, member, catalog=None):
        label = f"{member.label} against {generator.label}"
        witness = witness_equation_flat(generator, member, catalog=catalog)
        quasi = witness.quasi.quasi_equation
        self.assertTrue(satisfies_quasiequation(group_algebra(generator), quasi).holds, label)
        self.assertFalse(satisfies_quasiequation(group_algebra(member), quasi).holds, label)
        flat_h = flat_extension(member, FLAT_UNIT).algebra
        equation = witness.equation
        self.assertNotEqual(evaluate_at(flat_h, equation.lhs, witness.falsifying_assignment),
                            evaluate_at(flat_h, equation.rhs, witness.falsifying_assignment), label)
        self.assertTrue(witness.holds_checked, label)
        bound = QUASI_EQUATION_BOUND * (1 + math.log2(member.order)) ** 3
        self.assertLessEqual(prefix_length(quasi), bound, label)

    def test_cyclic_and_quaternion_pairs(self):
        pairs = ((cyclic_group(2), cyclic_group(4)), (cyclic_group(2), cyclic_group(8)),
                 (cyclic_group(3), cyclic_group(9)), (cyclic_group(2), quaternion_group()))
        for generator, member in pairs:
            self.assertSeparates(generator, member)

    def test_corpus_non_members(self):
        catalog = SimpleCatalog()
        for generator in (cyclic_group(2), cyclic_group(3), symmetric_group(3)):
            for spec in WITNESS_MEMBER_SPECS:
                member = named_group(spec)
                if in_quasivariety(member, generator).holds:
                    continue
                self.assertSeparates(generator, member, catalog)


class TestVariety(unittest.TestCase):
    def test_flat_members(self):
        generator = cyclic_group(2)
        verdict = in_variety_of_flat(flat_extension(generator).algebra, generator)
        self.assertIs(verdict.kind, MembershipKind.IN_VARIETY)
        self.assertTrue(in_variety_of_flat(flat_extension(cyclic_group(1)).algebra, generator).holds)

    def test_flat_non_member(self):
        verdict = in_variety_of_flat(flat_extension(cyclic_group(4)).algebra, cyclic_group(2))
        self.assertIs(verdict.kind, MembershipKind.NOT_IN_VARIETY)
        self.assertEqual(verdict.witness_algebra.size, 5)
        self.assertIsNotNone(verdict.witness_element)

    def test_group_algebra_is_not_flat(self):
        verdict = in_variety_of_flat(group_algebra(cyclic_group(2)), cyclic_group(2))
        self.assertFalse(verdict.holds)
        self.assertIn("not flat", verdict.reason)

    def test_shortest_failing_equation(self):
        equation = shortest_failing_equation(flat_extension(cyclic_group(4)).algebra,
                                             flat_extension(cyclic_group(2)).algebra, 6)
        self.assertEqual(equation.format(), "inv x = x")
        monoid = shortest_failing_equation(group_algebra(cyclic_group(4), MONOID),
                                           group_algebra(cyclic_group(2), MONOID), 4)
        self.assertEqual(monoid.format(), "* x x = 1")

    def test_nothing_separates_a_group_from_itself(self):
        z3 = group_algebra(cyclic_group(3))
        self.assertIsNone(shortest_failing_equation(z3, z3, 4))


class TestComplexity(unittest.TestCase):
    def test_prediction(self):
        self.assertEqual(complexity_prediction(quaternion_group()), UNBOUNDED)
        self.assertEqual(complexity_prediction(dihedral_group(4)), UNBOUNDED)
        self.assertEqual(complexity_prediction(symmetric_group(3)), BOUNDED)
        self.assertEqual(complexity_prediction(cyclic_group(12)), BOUNDED)

    def test_group_for_clifford(self):
        self.assertEqual(group_for_clifford(flat_extension(symmetric_group(3)).algebra).order, 6)
        self.assertEqual(group_for_clifford(flat_extension(cyclic_group(1)).algebra).order, 1)

    def test_classify(self):
        self.assertEqual(classify_clifford(flat_extension(quaternion_group()).algebra), UNBOUNDED)
        self.assertEqual(classify_clifford(flat_extension(cyclic_group(3)).algebra), BOUNDED)

    def test_not_clifford(self):
        with self.assertRaises(NotCliffordError):
            group_for_clifford(group_algebra(cyclic_group(2)))


class TestGrowth(unittest.TestCase):
    def test_z4_record(self):
        records = growth_experiment(cyclic_group(2), [cyclic_group(4)])
        self.assertEqual(records, [GrowthRecord("cyclic:4", 4, 9, 23, 114)])
        self.assertAlmostEqual(records[0].log2cube, 8.0)
        self.assertAlmostEqual(records[0].eq_ratio, 14.25)

    def test_cyclic_two_powers(self):
        family = named_family("cyclic2powers:4..256")
        tables = []
        for _ in range(2):
            records = growth_experiment(cyclic_group(2), family, ratio_bound=GROWTH_RATIO_BOUND,
                                        assignment_budget=GROWTH_ASSIGNMENT_BUDGET)
            self.assertEqual([r.order for r in records], [4, 8, 16, 32, 64, 128, 256])
            for record in records:
                self.assertLessEqual(record.eq_ratio, GROWTH_RATIO_BOUND, record.label)
            out = io.StringIO()
            write_growth_csv(records, out)
            tables.append(out.getvalue())
        self.assertEqual(tables[0], tables[1])
        self.assertEqual(len(tables[0].splitlines()), 8)

    def test_ratio_bound(self):
        with self.assertRaises(RatioBoundExceededError):
            growth_experiment(cyclic_group(2), [cyclic_group(4)], ratio_bound=1.0)

    def test_member_in_family(self):
        with self.assertRaises(PreconditionViolatedError) as ctx:
            growth_experiment(cyclic_group(4), [cyclic_group(2)])
        self.assertIn("cyclic:2", str(ctx.exception))

    def test_empty_family_csv(self):
        out = io.StringIO()
        write_growth_csv(growth_experiment(cyclic_group(2), []), out)
        self.assertEqual(out.getvalue(), ",".join(CSV_COLUMNS) + "\n")

    def test_row(self):
        row = GrowthRecord("cyclic:4", 4, 9, 23, 114).row()
        self.assertEqual(row, ["cyclic:4", "4", "9", "23", "114", "8.000000", "1.125000", "2.875000", "14.250000"])


if __name__ == "__main__":
    unittest.main()
