import unittest

from flat_witness.config import BudgetExceededError
from flat_witness.flat.extension import flat_extension
from flat_witness.groups.core import from_table
from flat_witness.groups.named import cyclic_group, symmetric_group
from flat_witness.model.algebra import (
    AlgebraTableError,
    algebra_from_json,
    find_isomorphism,
    group_algebra,
    make_algebra,
    satisfies,
    satisfies_equation,
    satisfies_quasiequation,
)
from flat_witness.model.congruence import (
    Congruence,
    congruence_generated,
    congruence_lattice,
    is_congruence,
    is_subdirectly_irreducible,
    si_decomposition,
    si_quotients,
)
from flat_witness.model.enumeration import enumerate_equations, iter_equations, normal_form
from flat_witness.model.terms import (
    GROUP,
    MONOID,
    SEMIGROUP,
    ArityMismatchError,
    Op,
    TrailingTokensError,
    UnknownSymbolError,
    Var,
    format_term,
    parse_equation,
    parse_quasi_equation,
    parse_term,
    prefix_length,
)

KLEIN = from_table(4, [[i ^ j for j in range(4)] for i in range(4)], label="klein")
SMALL_GROUPS = [cyclic_group(n) for n in range(1, 7)] + [KLEIN, symmetric_group(3)]


class TestTerms(unittest.TestCase):
    def test_variable(self):
        self.assertEqual(parse_term("x"), Var("x"))

    def test_nested(self):
        term = parse_term("* x * y inv y")
        self.assertIsInstance(term, Op)
        self.assertEqual(term.size, 6)
        self.assertEqual(format_term(term), "* x * y inv y")
        self.assertEqual(term.variables(), ["x", "y"])

    def test_trailing_tokens(self):
        with self.assertRaises(TrailingTokensError):
            parse_term("* x y z")

    def test_missing_argument(self):
        with self.assertRaises(ArityMismatchError):
            parse_term("* x")

    def test_unknown_symbol(self):
        with self.assertRaises(UnknownSymbolError):
            parse_term("& x y", GROUP)
        with self.assertRaises(UnknownSymbolError):
            parse_term("inv x", SEMIGROUP)

    def test_prefix_lengths(self):
        self.assertEqual(prefix_length(parse_equation("* x * y inv y = x")), 7)
        self.assertEqual(prefix_length(parse_quasi_equation("* x y = * y x -> x = y")), 8)
        self.assertEqual(prefix_length(parse_equation("x = x")), 2)

    def test_quasi_equation_text(self):
        text = "* x y = * y x , x = 1 -> x = y"
        quasi = parse_quasi_equation(text)
        self.assertEqual(len(quasi.premises), 2)
        self.assertEqual(quasi.format(), text)
        self.assertEqual(parse_quasi_equation("-> x = x").premises, ())


class TestSatisfaction(unittest.TestCase):
    def test_square_is_one_in_z2(self):
        algebra = group_algebra(cyclic_group(2), MONOID)
        self.assertTrue(satisfies_equation(algebra, parse_equation("* x x = 1", MONOID)).holds)

    def test_square_is_one_fails_in_z4(self):
        algebra = group_algebra(cyclic_group(4), MONOID)
        result = satisfies_equation(algebra, parse_equation("* x x = 1", MONOID))
        self.assertFalse(result.holds)
        self.assertEqual(result.assignment, {"x": 1})

    def test_reflexive_always_holds(self):
        for algebra in (group_algebra(symmetric_group(3)), flat_extension(cyclic_group(3)).algebra):
            self.assertTrue(satisfies(algebra, parse_equation("x = x")))

    def test_quasi_equation(self):
        quasi = parse_quasi_equation("* * * b b b b = 1 -> * b b = 1")
        self.assertTrue(satisfies_quasiequation(group_algebra(cyclic_group(2)), quasi).holds)
        result = satisfies_quasiequation(group_algebra(cyclic_group(4)), quasi)
        self.assertFalse(result.holds)
        self.assertEqual(result.assignment, {"b": 1})

    def test_empty_premises(self):
        quasi = parse_quasi_equation("-> x = x")
        self.assertTrue(satisfies_quasiequation(group_algebra(cyclic_group(5)), quasi).holds)

    def test_budget(self):
        algebra = group_algebra(symmetric_group(3))
        with self.assertRaises(BudgetExceededError):
            satisfies_equation(algebra, parse_equation("* x y = * y x"), budget=10)

    def test_commutativity_is_found_in_bulk(self):
        algebra = group_algebra(symmetric_group(3))
        result = satisfies_equation(algebra, parse_equation("* * x y z = * * z y x"))
        self.assertFalse(result.holds)
        a = result.assignment
        lhs = algebra.op("*")[algebra.op("*")[a["x"], a["y"]], a["z"]]
        rhs = algebra.op("*")[algebra.op("*")[a["z"], a["y"]], a["x"]]
        self.assertNotEqual(lhs, rhs)


class TestAlgebra(unittest.TestCase):
    def test_table_leaving_universe(self):
        with self.assertRaises(AlgebraTableError):
            make_algebra(2, SEMIGROUP, {"*": [[0, 5], [1, 0]]})

    def test_json_round_trip(self):
        algebra = flat_extension(cyclic_group(2)).algebra
        loaded = algebra_from_json(algebra.to_json())
        self.assertEqual(loaded.signature, algebra.signature)
        self.assertEqual(loaded.op("*").tolist(), algebra.op("*").tolist())

    def test_unit_table_is_a_scalar(self):
        for signature in (GROUP, MONOID):
            algebra = group_algebra(cyclic_group(3), signature)
            self.assertEqual(algebra.op("1").ndim, 0)
            self.assertEqual(int(algebra.op("1")), 0)
        self.assertEqual(make_algebra(2, MONOID, {"*": [[0, 1], [1, 0]], "1": 0}).op("1").shape, ())

    def test_signature_is_inferred(self):
        loaded = algebra_from_json({"size": 1, "ops": {"*": [[0]], "1": 0}})
        self.assertEqual(loaded.signature, MONOID)

    def test_isomorphism(self):
        z4 = group_algebra(cyclic_group(4))
        self.assertIsNotNone(find_isomorphism(z4, z4))
        self.assertIsNone(find_isomorphism(z4, group_algebra(KLEIN)))


class TestCongruences(unittest.TestCase):
    def test_no_pairs(self):
        algebra = group_algebra(cyclic_group(4))
        self.assertTrue(congruence_generated(algebra, []).is_identity)

    def test_flat_collapses(self):
        flat = flat_extension(cyclic_group(2))
        theta = congruence_generated(flat.algebra, [(flat.zero, flat.group.identity)])
        self.assertTrue(theta.is_total)

    def test_z4_even_pair(self):
        theta = congruence_generated(group_algebra(cyclic_group(4)), [(0, 2)])
        self.assertEqual(theta.blocks, (0, 1, 0, 1))
        self.assertTrue(is_congruence(group_algebra(cyclic_group(4)), theta))

    def test_non_congruence(self):
        algebra = group_algebra(cyclic_group(4))
        self.assertFalse(is_congruence(algebra, Congruence((0, 0, 1, 1))))

    def test_lattice(self):
        lattice = congruence_lattice(group_algebra(cyclic_group(4)))
        self.assertEqual([c.blocks for c in lattice], [(0, 1, 2, 3), (0, 1, 0, 1), (0, 0, 0, 0)])
        self.assertEqual(len(congruence_lattice(group_algebra(KLEIN))), 5)

    def test_subdirect_irreducibility(self):
        si, pair = is_subdirectly_irreducible(flat_extension(cyclic_group(2)).algebra)
        self.assertTrue(si)
        self.assertIsNotNone(pair)
        self.assertEqual(is_subdirectly_irreducible(group_algebra(KLEIN)), (False, None))
        self.assertTrue(is_subdirectly_irreducible(group_algebra(cyclic_group(2)))[0])
        self.assertTrue(is_subdirectly_irreducible(group_algebra(cyclic_group(4)))[0])

    def test_flat_extensions_are_subdirectly_irreducible(self):
        for group in SMALL_GROUPS:
            si, pair = is_subdirectly_irreducible(flat_extension(group).algebra)
            self.assertTrue(si, group.label)
            self.assertIsNotNone(pair)

    def test_si_quotients(self):
        z3 = group_algebra(cyclic_group(3))
        self.assertEqual([q.size for q in si_quotients(z3)], [3])
        self.assertEqual([q.size for q in si_quotients(group_algebra(KLEIN))], [2])
        self.assertEqual([q.size for q in si_quotients(flat_extension(cyclic_group(2)).algebra)], [3])

    def test_decomposition_separates_points(self):
        algebra = group_algebra(KLEIN)
        decomposition = si_decomposition(algebra)
        self.assertEqual(len(decomposition), 3)
        meet = decomposition[0][0]
        for theta, _ in decomposition[1:]:
            meet = meet.meet(theta)
        self.assertTrue(meet.is_identity)

    def test_cap(self):
        with self.assertRaises(BudgetExceededError):
            congruence_lattice(group_algebra(symmetric_group(3)), cap=4)


class TestEnumeration(unittest.TestCase):
    def test_length_two(self):
        texts = [e.format() for e in enumerate_equations(group_algebra(cyclic_group(3)), 2)]
        self.assertIn("x = x", texts)

    def test_z2_square(self):
        texts = [e.format() for e in enumerate_equations(group_algebra(cyclic_group(2), MONOID), 4)]
        self.assertIn("* x x = 1", texts)

    def test_too_short(self):
        self.assertEqual(enumerate_equations(group_algebra(cyclic_group(2)), 1), [])

    def test_length_cap(self):
        with self.assertRaises(BudgetExceededError):
            enumerate_equations(group_algebra(cyclic_group(2)), 11)

    def test_order_and_normal_form(self):
        equations = list(iter_equations(GROUP, 4))
        lengths = [e.length for e in equations]
        self.assertEqual(lengths, sorted(lengths))
        texts = [e.format() for e in equations]
        self.assertEqual(len(texts), len(set(texts)))
        for e in equations:
            self.assertEqual(normal_form(e), e)

    def test_holding_equations_hold(self):
        algebra = group_algebra(cyclic_group(3), MONOID)
        for equation in enumerate_equations(algebra, 5):
            self.assertTrue(satisfies_equation(algebra, equation).holds)


if __name__ == "__main__":
    unittest.main()
