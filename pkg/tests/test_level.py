import unittest

from kernel import level as lvl
from kernel.name import name

U = lvl.LevelParam(name("u"))
V = lvl.LevelParam(name("v"))


class TestNormalize(unittest.TestCase):
    def test_max_with_zero_drops_zero(self):
        self.assertEqual(lvl.normalize(lvl.mk_max(lvl.ZERO, U)), U)

    def test_max_keeps_larger_offset_of_same_base(self):
        level = lvl.mk_max(lvl.mk_succ(U), U)
        self.assertEqual(lvl.normalize(level), lvl.mk_succ(U))

    def test_constant_kept_when_not_dominated(self):
        level = lvl.mk_max(U, lvl.of_int(1))
        self.assertEqual(lvl.normalize(level), lvl.mk_max(lvl.ONE, U))

    def test_max_is_commutative_after_normalization(self):
        self.assertTrue(lvl.is_equivalent(lvl.mk_max(U, V), lvl.mk_max(V, U)))

    def test_is_zero(self):
        self.assertTrue(lvl.is_zero(lvl.mk_max(lvl.ZERO, lvl.ZERO)))
        self.assertFalse(lvl.is_zero(U))


class TestLevelQueries(unittest.TestCase):
    def test_has_meta(self):
        meta = lvl.mk_level_meta()
        self.assertTrue(lvl.has_meta(lvl.mk_succ(meta)))
        self.assertFalse(lvl.has_meta(lvl.mk_max(U, lvl.ONE)))

    def test_instantiate_params(self):
        level = lvl.mk_max(U, lvl.mk_succ(V))
        result = lvl.instantiate_params(level, (name("u"), name("v")), (lvl.ZERO, U))
        self.assertTrue(lvl.is_equivalent(result, lvl.mk_succ(U)))

    def test_level_to_str(self):
        self.assertEqual(lvl.level_to_str(lvl.of_int(2)), "2")
        self.assertEqual(lvl.level_to_str(lvl.mk_succ(U)), "u+1")
        self.assertEqual(lvl.level_to_str(lvl.mk_max(U, V)), "(max u v)")

    def test_to_offset(self):
        self.assertEqual(lvl.to_offset(lvl.mk_succ(lvl.mk_succ(U))), (U, 2))


if __name__ == "__main__":
    unittest.main()
