import random
import unittest
from types import SimpleNamespace

from constraints.constraint import ConstraintCategory
from solver.persistent import PersistentMap
from solver.solver import Solver
from tests.helpers import nat_env


class TestPersistentMap(unittest.TestCase):
    def test_set_and_get(self):
        m = PersistentMap().set(3, "c").set(1, "a").set(2, "b")
        self.assertEqual(len(m), 3)
        self.assertEqual(m.get(2), "b")
        self.assertIsNone(m.get(7))
        self.assertEqual(m.keys(), [1, 2, 3])

    def test_updates_leave_old_versions_untouched(self):
        old = PersistentMap().set(1, "a")
        new = old.set(1, "z").set(2, "b")
        self.assertEqual(old.items(), [(1, "a")])
        self.assertEqual(new.items(), [(1, "z"), (2, "b")])
        self.assertEqual(len(new.delete(1)), 1)
        self.assertIn(1, new)

    def test_delete_missing_key_returns_same_map(self):
        m = PersistentMap().set(1, "a")
        self.assertIs(m.delete(5), m)

    def test_random_operations_keep_red_black_shape(self):
        rng = random.Random(3)
        m = PersistentMap()
        reference = {}
        for _ in range(2000):
            key = rng.randrange(200)
            if rng.random() < 0.6:
                m = m.set(key, key * 2)
                reference[key] = key * 2
            else:
                m = m.delete(key)
                reference.pop(key, None)
            m.check_invariants()
        self.assertEqual(m.items(), sorted(reference.items()))
        self.assertEqual(len(m), len(reference))

    def test_pop_min(self):
        m = PersistentMap().set(5, "e").set(2, "b").set(9, "i")
        key, value, rest = m.pop_min()
        self.assertEqual((key, value), (2, "b"))
        self.assertEqual(rest.keys(), [5, 9])


class TestConstraintQueue(unittest.TestCase):
    """The solver queue pops by category, then in insertion order."""

    def setUp(self):
        self.solver = Solver(nat_env())

    def test_random_traces_pop_in_priority_then_fifo_order(self):
        rng = random.Random(10)
        categories = list(ConstraintCategory)
        for trace in range(1000):
            self.solver._reset()
            pending = []
            counter = 0
            for _ in range(rng.randrange(1, 30)):
                if pending and rng.random() < 0.4:
                    c, category = self.solver._pop()
                    expected = min(pending, key=lambda item: (int(item[1]), item[0].tag))
                    pending.remove(expected)
                    self.assertIs(c, expected[0], f"trace {trace}")
                    self.assertEqual(category, expected[1])
                else:
                    category = rng.choice(categories)
                    c = SimpleNamespace(j=None, tag=counter)
                    counter += 1
                    self.solver._enqueue(c, category, ())
                    pending.append((c, category))

    def test_index_tracks_waiting_constraints(self):
        c = SimpleNamespace(j=None)
        self.solver._enqueue(c, ConstraintCategory.FLEX_RIGID, (41,))
        self.assertEqual(len(self.solver.index.get(41)), 1)
        self.solver._pop()
        self.assertNotIn(41, self.solver.index)


if __name__ == "__main__":
    unittest.main()
