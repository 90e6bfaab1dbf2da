"""Persistent red-black tree map.

Nodes are tuples ``(color, left, key, value, right)``; every update copies
the search path and shares the rest, so keeping a reference to an old map is
a constant-time snapshot. Deletion follows the double-black scheme of
Germane and Might.
"""

RED = 0
BLACK = 1
DOUBLE_BLACK = 2

E = None  # empty leaf


class _DoubleEmpty:
    __slots__ = ()

    def __repr__(self):
        return "EE"


EE = _DoubleEmpty()


def _is(t, color) -> bool:
    return type(t) is tuple and t[0] == color


def _is_empty(t) -> bool:
    return t is E or t is EE


def _balance(t):
    color, a, xk, xv, d = t
    if color == BLACK or color == DOUBLE_BLACK:
        out = RED if color == BLACK else BLACK
        if _is(a, RED):
            _, aa, ak, av, ab = a
            if _is(aa, RED):
                _, l1, k1, v1, r1 = aa
                return (out, (BLACK, l1, k1, v1, r1), ak, av, (BLACK, ab, xk, xv, d))
            if _is(ab, RED):
                _, l2, k2, v2, r2 = ab
                return (out, (BLACK, aa, ak, av, l2), k2, v2, (BLACK, r2, xk, xv, d))
        if _is(d, RED):
            _, da, dk, dv, db = d
            if _is(da, RED):
                _, l3, k3, v3, r3 = da
                return (out, (BLACK, a, xk, xv, l3), k3, v3, (BLACK, r3, dk, dv, db))
            if _is(db, RED):
                _, l4, k4, v4, r4 = db
                return (out, (BLACK, a, xk, xv, da), dk, dv, (BLACK, l4, k4, v4, r4))
    return t


def _unmark(t):
    """A double-black child as a plain black one."""
    if t is EE:
        return E
    return (BLACK,) + t[1:]


def _rotate(t):
    color, a, yk, yv, b = t
    if color == RED:
        if (_is(a, DOUBLE_BLACK) or a is EE) and _is(b, BLACK):
            _, c, zk, zv, d = b
            return _balance((BLACK, (RED, _unmark(a), yk, yv, c), zk, zv, d))
        if _is(a, BLACK) and (_is(b, DOUBLE_BLACK) or b is EE):
            _, aa, xk, xv, ab = a
            return _balance((BLACK, aa, xk, xv, (RED, ab, yk, yv, _unmark(b))))
        return t
    if color == BLACK:
        if (_is(a, DOUBLE_BLACK) or a is EE) and _is(b, BLACK):
            _, c, zk, zv, d = b
            return _balance((DOUBLE_BLACK, (RED, _unmark(a), yk, yv, c), zk, zv, d))
        if _is(a, BLACK) and (_is(b, DOUBLE_BLACK) or b is EE):
            _, aa, xk, xv, ab = a
            return _balance((DOUBLE_BLACK, aa, xk, xv, (RED, ab, yk, yv, _unmark(b))))
        if (_is(a, DOUBLE_BLACK) or a is EE) and _is(b, RED) and _is(b[1], BLACK):
            _, (_, c, k1, v1, d), zk, zv, e = b
            return (BLACK, _balance((BLACK, (RED, _unmark(a), yk, yv, c), k1, v1, d)), zk, zv, e)
        if _is(a, RED) and _is(a[4], BLACK) and (_is(b, DOUBLE_BLACK) or b is EE):
            _, aa, wk, wv, (_, bb, k1, v1, c) = a
            return (BLACK, aa, wk, wv, _balance((BLACK, bb, k1, v1, (RED, c, yk, yv, _unmark(b)))))
    return t


def _insert(t, key, value):
    if t is E:
        return (RED, E, key, value, E)
    color, a, k, v, b = t
    if key < k:
        return _balance((color, _insert(a, key, value), k, v, b))
    if key == k:
        return (color, a, key, value, b)
    return _balance((color, a, k, v, _insert(b, key, value)))


def _blacken(t):
    if _is(t, RED) and (_is(t[1], RED) or _is(t[4], RED)):
        return (BLACK,) + t[1:]
    return t


def _redden(t):
    if _is(t, BLACK) and _is(t[1], BLACK) and _is(t[4], BLACK):
        return (RED,) + t[1:]
    return t


def _min_delete(t):
    """Remove the minimum; returns (key, value, tree)."""
    color, a, k, v, b = t
    if a is E and b is E:
        return k, v, (E if color == RED else EE)
    if color == BLACK and a is E and _is(b, RED) and b[1] is E and b[4] is E:
        return k, v, (BLACK, E, b[2], b[3], E)
    mk, mv, a2 = _min_delete(a)
    return mk, mv, _rotate((color, a2, k, v, b))


def _delete(t, key):
    if t is E:
        return E
    color, a, k, v, b = t
    if a is E and b is E:
        if key == k:
            return E if color == RED else EE
        return t
    if color == BLACK and b is E and _is(a, RED) and a[1] is E and a[4] is E:
        if key < k:
            return (BLACK, _delete(a, key), k, v, E)
        if key == k:
            return (BLACK, E, a[2], a[3], E)
        return t
    if key < k:
        return _rotate((color, _delete(a, key), k, v, b))
    if key == k:
        mk, mv, b2 = _min_delete(b)
        return _rotate((color, a, mk, mv, b2))
    return _rotate((color, a, k, v, _delete(b, key)))


def _find(t, key):
    while t is not E:
        _, a, k, v, b = t
        if key < k:
            t = a
        elif key == k:
            return True, v
        else:
            t = b
    return False, None


class PersistentMap:
    """Immutable ordered map; updates return new maps sharing structure."""

    __slots__ = ("_root", "_size")

    def __init__(self, root=E, size: int = 0):
        self._root = root
        self._size = size

    def __len__(self):
        return self._size

    def __bool__(self):
        return self._size > 0

    def __contains__(self, key):
        return _find(self._root, key)[0]

    def get(self, key, default=None):
        found, value = _find(self._root, key)
        return value if found else default

    def set(self, key, value) -> "PersistentMap":
        found, _ = _find(self._root, key)
        root = _blacken(_insert(self._root, key, value))
        return PersistentMap(root, self._size if found else self._size + 1)

    def delete(self, key) -> "PersistentMap":
        if not _find(self._root, key)[0]:
            return self
        root = _delete(_redden(self._root), key)
        if root is EE:
            root = E
        elif _is(root, DOUBLE_BLACK):
            root = (BLACK,) + root[1:]
        return PersistentMap(root, self._size - 1)

    def min_item(self):
        t = self._root
        if t is E:
            return None
        while t[1] is not E:
            t = t[1]
        return t[2], t[3]

    def pop_min(self):
        """(key, value, map without that key); the map must be non-empty."""
        key, value = self.min_item()
        return key, value, self.delete(key)

    def items(self) -> list:
        out = []

        def walk(t):
            if t is E:
                return
            walk(t[1])
            out.append((t[2], t[3]))
            walk(t[4])

        walk(self._root)
        return out

    def keys(self) -> list:
        return [k for k, _ in self.items()]

    def values(self) -> list:
        return [v for _, v in self.items()]

    def __iter__(self):
        return iter(self.keys())

    def __eq__(self, other):
        if not isinstance(other, PersistentMap):
            return NotImplemented
        return self._root is other._root or self.items() == other.items()

    def __hash__(self):
        return id(self._root)

    def __repr__(self):
        return f"PersistentMap({dict(self.items())!r})"

    def check_invariants(self) -> int:
        """Black height; raises AssertionError when the tree is not a valid red-black tree."""

        def walk(t, lo, hi):
            if t is E:
                return 1
            color, a, k, _, b = t
            assert color in (RED, BLACK), "double black node left in tree"
            assert (lo is None or lo < k) and (hi is None or k < hi), "order violated"
            if color == RED:
                assert not _is(a, RED) and not _is(b, RED), "red node with red child"
            left = walk(a, lo, k)
            right = walk(b, k, hi)
            assert left == right, "unequal black height"
            return left + (1 if color == BLACK else 0)

        return walk(self._root, None, None)
