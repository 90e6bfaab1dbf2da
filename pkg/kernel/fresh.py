import itertools
import threading

_counter = itertools.count(1)
_lock = threading.Lock()


def fresh_id() -> int:
    """Next unique id for free variables, metavariables and assumptions."""
    with _lock:
        return next(_counter)
