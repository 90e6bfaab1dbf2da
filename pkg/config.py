import os

BASE_DIR = os.path.dirname(os.path.abspath(__file__))

# Solver limits
MAX_STEPS = int(os.environ.get('ELAB_MAX_STEPS', '10000'))  # processed constraints per solve
INSTANCE_SEARCH_DEPTH = int(os.environ.get('ELAB_INSTANCE_DEPTH', '32'))  # nested class goals

# Terms are traversed recursively
RECURSION_LIMIT = int(os.environ.get('ELAB_RECURSION_LIMIT', '10000'))

PRELUDE_PATH = os.environ.get(
    'ELAB_PRELUDE', os.path.join(BASE_DIR, 'frontend', 'prelude.lean')
)

LOG_LEVEL = os.environ.get('ELAB_LOG_LEVEL', 'WARNING')
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Solver trace event kinds, one line per event on stderr.
TRACE_ENQUEUE = "enqueue"
TRACE_POP = "pop"
TRACE_ASSIGN = "assign"
TRACE_SPLIT_PUSH = "split-push"
TRACE_BACKTRACK = "backtrack"
TRACE_RESOLVE_SKIP = "resolve-skip"
TRACE_EVENT_KINDS = [
    TRACE_ENQUEUE,
    TRACE_POP,
    TRACE_ASSIGN,
    TRACE_SPLIT_PUSH,
    TRACE_BACKTRACK,
    TRACE_RESOLVE_SKIP,
]

# Diagnostic severities
SEVERITY_ERROR = "error"
SEVERITY_INFO = "info"

# a list of attributes accepted by `attribute NAME [attr]`.
ATTR_REDUCIBLE = "reducible"
ATTR_SEMIREDUCIBLE = "semireducible"
ATTR_IRREDUCIBLE = "irreducible"
ATTR_CLASS = "class"
ATTR_INSTANCE = "instance"
ATTR_COERCION = "coercion"
ALLOWED_ATTRIBUTES = [
    ATTR_REDUCIBLE,
    ATTR_SEMIREDUCIBLE,
    ATTR_IRREDUCIBLE,
    ATTR_CLASS,
    ATTR_INSTANCE,
    ATTR_COERCION,
]

# CLI exit codes
EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_USAGE = 2
