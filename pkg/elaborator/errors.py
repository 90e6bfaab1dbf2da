class ElaborationError(Exception):
    """A declaration could not be elaborated.

    ``trace`` holds the asserted origins behind a solver failure, innermost
    first; ``details`` holds extra lines such as per-candidate failures.
    """

    def __init__(self, span, message, trace=(), details=()):
        self.span = span
        self.message = message
        self.trace = list(trace)
        self.details = list(details)
        self.splits = 0
        super().__init__(message)


class UnknownIdentifier(ElaborationError):
    def __init__(self, span, name):
        self.name = name
        super().__init__(span, f"unknown identifier '{name}'")


class UnsolvedHoles(ElaborationError):
    def __init__(self, span, holes):
        self.holes = holes  # list of (span, description)
        super().__init__(
            span,
            "don't know how to synthesize placeholder",
            details=[f"{desc} at {hole_span}" for hole_span, desc in holes],
        )


class KernelRecheckError(ElaborationError):
    """The kernel rejected a term the solver accepted; an elaborator bug."""

    def __init__(self, span, cause):
        self.cause = cause
        super().__init__(span, f"internal error: kernel rejected elaborated term: {cause}")
