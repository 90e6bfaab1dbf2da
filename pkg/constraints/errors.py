from constraints.justification import Justification


class JustifiedError(Exception):
    """A failure whose cause is recorded by a justification."""

    def __init__(self, j: Justification, message: str = "failed to solve constraints"):
        self.j = j
        self.message = message
        super().__init__(message)

    def with_justification(self, j: Justification) -> "JustifiedError":
        self.j = j
        return self


class UnificationFailure(JustifiedError):
    def __init__(self, j, lhs, rhs):
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(j, "type mismatch")


class LevelMismatch(JustifiedError):
    def __init__(self, j, lhs, rhs):
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(j, f"universe level mismatch: {lhs} and {rhs}")


class FunctionExpected(JustifiedError):
    def __init__(self, j, term, type):
        self.term = term
        self.type = type
        super().__init__(j, "function expected")


class StreamExhausted(JustifiedError):
    pass


class InstanceNotFound(JustifiedError):
    def __init__(self, j, goal):
        self.goal = goal
        super().__init__(j, "failed to synthesize type class instance")


class InstanceDepthExceeded(JustifiedError):
    def __init__(self, j, goal, depth):
        self.goal = goal
        self.depth = depth
        super().__init__(j, f"maximum instance search depth ({depth}) reached")


class OverloadExhausted(JustifiedError):
    def __init__(self, j, label, failures):
        self.label = label
        self.failures = failures  # list of (alternative label, JustifiedError)
        super().__init__(j, f"none of the overloads of '{label}' is applicable")


class StepBudgetExceeded(JustifiedError):
    def __init__(self, j, max_steps):
        self.max_steps = max_steps
        super().__init__(j, f"constraint solver exceeded the step budget of {max_steps}")
