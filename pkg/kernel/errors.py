class KernelError(Exception):
    """Raised when a metavariable-free term or declaration fails kernel checks."""


class KernelTypeError(KernelError):
    pass


class DeclarationTypeMismatch(KernelError):
    def __init__(self, name, expected, actual):
        self.name = name
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"type mismatch in '{name}': value has type {actual} but is expected to have type {expected}"
        )


class PositivityError(KernelError):
    pass


class DuplicateDeclaration(KernelError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"'{name}' has already been declared")


class UnknownConstant(KernelError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown constant '{name}'")


class UnsupportedInductive(KernelError):
    pass
