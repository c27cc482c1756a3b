"""Exception types shared across the engine."""


class InputError(ValueError):
    """Invalid user-supplied arithmetic data (non-prime, p == l, bad triple)."""


class DegenerateCenterError(InputError):
    """The center degree is odd, so the T_A machinery has no meaning."""


class EngineError(RuntimeError):
    """An internal consistency check failed; the engine has a bug."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
