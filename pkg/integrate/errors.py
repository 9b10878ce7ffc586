class IntegrationError(Exception):
    """Raised when a flow cannot be advanced; carries the last good time and state."""

    def __init__(self, message, t=None, state=None):
        self.t = t
        self.state = state
        if t is not None:
            message = f"{message} (last good t = {t:.17g})"
        super().__init__(message)


class CompileError(IntegrationError):
    pass


class StepUnderflowError(IntegrationError):
    pass
