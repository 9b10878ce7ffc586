class ReductionError(Exception):
    """Base class for failures of the contact reduction pipeline"""


class SymmetryError(ReductionError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class FactorizationError(ReductionError):
    def __init__(self, expression):
        self.expression = expression
        super().__init__(f"Reparameterized Lagrangian does not factor as e^rho * f(no rho): {expression}")


class PromotionError(ReductionError):
    pass
