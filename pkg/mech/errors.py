class MechanicsError(Exception):
    """Base class for failures while deriving momenta, energies or equations of motion"""


class ChartError(MechanicsError):
    pass


class JetOrderError(MechanicsError):
    def __init__(self, base, order, capacity):
        self.base = base
        self.order = order
        self.capacity = capacity
        super().__init__(f"Jet {base}[{order}] exceeds the chart capacity {capacity} for '{base}'")


class MomentumInversionError(MechanicsError):
    def __init__(self, coordinate, relation):
        self.coordinate = coordinate
        self.relation = relation
        super().__init__(f"Cannot invert the momentum relation for '{coordinate}': {relation}")


class SingularSystemError(MechanicsError):
    """Top derivatives cannot be isolated from the equations of motion."""
