"""Exception hierarchy for the group engine."""


class FgtError(Exception):
    """Base class for all engine errors."""


class GroupConstructionError(FgtError):
    pass


class NotClosed(GroupConstructionError):
    """Table entry out of range."""


class NoIdentity(GroupConstructionError):
    pass


class NotLatinSquare(GroupConstructionError):
    """A row or column repeats an element."""


class NotAssociative(GroupConstructionError):
    """Carries a violating triple (a, b, c)."""

    def __init__(self, triple):
        self.triple = tuple(triple)
        super().__init__(f"associativity fails at {self.triple}")


class NoInverse(GroupConstructionError):
    pass


class InvalidPermutation(GroupConstructionError):
    pass


class OrderCapExceeded(FgtError):
    def __init__(self, order, cap, what="group order"):
        self.order = order
        self.cap = cap
        super().__init__(f"{what} {order} exceeds cap {cap}")


class LatticeCapExceeded(FgtError):
    def __init__(self, order, cap):
        self.order = order
        self.cap = cap
        super().__init__(f"group order {order} exceeds lattice cap {cap}")


class SubgroupCountCapExceeded(FgtError):
    def __init__(self, cap):
        self.cap = cap
        super().__init__(f"more than {cap} subgroups found")


class NotNormal(FgtError):
    pass


class NotASubgroup(FgtError):
    pass


class ParseError(FgtError):
    def __init__(self, message, text=None, pos=None):
        self.text = text
        self.pos = pos
        if text is not None and pos is not None:
            message = f"{message} at position {pos} in {text!r}"
        super().__init__(message)


class ConfigError(FgtError):
    pass


class UnknownFormation(FgtError):
    pass


class ResidualNotWitnessed(FgtError):
    """The registered class is not closed under subdirect products."""


class CacheCorrupt(FgtError):
    pass
