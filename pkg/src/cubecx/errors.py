"""Exceptions shared across the package."""


class CubeComplexError(Exception):
    """Base class for faults raised by this package."""


class InvalidComplex(CubeComplexError):
    pass


class CapExceeded(CubeComplexError):
    """A configured enumeration cap was hit; the answer is inconclusive."""

    def __init__(self, what: str, cap: int):
        super().__init__(f"{what} exceeded cap {cap}")
        self.what = what
        self.cap = cap


class NotCarrierRetract(CubeComplexError):
    def __init__(self, hyperplane, overlap):
        super().__init__(f"hyperplane {hyperplane} is not a carrier retract "
                         f"(half-carriers meet at {sorted(overlap)})")
        self.hyperplane = hyperplane
        self.overlap = overlap


class AmbiguousFill(CubeComplexError):
    pass


class ConstructionFault(CubeComplexError):
    """An internal consistency check failed while building a complex."""


class SchemaError(CubeComplexError):
    pass
