"""Exception hierarchy shared by every module."""


class LatticeError(ValueError):
    """Base class for all structure and input errors."""


class DuplicateLabel(LatticeError):
    pass


class UnknownLabel(LatticeError):
    pass


class CycleDetected(LatticeError):
    def __init__(self, pair):
        self.pair = pair
        super().__init__(f"cover relation is cyclic through {pair[0]!r} and {pair[1]!r}")


class NotALattice(LatticeError):
    def __init__(self, pair, missing="join"):
        self.pair = pair
        self.missing = missing
        super().__init__(f"{pair[0]!r} and {pair[1]!r} have no {missing}")


class NotASemilattice(LatticeError):
    pass


class UnknownCatalogName(LatticeError):
    pass


class SizeGuardExceeded(LatticeError):
    def __init__(self, bound, count):
        self.bound = bound
        self.count = count
        super().__init__(f"size guard {bound} exceeded (reached {count} elements)")


class NotDistributive(LatticeError):
    pass


class IndexOutOfRange(LatticeError, IndexError):
    pass


class DimensionMismatch(LatticeError):
    pass


class NotComparablePair(LatticeError):
    pass


class NotComparable(LatticeError):
    pass


class NotABimorphism(LatticeError):
    def __init__(self, witness, law):
        self.witness = witness
        self.law = law
        super().__init__(f"bimorphism law {law} fails at {witness}")


class NotLHomomorphism(LatticeError):
    def __init__(self, which):
        self.which = which
        super().__init__(f"argument {which} is not an L-homomorphism")


class NotAHomomorphism(LatticeError):
    pass


class TrivialLattice(LatticeError):
    pass


class CarrierMismatch(LatticeError):
    pass


class DocumentError(LatticeError):
    """Malformed or unsupported JSON document."""
