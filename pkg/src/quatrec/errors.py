"""Exception types raised by quatrec."""


class QuatRecError(Exception):
    pass


class ShapeError(QuatRecError, ValueError):
    """Grid dimensions of two operands do not match."""


class SpecError(QuatRecError, ValueError):
    """A mask specification or option does not fit the grid."""


class DegenerateSignalError(QuatRecError, ValueError):
    """Operation needs a nonzero signal."""


class NotBandlimitedError(QuatRecError, ValueError):
    """Signal has spectral energy outside the declared band."""
