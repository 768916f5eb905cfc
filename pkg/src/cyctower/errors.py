"""Exception hierarchy shared by the cyctower modules."""


class CyctowerError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CyctowerError, ValueError):
    """Invalid user-supplied input (bad record, bad flag, bad literal)."""


class BadReductionError(CyctowerError):
    """The model does not reduce to a smooth curve of the same genus mod p."""


class UnsupportedGenusError(CyctowerError):
    """The operation is only implemented for genus 2."""


class InternalInconsistencyError(CyctowerError):
    """A computed quantity violates a theorem it must satisfy.

    This always indicates a bug (e.g. a point count breaking the Weil bound)
    and is never downgraded to a per-prime skip.
    """


class InconsistentInputError(CyctowerError, ValueError):
    """Arithmetic inputs that cannot come from an actual abelian variety."""


class InapplicableError(CyctowerError):
    """The hypotheses of a criterion are not met, so it cannot be evaluated."""


class PrecisionError(CyctowerError):
    """A p-adic quantity cannot be determined at the working precision."""


class IndeterminateError(PrecisionError):
    """Series vanishes identically at the working precision."""


class PrecisionExhaustedError(PrecisionError):
    """The minimal valuation is not attained below the degree truncation."""
