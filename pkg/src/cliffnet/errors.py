class CliffordError(Exception):
    """Base class of every error raised by cliffnet."""


class SignatureError(CliffordError, ValueError):
    """Unsupported signature, or a blade count that does not match it."""


class ShapeError(CliffordError, ValueError):
    pass


class PackingError(CliffordError, ValueError):
    pass


class CourantError(CliffordError, ValueError):
    """The time step violates the FDTD stability bound."""


class NumericalError(CliffordError, ArithmeticError):
    pass


class DivergenceError(NumericalError):
    """A loss or an activation became NaN or infinite.

    :param message: diagnostic message
    :param step: optimizer step or rollout step where it happened
    :param checkpoint: path of the last good checkpoint, if any
    """
    def __init__(self, message, step=None, checkpoint=None):
        super(DivergenceError, self).__init__(message)
        self.step = step
        self.checkpoint = checkpoint


class ClfFormatError(CliffordError, ValueError):
    pass


class BadMagicError(ClfFormatError):
    pass


class TruncatedPayloadError(ClfFormatError):
    pass


class HeaderMismatchError(ClfFormatError):
    pass
