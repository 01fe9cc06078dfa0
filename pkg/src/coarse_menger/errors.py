class InputError(ValueError):
    """Malformed or out-of-range input (bad vertex ids, invalid decompositions, ...)."""


class SizeError(InputError):
    """Instance too large for an exhaustive procedure."""


class PreconditionError(InputError):
    """A documented precondition of a construction is not met."""


class ContractError(RuntimeError):
    """An internal guarantee failed; signals a broken input or a bug."""


class CertificateError(ContractError):
    """A certificate failed its own self-check."""
