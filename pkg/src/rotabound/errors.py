class InputError(ValueError):
    """Invalid argument or malformed input data."""


class ContractError(RuntimeError):
    """A precondition or internal invariant did not hold.

    ``witness`` carries whatever data demonstrates the violation.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
