"""Exception types shared by every module in the package."""


class ConfigurationError(ValueError):
    """A user-supplied parameter or label is invalid (unknown name, out of range)."""


class NumericDomainError(ArithmeticError):
    """A numeric input violates a mathematical precondition.

    Raised for non-Hermitian matrices passed to Hermitian routines, density
    matrices with a bad trace or negative spectrum, probability vectors that
    do not sum to one, and correlation measures that come out more negative
    than optimizer noise can explain.
    """
