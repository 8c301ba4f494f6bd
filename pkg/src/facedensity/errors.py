class LimitExceeded(RuntimeError):
    """A configured enumeration/size limit would be exceeded."""


class InfeasibleConfig(ValueError):
    """Parameters describe an empty or impossible experiment."""
