"""Exception hierarchy shared by all modules.

The CLI maps ``DataError`` to exit status 2 and ``AlgorithmError`` to 3.
"""


class ExprClustError(Exception):
    """Base class for every error raised by this package."""


class DataError(ExprClustError, ValueError):
    """Input data could not be loaded, cleaned or normalized."""


class ConstantRowError(DataError):
    def __init__(self, label):
        super().__init__(f"row {label!r} is constant (zero standard deviation)")
        self.label = label


class AlgorithmError(ExprClustError, ValueError):
    """A clustering routine was called outside its preconditions."""


class EmptyClusterError(AlgorithmError):
    def __init__(self, cluster):
        super().__init__(f"cluster {cluster} has no members")
        self.cluster = cluster
