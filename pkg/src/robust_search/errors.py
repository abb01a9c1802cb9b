"""Exception types raised across the package."""


class InfeasibleHistory(ValueError):
    """No L-Lipschitz quality index that attains 1 is consistent with the history."""


class InvalidIndex(ValueError):
    """A quality index failed validation (ordering, Lipschitz bound, or target)."""


class OutOfRange(ValueError):
    """A parameter lies outside the domain where a formula is defined."""


class UndefinedThreshold(ValueError):
    """The stopping threshold is requested where no search is ever made (N = 0)."""


class NotLToRReachable(ValueError):
    """Strict mode: the history cannot arise under the left-to-right policy."""


class NotBifurcated(ValueError):
    """The discovery does not leave targets possible on both sides."""


class UnsupportedHistory(ValueError):
    """The two-period policy is only defined on the empty history and its successors."""


class Infeasible(ValueError):
    """A probe (x, z) cannot arise after one search."""


class NonTerminating(RuntimeError):
    """A policy did not stop within the allowed number of steps."""


class BudgetExceeded(RuntimeError):
    """The exhaustive solver visited more states than its configured cap."""
