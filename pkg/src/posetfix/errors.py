"""Exception types shared across the package.

Every domain failure carries a ``condition`` string taken from
:data:`CONDITIONS`, so callers (and the command line front end) can report
exactly which hypothesis failed without parsing messages.
"""

CONDITIONS = {
    "witness": "c ⪯ T(c) fails",
    "monotone": "T monotone fails",
    "commuting": "family commutative fails",
    "directed": "J directed and nonempty fails",
    "sign_nonnegative": "J(0) ≥ 0 fails",
    "sign_nonpositive": "J(0) ≤ 0 fails",
    "kernel_monotone": "F monotone in its third coordinate fails",
    "growth_bound": "|F(t,s,x)| ≤ h(t,s) + M|x| fails",
    "growth_constant": "M ∈ [0, 1/2) fails",
    "ball": "‖J(x_k)‖ ≤ R fails",
    "trajectory": "monotone trajectory x_k ⪯ x_{k+1} fails",
    "convergence": "convergence within max_iter fails",
    "finite": "J(y) finite fails",
}


class PosetError(ValueError):
    """Malformed order data: bad indices, cycles, wrong lengths."""


class DomainError(Exception):
    """A mathematical hypothesis or precondition does not hold."""

    def __init__(self, key, detail=""):
        self.key = key
        self.condition = CONDITIONS[key]
        self.detail = detail
        msg = self.condition if not detail else f"{self.condition}: {detail}"
        super().__init__(msg)


class InvariantError(AssertionError):
    """An internal invariant broke; signals a bug or unvalidated input."""
