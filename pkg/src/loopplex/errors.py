"""Exception hierarchy for loopplex."""


class LoopplexError(Exception):
    """Base class for all loopplex errors."""


class RaggedInput(LoopplexError):
    """Input array is not n rows of n cells."""


class NotLatin(LoopplexError):
    """A symbol repeats within a row or column."""


class ParseError(LoopplexError):
    """Table text could not be parsed; carries line/column of the offense."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class UnknownName(LoopplexError):
    """Requested builtin table does not exist."""


class NotASubloop(LoopplexError):
    """Element set is not closed under product and divisions."""


class NotNormal(LoopplexError):
    """Subloop is not invariant under the inner mappings."""


class NotAGroup(LoopplexError):
    """Operation requires an associative table."""


class EmptyMultiset(LoopplexError):
    """Product set of an empty multiset is undefined."""


class BudgetExceeded(LoopplexError):
    """Search or DP state space exceeds the configured budget."""


class KTooLargeForBudget(BudgetExceeded):
    """Full k-product state space (k+1)^n exceeds the configured cap."""


class WitnessesDisabled(LoopplexError):
    """Witness requested but the DP ran without a witness store."""


class ProductNotIdentity(LoopplexError):
    """Sequence does not multiply out to the identity."""


class ContiguousUnitSubsequence(LoopplexError):
    """A proper contiguous subsequence multiplies to the identity.

    Carries the offending half-open index range as ``start``/``stop``.
    """

    def __init__(self, message, start, stop):
        super().__init__(message)
        self.start = start
        self.stop = stop


class NotRegular(LoopplexError):
    """Cell selection is not column-entry regular."""


class NotRegularRowTransversal(LoopplexError):
    """Cell selection is not a regular row transversal."""


class NotInSingleCoset(LoopplexError):
    """Achievable set crosses a derived-subloop coset boundary.

    This is an internal consistency failure, never valid data.
    """


class InconsistencyDetected(LoopplexError):
    """A universally valid implication failed; indicates a bug."""
