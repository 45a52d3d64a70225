"""Exception types shared across the package."""


class HurwitzLabError(Exception):
    """Base class for all package errors."""


class NegativeRamification(HurwitzLabError):
    """2g-2+|mu|+l(mu) < 0: no covers with this data exist."""


class BudgetExceeded(HurwitzLabError):
    """An enumeration would exceed the configured search budget."""


class UnstableRange(HurwitzLabError):
    """Requested (g, n) lies outside the stable range 2g-2+n > 0."""


class MissingHodgeEntry(HurwitzLabError):
    """A Hodge table lookup failed; carries the absent correlator."""

    def __init__(self, correlator):
        self.correlator = correlator
        super().__init__(f"missing Hodge table entry: {correlator}")


class RankDeficient(HurwitzLabError):
    """The inversion system did not reach full column rank."""


class NotTransitive(HurwitzLabError):
    """Transposition tuple does not act transitively on the sheets."""


class PerimeterMismatch(HurwitzLabError):
    """Internal consistency failure: cell perimeters do not match the profile."""


class UnstableResult(HurwitzLabError):
    """Homotopy-type reduction produced an unstable (or empty) map."""


class InsufficientSamples(HurwitzLabError):
    """Statistical routine called with too small a sample budget."""


class PrecisionLoss(HurwitzLabError):
    """Fewer significant bits survived than the routine guarantees."""
