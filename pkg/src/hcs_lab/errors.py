"""Exception hierarchy shared by every hcs_lab module."""


class HcsLabError(Exception):
    """Base class for all library errors."""


class NumericalError(HcsLabError):
    """A computation cannot be carried out to the required accuracy."""


class CutoffInsufficient(NumericalError):
    """The Fock truncation drops non-negligible probability mass."""


class SeriesNotConverged(NumericalError):
    """A truncated operator power series has not converged at the cutoff."""


class DegenerateState(NumericalError):
    """The two superposed branches cancel; the state cannot be normalized."""


class VacuumState(NumericalError):
    """The mean photon number vanishes, so the requested ratio is undefined."""


class HeraldFailed(HcsLabError):
    """The postselection event has (numerically) zero probability."""


class BothZero(HcsLabError, ValueError):
    """Both superposition amplitudes are zero."""


class CutoffWarning(UserWarning):
    """Lenient-mode replacement for :class:`CutoffInsufficient`."""


class ValidityWarning(UserWarning):
    """An approximation is being used outside its regime of validity."""
