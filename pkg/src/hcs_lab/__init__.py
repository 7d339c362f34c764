"""Hybrid coherent states: construction, nonclassicality metrics and heralded preparation."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BothZero,
    CutoffInsufficient,
    DegenerateState,
    HcsLabError,
    HeraldFailed,
    NumericalError,
    SeriesNotConverged,
    VacuumState,
)
from .fock import FockVector, MomentSet, choose_cutoff, coherent_vector, moment_set  # noqa: E402
from .hcs import HcsParams, build_hcs_fock, wigner_closed  # noqa: E402
from .metrics import (  # noqa: E402
    mandel_q,
    negativity_report,
    quadrature_squeezing,
    s_ass,
    skew_information,
    wigner_grid,
)

__all__ = [
    "BothZero",
    "CutoffInsufficient",
    "DegenerateState",
    "FockVector",
    "HcsLabError",
    "HcsParams",
    "HeraldFailed",
    "MomentSet",
    "NumericalError",
    "SeriesNotConverged",
    "VacuumState",
    "build_hcs_fock",
    "choose_cutoff",
    "coherent_vector",
    "mandel_q",
    "moment_set",
    "negativity_report",
    "quadrature_squeezing",
    "s_ass",
    "skew_information",
    "wigner_closed",
    "wigner_grid",
]
