"""Nonclassicality quantifiers for single-mode pure states.

Every metric reads its moments from the truncated Fock vector, so HCS
parameters are first expanded with :func:`hcs_lab.hcs.build_hcs_fock`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import VacuumState
from .fock import FockVector, MomentSet, as_point, moment_set, wigner_parity
from .hcs import HcsParams, build_hcs_fock, wigner_closed
from .parallel import pmap

VACUUM_TOL = 1e-12
WIGNER_BOUND = 2 / np.pi


def _state(source, strict: bool = True, cutoff: int | None = None) -> FockVector:
    if isinstance(source, HcsParams):
        return build_hcs_fock(source, cutoff=cutoff, strict=strict)
    return source


def moments_of(source, strict: bool = True) -> MomentSet:
    if isinstance(source, MomentSet):
        return source
    return moment_set(_state(source, strict), strict=strict)


def mandel_q(source, strict: bool = True) -> float:
    """(<a^dag^2 a^2> - <n>^2) / <n>; raises VacuumState when <n> vanishes."""
    m = moments_of(source, strict)
    if m.mean_n <= VACUUM_TOL:
        raise VacuumState(f"<n> = {m.mean_n:.3e}; the Mandel parameter is undefined")
    return (m.mean_adag2a2 - m.mean_n**2) / m.mean_n


def skew_information(source, strict: bool = True) -> float:
    m = moments_of(source, strict)
    return 0.5 + m.mean_n - abs(m.mean_a) ** 2


def quadrature_squeezing(source, phi_quad: float, strict: bool = True) -> float:
    """Variance of X_phi = (a e^{-i phi} + a^dag e^{i phi})/sqrt(2) minus the vacuum value 1/2."""
    m = moments_of(source, strict)
    phi_quad = math.fmod(phi_quad, 2 * math.pi)
    rot = np.exp(-1j * phi_quad)
    return float((rot**2 * m.mean_a2).real + m.mean_n - 2 * ((rot * m.mean_a).real) ** 2)


def optimal_quadrature_angle(source, strict: bool = True) -> float:
    """Exact minimizer: 2 phi* = arg(<a^2> - <a>^2) + pi, reduced to [0, pi)."""
    m = moments_of(source, strict)
    c = m.mean_a2 - m.mean_a**2
    return float(((np.angle(c) + np.pi) / 2) % np.pi)


def quadrature_min_scan(source, n_angles: int = 180, strict: bool = True) -> tuple[float, float]:
    """Most-squeezed quadrature among phi = k pi / n_angles; returns (angle, S_phi)."""
    if n_angles < 4:
        raise ValueError("n_angles must be >= 4")
    m = moments_of(source, strict)
    angles = np.arange(n_angles) * np.pi / n_angles
    vals = np.array([quadrature_squeezing(m, a) for a in angles])
    k = int(np.argmin(vals))
    return float(angles[k]), float(vals[k])


def as_squeezing_ymin(source, strict: bool = True) -> float:
    m = moments_of(source, strict)
    return m.mean_adag2a2 - abs(m.mean_a2) ** 2 - abs(m.mean_a4 - m.mean_a2**2)


def s_ass(source, strict: bool = True) -> float:
    """Amplitude-squared squeezing factor; squeezing when -1 <= S_ass < 0."""
    m = moments_of(source, strict)
    return 0.5 * as_squeezing_ymin(m) / (m.mean_n + 0.5)


def as_variances(source, strict: bool = True) -> tuple[float, float]:
    """Variances of Y1 = (a^dag^2 + a^2)/2 and Y2 = i(a^dag^2 - a^2)/2."""
    m = moments_of(source, strict)
    common = 0.5 * (m.mean_adag2a2 - abs(m.mean_a2) ** 2) + m.mean_n + 0.5
    c = m.mean_a4 - m.mean_a2**2
    return common + 0.5 * c.real, common - 0.5 * c.real


# --- Wigner grids -----------------------------------------------------------


class WignerMethod(enum.Enum):
    CLOSED_FORM = "closed"
    PARITY_ORACLE = "parity"


@dataclass(frozen=True, eq=False)
class WignerGrid:
    """W sampled at x[i] + i p[j]; ``values`` has shape (len(x), len(p))."""

    x: np.ndarray
    p: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.x.size < 2 or self.p.size < 2:
            raise ValueError("a Wigner grid needs at least 2 points per axis")
        if self.values.shape != (self.x.size, self.p.size):
            raise ValueError("values shape does not match the axes")

    @property
    def bounds(self) -> tuple[float, float, float, float]:
        return float(self.x[0]), float(self.x[-1]), float(self.p[0]), float(self.p[-1])

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def dp(self) -> float:
        return float(self.p[1] - self.p[0])

    def integral(self) -> float:
        return float(np.sum(self.values) * self.dx * self.dp)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class NegativityReport:
    min_value: float
    min_location: complex
    negative_volume: float


def default_bounds(center: complex, half_width: float = 4.0) -> tuple[float, float, float, float]:
    return (center.real - half_width, center.real + half_width, center.imag - half_width, center.imag + half_width)


def wigner_grid(
    source,
    bounds: tuple[float, float, float, float] | None = None,
    nx: int = 161,
    np_: int = 161,
    method: WignerMethod | str = WignerMethod.CLOSED_FORM,
    strict: bool = True,
) -> WignerGrid:
    """Fill a rectangular phase-space grid with W(x + i p).

    CLOSED_FORM requires HcsParams.  PARITY_ORACLE accepts either and uses the
    displaced-parity sum on the Fock vector.  Default bounds are +-4 around
    alpha (or around <a> for a bare Fock vector).
    """
    method = WignerMethod(method)
    if nx < 2 or np_ < 2:
        raise ValueError("nx and np must be >= 2")
    if bounds is None:
        if isinstance(source, HcsParams):
            center = source.alpha
        else:
            center = moment_set(source, strict=strict).mean_a
        bounds = default_bounds(as_point(center))
    x = np.linspace(bounds[0], bounds[1], nx)
    p = np.linspace(bounds[2], bounds[3], np_)
    zz = x[:, None] + 1j * p[None, :]
    if method is WignerMethod.CLOSED_FORM:
        if not isinstance(source, HcsParams):
            raise TypeError("the closed form is only available for HcsParams")
        values = wigner_closed(source, zz)
    else:
        state = _state(source, strict)
        rows = pmap(lambda row: wigner_parity(state, row, strict=strict), list(zz))
        values = np.stack(rows)
    return WignerGrid(x, p, np.asarray(values, dtype=float))


def negativity_report(grid: WignerGrid) -> NegativityReport:
    """Minimum, its location, and the midpoint-rule volume of (|W| - W)/2."""
    i, j = np.unravel_index(int(np.argmin(grid.values)), grid.values.shape)
    neg = (np.abs(grid.values) - grid.values) / 2
    return NegativityReport(
        min_value=float(grid.values[i, j]),
        min_location=complex(grid.x[i], grid.p[j]),
        negative_volume=float(np.sum(neg) * grid.dx * grid.dp),
    )
