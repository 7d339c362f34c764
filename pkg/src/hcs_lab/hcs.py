"""Hybrid coherent states N[sqrt(eps) e^{i theta}|alpha> + sqrt(1-eps) e^{i phi} a^dag|alpha>].

Closed-form expressions for the normalization, photon distribution, number
moments and Wigner function, plus the Fock-vector construction that the
closed forms are checked against.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import BothZero, DegenerateState
from .fock import (
    FockVector,
    apply_creation,
    as_point,
    choose_cutoff,
    coherent_vector,
    expectation_normal_ordered,
)

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class HcsParams:
    """Superposition weight ``epsilon``, branch phases ``theta``/``phi`` and amplitude ``alpha``."""

    epsilon: float
    theta: float = 0.0
    phi: float = 0.0
    alpha: complex = 0j

    def __post_init__(self):
        eps = float(self.epsilon)
        if not 0.0 <= eps <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon!r}")
        for name in ("theta", "phi"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "phi", float(self.phi))
        object.__setattr__(self, "alpha", as_point(self.alpha, "alpha"))

    @classmethod
    def polar(cls, epsilon: float, r: float, omega: float = 0.0, theta: float = 0.0, phi: float = 0.0):
        return cls(epsilon, theta, phi, cmath.rect(r, omega))

    @property
    def r(self) -> float:
        return abs(self.alpha)

    @property
    def omega(self) -> float:
        return cmath.phase(self.alpha)

    @property
    def branch_amplitudes(self) -> tuple[complex, complex]:
        """Unnormalized (coherent, photon-added) coefficients."""
        return (
            math.sqrt(self.epsilon) * cmath.exp(1j * self.theta),
            math.sqrt(1.0 - self.epsilon) * cmath.exp(1j * self.phi),
        )

    def replace(self, **kw) -> HcsParams:
        d = dict(epsilon=self.epsilon, theta=self.theta, phi=self.phi, alpha=self.alpha)
        d.update(kw)
        return HcsParams(**d)


@dataclass(frozen=True)
class WignerParams:
    params: HcsParams
    z: complex

    def __post_init__(self):
        object.__setattr__(self, "z", as_point(self.z))


def _cross(p: HcsParams) -> float:
    """2 sqrt(eps - eps^2) Re[e^{i(theta - phi)} alpha], the interference term."""
    return 2.0 * math.sqrt(max(p.epsilon - p.epsilon**2, 0.0)) * (cmath.exp(1j * (p.theta - p.phi)) * p.alpha).real


def normalization_bracket(p: HcsParams) -> float:
    return _cross(p) + (1.0 - p.epsilon) * abs(p.alpha) ** 2 + 1.0


def _n2(p: HcsParams) -> float:
    b = normalization_bracket(p)
    if b <= DEGENERACY_TOL:
        raise DegenerateState(f"normalization bracket {b:.3e} <= {DEGENERACY_TOL:g} for {p}")
    return 1.0 / b


def normalization_constant(p: HcsParams) -> float:
    return math.sqrt(_n2(p))


def default_cutoff(p: HcsParams) -> int:
    return choose_cutoff(abs(p.alpha))


def build_hcs_fock(p: HcsParams, cutoff: int | None = None, strict: bool = True) -> FockVector:
    """Normalized HCS on |0> .. |cutoff + 1> (photon addition raises the cutoff by one)."""
    norm = normalization_constant(p)
    cutoff = default_cutoff(p) if cutoff is None else cutoff
    coh = coherent_vector(p.alpha, cutoff, strict=strict)
    c1, c2 = p.branch_amplitudes
    state = (c1 * coh + c2 * apply_creation(coh, strict=strict)) * norm
    if not strict and not state.is_normalized:
        # lenient mode already warned about the truncation; proceed on the renormalized vector
        state = state.normalized()
    return state


def photon_distribution(p: HcsParams, n_max: int) -> np.ndarray:
    """P_n for n = 0 .. n_max from the closed form; the added-photon term is zero at n = 0."""
    n2 = _n2(p)
    n = np.arange(n_max + 1)
    c1, c2 = p.branch_amplitudes
    r = abs(p.alpha)
    w = cmath.phase(p.alpha)
    if r == 0.0:
        coh = (n == 0).astype(complex)
        # sqrt(n/(n-1)!) alpha^{n-1} survives only at n = 1
        add = (n == 1).astype(complex)
    else:
        lr = math.log(r)
        coh = np.exp(n * lr - 0.5 * gammaln(n + 1) + 1j * w * n)
        nm1 = np.maximum(n - 1, 0)
        add = np.where(n > 0, np.sqrt(n) * np.exp(nm1 * lr - 0.5 * gammaln(nm1 + 1) + 1j * w * nm1), 0.0)
    amp = math.exp(-0.5 * r * r) * (c1 * coh + c2 * add)
    return n2 * np.abs(amp) ** 2


def photon_probability(p: HcsParams, n: int) -> float:
    if n < 0:
        raise ValueError("n must be >= 0")
    return float(photon_distribution(p, n)[n])


def mean_n_closed(p: HcsParams) -> float:
    a2 = abs(p.alpha) ** 2
    eps = p.epsilon
    return _n2(p) * ((3 - 2 * eps) * a2 + (1 - eps) * a2**2 - eps + 1 + (1 + a2) * _cross(p))


class Adag2a2Variant(enum.Enum):
    AS_PRINTED = "as-printed"
    CORRECTED = "corrected"
    ORACLE_VALIDATED = "oracle-validated"


def adag2a2_closed(p: HcsParams, variant: Adag2a2Variant = Adag2a2Variant.ORACLE_VALIDATED) -> float:
    """<a^dag^2 a^2> for an HCS.

    AS_PRINTED keeps the published interference factor (2 + |alpha|^4);
    CORRECTED uses (2 + |alpha|^2), which is what the operator algebra gives;
    ORACLE_VALIDATED is the brute-force Fock expectation value.
    """
    variant = Adag2a2Variant(variant)
    if variant is Adag2a2Variant.ORACLE_VALIDATED:
        return expectation_normal_ordered(build_hcs_fock(p), 2, 2).real
    a2 = abs(p.alpha) ** 2
    eps = p.epsilon
    diag = (4 - 4 * eps) * a2 + (5 - 4 * eps) * a2**2 + (1 - eps) * a2**3
    factor = 2 + a2**2 if variant is Adag2a2Variant.AS_PRINTED else 2 + a2
    return _n2(p) * (diag + a2 * factor * _cross(p))


def wigner_closed(p: HcsParams, z) -> np.ndarray | float:
    """Closed-form HCS Wigner function; ``z`` may be a scalar or an array of points."""
    n2 = _n2(p)
    scalar = np.ndim(z) == 0
    z = np.asarray(z, dtype=complex)
    a = p.alpha
    eps = p.epsilon
    w1 = (cmath.exp(1j * (p.theta - p.phi)) * (a.real - 2 * z.real + 1j * (a.imag - 2 * z.imag))).real
    bracket = eps - 2 * math.sqrt(max(eps - eps**2, 0.0)) * w1 - (1 - eps) * (1 - np.abs(2 * z - a) ** 2)
    w = (2 * n2 / np.pi) * np.exp(-2 * np.abs(a - z) ** 2) * bracket
    return float(w) if scalar else w


def wigner_spac(alpha, z):
    alpha = as_point(alpha, "alpha")
    z = np.asarray(z, dtype=complex)
    w = -2 * (1 - np.abs(2 * z - alpha) ** 2) / (np.pi * (1 + abs(alpha) ** 2)) * np.exp(-2 * np.abs(z - alpha) ** 2)
    return float(w) if w.ndim == 0 else w


def wigner_coherent(alpha, z):
    alpha = as_point(alpha, "alpha")
    z = np.asarray(z, dtype=complex)
    w = (2 / np.pi) * np.exp(-2 * np.abs(z - alpha) ** 2)
    return float(w) if w.ndim == 0 else w


def hcs_params_from_amplitudes(c1: complex, c2: complex, alpha=0j) -> HcsParams:
    """Invert c1|alpha> + c2 a^dag|alpha> (unnormalized) to HCS parameters."""
    c1, c2 = complex(c1), complex(c2)
    w1, w2 = abs(c1) ** 2, abs(c2) ** 2
    if w1 + w2 == 0.0:
        raise BothZero("c1 and c2 are both zero")
    return HcsParams(
        epsilon=min(max(w1 / (w1 + w2), 0.0), 1.0),
        theta=cmath.phase(c1) if c1 != 0 else 0.0,
        phi=cmath.phase(c2) if c2 != 0 else 0.0,
        alpha=alpha,
    )
