"""Heralded HCS preparation with a cross-Kerr coupling.

A single photon is split over modes b and c, the b arm picks up a phase
shifter, the b photon number couples to the signal through
U = exp(-i phi0 n_a n_b), and a variable beam splitter plus detection at D1
projects the photon onto t|1,0> + r|0,1>.  Because exactly one photon lives in
b and c, the joint state is two signal vectors: the one paired with |1>_b|0>_c
and the one paired with |0>_b|1>_c.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import HcsLabError, HeraldFailed, NumericalError, ValidityWarning
from .fock import FockVector, apply_creation, apply_number, as_point, choose_cutoff, coherent_vector
from .hcs import HcsParams, build_hcs_fock, hcs_params_from_amplitudes
from .metrics import mandel_q, negativity_report, quadrature_squeezing, s_ass, wigner_grid
from .parallel import pmap

HERALD_TOL = 1e-14
FIRST_ORDER_GUARD = 0.1


@dataclass(frozen=True)
class KerrSchemeParams:
    alpha: complex
    phi0: float
    theta_ps: float = -math.pi / 2
    transmissivity: float = 1 / math.sqrt(2)
    cutoff: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_point(self.alpha, "alpha"))
        if not math.isfinite(self.phi0) or not math.isfinite(self.theta_ps):
            raise ValueError("phi0 and theta_ps must be finite")
        if not 0.0 <= self.transmissivity <= 1.0:
            raise ValueError("transmissivity must lie in [0, 1]")
        if self.cutoff is None:
            object.__setattr__(self, "cutoff", choose_cutoff(abs(self.alpha)))

    @property
    def reflectivity(self) -> float:
        return math.sqrt(max(1.0 - self.transmissivity**2, 0.0))


@dataclass(frozen=True)
class JointState:
    """Signal vectors paired with |1>_b|0>_c and |0>_b|1>_c."""

    branch_10: FockVector
    branch_01: FockVector
    alpha: complex = 0j

    @property
    def norm2(self) -> float:
        return self.branch_10.norm2 + self.branch_01.norm2

    def scaled(self, c: complex) -> JointState:
        return JointState(c * self.branch_10, c * self.branch_01, self.alpha)


@dataclass(frozen=True)
class HeraldedResult:
    signal_unnormalized: FockVector
    success_probability: float
    signal_normalized: FockVector
    fitted: HcsParams
    fidelity_to_fit: float
    coefficients: tuple[complex, complex] = field(default=(0j, 0j))
    span_residual: float = 0.0


def initial_joint_state(params: KerrSchemeParams) -> JointState:
    coh = coherent_vector(params.alpha, params.cutoff, strict=True)
    return JointState(
        cmath.exp(1j * params.theta_ps) / math.sqrt(2) * coh,
        1j / math.sqrt(2) * coh,
        params.alpha,
    )


def kerr_evolve_exact(state: JointState, phi0: float) -> JointState:
    """exp(-i phi0 n_a n_b): phase e^{-i phi0 n} on the n_b = 1 branch only."""
    n = np.arange(state.branch_10.cutoff + 1)
    return JointState(FockVector(np.exp(-1j * phi0 * n) * state.branch_10.amps), state.branch_01, state.alpha)


def kerr_evolve_first_order(state: JointState, phi0: float) -> JointState:
    """(1 - i phi0 n_a n_b); the result is not normalized."""
    a = abs(state.alpha)
    if abs(phi0) * (a * a + a) >= FIRST_ORDER_GUARD:
        warnings.warn(
            f"|phi0|(|alpha|^2 + |alpha|) = {abs(phi0) * (a * a + a):.3g} >= {FIRST_ORDER_GUARD}; "
            "the linearized Kerr evolution is unreliable here",
            ValidityWarning,
            stacklevel=2,
        )
    b10 = state.branch_10 + (-1j * phi0) * apply_number(state.branch_10)
    return JointState(b10, state.branch_01, state.alpha)


def weak_matrix_element_nb(theta_ps: float, t: float) -> complex:
    """<psi_f| b^dag b |psi_i'> = t e^{i theta} / sqrt(2)."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    return t * cmath.exp(1j * theta_ps) / math.sqrt(2)


def decompose(signal: FockVector, alpha: complex) -> tuple[complex, complex, float]:
    """Least-squares c1, c2 with signal ~ c1|alpha> + c2 a^dag|alpha>; also the residual norm."""
    coh = coherent_vector(alpha, signal.cutoff)
    added = apply_creation(coh, strict=False)
    size = added.cutoff + 1
    basis = np.stack([coh.padded(size - 1).amps, added.amps], axis=1)
    target = signal.padded(size - 1).amps
    coef, *_ = np.linalg.lstsq(basis, target, rcond=None)
    resid = float(np.linalg.norm(target - basis @ coef))
    return complex(coef[0]), complex(coef[1]), resid


def postselect_d1(state: JointState, t: float) -> HeraldedResult:
    """Project the photon onto t|1,0> + r|0,1> and fit the signal to the HCS family."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    r = math.sqrt(max(1.0 - t * t, 0.0))
    signal = t * state.branch_10 + r * state.branch_01
    prob = signal.norm2
    if prob <= HERALD_TOL:
        raise HeraldFailed(f"success probability {prob:.3e} <= {HERALD_TOL:g}")
    normed = signal.normalized()
    c1, c2, resid = decompose(signal, state.alpha)
    fitted = hcs_params_from_amplitudes(c1, c2, state.alpha)
    fit_state = build_hcs_fock(fitted, cutoff=signal.cutoff, strict=False)
    fid = min(abs(fit_state.overlap(normed)) ** 2, 1.0)
    return HeraldedResult(signal, prob, normed, fitted, fid, (c1, c2), resid)


def rejected_probability(state: JointState, t: float) -> float:
    """Probability of the orthogonal photon outcome r|1,0> - t|0,1>."""
    r = math.sqrt(max(1.0 - t * t, 0.0))
    return (r * state.branch_10 + (-t) * state.branch_01).norm2


def herald(params: KerrSchemeParams, first_order: bool = False) -> HeraldedResult:
    joint = initial_joint_state(params)
    evolve = kerr_evolve_first_order if first_order else kerr_evolve_exact
    return postselect_d1(evolve(joint, params.phi0), params.transmissivity)


def first_order_amplitudes(params: KerrSchemeParams) -> tuple[complex, complex]:
    """Coefficients of |alpha> and a^dag|alpha> in the linearized heralded state."""
    t, r = params.transmissivity, params.reflectivity
    e = cmath.exp(1j * params.theta_ps)
    return (e * t + 1j * r) / math.sqrt(2), -1j * e * t * params.phi0 * params.alpha / math.sqrt(2)


def printed_balanced_amplitudes(params: KerrSchemeParams) -> tuple[complex, complex]:
    """The theta_ps = -pi/2 coefficients in the reference closed form, (i(r - t), +t phi0 alpha) / sqrt(2)."""
    t, r = params.transmissivity, params.reflectivity
    return 1j * (r - t) / math.sqrt(2), t * params.phi0 * params.alpha / math.sqrt(2)


@dataclass(frozen=True)
class SweepRow:
    t: float
    epsilon_fit: float
    success_prob: float
    fidelity: float
    q: float
    s_phi0: float
    s_ass: float
    neg_volume: float
    status: str = "ok"


def _nan_row(t: float, status: str) -> SweepRow:
    nan = float("nan")
    return SweepRow(t, nan, nan, nan, nan, nan, nan, nan, status)


def transmissivity_sweep(
    params: KerrSchemeParams,
    t_values,
    first_order: bool = False,
    with_wigner: bool = True,
    grid_points: int = 81,
) -> list[SweepRow]:
    """Herald at every t; failures become flagged rows instead of aborting the sweep."""

    def one(t: float) -> SweepRow:
        t = float(t)
        if not 0.0 <= t <= 1.0:
            raise ValueError(f"t = {t} outside [0, 1]")
        p = KerrSchemeParams(params.alpha, params.phi0, params.theta_ps, t, params.cutoff)
        try:
            res = herald(p, first_order)
        except HeraldFailed:
            return _nan_row(t, "herald-failed")
        sig = res.signal_normalized
        try:
            q = mandel_q(sig)
        except NumericalError:
            q = float("nan")
        try:
            neg = float("nan")
            if with_wigner:
                grid = wigner_grid(sig, nx=grid_points, np_=grid_points, method="parity")
                neg = negativity_report(grid).negative_volume
            return SweepRow(
                t, res.fitted.epsilon, res.success_probability, res.fidelity_to_fit,
                q, quadrature_squeezing(sig, 0.0), s_ass(sig), neg,
            )
        except HcsLabError as exc:
            return _nan_row(t, f"error: {type(exc).__name__}")

    return pmap(one, list(t_values))
