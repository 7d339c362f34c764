"""Truncated single-mode Fock space.

States are complex amplitude vectors over |0>, ..., |N_cut>.  Everything in
here is exact linear algebra on the truncated basis; the only approximation is
the truncation itself, which is policed through :func:`tail_mass`.

The displaced-parity Wigner evaluation and the normally ordered characteristic
function in this module are the brute-force reference paths that the closed
forms in :mod:`hcs_lab.hcs` are checked against.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .errors import CutoffInsufficient, CutoffWarning, SeriesNotConverged

TAIL_TOL = 1e-10
NORM_TOL = 1e-10
SERIES_TOL = 1e-12
CUTOFF_MARGIN = 10
DEFAULT_CUTOFF_TOL = 1e-12


def as_point(z, name: str = "z") -> complex:
    """Coerce ``z`` to a finite Python complex (phase-space point or amplitude)."""
    if isinstance(z, (tuple, list)):
        z = complex(z[0], z[1])
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} must be finite, got {z!r}")
    return z


def _report(msg: str, strict: bool) -> None:
    if strict:
        raise CutoffInsufficient(msg)
    warnings.warn(msg, CutoffWarning, stacklevel=3)


@dataclass(frozen=True, eq=False)
class FockVector:
    """Immutable amplitude vector; ``amps[n]`` is the amplitude of |n>."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=np.complex128, copy=True).reshape(-1)
        if amps.size == 0:
            raise ValueError("a FockVector needs at least one amplitude")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @classmethod
    def basis(cls, n: int, cutoff: int | None = None) -> FockVector:
        cutoff = n if cutoff is None else cutoff
        if not 0 <= n <= cutoff:
            raise ValueError("need 0 <= n <= cutoff")
        amps = np.zeros(cutoff + 1, dtype=complex)
        amps[n] = 1.0
        return cls(amps)

    @property
    def cutoff(self) -> int:
        return self.amps.size - 1

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    @property
    def norm2(self) -> float:
        return float(np.sum(self.probabilities))

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm2 - 1.0) <= NORM_TOL

    @property
    def tail_mass(self) -> float:
        return tail_mass(self)

    def normalized(self) -> FockVector:
        nrm = math.sqrt(self.norm2)
        if nrm == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return FockVector(self.amps / nrm)

    def padded(self, cutoff: int) -> FockVector:
        if cutoff < self.cutoff:
            raise ValueError("padding cannot shrink a vector; use truncated()")
        out = np.zeros(cutoff + 1, dtype=complex)
        out[: self.amps.size] = self.amps
        return FockVector(out)

    def overlap(self, other: FockVector) -> complex:
        """<self|other> after padding both to a common cutoff."""
        n = max(self.cutoff, other.cutoff)
        return complex(np.vdot(self.padded(n).amps, other.padded(n).amps))

    def __add__(self, other: FockVector) -> FockVector:
        n = max(self.cutoff, other.cutoff)
        return FockVector(self.padded(n).amps + other.padded(n).amps)

    def __mul__(self, c) -> FockVector:
        return FockVector(complex(c) * self.amps)

    __rmul__ = __mul__


def tail_mass(state: FockVector) -> float:
    """Probability carried by the top three retained Fock indices."""
    return float(np.sum(np.abs(state.amps[-3:]) ** 2))


def choose_cutoff(alpha_mag: float, tol: float = DEFAULT_CUTOFF_TOL) -> int:
    """Smallest N whose Poisson(|alpha|^2 + 1) tail P(n > N) is below ``tol``, plus a margin.

    The margin of 10 leaves room for photon addition and for displaced-parity
    evaluation without re-deriving the cutoff.
    """
    if not 0.0 < tol <= 1e-6:
        raise ValueError("tol must lie in (0, 1e-6]")
    mean = float(alpha_mag) ** 2 + 1.0
    n = int(math.floor(mean))
    while True:
        cand = np.arange(n, n + 64 + int(8 * math.sqrt(mean)))
        below = np.nonzero(poisson.sf(cand, mean) < tol)[0]
        if below.size:
            return int(cand[below[0]]) + CUTOFF_MARGIN
        n = int(cand[-1]) + 1


def _check_tail(state: FockVector, strict: bool, what: str = "state") -> None:
    tm = tail_mass(state)
    if tm > TAIL_TOL:
        _report(f"{what} tail mass {tm:.3e} exceeds {TAIL_TOL:g} at cutoff {state.cutoff}", strict)


def coherent_vector(alpha, cutoff: int, strict: bool = False) -> FockVector:
    """Truncated coherent state e^{-|a|^2/2} a^n / sqrt(n!), built in log space."""
    alpha = as_point(alpha, "alpha")
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    n = np.arange(cutoff + 1)
    amps = np.zeros(cutoff + 1, dtype=complex)
    if alpha == 0:
        amps[0] = 1.0
    else:
        r, w = abs(alpha), np.angle(alpha)
        log_mag = -0.5 * r * r + n * math.log(r) - 0.5 * gammaln(n + 1)
        amps = np.exp(log_mag) * np.exp(1j * w * n)
    out = FockVector(amps)
    if strict:
        _check_tail(out, True, "coherent vector")
    return out


def apply_creation(state: FockVector, strict: bool = True) -> FockVector:
    """a^dagger on a truncated vector; the cutoff grows by one and nothing is dropped."""
    edge = tail_mass(state)
    if edge > TAIL_TOL:
        _report(f"tail mass {edge:.3e} exceeds {TAIL_TOL:g} before photon addition; raise the cutoff", strict)
    out = np.zeros(state.cutoff + 2, dtype=complex)
    out[1:] = np.sqrt(np.arange(1, state.cutoff + 2)) * state.amps
    return FockVector(out)


def apply_annihilation(state: FockVector) -> FockVector:
    """a on a truncated vector (exact; the cutoff is kept)."""
    out = np.zeros_like(state.amps)
    out[:-1] = np.sqrt(np.arange(1, state.cutoff + 1)) * state.amps[1:]
    return FockVector(out)


def apply_number(state: FockVector) -> FockVector:
    return FockVector(np.arange(state.cutoff + 1) * state.amps)


def _lower(amps: np.ndarray, q: int) -> np.ndarray:
    """a^q applied to raw amplitudes, same length."""
    if q == 0:
        return amps.copy()
    n = np.arange(amps.size)
    out = np.zeros_like(amps)
    if q >= amps.size:
        return out
    # sqrt((n+q)!/n!) for n = 0 .. N-q
    m = n[: amps.size - q]
    coef = np.exp(0.5 * (gammaln(m + q + 1) - gammaln(m + 1)))
    out[: amps.size - q] = coef * amps[q:]
    return out


def expectation_normal_ordered(state: FockVector, p: int, q: int, strict: bool = True) -> complex:
    """<a^dagger^p a^q> = <a^p psi | a^q psi> on the truncated basis."""
    if p < 0 or q < 0 or p + q > 8:
        raise ValueError("need p, q >= 0 and p + q <= 8")
    if not state.is_normalized:
        raise ValueError(f"state is not normalized (norm^2 = {state.norm2:.12g})")
    _check_tail(state, strict)
    return complex(np.vdot(_lower(state.amps, p), _lower(state.amps, q)))


@dataclass(frozen=True)
class MomentSet:
    """Normally ordered moments consumed by every nonclassicality metric."""

    mean_a: complex
    mean_a2: complex
    mean_a4: complex
    mean_n: float
    mean_adag2a2: float

    def __post_init__(self):
        if self.mean_n < -1e-12 or self.mean_adag2a2 < -1e-12:
            raise ValueError("number moments must be nonnegative")
        if abs(self.mean_a) ** 2 > self.mean_n + 1e-9 * max(1.0, self.mean_n):
            raise ValueError("moments violate Cauchy-Schwarz |<a>|^2 <= <n>")


def moment_set(state: FockVector, strict: bool = True) -> MomentSet:
    e = lambda p, q: expectation_normal_ordered(state, p, q, strict=strict)  # noqa: E731
    return MomentSet(
        mean_a=e(0, 1),
        mean_a2=e(0, 2),
        mean_a4=e(0, 4),
        mean_n=max(e(1, 1).real, 0.0),
        mean_adag2a2=max(e(2, 2).real, 0.0),
    )


# --- displacement -----------------------------------------------------------


def laguerre_table(x: np.ndarray, rows: int, diags: int) -> np.ndarray:
    """Normalized associated-Laguerre values f[..., j, k] for j < rows, k < diags.

    f[j, k] = sqrt(j!/(j+k)!) e^{-x/2} x^{k/2} L_j^{(k)}(x), which is |<j+k|D(z)|j>|
    up to phase for x = |z|^2.  Built by the three-term recurrence in j applied
    directly to the normalized values, so nothing overflows; the seed row uses
    log-gamma.
    """
    x = np.asarray(x, dtype=float)[..., None]
    k = np.arange(diags)
    f = np.empty(x.shape[:-1] + (rows, diags))
    lx = np.log(np.where(x > 0, x, 1.0))
    seed = np.exp(-0.5 * x + 0.5 * k * lx - 0.5 * gammaln(k + 1))
    f[..., 0, :] = np.where(x > 0, seed, (k == 0).astype(float))
    if rows > 1:
        f[..., 1, :] = f[..., 0, :] * (1 + k - x) / np.sqrt(k + 1)
    for n in range(1, rows - 1):
        f[..., n + 1, :] = ((2 * n + 1 + k - x) * f[..., n, :] - np.sqrt(n * (n + k)) * f[..., n - 1, :]) / np.sqrt(
            (n + 1) * (n + k + 1)
        )
    return f


def _displacement_block(z: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """<m|D(z)|n> for m < rows, n < cols, stacked over the points in ``z``."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    m = np.arange(rows)[:, None]
    n = np.arange(cols)[None, :]
    k = np.abs(m - n)
    j = np.minimum(m, n)
    f = laguerre_table(np.abs(z) ** 2, min(rows, cols), max(rows, cols))
    # below the diagonal the phase is u^k, above it (-conj u)^k, with u = z/|z|
    kmax = max(rows, cols)
    u = np.exp(1j * np.angle(z))[:, None] ** np.arange(kmax)[None, :]
    sign = np.where(np.arange(kmax) % 2 == 0, 1.0, -1.0)
    lower = u[:, k]
    upper = (sign[None, :] * u.conj())[:, k]
    return f[:, j, k] * np.where(m >= n, lower, upper)


def displacement_matrix(z, cutoff: int, strict: bool = True) -> np.ndarray:
    """(N_cut+1)^2 block of <m|D(z)|n>.

    Raises CutoffInsufficient (or warns when ``strict`` is False) if
    |z|^2 > cutoff / 4, where the block is too small to be useful.
    """
    z = as_point(z)
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    if abs(z) ** 2 > cutoff / 4:
        _report(f"|z|^2 = {abs(z) ** 2:.3g} exceeds cutoff/4 = {cutoff / 4:.3g}", strict)
    return _displacement_block(np.array([z]), cutoff + 1, cutoff + 1)[0]


def displaced_amplitudes(state: FockVector, zs, out_cutoff: int) -> np.ndarray:
    """Rows of D(z)|state> on |0> .. |out_cutoff>, one row per entry of ``zs``."""
    block = _displacement_block(zs, out_cutoff + 1, state.cutoff + 1)
    return block @ state.amps


def _work_cutoff(state: FockVector, zmax: float) -> int:
    nbar = float(np.sum(np.arange(state.cutoff + 1) * state.probabilities))
    m = choose_cutoff(math.sqrt(nbar) + zmax, 1e-14)
    return max(state.cutoff, m, int(math.ceil(4 * zmax * zmax)))


def wigner_parity(state: FockVector, zs, strict: bool = True, chunk: int = 128) -> np.ndarray:
    """Vectorized displaced-parity Wigner function (2/pi) sum_n (-1)^n |<n|D(-z)|psi>|^2."""
    if not state.is_normalized:
        raise ValueError("state is not normalized")
    _check_tail(state, strict)
    zs = np.asarray(zs, dtype=complex)
    flat = zs.reshape(-1)
    out = np.empty(flat.size)
    if flat.size == 0:
        return out.reshape(zs.shape)
    m = _work_cutoff(state, float(np.max(np.abs(flat))))
    parity = (-1.0) ** np.arange(m + 1)
    for lo in range(0, flat.size, chunk):
        block = displaced_amplitudes(state, -flat[lo : lo + chunk], m)
        edge = np.max(np.sum(np.abs(block[:, -3:]) ** 2, axis=1))
        if edge > TAIL_TOL:
            _report(f"displaced state leaks {edge:.3e} past working cutoff {m}", strict)
        out[lo : lo + chunk] = (2 / np.pi) * (np.abs(block) ** 2 @ parity)
    return out.reshape(zs.shape)


def wigner_point_oracle(state: FockVector, z, strict: bool = True) -> float:
    """Single-point displaced-parity Wigner value, in [-2/pi, 2/pi]."""
    return float(wigner_parity(state, np.array([as_point(z)]), strict=strict)[0])


# --- characteristic function ------------------------------------------------


def _exp_lower(amps: np.ndarray, cs: np.ndarray):
    """e^{c a}|psi> for every c in ``cs``; returns (vectors, last-term magnitudes)."""
    size = amps.size
    m = np.arange(size)
    # coef[m, k] = sqrt((m+k)!/m!) / k! * psi[m+k], zero where m+k > N
    k = np.arange(size)
    mk = m[:, None] + k[None, :]
    valid = mk < size
    logc = 0.5 * (gammaln(mk + 1) - gammaln(m + 1)[:, None]) - gammaln(k + 1)[None, :]
    coef = np.where(valid, np.exp(np.where(valid, logc, 0.0)) * amps[np.minimum(mk, size - 1)], 0.0)
    powers = cs[None, :] ** k[:, None]  # (K, G)
    vec = coef @ powers  # (M, G)
    # the k = N - m term is the last one the truncated series can supply
    last = np.abs(coef[m, size - 1 - m][:, None] * powers[size - 1 - m, :])
    return vec, last


def characteristic_function_N(state: FockVector, lam) -> np.ndarray | complex:
    """Normally ordered characteristic function Tr[rho e^{lam a^dag} e^{-conj(lam) a}].

    Evaluated as <e^{conj(lam) a} psi | e^{-conj(lam) a} psi>.  Raises
    SeriesNotConverged when the last term the cutoff can supply exceeds
    1e-12 relative to the norm of the partial sums.
    """
    if not state.is_normalized:
        raise ValueError("state is not normalized")
    scalar = np.ndim(lam) == 0
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    flat = lam.reshape(-1)
    u, last_u = _exp_lower(state.amps, np.conj(flat))
    v, last_v = _exp_lower(state.amps, -np.conj(flat))
    nu = np.maximum(1.0, np.linalg.norm(u, axis=0))
    nv = np.maximum(1.0, np.linalg.norm(v, axis=0))
    worst = float(np.max(np.maximum(np.linalg.norm(last_u, axis=0) / nu, np.linalg.norm(last_v, axis=0) / nv)))
    if worst > SERIES_TOL:
        raise SeriesNotConverged(
            f"exponential series tail {worst:.3e} exceeds {SERIES_TOL:g} at cutoff {state.cutoff}"
        )
    out = np.sum(np.conj(u) * v, axis=0).reshape(lam.shape)
    return complex(out.reshape(-1)[0]) if scalar else out


def wigner_fourier(state: FockVector, zs, radius: float = 8.0, step: float = 0.2) -> np.ndarray:
    """Wigner function by direct quadrature of the Fourier integral of C_N.

    W(z) = pi^-2 * integral exp(conj(lam) z - lam conj(z)) C_N(lam) e^{-|lam|^2/2} d^2 lam,
    truncated to the disc |lam| <= radius and summed on a square lattice.
    The Gaussian-damped integrand is smooth and decays like e^{-|lam|^2/2},
    so the lattice sum converges spectrally.
    """
    g = np.arange(-radius, radius + step / 2, step)
    lu, lv = np.meshgrid(g, g, indexing="ij")
    lam = (lu + 1j * lv).reshape(-1)
    lam = lam[np.abs(lam) <= radius]
    weight = characteristic_function_N(state, lam) * np.exp(-0.5 * np.abs(lam) ** 2)
    zs = np.asarray(zs, dtype=complex)
    phase = np.exp(np.conj(lam)[None, :] * zs.reshape(-1)[:, None] - lam[None, :] * np.conj(zs.reshape(-1))[:, None])
    w = (phase @ weight) * step * step / np.pi**2
    return w.real.reshape(zs.shape)
