"""CZ digital twin: coupler-mediated |11> <-> |02> coupling and its inversion.

All couplings, detunings and frequencies in this module are cyclic
quantities in MHz (the /2pi convention); the 2pi shows up only inside
phase accumulation, i.e. whenever a frequency multiplies a time in ns.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.optimize import brentq, curve_fit, least_squares

from .device import TransmonParams, idle_voltage
from .errors import (
    DomainError,
    FitError,
    FlatTraceError,
    IdentifiabilityError,
    PoleError,
    RangeError,
)
from .fourier import refine_peak_1d
from .scans import ScanMap

TWO_PI_NS = 2.0 * math.pi * 1e-3  # rad per (MHz * ns)


@dataclass(frozen=True)
class PulseParams:
    """Rectangular flux pulse with an exponential settling transient."""

    t_ns: float = 100.0
    t_eff_ns: float = 278.0
    a_eff_over_a: float = -1.0

    def __post_init__(self):
        if self.t_ns <= 0 or self.t_eff_ns <= 0:
            raise DomainError("pulse duration and settling time must be positive")


@dataclass(frozen=True)
class CZParams:
    """Coupling constants and pulse parameters of the CZ model.

    g12: direct qubit-qubit coupling; g1c, g2c: qubit-coupler couplings;
    ec2_over_h: charging energy of the second qubit; delta21: |11>-|02>
    detuning; residual_offset: additive floor on |g_eff| from couplings the
    two-level model leaves out.
    """

    g12: float
    g1c: float
    g2c: float
    ec2_over_h: float
    delta21: float
    residual_offset: float = 0.0
    pulse: PulseParams = field(default_factory=PulseParams)

    def __post_init__(self):
        if self.g1c <= 0 or self.g2c <= 0:
            raise DomainError("g1c and g2c must be positive")
        if self.ec2_over_h <= 0:
            raise DomainError("ec2_over_h must be positive")
        if self.residual_offset < 0:
            raise DomainError("residual_offset must be >= 0")

    @property
    def d_factor(self) -> float:
        return pulse_reduction(self.pulse.t_ns, self.pulse.t_eff_ns,
                               self.pulse.a_eff_over_a)


_POLE_TOL = 1e-6  # MHz


def b02(f_c: float, f_q1: float, f_q2: float, ec2_over_h: float) -> float:
    """Detuning factor of the |11>-|02> virtual exchange, in 1/MHz.

    B02 = 1/D1 + 1/(D2 - E_C2) + 1/S1 + 1/(S2 + E_C2) with D_j = f_c - f_qj
    and S_j = f_c + f_qj. Written with cyclic frequencies throughout; the
    2pi factors cancel against the ones in g_eff, so no conversion is
    needed here.
    """
    terms = {
        "Delta_1": f_c - f_q1,
        "Delta_2 - E_C2": f_c - f_q2 - ec2_over_h,
        "Sigma_1": f_c + f_q1,
        "Sigma_2 + E_C2": f_c + f_q2 + ec2_over_h,
    }
    for name, denom in terms.items():
        if abs(denom) < _POLE_TOL:
            raise PoleError(f"{name} = {denom:.3g} MHz is within {_POLE_TOL:g} MHz of zero")
    return sum(1.0 / d for d in terms.values())


def g_eff(p: CZParams, f_c: float, f_q1: float, f_q2: float) -> float:
    """Effective |11> <-> |02> coupling, g_eff = sqrt(2) (g12 - g1c g2c B02 / 2)."""
    return math.sqrt(2.0) * (p.g12 - 0.5 * p.g1c * p.g2c * b02(f_c, f_q1, f_q2,
                                                               p.ec2_over_h))


class ApproxRegimeWarning(UserWarning):
    """The pole-only approximation is outside its validity range (f_c below f)."""


def g_eff_approx(p: CZParams, f_c: float, f: float) -> float:
    """Single-pole approximation g_eff = sqrt(2) (g12 - 2 g1c g2c / (f_c - f)).

    Valid for a coupler above the qubits (f_c >~ f); a warning is emitted
    outside that regime. Its root sits at f_c - f = 2 g1c g2c / g12.
    """
    if abs(f_c - f) < _POLE_TOL:
        raise PoleError(f"f_c - f = {f_c - f:.3g} MHz is within {_POLE_TOL:g} MHz of zero")
    if f_c < f:
        warnings.warn("coupler below the qubit frequency: approximation out of "
                      "its validity range", ApproxRegimeWarning, stacklevel=2)
    return math.sqrt(2.0) * (p.g12 - 2.0 * p.g1c * p.g2c / (f_c - f))


def pulse_reduction(t_ns: float, t_eff_ns: float, a_eff_over_a: float) -> float:
    """Phase-reduction factor D of an imperfect diabatic pulse.

    Time-average of the settling pulse over its duration:
    D = [T + (A_eff/A) t_eff (1 - exp(-T/t_eff))] / T.
    """
    if t_ns <= 0 or t_eff_ns <= 0:
        raise DomainError("t_ns and t_eff_ns must be positive")
    return (t_ns + a_eff_over_a * t_eff_ns * (1.0 - math.exp(-t_ns / t_eff_ns))) / t_ns


def rabi_frequency(g: float, delta21: float) -> float:
    """Omega = sqrt(4 g^2 + delta21^2) in MHz."""
    return math.hypot(2.0 * g, delta21)


def p11(delta21: float, g: float, t, d_factor: float = 1.0):
    """|11> population model: P = 2 g^2 [1 + cos(D t Omega)] / Omega^2.

    t in ns (scalar or array). This is the fit model used throughout; it
    coincides with the physical two-level population only on resonance
    (delta21 = 0), where it oscillates between 0 and 1.
    """
    omega = rabi_frequency(g, delta21)
    if omega == 0.0:
        raise DomainError("Omega = 0 (g and delta21 both zero): oscillation undefined")
    t = np.asarray(t, dtype=float)
    phase = d_factor * t * omega * TWO_PI_NS
    out = 2.0 * g * g * (1.0 + np.cos(phase)) / (omega * omega)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class OmegaFit:
    omega: float  # MHz
    sigma: float  # MHz
    offset: float
    amplitude: float


def fit_omega(trace, t_grid, d_factor: float = 1.0) -> OmegaFit:
    """Fit a + b cos(D Omega t) to a time trace; Omega seeded from the FFT.

    Needs >= 8 points on a uniform grid spanning at least half an
    oscillation period. A trace with no oscillation raises FlatTraceError.
    """
    trace = np.asarray(trace, dtype=float)
    t = np.asarray(t_grid, dtype=float)
    if trace.shape != t.shape or trace.ndim != 1:
        raise DomainError("trace and t_grid must be matching 1D arrays")
    if trace.size < 8:
        raise DomainError("need at least 8 samples to fit an oscillation")
    if np.ptp(trace) == 0.0:
        raise FlatTraceError("trace is constant: FFT peak at DC, no oscillation")

    detrended = trace - trace.mean()
    mag = np.abs(np.fft.rfft(detrended))
    k = 1 + int(np.argmax(mag[1:]))
    if mag[k] == 0.0:
        raise FlatTraceError("no off-DC spectral content")
    dt = t[1] - t[0]
    k_ref = refine_peak_1d(mag, k)
    omega0 = k_ref / (trace.size * dt) * 1e3 / d_factor  # MHz

    def model(tt, omega, a, b):
        return a + b * np.cos(d_factor * omega * tt * TWO_PI_NS)

    p0 = [omega0, float(trace.mean()), 0.5 * float(np.ptp(trace))]
    try:
        popt, pcov = curve_fit(model, t, trace, p0=p0, maxfev=20000)
    except RuntimeError as exc:
        raise FitError(f"oscillation fit did not converge: {exc}") from exc
    omega = abs(float(popt[0]))
    sigma = float(np.sqrt(abs(pcov[0, 0]))) if np.all(np.isfinite(pcov)) else float("inf")
    return OmegaFit(omega=omega, sigma=sigma, offset=float(popt[1]),
                    amplitude=float(popt[2]))


@dataclass(frozen=True)
class GeffSeries:
    """|g_eff| vs coupler flux extracted column-by-column from a chevron map."""

    flux: np.ndarray  # normalized flux, rad
    g_eff: np.ndarray  # MHz
    sigma: np.ndarray  # MHz
    below_floor: np.ndarray  # bool: fitted Omega did not exceed delta21

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["normalized_flux", "g_eff_MHz", "sigma_MHz",
                             "below_floor_flag"])
            for row in zip(self.flux.tolist(), self.g_eff.tolist(),
                           self.sigma.tolist(), self.below_floor.tolist()):
                writer.writerow([repr(row[0]), repr(row[1]), repr(row[2]),
                                 int(row[3])])
        return path


def extract_geff_curve(scan: ScanMap, delta21: float, d_factor: float) -> GeffSeries:
    """Per-flux-column Omega fits turned into |g_eff| = sqrt(Omega^2 - d21^2)/2.

    Columns whose fitted Omega does not exceed |delta21| are flagged
    below_floor (their g is clamped to 0) rather than dropped.
    """
    if len(scan.x_axis) < 3:
        raise DomainError("need at least 3 flux columns")
    t = scan.y_axis.values
    n = len(scan.x_axis)
    g = np.zeros(n)
    sig = np.zeros(n)
    flagged = np.zeros(n, dtype=bool)
    for i in range(n):
        try:
            fit = fit_omega(scan.signal[:, i], t, d_factor)
        except FlatTraceError:
            flagged[i] = True
            sig[i] = float("inf")
            continue
        gap = fit.omega ** 2 - delta21 ** 2
        if gap <= 0.0:
            flagged[i] = True
            sig[i] = 0.5 * fit.sigma
            continue
        g[i] = 0.5 * math.sqrt(gap)
        sig[i] = fit.omega * fit.sigma / (4.0 * g[i])
    return GeffSeries(flux=scan.x_axis.values.copy(), g_eff=g, sigma=sig,
                      below_floor=flagged)


def f01_of_flux(p: TransmonParams, phi) -> float | np.ndarray:
    """Coupler spectrum directly vs normalized flux phi = A_c (v - V_ofs)."""
    c = np.cos(np.asarray(phi, dtype=float))
    bracket = p.d * p.d + (1.0 - p.d * p.d) * c * c
    f = (p.f01_max + p.ec_over_h) * bracket ** 0.25 - p.ec_over_h
    return float(f) if np.ndim(phi) == 0 else f


@dataclass(frozen=True)
class GeffFit:
    g12: float  # MHz
    g1c_g2c: float  # MHz^2
    offset: float  # MHz
    covariance: np.ndarray  # 3x3 over (g12, g1c_g2c, offset)
    nulling_flux: float  # rad, positive branch
    residual_rms: float  # MHz

    def to_json_dict(self) -> dict:
        return {
            "g12_MHz": self.g12,
            "g1c_g2c_MHz2": self.g1c_g2c,
            "offset_MHz": self.offset,
            "covariance": self.covariance.tolist(),
            "nulling_flux": self.nulling_flux,
            "residual_rms_MHz": self.residual_rms,
        }


def _nulling_flux(g12: float, g1c_g2c: float, ec2: float, coupler: TransmonParams,
                  f_q1: float, f_q2: float) -> float:
    """Positive-branch flux where the full-model g_eff crosses zero."""

    def h(f_c):
        return g12 - 0.5 * g1c_g2c * b02(f_c, f_q1, f_q2, ec2)

    lo = max(f_q1, f_q2 + ec2) + 1.0
    hi = coupler.f01_max
    if h(lo) * h(hi) > 0:
        raise RangeError("g_eff does not cross zero inside the coupler band")
    f_null = brentq(h, lo, hi, xtol=1e-10)
    k = (f_null + coupler.ec_over_h) / (coupler.f01_max + coupler.ec_over_h)
    one_minus_d2 = 1.0 - coupler.d ** 2
    arg = 2.0 * k ** 4 / one_minus_d2 - (1.0 + coupler.d ** 2) / one_minus_d2
    return 0.5 * math.acos(min(1.0, max(-1.0, arg)))


def fit_geff_curve(series: GeffSeries, coupler: TransmonParams, f_q1: float,
                   f_q2: float, ec2_over_h: float) -> GeffFit:
    """Weighted fit of |g_eff(flux)| + offset over (g12, g1c*g2c, offset).

    g1c and g2c enter Eq-level model only through their product, so only
    the product is fitted (a fixed-ratio split is the caller's choice).
    Requires at least 6 usable points on each side of the measured minimum.
    """
    keep = ~series.below_floor & np.isfinite(series.sigma)
    flux = series.flux[keep]
    g_meas = series.g_eff[keep]
    sig = np.where(series.sigma[keep] > 0, series.sigma[keep], np.inf)
    if flux.size < 13:
        raise IdentifiabilityError("need at least 13 usable points for the curve fit")
    i_min = int(np.argmin(g_meas))
    if i_min < 6 or i_min > flux.size - 7:
        raise IdentifiabilityError(
            "data cover only one side of the nulling flux; the coupling "
            "product and offset are not separately identifiable")
    # sane uniform weights if sigmas are degenerate
    if not np.any(np.isfinite(sig)) or np.all(sig == 0):
        sig = np.ones_like(g_meas)
    sig = np.where(np.isfinite(sig), sig, np.max(sig[np.isfinite(sig)]) * 10)

    def model(params, phi):
        g12, gprod, offset = params
        f_c = f01_of_flux(coupler, phi)
        bb = np.array([b02(fc, f_q1, f_q2, ec2_over_h) for fc in np.atleast_1d(f_c)])
        return np.abs(math.sqrt(2.0) * (g12 - 0.5 * gprod * bb)) + offset

    # initialize from the measured minimum (nulling) and the steepest point
    offset0 = float(np.min(g_meas))
    f_null0 = float(f01_of_flux(coupler, flux[i_min]))
    b_null = b02(f_null0, f_q1, f_q2, ec2_over_h)
    i_far = int(np.argmax(g_meas))
    f_far = float(f01_of_flux(coupler, flux[i_far]))
    b_far = b02(f_far, f_q1, f_q2, ec2_over_h)
    gm = (g_meas[i_far] - offset0) / math.sqrt(2.0)
    gprod0 = abs(2.0 * gm / (b_null - b_far)) if b_null != b_far else 1e3
    g12_0 = 0.5 * gprod0 * b_null

    def resid(params):
        return (model(params, flux) - g_meas) / sig

    res = least_squares(resid, x0=[g12_0, gprod0, max(offset0, 1e-6)],
                        bounds=([-np.inf, 1e-9, 0.0], [np.inf, np.inf, np.inf]),
                        xtol=1e-14, ftol=1e-14, gtol=1e-14)
    if not res.success:
        raise FitError(f"g_eff curve fit failed: {res.message}")
    jtj = res.jac.T @ res.jac
    try:
        cov = np.linalg.inv(jtj)
    except np.linalg.LinAlgError:
        cov = np.full((3, 3), np.nan)
    g12, gprod, offset = (float(v) for v in res.x)
    rms = float(np.sqrt(np.mean((model(res.x, flux) - g_meas) ** 2)))
    phi_null = _nulling_flux(g12, gprod, ec2_over_h, coupler, f_q1, f_q2)
    return GeffFit(g12=g12, g1c_g2c=gprod, offset=offset, covariance=cov,
                   nulling_flux=phi_null, residual_rms=rms)


def coupler_idle_voltage(p: CZParams, coupler: TransmonParams, g_target: float,
                         f: float, branch: str = "plus",
                         mode: str = "approx") -> float:
    """Coupler bias (V) that realizes g_target (MHz) for qubits near f (MHz).

    approx mode inverts the single-pole form in closed form:
        f_c = f + 2 g1c g2c / (g12 - g_target/sqrt(2)),
    then maps f_c to a bias with the spectrum inversion, so the forward
    g_eff_approx at the returned bias reproduces g_target. full mode solves
    the complete detuning-factor equation for f_c by root bracketing (with
    f_q1 = f and f_q2 = f + E_C2 + delta21) before inverting.
    """
    denom = p.g12 - g_target / math.sqrt(2.0)
    if abs(denom) < 1e-12:
        raise PoleError("g_target = sqrt(2) g12 is the pole of the inversion")
    if mode == "approx":
        f_c = f + 2.0 * p.g1c * p.g2c / denom
    elif mode == "full":
        f_q1 = f
        f_q2 = f + p.ec2_over_h + p.delta21

        def h(f_c_try):
            return g_eff(p, f_c_try, f_q1, f_q2) - g_target

        lo = max(f_q1, f_q2 + p.ec2_over_h) + 1.0
        hi = coupler.f01_max
        if h(lo) * h(hi) > 0:
            raise RangeError(
                f"g_target {g_target:.6g} MHz not reachable for f_c in "
                f"[{lo:.6g}, {hi:.6g}] MHz")
        f_c = brentq(h, lo, hi, xtol=1e-10, maxiter=200)
    else:
        raise DomainError(f"mode must be 'approx' or 'full', got {mode!r}")
    return idle_voltage(coupler, f_c, branch)


def symmetry_residual(scan: ScanMap) -> float:
    """Mean |map(phi) - map(-phi)| over a flux grid symmetric about zero."""
    x = scan.x_axis.values
    sums = x + x[::-1]
    if np.max(np.abs(sums - sums[0])) > 1e-9 * max(1.0, float(np.max(np.abs(x)))):
        raise DomainError("flux grid is not symmetric; mirror residual undefined")
    return float(np.mean(np.abs(scan.signal - scan.signal[:, ::-1])))
