"""Closed-form physics of flux-tunable transmons and flux-line mixing.

Everything here is a pure function of immutable inputs: Josephson energies
from junction geometry, the voltage <-> f01 maps of a split-junction
transmon, and the linear voltage mixing described by a crosstalk matrix
(rows = detector elements, columns = source Z-lines).

Units: frequencies in MHz, voltages in V, the flux-to-voltage conversion
factor A_c in rad/V. The normalized flux carried around as "phi" means
pi*Phi/Phi0, so one frustration period is phi = pi and equivalently
v = pi/A_c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .constants import E_CHARGE, K_BOLTZMANN, PHI0, PLANCK_H, UEV_TO_JOULE
from .errors import (
    DegenerateAsymmetryError,
    DimensionError,
    DomainError,
    RangeError,
)


@dataclass(frozen=True)
class JunctionDesign:
    """Lithographic design of one SQUID: two junction areas plus process data.

    area_j1, area_j2: junction areas in um^2 (canonically ordered so j2 is
    the larger one). r_j: junction resistance per unit area in Ohm um^2.
    gap_uev: superconducting gap of the film in ueV. temperature_k: K.
    """

    area_j1: float
    area_j2: float
    r_j: float
    gap_uev: float
    temperature_k: float = 0.0

    def __post_init__(self):
        if self.area_j1 <= 0 or self.area_j2 <= 0:
            raise DomainError("junction areas must be strictly positive")
        if self.r_j <= 0:
            raise DomainError("junction resistance per area must be positive")
        if self.gap_uev <= 0:
            raise DomainError("superconducting gap must be positive")
        if self.temperature_k < 0:
            raise DomainError("temperature must be >= 0")
        if self.area_j2 < self.area_j1:
            # canonical ordering: j2 is the larger junction
            a1, a2 = self.area_j2, self.area_j1
            object.__setattr__(self, "area_j1", a1)
            object.__setattr__(self, "area_j2", a2)

    @property
    def area_ratio(self) -> float:
        """gamma = larger/smaller junction area, >= 1 by construction."""
        return self.area_j2 / self.area_j1


def josephson_energy(j: JunctionDesign, which: str = "j1") -> float:
    """E_J/h in GHz of one junction from its normal-state resistance.

    E_J = Phi0 * Delta / (4 e R_N) * tanh(Delta / (2 kB T)) with
    R_N = R_J / A, so E_J is proportional to the junction area. At T = 0
    the tanh factor is exactly 1.
    """
    if which == "j1":
        area = j.area_j1
    elif which == "j2":
        area = j.area_j2
    else:
        raise DomainError(f"which must be 'j1' or 'j2', got {which!r}")
    delta = j.gap_uev * UEV_TO_JOULE
    r_n = j.r_j / area
    if j.temperature_k == 0.0:
        thermal = 1.0
    else:
        thermal = math.tanh(delta / (2.0 * K_BOLTZMANN * j.temperature_k))
    ej_joule = PHI0 * delta / (4.0 * E_CHARGE * r_n) * thermal
    return ej_joule / PLANCK_H / 1e9


def junction_asymmetry(j: JunctionDesign) -> float:
    """d = (gamma - 1)/(gamma + 1) in [0, 1), gamma the junction area ratio."""
    gamma = j.area_ratio
    return (gamma - 1.0) / (gamma + 1.0)


def ej_of_flux(ej_max: float, d: float, phi) -> float | np.ndarray:
    """SQUID Josephson energy vs normalized flux phi = pi*Phi/Phi0.

    Uses the stable form E_Jmax * sqrt(cos^2 phi + d^2 sin^2 phi), which is
    algebraically identical to |cos phi| sqrt(1 + d^2 tan^2 phi) but finite
    at half-flux.
    """
    if ej_max <= 0:
        raise DomainError("ej_max must be positive")
    c = np.cos(phi)
    s = np.sin(phi)
    return ej_max * np.sqrt(c * c + d * d * s * s)


@dataclass(frozen=True)
class TransmonParams:
    """Spectrum model of one flux-tunable element.

    f01(V) = (f01_max + E_C/h) * [d^2 + (1-d^2) cos^2(A_c (V - V_ofs))]^(1/4)
             - E_C/h

    f01_max sits at V = V_ofs (upper sweet spot) and the pattern repeats
    with period pi/A_c in V.
    """

    label: str
    role: str  # "qubit" or "coupler"
    f01_max: float  # MHz
    ec_over_h: float  # MHz
    d: float
    a_c: float  # rad/V
    v_ofs: float  # V

    def __post_init__(self):
        if self.role not in ("qubit", "coupler"):
            raise DomainError(f"role must be 'qubit' or 'coupler', got {self.role!r}")
        if self.f01_max <= 0:
            raise DomainError("f01_max must be positive")
        if self.ec_over_h <= 0:
            raise DomainError("E_C/h must be positive")
        if self.f01_max + self.ec_over_h <= 0:
            raise DomainError("f01_max + E_C/h must be positive")
        if not 0.0 <= self.d < 1.0:
            raise DomainError(f"junction asymmetry d must lie in [0, 1), got {self.d}")
        if self.a_c <= 0:
            raise DomainError("A_c must be positive (sign is absorbed into V_ofs)")

    @property
    def f01_min(self) -> float:
        """f01 at full frustration, the bottom of the attainable band."""
        return (self.f01_max + self.ec_over_h) * math.sqrt(self.d) - self.ec_over_h

    @property
    def period_v(self) -> float:
        """Voltage period of the spectrum, pi/A_c."""
        return math.pi / self.a_c


def normalized_flux(p: TransmonParams, v) -> float | np.ndarray:
    """phi = pi*Phi/Phi0 = A_c (v - V_ofs)."""
    phi = p.a_c * (np.asarray(v, dtype=float) - p.v_ofs)
    return float(phi) if phi.ndim == 0 else phi


def f01_of_voltage(p: TransmonParams, v_eff) -> float | np.ndarray:
    """Transition frequency (MHz) at effective bias v_eff (V). Pure."""
    theta = p.a_c * (np.asarray(v_eff, dtype=float) - p.v_ofs)
    c = np.cos(theta)
    bracket = p.d * p.d + (1.0 - p.d * p.d) * c * c
    f = (p.f01_max + p.ec_over_h) * bracket ** 0.25 - p.ec_over_h
    return float(f) if np.ndim(v_eff) == 0 else f


def f01_slope(p: TransmonParams, v_eff) -> float | np.ndarray:
    """Analytic d f01 / d v_eff in MHz/V (zero at the sweet spots)."""
    theta = p.a_c * (np.asarray(v_eff, dtype=float) - p.v_ofs)
    c = np.cos(theta)
    bracket = p.d * p.d + (1.0 - p.d * p.d) * c * c
    dbracket = -(1.0 - p.d * p.d) * np.sin(2.0 * theta) * p.a_c
    out = 0.25 * (p.f01_max + p.ec_over_h) * bracket ** (-0.75) * dbracket
    return float(out) if np.ndim(v_eff) == 0 else out


def idle_voltage(p: TransmonParams, f01_target: float, branch: str = "plus") -> float:
    """Bias voltage at which the element idles at f01_target (MHz).

    Inverts the spectrum on one half-period:
        v = V_ofs +/- arccos(2 K^4/(1-d^2) - (1+d^2)/(1-d^2)) / (2 A_c),
    K = (f01_target + E_C/h)/(f01_max + E_C/h). The "plus" branch returns
    the bias above V_ofs. Roundtrip through f01_of_voltage is exact to
    floating-point precision.
    """
    if branch not in ("plus", "minus"):
        raise DomainError(f"branch must be 'plus' or 'minus', got {branch!r}")
    if p.d >= 1.0:
        raise DegenerateAsymmetryError("d = 1 spectrum is flat and cannot be inverted")
    lo, hi = p.f01_min, p.f01_max
    k = (f01_target + p.ec_over_h) / (p.f01_max + p.ec_over_h)
    one_minus_d2 = 1.0 - p.d * p.d
    arg = 2.0 * k ** 4 / one_minus_d2 - (1.0 + p.d * p.d) / one_minus_d2
    if abs(arg) > 1.0:
        if abs(arg) <= 1.0 + 1e-12:
            arg = math.copysign(1.0, arg)  # round-off at the band edge
        else:
            raise RangeError(
                f"target {f01_target:.6g} MHz outside the attainable band "
                f"[{lo:.6g}, {hi:.6g}] MHz of {p.label}")
    half = math.acos(arg) / (2.0 * p.a_c)
    return p.v_ofs + half if branch == "plus" else p.v_ofs - half


@dataclass(frozen=True)
class CrosstalkMatrix:
    """Dimensionless flux-crosstalk matrix X with unit diagonal.

    Convention: V_eff = X @ V_z. Row index = detector element, column
    index = source Z-line; X[i, k] is the fraction of line k's voltage seen
    by element i. Construction checks the unit diagonal and that |det X|
    exceeds det_floor so the cancellation matrix X^-1 exists.
    """

    labels: tuple[str, ...]
    entries: np.ndarray
    det_floor: float = 1e-9
    _inv: np.ndarray = field(init=False, repr=False, compare=False)
    cond: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        entries = np.array(self.entries, dtype=float)
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "labels", tuple(self.labels))
        n = len(self.labels)
        if entries.shape != (n, n):
            raise DimensionError(
                f"{n} labels but entries shaped {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise DomainError("crosstalk entries must be finite")
        if not np.all(np.diag(entries) == 1.0):
            raise DomainError("all diagonal entries must be exactly 1")
        inv, _det, cond = linalg.invert(entries, det_floor=self.det_floor)
        inv.setflags(write=False)
        object.__setattr__(self, "_inv", inv)
        object.__setattr__(self, "cond", cond)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise DomainError(f"unknown flux line {label!r}") from None

    def inverse(self) -> np.ndarray:
        """The cancellation matrix X^-1 (read-only view)."""
        return self._inv

    @classmethod
    def identity(cls, labels) -> "CrosstalkMatrix":
        labels = tuple(labels)
        return cls(labels, np.eye(len(labels)))


def effective_voltage(x: CrosstalkMatrix, v_z) -> np.ndarray:
    """V_eff = X @ V_z, the flux-equivalent voltage seen by each element."""
    v_z = np.asarray(v_z, dtype=float)
    if v_z.shape != (x.n,):
        raise DimensionError(f"expected {x.n} line voltages, got shape {v_z.shape}")
    return x.entries @ v_z


def compensate(x: CrosstalkMatrix, v_target) -> np.ndarray:
    """Z-line voltages that realize v_target after crosstalk mixing.

    Solves X v_z = v_target with the pivoted factorization rather than the
    stored inverse, so effective_voltage(x, compensate(x, t)) == t to
    machine precision.
    """
    v_target = np.asarray(v_target, dtype=float)
    if v_target.shape != (x.n,):
        raise DimensionError(f"expected {x.n} targets, got shape {v_target.shape}")
    return linalg.solve(x.entries, v_target, det_floor=x.det_floor)
