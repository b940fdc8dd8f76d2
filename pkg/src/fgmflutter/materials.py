"""Through-thickness material model for ceramic/metal graded plate sections.

The plate is ceramic-rich at the top surface (z = +h/2) and grades to metal
at the bottom (z = -h/2) following a power law in the ceramic volume
fraction.  Effective elastic moduli come from the Mori-Tanaka scheme,
density from the rule of mixtures, and conductivity / thermal expansion
from the corresponding two-phase estimates.  All section-level quantities
(stretching/bending/shear stiffness, inertias, thermal resultants) are
through-thickness integrals evaluated with Gauss-Legendre quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TemperatureCoefficients",
    "Constituent",
    "ConstituentSet",
    "FGMSection",
    "SectionProperties",
    "MATERIALS",
    "load_constituent",
    "volume_fraction",
    "property_at_temperature",
    "mori_tanaka_effective",
    "effective_density",
    "effective_kappa_alpha",
    "temperature_profile",
    "section_properties",
]


@dataclass(frozen=True)
class TemperatureCoefficients:
    """Coefficients of the cubic-plus-inverse temperature fit of a property.

    The property at absolute temperature T (kelvin) is

        P(T) = p0 * (pm1/T + 1 + p1*T + p2*T^2 + p3*T^3)

    with p0 carrying the SI units of the property itself.
    """

    p0: float
    pm1: float = 0.0
    p1: float = 0.0
    p2: float = 0.0
    p3: float = 0.0


@dataclass(frozen=True)
class Constituent:
    """One phase: temperature fits for E and alpha plus constant rho, kappa, nu."""

    name: str
    young: TemperatureCoefficients        # Pa
    alpha: TemperatureCoefficients        # 1/K
    rho: float                            # kg/m^3
    kappa: float                          # W/(m K)
    nu: float                             # dimensionless

    def __post_init__(self):
        if self.rho <= 0:
            raise ValueError(f"{self.name}: density must be positive")
        if self.kappa <= 0:
            raise ValueError(f"{self.name}: conductivity must be positive")
        if not 0.0 < self.nu < 0.5:
            raise ValueError(f"{self.name}: Poisson ratio out of range")


@dataclass(frozen=True)
class ConstituentSet:
    ceramic: Constituent
    metal: Constituent


# Shear correction sqrt(5/6) per direction so the shear stiffness carries 5/6.
_SHEAR_CORRECTION = (np.sqrt(5.0 / 6.0), np.sqrt(5.0 / 6.0))


@dataclass(frozen=True)
class FGMSection:
    """A through-thickness configuration: constituents, grading and temperatures.

    Parameters
    ----------
    constituents : ConstituentSet
        Ceramic and metal phases.
    n : float
        Power-law gradient index (>= 0); n = 0 is a fully ceramic plate.
    h : float
        Plate thickness in metres.
    Tc, Tm : float
        Top (ceramic-side) and bottom (metal-side) surface temperatures, K.
    T0 : float
        Stress-free reference temperature, K.
    quadrature_points : int
        Gauss-Legendre point count for thickness integrals (>= 10).
    shear_correction : (float, float)
        Transverse shear coefficients; the default pair gives the factor 5/6.
    poisson_mode : str
        'constant' uses the ceramic-phase nu throughout; 'mori_tanaka' uses
        the homogenized value pointwise.
    """

    constituents: ConstituentSet
    n: float
    h: float
    Tc: float = 300.0
    Tm: float = 300.0
    T0: float = 300.0
    quadrature_points: int = 20
    shear_correction: tuple = _SHEAR_CORRECTION
    poisson_mode: str = "constant"

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("gradient index must be >= 0")
        if self.h <= 0:
            raise ValueError("thickness must be positive")
        if self.quadrature_points < 10:
            raise ValueError("need at least 10 quadrature points")
        if self.poisson_mode not in ("constant", "mori_tanaka"):
            raise ValueError(f"unknown poisson_mode {self.poisson_mode!r}")


@dataclass(frozen=True)
class SectionProperties:
    """Integrated section stiffness, inertia and thermal resultants.

    A, B, Db are the 3x3 extensional, coupling and bending matrices;
    Es is the 2x2 transverse shear matrix (shear-corrected); p and I the
    translational and rotary inertias per unit area; Nth and Mth the thermal
    force and moment resultants.
    """

    A: np.ndarray
    B: np.ndarray
    Db: np.ndarray
    Es: np.ndarray
    p: float
    I: float
    Nth: np.ndarray
    Mth: np.ndarray


# ---------------------------------------------------------------------------
# pointwise laws
# ---------------------------------------------------------------------------

def property_at_temperature(coeffs: TemperatureCoefficients, T: float) -> float:
    """Evaluate the temperature fit P(T); T must be positive (1/T term)."""
    if T <= 0:
        raise ValueError("temperature must be positive")
    return coeffs.p0 * (coeffs.pm1 / T + 1.0 + coeffs.p1 * T
                        + coeffs.p2 * T * T + coeffs.p3 * T ** 3)


def volume_fraction(z: float, section: FGMSection) -> float:
    """Ceramic volume fraction V_c(z) = ((2z + h)/(2h))^n on [-h/2, h/2]."""
    h = section.h
    if z < -h / 2 - 1e-12 * h or z > h / 2 + 1e-12 * h:
        raise ValueError("z outside the plate thickness")
    xi = min(max((2.0 * z + h) / (2.0 * h), 0.0), 1.0)
    if section.n == 0:
        return 1.0
    return xi ** section.n


def effective_density(rhoc: float, rhom: float, Vc: float) -> float:
    """Rule-of-mixtures density."""
    return rhoc * Vc + rhom * (1.0 - Vc)


def mori_tanaka_effective(Ec, Em, nuc, num, Vc):
    """Mori-Tanaka effective Young's modulus and Poisson ratio.

    Bulk and shear moduli of each phase are formed from (E, nu), combined
    through the two Mori-Tanaka fractions, and converted back.  Returns
    (E_eff, nu_eff).
    """
    Eeff, nueff, _ = _mori_tanaka_full(Ec, Em, nuc, num, Vc)
    return Eeff, nueff


def _mori_tanaka_full(Ec, Em, nuc, num, Vc):
    """As mori_tanaka_effective but also returns (K_eff, K_c, K_m)."""
    Vm = 1.0 - Vc
    Kc = Ec / (3.0 * (1.0 - 2.0 * nuc))
    Km = Em / (3.0 * (1.0 - 2.0 * num))
    if Vc == 1.0:
        return Ec, nuc, (Kc, Kc, Km)
    if Vc == 0.0:
        return Em, num, (Km, Kc, Km)
    Gc = Ec / (2.0 * (1.0 + nuc))
    Gm = Em / (2.0 * (1.0 + num))
    f1 = Gm * (9.0 * Km + 8.0 * Gm) / (6.0 * (Km + 2.0 * Gm))
    Keff = Km + (Kc - Km) * Vc / (1.0 + Vm * 3.0 * (Kc - Km) / (3.0 * Km + 4.0 * Gm))
    Geff = Gm + (Gc - Gm) * Vc / (1.0 + Vm * (Gc - Gm) / (Gm + f1))
    Eeff = 9.0 * Keff * Geff / (3.0 * Keff + Geff)
    nueff = (3.0 * Keff - 2.0 * Geff) / (2.0 * (3.0 * Keff + Geff))
    return Eeff, nueff, (Keff, Kc, Km)


def effective_kappa_alpha(section: FGMSection, z: float, T: float):
    """Effective conductivity and expansion coefficient at height z.

    kappa follows the two-phase fraction with denominator 3*kappa_m; alpha
    interpolates between the phases through the reciprocal bulk moduli.
    """
    cer, met = section.constituents.ceramic, section.constituents.metal
    Vc = volume_fraction(z, section)
    Vm = 1.0 - Vc
    kcm = cer.kappa - met.kappa
    kap = met.kappa + kcm * Vc / (1.0 + Vm * kcm / (3.0 * met.kappa))

    Ec = property_at_temperature(cer.young, T)
    Em = property_at_temperature(met.young, T)
    _, _, (Keff, Kc, Km) = _mori_tanaka_full(Ec, Em, cer.nu, met.nu, Vc)
    ac = property_at_temperature(cer.alpha, T)
    am = property_at_temperature(met.alpha, T)
    denom = 1.0 / Kc - 1.0 / Km
    if abs(denom) < 1e-30 * abs(1.0 / Km):
        frac = Vc  # identical bulk moduli: plain mixture
    else:
        frac = (1.0 / Keff - 1.0 / Km) / denom
    alp = am + (ac - am) * frac
    return kap, alp


# ---------------------------------------------------------------------------
# steady 1-D heat conduction through the thickness
# ---------------------------------------------------------------------------

def temperature_profile(section: FGMSection):
    """Polynomial-series solution of d/dz(kappa(z) dT/dz) = 0.

    Boundary temperatures are T = Tc at z = +h/2 and T = Tm at z = -h/2.
    Returns a vectorized callable z -> T(z).
    """
    cer, met = section.constituents.ceramic, section.constituents.metal
    n, h = section.n, section.h
    r = (cer.kappa - met.kappa) / met.kappa
    powers = np.array([1.0, n + 1.0, 2 * n + 1.0, 3 * n + 1.0, 4 * n + 1.0, 5 * n + 1.0])
    coeffs = np.array([
        1.0,
        -r / (n + 1.0),
        r ** 2 / (2 * n + 1.0),
        -r ** 3 / (3 * n + 1.0),
        r ** 4 / (4 * n + 1.0),
        -r ** 5 / (5 * n + 1.0),
    ])
    C = coeffs.sum()
    if C == 0.0:
        raise ArithmeticError("degenerate conductivity series (C = 0)")
    Tc, Tm = section.Tc, section.Tm

    def T_of_z(z):
        xi = (2.0 * np.asarray(z, dtype=float) + h) / (2.0 * h)
        eta = (np.power.outer(xi, powers) @ coeffs) / C
        out = Tm + (Tc - Tm) * eta
        return out if out.ndim else float(out)

    return T_of_z


# ---------------------------------------------------------------------------
# section integrals
# ---------------------------------------------------------------------------

def _pointwise_state(section: FGMSection, z: float, T: float):
    """(E, nu, alpha, rho) at one thickness station and temperature."""
    cer, met = section.constituents.ceramic, section.constituents.metal
    Vc = volume_fraction(z, section)
    Ec = property_at_temperature(cer.young, T)
    Em = property_at_temperature(met.young, T)
    Eeff, nueff, (Keff, Kc, Km) = _mori_tanaka_full(Ec, Em, cer.nu, met.nu, Vc)
    nu = cer.nu if section.poisson_mode == "constant" else nueff

    ac = property_at_temperature(cer.alpha, T)
    am = property_at_temperature(met.alpha, T)
    denom = 1.0 / Kc - 1.0 / Km
    if abs(denom) < 1e-30 * abs(1.0 / Km):
        frac = Vc
    else:
        frac = (1.0 / Keff - 1.0 / Km) / denom
    alp = am + (ac - am) * frac
    rho = effective_density(cer.rho, met.rho, Vc)
    return Eeff, nu, alp, rho


def _plane_stress_matrix(E: float, nu: float) -> np.ndarray:
    q = E / (1.0 - nu * nu)
    g = E / (2.0 * (1.0 + nu))
    return np.array([[q, nu * q, 0.0], [nu * q, q, 0.0], [0.0, 0.0, g]])


def section_properties(section: FGMSection) -> SectionProperties:
    """Integrate stiffness, inertia and thermal resultants through the thickness.

    Stiffness uses the temperature- and position-dependent modulus E(z, T(z));
    the transverse shear matrix carries the shear-correction product; the
    thermal resultants integrate Q(z) alpha(z, T) (T(z) - T0).
    """
    h = section.h
    zq, wq = np.polynomial.legendre.leggauss(section.quadrature_points)
    zq = 0.5 * h * zq
    wq = 0.5 * h * wq
    T_of_z = temperature_profile(section)
    u4, u5 = section.shear_correction
    shear_scale = np.diag([u4 * u4, u5 * u5])   # Q45 = 0, so Es is diagonal

    A = np.zeros((3, 3))
    B = np.zeros((3, 3))
    Db = np.zeros((3, 3))
    Es = np.zeros((2, 2))
    Nth = np.zeros(3)
    Mth = np.zeros(3)
    p = 0.0
    I = 0.0
    for z, w in zip(zq, wq):
        T = T_of_z(z)
        E, nu, alp, rho = _pointwise_state(section, z, T)
        Q = _plane_stress_matrix(E, nu)
        A += w * Q
        B += (w * z) * Q
        Db += (w * z * z) * Q
        Es += w * Q[2, 2] * shear_scale
        dT = T - section.T0
        th = Q @ np.array([alp, alp, 0.0]) * dT
        Nth += w * th
        Mth += (w * z) * th
        p += w * rho
        I += w * z * z * rho
    return SectionProperties(A=A, B=B, Db=Db, Es=Es, p=p, I=I, Nth=Nth, Mth=Mth)


# ---------------------------------------------------------------------------
# material database
# ---------------------------------------------------------------------------

SI3N4 = Constituent(
    name="Si3N4",
    young=TemperatureCoefficients(348.43e9, 0.0, -3.070e-4, 2.160e-7, -8.946e-11),
    alpha=TemperatureCoefficients(5.8723e-6, 0.0, 9.095e-4, 0.0, 0.0),
    rho=2370.0,
    kappa=9.19,
    nu=0.28,
)

SUS304 = Constituent(
    name="SUS304",
    young=TemperatureCoefficients(201.04e9, 0.0, 3.079e-4, -6.534e-7, 0.0),
    alpha=TemperatureCoefficients(12.330e-6, 0.0, 8.086e-4, 0.0, 0.0),
    rho=8166.0,
    kappa=12.04,
    nu=0.28,
)

MATERIALS = {"Si3N4": SI3N4, "SUS304": SUS304}


def isotropic_constituent(name, E, nu, rho, kappa=1.0, alpha=0.0):
    """Temperature-independent single-phase material (for isotropic runs)."""
    return Constituent(
        name=name,
        young=TemperatureCoefficients(E),
        alpha=TemperatureCoefficients(alpha) if alpha else TemperatureCoefficients(0.0),
        rho=rho,
        kappa=kappa,
        nu=nu,
    )


def load_constituent(path) -> Constituent:
    """Read one material from a key = value text file.

    Recognized keys: name, E (five coefficients, comma separated), alpha
    (five coefficients), rho, kappa, nu.  Lines starting with '#' are
    comments.
    """
    fields = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"malformed material line: {raw!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            fields[key] = val
    missing = {"name", "E", "alpha", "rho", "kappa", "nu"} - set(fields)
    if missing:
        raise ValueError(f"material file missing keys: {sorted(missing)}")

    def coeffs(text):
        vals = [float(v) for v in text.split(",")]
        if len(vals) > 5:
            raise ValueError("at most five coefficients (p0, pm1, p1, p2, p3)")
        vals += [0.0] * (5 - len(vals))
        return TemperatureCoefficients(*vals)

    return Constituent(
        name=fields["name"],
        young=coeffs(fields["E"]),
        alpha=coeffs(fields["alpha"]),
        rho=float(fields["rho"]),
        kappa=float(fields["kappa"]),
        nu=float(fields["nu"]),
    )
