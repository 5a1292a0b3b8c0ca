"""Material property library: magnetic, dielectric, loss and strength data.

All quantities are SI: H in A/m, B in tesla, resistivity in ohm*m,
dielectric strength in V/m, mass density in kg/m^3.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

MU0 = 4.0e-7 * math.pi  # vacuum permeability (H/m)
EPS0 = 8.8541878128e-12  # vacuum permittivity (F/m)
RHO_COPPER_20C = 1.724e-8  # copper resistivity at 20 C (ohm*m)


class MaterialError(ValueError):
    """Invalid material data."""


@dataclass(frozen=True)
class BHCurve:
    """Sampled single-valued B-H magnetization curve.

    Samples are (H, B) pairs starting exactly at (0, 0), strictly
    increasing in H, non-decreasing in B, with non-increasing incremental
    slope dB/dH (saturating curve). Beyond the last sample the curve
    extrapolates with slope mu0 (fully saturated). Negative H is handled
    by odd symmetry.
    """

    samples: tuple[tuple[float, float], ...]

    def __post_init__(self):
        s = self.samples
        if len(s) < 2:
            raise MaterialError("BHCurve needs at least 2 samples")
        if s[0] != (0.0, 0.0):
            raise MaterialError(f"first sample must be (0, 0), got {s[0]}")
        slopes = []
        for (h0, b0), (h1, b1) in zip(s, s[1:]):
            if h1 <= h0:
                raise MaterialError("H samples must be strictly increasing")
            if b1 < b0:
                raise MaterialError("B samples must be non-decreasing")
            slopes.append((b1 - b0) / (h1 - h0))
        # Slope must not increase (saturating), and the final incremental
        # slope must stay at or above the mu0 extrapolation slope so the
        # full curve remains concave for H >= 0.
        for d0, d1 in zip(slopes, slopes[1:]):
            if d1 > d0 * (1.0 + 1e-12):
                raise MaterialError("dB/dH must be non-increasing")
        if slopes[-1] < MU0 * (1.0 - 1e-12):
            raise MaterialError("final slope below mu0; curve would turn convex")

    def lookup(self, h: float) -> float:
        """B(H) by monotone piecewise-linear interpolation, odd in H."""
        if h < 0.0:
            return -self.lookup(-h)
        if h == 0.0:
            return 0.0
        s = self.samples
        if h >= s[-1][0]:
            return s[-1][1] + MU0 * (h - s[-1][0])
        lo, hi = 0, len(s) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if s[mid][0] <= h:
                lo = mid
            else:
                hi = mid
        h0, b0 = s[lo]
        h1, b1 = s[hi]
        return b0 + (b1 - b0) * (h - h0) / (h1 - h0)

    def mu_r_initial(self) -> float:
        """Small-signal relative permeability from the first nonzero sample."""
        h1, b1 = self.samples[1]
        return (b1 / h1) / MU0

    def h_of_b(self, b: float) -> float:
        """Inverse lookup H(B); requires strictly increasing B samples."""
        if b < 0.0:
            return -self.h_of_b(-b)
        s = self.samples
        if b >= s[-1][1]:
            return s[-1][0] + (b - s[-1][1]) / MU0
        for (h0, b0), (h1, b1) in zip(s, s[1:]):
            if b <= b1:
                if b1 == b0:
                    return h1
                return h0 + (h1 - h0) * (b - b0) / (b1 - b0)
        return s[-1][0]


def bh_lookup(curve: BHCurve, h: float) -> float:
    return curve.lookup(h)


def mu_r_initial(curve: BHCurve) -> float:
    return curve.mu_r_initial()


@dataclass(frozen=True)
class LossConstants:
    """Fit constants a, b, c, d of the iron-powder loss formula."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            if getattr(self, name) <= 0.0:
                raise MaterialError(f"loss constant {name} must be > 0")


def core_loss_density(constants: LossConstants, b_peak: float, f: float,
                      duty: float = 0.5) -> float:
    """Average core loss density in W/kg for square-wave excitation.

    Evaluates, exactly as transcribed:

        P = f * B^3 * 1e9 / (a + 681*b*B^0.7 + 2.512e6*c*B^1.35)
            + 100*d*f^2*B^2 * (1/D + 1/(1-D)) / 4

    The printed source formula is typographically ambiguous (a stray
    duplicated constant after the B^1.35 term); the denominator grouping
    above is the adopted reading, isolated here so an alternative reading
    is a one-line change. D = 0.5 recovers the sinusoidal case, where the
    duty factor equals exactly 1.
    """
    if not 0.0 < duty < 1.0:
        raise MaterialError(f"duty cycle must be in (0, 1), got {duty}")
    if b_peak <= 0.0 or f <= 0.0:
        raise MaterialError("B and f must be > 0")
    c = constants
    hyst = f * b_peak**3 * 1e9 / (
        c.a + 681.0 * c.b * b_peak**0.7 + 2.512e6 * c.c * b_peak**1.35)
    eddy = 100.0 * c.d * f**2 * b_peak**2 * (1.0 / duty + 1.0 / (1.0 - duty)) / 4.0
    return hyst + eddy


@dataclass(frozen=True)
class Material:
    """One material record.

    Exactly one of mu_r / bh_curve describes the permeability model.
    resistivity may be math.inf for ideal insulators. dielectric_strength
    is required for any material assigned to an insulation region.
    """

    name: str
    epsilon_r: float = 1.0
    mu_r: float | None = 1.0
    bh_curve: BHCurve | None = None
    resistivity: float = math.inf  # ohm*m
    dielectric_strength: float | None = None  # V/m
    loss_constants: LossConstants | None = None
    mass_density: float | None = None  # kg/m^3

    def __post_init__(self):
        if (self.mu_r is None) == (self.bh_curve is None):
            raise MaterialError(
                f"{self.name}: exactly one of mu_r / bh_curve must be set")
        if self.mu_r is not None and self.mu_r < 1.0:
            raise MaterialError(f"{self.name}: mu_r must be >= 1")
        if self.epsilon_r < 1.0:
            raise MaterialError(f"{self.name}: epsilon_r must be >= 1")
        if self.dielectric_strength is not None and self.dielectric_strength <= 0:
            raise MaterialError(f"{self.name}: dielectric strength must be > 0")

    @property
    def mu_r_effective(self) -> float:
        """Constant mu_r for linear solves (initial slope of a B-H curve)."""
        if self.mu_r is not None:
            return self.mu_r
        return self.bh_curve.mu_r_initial()

    @property
    def is_conductor(self) -> bool:
        return self.resistivity < 1.0  # ohm*m; metals are ~1e-8

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "epsilon_r": self.epsilon_r,
            "resistivity_ohm_m": "inf" if math.isinf(self.resistivity)
                                 else self.resistivity,
        }
        if self.mu_r is not None:
            d["mu_r"] = self.mu_r
        if self.bh_curve is not None:
            d["bh_curve"] = [[h, b] for h, b in self.bh_curve.samples]
        if self.dielectric_strength is not None:
            d["dielectric_strength_V_per_m"] = self.dielectric_strength
        if self.loss_constants is not None:
            lc = self.loss_constants
            d["loss_constants"] = {"a": lc.a, "b": lc.b, "c": lc.c, "d": lc.d}
        if self.mass_density is not None:
            d["mass_density_kg_per_m3"] = self.mass_density
        return d

    @staticmethod
    def from_dict(d: dict) -> "Material":
        rho = d.get("resistivity_ohm_m", "inf")
        rho = math.inf if rho == "inf" else float(rho)
        curve = None
        if "bh_curve" in d:
            curve = BHCurve(tuple((float(h), float(b)) for h, b in d["bh_curve"]))
        lc = None
        if "loss_constants" in d:
            raw = d["loss_constants"]
            lc = LossConstants(raw["a"], raw["b"], raw["c"], raw["d"])
        return Material(
            name=d["name"],
            epsilon_r=float(d.get("epsilon_r", 1.0)),
            mu_r=float(d["mu_r"]) if "mu_r" in d else None,
            bh_curve=curve,
            resistivity=rho,
            dielectric_strength=d.get("dielectric_strength_V_per_m"),
            loss_constants=lc,
            mass_density=d.get("mass_density_kg_per_m3"),
        )


@dataclass
class MaterialCatalog:
    """Named collection of materials with JSON persistence."""

    materials: dict[str, Material] = field(default_factory=dict)

    def add(self, material: Material) -> None:
        self.materials[material.name] = material

    def __getitem__(self, name: str) -> Material:
        try:
            return self.materials[name]
        except KeyError:
            raise MaterialError(f"unknown material {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.materials

    def save(self, path: str | Path) -> None:
        doc = {"materials": [m.to_dict() for m in self.materials.values()]}
        Path(path).write_text(json.dumps(doc, indent=2) + "\n")

    @staticmethod
    def load(path: str | Path) -> "MaterialCatalog":
        doc = json.loads(Path(path).read_text())
        cat = MaterialCatalog()
        for rec in doc["materials"]:
            cat.add(Material.from_dict(rec))
        return cat


# Table-derived loss constants for the iron powder mix used by the default
# core material (medium-frequency fit band).
IRON_POWDER_LOSS = LossConstants(a=0.01235, b=0.8202, c=1.4694, d=3.85e-7)

# The source figure for the iron-powder magnetization curve is a plot with
# no readable numeric samples, so this stand-in curve is shipped instead:
# initial mu_r = 75 exactly, saturation flattening out near 1.3 T. Any
# study needing exact answers should use a constant-mu_r material.
IRON_POWDER_BH = BHCurve((
    (0.0, 0.0),
    (500.0, 0.047123889803846895),   # slope = 75*mu0 exactly
    (1000.0, 0.0894),
    (2000.0, 0.16),
    (4000.0, 0.28),
    (8000.0, 0.46),
    (16000.0, 0.70),
    (32000.0, 0.95),
    (64000.0, 1.15),
    (128000.0, 1.32),
))


def default_catalog() -> MaterialCatalog:
    """Built-in catalog covering the reference transformer studies."""
    cat = MaterialCatalog()
    cat.add(Material(
        name="air",
        epsilon_r=1.0, mu_r=1.0,
        dielectric_strength=3e6))  # 3 kV/mm
    cat.add(Material(
        name="copper",
        epsilon_r=1.0, mu_r=1.0,
        resistivity=RHO_COPPER_20C))
    cat.add(Material(
        name="silicon_varnish",
        epsilon_r=3.1, mu_r=1.0,
        dielectric_strength=120e6))  # 120 kV/mm
    cat.add(Material(
        name="bobbin_plastic",
        epsilon_r=2.2, mu_r=1.0,
        dielectric_strength=25e6))  # 25 kV/mm
    cat.add(Material(
        name="iron_powder_mix8",
        epsilon_r=12.0, mu_r=None, bh_curve=IRON_POWDER_BH,
        resistivity=1e-2,  # conductive powder core
        loss_constants=IRON_POWDER_LOSS,
        mass_density=7000.0))
    cat.add(Material(
        name="ferrite_nizn",
        epsilon_r=12.0, mu_r=None, bh_curve=IRON_POWDER_BH,
        resistivity=1e3,  # 1e5 ohm*cm: effectively non-conductive
        mass_density=4800.0))
    return cat
