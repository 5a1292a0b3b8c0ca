"""Closed-form oracles and design formulas.

Every field-solver result in this package has a hand-checkable counterpart
here: 1D MMF diagrams and slot leakage for layered windings, parallel-plate
and coaxial capacitance, Dowell AC resistance, and area-product sizing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from hftx.materials import EPS0, MU0


class AnalyticError(ValueError):
    pass


@dataclass(frozen=True)
class DesignSpec:
    """Inputs of the area-product sizing formula."""

    p_apparent: float      # VA
    k_f: float             # waveform coefficient (4.0 square, 4.44 sine)
    k_u: float             # window utilization, in (0, 1]
    b_m: float             # peak flux density, T
    j: float               # current density, A/m^2
    f: float               # Hz

    def __post_init__(self):
        for name in ("p_apparent", "k_f", "k_u", "b_m", "j", "f"):
            if getattr(self, name) <= 0.0:
                raise AnalyticError(f"{name} must be > 0")
        if self.k_u > 1.0:
            raise AnalyticError("k_u must be in (0, 1]")


# Customary square-wave handbook defaults; the source procedure cites the
# handbook but omits its inputs, so these are config-visible here and never
# hard-coded into field tests.
DEFAULT_DESIGN = dict(k_f=4.0, k_u=0.4, j=3.0e6)


def area_product_sizing(spec: DesignSpec) -> dict:
    """Area product A_p = P / (K_f K_u B_m J f), in m^4 (coherent SI)."""
    a_p = spec.p_apparent / (spec.k_f * spec.k_u * spec.b_m * spec.j * spec.f)
    return {"a_p": a_p}


def turns_for_voltage(voltage: float, k_f: float, b_m: float,
                      core_area: float, f: float) -> float:
    """Turn count from Faraday's law, N = V / (K_f B_m A_core f)."""
    return voltage / (k_f * b_m * core_area * f)


def flux_density_for_turns(voltage: float, k_f: float, turns: float,
                           core_area: float, f: float) -> float:
    """Operating B_m implied by a fixed turn count (inverted turns formula)."""
    return voltage / (k_f * turns * core_area * f)


@dataclass(frozen=True)
class MMFDiagram:
    """Piecewise-linear MMF profile across a layered winding window.

    profile is a sequence of (position fraction in [0, 1], MMF in A-turns)
    breakpoints; linear within layers, flat across inter-layer gaps.
    """

    arrangement: str
    layer_ampere_turns: float
    profile: tuple[tuple[float, float], ...]
    peak: float


def _check_arrangement(arrangement: str) -> str:
    arr = arrangement.upper()
    if not arr or any(t not in "PS" for t in arr):
        raise AnalyticError(f"arrangement must be nonempty over {{P,S}}: {arrangement!r}")
    return arr


def mmf_diagram(arrangement: str, turns_per_layer: int, current: float,
                layer_thickness: float = 1.0,
                gap_thickness: float = 0.0) -> MMFDiagram:
    """Running-sum MMF staircase for a layer arrangement string.

    Across each P layer the MMF rises by turns_per_layer * current, across
    each S layer it falls by the same amount (balanced excitation). The
    position axis is normalized to [0, 1] over layers plus inter-layer gaps.
    """
    arr = _check_arrangement(arrangement)
    n_p = arr.count("P")
    n_s = arr.count("S")
    if n_p != n_s:
        raise AnalyticError(
            f"unbalanced arrangement {arr!r}: {n_p} P vs {n_s} S layers")
    step = turns_per_layer * current
    total = len(arr) * layer_thickness + (len(arr) - 1) * gap_thickness
    profile = [(0.0, 0.0)]
    x = 0.0
    f = 0.0
    for i, tok in enumerate(arr):
        if i > 0 and gap_thickness > 0.0:
            x += gap_thickness
            profile.append((x / total, f))
        x += layer_thickness
        f += step if tok == "P" else -step
        profile.append((x / total, f))
    peak = max(abs(v) for _, v in profile)
    return MMFDiagram(arrangement=arr, layer_ampere_turns=step,
                      profile=tuple(profile), peak=peak)


def _profile_square_integral(diagram: MMFDiagram) -> float:
    """Integral of MMF(x)^2 over the normalized position axis.

    Exact for the piecewise-linear profile: on a segment from f0 to f1 the
    integral of F^2 is dx * (f0^2 + f0*f1 + f1^2) / 3.
    """
    total = 0.0
    pts = diagram.profile
    for (x0, f0), (x1, f1) in zip(pts, pts[1:]):
        total += (x1 - x0) * (f0 * f0 + f0 * f1 + f1 * f1) / 3.0
    return total


def slot_leakage(window_height: float, layers: str, turns_per_layer: int,
                 layer_thickness: float, gap_thickness: float,
                 mean_turn_length: float, current: float = 1.0) -> float:
    """1D slot-leakage inductance of a layered winding, in henry.

    Assumes the field is parallel to the layer faces and uniform along the
    window height h: H(x) = F(x)/h, so

        L = mu0 * (MLT / h) * integral F(x)^2 dx / I^2

    integrated across layers and inter-layer gaps. For one P and one S
    layer of thickness t and gap g this reduces to the textbook
    mu0 * MLT * N^2 / h * (g + 2t/3).
    """
    if window_height <= 0.0:
        raise AnalyticError("window height must be > 0")
    diagram = mmf_diagram(layers, turns_per_layer, current,
                          layer_thickness=layer_thickness,
                          gap_thickness=gap_thickness)
    arr = diagram.arrangement
    span = len(arr) * layer_thickness + (len(arr) - 1) * gap_thickness
    if span == 0.0:
        return 0.0
    # profile x is normalized by span; undo the normalization
    integral = _profile_square_integral(diagram) * span
    return MU0 * (mean_turn_length / window_height) * integral / current**2


def interleaving_factor(arrangement: str) -> float:
    """Leakage scaling of an arrangement vs the fully grouped one.

    Ratio of the MMF-profile-squared integral for this arrangement to that
    of P...PS...S with the same layer count (gapless layers). Always in
    (0, 1]; equals 1 iff all P layers and all S layers are contiguous.
    """
    arr = _check_arrangement(arrangement)
    d = mmf_diagram(arr, 1, 1.0)
    grouped = "P" * arr.count("P") + "S" * arr.count("S")
    d0 = mmf_diagram(grouped, 1, 1.0)
    return _profile_square_integral(d) / _profile_square_integral(d0)


def plate_capacitance(area: float, gap: float, epsilon_r: float = 1.0) -> float:
    """Parallel-plate capacitance eps0*eps_r*A/g, fringing neglected."""
    if area <= 0.0 or gap <= 0.0 or epsilon_r <= 0.0:
        raise AnalyticError("plate capacitance needs positive inputs")
    return EPS0 * epsilon_r * area / gap


def coax_capacitance(r_inner: float, r_outer: float, length: float,
                     epsilon_r: float = 1.0) -> float:
    """Coaxial-cylinder capacitance 2*pi*eps*L / ln(r_outer/r_inner)."""
    if not 0.0 < r_inner < r_outer:
        raise AnalyticError("need 0 < r_inner < r_outer")
    return 2.0 * math.pi * EPS0 * epsilon_r * length / math.log(r_outer / r_inner)


def coax_inductance(r_inner: float, r_outer: float, length: float) -> float:
    """External inductance of a coaxial pair, mu0*L*ln(r_outer/r_inner)/2pi."""
    if not 0.0 < r_inner < r_outer:
        raise AnalyticError("need 0 < r_inner < r_outer")
    return MU0 * length * math.log(r_outer / r_inner) / (2.0 * math.pi)


def skin_depth(resistivity: float, f: float, mu_r: float = 1.0) -> float:
    """Skin depth sqrt(rho / (pi f mu))."""
    if resistivity <= 0.0 or f <= 0.0:
        raise AnalyticError("resistivity and frequency must be > 0")
    return math.sqrt(resistivity / (math.pi * f * MU0 * mu_r))


def dowell_ac_factor(delta: float, layers_per_portion: float) -> float:
    """Dowell AC/DC resistance ratio at normalized layer thickness delta.

    F = D*(sinh 2D + sin 2D)/(cosh 2D - cos 2D)
        + (2/3)*(m^2 - 1)*D*(sinh D - sin D)/(cosh D + cos D)

    A series expansion is used below delta ~ 1e-3 where the closed form
    loses precision to cancellation; F -> 1 as delta -> 0.
    """
    m = layers_per_portion
    d = delta
    if d < 1e-3:
        # F = 1 + (5 m^2 - 1) / 45 * d^4 + O(d^8)
        return 1.0 + (5.0 * m * m - 1.0) / 45.0 * d**4
    skin = d * (math.sinh(2 * d) + math.sin(2 * d)) / (math.cosh(2 * d) - math.cos(2 * d))
    prox = (2.0 * (m * m - 1.0) / 3.0) * d * (
        (math.sinh(d) - math.sin(d)) / (math.cosh(d) + math.cos(d)))
    return skin + prox


def dowell_ac_resistance(r_dc: float, layers_per_portion: float,
                         wire_equiv_thickness: float, porosity: float,
                         f: float, resistivity: float) -> float:
    """AC resistance of a layered winding by Dowell's 1D method.

    delta = t_eq * sqrt(pi * f * mu0 * porosity / resistivity), where t_eq
    is the square-equivalent conductor thickness and porosity the layer
    fill factor.
    """
    if min(r_dc, wire_equiv_thickness, porosity, f, resistivity) <= 0.0:
        raise AnalyticError("dowell inputs must be positive")
    if layers_per_portion < 1.0:
        raise AnalyticError("layers_per_portion must be >= 1")
    delta = wire_equiv_thickness * math.sqrt(
        math.pi * f * MU0 * porosity / resistivity)
    return r_dc * dowell_ac_factor(delta, layers_per_portion)


def dowell_layers_per_portion(arrangement: str) -> float:
    """Effective Dowell layer count m of an arrangement.

    Peak of the per-unit MMF staircase: the number of layers between a zero
    crossing and the worst extremum. P...PS...S with m layers each gives m;
    full interleaving gives 1.
    """
    d = mmf_diagram(arrangement, 1, 1.0)
    return d.peak
