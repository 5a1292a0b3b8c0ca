"""2D finite-element toolkit for high-frequency transformer parasitics.

Extracts leakage/magnetizing inductance, inter-winding capacitance,
dielectric stress margins, AC resistance and core loss for parametric
toroidal, UU and EE transformer structures, with every field result
cross-checked against closed-form oracles.
"""

__version__ = "0.1.0"
