"""Complex single-layer reflection coefficient and absorption cross section.

A layer of surface density n*dz responds to probe light detuned by delta with

    zeta(delta) = -(n*dz) * (3/2) * (lambda**2 / 2pi)
                  * sum_F s_F / (i + 2*(delta - delta_F)/Gamma)

so Im(zeta) >= 0 for every real detuning (passive, absorbing medium).  The
response is strictly linear in the density: saturation is ignored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GAMMA_RB85_D2 = 2.0 * math.pi * 6.0e6  # natural linewidth, rad/s


@dataclass(frozen=True)
class SpectralLine:
    """One hyperfine transition: offset from the reference line and weight."""

    delta_f: float  # rad/s
    strength: float

    def __post_init__(self):
        if self.strength < 0.0:
            raise ValueError("line strength must be non-negative")


def rb85_d2_f3_lines(gamma: float = GAMMA_RB85_D2) -> tuple[SpectralLine, ...]:
    """Default line set: 85Rb D2, F=3 -> F'=2,3,4.

    Offsets are -31*Gamma, -20*Gamma and 0 (reference zero on F'=4).  The
    relative strengths 10:35:81 are hyperfine strength factors from standard
    alkali line-data tables; they are external data, not derived here.
    """
    total = 10.0 + 35.0 + 81.0
    return (
        SpectralLine(-31.0 * gamma, 10.0 / total),
        SpectralLine(-20.0 * gamma, 35.0 / total),
        SpectralLine(0.0, 81.0 / total),
    )


@dataclass(frozen=True)
class AtomResponseConfig:
    """Linewidth, hyperfine line set and probe wavelength of the scatterers."""

    gamma: float
    lines: tuple[SpectralLine, ...]
    lambda_brg: float

    def __post_init__(self):
        if self.gamma <= 0.0:
            raise ValueError("gamma must be positive")
        if not self.lines:
            raise ValueError("need at least one spectral line")
        total = sum(line.strength for line in self.lines)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"line strengths must sum to 1, got {total}")


def single_line_config(gamma: float = GAMMA_RB85_D2, lambda_brg: float = 780e-9,
                       delta_f: float = 0.0) -> AtomResponseConfig:
    """One unit-strength line; handy for symmetry tests and clean limits."""
    return AtomResponseConfig(gamma, (SpectralLine(delta_f, 1.0),), lambda_brg)


def default_config(lambda_brg: float = 780e-9) -> AtomResponseConfig:
    return AtomResponseConfig(GAMMA_RB85_D2, rb85_d2_f3_lines(), lambda_brg)


def zeta(surface_density, delta_brg, cfg: AtomResponseConfig):
    """Complex single-layer reflection coefficient.

    Broadcasts over `surface_density` and `delta_brg` (scalars or arrays).
    """
    prefactor = 1.5 * cfg.lambda_brg**2 / (2.0 * math.pi)
    delta = np.asarray(delta_brg, dtype=float)
    resp = np.zeros(delta.shape, dtype=complex)
    for line in cfg.lines:
        resp += line.strength / (1j + 2.0 * (delta - line.delta_f) / cfg.gamma)
    out = -np.asarray(surface_density, dtype=float) * prefactor * resp
    if out.ndim == 0:
        return complex(out)
    return out


def resonant_cross_section(lambda_brg: float) -> float:
    """Peak cross section 3*lambda**2/(2*pi) of a unit-strength line."""
    return 3.0 * lambda_brg**2 / (2.0 * math.pi)


def cross_section(delta_brg, cfg: AtomResponseConfig):
    """Absorption cross section, Lorentzian sum consistent with Im(zeta).

    sigma(delta) = (3 lambda^2 / 2pi) * sum_F s_F / (1 + 4 (delta-delta_F)^2/Gamma^2)
    """
    delta = np.asarray(delta_brg, dtype=float)
    out = np.zeros(delta.shape, dtype=float)
    for line in cfg.lines:
        x = 2.0 * (delta - line.delta_f) / cfg.gamma
        out += line.strength / (1.0 + x * x)
    out *= resonant_cross_section(cfg.lambda_brg)
    if out.ndim == 0:
        return float(out)
    return out
