"""Embedded-mirror geometry: a partial front reflector R0 at the surface and a
high reflector R2 buried at depth z2 inside the substrate.

Reflected-phase noise relative to bare piston noise is

    F(z2; alpha) = (1 - alpha)^2 + 2 alpha (1 - alpha) N(0, z2) + alpha^2 N(z2, z2)

where ``alpha`` is the strain sensitivity of the two-surface cavity.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .fdt import DEFAULT_QUAD, QuadratureSettings, _integrate, _sigma
from .model import BeamSubstrate

__all__ = [
    "CompositeMirror",
    "NoiseRatioCurve",
    "OptimalAlpha",
    "gt_reflection",
    "gamma_slope",
    "strain_sensitivity_alpha",
    "noise_ratio_F",
    "noise_ratio_curve",
    "optimal_alpha",
    "transverse_penalty",
]


def _check_reflectivities(R0, R2):
    if not 0.0 <= R0 < 1.0:
        raise ValueError(f"R0 must satisfy 0 <= R0 < 1, got {R0}")
    if not 0.0 <= R2 <= 1.0:
        raise ValueError(f"R2 must satisfy 0 <= R2 <= 1, got {R2}")


@dataclass(frozen=True)
class CompositeMirror:
    R0: float
    R2: float
    z2: float  # m
    n_s: float
    p12: float = 0.0

    def __post_init__(self):
        _check_reflectivities(self.R0, self.R2)
        if not self.R2 > 0:
            raise ValueError("the embedded surface needs R2 > 0")
        if not self.z2 > 0:
            raise ValueError(f"z2 must be > 0, got {self.z2}")


@dataclass(frozen=True)
class NoiseRatioCurve:
    alpha: float
    F: tuple[tuple[float, float], ...]  # (z2/w0, F)
    sigma: float


@dataclass(frozen=True)
class OptimalAlpha:
    alpha_min: float
    F_min: float
    degenerate: bool = False


def gt_reflection(R0: float, R2: float, phi: float) -> complex:
    """Amplitude reflectance of the two-surface cavity at round-trip phase ``phi``."""
    _check_reflectivities(R0, R2)
    a, b = math.sqrt(R0), math.sqrt(R2)
    e = cmath.exp(1j * phi)
    return (-a + b * e) / (1 - a * b * e)


def gamma_slope(R0: float, R2: float, phi0: float) -> float:
    """d arg(r)/d phi at ``phi0``; equals (1+sqrt R0)/(1-sqrt R0) on resonance for R2 = 1."""
    _check_reflectivities(R0, R2)
    a, b = math.sqrt(R0), math.sqrt(R2)
    c = math.cos(phi0)
    num_den = a * a + b * b - 2 * a * b * c
    first = (b * b - a * b * c) / num_den if num_den > 0 else 0.0
    second = (a * a * b * b - a * b * c) / (1 + a * a * b * b - 2 * a * b * c)
    return first - second


def strain_sensitivity_alpha(m: CompositeMirror, k: float, w0: float | None = None) -> float:
    """Strain sensitivity of the composite mirror at vacuum wavevector ``k``.

    If ``w0`` is given, warns when z2 is not well inside the Rayleigh range
    of the substrate beam (``z2 < n_s k w0^2 / 2``).
    """
    if not k > 0:
        raise ValueError(f"k must be > 0, got {k}")
    if w0 is not None and m.z2 >= m.n_s * k * w0**2 / 2:
        warnings.warn(
            f"z2={m.z2:.3g} m is not small compared with n_s k w0^2/2={m.n_s * k * w0**2 / 2:.3g} m",
            stacklevel=2,
        )
    phi0 = math.fmod(2 * m.n_s * k * m.z2, 2 * math.pi)
    return m.n_s * (1 - m.n_s**2 * m.p12 / 2) * abs(gamma_slope(m.R0, m.R2, phi0))


def _bracket_terms(z):
    # (N(0,0) - 2 N(0,z) + N(z,z)) and (N(0,0) - N(0,z)), depths in units of w0
    return (
        [(1.0, 0.0, 0.0), (-2.0, 0.0, z), (1.0, z, z)],
        [(1.0, 0.0, 0.0), (-1.0, 0.0, z)],
    )


def noise_ratio_F(z2: float, alpha: float, beam: BeamSubstrate, q: QuadratureSettings = DEFAULT_QUAD) -> float:
    """Compensated over piston phase-noise density for embedding depth z2 (m)."""
    if z2 < 0:
        raise ValueError(f"z2 must be >= 0, got {z2}")
    sigma = _sigma(beam)
    z = z2 / beam.w0
    n0z = _integrate([(1.0, 0.0, z)], sigma, q).value
    nzz = _integrate([(1.0, z, z)], sigma, q).value
    return (1 - alpha) ** 2 + 2 * alpha * (1 - alpha) * n0z + alpha**2 * nzz


def optimal_alpha(z2: float, beam: BeamSubstrate, q: QuadratureSettings = DEFAULT_QUAD) -> OptimalAlpha:
    """Sensitivity minimizing the noise ratio at depth z2, and the minimum itself.

    At ``z2 = 0`` the ratio is 1 for every alpha; ``alpha_min = 0`` is
    returned with ``degenerate=True``.
    """
    if z2 < 0:
        raise ValueError(f"z2 must be >= 0, got {z2}")
    sigma = _sigma(beam)
    curv_terms, slope_terms = _bracket_terms(z2 / beam.w0)
    curvature = _integrate(curv_terms, sigma, q, rel_to=1.0).value
    if abs(curvature) < 1e-12:
        return OptimalAlpha(0.0, noise_ratio_F(z2, 0.0, beam, q), degenerate=True)
    slope = _integrate(slope_terms, sigma, q, rel_to=1.0).value
    alpha = slope / curvature
    return OptimalAlpha(alpha, noise_ratio_F(z2, alpha, beam, q))


def noise_ratio_curve(
    z2_over_w0, alpha: float, beam: BeamSubstrate, q: QuadratureSettings = DEFAULT_QUAD
) -> NoiseRatioCurve:
    pts = tuple((float(z), noise_ratio_F(float(z) * beam.w0, alpha, beam, q)) for z in np.asarray(z2_over_w0))
    return NoiseRatioCurve(alpha, pts, _sigma(beam))


def transverse_penalty(z2: float, w0: float, coeff: float | None = None) -> float:
    """Heuristic incoherent term ``coeff * z2 / w0`` for transverse strains.

    Only the large-depth linear scaling is modelled; ``coeff`` has no
    default and must be supplied.
    """
    if coeff is None:
        raise ValueError("transverse_penalty needs an explicit coefficient")
    if coeff < 0:
        raise ValueError(f"coefficient must be >= 0, got {coeff}")
    return coeff * z2 / w0
