"""Quasi-static Brownian noise of an elastic half space seen by a Gaussian beam.

Beam-averaged axial displacements at depths ``z1, z2`` have cross spectral
density ``S_q0(omega) * N(z1, z2)``, where ``S_q0`` is the surface
displacement PSD and ``N(0, 0) = 1``. ``N`` only depends on ``z/w0`` and
the Poisson ratio; with ``u = k w0 / 2``::

    N = 1 / (4 sqrt(pi) (1 - sigma)^2) * integral_0^inf exp(-u^2) f(z1, z2; 2u/w0) du
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.constants import k as k_B

from .model import BeamSubstrate
from .tmm import NumericalError

__all__ = [
    "QuadratureError",
    "CancellationError",
    "QuadratureSettings",
    "CorrelationResult",
    "kernel_f",
    "correlation_N",
    "correlation_matrix",
    "surface_psd",
    "normalized_correlation_C",
    "strain_correlation_Q",
]


class QuadratureError(NumericalError):
    pass


class CancellationError(NumericalError):
    pass


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-9
    u_max: float = 10.0
    limit: int = 200

    def __post_init__(self):
        if not self.u_max**2 > 40 * math.log(10):
            raise ValueError(f"u_max={self.u_max} truncates the Gaussian weight above 1e-40")
        if not 0 < self.rel_tol < 1:
            raise ValueError(f"rel_tol must be in (0, 1), got {self.rel_tol}")


DEFAULT_QUAD = QuadratureSettings()


@dataclass(frozen=True)
class CorrelationResult:
    value: float
    est_error: float

    def __float__(self):
        return self.value


def kernel_f(z1, z2, k, sigma):
    """Depth kernel of the displacement correlation; symmetric in ``z1, z2``.

    Works in any consistent units and broadcasts over numpy arrays.
    """
    zm = np.abs(z1 - z2)
    zp = z1 + z2
    a = 3.0 - 4.0 * sigma
    return np.exp(-k * zm) * (a + k * zm) + np.exp(-k * zp) * (
        5.0 - 12.0 * sigma + 8.0 * sigma**2 + k * a * zp + 2.0 * k**2 * (z1 * z2)
    )


def _sigma(beam: BeamSubstrate) -> float:
    sigma = beam.substrate.sigma
    if sigma is None:
        raise ValueError(f"substrate {beam.substrate.name!r} has no Poisson ratio")
    return sigma


def _integrate(terms, sigma, q: QuadratureSettings, rel_to=None) -> CorrelationResult:
    """Integrate ``sum(w * f(a, b; 2u))`` against ``exp(-u^2)``; depths in units of w0.

    ``rel_to`` sets the scale the tolerance is measured against (defaults to
    the result itself).
    """
    pref = 1.0 / (4.0 * math.sqrt(math.pi) * (1.0 - sigma) ** 2)

    def integrand(u):
        kk = 2.0 * u
        return math.exp(-u * u) * sum(w * kernel_f(a, b, kk, sigma) for w, a, b in terms)

    # decay scales of the exponentials, so the subdivision starts near them
    scales = sorted({1.0 / (2.0 * s) for _, a, b in terms for s in (abs(a - b), a + b) if s > 0})
    points = [p for p in scales if p < q.u_max] or None
    # ask the integrator for a 10x margin; its error estimate is conservative
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err, info, *rest = integrate.quad(
            integrand, 0.0, q.u_max, epsabs=0.0, epsrel=0.1 * q.rel_tol, limit=q.limit,
            points=points, full_output=1,
        )
    value, error = pref * val, pref * err
    scale = abs(value) if rel_to is None else rel_to
    if error > max(q.rel_tol * scale, 1e-15):
        raise QuadratureError(
            f"quadrature reached error {error:.3g} for value {value:.6g} "
            f"(tolerance {q.rel_tol:g} relative)"
        )
    return CorrelationResult(value, error)


def correlation_N(z1: float, z2: float, beam: BeamSubstrate, q: QuadratureSettings = DEFAULT_QUAD) -> CorrelationResult:
    """Normalized cross spectral density of beam-averaged displacements at depths z1, z2 (m)."""
    if z1 < 0 or z2 < 0:
        raise ValueError("depths must be >= 0")
    return _integrate([(1.0, z1 / beam.w0, z2 / beam.w0)], _sigma(beam), q)


def correlation_matrix(depths, beam: BeamSubstrate, q: QuadratureSettings = DEFAULT_QUAD) -> np.ndarray:
    depths = list(depths)
    n = len(depths)
    out = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            out[i, j] = out[j, i] = correlation_N(depths[i], depths[j], beam, q).value
    return out


def surface_psd(omega: float, beam: BeamSubstrate) -> float:
    """One-sided displacement PSD of the beam-averaged surface, m^2 per rad/s."""
    sub = beam.substrate
    if not omega > 0:
        raise ValueError(f"omega must be > 0, got {omega}")
    if sub.E is None or not sub.E > 0:
        raise ValueError(f"substrate {sub.name!r} needs a positive Young's modulus")
    sigma = _sigma(beam)
    return 2 * k_B * beam.temperature * (1 - sigma**2) * sub.phi_s / (math.pi**1.5 * beam.w0 * sub.E * omega)


def normalized_correlation_C(z1: float, z2: float, beam: BeamSubstrate, q: QuadratureSettings = DEFAULT_QUAD) -> float:
    n12 = correlation_N(z1, z2, beam, q).value
    n11 = correlation_N(z1, z1, beam, q).value
    n22 = n11 if z1 == z2 else correlation_N(z2, z2, beam, q).value
    return n12 / math.sqrt(n11 * n22)


def strain_correlation_Q(
    z1: float, z2: float, dz2: float, beam: BeamSubstrate, q: QuadratureSettings = DEFAULT_QUAD
) -> float:
    """Ratio of the strain in ``[z2, z2 + dz2]`` coherent with ``q(z1)`` to its rms total.

    Both strains are forward differences over the slice. The differences
    of ``N`` are integrated as single kernels so that small slices do not
    lose precision to subtraction.
    """
    w0 = beam.w0
    if not 0 < dz2 <= 1e-2 * w0:
        raise ValueError(f"dz2 must satisfy 0 < dz2 <= 1e-2 * w0, got {dz2:g}")
    if z1 < 0 or z2 < 0:
        raise ValueError("depths must be >= 0")
    sigma = _sigma(beam)
    a, b, d = z1 / w0, z2 / w0, dz2 / w0

    n11 = _integrate([(1.0, a, a)], sigma, q).value
    diag = _integrate([(1.0, b, b)], sigma, q).value
    coh = _integrate([(1.0, a, b + d), (-1.0, a, b)], sigma, q, rel_to=n11)
    tot = _integrate([(1.0, b + d, b + d), (-2.0, b, b + d), (1.0, b, b)], sigma, q, rel_to=diag)
    if tot.value < 1e3 * tot.est_error:
        raise CancellationError(
            f"total-strain radicand {tot.value:.3g} is within 1e3 of its error {tot.est_error:.3g}"
        )
    eps_coh = coh.value / (d * math.sqrt(n11))
    eps_tot = math.sqrt(tot.value) / d
    return eps_coh / eps_tot
