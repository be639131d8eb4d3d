"""Phase bookkeeping for a single thermally excited eigenmode.

A surface displacement ``q0`` (positive into the substrate) shifts the
reflected phase by the piston term ``-2 k q0``; the accompanying axial
strain ``zeta * q0`` changes the coating and adds ``dGamma/deps * zeta * q0``.
Scans report both terms normalized by ``|piston(k0)| = 2 k0 q0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.constants import k as k_B
from scipy.optimize import brentq

from .model import CoatingStack, EigenmodeSpec
from .tmm import MAX_LINEAR_STRAIN, StrainModel, amplitude_reflectance, dgamma_deps, dgamma_deps_array

__all__ = [
    "NoMagicRootError",
    "PhasePoint",
    "MagicWavevectors",
    "DiscriminationReport",
    "DEFAULT_WINDOW",
    "DEFAULT_POINTS",
    "piston_phase",
    "coating_phase",
    "scan_total_phase",
    "find_magic_wavevectors",
    "discrimination_report",
    "eigenmode_rms",
]

DEFAULT_WINDOW = (0.995, 1.005)
DEFAULT_POINTS = 4096
ROOT_XTOL = 1e-9


class NoMagicRootError(ValueError):
    pass


@dataclass(frozen=True)
class PhasePoint:
    k_over_k0: float
    delta_theta: float
    delta_beta: float
    delta_phi: float
    T: float


@dataclass(frozen=True)
class MagicWavevectors:
    roots: tuple[float, ...]  # k/k0, ascending
    bracket_window: tuple[float, float]  # k/k0
    grid_points: int

    def __len__(self):
        return len(self.roots)


@dataclass(frozen=True)
class DiscriminationReport:
    k_minus_B: float
    k_plus_A: float
    cross_noise_A_at_kB: float
    cross_noise_B_at_kA: float
    residual_at_k0: tuple[float, float]

    def as_dict(self) -> dict:
        return {
            "k_minus_B": self.k_minus_B,
            "k_plus_A": self.k_plus_A,
            "cross_noise_A_at_kB": self.cross_noise_A_at_kB,
            "cross_noise_B_at_kA": self.cross_noise_B_at_kA,
            "residual_at_k0_A": self.residual_at_k0[0],
            "residual_at_k0_B": self.residual_at_k0[1],
        }


def piston_phase(k: float, q0: float) -> float:
    if not k > 0:
        raise ValueError(f"k must be > 0, got {k}")
    return -2.0 * k * q0


def coating_phase(
    stack: CoatingStack,
    k: float,
    zeta: float,
    q0: float,
    model: StrainModel = StrainModel.PHOTOELASTIC,
) -> float:
    """Strain-induced reflection phase (radians) for surface displacement ``q0``."""
    if abs(zeta * q0) >= MAX_LINEAR_STRAIN:
        raise ValueError(f"strain zeta*q0={zeta * q0:g} outside the linear regime")
    if zeta == 0 or q0 == 0:
        return 0.0
    return dgamma_deps(stack, k, model) * zeta * q0


def _normalized_beta(stack, x, zeta, model):
    x = np.asarray(x, dtype=float)
    if zeta == 0:
        return np.zeros_like(x)
    return dgamma_deps_array(stack, x * stack.k0, model) * zeta / (2.0 * stack.k0)


def _normalized_phi(stack, x, zeta, model):
    return -np.asarray(x, dtype=float) + _normalized_beta(stack, x, zeta, model)


def _transmission(stack, x):
    r = amplitude_reflectance(stack, np.asarray(x, dtype=float) * stack.k0)
    return 1.0 - np.abs(r) ** 2


def scan_total_phase(
    stack: CoatingStack,
    zeta: float,
    k_grid,
    model: StrainModel = StrainModel.PHOTOELASTIC,
) -> list[PhasePoint]:
    """Normalized piston, coating and total phase along a grid of wavevectors.

    ``k_grid`` is in 1/m. All phases are divided by ``|piston(k0)|`` with
    ``q0 > 0``, so the piston line is ``-k/k0``.
    """
    k = np.asarray(k_grid, dtype=float)
    if np.any(k <= 0):
        raise ValueError("k_grid must be positive")
    x = k / stack.k0
    theta = -x
    beta = _normalized_beta(stack, x, zeta, model)
    T = _transmission(stack, x)
    return [
        PhasePoint(float(a), float(t), float(b), float(t + b), float(tt))
        for a, t, b, tt in zip(x, theta, beta, T)
    ]


def _narrowest_peak_cells(T) -> int:
    """Width in grid cells of the narrowest transmission peak (FWHM)."""
    T = np.asarray(T)
    peaks = np.nonzero((T[1:-1] > T[:-2]) & (T[1:-1] >= T[2:]))[0] + 1
    widest = len(T)
    best = widest
    for i in peaks:
        half = 0.5 * T[i]
        lo = i
        while lo > 0 and T[lo - 1] > half:
            lo -= 1
        hi = i
        while hi < len(T) - 1 and T[hi + 1] > half:
            hi += 1
        best = min(best, hi - lo + 1)
    return best


def find_magic_wavevectors(
    stack: CoatingStack,
    zeta: float,
    window: tuple[float, float] = DEFAULT_WINDOW,
    model: StrainModel = StrainModel.PHOTOELASTIC,
    points: int = DEFAULT_POINTS,
) -> MagicWavevectors:
    """Roots of the total phase inside ``window`` (given in units of k0).

    The window is scanned on a uniform grid, every sign change is bracketed
    and refined with Brent's method to ``|dk/k0| < 1e-9``. The grid is
    doubled once if the narrowest transmission resonance spans fewer than
    four cells.
    """
    lo, hi = map(float, window)
    if not 0 < lo < hi:
        raise ValueError(f"window must satisfy 0 < lo < hi, got {window}")
    points = max(int(points), 2048)
    if zeta == 0:
        return MagicWavevectors((), (lo, hi), points)

    x = np.linspace(lo, hi, points)
    if _narrowest_peak_cells(_transmission(stack, x)) < 4:
        points = 2 * points - 1
        x = np.linspace(lo, hi, points)
    phi = _normalized_phi(stack, x, zeta, model)

    def f(xx):
        return float(_normalized_phi(stack, xx, zeta, model)[0])

    roots = []
    for i in range(points - 1):
        a, b = phi[i], phi[i + 1]
        if a == 0.0:
            roots.append(float(x[i]))
        elif a * b < 0:
            roots.append(brentq(f, x[i], x[i + 1], xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps))
    if phi[-1] == 0.0:
        roots.append(float(x[-1]))
    return MagicWavevectors(tuple(sorted(roots)), (lo, hi), points)


def discrimination_report(
    stack_a: CoatingStack,
    stack_b: CoatingStack,
    zeta: float,
    window: tuple[float, float] = DEFAULT_WINDOW,
    model: StrainModel = StrainModel.PHOTOELASTIC,
    points: int = DEFAULT_POINTS,
) -> DiscriminationReport:
    """Operating points that null one mirror while leaving the other visible.

    ``k_minus_B`` is the lowest magic root of B and ``k_plus_A`` the highest
    of A. Cross noise is the other mirror's ``|total phase|`` there, in units
    of ``|piston(k0)|``.
    """
    if not math.isclose(stack_a.k0, stack_b.k0, rel_tol=1e-12):
        raise ValueError("stacks must share the same reference wavevector k0")
    roots_a = find_magic_wavevectors(stack_a, zeta, window, model, points).roots
    roots_b = find_magic_wavevectors(stack_b, zeta, window, model, points).roots
    if not roots_a:
        raise NoMagicRootError(f"mirror A has no magic wavevector in {window}")
    if not roots_b:
        raise NoMagicRootError(f"mirror B has no magic wavevector in {window}")
    k_minus_b, k_plus_a = roots_b[0], roots_a[-1]

    def abs_phi(stack, xx):
        return float(abs(_normalized_phi(stack, xx, zeta, model)[0]))

    return DiscriminationReport(
        k_minus_B=k_minus_b,
        k_plus_A=k_plus_a,
        cross_noise_A_at_kB=abs_phi(stack_a, k_minus_b),
        cross_noise_B_at_kA=abs_phi(stack_b, k_plus_a),
        residual_at_k0=(abs_phi(stack_a, 1.0), abs_phi(stack_b, 1.0)),
    )


def eigenmode_rms(mode: EigenmodeSpec, temperature: float) -> float:
    """Equipartition rms surface displacement of one mode, in meters."""
    if temperature < 0:
        raise ValueError(f"temperature must be >= 0, got {temperature}")
    return math.sqrt(k_B * temperature / (mode.M0 * mode.omega0**2))
