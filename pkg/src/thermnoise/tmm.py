"""Normal-incidence transfer matrices for lossless dielectric stacks.

Phase convention: the characteristic matrix of a film is
``[[cos eta, i sin eta / n], [i n sin eta, cos eta]]`` and the amplitude
reflectance is ``r = (n0 - Y) / (n0 + Y)`` with ``Y`` the admittance seen at
the front surface. A bare vacuum/dielectric interface then has ``r < 0``
(phase pi), and the reflection phase *decreases* as optical path is added
behind the front surface, so that a rigid displacement ``q`` of the mirror
into the substrate shifts the phase by ``-2 k q``.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .model import CoatingStack, Layer

__all__ = [
    "NumericalError",
    "UnwrapError",
    "ConvergenceError",
    "StrainModel",
    "ComplexReflectance",
    "layer_matrix",
    "amplitude_reflectance",
    "stack_reflectance",
    "reflection_phase_scan",
    "strain_factors",
    "apply_axial_strain",
    "dgamma_deps",
    "dgamma_deps_array",
]

MAX_LINEAR_STRAIN = 1e-2


class NumericalError(RuntimeError):
    """A numerical procedure failed to reach its stated accuracy."""


class UnwrapError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    pass


class StrainModel(str, Enum):
    """How a uniform axial strain acts on each layer.

    ``GEOMETRIC``: thickness scales by ``1 + eps``, index fixed.
    ``PHOTOELASTIC``: single-pass phase scales by ``1 + eps * (1 - n**2 * p12 / 2)``.
    """

    GEOMETRIC = "geometric"
    PHOTOELASTIC = "photoelastic"


@dataclass(frozen=True)
class ComplexReflectance:
    r: complex
    gamma: float
    T: float


def layer_matrix(layer: Layer, k: float, k0: float) -> np.ndarray:
    """Characteristic matrix of a homogeneous film at vacuum wavevector ``k``."""
    eta = layer.eta0 * (k / k0)
    n = layer.material.n
    c, s = np.cos(eta), np.sin(eta)
    return np.array([[c, 1j * s / n], [1j * n * s, c]], dtype=complex)


def _admittance_pair(stack: CoatingStack, k, scales=None):
    """Return (B, C) with ``[B, C] = M_1 ... M_N [1, n_s]`` for an array of ``k``."""
    x = np.asarray(k, dtype=float) / stack.k0
    B = np.ones_like(x, dtype=complex)
    C = np.full_like(x, stack.substrate.n, dtype=complex)
    if scales is None:
        scales = np.ones(len(stack.layers))
    # multiply from the substrate side outwards
    for layer, s in zip(reversed(stack.layers), reversed(scales)):
        eta = layer.eta0 * s * x
        n = layer.material.n
        c, sn = np.cos(eta), np.sin(eta)
        B, C = c * B + (1j * sn / n) * C, (1j * n * sn) * B + c * C
    return B, C


def amplitude_reflectance(stack: CoatingStack, k, scales=None):
    """Complex amplitude reflectance, vectorized over ``k``.

    ``scales`` optionally multiplies each layer's phase thickness.
    """
    B, C = _admittance_pair(stack, k, scales)
    n0 = stack.ambient.n
    return (n0 * B - C) / (n0 * B + C)


def _transmittance(stack: CoatingStack, B, C):
    # from the transmitted amplitude, independent of |r|
    n0, ns = stack.ambient.n, stack.substrate.n
    return 4.0 * n0 * ns / np.abs(n0 * B + C) ** 2


def stack_reflectance(stack: CoatingStack, k: float) -> ComplexReflectance:
    if not k > 0:
        raise ValueError(f"k must be > 0, got {k}")
    B, C = _admittance_pair(stack, k)
    n0 = stack.ambient.n
    r = complex((n0 * B - C) / (n0 * B + C))
    return ComplexReflectance(r, float(np.angle(r)), float(_transmittance(stack, B, C)))


def reflection_phase_scan(stack: CoatingStack, k_grid) -> list[tuple[float, float, float]]:
    """Continuously unwrapped reflection phase and transmission along ``k_grid``.

    Each step is taken as the sum of the two wrapped half steps through the
    interval midpoint; a refined step that still reaches pi means the grid
    is too coarse to unwrap unambiguously and :class:`UnwrapError` is raised.
    """
    k = np.asarray(k_grid, dtype=float)
    if k.ndim != 1 or k.size == 0:
        raise ValueError("k_grid must be a non-empty 1-d sequence")
    if np.any(k <= 0):
        raise ValueError("k_grid must be positive")
    if np.any(np.diff(k) <= 0):
        raise ValueError("k_grid must be strictly ascending")

    B, C = _admittance_pair(stack, k)
    n0 = stack.ambient.n
    r = (n0 * B - C) / (n0 * B + C)
    T = _transmittance(stack, B, C)
    gamma = np.angle(r)
    if k.size > 1:
        r_mid = amplitude_reflectance(stack, 0.5 * (k[1:] + k[:-1]))
        step = np.angle(r_mid * np.conj(r[:-1])) + np.angle(r[1:] * np.conj(r_mid))
        bad = np.nonzero(np.abs(step) >= np.pi)[0]
        if bad.size:
            i = bad[0]
            raise UnwrapError(
                f"phase jumps by {step[i]:.3f} rad between "
                f"k={k[i]:.9g} and k={k[i + 1]:.9g}; refine the grid"
            )
        gamma = np.concatenate([[gamma[0]], gamma[0] + np.cumsum(step)])
    return [(float(a), float(b), float(c)) for a, b, c in zip(k, gamma, T)]


def strain_factors(stack: CoatingStack, model: StrainModel = StrainModel.PHOTOELASTIC) -> np.ndarray:
    """Per-layer d(ln eta)/d(eps) for the chosen strain model."""
    model = StrainModel(model)
    if model is StrainModel.GEOMETRIC:
        return np.ones(len(stack.layers))
    return np.array([1.0 - layer.material.n**2 * layer.material.p12 / 2 for layer in stack.layers])


def apply_axial_strain(
    stack: CoatingStack, eps: float, model: StrainModel = StrainModel.PHOTOELASTIC
) -> CoatingStack:
    """Return the stack with every layer's phase thickness strained by ``eps``."""
    if abs(eps) >= MAX_LINEAR_STRAIN:
        raise ValueError(f"|eps|={abs(eps):g} outside the linear regime (< {MAX_LINEAR_STRAIN:g})")
    if eps == 0:
        return stack
    factors = strain_factors(stack, model)
    layers = tuple(
        replace(layer, eta0=layer.eta0 * (1.0 + eps * f)) for layer, f in zip(stack.layers, factors)
    )
    return replace(stack, layers=layers)


def dgamma_deps_array(
    stack: CoatingStack,
    k,
    model: StrainModel = StrainModel.PHOTOELASTIC,
    h0: float = 1e-7,
    rtol: float = 1e-6,
    atol: float = 1e-6,
    max_halvings: int = 8,
) -> np.ndarray:
    """Strain derivative of the reflection phase, vectorized over ``k``.

    Central differences with step halving until two successive estimates
    agree to ``rtol`` (or ``atol`` rad per unit strain). The phase
    difference is taken as ``arg(r(+h) * conj(r(-h)))`` so both sides are
    on the same branch.
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if np.any(k <= 0):
        raise ValueError("k must be > 0")
    if not stack.layers:
        return np.zeros_like(k)
    factors = strain_factors(stack, model)

    def central(h, kk):
        rp = amplitude_reflectance(stack, kk, 1.0 + h * factors)
        rm = amplitude_reflectance(stack, kk, 1.0 - h * factors)
        return np.angle(rp * np.conj(rm)) / (2 * h)

    h = h0
    prev = central(h, k)
    out = np.empty_like(k)
    todo = np.arange(k.size)
    for _ in range(max_halvings):
        h /= 2
        cur = central(h, k[todo])
        done = np.abs(cur - prev) <= np.maximum(rtol * np.maximum(np.abs(cur), np.abs(prev)), atol)
        out[todo[done]] = cur[done]
        older = prev[~done]
        todo, prev = todo[~done], cur[~done]
        if todo.size == 0:
            return out
    raise ConvergenceError(
        f"dGamma/deps did not converge at k={k[todo[0]]:.9g}: "
        f"last estimates {older[0]:.9g}, {prev[0]:.9g}"
    )


def dgamma_deps(stack: CoatingStack, k: float, model: StrainModel = StrainModel.PHOTOELASTIC, **kw) -> float:
    """dGamma/deps at a single wavevector, in radians per unit strain."""
    return float(dgamma_deps_array(stack, k, model, **kw)[0])
