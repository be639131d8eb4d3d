"""Reference evaluations independent of the library's adaptive quadrature."""
import math

import numpy as np

# 40 graded panels of 10 Gauss-Legendre nodes on [0, 10]: 400 nodes in total
_EDGES = np.concatenate([[0.0], np.geomspace(1e-4, 10.0, 40)])
_X, _W = np.polynomial.legendre.leggauss(10)
_LO, _HI = _EDGES[:-1, None], _EDGES[1:, None]
U = (0.5 * (_HI - _LO) * _X + 0.5 * (_HI + _LO)).ravel()
WEIGHTS = (0.5 * (_HI - _LO) * _W).ravel()
assert U.size == 400


def kernel(a, b, k, sigma):
    # written out independently of thermnoise.fdt.kernel_f
    zm, zp = abs(a - b), a + b
    first = np.exp(-k * zm) * (3 - 4 * sigma + k * zm)
    second = np.exp(-k * zp) * (5 - 12 * sigma + 8 * sigma * sigma + k * (3 - 4 * sigma) * zp + 2 * k * k * a * b)
    return first + second


def N_gauss_legendre(a, b, sigma):
    """N at depths a, b given in units of w0."""
    vals = np.exp(-U**2) * kernel(a, b, 2 * U, sigma)
    return float(np.dot(WEIGHTS, vals)) / (4 * math.sqrt(math.pi) * (1 - sigma) ** 2)
