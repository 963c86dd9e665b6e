"""Polynomial helpers and complex root finding.

Coefficients are ascending (c[k] multiplies x**k) everywhere in this
package.  Root finding runs simultaneous Aberth-Ehrlich iteration with a
companion-matrix fallback; results are verified by reconstructing the
polynomial from its roots.
"""

import numpy as np

from .errors import RootFindingError

RESIDUAL_TOL = 1e-8


def trim(coeffs):
    """Drop exactly-zero trailing coefficients; keeps at least one entry."""
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return np.asarray(c, dtype=np.complex128)


def degree(coeffs):
    return len(trim(coeffs)) - 1


def polyval(coeffs, x):
    c = np.asarray(coeffs, dtype=np.complex128)
    out = np.zeros_like(np.asarray(x, dtype=np.complex128))
    for ck in c[::-1]:
        out = out * x + ck
    return out


def polyder(coeffs):
    c = np.asarray(coeffs, dtype=np.complex128)
    if len(c) <= 1:
        return np.zeros(1, dtype=np.complex128)
    return c[1:] * np.arange(1, len(c))


def from_roots(roots, lead=1.0):
    """Expand lead * prod (x - r) into ascending coefficients."""
    c = np.array([1.0], dtype=np.complex128)
    for r in roots:
        nxt = np.zeros(len(c) + 1, dtype=np.complex128)
        nxt[1:] += c          # x * p(x)
        nxt[:-1] += -r * c    # -r * p(x)
        c = nxt
    return c * complex(lead)


def shift(coeffs, offset):
    """Coefficients of p(x + offset) given those of p(x)."""
    c = np.asarray(coeffs, dtype=np.complex128)
    out = np.zeros_like(c)
    # Horner in the shifted variable
    for ck in c[::-1]:
        carry = np.zeros_like(out)
        carry[1:] = out[:-1]
        carry = carry + offset * out
        out = carry
        out[0] += ck
    return out


def _aberth(coeffs, tol=1e-13, max_iters=120):
    c = np.asarray(coeffs, dtype=np.complex128)
    n = len(c) - 1
    monic = c / c[-1]
    dmonic = polyder(monic)
    center = -monic[-2] / n
    radius = 1.0 + float(np.max(np.abs(monic[:-1])))
    angles = 2.0 * np.pi * (np.arange(n) + 0.25) / n + 0.4
    z = center + radius * np.exp(1j * angles)
    for _ in range(max_iters):
        p = polyval(monic, z)
        dp = polyval(dmonic, z)
        dp = np.where(dp == 0, 1e-300, dp)
        newton = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        denom = 1.0 - newton * inv.sum(axis=1)
        denom = np.where(denom == 0, 1e-300, denom)
        step = newton / denom
        z = z - step
        if np.max(np.abs(step)) < tol * (1.0 + np.max(np.abs(z))):
            return z, True
    return z, False


def _companion(coeffs):
    c = np.asarray(coeffs, dtype=np.complex128)
    return np.roots(c[::-1])


def _sorted(roots):
    r = np.asarray(roots, dtype=np.complex128)
    order = np.lexsort((r.imag, r.real))
    return r[order]


def _reconstruction_residual(coeffs, roots):
    rebuilt = from_roots(roots, coeffs[-1])
    scale = np.max(np.abs(coeffs))
    return float(np.max(np.abs(rebuilt - coeffs)) / scale)


def roots(coeffs, residual_tol=RESIDUAL_TOL):
    """All roots of the polynomial, sorted by (Re, Im).

    Raises RootFindingError when neither Aberth iteration nor the companion
    matrix reproduces the coefficients within ``residual_tol``.
    """
    c = trim(coeffs)
    n = len(c) - 1
    if n == 0:
        return np.zeros(0, dtype=np.complex128)
    if n == 1:
        return np.array([-c[0] / c[1]], dtype=np.complex128)
    z, converged = _aberth(c)
    if converged and _reconstruction_residual(c, z) <= residual_tol:
        return _sorted(z)
    z = _companion(c)
    res = _reconstruction_residual(c, z)
    if res <= residual_tol:
        return _sorted(z)
    raise RootFindingError("root finding failed to reproduce coefficients",
                           residual=res, degree=n)
