"""Mellin-Barnes machinery.

A MellinKernel is a signed product/quotient of gamma factors of a complex
variable s, split into four families named for where their poles open and
whether they sit above or below the fraction bar:

* up_left    Gamma(b - beta*s)      numerator, right-opening poles
* up_right   Gamma(1 - a + alpha*s) numerator, left-opening poles
* down_left  Gamma(1 - b + beta*s)  denominator
* down_right Gamma(a - alpha*s)     denominator

plus a ``base`` constant contributing base**s.  Evaluation composes
log-gamma values and exponentiates once.  The integral

    (1 / 2 pi i) * integral over L of  K(s) z^s ds

is computed by adaptive quadrature over a truncated vertical (possibly
indented) line, with residue summation over either pole family available as
an independent route.
"""

import logging
import math
import os
import threading
from dataclasses import dataclass, replace
from enum import Enum

import mpmath
import numpy as np

from .cgamma import (POLE_TOLERANCE, asymptotic_log_abs_gamma, detect_pole,
                     log_gamma_grid, log_gamma_unchecked)
from .errors import (ContourError, ConvergenceError, HigherOrderPoleError,
                     NonConvergentSeriesError, ParameterError, PoleError,
                     QuadratureError)
from .quadrature import integrate_adaptive

log = logging.getLogger(__name__)

_EPS = np.finfo(float).eps
_T_MAX = 6000.0
_NEG_INF = complex(float("-inf"), 0.0)
_MP_LOCK = threading.Lock()  # mpmath precision context is process-global


def _max_nodes_default():
    return int(os.environ.get("MB_MAX_NODES", "200000"))


@dataclass(frozen=True)
class GammaFactor:
    coeff: complex
    mult: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "coeff", complex(self.coeff))
        object.__setattr__(self, "mult", float(self.mult))
        if self.mult <= 0:
            raise ParameterError("gamma-factor multiplier must be positive",
                                 mult=self.mult)


def _factors(items):
    out = []
    for it in items:
        if isinstance(it, GammaFactor):
            out.append(it)
        else:
            coeff, mult = it
            out.append(GammaFactor(coeff, mult))
    return tuple(out)


@dataclass(frozen=True)
class MellinKernel:
    up_left: tuple = ()
    up_right: tuple = ()
    down_left: tuple = ()
    down_right: tuple = ()
    base: complex = 1.0

    def __post_init__(self):
        object.__setattr__(self, "up_left", _factors(self.up_left))
        object.__setattr__(self, "up_right", _factors(self.up_right))
        object.__setattr__(self, "down_left", _factors(self.down_left))
        object.__setattr__(self, "down_right", _factors(self.down_right))
        object.__setattr__(self, "base", complex(self.base))
        if self.base == 0:
            raise ParameterError("kernel base must be nonzero")

    @property
    def base_log(self):
        """Principal branch of log(base); the recorded c^x branch choice."""
        return complex(np.log(complex(self.base)))

    @property
    def is_g(self):
        return all(f.mult == 1.0 for f in self.up_left + self.up_right
                   + self.down_left + self.down_right)

    @property
    def orders(self):
        """(m, n, p, q) reconstructed from the factor-family sizes."""
        m, n = len(self.up_left), len(self.up_right)
        return (m, n, n + len(self.down_right), m + len(self.down_left))

    def simplify(self, tol=1e-12):
        """Cancel numerator/denominator factor pairs of identical shape.

        Gamma(1 - a + alpha s) against Gamma(1 - b + beta s) and
        Gamma(b - beta s) against Gamma(a - alpha s), whenever the
        parameters agree within ``tol``; the represented function is
        unchanged because the cancelled factors are equal.
        """
        def cancel(num, den):
            num, den = list(num), list(den)
            kept = []
            for f in num:
                hit = next((g for g in den
                            if abs(g.coeff - f.coeff) < tol
                            and abs(g.mult - f.mult) < tol), None)
                if hit is not None:
                    den.remove(hit)
                else:
                    kept.append(f)
            return tuple(kept), tuple(den)

        ur, dl = cancel(self.up_right, self.down_left)
        ul, dr = cancel(self.up_left, self.down_right)
        return MellinKernel(ul, ur, dl, dr, self.base)

    def to_json(self):
        def fam(fs):
            return [[f.coeff.real, f.coeff.imag, f.mult] for f in fs]
        return {"up_left": fam(self.up_left), "up_right": fam(self.up_right),
                "down_left": fam(self.down_left),
                "down_right": fam(self.down_right),
                "base": [self.base.real, self.base.imag]}


def _signed_terms(kernel):
    """(coeff, slope, sign) per gamma factor: Gamma(coeff + slope*s)."""
    terms = []
    for f in kernel.up_left:
        terms.append((f.coeff, -f.mult, +1))
    for f in kernel.up_right:
        terms.append((1.0 - f.coeff, f.mult, +1))
    for f in kernel.down_left:
        terms.append((1.0 - f.coeff, f.mult, -1))
    for f in kernel.down_right:
        terms.append((f.coeff, -f.mult, -1))
    return terms


def kernel_log_grid(kernel, s):
    """Vectorized log of the kernel; no pole checks (see log_gamma_grid)."""
    s = np.asarray(s, dtype=np.complex128)
    out = np.zeros(s.shape, dtype=np.complex128)
    for coeff, slope, sign in _signed_terms(kernel):
        out = out + sign * log_gamma_grid(coeff + slope * s).reshape(s.shape)
    if kernel.base != 1.0:
        out = out + s * kernel.base_log
    return out


def kernel_log_eval(kernel, s):
    """log K(s) for scalar s.

    Raises PoleError when s sits on a numerator-gamma pole; a denominator
    pole (a zero of the kernel) yields -inf instead.
    """
    s = complex(s)
    total = 0.0 + 0.0j
    for coeff, slope, sign in _signed_terms(kernel):
        w = coeff + slope * s
        report = detect_pole(w)
        if report.is_pole:
            if sign > 0:
                raise PoleError("kernel evaluated at a numerator pole",
                                s=s, argument=w)
            return _NEG_INF
        total += sign * log_gamma_unchecked(w)
    return total + s * kernel.base_log


def kernel_eval(kernel, s):
    """K(s) itself; exponentiation happens only here."""
    value = kernel_log_eval(kernel, s)
    if value.real == float("-inf"):
        return 0.0 + 0.0j
    return complex(np.exp(value))


# --------------------------------------------------------------------------
# pole bookkeeping


@dataclass(frozen=True)
class Pole:
    location: complex
    order: int
    sources: tuple  # of (family, factor_index, ladder_index)


def _raw_poles(factors, family, count, left):
    raw = []
    for idx, f in enumerate(factors):
        for l in range(count):
            if left:
                loc = (f.coeff - 1.0 - l) / f.mult
            else:
                loc = (f.coeff + l) / f.mult
            raw.append((complex(loc), (family, idx, l)))
    return raw


def _cluster(raw, descending):
    raw.sort(key=lambda it: (it[0].real, it[0].imag))
    poles = []
    for loc, src in raw:
        if poles and abs(loc - poles[-1][0]) <= POLE_TOLERANCE:
            poles[-1][1].append(src)
        else:
            poles.append([loc, [src]])
    out = [Pole(loc, len(srcs), tuple(srcs)) for loc, srcs in poles]
    if descending:
        out.reverse()
    return out


def pole_families(kernel, count):
    """First ``count`` poles per factor, merged and ordered by opening side.

    Returns (left_opening, right_opening); left-opening poles come from the
    Gamma(1 - a + alpha s) factors and are listed moving leftward,
    right-opening ones from Gamma(b - beta s), moving rightward.  Poles
    where distinct factors collide carry order > 1.
    """
    if count < 1:
        raise ParameterError("count must be >= 1", count=count)
    right = _cluster(_raw_poles(kernel.up_left, "up_left", count, False),
                     descending=False)
    left = _cluster(_raw_poles(kernel.up_right, "up_right", count, True),
                    descending=True)
    return left, right


def find_pole_collision(kernel, tol=POLE_TOLERANCE):
    """A point where the two opening families collide, or None.

    Only finitely many collisions are possible because right-opening
    ladders increase in real part and left-opening ones decrease, so the
    search is exact.
    """
    for bf in kernel.up_left:
        for af in kernel.up_right:
            head_gap = ((af.coeff - 1.0) / af.mult - bf.coeff / bf.mult).real
            imag_gap = abs((bf.coeff / bf.mult).imag
                           - ((af.coeff - 1.0) / af.mult).imag)
            if imag_gap > tol:
                continue
            lim = bf.mult * head_gap
            l1 = 0
            while l1 <= lim + tol:
                s = (bf.coeff + l1) / bf.mult
                l2 = (af.coeff - 1.0) - af.mult * s
                if abs(l2.imag) <= tol and l2.real >= -tol \
                        and abs(l2.real - round(l2.real)) <= tol:
                    return s
                l1 += 1
    return None


# --------------------------------------------------------------------------
# contours


@dataclass(frozen=True)
class Detour:
    center: complex
    radius: float
    side: str  # "left" or "right": which way the semicircle bulges

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ParameterError("detour side must be 'left' or 'right'",
                                 side=self.side)
        if self.radius <= 0:
            raise ParameterError("detour radius must be positive",
                                 radius=self.radius)


@dataclass(frozen=True)
class Contour:
    kind: str  # "vertical" or "indented"
    anchor: float
    truncation: float
    detours: tuple = ()

    def __post_init__(self):
        if self.kind not in ("vertical", "indented"):
            raise ParameterError("contour kind must be vertical or indented",
                                 kind=self.kind)
        if self.truncation <= 0:
            raise ParameterError("truncation height must be positive",
                                 truncation=self.truncation)
        object.__setattr__(self, "detours", tuple(self.detours))
        ds = self.detours
        for i in range(len(ds)):
            for j in range(i + 1, len(ds)):
                if abs(ds[i].center - ds[j].center) < ds[i].radius + ds[j].radius:
                    raise ParameterError("detour disks must be disjoint")

    def to_json(self):
        return {"kind": self.kind, "anchor": self.anchor,
                "truncation": self.truncation,
                "detours": [[d.center.real, d.center.imag, d.radius, d.side]
                            for d in self.detours]}


def decay_rate(kernel):
    """Exponential decay rate kappa of |K| along a vertical line."""
    total = 0.0
    for _, slope, sign in _signed_terms(kernel):
        total += sign * abs(slope)
    return 0.5 * np.pi * total


def _algebraic_exponent(kernel, sigma):
    """Coefficient of log|y| in log|K(sigma + iy)| for large |y|."""
    total = 0.0
    for coeff, slope, sign in _signed_terms(kernel):
        total += sign * ((coeff + slope * sigma).real - 0.5)
    return total


def contour_window(kernel):
    """Open strip (lo, hi) of anchors separating the two pole families."""
    lo = -math.inf
    hi = math.inf
    for f in kernel.up_right:
        lo = max(lo, ((f.coeff - 1.0) / f.mult).real)
    for f in kernel.up_left:
        hi = min(hi, (f.coeff / f.mult).real)
    return lo, hi


def default_truncation(kernel):
    kappa = decay_rate(kernel)
    if kappa <= 0.05:
        return 120.0
    return float(min(max(30.0, 50.0 / kappa), 400.0))


def _right_pole_res_in(kernel, lo, hi):
    """Real parts of right-opening poles inside (lo, hi)."""
    out = []
    for f in kernel.up_left:
        l = 0
        while True:
            re = ((f.coeff + l) / f.mult).real
            if re >= hi:
                break
            if re > lo:
                out.append(re)
            l += 1
    return sorted(set(out))


def choose_contour(kernel):
    """Deterministic pole-separating contour.

    Anchor at the midpoint of the separation window when it is bounded, at
    window edge -/+ 0.5 when half-infinite.  When the window is empty the
    line is placed just right of every left-opening pole, in the widest gap
    between right-opening pole abscissae, and every right-opening pole left
    of it gets a semicircular detour routing it to the right of the path.
    """
    collision = find_pole_collision(kernel)
    if collision is not None:
        raise ContourError("a pole lies in both families; no contour can "
                           "separate them", location=collision)
    lo, hi = contour_window(kernel)
    trunc = default_truncation(kernel)
    if lo == -math.inf and hi == math.inf:
        return Contour("vertical", 0.0, trunc)
    if lo + 1e-9 < hi:
        if lo == -math.inf:
            anchor = hi - 0.5
        elif hi == math.inf:
            anchor = lo + 0.5
        else:
            anchor = 0.5 * (lo + hi)
        return Contour("vertical", float(anchor), trunc)

    # empty window: anchor inside (lo, lo + 1], clear of every left-opening
    # pole, placed in the widest gap between right-opening abscissae
    cuts = _right_pole_res_in(kernel, lo, lo + 1.0)
    bounds = [lo] + cuts + [lo + 1.0]
    widths = [bounds[i + 1] - bounds[i] for i in range(len(bounds) - 1)]
    i_best = int(np.argmax(widths))
    anchor = 0.5 * (bounds[i_best] + bounds[i_best + 1])

    crossed = []
    for idx, f in enumerate(kernel.up_left):
        l = 0
        while True:
            loc = (f.coeff + l) / f.mult
            if loc.real >= anchor:
                break
            crossed.append((complex(loc), idx, l))
            l += 1
    locs = [c[0] for c in crossed]
    for i in range(len(locs)):
        for j in range(i + 1, len(locs)):
            if abs(locs[i] - locs[j]) <= POLE_TOLERANCE:
                raise ContourError("crossed pole has order > 1; indentation "
                                   "cannot disambiguate", location=locs[i])
    min_gap = math.inf
    for i in range(len(locs)):
        for j in range(i + 1, len(locs)):
            min_gap = min(min_gap, abs(locs[i] - locs[j]))
        min_gap = min(min_gap, abs(locs[i].real - anchor))
    radius = min(0.25, 0.45 * min_gap) if locs else 0.25
    detours = tuple(Detour(c[0], radius, "left") for c in crossed)
    return Contour("indented", float(anchor), trunc, detours)


# --------------------------------------------------------------------------
# convergence classification


class ConvergenceClass(Enum):
    ABSOLUTE = "absolute"
    CONDITIONAL = "conditional"
    DIVERGENT = "divergent"


def _effective_arg(kernel, z, branch_k=0):
    z = complex(z)
    return math.atan2(z.imag, z.real) + 2.0 * math.pi * branch_k \
        + kernel.base_log.imag


def convergence_class(kernel, z, branch_k=0):
    """Classify the contour integral of K(s) (base z)^s.

    Compares the exponential decay rate kappa of |K| against |arg| of the
    effective argument; on the boundary the algebraic falloff along the
    default contour decides between conditional convergence and divergence.
    """
    z = complex(z)
    if z == 0:
        return ConvergenceClass.DIVERGENT
    kappa = decay_rate(kernel)
    delta = kappa - abs(_effective_arg(kernel, z, branch_k))
    if delta > 1e-12:
        return ConvergenceClass.ABSOLUTE
    if delta < -1e-12:
        return ConvergenceClass.DIVERGENT
    try:
        sigma = choose_contour(kernel).anchor
    except ContourError:
        sigma = 0.0
    if _algebraic_exponent(kernel, sigma) < -1e-12:
        return ConvergenceClass.CONDITIONAL
    return ConvergenceClass.DIVERGENT


# --------------------------------------------------------------------------
# evaluation results


@dataclass(frozen=True)
class EvalResult:
    value: complex
    err_estimate: float
    nodes_used: int
    contour: Contour = None
    method: str = "quadrature"
    arg_branch: int = 0

    def to_json(self):
        out = {"value": [self.value.real, self.value.imag],
               "err_estimate": self.err_estimate,
               "nodes_used": self.nodes_used,
               "method": self.method,
               "arg_branch": self.arg_branch}
        if self.contour is not None:
            out["contour"] = self.contour.to_json()
        return out


# --------------------------------------------------------------------------
# residues


def _residue_term_log(kernel, family, idx, l, logz):
    """(parity_sign, log_magnitude) of the residue of K(s) z^s at one pole."""
    factors = kernel.up_left if family == "up_left" else kernel.up_right
    f = factors[idx]
    if family == "up_left":
        s_p = (f.coeff + l) / f.mult
        orient = -1.0
    else:
        s_p = (f.coeff - 1.0 - l) / f.mult
        orient = +1.0
    reduced_terms = []
    for coeff, slope, sign in _signed_terms(kernel):
        reduced_terms.append((coeff, slope, sign))
    # drop the owning factor once
    own = (f.coeff, -f.mult, +1) if family == "up_left" \
        else (1.0 - f.coeff, f.mult, +1)
    reduced_terms.remove(own)
    total = 0.0 + 0.0j
    for coeff, slope, sign in reduced_terms:
        w = coeff + slope * s_p
        rep = detect_pole(w)
        if rep.is_pole:
            if sign > 0:
                raise PoleError("pole of another numerator factor at a "
                                "residue location", s=s_p, argument=w)
            return 1.0, _NEG_INF, s_p
        total += sign * log_gamma_unchecked(w)
    total += s_p * (kernel.base_log + logz)
    total -= math.lgamma(l + 1) + math.log(f.mult)
    parity = orient * (1.0 if l % 2 == 0 else -1.0)
    return parity, total, s_p


def _residue_value(kernel, family, idx, l, logz):
    parity, logmag, _ = _residue_term_log(kernel, family, idx, l, logz)
    if logmag.real == float("-inf"):
        return 0.0 + 0.0j
    return parity * complex(np.exp(logmag))


def _ordered_pole_sources(kernel, side, n_max):
    family = "up_left" if side == "right" else "up_right"
    factors = kernel.up_left if side == "right" else kernel.up_right
    items = []
    for idx, f in enumerate(factors):
        for l in range(n_max):
            if side == "right":
                loc = (f.coeff + l) / f.mult
                key = (loc.real, loc.imag, idx)
            else:
                loc = (f.coeff - 1.0 - l) / f.mult
                key = (-loc.real, loc.imag, idx)
            items.append((key, complex(loc), family, idx, l))
    items.sort(key=lambda it: it[0])
    return items


def _residue_series_mp(kernel, z, side, n_max, tol, branch_k, dps):
    """High-precision re-summation used when double arithmetic cancels."""
    with _MP_LOCK, mpmath.workdps(dps):
        zz = mpmath.mpmathify(complex(z))
        logz = mpmath.log(zz) + 2j * mpmath.pi * branch_k
        logbase = mpmath.log(mpmath.mpmathify(complex(kernel.base)))

        def gam(c, d, s):
            return mpmath.gamma(mpmath.mpmathify(complex(c))
                                + mpmath.mpmathify(float(d)) * s)

        total = mpmath.mpc(0)
        ok = 0
        nterms = 0
        last = mpmath.mpf(0)
        for _, loc, family, idx, l in _ordered_pole_sources(kernel, side, n_max):
            factors = kernel.up_left if family == "up_left" else kernel.up_right
            f = factors[idx]
            s_p = mpmath.mpmathify(complex(loc))
            num = mpmath.mpc(1)
            den = mpmath.mpc(1)
            for j, g in enumerate(kernel.up_left):
                if family == "up_left" and j == idx:
                    continue
                num *= gam(g.coeff, -g.mult, s_p)
            for j, g in enumerate(kernel.up_right):
                if family == "up_right" and j == idx:
                    continue
                num *= gam(1.0 - g.coeff, g.mult, s_p)
            for g in kernel.down_left:
                den *= gam(1.0 - g.coeff, g.mult, s_p)
            for g in kernel.down_right:
                den *= gam(g.coeff, -g.mult, s_p)
            orient = -1 if family == "up_left" else 1
            parity = orient * (1 if l % 2 == 0 else -1)
            term = (parity * num / den / mpmath.factorial(l)
                    / mpmath.mpf(f.mult)
                    * mpmath.exp(s_p * (logz + logbase)))
            total += term
            nterms += 1
            last = abs(term)
            if last < tol * 1e-3 * max(abs(total), mpmath.mpf(1e-300)):
                ok += 1
                if ok >= 3:
                    break
            else:
                ok = 0
        sign = -1.0 if side == "right" else 1.0
        value = complex(sign * total)
        err = float(last) + 5e-16 * abs(value)
        return value, err, nterms, ok >= 3


def residue_series(kernel, z, side, n_max=400, tol=1e-12, branch_k=0):
    """Evaluate the contour integral by closing around one pole family.

    Closing right (around the right-opening poles) contributes -sum of
    residues, closing left +sum.  Terms are accumulated in ladder order and
    summation stops after three consecutive terms below tol * |partial|.
    When alternating cancellation makes double precision insufficient the
    sum is redone with mpmath at a working precision sized to the measured
    condition number.
    """
    z = complex(z)
    if z == 0:
        raise ConvergenceError("argument must be nonzero")
    if side not in ("left", "right"):
        raise ParameterError("side must be 'left' or 'right'", side=side)
    if n_max <= 0:
        raise NonConvergentSeriesError("no residue terms accumulated",
                                       n_max=n_max)
    sources = _ordered_pole_sources(kernel, side, n_max)
    if not sources:
        raise NonConvergentSeriesError("no poles open on that side",
                                       side=side)
    for i in range(1, len(sources)):
        if abs(sources[i][1] - sources[i - 1][1]) <= POLE_TOLERANCE:
            raise HigherOrderPoleError("coincident poles on the chosen side",
                                       location=sources[i][1])
    logz = complex(np.log(z)) + 2j * np.pi * branch_k

    total = 0.0 + 0.0j
    abs_sum = 0.0
    ok = 0
    nterms = 0
    last = 0.0
    converged = False
    for _, loc, family, idx, l in sources:
        try:
            term = _residue_value(kernel, family, idx, l, logz)
        except PoleError as exc:
            raise HigherOrderPoleError(
                "residue location collides with another pole family",
                location=loc) from exc
        total += term
        last = abs(term)
        abs_sum += last
        nterms += 1
        if not math.isfinite(last):
            raise NonConvergentSeriesError("residue terms overflow",
                                           terms=nterms)
        if last < tol * max(abs(total), 1e-300):
            ok += 1
            if ok >= 3:
                converged = True
                break
        else:
            ok = 0
    if not converged:
        raise NonConvergentSeriesError("residue series did not settle",
                                       terms=nterms,
                                       last_term=last)
    sign = -1.0 if side == "right" else 1.0
    value = sign * total
    cancel = abs_sum / max(abs(value), 1e-300)
    err = last + _EPS * abs_sum * max(10.0, nterms)
    if err > tol * max(abs(value), 1e-300) and cancel > 1e3:
        dps = 22 + int(math.log10(cancel)) + 6
        log.debug("residue series escalating to mpmath dps=%d", dps)
        value, err, nterms, settled = _residue_series_mp(
            kernel, z, side, n_max, tol, branch_k, dps)
        if not settled:
            raise NonConvergentSeriesError("residue series did not settle",
                                           terms=nterms)
    return EvalResult(value=value, err_estimate=float(err), nodes_used=nterms,
                      contour=None, method="residues_" + side,
                      arg_branch=branch_k)


# --------------------------------------------------------------------------
# contour quadrature


def _log_mag_estimate(kernel, sigma, y, logz):
    """Asymptotic log|K(sigma + iy) z^s| used for truncation bounds."""
    total = sigma * logz.real - y * (logz.imag + kernel.base_log.imag) \
        + sigma * kernel.base_log.real
    for coeff, slope, sign in _signed_terms(kernel):
        a = (complex(coeff) + slope * sigma).real
        eta = complex(coeff).imag + slope * y
        if abs(eta) < 1.0:
            eta = math.copysign(1.0, eta if eta != 0.0 else 1.0)
        total += sign * asymptotic_log_abs_gamma(a, eta)
    return total


def _is_real_symmetric(kernel, z, branch_k):
    z = complex(z)
    if z.imag != 0.0 or z.real <= 0.0 or branch_k != 0:
        return False
    if kernel.base.imag != 0.0 or kernel.base.real <= 0.0:
        return False
    return all(complex(f.coeff).imag == 0.0
               for f in kernel.up_left + kernel.up_right
               + kernel.down_left + kernel.down_right)


def _tail_bound(kernel, sigma, T, logz):
    kappa = decay_rate(kernel)
    arg_eff = logz.imag + kernel.base_log.imag
    bound = 0.0
    for direction in (+1.0, -1.0):
        rate = kappa + direction * arg_eff
        mag = math.exp(min(_log_mag_estimate(kernel, sigma, direction * T,
                                             logz), 700.0))
        if rate > 1e-3:
            bound += mag / rate
        else:
            omega = _algebraic_exponent(kernel, sigma)
            if omega < -1.0:
                bound += mag * T / (-omega - 1.0)
            else:
                return math.inf
    return bound / (2.0 * np.pi)


def _truncation_height(kernel, sigma, logz, tol, t_min):
    ref = -math.inf
    for y in (1.5, 3.0, 6.0, 12.0):
        ref = max(ref, _log_mag_estimate(kernel, sigma, y, logz),
                  _log_mag_estimate(kernel, sigma, -y, logz))
    target = ref + math.log(max(tol, 1e-16)) - 4.6
    T = max(t_min, 8.0)
    while T < _T_MAX:
        if _log_mag_estimate(kernel, sigma, T, logz) <= target and \
                _log_mag_estimate(kernel, sigma, -T, logz) <= target:
            break
        T *= 1.5
    return T


def _detour_correction(kernel, contour, logz):
    """Residue corrections equivalent to the semicircular indentations.

    A right-opening pole routed to the right of the path (detour bulging
    left) subtracts its residue from the plain-line integral; a left-opening
    pole routed left (bulge right) adds it.
    """
    total = 0.0 + 0.0j
    for det in contour.detours:
        family, idx, l = _locate_pole(kernel, det.center)
        res = _residue_value(kernel, family, idx, l, logz)
        total += res if det.side == "right" else -res
    return total


def _locate_pole(kernel, loc, tol=1e-7):
    for idx, f in enumerate(kernel.up_left):
        l = round((complex(loc) * f.mult - f.coeff).real)
        if l >= 0 and abs((f.coeff + l) / f.mult - loc) < tol:
            return "up_left", idx, int(l)
    for idx, f in enumerate(kernel.up_right):
        l = round((f.coeff - 1.0 - complex(loc) * f.mult).real)
        if l >= 0 and abs((f.coeff - 1.0 - l) / f.mult - loc) < tol:
            return "up_right", idx, int(l)
    raise ContourError("detour center is not a pole of the kernel",
                       location=loc)


def integrate(kernel, z, contour=None, tol=1e-10, branch_k=0, max_nodes=None):
    """(1 / 2 pi i) * integral of K(s) z^s over the contour.

    The truncation height grows beyond ``contour.truncation`` when the
    asymptotic tail estimate requires it for the requested tolerance; the
    contour actually used is recorded in the result.  z^s uses the
    principal branch of arg z shifted by 2 pi * branch_k.
    """
    z = complex(z)
    if z == 0:
        raise ConvergenceError("argument must be nonzero")
    cls = convergence_class(kernel, z, branch_k)
    if cls is ConvergenceClass.DIVERGENT:
        raise ConvergenceError("contour integral diverges for this argument",
                               z=z)
    if contour is None:
        contour = choose_contour(kernel)
    if max_nodes is None:
        max_nodes = _max_nodes_default()
    logz = complex(np.log(z)) + 2j * np.pi * branch_k
    sigma = contour.anchor
    T = _truncation_height(kernel, sigma, logz, tol, contour.truncation)
    T = max(T, contour.truncation)
    used = replace(contour, truncation=float(T))

    def integrand(y):
        s = sigma + 1j * np.asarray(y, dtype=np.float64)
        return np.exp(kernel_log_grid(kernel, s) + s * logz)

    folded = _is_real_symmetric(kernel, z, branch_k) and not contour.detours
    if folded:
        quad = integrate_adaptive(integrand, 0.0, T, tol_rel=0.25 * tol,
                                  max_nodes=max_nodes // 2,
                                  initial_panels=max(8, min(256, int(T / 4))))
        value = complex(quad.value).real / np.pi + 0.0j
        quad_err = quad.error / np.pi
    else:
        quad = integrate_adaptive(integrand, -T, T, tol_rel=0.25 * tol,
                                  max_nodes=max_nodes,
                                  initial_panels=max(8, min(512, int(T / 2))))
        value = quad.value / (2.0 * np.pi)
        quad_err = quad.error / (2.0 * np.pi)
    tail = _tail_bound(kernel, sigma, T, logz)
    if contour.detours:
        value = value + _detour_correction(kernel, used, logz)
    err = quad_err + tail
    if not quad.converged and err > 25.0 * tol * max(abs(value), 1e-300):
        raise QuadratureError("node budget exhausted before reaching the "
                              "requested tolerance",
                              nodes=quad.nodes, err=err)
    log.debug("integrate: anchor=%.4g T=%.4g nodes=%d err=%.3g",
              sigma, T, quad.nodes, err)
    return EvalResult(value=complex(value), err_estimate=float(err),
                      nodes_used=quad.nodes, contour=used,
                      method="quadrature", arg_branch=branch_k)
