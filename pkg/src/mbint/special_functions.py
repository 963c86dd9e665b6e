"""User-facing evaluators: pFq series, Meijer G, Fox H and their bridges.

The generalized hypergeometric series converges for all finite z when
p <= q, on the unit disk when p = q + 1, and nowhere (except z = 0, or when
it terminates) for p > q + 1.  Its Mellin-Barnes counterpart is the G
function of orders (1, p; p, q+1) at argument -z, which extends the series
beyond the disk; both routes are implemented and cross-checked.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import mellin_barnes as mb
from . import polyroots
from .cgamma import POLE_TOLERANCE, detect_pole, log_gamma, pochhammer
from .errors import (ConvergenceError, DivergentSeriesError,
                     InvalidDenominatorError, OrderError, ParameterError,
                     QuadratureError)
from .fde_solutions import coefficient_roots


def _complex_tuple(values):
    return tuple(complex(v) for v in values)


@dataclass(frozen=True)
class GParams:
    m: int
    n: int
    p: int
    q: int
    a: tuple = ()
    b: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "a", _complex_tuple(self.a))
        object.__setattr__(self, "b", _complex_tuple(self.b))
        if not (0 <= self.m <= self.q and 0 <= self.n <= self.p):
            raise ParameterError("orders must satisfy 0 <= m <= q and "
                                 "0 <= n <= p", m=self.m, n=self.n,
                                 p=self.p, q=self.q)
        if len(self.a) != self.p or len(self.b) != self.q:
            raise ParameterError("parameter vector lengths must match p, q",
                                 len_a=len(self.a), len_b=len(self.b))
        for a_j in self.a[:self.n]:
            for b_k in self.b[:self.m]:
                diff = a_j - b_k
                if abs(diff.imag) <= POLE_TOLERANCE and diff.real >= 0.5 \
                        and abs(diff.real - round(diff.real)) <= POLE_TOLERANCE:
                    raise ParameterError(
                        "pole families collide: a_j - b_k is a positive "
                        "integer", a=a_j, b=b_k)

    def to_kernel(self):
        return mb.MellinKernel(
            up_left=tuple(mb.GammaFactor(bk) for bk in self.b[:self.m]),
            up_right=tuple(mb.GammaFactor(aj) for aj in self.a[:self.n]),
            down_left=tuple(mb.GammaFactor(bk) for bk in self.b[self.m:]),
            down_right=tuple(mb.GammaFactor(aj) for aj in self.a[self.n:]))


@dataclass(frozen=True)
class HParams:
    m: int
    n: int
    p: int
    q: int
    a: tuple = ()
    b: tuple = ()
    alpha: tuple = ()
    beta: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "a", _complex_tuple(self.a))
        object.__setattr__(self, "b", _complex_tuple(self.b))
        object.__setattr__(self, "alpha", tuple(float(v) for v in self.alpha))
        object.__setattr__(self, "beta", tuple(float(v) for v in self.beta))
        if not (0 <= self.m <= self.q and 0 <= self.n <= self.p):
            raise ParameterError("orders must satisfy 0 <= m <= q and "
                                 "0 <= n <= p", m=self.m, n=self.n,
                                 p=self.p, q=self.q)
        if len(self.a) != self.p or len(self.alpha) != self.p \
                or len(self.b) != self.q or len(self.beta) != self.q:
            raise ParameterError("parameter vector lengths must match p, q")
        if any(v <= 0 for v in self.alpha + self.beta):
            raise ParameterError("multipliers must be positive")
        kernel = self.to_kernel()
        hit = mb.find_pole_collision(kernel)
        if hit is not None:
            raise ParameterError("pole families collide", location=hit)

    def to_kernel(self):
        return mb.MellinKernel(
            up_left=tuple(mb.GammaFactor(bk, bet) for bk, bet
                          in zip(self.b[:self.m], self.beta[:self.m])),
            up_right=tuple(mb.GammaFactor(aj, alp) for aj, alp
                           in zip(self.a[:self.n], self.alpha[:self.n])),
            down_left=tuple(mb.GammaFactor(bk, bet) for bk, bet
                            in zip(self.b[self.m:], self.beta[self.m:])),
            down_right=tuple(mb.GammaFactor(aj, alp) for aj, alp
                             in zip(self.a[self.n:], self.alpha[self.n:])))


class PFQClass:
    CONVERGES_EVERYWHERE = "converges_everywhere"
    CONVERGES_UNIT_DISK = "converges_unit_disk"
    DIVERGES_NONZERO = "diverges_nonzero"


def classify_pfq(p, q, z):
    """Convergence regime of the series by its order pair alone."""
    if p <= q:
        return PFQClass.CONVERGES_EVERYWHERE
    if p == q + 1:
        return PFQClass.CONVERGES_UNIT_DISK
    return PFQClass.DIVERGES_NONZERO


def _termination_index(a):
    """Smallest series-terminating index from non-positive-integer upper
    parameters, or None."""
    best = None
    for a_j in a:
        rep = detect_pole(a_j)
        if rep.is_pole:
            if best is None or rep.pole_index < best:
                best = rep.pole_index
    return best


def pfq(a, b, z, tol=1e-14, max_terms=100000):
    """Partial sums of the generalized hypergeometric series.

    Terminating upper parameters take precedence over denominator
    validation, so a polynomial case evaluates even when some b_k is a
    non-positive integer further down the ladder.
    """
    a = _complex_tuple(a)
    b = _complex_tuple(b)
    z = complex(z)
    n_stop = _termination_index(a)
    for b_k in b:
        rep = detect_pole(b_k)
        if rep.is_pole and (n_stop is None or rep.pole_index < n_stop):
            raise InvalidDenominatorError(
                "denominator parameter is a non-positive integer", b=b_k)
    if n_stop is None and z != 0:
        regime = classify_pfq(len(a), len(b), z)
        if regime == PFQClass.DIVERGES_NONZERO:
            raise DivergentSeriesError("series diverges for all nonzero z",
                                       p=len(a), q=len(b))
        if regime == PFQClass.CONVERGES_UNIT_DISK and abs(z) >= 1.0:
            raise DivergentSeriesError("series converges only on |z| < 1",
                                       z=z)
    term = 1.0 + 0.0j
    total = term
    ok = 0
    for n in range(max_terms):
        if n_stop is not None and n >= n_stop:
            return total
        factor = z / (n + 1.0)
        for a_j in a:
            factor *= a_j + n
        for b_k in b:
            factor /= b_k + n
        term = term * factor
        total += term
        if abs(term) < tol * max(abs(total), 1e-300):
            ok += 1
            if ok >= 3:
                return total
        else:
            ok = 0
    raise ConvergenceError("series did not settle within the term budget",
                           terms=max_terms)


def series_recurrence_residual(a, b, n):
    """Defect of the term ratio c_{n+1}/c_n against its closed form.

    Both terms are built independently from rising-factorial products, so a
    nonzero residual measures arithmetic noise, not modelling.
    """
    a = _complex_tuple(a)
    b = _complex_tuple(b)
    n = int(n)

    def coeff(k):
        num = 1.0 + 0.0j
        for a_j in a:
            num *= pochhammer(a_j, k)
        den = 1.0 + 0.0j
        for b_k in b:
            den *= pochhammer(b_k, k)
        return num / (den * math.factorial(k))

    c_n = coeff(n)
    c_n1 = coeff(n + 1)
    expected = 1.0 / (n + 1.0)
    for a_j in a:
        expected *= a_j + n
    for b_k in b:
        expected /= b_k + n
    if c_n == 0:
        return float(abs(expected)) if c_n1 != 0 else 0.0
    return float(abs(c_n1 / c_n - expected))


def _residue_side(kernel, z):
    """Which residue family sums to a convergent series, if any."""
    slack = sum(f.mult for f in kernel.up_left + kernel.down_left) \
        - sum(f.mult for f in kernel.up_right + kernel.down_right)
    z_eff = abs(complex(z)) * abs(complex(kernel.base))
    if slack > 1e-12:
        return "right"
    if slack < -1e-12:
        return "left"
    if z_eff < 1.0:
        return "right"
    if z_eff > 1.0:
        return "left"
    return None


def _evaluate_kernel(kernel, z, tol, method=None, branch_k=0):
    """Shared quadrature-first driver with a residue-series fallback."""
    z = complex(z)
    if z == 0:
        raise ParameterError("argument must be nonzero")
    if method == "residues":
        side = _residue_side(kernel, z)
        if side is None:
            raise ConvergenceError("no residue side converges for this "
                                   "argument", z=z)
        return mb.residue_series(kernel, z, side, n_max=800, tol=tol,
                                 branch_k=branch_k)
    cls = mb.convergence_class(kernel, z, branch_k)
    if cls is mb.ConvergenceClass.DIVERGENT:
        raise ConvergenceError("integral representation diverges", z=z)
    if cls is mb.ConvergenceClass.CONDITIONAL and method is None:
        side = _residue_side(kernel, z)
        if side is not None:
            return mb.residue_series(kernel, z, side, n_max=800, tol=tol,
                                     branch_k=branch_k)
    try:
        return mb.integrate(kernel, z, tol=tol, branch_k=branch_k)
    except QuadratureError:
        if method == "quad":
            raise
        side = _residue_side(kernel, z)
        if side is None:
            raise
        return mb.residue_series(kernel, z, side, n_max=800, tol=tol,
                                 branch_k=branch_k)


def meijer_g(params, z, tol=1e-10, method=None, branch_k=0):
    """G function of the given orders by contour integration.

    ``method`` forces "quad" or "residues"; by default quadrature runs when
    the integral converges absolutely and the residue series covers the
    conditional cases.
    """
    if not isinstance(params, GParams):
        raise ParameterError("expected GParams")
    if method not in (None, "quad", "residues"):
        raise ParameterError("method must be 'quad' or 'residues'",
                             method=method)
    return _evaluate_kernel(params.to_kernel(), z, tol, method, branch_k)


def fox_h(params, z, tol=1e-10, method=None, branch_k=0):
    """H function: the G machinery with scaled gamma arguments."""
    if not isinstance(params, HParams):
        raise ParameterError("expected HParams")
    if method not in (None, "quad", "residues"):
        raise ParameterError("method must be 'quad' or 'residues'",
                             method=method)
    return _evaluate_kernel(params.to_kernel(), z, tol, method, branch_k)


def pfq_via_g(a, b, z, tol=1e-10):
    """The series rebuilt from its contour-integral representation.

    Evaluates the (1, p; p, q+1)-order G function at -z with parameters
    (1 - a_j; 0, 1 - b_k) and restores the gamma prefactor.  Upper
    parameters on the pole ladder are rejected, as is z on the positive
    real axis where arg(-z) hits the branch cut.
    """
    a = _complex_tuple(a)
    b = _complex_tuple(b)
    z = complex(z)
    for a_j in a:
        if detect_pole(a_j).is_pole:
            raise ParameterError("upper parameters must avoid 0, -1, -2, ...",
                                 a=a_j)
    for b_k in b:
        if detect_pole(b_k).is_pole:
            raise InvalidDenominatorError(
                "denominator parameter is a non-positive integer", b=b_k)
    if z == 0:
        raise ParameterError("argument must be nonzero")
    w = -z
    if w.imag == 0.0 and w.real < 0.0:
        raise ParameterError("z on the positive real axis sits on the "
                             "arg(-z) branch cut", z=z)
    p, q = len(a), len(b)
    params = GParams(m=1, n=p, p=p, q=q + 1,
                     a=tuple(1.0 - a_j for a_j in a),
                     b=(0.0,) + tuple(1.0 - b_k for b_k in b))
    inner = _evaluate_kernel(params.to_kernel(), w, tol)
    pref_log = sum(log_gamma(b_k) for b_k in b) \
        - sum(log_gamma(a_j) for a_j in a)
    pref = complex(np.exp(pref_log))
    return mb.EvalResult(value=pref * inner.value,
                         err_estimate=abs(pref) * inner.err_estimate,
                         nodes_used=inner.nodes_used,
                         contour=inner.contour, method=inner.method,
                         arg_branch=inner.arg_branch)


# --------------------------------------------------------------------------
# the factored theta-operator equation


@dataclass(frozen=True)
class ThetaOperatorForm:
    """[sign * z * prod (theta - shift) - prod (theta - shift')] u = 0.

    left_factors holds the shifts a_j - 1 of the z-multiplied product,
    right_factors the shifts b_k of the other one; theta = z d/dz.
    """

    sign: int
    left_factors: tuple
    right_factors: tuple
    z_multiplies_left: bool = True


def theta_form_from_g(params):
    """The factored operator annihilating the G function of these orders."""
    sign = (-1) ** ((params.p - params.m - params.n) % 2)
    return ThetaOperatorForm(
        sign=sign,
        left_factors=tuple(a_j - 1.0 for a_j in params.a),
        right_factors=tuple(params.b))


def derive_g_ode(fde, m=0, n=None):
    """Factored operator reached from a first-order FDE through its roots.

    The coefficient roots rho, sigma map to parameters a = 1 + rho,
    b = 1 + sigma; the result is structurally identical to
    theta_form_from_g on those parameters.
    """
    roots = coefficient_roots(fde)
    p = len(roots.rho)
    q = len(roots.sigma)
    if n is None:
        n = p
    if not (0 <= m <= q) or not (0 <= n <= p):
        raise OrderError("split indices out of range", m=m, n=n, p=p, q=q)
    a = tuple(1.0 + r for r in roots.rho)
    b = tuple(1.0 + s for s in roots.sigma)
    sign = (-1) ** ((p - m - n) % 2)
    return ThetaOperatorForm(sign=sign,
                             left_factors=tuple(a_j - 1.0 for a_j in a),
                             right_factors=b)


def _fd_weights(order, offsets):
    """Finite-difference weights for the order-th derivative on offsets."""
    k = len(offsets)
    A = np.vander(np.asarray(offsets, dtype=np.float64), k,
                  increasing=True).T
    rhs = np.zeros(k)
    rhs[order] = math.factorial(order)
    return np.linalg.solve(A, rhs)


def _theta_derivatives(u_of, z, h, max_order):
    """theta^k u at z for k = 0..max_order, Richardson-extrapolated.

    theta = d/dw with w = log z, so derivatives are taken on a log-spaced
    grid z e^{j h}; central stencils at steps h and h/2 combine to fourth
    order.
    """
    radius = max(1, (max_order + 1) // 2 + (max_order % 2 == 0))
    offsets = np.arange(-radius, radius + 1)
    cache = {}

    def u_at(j_half):
        if j_half not in cache:
            cache[j_half] = complex(u_of(z * math.exp(j_half * h * 0.5)))
        return cache[j_half]

    out = [u_at(0)]
    for k in range(1, max_order + 1):
        w = _fd_weights(k, offsets)
        d_h = sum(w[i] * u_at(2 * int(offsets[i])) for i in range(len(offsets)))
        d_h /= h ** k
        d_h2 = sum(w[i] * u_at(int(offsets[i])) for i in range(len(offsets)))
        d_h2 /= (0.5 * h) ** k
        out.append((4.0 * d_h2 - d_h) / 3.0)
    return out


def g_ode_residual(params, z, step=1e-2, tol_eval=1e-12, u=None):
    """Normalized defect of the factored operator applied to the function.

    ``u`` overrides the evaluator (default: meijer_g at tol_eval), which
    lets callers check the operator against closed forms or a zero
    function.  z must be real positive so the log-spaced grid stays on the
    principal branch.
    """
    z = float(z)
    if z <= 0:
        raise ParameterError("differentiation grid requires z > 0", z=z)
    form = theta_form_from_g(params)
    if u is None:
        def u(zz):
            return meijer_g(params, zz, tol=tol_eval).value
    max_order = max(params.p, params.q)
    thetas = _theta_derivatives(u, z, step, max_order)
    left_poly = polyroots.from_roots(form.left_factors)
    right_poly = polyroots.from_roots(form.right_factors)
    left = sum(left_poly[k] * thetas[k] for k in range(len(left_poly)))
    right = sum(right_poly[k] * thetas[k] for k in range(len(right_poly)))
    op = form.sign * z * left - right
    scale = max(abs(z * left), abs(right), abs(thetas[0]), 1e-300)
    return float(abs(op) / scale)
