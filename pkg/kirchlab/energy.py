"""
The energy functional ``I(u) = M(|u|^2)/2 - int F(x, u)``, its gradient in
the Dirichlet inner product and the fibering maps ``h(t) = I(t u)``.
"""
import logging
import math
from collections import namedtuple

import numpy as np

from kirchlab._rtconfig import KL, kl_exc_args
from kirchlab.constants import (
    HYP_M3, HYP_F2, KL_EXC_HYPOTHESIS, KL_EXC_PROJECTION,
    NEHARI_BISECTIONS, NEHARI_MAX_HALVINGS
)
from kirchlab.exceptions import ExpOverflowError, ProjectionError
from kirchlab.grid import (
    Field, dirichlet_energy, integrate, poisson_solve, laplacian_values
)
from kirchlab.hypotheses import SamplingSpec, validate_hypotheses
from kirchlab.model import eval_m, eval_M, eval_f, eval_F

log = logging.getLogger(__name__)

FiberingSample = namedtuple('FiberingSample', ['t', 'h_prime', 'h'])
NehariPoint = namedtuple('NehariPoint',
                         ['t_star', 'field', 'residual', 'flagged'])

QUICK_SAMPLING = dict(t_count=64, s_count=64, pair_count=12)


class EnergyContext(object):
    """
    Bundles the coefficient, the nonlinearity and the grid.

    :param validate: Run the hypothesis validator on construction and
        refuse models with a hard failure. With ``validate=False`` the
        report is still available through :attr:`hypotheses` when
        `sampling` is given, and projection results are flagged when it
        shows (M3) or (f2) failing.
    :raise HypothesisError: if a hard hypothesis fails; the error carries
        the report as ``report``
    """
    __slots__ = ['coef', 'nl', 'grid', 'hypotheses']

    def __init__(self, coef, nl, grid, validate=True, sampling=None):
        self.coef = coef
        self.nl = nl
        self.grid = grid
        self.hypotheses = None
        if validate or sampling is not None:
            spec = sampling or SamplingSpec(**QUICK_SAMPLING)
            report = validate_hypotheses(coef, nl, grid.d, spec)
            self.hypotheses = report
            if validate and report.hard_failures:
                names = [e.name for e in report.hard_failures]
                KL.exc_common(KL_EXC_HYPOTHESIS,
                              'Hard hypothesis failure: ' + ', '.join(names),
                              report=report, failed=names)

    @property
    def uniqueness_at_risk(self):
        rep = self.hypotheses
        if rep is None:
            return False
        return any(e.name in (HYP_M3, HYP_F2) for e in rep.failures)

    def m(self, t):
        return eval_m(self.coef, t)

    def f_values(self, vals):
        return eval_f(self.nl, self.grid.coords, vals)

    def F_values(self, vals):
        return eval_F(self.nl, self.grid.coords, vals)


def energy(ctx, u):
    """
    :return: ``M(|u|^2)/2 - int F(x, u)``
    :raise ExpOverflowError: if the nonlinearity overflows on `u`
    """
    big_e = dirichlet_energy(u)
    return (0.5 * eval_M(ctx.coef, big_e) -
            integrate(lambda x, s: eval_F(ctx.nl, x, s), u))


def gradient(ctx, u, tol=None):
    """
    Riesz representative of ``I'(u)`` in the Dirichlet inner product,
    ``m(|u|^2) u - (-Delta_h)^{-1} f(u)``.
    """
    big_e = dirichlet_energy(u)
    w = poisson_solve(Field(u.grid, ctx.f_values(u.values)), tol)
    return u * eval_m(ctx.coef, big_e) - w


def gradient_norm(g):
    return math.sqrt(dirichlet_energy(g))


def weak_residual(ctx, u):
    """
    Discrete weak-form residual.

    :return: ``(|m(|u|^2)(-Delta_h u) - f(u)|_2, |f(u)|_2)``
    """
    grid = u.grid
    fv = ctx.f_values(u.values)
    res = (eval_m(ctx.coef, dirichlet_energy(u)) *
           laplacian_values(grid, u.values) - fv)
    scale = math.sqrt(grid.cell_area)
    return (scale * float(np.linalg.norm(res)),
            scale * float(np.linalg.norm(fv)))


def fibering_value(ctx, u, t, big_e=None):
    """``h(t) = I(t u)``"""
    if big_e is None:
        big_e = dirichlet_energy(u)
    tv = t * u.values
    return (0.5 * eval_M(ctx.coef, t * t * big_e) -
            u.grid.cell_area * float(np.sum(ctx.F_values(tv))))


def fibering_derivative(ctx, u, t, big_e=None):
    """
    ``h'(t) = m(t^2 E) t E - int f(x, t u) u`` with ``E = |u|^2``.

    :param big_e: Precomputed Dirichlet energy of `u`
    """
    if not t > 0:
        kl_exc_args('Fibering parameter must be positive', obj=t)
    if big_e is None:
        big_e = dirichlet_energy(u)
    vals = u.values
    pairing = u.grid.cell_area * float(np.dot(ctx.f_values(t * vals), vals))
    return eval_m(ctx.coef, t * t * big_e) * t * big_e - pairing


def _projection_error(msg, t_safe, sign, overflow):
    KL.exc_common(KL_EXC_PROJECTION, msg, t_safe=t_safe, sign=sign,
                  overflow=overflow)


def nehari_project(ctx, u, tol=None):
    """
    Scale `u` onto the Nehari manifold.

    The root of ``h'`` is bracketed by doubling (or halving) ``t`` starting
    from 1 and then bisected. Doubling stops once ``t max(u)`` passes the
    overflow cap of the nonlinearity.

    :return: A :class:`NehariPoint`; ``flagged`` is set for sign-changing
        fields and when the model does not guarantee a unique root
    :raise ProjectionError: if no root is bracketed below the cap; the
        error carries ``t_safe``, ``sign`` and ``overflow``
    """
    tol = KL.nehari_tol if tol is None else tol
    if u.is_zero():
        kl_exc_args('Cannot project the zero field')
    umax = u.max()
    if umax <= 0:
        _projection_error('Field has no positive part', 0.0, 1, False)

    flagged = False
    if u.min() < 0:
        flagged = True
        log.warning('nehari: sign-changing ray min=%.6g', u.min())
    if ctx.uniqueness_at_risk:
        flagged = True
        log.warning('nehari: fibering root may not be unique')

    big_e = dirichlet_energy(u)
    t_cap = ctx.nl.s_cap / umax

    def hp(t):
        return fibering_derivative(ctx, u, t, big_e)

    def scale(t):
        return 1.0 + eval_m(ctx.coef, t * t * big_e) * t * big_e

    t = min(1.0, 0.5 * t_cap)
    val = hp(t)
    if abs(val) <= tol * scale(t):
        return NehariPoint(t, u * t, val, flagged)

    if val > 0:
        lo = t
        while True:
            if t >= t_cap:
                _projection_error('No Nehari crossing below the cap',
                                  lo, 1, True)
            t = min(2.0 * t, t_cap)
            try:
                val = hp(t)
            except ExpOverflowError:
                _projection_error('No Nehari crossing below the cap',
                                  lo, 1, True)
            if val <= 0:
                hi = t
                break
            lo = t
    else:
        hi = t
        for _ in range(NEHARI_MAX_HALVINGS):
            t *= 0.5
            val = hp(t)
            if val >= 0:
                lo = t
                break
            hi = t
        else:
            _projection_error('h\' stays negative near zero', t, -1, False)

    best_t, best_v = t, val
    for _ in range(NEHARI_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        val = hp(mid)
        if abs(val) < abs(best_v):
            best_t, best_v = mid, val
        if val == 0:
            break
        if val > 0:
            lo = mid
        else:
            hi = mid

    log.debug('nehari: t_star=%.16g residual=%.3e', best_t, best_v)
    return NehariPoint(best_t, u * best_t, best_v, flagged)


def nehari_energy(ctx, u):
    """
    ``max_{t > 0} I(t u)``, attained at the Nehari point of the ray.
    """
    return energy(ctx, nehari_project(ctx, u).field)


def fiber_table(ctx, u, ts=None, count=64):
    """
    Sample ``h`` and ``h'`` along the ray through `u`.

    :param ts: Explicit parameters; by default ``count`` geometrically
        spaced values up to four times the Nehari parameter (clipped below
        the overflow cap)
    :return: A list of :class:`FiberingSample`
    """
    big_e = dirichlet_energy(u)
    if ts is None:
        t_cap = ctx.nl.s_cap / max(u.max(), 1e-300)
        try:
            t_hi = min(4.0 * nehari_project(ctx, u).t_star, 0.999 * t_cap)
        except ProjectionError:
            t_hi = 0.999 * t_cap
        ts = np.geomspace(min(1e-4, 0.5 * t_hi), t_hi, int(count))
    return [FiberingSample(float(t), fibering_derivative(ctx, u, t, big_e),
                           fibering_value(ctx, u, t, big_e))
            for t in ts]


def sign_changes(samples):
    """
    Number of sign changes of ``h'`` along a fiber table; exact zeros are
    skipped.
    """
    signs = [np.sign(s.h_prime) for s in samples if s.h_prime != 0]
    return int(sum(1 for a, b in zip(signs, signs[1:]) if a != b))
