"""
Moser functions: scaled, truncated logarithmic profiles of unit Dirichlet
norm concentrating at ``x0``, together with the integral estimates and
level thresholds built on them.
"""
import logging
import math
import warnings

import numpy as np
from scipy import integrate as spi

from kirchlab._rtconfig import kl_exc_args, kl_exc_domain
from kirchlab.constants import INV_SQRT_2PI, MOSER_QUAD_ABS_TOL
from kirchlab.grid import Field
from kirchlab.model import eval_m, eval_M
from kirchlab.result import MoserRow, MoserReport

log = logging.getLogger(__name__)


class MoserFamily(object):
    __slots__ = ['_n', '_d', '_x0']

    def __init__(self, n, d=1.0, x0=(0.0, 0.0)):
        if int(n) != n or n < 2:
            kl_exc_domain('Moser index must be an integer >= 2', obj=n)
        if not d > 0:
            kl_exc_args('Moser radius must be positive', obj=d)
        self._n = int(n)
        self._d = float(d)
        self._x0 = (float(x0[0]), float(x0[1]))

    n = property(lambda self: self._n)
    d = property(lambda self: self._d)
    x0 = property(lambda self: self._x0)

    @property
    def log_n(self):
        return math.log(self._n)

    def __repr__(self):
        return 'MoserFamily(n={0}, d={1!r}, x0={2!r})'.format(
            self._n, self._d, self._x0)


def radial_value(fam, r):
    """
    The profile as a function of the distance ``r`` to ``x0``.
    """
    r_arr = np.asarray(r, dtype=float)
    big_l = fam.log_n
    inner = fam.d / fam.n
    with np.errstate(divide='ignore'):
        mid = np.log(fam.d / np.maximum(r_arr, inner)) / math.sqrt(big_l)
    out = INV_SQRT_2PI * np.where(
        r_arr <= inner, math.sqrt(big_l), np.where(r_arr <= fam.d, mid, 0.0))
    if np.ndim(r) == 0:
        return float(out)
    return out


def moser_value(fam, x):
    """
    Evaluate ``G_n`` at a point (or an array of points, last axis of
    length 2).
    """
    pts = np.asarray(x, dtype=float)
    r = np.hypot(pts[..., 0] - fam.x0[0], pts[..., 1] - fam.x0[1])
    return radial_value(fam, r)


def moser_norm_sq(fam):
    """
    Analytic Dirichlet energy of ``G_n``. Only the annulus
    ``d/n < r < d`` contributes, where ``|grad G_n| = c / (r sqrt(log n))``.
    """
    c2 = INV_SQRT_2PI ** 2
    return 2.0 * math.pi * (c2 / fam.log_n) * math.log(fam.d / (fam.d / fam.n))


def _gauss_composite(func, panels=64, order=8):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(0.0, 1.0, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        xs = a + half * (nodes + 1.0)
        total += half * float(np.dot(weights, func(xs)))
    return total


def reduced_integral(n):
    """
    ``Q(n) = int_0^1 n^(2 s^2 - 2 s) ds`` by adaptive quadrature, falling
    back to composite Gauss-Legendre when the adaptive rule complains.
    """
    big_l = math.log(n)

    def integrand(s):
        return np.exp(big_l * (2.0 * s * s - 2.0 * s))

    with warnings.catch_warnings():
        warnings.simplefilter('error', spi.IntegrationWarning)
        try:
            val, _ = spi.quad(integrand, 0.0, 1.0, epsabs=MOSER_QUAD_ABS_TOL,
                              epsrel=MOSER_QUAD_ABS_TOL, limit=200)
            return val
        except spi.IntegrationWarning as e:
            log.warning('moser: quad fallback n=%d reason=%s', n, e)
    return _gauss_composite(integrand)


def limite_integral(fam):
    """
    ``int_{B_d(x0)} exp(4 pi G_n^2)`` through its one-dimensional reduction
    ``pi d^2 + 2 pi d^2 log(n) Q(n)``.
    """
    d2 = fam.d * fam.d
    return math.pi * d2 + 2.0 * math.pi * d2 * fam.log_n * \
        reduced_integral(fam.n)


def lower_bound(n, d=1.0):
    """``pi d^2 (3 - 2/n)``"""
    return math.pi * d * d * (3.0 - 2.0 / n)


def polar_integral(fam, epsrel=1e-10):
    """
    Direct two-dimensional quadrature of ``exp(4 pi G_n^2)`` over the ball
    in polar coordinates, split at the inner radius ``d/n``.
    """
    def integrand(r, theta):
        g = radial_value(fam, r)
        return math.exp(4.0 * math.pi * g * g) * r

    total = 0.0
    for r_lo, r_hi in ((0.0, fam.d / fam.n), (fam.d / fam.n, fam.d)):
        val, _ = spi.dblquad(integrand, 0.0, 2.0 * math.pi, r_lo, r_hi,
                             epsabs=1e-12, epsrel=epsrel)
        total += val
    return total


def level_threshold(coef, alpha0):
    """
    ``M(4 pi / alpha0) / 2``, the level below which compactness is
    recovered.
    """
    if alpha0 is None or not alpha0 > 0:
        kl_exc_args('alpha0 must be positive', obj=alpha0)
    return 0.5 * eval_M(coef, 4.0 * math.pi / alpha0)


def f3_threshold(coef, alpha0, d):
    """``(2 / (alpha0 d^2)) m(4 pi / alpha0)``"""
    if alpha0 is None or not alpha0 > 0:
        kl_exc_args('alpha0 must be positive', obj=alpha0)
    if not d > 0:
        kl_exc_args('Inradius must be positive', obj=d)
    return 2.0 / (alpha0 * d * d) * eval_m(coef, 4.0 * math.pi / alpha0)


def moser_field(fam, grid):
    """
    Interpolate ``G_n`` at the interior nodes of `grid`.

    :raise DomainError: if ``B_d(x0)`` is not contained in the domain
    """
    if not grid.contains_ball(fam.x0, fam.d):
        kl_exc_domain('Moser ball is not contained in the domain',
                      obj=(fam.x0, fam.d))
    return Field.from_function(
        grid, lambda x, y: moser_value(fam, np.stack([x, y], axis=-1)))


def moser_table(ns, d=1.0):
    """
    :return: A :class:`~kirchlab.result.MoserReport` with one row per `n`
    """
    rows = []
    for n in ns:
        fam = MoserFamily(n, d)
        q = reduced_integral(fam.n)
        rows.append(MoserRow(fam.n, q, limite_integral(fam),
                             lower_bound(fam.n, d), 3.0 * math.pi * d * d))
        log.debug('moser: n=%d Q=%.12g', fam.n, q)
    return MoserReport(rows, d)
