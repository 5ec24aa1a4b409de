"""
Kirchhoff coefficients ``m`` (with primitive ``M``) and nonlinearities
``f`` (with primitive ``F``).

All evaluators accept scalars or numpy arrays and return the same kind of
object. Instances are immutable after construction.
"""
import logging
import math

import numpy as np
from scipy import integrate

from kirchlab._rtconfig import KL, kl_exc_args, kl_exc_domain, kl_exc_overflow
from kirchlab.constants import (
    COEF_CONSTANT, COEF_AFFINE, COEF_LOGARITHMIC, COEF_CUSTOM, COEF_KINDS,
    NL_PAPER_EXAMPLE, NL_POWER, NL_CUSTOM, NL_KINDS,
    QUAD_ABS_TOL, POWER_VALUE_CAP
)

log = logging.getLogger(__name__)


def _finish(arr, like):
    if np.ndim(like) == 0:
        return float(arr)
    return arr


def check_exp_arg(arg, cap=None):
    """
    Raise :class:`~kirchlab.exceptions.ExpOverflowError` if any entry of
    `arg` is above the exponential cap.
    """
    cap = KL.exp_cap if cap is None else cap
    arr = np.asarray(arg, dtype=float)
    if arr.size:
        top = float(np.max(arr))
        if top > cap:
            kl_exc_overflow(top, cap)


def _nonneg_t(t):
    t_arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t_arr)) or np.any(t_arr < 0):
        kl_exc_domain('Coefficient requires finite t >= 0', obj=t)
    return t_arr


class KirchhoffCoefficient(object):
    """
    The Kirchhoff coefficient ``m`` together with its primitive
    ``M(t) = int_0^t m``, and the growth parameters used by the
    hypotheses: ``m0`` for (M1), ``a1, a2, sigma, t0`` for (M2).

    Use the class methods :meth:`constant`, :meth:`affine`,
    :meth:`logarithmic` and :meth:`custom` rather than the constructor.
    """
    __slots__ = ['_kind', '_m0', '_a', '_a1', '_a2', '_sigma', '_t0',
                 '_func', '_primitive']

    def __init__(self, kind, m0=None, a=0.0, a1=1.0, a2=1.0, sigma=1.0,
                 t0=1.0, func=None, primitive=None):
        if kind not in COEF_KINDS:
            kl_exc_args('Unknown coefficient kind', obj=kind)
        if kind == COEF_CUSTOM and not callable(func):
            kl_exc_args('Custom coefficient needs a callable m', obj=func)
        if m0 is not None and not m0 > 0:
            kl_exc_args('m0 must be positive', obj=m0)
        if a < 0:
            kl_exc_args('Affine slope must be nonnegative', obj=a)
        if not (a1 > 0 and a2 > 0 and t0 > 0):
            kl_exc_args('(M2) parameters a1, a2, t0 must be positive',
                        obj=(a1, a2, t0))

        self._kind = kind
        self._m0 = None if m0 is None else float(m0)
        self._a = float(a)
        self._a1 = float(a1)
        self._a2 = float(a2)
        self._sigma = float(sigma)
        self._t0 = float(t0)
        self._func = func
        self._primitive = primitive

    @classmethod
    def constant(cls, m0=1.0, **kwargs):
        kwargs.setdefault('a1', m0)
        kwargs.setdefault('sigma', 0.0)
        return cls(COEF_CONSTANT, m0=m0, **kwargs)

    @classmethod
    def affine(cls, m0=1.0, a=0.0, **kwargs):
        kwargs.setdefault('a1', m0)
        kwargs.setdefault('a2', a if a > 0 else 1.0)
        return cls(COEF_AFFINE, m0=m0, a=a, **kwargs)

    @classmethod
    def logarithmic(cls, **kwargs):
        return cls(COEF_LOGARITHMIC, m0=1.0, **kwargs)

    @classmethod
    def custom(cls, func, m0=None, primitive=None, **kwargs):
        """
        :param func: Scalar function ``t -> m(t)``
        :param m0: Claimed lower bound; if omitted the validator infers it
            from the samples
        :param primitive: Optional closed form of ``M``; quadrature is used
            otherwise
        """
        return cls(COEF_CUSTOM, m0=m0, func=func, primitive=primitive,
                   **kwargs)

    kind = property(lambda self: self._kind)
    m0 = property(lambda self: self._m0)
    a = property(lambda self: self._a)
    a1 = property(lambda self: self._a1)
    a2 = property(lambda self: self._a2)
    sigma = property(lambda self: self._sigma)
    t0 = property(lambda self: self._t0)

    def m(self, t):
        return eval_m(self, t)

    def M(self, t):
        return eval_M(self, t)

    def to_dict(self):
        return {
            'kind': self._kind, 'm0': self._m0, 'a': self._a,
            'a1': self._a1, 'a2': self._a2, 'sigma': self._sigma,
            't0': self._t0
        }

    def __repr__(self):
        return 'KirchhoffCoefficient({0})'.format(
            ', '.join('{0}={1!r}'.format(k, v)
                      for k, v in sorted(self.to_dict().items())))


def eval_m(coef, t):
    """
    Evaluate ``m(t)``.

    :param coef: The :class:`KirchhoffCoefficient`
    :param t: Scalar or array, ``t >= 0``
    :raise DomainError: if any ``t`` is negative
    """
    t_arr = _nonneg_t(t)
    kind = coef.kind
    if kind == COEF_CONSTANT:
        out = np.full(t_arr.shape, coef.m0)
    elif kind == COEF_AFFINE:
        out = coef.m0 + coef.a * t_arr
    elif kind == COEF_LOGARITHMIC:
        out = 1.0 + np.log1p(t_arr)
    else:
        out = np.array([float(coef._func(float(v))) for v in t_arr.ravel()])
        out = out.reshape(t_arr.shape)
    return _finish(out, t)


def _quad_primitive(func, t):
    if t == 0:
        return 0.0
    val, _ = integrate.quad(func, 0.0, t, epsabs=QUAD_ABS_TOL,
                            epsrel=QUAD_ABS_TOL, limit=200)
    return val


def eval_M(coef, t):
    """
    Evaluate the primitive ``M(t) = int_0^t m(s) ds``. Built-in kinds use
    their closed forms; custom kinds use the supplied primitive or adaptive
    quadrature.
    """
    t_arr = _nonneg_t(t)
    kind = coef.kind
    if kind == COEF_CONSTANT:
        out = coef.m0 * t_arr
    elif kind == COEF_AFFINE:
        out = coef.m0 * t_arr + 0.5 * coef.a * t_arr * t_arr
    elif kind == COEF_LOGARITHMIC:
        out = (1.0 + t_arr) * np.log1p(t_arr)
    elif coef._primitive is not None:
        out = np.array([float(coef._primitive(float(v)))
                        for v in t_arr.ravel()]).reshape(t_arr.shape)
    else:
        func = lambda s: float(coef._func(s))
        out = np.array([_quad_primitive(func, float(v))
                        for v in t_arr.ravel()]).reshape(t_arr.shape)
    return _finish(out, t)


def primitive_upper_bound(coef, t):
    """
    Upper bound for ``M(t)``, ``t >= t0``, obtained by integrating the (M2)
    growth bound ``m(s) <= a1 + a2 s^sigma`` from ``t0``.
    """
    t_arr = _nonneg_t(t)
    a1, a2, sigma, t0 = coef.a1, coef.a2, coef.sigma, coef.t0
    base = eval_M(coef, t0)
    if sigma == -1.0:
        b0 = base - a1 * t0 - a2 * math.log(t0)
        with np.errstate(divide='ignore'):
            out = b0 + a1 * t_arr + a2 * np.log(t_arr)
    else:
        k = sigma + 1.0
        a0 = base - a1 * t0 - a2 * t0 ** k / k
        out = a0 + a1 * t_arr + a2 * t_arr ** k / k
    return _finish(out, t)


class Nonlinearity(object):
    """
    The nonlinearity ``f(x, s)`` and its primitive ``F(x, s)``, vanishing
    for ``s <= 0``. ``alpha0`` is the critical exponent (``None`` for
    nonlinearities without exponential growth), ``s0, K0`` are the (f1)
    parameters and ``beta0`` the (f3) parameter (``None`` selects the
    default derived from the threshold).

    Built-ins are independent of ``x``; custom callables receive the node
    coordinates (an ``(N, 2)`` array, or ``None``) and the positive part of
    ``s``.
    """
    __slots__ = ['_kind', '_alpha0', '_p', '_s0', '_K0', '_beta0', '_f',
                 '_F', '_s_cap']

    def __init__(self, kind, alpha0=None, p=None, s0=1.0, K0=1.0,
                 beta0=None, f=None, F=None, s_cap=None):
        if kind not in NL_KINDS:
            kl_exc_args('Unknown nonlinearity kind', obj=kind)
        if kind == NL_PAPER_EXAMPLE and not (alpha0 is not None and alpha0 > 0):
            kl_exc_args('alpha0 must be positive', obj=alpha0)
        if kind == NL_POWER and not (p is not None and p >= 1):
            kl_exc_args('Power exponent must be >= 1', obj=p)
        if kind == NL_CUSTOM and not (callable(f) and callable(F)):
            kl_exc_args('Custom nonlinearity needs callables f and F')
        if not (s0 > 0 and K0 > 0):
            kl_exc_args('(f1) parameters must be positive', obj=(s0, K0))
        if beta0 is not None and not beta0 > 0:
            kl_exc_args('beta0 must be positive', obj=beta0)

        self._kind = kind
        self._alpha0 = None if alpha0 is None else float(alpha0)
        self._p = None if p is None else float(p)
        self._s0 = float(s0)
        self._K0 = float(K0)
        self._beta0 = None if beta0 is None else float(beta0)
        self._f = f
        self._F = F
        self._s_cap = s_cap

    @classmethod
    def paper_example(cls, alpha0=1.0, **kwargs):
        """``F(s) = s^4/4 + s^2 (exp(alpha0 s^2) - 1)``"""
        return cls(NL_PAPER_EXAMPLE, alpha0=alpha0, **kwargs)

    @classmethod
    def power(cls, p=3.0, **kwargs):
        """``f(s) = s^p``"""
        return cls(NL_POWER, p=p, **kwargs)

    @classmethod
    def custom(cls, f, F, alpha0=None, **kwargs):
        return cls(NL_CUSTOM, alpha0=alpha0, f=f, F=F, **kwargs)

    kind = property(lambda self: self._kind)
    alpha0 = property(lambda self: self._alpha0)
    p = property(lambda self: self._p)
    s0 = property(lambda self: self._s0)
    K0 = property(lambda self: self._K0)
    beta0 = property(lambda self: self._beta0)

    @property
    def s_cap(self):
        """
        Largest argument that can be evaluated without overflow.
        """
        if self._s_cap is not None:
            return float(self._s_cap)
        if self._alpha0 is not None:
            return math.sqrt(KL.exp_cap / self._alpha0)
        if self._kind == NL_POWER:
            return POWER_VALUE_CAP ** (1.0 / (self._p + 1.0))
        return 1e6

    def f(self, x, s):
        return eval_f(self, x, s)

    def F(self, x, s):
        return eval_F(self, x, s)

    def to_dict(self):
        return {
            'kind': self._kind, 'alpha0': self._alpha0, 'p': self._p,
            's0': self._s0, 'K0': self._K0, 'beta0': self._beta0
        }

    def __repr__(self):
        return 'Nonlinearity({0})'.format(
            ', '.join('{0}={1!r}'.format(k, v)
                      for k, v in sorted(self.to_dict().items())))


def _positive_part(s):
    s_arr = np.asarray(s, dtype=float)
    pos = s_arr > 0
    return s_arr, pos, np.where(pos, s_arr, 0.0)


def eval_f(nl, x, s):
    """
    Evaluate ``f(x, s)``; zero wherever ``s <= 0``.

    :raise ExpOverflowError: if ``alpha0 s^2`` exceeds the cap
    """
    s_arr, pos, sp = _positive_part(s)
    kind = nl.kind
    if kind == NL_PAPER_EXAMPLE:
        alpha = nl.alpha0
        arg = alpha * sp * sp
        check_exp_arg(arg)
        s3 = sp ** 3
        out = s3 + 2.0 * sp * np.expm1(arg) + 2.0 * alpha * s3 * np.exp(arg)
    elif kind == NL_POWER:
        out = sp ** nl.p
    else:
        out = np.asarray(nl._f(x, sp), dtype=float)
    return _finish(np.where(pos, out, 0.0), s)


def eval_F(nl, x, s):
    """
    Evaluate ``F(x, s) = int_0^s f(x, t) dt``; zero wherever ``s <= 0``.
    """
    s_arr, pos, sp = _positive_part(s)
    kind = nl.kind
    if kind == NL_PAPER_EXAMPLE:
        arg = nl.alpha0 * sp * sp
        check_exp_arg(arg)
        s2 = sp * sp
        out = 0.25 * s2 * s2 + s2 * np.expm1(arg)
    elif kind == NL_POWER:
        out = sp ** (nl.p + 1.0) / (nl.p + 1.0)
    else:
        out = np.asarray(nl._F(x, sp), dtype=float)
    return _finish(np.where(pos, out, 0.0), s)


def power_lower_bound(nl, theta, r_theta, samples=257):
    """
    Constants ``C1, C2`` with ``F(s) >= C1 s^theta - C2`` for ``s >= 0``,
    given that ``theta F <= s f`` holds beyond ``r_theta``.

    Beyond ``r_theta``, ``F(s)/s^theta`` is nondecreasing, hence bounded
    below by its value at ``r_theta``; on ``[0, r_theta]`` the deficit is
    sampled.

    :return: ``(C1, C2)``
    """
    if not (theta > 0 and r_theta > 0):
        kl_exc_args('theta and R_theta must be positive',
                    obj=(theta, r_theta))
    c1 = float(eval_F(nl, None, r_theta)) / r_theta ** theta
    s = np.linspace(0.0, r_theta, samples)
    c2 = float(np.max(c1 * s ** theta - eval_F(nl, None, s)))
    return c1, max(c2, 0.0)
