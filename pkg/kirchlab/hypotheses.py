"""
Sampled validation of the structural hypotheses on ``m`` and ``f``.

Every check runs on a deterministic sample described by a
:class:`SamplingSpec`. Pointwise and monotonicity statements get ``pass``
or ``fail``; statements about limits can only be supported by sampling and
get ``heuristic-pass`` at best.
"""
import logging
import math

import numpy as np

from kirchlab._rtconfig import kl_exc_config
from kirchlab.constants import (
    HYP_M1, HYP_M2, HYP_M3, HYP_M3_HAT, HYP_F1, HYP_F2, HYP_F3,
    HYP_C_ALPHA0, HYP_AR_THETA, HYP_ORIGIN, HYP_F2_CONST, HYP_SF_4F,
    STATUS_PASS, STATUS_FAIL, STATUS_HEURISTIC,
    COEF_CONSTANT, MONOTONE_RTOL, LIMIT_TOLERANCE, F3_BETA_FACTOR
)
from kirchlab.model import (
    eval_m, eval_M, eval_f, eval_F, primitive_upper_bound, power_lower_bound
)
from kirchlab.result import HypothesisEntry, HypothesisReport

log = logging.getLogger(__name__)


class SamplingSpec(object):
    """
    Ranges and counts for the hypothesis samples. ``t`` samples the
    coefficient, ``s`` the nonlinearity; ``pair_count`` points of the
    t-sample are combined pairwise for superadditivity. ``theta`` and
    ``mu`` default to ``max(5, 2 sigma + 3)`` and ``3 (1 - tolerance)``.
    """
    __slots__ = ['t_min', 't_max', 't_count', 's_min', 's_max', 's_count',
                 'pair_count', 'tolerance', 'theta', 'mu']

    def __init__(self, t_min=0.0, t_max=100.0, t_count=200, s_min=1e-3,
                 s_max=20.0, s_count=200, pair_count=24,
                 tolerance=LIMIT_TOLERANCE, theta=None, mu=None):
        self.t_min = t_min
        self.t_max = t_max
        self.t_count = t_count
        self.s_min = s_min
        self.s_max = s_max
        self.s_count = s_count
        self.pair_count = pair_count
        self.tolerance = tolerance
        self.theta = theta
        self.mu = mu
        self._check()

    def _check(self):
        for key in self.__slots__:
            if key in ('theta', 'mu'):
                continue
            if getattr(self, key) is None:
                kl_exc_config('Sampling specification is empty',
                              key='validation.' + key)
        for key in ('t_count', 's_count', 'pair_count'):
            if int(getattr(self, key)) < 2:
                kl_exc_config('Sample counts must be at least 2',
                              key='validation.' + key,
                              obj=getattr(self, key))
        if not (0 <= self.t_min < self.t_max):
            kl_exc_config('Empty t range', key='validation.t_max',
                          obj=(self.t_min, self.t_max))
        if not (0 < self.s_min < self.s_max):
            kl_exc_config('Empty s range', key='validation.s_max',
                          obj=(self.s_min, self.s_max))
        if not 0 < self.tolerance < 1:
            kl_exc_config('Tolerance must lie in (0, 1)',
                          key='validation.tolerance', obj=self.tolerance)

    def t_samples(self):
        n = int(self.t_count)
        lin = np.linspace(self.t_min, self.t_max, n)
        lo = max(self.t_min, self.t_max * 1e-6)
        geo = np.geomspace(lo, self.t_max, n)
        return np.unique(np.concatenate([lin, geo]))

    def s_samples(self, s_cap):
        n = int(self.s_count)
        hi = min(self.s_max, 0.999 * s_cap)
        if hi <= self.s_min:
            kl_exc_config('s range lies above the overflow cap',
                          key='validation.s_min', obj=(self.s_min, s_cap))
        lin = np.linspace(self.s_min, hi, n)
        geo = np.geomspace(self.s_min, hi, n)
        return np.unique(np.concatenate([lin, geo]))

    def to_dict(self):
        return dict((k, getattr(self, k)) for k in self.__slots__)


def _first_decrease(vals, scale):
    """
    Index ``i`` of the first pair with ``vals[i+1] < vals[i]`` beyond the
    round-off allowance, or ``None``.
    """
    diff = vals[1:] - vals[:-1]
    tol = MONOTONE_RTOL * (np.abs(scale[1:]) + np.abs(scale[:-1]))
    bad = np.nonzero(diff < -tol)[0]
    return int(bad[0]) if bad.size else None


def _first_negative(vals, scale):
    bad = np.nonzero(vals < -MONOTONE_RTOL * np.abs(scale))[0]
    return int(bad[0]) if bad.size else None


def _mono_entry(name, x, vals, scale, increasing=True, status=STATUS_PASS,
                detail=None):
    signed = vals if increasing else -vals
    ix = _first_decrease(signed, scale)
    margin = float(np.min(signed[1:] - signed[:-1]))
    if ix is not None:
        return HypothesisEntry(name, STATUS_FAIL,
                               witness=(float(x[ix]), float(x[ix + 1])),
                               margin=margin, detail=detail)
    return HypothesisEntry(name, status, margin=margin, detail=detail)


def check_m1(coef, t, m_t, pair_count):
    inferred = coef.m0 is None
    m0 = float(np.min(m_t)) if inferred else coef.m0
    detail = {'m0': m0, 'm0_inferred': inferred}
    if not m0 > 0:
        ix = int(np.argmin(m_t))
        return HypothesisEntry(HYP_M1, STATUS_FAIL, witness=float(t[ix]),
                               margin=m0, detail=detail)

    low = m_t - m0
    bad = np.nonzero(low < -MONOTONE_RTOL * m0)[0]
    if bad.size:
        detail['violation'] = 'pointwise'
        return HypothesisEntry(HYP_M1, STATUS_FAIL, witness=float(t[bad[0]]),
                               margin=float(np.min(low)), detail=detail)

    idx = np.unique(np.round(
        np.linspace(0, len(t) - 1, int(pair_count))).astype(int))
    tp = t[idx]
    ti, si = np.triu_indices(len(tp))
    tt, ss = tp[ti], tp[si]
    m_sum = eval_M(coef, tt + ss)
    m_tt = eval_M(coef, tt)
    m_ss = eval_M(coef, ss)
    gap = m_sum - m_tt - m_ss
    scale = np.abs(m_sum) + np.abs(m_tt) + np.abs(m_ss)
    ix = _first_negative(gap, scale)
    detail['pairs'] = int(len(tt))
    margin = min(float(np.min(low)), float(np.min(gap)))
    if ix is not None:
        detail['violation'] = 'superadditivity'
        worst = int(np.argmin(gap))
        return HypothesisEntry(HYP_M1, STATUS_FAIL,
                               witness=(float(tt[worst]), float(ss[worst])),
                               margin=margin, detail=detail)
    return HypothesisEntry(HYP_M1, STATUS_PASS, margin=margin, detail=detail)


def check_m2(coef, t, m_t):
    sel = t >= coef.t0
    detail = {'a1': coef.a1, 'a2': coef.a2, 'sigma': coef.sigma,
              't0': coef.t0}
    if not np.any(sel):
        return HypothesisEntry(HYP_M2, STATUS_FAIL, witness=coef.t0,
                               detail=dict(detail, reason='no samples >= t0'))
    ts, ms = t[sel], m_t[sel]
    bound = coef.a1 + coef.a2 * ts ** coef.sigma
    gap = bound - ms
    ix = _first_negative(gap, bound)
    margin = float(np.min(gap))
    if ix is not None:
        return HypothesisEntry(HYP_M2, STATUS_FAIL, witness=float(ts[ix]),
                               margin=margin, detail=detail)

    big_m = eval_M(coef, ts)
    big_gap = primitive_upper_bound(coef, ts) - big_m
    detail['M_bound_margin'] = float(np.min(big_gap))
    ix = _first_negative(big_gap, np.abs(big_m) + 1.0)
    if ix is not None:
        return HypothesisEntry(HYP_M2, STATUS_FAIL, witness=float(ts[ix]),
                               margin=float(np.min(big_gap)), detail=detail)
    return HypothesisEntry(HYP_M2, STATUS_PASS, margin=margin, detail=detail)


def check_m3(t, m_t):
    sel = t > 0
    ratio = m_t[sel] / t[sel]
    return _mono_entry(HYP_M3, t[sel], ratio, ratio, increasing=False)


def check_m3_hat(coef, t, m_t):
    big_m = eval_M(coef, t)
    q = 0.5 * big_m - 0.25 * m_t * t
    scale = 0.5 * np.abs(big_m) + 0.25 * np.abs(m_t * t)
    ent = _mono_entry(HYP_M3_HAT, t, q, scale)
    if ent.failed:
        return ent
    ix = _first_negative(q, scale)
    if ix is not None:
        return HypothesisEntry(HYP_M3_HAT, STATUS_FAIL, witness=float(t[ix]),
                               margin=float(np.min(q)),
                               detail={'violation': 'nonnegativity'})
    ent.detail['min_value'] = float(np.min(q))
    return ent


def check_f1(nl, s, f_s, F_s):
    sel = s >= nl.s0
    detail = {'s0': nl.s0, 'K0': nl.K0}
    if not np.any(sel):
        return HypothesisEntry(HYP_F1, STATUS_FAIL, witness=nl.s0,
                               detail=dict(detail, reason='no samples >= s0'))
    gap = nl.K0 * f_s[sel] - F_s[sel]
    ix = _first_negative(gap, F_s[sel])
    margin = float(np.min(gap))
    if ix is not None:
        return HypothesisEntry(HYP_F1, STATUS_FAIL,
                               witness=float(s[sel][ix]), margin=margin,
                               detail=detail)
    return HypothesisEntry(HYP_F1, STATUS_PASS, margin=margin, detail=detail)


def check_f2(s, f_s):
    ratio = f_s / s ** 3
    return _mono_entry(HYP_F2, s, ratio, ratio)


def check_f3(coef, nl, d, s, f_s, tolerance):
    # local import: moser depends on the model only, but keeps the threshold
    from kirchlab.moser import f3_threshold
    s_top = float(s[-1])
    if nl.alpha0 is None:
        return HypothesisEntry(HYP_F3, STATUS_FAIL, witness=s_top,
                               detail={'reason': 'alpha0 undefined'})
    alpha0 = nl.alpha0
    thr = f3_threshold(coef, alpha0, d)
    beta0 = nl.beta0 if nl.beta0 is not None else F3_BETA_FACTOR * thr
    ratio = s_top * float(f_s[-1]) * math.exp(-alpha0 * s_top * s_top)
    detail = {'threshold': thr, 'beta0': beta0, 'ratio_at_top': ratio,
              's_top': s_top, 'tolerance': tolerance}
    if not beta0 > thr:
        return HypothesisEntry(HYP_F3, STATUS_FAIL, witness=beta0,
                               margin=beta0 - thr,
                               detail=dict(detail, violation='beta0'))
    if ratio < beta0 * (1.0 - tolerance):
        return HypothesisEntry(HYP_F3, STATUS_FAIL, witness=s_top,
                               margin=ratio - beta0,
                               detail=dict(detail, violation='limit'))
    return HypothesisEntry(HYP_F3, STATUS_HEURISTIC, margin=ratio - beta0,
                           detail=detail)


def check_c_alpha0(nl, s_top, tolerance):
    if nl.alpha0 is None:
        return HypothesisEntry(HYP_C_ALPHA0, STATUS_FAIL, witness=s_top,
                               detail={'reason': 'alpha0 undefined'})
    hi = 0.999 * nl.s_cap
    pts = np.array([hi * (1.0 - 1e-3), hi])
    log_f = np.log(eval_f(nl, None, pts))
    detail = {'s': pts, 'tolerance': tolerance}
    slopes = {}
    for label, alpha in (('below', nl.alpha0 * (1.0 - tolerance)),
                         ('above', nl.alpha0 * (1.0 + tolerance))):
        g = log_f - alpha * pts * pts
        slopes[label] = float(g[1] - g[0])
    detail['slopes'] = slopes
    if slopes['below'] > 0 and slopes['above'] < 0:
        return HypothesisEntry(HYP_C_ALPHA0, STATUS_HEURISTIC,
                               margin=min(slopes['below'], -slopes['above']),
                               detail=detail)
    return HypothesisEntry(HYP_C_ALPHA0, STATUS_FAIL, witness=float(hi),
                           margin=min(slopes['below'], -slopes['above']),
                           detail=detail)


def check_ar_theta(nl, s, f_s, F_s, theta):
    sf = s * f_s
    gap = sf - theta * F_s
    ok = gap >= -MONOTONE_RTOL * (np.abs(sf) + theta * np.abs(F_s))
    detail = {'theta': theta}
    if not ok[-1]:
        return HypothesisEntry(HYP_AR_THETA, STATUS_FAIL,
                               witness=float(s[-1]), margin=float(gap[-1]),
                               detail=detail)
    bad = np.nonzero(~ok)[0]
    start = int(bad[-1]) + 1 if bad.size else 0
    r_theta = float(s[start])
    c1, c2 = power_lower_bound(nl, theta, r_theta)
    detail.update({'R_theta': r_theta, 'C1': c1, 'C2': c2})
    return HypothesisEntry(HYP_AR_THETA, STATUS_PASS,
                           margin=float(np.min(gap[start:])), detail=detail)


def check_origin(nl, s_min, mu, tolerance):
    """
    ``f(s) / s^mu`` must increase over eight dyadic points below `s_min`
    and decay towards the origin at least like ``s^tolerance`` (log-log
    slope across the window); a ratio levelling off at a positive value
    fails.
    """
    pts = s_min * 2.0 ** -np.arange(8)[::-1]
    ratio = eval_f(nl, None, pts) / pts ** mu
    exponent = float('inf')
    if ratio[0] > 0 and ratio[-1] > 0:
        exponent = math.log(ratio[-1] / ratio[0]) / math.log(pts[-1] / pts[0])
    detail = {'mu': mu, 's': pts, 'ratio': ratio, 'exponent': exponent,
              'tolerance': tolerance}
    ix = _first_decrease(ratio, ratio)
    if ix is not None or not ratio[0] < ratio[-1] or exponent < tolerance:
        return HypothesisEntry(HYP_ORIGIN, STATUS_FAIL,
                               witness=float(pts[0]), margin=float(ratio[0]),
                               detail=detail)
    return HypothesisEntry(HYP_ORIGIN, STATUS_HEURISTIC,
                           margin=float(ratio[-1] - ratio[0]), detail=detail)


def check_f2_const(s, f_s, F_s):
    ratio = f_s / s
    diff = ratio[1:] - ratio[:-1]
    bad = np.nonzero(diff <= 0)[0]
    if bad.size:
        ix = int(bad[0])
        return HypothesisEntry(HYP_F2_CONST, STATUS_FAIL,
                               witness=(float(s[ix]), float(s[ix + 1])),
                               margin=float(np.min(diff)),
                               detail={'violation': 'f/s'})
    q = s * f_s - 2.0 * F_s
    ent = _mono_entry(HYP_F2_CONST, s, q, np.abs(s * f_s) + 2 * np.abs(F_s))
    ent.detail['violation' if ent.failed else 'checked'] = 'sf-2F'
    return ent


def check_sf_4f(s, f_s, F_s):
    s0 = np.concatenate([[0.0], s])
    sf = np.concatenate([[0.0], s * f_s])
    big_f = np.concatenate([[0.0], F_s])
    q = sf - 4.0 * big_f
    scale = np.abs(sf) + 4.0 * np.abs(big_f)
    ent = _mono_entry(HYP_SF_4F, s0, q, scale)
    if ent.failed:
        return ent
    ix = _first_negative(q, scale)
    if ix is not None:
        return HypothesisEntry(HYP_SF_4F, STATUS_FAIL, witness=float(s0[ix]),
                               margin=float(np.min(q)),
                               detail={'violation': 'nonnegativity'})
    return ent


def validate_hypotheses(coef, nl, d, spec=None):
    """
    Check every structural hypothesis on the sample described by `spec`.

    :param coef: The :class:`~kirchlab.model.KirchhoffCoefficient`
    :param nl: The :class:`~kirchlab.model.Nonlinearity`
    :param d: Inradius of the domain, used by (f3)
    :param spec: A :class:`SamplingSpec`; defaults are used when omitted
    :return: A :class:`~kirchlab.result.HypothesisReport`
    """
    if spec is None:
        spec = SamplingSpec()
    if not d > 0:
        kl_exc_config('Inradius must be positive', key='domain', obj=d)

    t = spec.t_samples()
    s = spec.s_samples(nl.s_cap)
    m_t = eval_m(coef, t)
    f_s = eval_f(nl, None, s)
    F_s = eval_F(nl, None, s)
    theta = spec.theta
    if theta is None:
        theta = max(5.0, 2.0 * coef.sigma + 3.0)
    mu = spec.mu if spec.mu is not None else 3.0 * (1.0 - spec.tolerance)

    entries = [
        check_m1(coef, t, m_t, spec.pair_count),
        check_m2(coef, t, m_t),
        check_m3(t, m_t),
        check_m3_hat(coef, t, m_t),
        check_f1(nl, s, f_s, F_s),
        check_f2(s, f_s),
        check_f3(coef, nl, d, s, f_s, spec.tolerance),
        check_c_alpha0(nl, float(s[-1]), spec.tolerance),
        check_ar_theta(nl, s, f_s, F_s, theta),
        check_origin(nl, spec.s_min, mu, spec.tolerance),
        check_sf_4f(s, f_s, F_s),
    ]
    if coef.kind == COEF_CONSTANT:
        entries.append(check_f2_const(s, f_s, F_s))

    report = HypothesisReport(entries, spec, coefficient=coef,
                              nonlinearity=nl, d=d)
    for ent in report.failures:
        log.info('hypothesis: name=%s status=fail witness=%r', ent.name,
                 ent.witness)
    log.debug('hypotheses: checked=%d failed=%d', len(entries),
              len(report.failures))
    return report
