"""
Report objects returned by the validators, solvers and probes. Each report
knows how to turn itself into a plain dictionary for serialization.
"""
from collections import namedtuple

import numpy as np

from kirchlab.constants import (
    STATUS_PASS, STATUS_FAIL, STATUS_HEURISTIC, HYP_HARD, HYP_NAMES,
    SOLVE_CONVERGED
)


def _plain(value):
    """
    Convert numpy scalars/arrays and tuples to plain JSON-compatible values.
    Non-finite floats become ``None``.
    """
    if isinstance(value, dict):
        return dict((str(k), _plain(v)) for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if np.isfinite(value) else None
    return value


class Report(object):
    KIND = None

    def to_dict(self):
        raise NotImplementedError()


class HypothesisEntry(object):
    __slots__ = ['name', 'status', 'witness', 'margin', 'detail']

    def __init__(self, name, status, witness=None, margin=None, detail=None):
        assert name in HYP_NAMES, name
        assert status in (STATUS_PASS, STATUS_FAIL, STATUS_HEURISTIC), status
        if status == STATUS_FAIL:
            assert witness is not None, 'fail entry without witness'
        self.name = name
        self.status = status
        self.witness = witness
        self.margin = margin
        self.detail = detail or {}

    @property
    def failed(self):
        return self.status == STATUS_FAIL

    def to_dict(self):
        return {
            'name': self.name, 'status': self.status,
            'witness': _plain(self.witness), 'margin': _plain(self.margin),
            'detail': _plain(self.detail)
        }

    def __repr__(self):
        return 'HypothesisEntry({0} {1} witness={2!r} margin={3!r})'.format(
            self.name, self.status, self.witness, self.margin)


class HypothesisReport(Report):
    KIND = 'validate'

    def __init__(self, entries, sampling, coefficient=None,
                 nonlinearity=None, d=None):
        self.entries = list(entries)
        self.sampling = sampling
        self.coefficient = coefficient
        self.nonlinearity = nonlinearity
        self.d = d

    def entry(self, name):
        for ent in self.entries:
            if ent.name == name:
                return ent
        raise KeyError(name)

    @property
    def failures(self):
        return [e for e in self.entries if e.failed]

    @property
    def hard_failures(self):
        return [e for e in self.failures if e.name in HYP_HARD]

    @property
    def ok(self):
        return not self.failures

    def to_dict(self):
        return {
            'kind': self.KIND,
            'coefficient': _plain(self.coefficient.to_dict()
                                  if self.coefficient else None),
            'nonlinearity': _plain(self.nonlinearity.to_dict()
                                   if self.nonlinearity else None),
            'd': _plain(self.d),
            'sampling': _plain(self.sampling.to_dict()),
            'entries': [e.to_dict() for e in self.entries],
            'ok': self.ok,
            'hard_failures': [e.name for e in self.hard_failures]
        }


class SolveReport(Report):
    """
    Result of :func:`kirchlab.solver.solve_ground_state`. ``field`` is the
    best iterate; ``margin`` is ``threshold - energy`` when the level
    threshold is defined.
    """
    KIND = 'solve'

    def __init__(self):
        self.field = None
        self.energy = None
        self.dirichlet_energy = None
        self.nehari_residual = None
        self.grad_residual = None
        self.weak_residual = None
        self.iterations = 0
        self.threshold = None
        self.margin = None
        self.positive = False
        self.min_value = None
        self.status = None
        self.trace = []
        self.seeds = []
        self.restart_energies = []
        self.timing = None
        self.inputs = {}

    @property
    def success(self):
        return self.status == SOLVE_CONVERGED

    def to_dict(self, include_timing=False):
        fld = self.field
        ret = {
            'kind': self.KIND,
            'status': self.status,
            'energy': self.energy,
            'dirichlet_energy': self.dirichlet_energy,
            'nehari_residual': self.nehari_residual,
            'grad_residual': self.grad_residual,
            'weak_residual': self.weak_residual,
            'iterations': self.iterations,
            'threshold': self.threshold,
            'margin': self.margin,
            'positive': self.positive,
            'min_value': self.min_value,
            'seeds': self.seeds,
            'restart_energies': self.restart_energies,
            'trace': self.trace,
            'inputs': self.inputs,
            'field': None if fld is None else {
                'nodes': fld.size, 'max': fld.max(), 'min': fld.min()
            }
        }
        if include_timing:
            ret['timing'] = self.timing
        return _plain(ret)


class ProbeReport(Report):
    """
    Empirical mountain-pass geometry: ``rows`` holds one
    ``(rho, tau, directions)`` triple per sphere radius; ``e_norm`` and
    ``e_energy`` describe the negative-energy point found along the ray.
    """
    KIND = 'probe'

    def __init__(self, rows, rho_star, tau_star, e_t, e_norm, e_energy):
        self.rows = rows
        self.rho_star = rho_star
        self.tau_star = tau_star
        self.e_t = e_t
        self.e_norm = e_norm
        self.e_energy = e_energy
        self.inputs = {}

    @property
    def ok(self):
        return (self.rho_star is not None and self.e_energy < 0
                and self.e_norm > self.rho_star)

    def to_dict(self):
        return _plain({
            'kind': self.KIND,
            'spheres': [{'rho': r, 'tau': t, 'directions': k}
                        for r, t, k in self.rows],
            'rho_star': self.rho_star, 'tau_star': self.tau_star,
            'e_t': self.e_t, 'e_norm': self.e_norm,
            'e_energy': self.e_energy, 'ok': self.ok,
            'inputs': self.inputs
        })


RayMax = namedtuple('RayMax', ['t_max', 'value'])

MoserRow = namedtuple('MoserRow',
                      ['n', 'q', 'integral', 'lower_bound', 'limit'])


class BoundReport(Report):
    KIND = 'bound'

    def __init__(self, threshold, ground_energy, moser_values, inputs):
        self.threshold = threshold
        self.ground_energy = ground_energy
        self.moser_values = moser_values
        self.inputs = inputs
        candidates = [v for v in [ground_energy] + list(moser_values.values())
                      if v is not None]
        self.c_star_est = min(candidates)
        self.margin = threshold - self.c_star_est

    @property
    def passed(self):
        return self.c_star_est < self.threshold

    def to_dict(self):
        return _plain({
            'kind': self.KIND,
            'threshold': self.threshold,
            'c_star_est': self.c_star_est,
            'margin': self.margin,
            'passed': self.passed,
            'ground_energy': self.ground_energy,
            'moser_values': dict((str(n), v) for n, v in
                                 sorted(self.moser_values.items())),
            'inputs': self.inputs
        })


class MoserReport(Report):
    KIND = 'moser'

    def __init__(self, rows, d):
        self.rows = rows
        self.d = d

    @property
    def ok(self):
        return all(r.integral >= r.lower_bound for r in self.rows)

    def to_dict(self):
        return _plain({
            'kind': self.KIND, 'd': self.d,
            'rows': [r._asdict() for r in self.rows],
            'lower_bounds_increasing': all(
                a.lower_bound < b.lower_bound
                for a, b in zip(self.rows, self.rows[1:])),
            'ok': self.ok
        })


class FiberReport(Report):
    KIND = 'fiber'

    def __init__(self, samples, sign_changes, t_star, inputs):
        self.samples = samples
        self.sign_changes = sign_changes
        self.t_star = t_star
        self.inputs = inputs

    def to_dict(self):
        return _plain({
            'kind': self.KIND,
            'samples': [{'t': s.t, 'h': s.h, 'h_prime': s.h_prime}
                        for s in self.samples],
            'sign_changes': self.sign_changes,
            't_star': self.t_star,
            'inputs': self.inputs
        })
