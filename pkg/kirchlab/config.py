"""
Run configuration: a flat mapping of dotted keys.

Two file formats are accepted. The text format holds one ``key = value``
per line; ``[section]`` lines prefix the following keys with
``section.``; ``#`` starts a comment. A file whose first non-blank
character is ``{`` is read as JSON, nested objects being flattened to
dotted keys.
"""
import json
import logging

from kirchlab._rtconfig import kl_exc_config, kl_exc_io
from kirchlab.cfgkeys import KEY_HANDLERS
from kirchlab.constants import (
    SHAPE_DISK, COEF_CONSTANT, COEF_AFFINE, NL_PAPER_EXAMPLE, GUESS_BUMP,
    LIMIT_TOLERANCE
)
from kirchlab.exceptions import ArgumentError

log = logging.getLogger(__name__)

DEFAULTS = {
    'domain.shape': SHAPE_DISK,
    'domain.radius': 1.0,
    'domain.center': (0.0, 0.0),
    'domain.width': 1.0,
    'domain.height': 1.0,
    'mesh.h': 1.0 / 64,

    'kirchhoff.kind': COEF_AFFINE,
    'kirchhoff.m0': 1.0,
    'kirchhoff.a': 1.0,
    'kirchhoff.a1': None,
    'kirchhoff.a2': None,
    'kirchhoff.sigma': None,
    'kirchhoff.t0': None,

    'nonlinearity.kind': NL_PAPER_EXAMPLE,
    'nonlinearity.alpha0': 1.0,
    'nonlinearity.p': 3.0,
    'nonlinearity.s0': 1.0,
    'nonlinearity.K0': 1.0,
    'nonlinearity.beta0': None,

    'solver.max_iters': 5000,
    'solver.step': 0.5,
    'solver.step_max': None,
    'solver.armijo_c': 1e-4,
    'solver.backtrack': 0.5,
    'solver.max_backtracks': 40,
    'solver.grad_tol': 1e-7,
    'solver.cg_tol': None,
    'solver.initial_guess': GUESS_BUMP,
    'solver.moser_n': 8,
    'solver.guess_path': None,
    'solver.seed': 0,
    'solver.restarts': 0,

    'validation.t_min': 0.0,
    'validation.t_max': 100.0,
    'validation.t_count': 200,
    'validation.s_min': 1e-3,
    'validation.s_max': 20.0,
    'validation.s_count': 200,
    'validation.pair_count': 24,
    'validation.tolerance': LIMIT_TOLERANCE,
    'validation.theta': None,
    'validation.mu': None,

    'moser.n': (2, 4, 16, 256, 65536),
    'moser.d': 1.0,

    'probe.rho': (0.01, 0.02, 0.05, 0.1, 0.2),
    'probe.directions': 16,
    'probe.seed': 0,

    'bound.n': (2, 4, 8, 16),

    'fiber.t_count': 64,
    'fiber.t_max': None,

    'output.dir': 'kirchlab-out',
    'output.timing': False,
}

assert set(DEFAULTS) == set(KEY_HANDLERS)


def _flatten(obj, prefix=''):
    out = []
    for k, v in obj.items():
        key = prefix + str(k)
        if isinstance(v, dict):
            out.extend(_flatten(v, key + '.'))
        else:
            out.append((key, v))
    return out


def _parse_lines(text):
    """
    :return: list of ``(key, raw_value)`` in file order
    """
    pairs = []
    section = ''
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if line.startswith('['):
            if not line.endswith(']') or len(line) < 3:
                kl_exc_config('Malformed section header',
                              key='line {0}'.format(lineno), obj=line)
            section = line[1:-1].strip() + '.'
            continue
        if '=' not in line:
            kl_exc_config('Expected key = value',
                          key='line {0}'.format(lineno), obj=line)
        key, raw = line.split('=', 1)
        key = key.strip()
        if not key:
            kl_exc_config('Missing key', key='line {0}'.format(lineno),
                          obj=line)
        pairs.append((section + key, raw.strip()))
    return pairs


class RunConfig(object):
    """
    Every key has a value; keys not given in the input keep their defaults.
    Unknown keys are rejected.
    """

    def __init__(self, values=None):
        self._values = dict(DEFAULTS)
        if values:
            for key, raw in (values.items() if isinstance(values, dict)
                             else values):
                self.set(key, raw)

    def set(self, key, raw):
        """
        :raise ConfigurationError: for unknown keys and bad values
        """
        handler = KEY_HANDLERS.get(key)
        if handler is None:
            kl_exc_config('Unknown key', key=key, obj=raw)
        self._values[key] = handler.execute(key, raw)

    def get(self, key):
        return self._values[key]

    __getitem__ = get

    def keys(self):
        return sorted(self._values)

    def as_dict(self):
        return dict(self._values)

    def __eq__(self, other):
        return isinstance(other, RunConfig) and self._values == other._values

    def __ne__(self, other):
        return not self == other

    @classmethod
    def loads(cls, text):
        if text.lstrip().startswith('{'):
            try:
                obj = json.loads(text)
            except ValueError as e:
                kl_exc_config('Malformed JSON: {0}'.format(e), key='json')
            if not isinstance(obj, dict):
                kl_exc_config('JSON configuration must be an object',
                              key='json')
            return cls(_flatten(obj))
        return cls(_parse_lines(text))

    @classmethod
    def load(cls, path):
        try:
            with open(path, 'r') as fp:
                text = fp.read()
        except (IOError, OSError) as e:
            kl_exc_io('Cannot read configuration: {0}'.format(e), path)
        log.debug('config: loaded path=%s', path)
        return cls.loads(text)

    def dumps(self):
        lines = ['{0} = {1}'.format(k, KEY_HANDLERS[k].to_text(self._values[k]))
                 for k in self.keys()]
        return '\n'.join(lines) + '\n'

    def section(self, name):
        """
        :return: ``{short_key: value}`` for all keys below `name`
        """
        prefix = name + '.'
        return dict((k[len(prefix):], v) for k, v in self._values.items()
                    if k.startswith(prefix))

    def _build(self, section, func, *args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ArgumentError as e:
            kl_exc_config(e.message or str(e), key=section, obj=e.objextra)

    def domain_spec(self):
        from kirchlab.grid import DomainSpec
        sec = self.section('domain')
        return self._build('domain', DomainSpec, sec['shape'],
                           radius=sec['radius'], center=sec['center'],
                           width=sec['width'], height=sec['height'])

    def grid(self):
        from kirchlab.grid import build_grid
        return build_grid(self.domain_spec(), self['mesh.h'])

    def coefficient(self):
        from kirchlab.model import KirchhoffCoefficient
        sec = self.section('kirchhoff')
        extra = dict((k, sec[k]) for k in ('a1', 'a2', 'sigma', 't0')
                     if sec[k] is not None)
        kind = sec['kind']
        if kind == COEF_CONSTANT:
            return self._build('kirchhoff', KirchhoffCoefficient.constant,
                               sec['m0'], **extra)
        if kind == COEF_AFFINE:
            return self._build('kirchhoff', KirchhoffCoefficient.affine,
                               sec['m0'], sec['a'], **extra)
        return self._build('kirchhoff', KirchhoffCoefficient.logarithmic,
                           **extra)

    def nonlinearity(self):
        from kirchlab.model import Nonlinearity
        sec = self.section('nonlinearity')
        common = dict(s0=sec['s0'], K0=sec['K0'], beta0=sec['beta0'])
        if sec['kind'] == NL_PAPER_EXAMPLE:
            return self._build('nonlinearity', Nonlinearity.paper_example,
                               sec['alpha0'], **common)
        return self._build('nonlinearity', Nonlinearity.power, sec['p'],
                           **common)

    def sampling_spec(self):
        from kirchlab.hypotheses import SamplingSpec
        return SamplingSpec(**self.section('validation'))

    def solver_options(self):
        from kirchlab.solver import SolverOptions
        return self._build('solver', SolverOptions,
                           **self.section('solver'))

    def context(self, validate=True):
        from kirchlab.energy import EnergyContext
        return EnergyContext(self.coefficient(), self.nonlinearity(),
                             self.grid(), validate=validate,
                             sampling=self.sampling_spec())
