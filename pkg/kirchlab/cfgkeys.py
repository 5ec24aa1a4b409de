"""
Typed handlers for every admissible run configuration key.

A handler converts raw input (text from a ``key = value`` file, or a native
value from JSON or the API) into the stored value, and a stored value back
into text. Parsing the text of a value yields the same value again.
"""
from kirchlab._rtconfig import kl_exc_config
from kirchlab.constants import (
    SHAPES, COEF_CONSTANT, COEF_AFFINE, COEF_LOGARITHMIC,
    NL_PAPER_EXAMPLE, NL_POWER, GUESSES
)

NONE_TEXT = 'none'


class KeyHandler(object):
    optional = False

    def __init__(self, optional=False):
        self.optional = optional

    def convert_input(self, raw):
        raise NotImplementedError()

    def convert_output(self, value):
        return str(value)

    def execute(self, key, raw):
        """
        :return: The converted value of `raw`
        :raise ConfigurationError: carrying `key` if `raw` is not admissible
        """
        if isinstance(raw, str):
            raw = raw.strip()
        if raw is None or (isinstance(raw, str) and
                           raw.lower() == NONE_TEXT):
            if self.optional:
                return None
            kl_exc_config('Value is required', key=key, obj=raw)
        try:
            return self.convert_input(raw)
        except (ValueError, TypeError) as e:
            kl_exc_config('Bad value: {0}'.format(e), key=key, obj=raw)

    def to_text(self, value):
        if value is None:
            return NONE_TEXT
        return self.convert_output(value)


class FloatHandler(KeyHandler):
    def __init__(self, minimum=None, strict=False, **kwargs):
        super(FloatHandler, self).__init__(**kwargs)
        self.minimum = minimum
        self.strict = strict

    def _check(self, val):
        lo = self.minimum
        if lo is not None and (val < lo or (self.strict and val == lo)):
            raise ValueError('{0!r} is below {1}{2!r}'.format(
                val, '' if self.strict else 'or equal to ', lo))
        return val

    def convert_input(self, raw):
        if isinstance(raw, bool):
            raise TypeError('expected a number')
        val = float(raw)
        if val != val or val in (float('inf'), float('-inf')):
            raise ValueError('expected a finite number')
        return self._check(val)

    def convert_output(self, value):
        return repr(float(value))


class PositiveHandler(FloatHandler):
    def __init__(self, **kwargs):
        super(PositiveHandler, self).__init__(minimum=0.0, strict=True,
                                              **kwargs)


class NonnegHandler(FloatHandler):
    def __init__(self, **kwargs):
        super(NonnegHandler, self).__init__(minimum=0.0, **kwargs)


class IntHandler(FloatHandler):
    def convert_input(self, raw):
        if isinstance(raw, bool):
            raise TypeError('expected an integer')
        if isinstance(raw, str):
            val = int(raw, 10)
        else:
            val = int(raw)
            if val != raw:
                raise ValueError('expected an integer')
        return self._check(val)

    def convert_output(self, value):
        return str(int(value))


class ChoiceHandler(KeyHandler):
    def __init__(self, choices, **kwargs):
        super(ChoiceHandler, self).__init__(**kwargs)
        self.choices = tuple(choices)

    def convert_input(self, raw):
        val = str(raw)
        if val not in self.choices:
            raise ValueError('expected one of {0}'.format(
                ', '.join(self.choices)))
        return val


class ListHandler(KeyHandler):
    """
    Comma separated list of items converted by `item`.
    """

    def __init__(self, item, length=None, **kwargs):
        super(ListHandler, self).__init__(**kwargs)
        self.item = item
        self.length = length

    def convert_input(self, raw):
        if isinstance(raw, str):
            parts = [p for p in raw.replace(' ', '').split(',') if p]
        elif isinstance(raw, (list, tuple)):
            parts = list(raw)
        else:
            raise TypeError('expected a list')
        if not parts:
            raise ValueError('empty list')
        if self.length is not None and len(parts) != self.length:
            raise ValueError('expected {0} items'.format(self.length))
        return tuple(self.item.convert_input(p) for p in parts)

    def convert_output(self, value):
        return ','.join(self.item.convert_output(v) for v in value)


class PathHandler(KeyHandler):
    def convert_input(self, raw):
        val = str(raw)
        if not val:
            raise ValueError('empty path')
        return val


class BoolHandler(KeyHandler):
    TRUE = ('1', 'true', 'yes', 'on')
    FALSE = ('0', 'false', 'no', 'off')

    def convert_input(self, raw):
        if isinstance(raw, bool):
            return raw
        val = str(raw).lower()
        if val in self.TRUE:
            return True
        if val in self.FALSE:
            return False
        raise ValueError('expected a boolean')

    def convert_output(self, value):
        return 'true' if value else 'false'


_POS = PositiveHandler()
_POS_OPT = PositiveHandler(optional=True)
_NONNEG = NonnegHandler()

KEY_HANDLERS = {
    'domain.shape': ChoiceHandler(SHAPES),
    'domain.radius': _POS,
    'domain.center': ListHandler(FloatHandler(), length=2),
    'domain.width': _POS,
    'domain.height': _POS,
    'mesh.h': _POS,

    'kirchhoff.kind': ChoiceHandler(
        (COEF_CONSTANT, COEF_AFFINE, COEF_LOGARITHMIC)),
    'kirchhoff.m0': _POS,
    'kirchhoff.a': _NONNEG,
    'kirchhoff.a1': _POS_OPT,
    'kirchhoff.a2': _POS_OPT,
    'kirchhoff.sigma': FloatHandler(optional=True),
    'kirchhoff.t0': _POS_OPT,

    'nonlinearity.kind': ChoiceHandler((NL_PAPER_EXAMPLE, NL_POWER)),
    'nonlinearity.alpha0': _POS,
    'nonlinearity.p': FloatHandler(minimum=1.0),
    'nonlinearity.s0': _POS,
    'nonlinearity.K0': _POS,
    'nonlinearity.beta0': _POS_OPT,

    'solver.max_iters': IntHandler(minimum=1),
    'solver.step': _POS,
    'solver.step_max': _POS_OPT,
    'solver.armijo_c': _POS,
    'solver.backtrack': _POS,
    'solver.max_backtracks': IntHandler(minimum=1),
    'solver.grad_tol': _POS,
    'solver.cg_tol': _POS_OPT,
    'solver.initial_guess': ChoiceHandler(GUESSES),
    'solver.moser_n': IntHandler(minimum=2),
    'solver.guess_path': PathHandler(optional=True),
    'solver.seed': IntHandler(minimum=0),
    'solver.restarts': IntHandler(minimum=0),

    'validation.t_min': _NONNEG,
    'validation.t_max': _POS,
    'validation.t_count': IntHandler(minimum=2),
    'validation.s_min': _POS,
    'validation.s_max': _POS,
    'validation.s_count': IntHandler(minimum=2),
    'validation.pair_count': IntHandler(minimum=2),
    'validation.tolerance': _POS,
    'validation.theta': _POS_OPT,
    'validation.mu': _POS_OPT,

    'moser.n': ListHandler(IntHandler(minimum=2)),
    'moser.d': _POS,

    'probe.rho': ListHandler(_POS),
    'probe.directions': IntHandler(minimum=1),
    'probe.seed': IntHandler(minimum=0),

    'bound.n': ListHandler(IntHandler(minimum=2)),

    'fiber.t_count': IntHandler(minimum=2),
    'fiber.t_max': _POS_OPT,

    'output.dir': PathHandler(),
    'output.timing': BoolHandler(),
}
