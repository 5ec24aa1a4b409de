import os
import sys

from kirchlab import exceptions
from kirchlab.constants import (
    KL_EXC_ARGUMENTS, KL_EXC_DOMAIN, KL_EXC_OVERFLOW, KL_EXC_RESOLUTION,
    KL_EXC_CONFIG, KL_EXC_SOLVER, KL_EXC_PROJECTION, KL_EXC_PROBE,
    KL_EXC_HYPOTHESIS, KL_EXC_IO,
    EXP_CAP, NEHARI_TOL, CG_TOL
)

_IS_INITIALIZED = False


def _env_flag(name):
    return os.environ.get(name, '').lower() in ('1', 'true', 'yes', 'on')


class _KL_Class(object):
    """
    Process-wide runtime settings and error helpers. There is exactly one
    instance, :data:`KL`; settings change only through :meth:`configure`.
    """

    def __init__(self):
        global _IS_INITIALIZED
        if _IS_INITIALIZED:
            raise ValueError(
                'This class cannot be initialized more than once!')

        _IS_INITIALIZED = True
        self.exp_cap = EXP_CAP
        self.nehari_tol = NEHARI_TOL
        self.cg_tol = CG_TOL
        self.use_cffi = _env_flag('KIRCHLAB_CFFI')
        self.output_dir = os.environ.get('KIRCHLAB_OUTPUT_DIR') or None
        self.log_level = os.environ.get('KIRCHLAB_LOGLEVEL', 'WARNING')
        self.exc_map = {
            KL_EXC_ARGUMENTS: exceptions.ArgumentError,
            KL_EXC_DOMAIN: exceptions.DomainError,
            KL_EXC_OVERFLOW: exceptions.ExpOverflowError,
            KL_EXC_RESOLUTION: exceptions.ResolutionError,
            KL_EXC_CONFIG: exceptions.ConfigurationError,
            KL_EXC_SOLVER: exceptions.SolverError,
            KL_EXC_PROJECTION: exceptions.ProjectionError,
            KL_EXC_PROBE: exceptions.ProbeError,
            KL_EXC_HYPOTHESIS: exceptions.HypothesisError,
            KL_EXC_IO: exceptions.KirchlabIOError,
        }

    def configure(self, key, value):
        if key == 'exc_map' or not hasattr(self, key):
            raise KeyError('No such key: {0}'.format(key))
        setattr(self, key, value)

    def exc_common(self, mode, msg, **params):
        """
        Raise the exception class registered for `mode`. If an exception is
        currently being handled it is attached as ``inner_cause`` and its
        traceback is kept.
        """
        _, cur_ex, cur_bt = sys.exc_info()
        cls = self.exc_map[mode]
        obj = params.pop('objextra', None)
        new_ex = cls.pyexc(msg, obj, cur_ex, **params)
        if cur_bt:
            raise new_ex.with_traceback(cur_bt)
        raise new_ex

    def exc_args(self, msg='Bad arguments provided', obj=None):
        self.exc_common(KL_EXC_ARGUMENTS, msg, objextra=obj)

    def exc_domain(self, msg='Argument outside domain', obj=None):
        self.exc_common(KL_EXC_DOMAIN, msg, objextra=obj)

    def exc_overflow(self, arg, cap=None):
        cap = self.exp_cap if cap is None else cap
        self.exc_common(
            KL_EXC_OVERFLOW,
            'Exponential argument {0:.6g} exceeds cap {1:.6g}'.format(arg, cap),
            objextra=arg, cap=cap)

    def exc_config(self, msg, key=None, obj=None):
        self.exc_common(KL_EXC_CONFIG, msg, key=key, objextra=obj)

    def exc_io(self, msg, path):
        self.exc_common(KL_EXC_IO, msg, path=path)


KL = _KL_Class()
kl_exc_args = KL.exc_args
kl_exc_domain = KL.exc_domain
kl_exc_overflow = KL.exc_overflow
kl_exc_config = KL.exc_config
kl_exc_io = KL.exc_io
