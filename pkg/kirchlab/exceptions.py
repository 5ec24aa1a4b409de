"""
Exception hierarchy. Every error is built from a dictionary of parameters
so that callers (and the CLI) can inspect the offending object, the key
path or the partial report that was available when the error occurred.
"""


class KirchlabError(Exception):
    """
    Base class for all errors raised by this package.

    :param params: Either a message string or a dictionary of parameters.
        Recognised keys are ``message``, ``objextra`` (the offending
        object) and ``inner_cause`` (the exception which caused this one).
        Subclasses may accept more keys; all of them are available as
        attributes.
    """

    def __init__(self, params=None):
        if params is None:
            params = {}
        elif not isinstance(params, dict):
            params = {'message': str(params)}

        self.message = params.pop('message', None)
        self.objextra = params.pop('objextra', None)
        self.inner_cause = params.pop('inner_cause', None)
        self.params = params
        for k, v in params.items():
            setattr(self, k, v)

        super(KirchlabError, self).__init__(self.message)

    @classmethod
    def pyexc(cls, message=None, obj=None, inner=None, **kwargs):
        """
        Convenience constructor.

        :param message: Human readable message
        :param obj: The object which caused the error
        :param inner: Wrapped exception, if any
        :return: An instance of this class, ready to be raised
        """
        params = dict(kwargs)
        params['message'] = message or cls.__doc__.strip().split('\n')[0]
        params['objextra'] = obj
        params['inner_cause'] = inner
        return cls(params)

    def __str__(self):
        parts = [self.message or self.__class__.__name__]
        if self.objextra is not None:
            parts.append('Object={0!r}'.format(self.objextra))
        for k in sorted(self.params):
            if k in ('report',):
                continue
            parts.append('{0}={1!r}'.format(k, self.params[k]))
        if self.inner_cause is not None:
            parts.append('Inner cause={0!r}'.format(self.inner_cause))
        return ', '.join(parts)


class ArgumentError(KirchlabError):
    """Bad arguments provided"""


class DomainError(ArgumentError):
    """Argument outside the domain of the function"""


class ExpOverflowError(KirchlabError):
    """Exponential argument exceeds the overflow cap"""


class ResolutionError(KirchlabError):
    """Grid has no interior nodes"""


class ConfigurationError(KirchlabError):
    """Invalid configuration"""

    def __str__(self):
        key = self.params.get('key')
        base = super(ConfigurationError, self).__str__()
        if key:
            return '{0}: {1}'.format(key, base)
        return base


class SolverError(KirchlabError):
    """Solver did not reach a usable result"""


class ProjectionError(SolverError):
    """Fibering ray does not cross the Nehari manifold below the cap"""


class ProbeError(SolverError):
    """No negative-energy point found below the cap"""


class HypothesisError(KirchlabError):
    """A structural hypothesis fails"""


class KirchlabIOError(KirchlabError):
    """File could not be read or written"""
