"""
One executor per command line subcommand. An executor turns a
:class:`~kirchlab.config.RunConfig` into a report, writes the report files
and decides the exit code; subclasses override the hooks.
"""
import logging
import os

import numpy as np

from kirchlab.constants import (
    KL_EXIT_OK, KL_EXIT_HYPOTHESIS, KL_EXIT_ERROR, SOLVE_CONVERGED
)
from kirchlab.energy import (
    fiber_table, sign_changes, nehari_project
)
from kirchlab.exceptions import HypothesisError, ProjectionError, SolverError
from kirchlab.hypotheses import validate_hypotheses
from kirchlab.moser import moser_table
from kirchlab.output import write_report, write_field, write_csv
from kirchlab.result import FiberReport
from kirchlab.solver import (
    solve_ground_state, geometry_probe, verify_level_bound, initial_guess
)

log = logging.getLogger(__name__)


class BaseExecutor(object):
    """
    Executors are stateless apart from the configuration and the output
    directory they were created with.
    """

    NAME = None
    """
    Subcommand name; also the stem of the JSON report file
    """

    def __init__(self, cfg, output_dir, echo=print):
        """
        :param cfg: The :class:`~kirchlab.config.RunConfig`
        :param output_dir: Directory receiving the report files
        :param echo: Callable used for the human readable summary
        """
        self.cfg = cfg
        self.output_dir = output_dir
        self.echo = echo

    def path(self, name):
        return os.path.join(self.output_dir, name)

    def run(self):
        raise NotImplementedError()

    def exit_code(self, report):
        return KL_EXIT_OK

    def write_extra(self, report):
        """
        Hook for subclasses writing files besides the JSON report
        """
        pass

    def summarize(self, report):
        return '{0}: done'.format(self.NAME)

    def write(self, report):
        write_report(report, self.path(self.NAME + '.json'),
                     include_timing=self.cfg['output.timing'])
        self.write_extra(report)

    def execute(self):
        log.info('%s: start output_dir=%s', self.NAME, self.output_dir)
        report = self.run()
        self.write(report)
        self.echo(self.summarize(report))
        code = self.exit_code(report)
        log.info('%s: finished exit=%d', self.NAME, code)
        return code


def describe_entries(entries):
    lines = []
    for ent in entries:
        lines.append('{0:<16} {1:<15} witness={2!r} margin={3!r}'.format(
            ent.name, ent.status, ent.witness, ent.margin))
    return '\n'.join(lines)


class ValidateExecutor(BaseExecutor):
    NAME = 'validate'

    def run(self):
        cfg = self.cfg
        return validate_hypotheses(cfg.coefficient(), cfg.nonlinearity(),
                                   cfg.domain_spec().inradius,
                                   cfg.sampling_spec())

    def summarize(self, report):
        return describe_entries(report.entries)

    def exit_code(self, report):
        return KL_EXIT_OK if report.ok else KL_EXIT_HYPOTHESIS


class MoserExecutor(BaseExecutor):
    NAME = 'moser'

    def run(self):
        return moser_table(self.cfg['moser.n'], self.cfg['moser.d'])

    def write_extra(self, report):
        write_csv(self.path('moser.csv'),
                  ('n', 'q', 'limite_integral', 'lower_bound', 'limit'),
                  report.rows)

    def summarize(self, report):
        return '\n'.join('n={0} integral={1:.12g} lower_bound={2:.12g}'.format(
            r.n, r.integral, r.lower_bound) for r in report.rows)

    def exit_code(self, report):
        return KL_EXIT_OK if report.ok else KL_EXIT_ERROR


class ContextExecutor(BaseExecutor):
    """
    Base for subcommands needing an energy context. A hard hypothesis
    failure writes the hypothesis report in place of the regular one and
    exits with the hypothesis code.
    """

    def run_with_context(self, ctx):
        raise NotImplementedError()

    def run(self):
        return self.run_with_context(self.cfg.context(validate=True))

    def execute(self):
        try:
            return super(ContextExecutor, self).execute()
        except HypothesisError as e:
            report = e.report
            write_report(report, self.path(self.NAME + '.json'))
            self.echo(describe_entries(report.hard_failures))
            log.info('%s: hypothesis failure %s', self.NAME, e.failed)
            return KL_EXIT_HYPOTHESIS


class SolveExecutor(ContextExecutor):
    NAME = 'solve'

    def run_with_context(self, ctx):
        try:
            return solve_ground_state(ctx, self.cfg.solver_options())
        except SolverError as e:
            report = getattr(e, 'report', None)
            if report is not None:
                self.write(report)
            raise

    def write_extra(self, report):
        if report.field is not None:
            write_field(report.field, self.path('solve-field.csv'))

    def summarize(self, report):
        return ('status={0} energy={1!r} grad_residual={2!r} '
                'margin={3!r}'.format(report.status, report.energy,
                                      report.grad_residual, report.margin))

    def exit_code(self, report):
        return KL_EXIT_OK if report.status == SOLVE_CONVERGED \
            else KL_EXIT_ERROR


class ProbeExecutor(ContextExecutor):
    NAME = 'probe'

    def run_with_context(self, ctx):
        cfg = self.cfg
        u0 = initial_guess(ctx, cfg.solver_options())
        return geometry_probe(ctx, cfg['probe.rho'], u0,
                              directions=cfg['probe.directions'],
                              seed=cfg['probe.seed'])

    def summarize(self, report):
        return 'rho_star={0!r} tau_star={1!r} e_norm={2!r} ok={3}'.format(
            report.rho_star, report.tau_star, report.e_norm, report.ok)

    def exit_code(self, report):
        return KL_EXIT_OK if report.ok else KL_EXIT_ERROR


class BoundExecutor(ContextExecutor):
    NAME = 'bound'

    def run_with_context(self, ctx):
        return verify_level_bound(ctx, self.cfg.solver_options(),
                                  ns=self.cfg['bound.n'])

    def summarize(self, report):
        return 'threshold={0!r} c_star_est={1!r} margin={2!r} ' \
               'passed={3}'.format(report.threshold, report.c_star_est,
                                   report.margin, report.passed)

    def exit_code(self, report):
        return KL_EXIT_OK if report.passed else KL_EXIT_ERROR


class FiberExecutor(ContextExecutor):
    NAME = 'fiber'

    def run_with_context(self, ctx):
        cfg = self.cfg
        u = initial_guess(ctx, cfg.solver_options())
        try:
            t_star = nehari_project(ctx, u).t_star
        except ProjectionError as e:
            log.warning('fiber: no Nehari point on the ray: %s', e)
            t_star = None

        ts = None
        t_max = cfg['fiber.t_max']
        if t_max is not None:
            ts = np.geomspace(min(1e-4, 0.5 * t_max), t_max,
                              cfg['fiber.t_count'])
        samples = fiber_table(ctx, u, ts=ts, count=cfg['fiber.t_count'])
        inputs = {
            'coefficient': ctx.coef.to_dict(),
            'nonlinearity': ctx.nl.to_dict(),
            'grid': ctx.grid.to_dict(),
            'guess': cfg['solver.initial_guess']
        }
        return FiberReport(samples, sign_changes(samples), t_star, inputs)

    def write_extra(self, report):
        write_csv(self.path('fiber.csv'), ('t', 'h', 'h_prime'),
                  [(s.t, s.h, s.h_prime) for s in report.samples])

    def summarize(self, report):
        return 'samples={0} sign_changes={1} t_star={2!r}'.format(
            len(report.samples), report.sign_changes, report.t_star)


EXECUTORS = dict((cls.NAME, cls) for cls in (
    ValidateExecutor, MoserExecutor, SolveExecutor, ProbeExecutor,
    BoundExecutor, FiberExecutor))
