"""
Command line entry point: ``kirchlab <subcommand> [options]``.

Exit codes: 0 on success, 1 when a hypothesis check fails, 2 on any other
error (configuration, solver, I/O).
"""
import argparse
import logging
import sys

from kirchlab._rtconfig import KL, kl_exc_config
from kirchlab.config import RunConfig
from kirchlab.constants import KL_EXIT_ERROR
from kirchlab.exceptions import KirchlabError
from kirchlab.executors import EXECUTORS

log = logging.getLogger(__name__)

LOG_FORMAT = '%(levelname)s %(name)s: %(message)s'


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-c', '--config', metavar='PATH',
                        help='configuration file (key = value or JSON)')
    common.add_argument('-s', '--set', metavar='KEY=VALUE', action='append',
                        default=[], dest='overrides',
                        help='override a configuration key')
    common.add_argument('-o', '--output-dir', metavar='DIR',
                        help='directory receiving the report files')
    common.add_argument('--seed', type=int,
                        help='shortcut for solver.seed and probe.seed')
    common.add_argument('-v', '--verbose', action='count', default=0,
                        help='more logging (repeat for debug)')
    return common


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog='kirchlab',
        description='Numerical laboratory for nonlocal Kirchhoff problems')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    sub.add_parser('validate', parents=[common],
                   help='check the hypotheses on m and f')

    p = sub.add_parser('moser', parents=[common],
                       help='tabulate the Moser integral bound')
    p.add_argument('--n', dest='moser.n', metavar='N,N,...')
    p.add_argument('--d', dest='moser.d', metavar='D')

    p = sub.add_parser('solve', parents=[common],
                       help='compute a positive ground state')
    p.add_argument('--h', dest='mesh.h', metavar='H')
    p.add_argument('--guess', dest='solver.initial_guess',
                   metavar='KIND')

    p = sub.add_parser('probe', parents=[common],
                       help='probe the mountain-pass geometry')
    p.add_argument('--rho', dest='probe.rho', metavar='R,R,...')

    p = sub.add_parser('bound', parents=[common],
                       help='check the minimax level bound')
    p.add_argument('--n', dest='bound.n', metavar='N,N,...')

    p = sub.add_parser('fiber', parents=[common],
                       help='tabulate h(t) and h\'(t) along a ray')
    p.add_argument('--t-count', dest='fiber.t_count', metavar='COUNT')
    p.add_argument('--t-max', dest='fiber.t_max', metavar='T')
    return parser


def _log_level(verbose):
    if verbose >= 2:
        return logging.DEBUG
    if verbose == 1:
        return logging.INFO
    return getattr(logging, str(KL.log_level).upper(), logging.WARNING)


def build_config(args):
    cfg = RunConfig.load(args.config) if args.config else RunConfig()
    for item in args.overrides:
        key, sep, raw = item.partition('=')
        if not sep:
            kl_exc_config('Override must look like KEY=VALUE', key=item)
        cfg.set(key.strip(), raw)
    for key, raw in sorted(vars(args).items()):
        if '.' in key and raw is not None:
            cfg.set(key, raw)
    if args.seed is not None:
        cfg.set('solver.seed', args.seed)
        cfg.set('probe.seed', args.seed)
    return cfg


def output_dir(args, cfg):
    return args.output_dir or KL.output_dir or cfg['output.dir']


def run(argv=None):
    """
    :param argv: Arguments without the program name
    :return: The exit code
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=_log_level(args.verbose), stream=sys.stderr,
                        format=LOG_FORMAT)
    try:
        cfg = build_config(args)
        executor = EXECUTORS[args.command](cfg, output_dir(args, cfg))
        return executor.execute()
    except KirchlabError as e:
        sys.stderr.write('kirchlab {0}: {1}: {2}\n'.format(
            args.command, e.__class__.__name__, e))
        log.debug('%s: failed', args.command, exc_info=True)
        return KL_EXIT_ERROR


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
