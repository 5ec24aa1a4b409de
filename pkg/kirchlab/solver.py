"""
Ground states by Nehari-projected Sobolev gradient descent, empirical
mountain-pass probes and the end-to-end level bound check.
"""
import logging
import math
import time

import numpy as np

from kirchlab._rtconfig import KL, kl_exc_args, kl_exc_config
from kirchlab.constants import (
    GUESS_BUMP, GUESS_MOSER, GUESS_FILE, GUESSES,
    SOLVE_CONVERGED, SOLVE_MAX_ITERS, SOLVE_STALLED, SOLVE_OVERFLOW,
    KL_EXC_SOLVER, KL_EXC_PROBE
)
from kirchlab.energy import (
    energy, gradient, gradient_norm, weak_residual, fibering_derivative,
    nehari_project
)
from kirchlab.exceptions import ExpOverflowError, ProjectionError, SolverError
from kirchlab.grid import Field, dirichlet_energy, poisson_solve
from kirchlab.model import eval_m, eval_M
from kirchlab.moser import (
    MoserFamily, moser_field, level_threshold
)
from kirchlab.result import SolveReport, ProbeReport, BoundReport, RayMax

log = logging.getLogger(__name__)

NOISE_FACTOR = 64.0 * np.finfo(float).eps


class SolverOptions(object):
    """
    Parameters of :func:`solve_ground_state`.

    ``step`` is the initial step along the negative Sobolev gradient; after
    a step accepted without backtracking the next one may grow up to
    ``step_max``. ``restarts`` perturbed copies of the initial guess are
    solved as well, with seeds ``seed + 1 .. seed + restarts``.
    """
    __slots__ = ['max_iters', 'step', 'step_max', 'armijo_c', 'backtrack',
                 'max_backtracks', 'grad_tol', 'cg_tol', 'initial_guess',
                 'moser_n', 'guess_path', 'seed', 'restarts']

    def __init__(self, max_iters=5000, step=0.5, step_max=None,
                 armijo_c=1e-4, backtrack=0.5, max_backtracks=40,
                 grad_tol=1e-7, cg_tol=None, initial_guess=GUESS_BUMP,
                 moser_n=8, guess_path=None, seed=0, restarts=0):
        if int(max_iters) < 1:
            kl_exc_args('max_iters must be >= 1', obj=max_iters)
        for name, val in (('step', step), ('armijo_c', armijo_c),
                          ('grad_tol', grad_tol)):
            if not val > 0:
                kl_exc_args('{0} must be positive'.format(name), obj=val)
        if not 0 < backtrack < 1:
            kl_exc_args('backtrack must lie in (0, 1)', obj=backtrack)
        if initial_guess not in GUESSES:
            kl_exc_args('Unknown initial guess', obj=initial_guess)
        if initial_guess == GUESS_FILE and not guess_path:
            kl_exc_args('File initial guess needs a path')
        if int(restarts) < 0:
            kl_exc_args('restarts must be >= 0', obj=restarts)

        self.max_iters = int(max_iters)
        self.step = float(step)
        self.step_max = float(step_max) if step_max else 4.0 * self.step
        self.armijo_c = float(armijo_c)
        self.backtrack = float(backtrack)
        self.max_backtracks = int(max_backtracks)
        self.grad_tol = float(grad_tol)
        self.cg_tol = cg_tol
        self.initial_guess = initial_guess
        self.moser_n = int(moser_n)
        self.guess_path = guess_path
        self.seed = int(seed)
        self.restarts = int(restarts)

    def to_dict(self):
        return dict((k, getattr(self, k)) for k in self.__slots__)


def _normalized(u):
    big_e = dirichlet_energy(u)
    if big_e <= 0:
        kl_exc_args('Initial guess must be nonzero')
    return u / math.sqrt(big_e)


def bump_guess(grid):
    """
    ``max(0, 1 - |x - x0|^2 / d^2)`` scaled to unit Dirichlet norm.
    """
    cx, cy = grid.x0
    d2 = grid.d * grid.d
    return _normalized(Field.from_function(
        grid, lambda x, y: np.maximum(
            0.0, 1.0 - ((x - cx) ** 2 + (y - cy) ** 2) / d2)))


def initial_guess(ctx, opts):
    grid = ctx.grid
    kind = opts.initial_guess
    if kind == GUESS_BUMP:
        return bump_guess(grid)
    if kind == GUESS_MOSER:
        return _normalized(moser_field(
            MoserFamily(opts.moser_n, grid.d, grid.x0), grid))
    from kirchlab.output import read_field
    u = read_field(opts.guess_path, grid)
    if u.min() < 0 or u.is_zero():
        kl_exc_args('Initial guess must be nonnegative and nonzero',
                    obj=opts.guess_path)
    return u


def _perturbed(u, rng):
    """
    Multiply `u` by a smooth positive random factor in ``[0.5, 1.5]``.
    """
    noise = poisson_solve(Field(u.grid, rng.random(u.size)))
    w = noise.values / max(noise.max(), 1e-300)
    return Field(u.grid, u.values * (0.5 + w))


def _energy_parts(ctx, u):
    half_m = 0.5 * eval_M(ctx.coef, dirichlet_energy(u))
    int_f = u.grid.cell_area * float(np.sum(ctx.F_values(u.values)))
    return half_m, int_f


def _noise_floor(ctx, u):
    half_m, int_f = _energy_parts(ctx, u)
    return NOISE_FACTOR * (abs(half_m) + abs(int_f))


class _Iterate(object):
    __slots__ = ['u', 'energy', 'grad', 'grad_norm']

    def __init__(self, ctx, u, cg_tol):
        self.u = u
        self.energy = energy(ctx, u)
        self.grad = gradient(ctx, u, cg_tol)
        self.grad_norm = gradient_norm(self.grad)


def _try_point(ctx, v):
    if v.is_zero():
        return None
    try:
        return nehari_project(ctx, v).field
    except (ProjectionError, ExpOverflowError) as e:
        log.debug('descent: trial rejected reason=%s', e.__class__.__name__)
        return None


def _descend(ctx, cur, opts, trace):
    """
    :return: ``(iterate, iterations, status)``
    """
    step = opts.step
    for k in range(1, opts.max_iters + 1):
        if cur.grad_norm <= opts.grad_tol:
            return cur, k - 1, SOLVE_CONVERGED

        noise = _noise_floor(ctx, cur.u)
        s = step
        nxt = None
        for _ in range(opts.max_backtracks):
            point = _try_point(ctx, (cur.u - cur.grad * s).positive_part())
            if point is not None:
                try:
                    trial_e = energy(ctx, point)
                except ExpOverflowError:
                    trial_e = None
                if trial_e is not None:
                    armijo = (trial_e <= cur.energy -
                              opts.armijo_c * s * cur.grad_norm ** 2)
                    if armijo or trial_e - cur.energy <= noise:
                        cand = _Iterate(ctx, point, opts.cg_tol)
                        if armijo or cand.grad_norm < cur.grad_norm:
                            nxt = cand
                            break
            s *= opts.backtrack

        if nxt is None:
            return cur, k - 1, SOLVE_STALLED

        assert nxt.energy <= cur.energy + noise, 'descent increased energy'
        if s == step:
            step = min(step / opts.backtrack, opts.step_max)
        else:
            step = s
        cur = nxt
        trace.append([k, cur.energy, cur.grad_norm, s])
        log.debug('descent: k=%d energy=%.16g grad=%.3e step=%.3g', k,
                  cur.energy, cur.grad_norm, s)

    status = (SOLVE_CONVERGED if cur.grad_norm <= opts.grad_tol
              else SOLVE_MAX_ITERS)
    return cur, opts.max_iters, status


def _polish(ctx, cur, opts):
    """
    One fixed-point step ``u <- P_N((-Delta_h)^{-1} f(u) / m(|u|^2))``,
    kept when it does not raise the gradient residual.
    """
    m_e = eval_m(ctx.coef, dirichlet_energy(cur.u))
    w = poisson_solve(Field(cur.u.grid, ctx.f_values(cur.u.values)),
                      opts.cg_tol)
    point = _try_point(ctx, (w / m_e).positive_part())
    if point is None:
        return cur
    try:
        cand = _Iterate(ctx, point, opts.cg_tol)
    except ExpOverflowError:
        return cur
    if cand.grad_norm <= cur.grad_norm:
        log.debug('polish: grad %.3e -> %.3e', cur.grad_norm, cand.grad_norm)
        return cand
    return cur


def _fill_report(ctx, report, cur, its, status, trace):
    u = cur.u
    big_e = dirichlet_energy(u)
    report.field = u
    report.energy = cur.energy
    report.dirichlet_energy = big_e
    report.nehari_residual = fibering_derivative(ctx, u, 1.0, big_e)
    report.grad_residual = cur.grad_norm
    res, fnorm = weak_residual(ctx, u)
    report.weak_residual = res / fnorm if fnorm > 0 else res
    report.iterations = its
    report.status = status
    report.trace = trace
    report.min_value = u.min()
    report.positive = u.min() > 0
    alpha0 = ctx.nl.alpha0
    if alpha0 is not None:
        report.threshold = level_threshold(ctx.coef, alpha0)
        report.margin = report.threshold - report.energy
    return report


def _overflow_report(ctx, u, err, trace):
    report = SolveReport()
    report.field = u
    report.status = SOLVE_OVERFLOW if getattr(err, 'overflow', True) \
        else SOLVE_STALLED
    report.trace = trace
    report.min_value = u.min()
    report.dirichlet_energy = dirichlet_energy(u)
    report.iterations = len(trace)
    return report


def _solve_once(ctx, guess, opts):
    trace = []
    try:
        start = nehari_project(ctx, guess).field
        cur = _Iterate(ctx, start, opts.cg_tol)
    except (ProjectionError, ExpOverflowError) as e:
        report = _overflow_report(ctx, guess, e, trace)
        KL.exc_common(KL_EXC_SOLVER,
                      'Initial guess cannot be projected: {0}'.format(e),
                      report=report, status=report.status)

    cur, its, status = _descend(ctx, cur, opts, trace)
    cur = _polish(ctx, cur, opts)
    if cur.grad_norm <= opts.grad_tol:
        status = SOLVE_CONVERGED
    return _fill_report(ctx, SolveReport(), cur, its, status, trace)


def solve_ground_state(ctx, opts=None, guess=None):
    """
    Minimize the energy over the Nehari manifold.

    Iterates ``u <- P_N(max(u - s grad I(u), 0))`` with Armijo
    backtracking on ``s``. With ``opts.restarts`` the lowest-energy
    converged run is kept (or the lowest-energy run if none converged).
    A restart that fails is logged and left out of ``seeds``.

    :param ctx: The :class:`~kirchlab.energy.EnergyContext`
    :param opts: :class:`SolverOptions`
    :param guess: Explicit initial :class:`~kirchlab.grid.Field`; overrides
        ``opts.initial_guess``
    :return: A :class:`~kirchlab.result.SolveReport`
    :raise SolverError: if the initial guess cannot be projected; the
        error carries the partial ``report`` (status ``overflow`` when the
        cap was hit)
    """
    opts = opts or SolverOptions()
    started = time.perf_counter()
    if guess is None:
        guess = initial_guess(ctx, opts)
    elif guess.is_zero() or guess.min() < 0:
        kl_exc_args('Initial guess must be nonnegative and nonzero')

    log.info('solve: start N=%d guess=%s restarts=%d', ctx.grid.N,
             opts.initial_guess, opts.restarts)
    best = _solve_once(ctx, guess, opts)
    seeds = [opts.seed]
    energies = [best.energy]

    for r in range(1, opts.restarts + 1):
        seed = opts.seed + r
        rng = np.random.default_rng(seed)
        try:
            rep = _solve_once(ctx, _perturbed(guess, rng), opts)
        except SolverError as e:
            log.warning('solve: restart seed=%d failed: %s', seed, e)
            continue
        seeds.append(seed)
        energies.append(rep.energy)
        if (rep.success, -rep.energy) > (best.success, -best.energy):
            best = rep

    best.seeds = seeds
    best.restart_energies = energies
    best.timing = {'seconds': time.perf_counter() - started}
    best.inputs = {
        'coefficient': ctx.coef.to_dict(),
        'nonlinearity': ctx.nl.to_dict(),
        'grid': ctx.grid.to_dict(),
        'options': opts.to_dict()
    }
    log.info('solve: status=%s energy=%.12g grad=%.3e iterations=%d',
             best.status, best.energy, best.grad_residual, best.iterations)
    return best


def _check_ray_start(u0):
    if u0.is_zero() or u0.min() < 0:
        kl_exc_args('Ray start must be nonnegative and nonzero')


def _safe_energy(ctx, u):
    try:
        return energy(ctx, u)
    except ExpOverflowError:
        return -float('inf')


def probe_directions(u0, count, seed):
    """
    ``u0`` followed by ``count - 1`` smooth random nonnegative fields, all
    of unit Dirichlet norm.
    """
    rng = np.random.default_rng(seed)
    dirs = [_normalized(u0)]
    for _ in range(int(count) - 1):
        w = poisson_solve(Field(u0.grid, rng.random(u0.size)))
        dirs.append(_normalized(w))
    return dirs


def geometry_probe(ctx, rho_grid, u0, directions=16, seed=0):
    """
    Empirical mountain-pass geometry.

    For every ``rho`` the minimum energy over ``directions`` nonnegative
    fields on the sphere ``|u| = rho`` is reported; ``rho_star`` is the
    largest radius up to which all minima are positive. Along the ray
    through `u0` the parameter is doubled until the energy is negative
    and the point lies outside that sphere.

    :return: A :class:`~kirchlab.result.ProbeReport`
    :raise ProbeError: if the cap is reached first
    """
    _check_ray_start(u0)
    rhos = sorted(float(r) for r in rho_grid)
    if not rhos or rhos[0] <= 0:
        kl_exc_args('rho grid must hold positive radii', obj=rho_grid)

    dirs = probe_directions(u0, directions, seed)
    rows = []
    rho_star = tau_star = None
    below = True
    for rho in rhos:
        tau = min(_safe_energy(ctx, w * rho) for w in dirs)
        rows.append((rho, tau, len(dirs)))
        if below and tau > 0:
            rho_star, tau_star = rho, tau
        else:
            below = False
        log.debug('probe: rho=%.6g tau=%.6g', rho, tau)

    w = dirs[0]
    t_cap = ctx.nl.s_cap / w.max()
    floor = rho_star or 0.0
    t = 1.0
    while True:
        if t > t_cap:
            KL.exc_common(KL_EXC_PROBE,
                          'No negative-energy point below the cap',
                          t_safe=t / 2.0, cap=t_cap)
        try:
            val = energy(ctx, w * t)
        except ExpOverflowError:
            KL.exc_common(KL_EXC_PROBE,
                          'No negative-energy point below the cap',
                          t_safe=t / 2.0, cap=t_cap)
        if val < 0 and t > floor:
            break
        t *= 2.0

    report = ProbeReport(rows, rho_star, tau_star, t, t, val)
    report.inputs = {'rho_grid': rhos, 'directions': len(dirs),
                     'seed': seed, 'grid': ctx.grid.to_dict()}
    log.info('probe: rho_star=%r tau_star=%r e_norm=%.6g e_energy=%.6g',
             rho_star, tau_star, t, val)
    return report


def minimax_along_ray(ctx, u0):
    """
    Maximum of ``t -> I(t u0)``, attained at the Nehari point of the ray.

    :return: :class:`~kirchlab.result.RayMax`
    """
    _check_ray_start(u0)
    pt = nehari_project(ctx, u0)
    return RayMax(pt.t_star, energy(ctx, pt.field))


def verify_level_bound(ctx, opts=None, ns=(2, 4, 8, 16)):
    """
    Compare the computed mountain-pass level with ``M(4 pi / alpha0) / 2``.
    The level is estimated by the ground state energy and by the ray
    maxima through the Moser fields ``G_n`` centered in the largest
    inscribed ball.

    :raise ConfigurationError: if the nonlinearity has no critical exponent
    """
    alpha0 = ctx.nl.alpha0
    if alpha0 is None:
        kl_exc_config('Level threshold needs a finite alpha0',
                      key='nonlinearity.alpha0')
    opts = opts or SolverOptions()
    threshold = level_threshold(ctx.coef, alpha0)
    solved = solve_ground_state(ctx, opts)

    grid = ctx.grid
    moser_values = {}
    for n in ns:
        fam = MoserFamily(n, grid.d, grid.x0)
        try:
            moser_values[fam.n] = minimax_along_ray(
                ctx, moser_field(fam, grid)).value
        except (ProjectionError, ExpOverflowError) as e:
            log.warning('bound: ray through G_%d failed: %s', n, e)
            moser_values[fam.n] = None

    inputs = {
        'coefficient': ctx.coef.to_dict(),
        'nonlinearity': ctx.nl.to_dict(),
        'grid': grid.to_dict(),
        'options': opts.to_dict(),
        'ns': [int(n) for n in ns],
        'solve_status': solved.status
    }
    report = BoundReport(threshold, solved.energy, moser_values, inputs)
    log.info('bound: threshold=%.12g c_star_est=%.12g passed=%s',
             threshold, report.c_star_est, report.passed)
    return report
