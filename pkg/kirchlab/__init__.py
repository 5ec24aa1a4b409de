"""
Numerical laboratory for the nonlocal Kirchhoff problem
``-m(|u|^2) Delta u = f(x, u)`` with Dirichlet boundary values on planar
domains.
"""
from kirchlab.model import (
    KirchhoffCoefficient, Nonlinearity, eval_m, eval_M, eval_f, eval_F
)
from kirchlab.hypotheses import SamplingSpec, validate_hypotheses
from kirchlab.grid import (
    DomainSpec, Grid, Field, build_grid, apply_laplacian, dirichlet_energy,
    dirichlet_inner, integrate, poisson_solve
)
from kirchlab.energy import (
    EnergyContext, FiberingSample, energy, gradient, fibering_derivative,
    nehari_project, nehari_energy, fiber_table
)
from kirchlab.moser import (
    MoserFamily, moser_value, moser_norm_sq, limite_integral,
    level_threshold, f3_threshold, moser_field, moser_table
)
from kirchlab.solver import (
    SolverOptions, solve_ground_state, geometry_probe, minimax_along_ray,
    verify_level_bound
)
from kirchlab.config import RunConfig
from kirchlab.output import write_report, write_field

__version__ = '0.1.0'
