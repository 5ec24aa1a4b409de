import math
import unittest

import numpy as np

from kirchlab.exceptions import ArgumentError, ResolutionError, SolverError
from kirchlab.grid import (
    DomainSpec, Field, build_grid, apply_laplacian, dirichlet_energy,
    dirichlet_inner, integrate, poisson_solve, cg_iteration_cap
)
from kirchlab.model import Nonlinearity, eval_F
from tests.base import KirchlabTestMixin


def _eigenfunction(grid):
    return Field.from_function(
        grid, lambda x, y: np.sin(math.pi * x) * np.sin(math.pi * y))


def _discrete_eigenvalue(h):
    return 2 * (2 - 2 * math.cos(math.pi * h)) / (h * h)


class DomainTest(unittest.TestCase):
    def test_inradius(self):
        self.assertEqual(1.5, DomainSpec.disk(1.5).inradius)
        rect = DomainSpec.rectangle(2, 1)
        self.assertEqual(0.5, rect.inradius)
        self.assertEqual((1.0, 0.5), rect.incenter)

    def test_bad_domains(self):
        self.assertRaises(ArgumentError, DomainSpec.disk, 0)
        self.assertRaises(ArgumentError, DomainSpec.rectangle, 1, -1)
        self.assertRaises(ArgumentError, DomainSpec, 'annulus')

    def test_contains_ball(self):
        rect = DomainSpec.rectangle(2, 1)
        self.assertTrue(rect.contains_ball((1.0, 0.5), 0.5))
        self.assertFalse(rect.contains_ball((0.4, 0.5), 0.5))
        disk = DomainSpec.disk(1.0, center=(1.0, 1.0))
        self.assertTrue(disk.contains_ball((1.0, 1.0), 1.0))
        self.assertFalse(disk.contains_ball((1.5, 1.0), 0.6))


class GridTest(KirchlabTestMixin, unittest.TestCase):
    def test_small_rectangle(self):
        grid = build_grid(DomainSpec.rectangle(2, 1), 0.5)
        self.assertEqual(3, grid.N)
        self.assertEqual(0.5, grid.d)
        self.assertEqual((1.0, 0.5), grid.x0)
        np.testing.assert_allclose(grid.coords[:, 1], 0.5)
        self.assertEqual([0.5, 1.0, 1.5], sorted(grid.coords[:, 0]))

    def test_no_interior_nodes(self):
        self.assertRaises(ResolutionError, build_grid,
                          DomainSpec.disk(0.05), 0.1)
        self.assertRaises(ArgumentError, build_grid, DomainSpec.disk(), 0)

    def test_disk_nodes_strictly_inside(self):
        grid = build_grid(DomainSpec.disk(1.0), 0.1)
        self.assertEqual(1.0, grid.d)
        self.assertEqual((0.0, 0.0), grid.x0)
        r2 = np.sum(grid.coords ** 2, axis=1)
        self.assertTrue(np.all(r2 < 1.0))
        # the lattice is symmetric about the centre
        self.assertTrue(np.any(np.all(np.abs(grid.coords) < 1e-12, axis=1)))

    def test_index_is_a_bijection(self):
        grid = self.unit_disk(1.0 / 16)
        idx = grid.index[grid.index >= 0]
        np.testing.assert_array_equal(np.arange(grid.N), np.sort(idx))
        self.assertFalse(grid.neighbors.flags.writeable)
        self.assertTrue(np.all(grid.neighbors < grid.N))

    def test_neighbors_are_symmetric(self):
        grid = self.unit_square(1.0 / 8)
        nbr = grid.neighbors
        for k in range(grid.N):
            left, right, down, up = nbr[k]
            if left >= 0:
                self.assertEqual(k, nbr[left, 1])
            if up >= 0:
                self.assertEqual(k, nbr[up, 2])


class FieldTest(KirchlabTestMixin, unittest.TestCase):
    def test_read_only(self):
        grid = self.unit_square(0.25)
        u = Field.zeros(grid)
        self.assertTrue(u.is_zero())

        def assign():
            u.values[0] = 1.0
        self.assertRaises(ValueError, assign)

    def test_validation(self):
        grid = self.unit_square(0.25)
        self.assertRaises(ArgumentError, Field, grid, np.ones(grid.N + 1))
        bad = np.ones(grid.N)
        bad[0] = np.nan
        self.assertRaises(ArgumentError, Field, grid, bad)
        other = self.unit_square(0.5)
        self.assertRaises(ArgumentError,
                          lambda: Field.zeros(grid) + Field.zeros(other))

    def test_arithmetic(self):
        grid = self.unit_square(0.25)
        u = Field(grid, np.arange(grid.N, dtype=float))
        v = 2 * u - u / 2 + (-u)
        np.testing.assert_allclose(0.5 * u.values, v.values)
        self.assertEqual(grid.N - 1, u.max())
        self.assertEqual(0.0, (-u).positive_part().max())

    def test_to_array(self):
        grid = self.unit_disk(0.25)
        u = Field(grid, np.ones(grid.N))
        arr = u.to_array(fill=-1.0)
        self.assertEqual((grid.nx, grid.ny), arr.shape)
        self.assertEqual(grid.N, int(np.sum(arr == 1.0)))


class OperatorTest(KirchlabTestMixin, unittest.TestCase):
    def test_energy_of_zero(self):
        self.assertEqual(0.0, dirichlet_energy(Field.zeros(self.unit_disk())))

    def test_energy_positive(self):
        grid = self.unit_disk(1.0 / 16)
        u = self.random_field(grid, self.rng())
        self.assertTrue(dirichlet_energy(u) > 0)

    def test_energy_matches_inner_product(self):
        grid = self.unit_disk(1.0 / 16)
        rng = self.rng()
        for _ in range(5):
            u = self.random_field(grid, rng)
            self.assertRelClose(dirichlet_inner(u, u), dirichlet_energy(u),
                                1e-12)

    def test_single_node(self):
        grid = self.unit_square(0.25)
        vals = np.zeros(grid.N)
        vals[4] = 3.0
        # four edges, each with difference 3
        self.assertEqual(36.0, dirichlet_energy(Field(grid, vals)))

    def test_laplacian_symmetric(self):
        grid = self.unit_disk(1.0 / 16)
        rng = self.rng()
        for _ in range(5):
            u = self.random_field(grid, rng)
            v = self.random_field(grid, rng)
            self.assertRelClose(dirichlet_inner(u, v), dirichlet_inner(v, u),
                                1e-12)

    def test_eigenfunction(self):
        h = 1.0 / 32
        grid = self.unit_square(h)
        e = _eigenfunction(grid)
        lam = _discrete_eigenvalue(h)
        np.testing.assert_allclose(apply_laplacian(e).values, lam * e.values,
                                   rtol=1e-10, atol=1e-10)
        rayleigh = dirichlet_energy(e) / (grid.cell_area *
                                          np.dot(e.values, e.values))
        self.assertRelClose(rayleigh, lam, 1e-10)
        self.assertTrue(abs(lam - 2 * math.pi ** 2) < 0.05)

    def test_energy_convergence_order(self):
        exact = math.pi ** 2 / 2
        errors = []
        for h in (1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64):
            e = _eigenfunction(self.unit_square(h))
            errors.append(abs(dirichlet_energy(e) - exact))
        for coarse, fine in zip(errors, errors[1:]):
            self.assertTrue(math.log(coarse / fine, 2) >= 1.8)

    def test_disk_bump_energy(self):
        # u = 1 - r^2 has int |grad u|^2 = 2 pi on the unit disk
        grid = self.unit_disk(1.0 / 64)
        u = Field.from_function(grid, lambda x, y: 1 - x * x - y * y)
        self.assertRelClose(dirichlet_energy(u), 2 * math.pi, 0.02)


class IntegrateTest(KirchlabTestMixin, unittest.TestCase):
    def test_area(self):
        h = 1.0 / 64
        for grid, tol in ((self.unit_square(h), 3 * h),
                          (self.unit_disk(h), 7 * h)):
            total = integrate(lambda x, s: 1.0, Field.zeros(grid))
            self.assertTrue(abs(total - grid.spec.area) <= tol)
        grid = build_grid(DomainSpec.rectangle(2, 1), h)
        self.assertEqual(2.0, grid.spec.area)
        one = Field(grid, np.ones(grid.N))
        self.assertTrue(abs(integrate(lambda x, s: s * s, one) - 2.0) <=
                        4 * h)

    def test_primitive_converges(self):
        nl = Nonlinearity.paper_example(1.0)
        values = []
        for h in (1.0 / 64, 1.0 / 128):
            e = _eigenfunction(self.unit_square(h))
            values.append(integrate(lambda x, s: eval_F(nl, x, s), e))
        self.assertRelClose(values[0], values[1], 1e-3)

    def test_coordinates_passed(self):
        grid = self.unit_square(0.25)
        u = Field.zeros(grid)
        # int x over the interior nodes of the unit square
        val = integrate(lambda x, s: x[:, 0], u)
        self.assertAlmostEqual(9 * 0.5 * grid.cell_area, val, places=12)


class PoissonTest(KirchlabTestMixin, unittest.TestCase):
    def test_zero_rhs(self):
        grid = self.unit_disk(1.0 / 16)
        self.assertTrue(poisson_solve(Field.zeros(grid)).is_zero())

    def test_eigen_rhs(self):
        h = 1.0 / 32
        grid = self.unit_square(h)
        e = _eigenfunction(grid)
        v = poisson_solve(e * _discrete_eigenvalue(h), tol=1e-12)
        np.testing.assert_allclose(v.values, e.values, atol=1e-8)

    def test_torsion_centre(self):
        grid = self.unit_square(1.0 / 64)
        v = poisson_solve(Field(grid, np.ones(grid.N)))
        centre = grid.index[33, 33]
        self.assertTrue(np.allclose(grid.coords[centre], 0.5))
        self.assertTrue(abs(v.values[centre] - 0.07367) < 5e-4)

    def test_residual(self):
        grid = self.unit_disk(1.0 / 32)
        b = self.random_field(grid, self.rng())
        v = poisson_solve(b, tol=1e-12)
        res = apply_laplacian(v) - b
        self.assertTrue(np.linalg.norm(res.values) <=
                        1e-11 * np.linalg.norm(b.values))

    def test_iteration_cap(self):
        self.assertEqual(1000 + 50 * 10, cg_iteration_cap(100))
        grid = self.unit_square(1.0 / 8)
        b = self.random_field(grid, self.rng())
        with self.assertRaises(SolverError) as cm:
            poisson_solve(b, tol=1e-30)
        self.assertTrue(cm.exception.residual > 0)
        self.assertEqual(cg_iteration_cap(grid.N), cm.exception.iterations)
        self.assertRaises(ArgumentError, poisson_solve, b, tol=0)
