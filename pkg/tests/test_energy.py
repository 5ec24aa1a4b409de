import math
import unittest

import numpy as np

from kirchlab.constants import HYP_F2
from kirchlab.energy import (
    EnergyContext, energy, gradient, gradient_norm, weak_residual,
    fibering_value, fibering_derivative, nehari_project, nehari_energy,
    fiber_table, sign_changes
)
from kirchlab.exceptions import ArgumentError, HypothesisError, ProjectionError
from kirchlab.grid import (
    Field, dirichlet_energy, dirichlet_inner, poisson_solve
)
from kirchlab.model import KirchhoffCoefficient, Nonlinearity
from kirchlab.moser import MoserFamily, moser_field
from tests.base import KirchlabTestMixin, cached_grid


def _quartic(u):
    return u.grid.cell_area * float(np.sum(u.values ** 4))


class EnergyTest(KirchlabTestMixin, unittest.TestCase):
    def test_zero_field(self):
        ctx = self.critical_context(self.unit_disk(1.0 / 16))
        self.assertEqual(0.0, energy(ctx, Field.zeros(ctx.grid)))
        g = gradient(ctx, Field.zeros(ctx.grid))
        self.assertTrue(g.is_zero())

    def test_single_node(self):
        grid = self.unit_square(0.25)
        ctx = EnergyContext(KirchhoffCoefficient.affine(1, 1),
                            Nonlinearity.power(3), grid, validate=False)
        vals = np.zeros(grid.N)
        c = 0.7
        vals[4] = c
        big_e = 4 * c * c
        expected = 0.5 * (big_e + 0.5 * big_e ** 2) - \
            grid.cell_area * c ** 4 / 4
        self.assertAlmostEqual(expected, energy(ctx, Field(grid, vals)),
                               places=13)

    def test_small_field_is_quadratic(self):
        h = 1.0 / 16
        grid = self.unit_square(h)
        ctx = self.critical_context(grid)
        e = Field.from_function(
            grid, lambda x, y: np.sin(math.pi * x) * np.sin(math.pi * y))
        big_e = dirichlet_energy(e)
        for eps in (1e-2, 1e-3):
            val = energy(ctx, e * eps)
            self.assertTrue(val > 0)
            self.assertRelClose(val, 0.5 * eps * eps * big_e, 10 * eps * eps)

    def test_gradient_matches_difference_quotient(self):
        grid = self.unit_square(1.0 / 32)
        rng = self.rng()
        contexts = [
            EnergyContext(KirchhoffCoefficient.constant(1),
                          Nonlinearity.paper_example(1.0), grid,
                          validate=False),
            self.critical_context(grid),
        ]
        for ctx in contexts:
            for _ in range(10):
                u = self.smooth_field(grid, rng, 0.5)
                phi = poisson_solve(self.random_field(grid, rng))
                phi = phi * (0.5 / max(abs(phi.max()), abs(phi.min())))
                eps = 6e-6
                fd = (energy(ctx, u + phi * eps) -
                      energy(ctx, u - phi * eps)) / (2 * eps)
                g = gradient(ctx, u, tol=1e-12)
                self.assertTrue(abs(dirichlet_inner(g, phi) - fd) <=
                                1e-5 * abs(fd))

    def test_lane_emden_gradient(self):
        grid = self.unit_square(1.0 / 16)
        ctx = self.lane_emden(grid)
        u = self.smooth_field(grid, self.rng(), 0.8)
        g = gradient(ctx, u, tol=1e-12)
        expected = u - poisson_solve(Field(grid, u.values ** 3), tol=1e-12)
        np.testing.assert_allclose(g.values, expected.values, atol=1e-9)
        self.assertAlmostEqual(math.sqrt(dirichlet_energy(g)),
                               gradient_norm(g))

    def test_weak_residual(self):
        grid = self.unit_square(1.0 / 16)
        ctx = self.lane_emden(grid)
        u = self.smooth_field(grid, self.rng(), 0.8)
        res, fnorm = weak_residual(ctx, u)
        self.assertTrue(res > 0)
        self.assertAlmostEqual(Field(grid, u.values ** 3).l2_norm(), fnorm)


class FiberingTest(KirchlabTestMixin, unittest.TestCase):
    def test_value_is_energy_along_ray(self):
        grid = self.unit_disk(1.0 / 16)
        ctx = self.critical_context(grid)
        u = self.smooth_field(grid, self.rng(), 0.5)
        for t in (0.1, 1.0, 2.5):
            self.assertAlmostEqual(energy(ctx, u * t),
                                   fibering_value(ctx, u, t), places=12)

    def test_derivative_at_one_is_gradient_pairing(self):
        grid = self.unit_square(1.0 / 16)
        ctx = self.critical_context(grid)
        u = self.smooth_field(grid, self.rng(), 0.5)
        g = gradient(ctx, u, tol=1e-13)
        self.assertRelClose(fibering_derivative(ctx, u, 1.0),
                            dirichlet_inner(g, u), 1e-8)

    def test_derivative_positive_near_zero(self):
        grid = self.unit_disk(1.0 / 16)
        ctx = self.critical_context(grid)
        u = self.smooth_field(grid, self.rng(), 1.0)
        self.assertTrue(fibering_derivative(ctx, u, 1e-4) > 0)
        self.assertRaises(ArgumentError, fibering_derivative, ctx, u, 0.0)

    def test_single_crossing(self):
        grid = self.unit_disk(1.0 / 16)
        ctx = self.critical_context(grid)
        u = self.smooth_field(grid, self.rng(), 1.0)
        samples = fiber_table(ctx, u, count=48)
        self.assertEqual(48, len(samples))
        self.assertEqual(1, sign_changes(samples))
        self.assertTrue(samples[0].h_prime > 0)
        self.assertTrue(samples[-1].h_prime < 0)


class NehariTest(KirchlabTestMixin, unittest.TestCase):
    def test_closed_form_root(self):
        grid = self.unit_square(1.0 / 16)
        ctx = self.lane_emden(grid)
        rng = self.rng()
        for _ in range(50):
            u = self.smooth_field(grid, rng, rng.uniform(0.1, 5.0))
            point = nehari_project(ctx, u)
            expected = math.sqrt(dirichlet_energy(u) / _quartic(u))
            self.assertRelClose(point.t_star, expected, 1e-10)
            self.assertFalse(point.flagged)

    def test_idempotent_and_homogeneous(self):
        grid = self.unit_disk(1.0 / 16)
        ctx = self.critical_context(grid)
        u = self.smooth_field(grid, self.rng(), 1.0)
        point = nehari_project(ctx, u)
        again = nehari_project(ctx, point.field)
        self.assertRelClose(again.t_star, 1.0, 1e-8)
        for c in (0.5, 3.0):
            scaled = nehari_project(ctx, u * c)
            self.assertRelClose(scaled.t_star, point.t_star / c, 1e-8)

    def test_nehari_energy_is_ray_maximum(self):
        grid = self.unit_disk(1.0 / 16)
        ctx = self.critical_context(grid)
        u = self.smooth_field(grid, self.rng(), 1.0)
        top = nehari_energy(ctx, u)
        t_star = nehari_project(ctx, u).t_star
        for t in np.linspace(0.2, 2.0, 10) * t_star:
            self.assertTrue(fibering_value(ctx, u, t) <= top + 1e-12)

    def test_lane_emden_level(self):
        grid = self.unit_square(1.0 / 16)
        ctx = self.lane_emden(grid)
        u = self.smooth_field(grid, self.rng(), 1.0)
        big_e = dirichlet_energy(u)
        self.assertRelClose(nehari_energy(ctx, u),
                            big_e ** 2 / (4 * _quartic(u)), 1e-9)
        self.assertRelClose(nehari_energy(ctx, u * 7.0),
                            nehari_energy(ctx, u), 1e-9)

    def test_affine_root(self):
        # large disks make int u^4 exceed E^2
        grid = cached_grid('disk', 0.5, radius=10.0)
        ctx = EnergyContext(KirchhoffCoefficient.affine(1, 1),
                            Nonlinearity.power(3), grid, validate=False)
        u = Field.from_function(
            grid, lambda x, y: np.maximum(1 - (x * x + y * y) / 100.0, 0))
        big_e = dirichlet_energy(u)
        quartic = _quartic(u)
        self.assertTrue(quartic > big_e ** 2)
        point = nehari_project(ctx, u)
        self.assertRelClose(point.t_star,
                            math.sqrt(big_e / (quartic - big_e ** 2)), 1e-10)

    def test_affine_no_root(self):
        grid = self.unit_disk(1.0 / 16)
        ctx = EnergyContext(KirchhoffCoefficient.affine(1, 1),
                            Nonlinearity.power(3), grid, validate=False)
        u = Field.from_function(grid, lambda x, y: 1 - x * x - y * y)
        with self.assertRaises(ProjectionError) as cm:
            nehari_project(ctx, u)
        self.assertTrue(cm.exception.overflow)
        self.assertEqual(1, cm.exception.sign)
        self.assertTrue(cm.exception.t_safe > 0)

    def test_sign_changing_ray_is_flagged(self):
        grid = self.unit_square(1.0 / 16)
        ctx = self.lane_emden(grid)
        u = Field.from_function(
            grid, lambda x, y: np.sin(2 * math.pi * x) * np.sin(math.pi * y))
        with self.assertLogs('kirchlab.energy', 'WARNING'):
            point = nehari_project(ctx, u)
        self.assertTrue(point.flagged)

    def test_zero_and_negative_fields(self):
        grid = self.unit_square(1.0 / 8)
        ctx = self.lane_emden(grid)
        self.assertRaises(ArgumentError, nehari_project, ctx,
                          Field.zeros(grid))
        neg = Field(grid, -np.ones(grid.N))
        self.assertRaises(ProjectionError, nehari_project, ctx, neg)

    def test_moser_ray(self):
        grid = self.unit_disk(1.0 / 32)
        ctx = self.critical_context(grid)
        w = moser_field(MoserFamily(4, 1.0), grid)
        val = nehari_energy(ctx, w)
        self.assertTrue(np.isfinite(val))
        self.assertTrue(val > 0)


class ContextTest(KirchlabTestMixin, unittest.TestCase):
    def test_hard_failure(self):
        grid = self.unit_square(1.0 / 8)
        with self.assertRaises(HypothesisError) as cm:
            EnergyContext(KirchhoffCoefficient.constant(1),
                          Nonlinearity.power(1), grid)
        self.assertIn(HYP_F2, cm.exception.failed)
        entry = cm.exception.report.entry(HYP_F2)
        self.assertTrue(entry.failed)
        self.assertIsNotNone(entry.witness)

    def test_unvalidated(self):
        grid = self.unit_square(1.0 / 8)
        ctx = EnergyContext(KirchhoffCoefficient.constant(1),
                            Nonlinearity.power(1), grid, validate=False)
        self.assertIsNone(ctx.hypotheses)
        self.assertFalse(ctx.uniqueness_at_risk)

    def test_validated(self):
        ctx = self.critical_context(self.unit_disk(1.0 / 8), validate=True)
        self.assertTrue(ctx.hypotheses.ok)
        self.assertFalse(ctx.uniqueness_at_risk)
