import unittest
from unittest import SkipTest, mock

import numpy as np

from kirchlab import grid as grid_mod
from kirchlab._rtconfig import KL
from tests.base import KirchlabTestMixin


def _handle():
    try:
        from kirchlab import _cinit
        return _cinit, _cinit.get_handle()
    except Exception as e:
        raise SkipTest('cffi stencil kernel unavailable: {0}'.format(e))


class CompiledStencilTest(KirchlabTestMixin, unittest.TestCase):
    def setUp(self):
        saved = KL.use_cffi
        self.addCleanup(KL.configure, 'use_cffi', saved)

    def test_matches_numpy(self):
        cinit, handle = _handle()
        grid = self.unit_disk(1.0 / 16)
        vals = self.random_field(grid, self.rng()).values
        KL.configure('use_cffi', False)
        expected = grid_mod.laplacian_values(grid, vals)
        actual = cinit.apply_laplacian_c(handle, grid.neighbors, vals,
                                         1.0 / grid.cell_area)
        np.testing.assert_allclose(actual, expected, rtol=1e-13, atol=1e-10)

    def test_used_when_enabled(self):
        _handle()
        grid = self.unit_square(1.0 / 8)
        vals = self.random_field(grid, self.rng()).values
        KL.configure('use_cffi', False)
        expected = grid_mod.laplacian_values(grid, vals)
        KL.configure('use_cffi', True)
        actual = grid_mod.laplacian_values(grid, vals)
        self.assertTrue(KL.use_cffi)
        np.testing.assert_allclose(actual, expected, rtol=1e-13, atol=1e-10)

    def test_fallback_disables_kernel(self):
        KL.configure('use_cffi', True)
        grid = self.unit_square(1.0 / 8)
        vals = np.ones(grid.N)
        with mock.patch('kirchlab._cinit.get_handle',
                        side_effect=RuntimeError('no compiler')):
            with self.assertLogs('kirchlab.grid', 'WARNING'):
                out = grid_mod.laplacian_values(grid, vals)
        self.assertFalse(KL.use_cffi)
        self.assertEqual(grid.N, out.size)
