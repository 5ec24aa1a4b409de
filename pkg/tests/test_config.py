import json
import os
import unittest

from kirchlab.cfgkeys import KEY_HANDLERS
from kirchlab.config import DEFAULTS, RunConfig
from kirchlab.constants import COEF_AFFINE, NL_POWER
from kirchlab.exceptions import ConfigurationError, KirchlabIOError
from kirchlab.grid import DomainSpec
from tests.base import KirchlabTestMixin

EXAMPLE_CFG = os.path.join(os.path.dirname(os.path.dirname(
    os.path.abspath(__file__))), 'example.cfg')

TEXT = """
# rectangle with a power law
[domain]
shape = rectangle
width = 2
height = 1   # trailing comment

[mesh]
h = 0.25

[nonlinearity]
kind = power
p = 3

[solver]
restarts = 2
cg_tol = none
"""


class RunConfigTest(KirchlabTestMixin, unittest.TestCase):
    def test_defaults(self):
        cfg = RunConfig()
        self.assertEqual(sorted(DEFAULTS), cfg.keys())
        self.assertEqual(sorted(KEY_HANDLERS), cfg.keys())
        self.assertEqual(COEF_AFFINE, cfg['kirchhoff.kind'])
        self.assertEqual(1.0 / 64, cfg['mesh.h'])
        self.assertEqual(1.0, cfg.coefficient().a)

    def test_text_format(self):
        cfg = RunConfig.loads(TEXT)
        self.assertEqual('rectangle', cfg['domain.shape'])
        self.assertEqual(2.0, cfg['domain.width'])
        self.assertEqual(1.0, cfg['domain.height'])
        self.assertEqual(NL_POWER, cfg['nonlinearity.kind'])
        self.assertEqual(2, cfg['solver.restarts'])
        self.assertIsNone(cfg['solver.cg_tol'])
        grid = cfg.grid()
        self.assertEqual(21, grid.N)
        self.assertEqual(3.0, cfg.nonlinearity().p)

    def test_json_matches_text(self):
        obj = {
            'domain': {'shape': 'rectangle', 'width': 2, 'height': 1},
            'mesh': {'h': 0.25},
            'nonlinearity': {'kind': 'power', 'p': 3},
            'solver': {'restarts': 2, 'cg_tol': None},
        }
        self.assertEqual(RunConfig.loads(TEXT),
                         RunConfig.loads(json.dumps(obj)))

    def test_round_trip(self):
        cfg = RunConfig.loads(TEXT)
        cfg.set('probe.rho', '0.1, 0.3')
        cfg.set('output.timing', 'yes')
        cfg.set('domain.center', [0.5, -1])
        again = RunConfig.loads(cfg.dumps())
        self.assertEqual(cfg, again)
        self.assertEqual((0.1, 0.3), again['probe.rho'])
        self.assertEqual((0.5, -1.0), again['domain.center'])
        self.assertTrue(again['output.timing'])

    def test_unknown_key(self):
        with self.assertRaises(ConfigurationError) as cm:
            RunConfig.loads('[solver]\nmax_iter = 10\n')
        self.assertEqual('solver.max_iter', cm.exception.key)
        self.assertTrue(str(cm.exception).startswith('solver.max_iter'))

    def test_bad_values(self):
        cfg = RunConfig()
        for key, raw in (('mesh.h', '-1'), ('mesh.h', 'fine'),
                         ('solver.max_iters', '2.5'),
                         ('solver.max_iters', True),
                         ('nonlinearity.p', '0.5'),
                         ('domain.shape', 'annulus'),
                         ('domain.center', '1,2,3'),
                         ('mesh.h', 'none'),
                         ('output.timing', 'maybe'),
                         ('moser.n', '')):
            with self.assertRaises(ConfigurationError) as cm:
                cfg.set(key, raw)
            self.assertEqual(key, cm.exception.key)

    def test_malformed_lines(self):
        with self.assertRaises(ConfigurationError) as cm:
            RunConfig.loads('[mesh]\nh 0.5\n')
        self.assertEqual('line 2', cm.exception.key)
        self.assertRaises(ConfigurationError, RunConfig.loads, '[mesh\n')
        self.assertRaises(ConfigurationError, RunConfig.loads, '= 1\n')
        self.assertRaises(ConfigurationError, RunConfig.loads, '{"mesh": ')
        self.assertRaises(ConfigurationError, RunConfig.loads, '{"a": 1}')

    def test_builder_errors_carry_section(self):
        cfg = RunConfig()
        cfg.set('kirchhoff.a1', '1')
        cfg.set('kirchhoff.t0', '2')
        cfg.set('kirchhoff.a2', 'none')
        self.assertEqual(2.0, cfg.coefficient().t0)
        cfg.set('solver.initial_guess', 'file')
        with self.assertRaises(ConfigurationError) as cm:
            cfg.solver_options()
        self.assertEqual('solver', cm.exception.key)

    def test_sampling_spec(self):
        cfg = RunConfig()
        cfg.set('validation.t_count', 50)
        spec = cfg.sampling_spec()
        self.assertEqual(50, spec.t_count)
        cfg.set('validation.s_min', 30)
        with self.assertRaises(ConfigurationError) as cm:
            cfg.sampling_spec()
        self.assertEqual('validation.s_max', cm.exception.key)

    def test_section(self):
        sec = RunConfig().section('domain')
        self.assertEqual(set(('shape', 'radius', 'center', 'width',
                              'height')), set(sec))

    def test_example_file(self):
        cfg = RunConfig.load(EXAMPLE_CFG)
        self.assertEqual(RunConfig(), cfg)
        self.assertIsInstance(cfg.domain_spec(), DomainSpec)

    def test_missing_file(self):
        path = os.path.join(self.make_tempdir(), 'missing.cfg')
        with self.assertRaises(KirchlabIOError) as cm:
            RunConfig.load(path)
        self.assertEqual(path, cm.exception.path)
