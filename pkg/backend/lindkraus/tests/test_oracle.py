import numpy as np
from django.test import SimpleTestCase, override_settings
from numpy.testing import assert_allclose

from lindkraus.closed_forms import TwoLevelParams, three_level_model, two_level_model
from lindkraus.core import DimensionError, LindbladModel, OracleSizeError, basis_state, random_density_matrix, random_model
from lindkraus.oracle import liouvillian, oracle_evolve, steady_state


class LiouvillianTests(SimpleTestCase):
    def test_zero_model(self):
        model = LindbladModel([0.0, 0.0], np.zeros((2, 2)))
        assert_allclose(liouvillian(model).mat, np.zeros((4, 4)))

    def test_two_level_decay_only(self):
        omega, gp = 1.3, 0.8
        model = two_level_model(TwoLevelParams(omega, gp, 0.0))
        mat = liouvillian(model).mat
        # vec order: rho00, rho10, rho01, rho11
        self.assertAlmostEqual(mat[3, 3], -gp)
        self.assertAlmostEqual(mat[0, 3], gp)
        self.assertAlmostEqual(mat[1, 1], -gp / 2 - 1j * omega)
        self.assertAlmostEqual(mat[2, 2], -gp / 2 + 1j * omega)

    def test_trace_functional_vanishes(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            model = random_model(int(rng.integers(2, 7)), 2, rng)
            self.assertLessEqual(liouvillian(model).trace_functional_residual(), 1e-12)
        dephasing = two_level_model(TwoLevelParams(1.0, 0.5, 0.1, gamma_0=0.3))
        self.assertLessEqual(liouvillian(dephasing).trace_functional_residual(), 1e-12)

    def test_three_level_has_steady_state_eigenvalue(self):
        eigenvalues = np.linalg.eigvals(liouvillian(three_level_model(0.0, 0.4, 1.5, 1.0)).mat)
        self.assertLess(np.min(np.abs(eigenvalues)), 1e-12)

    def test_size_limit(self):
        model = random_model(5, 1, np.random.default_rng(0))
        with self.assertRaises(OracleSizeError):
            liouvillian(model, max_dim=4)

    @override_settings(LINDKRAUS={"ORACLE_MAX_DIM": 3})
    def test_size_limit_from_settings(self):
        model = random_model(4, 1, np.random.default_rng(0))
        with self.assertRaises(OracleSizeError):
            liouvillian(model)


class OracleEvolveTests(SimpleTestCase):
    def test_three_level_fixture(self):
        rho = oracle_evolve(three_level_model(-1.0, 0.3, 1.0, 1.0), basis_state(3, 2), 1.0)
        assert_allclose(np.diag(rho.mat).real, [0.26424, 0.36788, 0.36788], atol=5e-6)

    def test_zero_time(self):
        rho0 = random_density_matrix(3, np.random.default_rng(1))
        assert_allclose(oracle_evolve(three_level_model(0.0, 0.4, 1.5, 1.0), rho0, 0.0).mat, rho0.mat,
                        atol=1e-15)

    def test_preserves_hermiticity_and_trace(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            model = random_model(4, 3, rng)
            rho = oracle_evolve(model, random_density_matrix(4, rng), float(rng.uniform(0, 5)))
            self.assertLessEqual(np.max(np.abs(rho.mat - rho.mat.conj().T)), 1e-10)
            self.assertLessEqual(rho.trace_deviation, 1e-10)

    def test_bad_input(self):
        model = three_level_model(0.0, 0.4, 1.5, 1.0)
        with self.assertRaises(ValueError):
            oracle_evolve(model, basis_state(3, 2), -1.0)
        with self.assertRaises(DimensionError):
            oracle_evolve(model, basis_state(2, 1), 1.0)


class SteadyStateTests(SimpleTestCase):
    def test_two_level_thermal_populations(self):
        gp, gm = 1.0, 0.25
        rho = steady_state(two_level_model(TwoLevelParams(1.0, gp, gm)))
        assert_allclose(rho.mat, np.diag([gp, gm]) / (gp + gm), atol=1e-10)

    def test_non_unique_kernel(self):
        with self.assertRaises(ValueError):
            steady_state(LindbladModel([0.0, 1.0], np.zeros((2, 2))))
