import itertools
import math

import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from lindkraus.closed_forms import (
    SIGMA_MINUS,
    SIGMA_Z,
    TwoLevelParams,
    p_algebra_residuals,
    p_minus,
    p_z,
    superop_p_algebra_check,
    three_level_model,
    three_level_solution,
    two_level_dephasing_solution,
    two_level_model,
    two_level_solution,
)
from lindkraus.core import DimensionError, basis_state, plus_state, random_density_matrix
from lindkraus.kraus_solver import evolve
from lindkraus.oracle import oracle_evolve

SWEEP = (0.1, 1.0, 5.0)
TIMES = (0.0, 0.3, 1.0, 10.0)


class ThreeLevelSolutionTests(SimpleTestCase):
    energies = (-1.0, 0.3, 1.0)

    def test_excited_state_populations(self):
        gamma, t = 1.0, 1.0
        rho = three_level_solution(*self.energies, gamma, basis_state(3, 2), t)
        e = math.exp(-1)
        assert_allclose(np.diag(rho.mat).real, [1 - 2 * e, e, e], atol=1e-15)
        self.assertLessEqual(abs(np.trace(rho.mat) - 1), 1e-14)

    def test_ground_state_is_dark(self):
        for t in TIMES:
            rho = three_level_solution(*self.energies, 2.0, basis_state(3, 0), t)
            assert_allclose(rho.mat, basis_state(3, 0).mat, atol=1e-15)

    def test_agrees_with_solver(self):
        rng = np.random.default_rng(12)
        for gamma, t in itertools.product(SWEEP, TIMES):
            rho0 = random_density_matrix(3, rng)
            closed = three_level_solution(*self.energies, gamma, rho0, t)
            solved = evolve(three_level_model(*self.energies, gamma), rho0, t)
            assert_allclose(closed.mat, solved.mat, atol=1e-12)

    def test_rejects_bad_input(self):
        with self.assertRaises(ValueError):
            three_level_solution(*self.energies, -1.0, basis_state(3, 2), 1.0)
        with self.assertRaises(ValueError):
            three_level_solution(*self.energies, 1.0, basis_state(3, 2), -1.0)
        with self.assertRaises(DimensionError):
            three_level_solution(*self.energies, 1.0, basis_state(2, 1), 1.0)


class TwoLevelSolutionTests(SimpleTestCase):
    def test_zero_time_is_identity(self):
        rho0 = random_density_matrix(2, np.random.default_rng(0))
        params = TwoLevelParams(omega=1.0, gamma_plus=1.0, gamma_minus=0.2)
        assert_allclose(two_level_solution(params, rho0, 0.0).mat, rho0.mat, atol=1e-15)

    def test_long_time_populations(self):
        params = TwoLevelParams(omega=1.0, gamma_plus=1.0, gamma_minus=0.2)
        rho = two_level_solution(params, basis_state(2, 1), 50 / params.gamma_beta)
        assert_allclose(rho.populations, [1.0 / 1.2, 0.2 / 1.2], atol=1e-6)

    def test_coherence_decay(self):
        params = TwoLevelParams(omega=2.0, gamma_plus=0.5, gamma_minus=0.1)
        t = 1.7
        rho = two_level_solution(params, plus_state(2), t)
        expected = 0.5 * math.exp(-params.gamma_beta * t / 2) * np.exp(1j * params.omega * t)
        self.assertAlmostEqual(rho.mat[0, 1], expected, places=13)

    def test_no_rates_is_rotation(self):
        params = TwoLevelParams(omega=1.5, gamma_plus=0.0, gamma_minus=0.0)
        rho = two_level_solution(params, plus_state(2), 2.0)
        self.assertAlmostEqual(rho.purity, 1.0, places=14)

    def test_agrees_with_solver(self):
        rng = np.random.default_rng(13)
        for omega, gp, gm in itertools.product(SWEEP, SWEEP, SWEEP):
            params = TwoLevelParams(omega, gp, gm)
            model = two_level_model(params)
            for t in TIMES:
                rho0 = random_density_matrix(2, rng)
                assert_allclose(two_level_solution(params, rho0, t).mat, evolve(model, rho0, t).mat,
                                atol=1e-12)

    def test_params_round_trip_through_model(self):
        params = TwoLevelParams(omega=1.2, gamma_plus=0.7, gamma_minus=0.3, gamma_0=0.1)
        self.assertEqual(TwoLevelParams.from_model(params.to_model()), params)
        self.assertAlmostEqual(params.gamma_beta, 1.0)
        self.assertAlmostEqual(params.gamma, 0.4)
        with self.assertRaises(DimensionError):
            TwoLevelParams.from_model(three_level_model(0.0, 0.4, 1.5, 1.0))


class DephasingSolutionTests(SimpleTestCase):
    def test_reduces_without_dephasing(self):
        rng = np.random.default_rng(21)
        for gp, gm in itertools.product(SWEEP, SWEEP):
            params = TwoLevelParams(1.0, gp, gm)
            for t in TIMES:
                rho0 = random_density_matrix(2, rng)
                assert_allclose(two_level_dephasing_solution(params, rho0, t).mat,
                                two_level_solution(params, rho0, t).mat, atol=1e-12)

    def test_pure_dephasing(self):
        gamma_0 = 0.4
        params = TwoLevelParams(omega=0.0, gamma_plus=0.0, gamma_minus=0.0, gamma_0=gamma_0)
        for t in (0.1, 1.0, 10.0):
            rho = two_level_dephasing_solution(params, plus_state(2), t)
            self.assertAlmostEqual(rho.mat[0, 1], 0.5 * math.exp(-2 * gamma_0 * t), places=14)
            assert_allclose(rho.populations, [0.5, 0.5], atol=1e-15)

    def test_agrees_with_oracle(self):
        rng = np.random.default_rng(22)
        for omega, gp, gm, gamma_0 in itertools.product(SWEEP, SWEEP, SWEEP, (0.1, 1.0)):
            params = TwoLevelParams(omega, gp, gm, gamma_0)
            model = two_level_model(params)
            for t in TIMES:
                rho0 = random_density_matrix(2, rng)
                rho = two_level_dephasing_solution(params, rho0, t)
                assert_allclose(rho.mat, oracle_evolve(model, rho0, t).mat, atol=1e-8)

    def test_stays_physical(self):
        params = TwoLevelParams(omega=1.0, gamma_plus=1.0, gamma_minus=0.3, gamma_0=1.0)
        for rho0 in (plus_state(2), basis_state(2, 1), random_density_matrix(2, np.random.default_rng(3))):
            for t in (0.1, 1.0, 10.0):
                rho = two_level_dephasing_solution(params, rho0, t)
                self.assertLessEqual(rho.trace_deviation, 1e-12)
                self.assertGreaterEqual(rho.min_eigenvalue, -1e-10)


class SuperoperatorAlgebraTests(SimpleTestCase):
    def test_full_suite(self):
        self.assertTrue(superop_p_algebra_check())
        self.assertEqual(len(p_algebra_residuals()), 9)

    def test_individual_relations(self):
        sigma_x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
        assert_allclose(p_z(p_z(sigma_x)), sigma_x)
        rho = random_density_matrix(2, np.random.default_rng(1)).mat
        assert_allclose(p_minus(p_minus(rho)), np.zeros((2, 2)))
        assert_allclose(p_z(rho), SIGMA_Z @ rho @ SIGMA_Z)
        assert_allclose(p_minus(rho), rho[1, 1] * SIGMA_MINUS @ SIGMA_MINUS.T)
