import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from lindkraus.closed_forms import three_level_model
from lindkraus.core import (
    DimensionError,
    DensityMatrix,
    InvalidStateError,
    KrausSet,
    LindbladModel,
    ModelValidationError,
    SchemaError,
    Superoperator,
    Tolerances,
    basis_state,
    ensure_valid,
    plus_state,
    random_density_matrix,
    random_model,
    validate_model,
)


class DensityMatrixTests(SimpleTestCase):
    def test_accepts_valid_state(self):
        rho = DensityMatrix([[0.5, 0.25j], [-0.25j, 0.5]])
        self.assertEqual(rho.dim, 2)
        assert_allclose(rho.populations, [0.5, 0.5])
        self.assertAlmostEqual(rho.purity, 0.625)

    def test_rejects_non_hermitian(self):
        with self.assertRaises(InvalidStateError):
            DensityMatrix([[0.5, 0.1], [0.0, 0.5]])

    def test_rejects_wrong_trace(self):
        with self.assertRaises(InvalidStateError):
            DensityMatrix([[0.6, 0.0], [0.0, 0.5]])

    def test_rejects_indefinite_matrix(self):
        with self.assertRaises(InvalidStateError):
            DensityMatrix([[1.5, 0.0], [0.0, -0.5]])

    def test_rejects_non_square_and_non_finite(self):
        with self.assertRaises(DimensionError):
            DensityMatrix([[1.0, 0.0]])
        with self.assertRaises(DimensionError):
            DensityMatrix([[np.nan]])

    def test_matrix_is_read_only(self):
        rho = basis_state(2, 0)
        with self.assertRaises(ValueError):
            rho.mat[0, 0] = 0.5

    def test_preset_states(self):
        excited = basis_state(3, 2)
        self.assertEqual(excited.mat[2, 2], 1.0)
        plus = plus_state(2)
        assert_allclose(plus.mat, 0.5 * np.ones((2, 2)))
        self.assertAlmostEqual(plus.purity, 1.0)
        with self.assertRaises(DimensionError):
            basis_state(2, 2)

    def test_random_state_is_full_rank(self):
        rho = random_density_matrix(5, np.random.default_rng(0))
        self.assertGreater(rho.min_eigenvalue, 0.0)
        self.assertLess(rho.trace_deviation, 1e-12)


class LindbladModelTests(SimpleTestCase):
    def test_channel_set_and_frequencies(self):
        rates = np.zeros((4, 4))
        rates[0, 2] = 0.5
        model = LindbladModel(energies=[0.0, 1.0, 2.5, 4.0], rates=rates)
        self.assertEqual(model.channel_set, (0, 2))
        self.assertEqual(model.transition_frequency(2, 0), 2.5)
        self.assertEqual(model.dim, 4)

    def test_shape_errors(self):
        with self.assertRaises(DimensionError):
            LindbladModel(energies=[0.0, 1.0], rates=np.zeros((3, 3)))
        with self.assertRaises(DimensionError):
            LindbladModel(energies=[], rates=np.zeros((0, 0)))
        with self.assertRaises(DimensionError):
            LindbladModel(energies=[0.0, np.inf], rates=np.zeros((2, 2)))

    def test_equality_and_serialisation(self):
        a = three_level_model(-1.0, 0.3, 1.0, 1.0)
        b = LindbladModel(**a.to_dict())
        self.assertEqual(a, b)
        self.assertNotEqual(a, three_level_model(-1.0, 0.3, 1.0, 2.0))
        self.assertEqual(a.to_dict()["rates"][0][1], 1.0)


class ValidateModelTests(SimpleTestCase):
    def test_three_level_ladder_is_valid(self):
        omega, g = 1.0, 0.3
        self.assertEqual(validate_model(three_level_model(-omega, g, omega, 1.0)), [])

    def test_diagonal_rate(self):
        model = three_level_model(-1.0, 0.3, 1.0, 1.0)
        rates = np.array(model.rates)
        rates[0, 0] = 0.1
        violations = validate_model(LindbladModel(model.energies, rates))
        self.assertEqual(len(violations), 1)
        self.assertIn("diagonal", violations[0])

    def test_degenerate_energy_difference(self):
        violations = validate_model(three_level_model(-1.0, 0.0, 1.0, 1.0))
        self.assertEqual(len(violations), 1)
        self.assertIn("energy differences", violations[0])

    def test_negative_rate_and_degenerate_levels(self):
        rates = np.array([[0.0, -0.1], [0.2, 0.0]])
        violations = validate_model(LindbladModel([0.5, 0.5], rates))
        self.assertTrue(any("negative rate" in v for v in violations))
        self.assertTrue(any("degenerate energies" in v for v in violations))

    def test_dephasing_needs_two_levels(self):
        model = LindbladModel([0.0, 1.0, 3.0], np.zeros((3, 3)), dephasing_rate=0.2)
        self.assertEqual(len(validate_model(model)), 1)
        self.assertEqual(validate_model(LindbladModel([0.0, 1.0], np.zeros((2, 2)), 0.2)), [])

    def test_idempotent(self):
        model = three_level_model(-1.0, 0.0, 1.0, 1.0)
        self.assertEqual(validate_model(model), validate_model(model))

    def test_ensure_valid_raises_with_violations(self):
        with self.assertRaises(ModelValidationError) as ctx:
            ensure_valid(three_level_model(-1.0, 0.0, 1.0, 1.0))
        self.assertEqual(len(ctx.exception.violations), 1)


class TolerancesTests(SimpleTestCase):
    def test_overrides(self):
        tol = Tolerances().with_overrides({"trace": 1e-8})
        self.assertEqual(tol.trace, 1e-8)
        self.assertEqual(tol.psd, 1e-10)

    def test_unknown_key(self):
        with self.assertRaises(SchemaError):
            Tolerances().with_overrides({"tracee": 1.0})


class RandomModelTests(SimpleTestCase):
    def test_valid_and_reproducible(self):
        a = random_model(8, 3, np.random.default_rng(42))
        b = random_model(8, 3, np.random.default_rng(42))
        self.assertEqual(a, b)
        self.assertEqual(validate_model(a), [])
        self.assertLessEqual(len(a.channel_set), 6)

    def test_pairs_obey_detailed_balance_orientation(self):
        model = random_model(6, 4, np.random.default_rng(1))
        for lower, upper in zip(*np.nonzero(np.triu(model.rates))):
            self.assertGreater(model.rates[lower, upper], model.rates[upper, lower])

    def test_too_many_channels(self):
        with self.assertRaises(ValueError):
            random_model(3, 4, np.random.default_rng(0))


class ContainerTests(SimpleTestCase):
    def test_kraus_set_apply_and_completeness(self):
        p = 0.3
        ops = (
            np.array([[1.0, 0.0], [0.0, np.sqrt(1 - p)]], dtype=complex),
            np.array([[0.0, np.sqrt(p)], [0.0, 0.0]], dtype=complex),
        )
        kraus = KrausSet(dim=2, operators=ops)
        self.assertEqual(len(kraus), 2)
        self.assertLess(kraus.completeness_residual(), 1e-15)
        out = kraus.apply(basis_state(2, 1).mat)
        assert_allclose(out, np.diag([p, 1 - p]), atol=1e-15)
        with self.assertRaises(DimensionError):
            kraus.apply(np.eye(3))

    def test_superoperator_trace_functional(self):
        identity = Superoperator(dim=2, mat=np.eye(4, dtype=complex))
        self.assertEqual(identity.trace_functional_residual(), 1.0)
        zero = Superoperator(dim=2, mat=np.zeros((4, 4), dtype=complex))
        self.assertEqual(zero.trace_functional_residual(), 0.0)
