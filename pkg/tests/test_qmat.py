"""Matrix kernel: tensor products, partial traces, spectra, entropies."""

import numpy as np
import pytest
from conftest import random_density

from qcorr import (
    Channel,
    ConfigurationError,
    NumericDomainError,
    evolve,
    hermitian_eigenvalues,
    initial_state,
    partial_trace,
    shannon_entropy,
    tensor,
    validate_density_matrix,
    von_neumann_entropy,
)
from qcorr.qmat import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, density_matrix_report

# Direct 4x4 expansion of the a = 0.4 member of the initial-state family.
WERNER_04 = np.array(
    [
        [0.15, 0, 0, 0],
        [0, 0.35, -0.2, 0],
        [0, -0.2, 0.35, 0],
        [0, 0, 0, 0.15],
    ],
    dtype=complex,
)

# Reduced AB state of the APE evolution at p = q = 0.5, a = 0.4, expanded by hand.
APE_AB_HALF = np.array(
    [
        [0.325, 0, 0, 0],
        [0, 0.425, -0.1, 0],
        [0, -0.1, 0.175, 0],
        [0, 0, 0, 0.075],
    ],
    dtype=complex,
)


class TestTensor:
    def test_identity(self):
        assert np.array_equal(tensor(I2, I2), np.eye(4))

    def test_sigma_z_pair(self):
        assert np.array_equal(tensor(SIGMA_Z, SIGMA_Z), np.diag([1, -1, -1, 1]).astype(complex))

    def test_pauli_combination_reproduces_initial_state(self):
        rho = np.eye(4, dtype=complex)
        for sigma in (SIGMA_X, SIGMA_Y, SIGMA_Z):
            rho = rho - 0.4 * tensor(sigma, sigma)
        rho /= 4.0
        assert np.abs(rho - WERNER_04).max() < 1e-15
        assert np.abs(initial_state(0.4) - WERNER_04).max() < 1e-15


class TestPartialTrace:
    def test_product_state_recovers_factor(self):
        rng = np.random.default_rng(3)
        rho_a = random_density(rng, 2)
        rho_b = random_density(rng, 2)
        joint = tensor(rho_a, rho_b)
        got = partial_trace(joint, ("A",), layout=("A", "B"))
        assert np.abs(got - rho_a).max() < 1e-14

    def test_evolved_state_at_identity_point_recovers_input(self):
        rho0 = initial_state(0.4)
        rho16 = evolve(rho0, Channel.AMPLITUDE_DAMPING, Channel.PHASE_DAMPING, 0.0)
        got = partial_trace(rho16, ("A", "B"))
        assert np.abs(got - rho0).max() < 1e-14

    def test_evolved_state_matches_hand_expansion_at_half(self):
        rho16 = evolve(initial_state(0.4), Channel.AMPLITUDE_DAMPING, Channel.PHASE_DAMPING, 0.5)
        got = partial_trace(rho16, ("A", "B"))
        assert np.abs(got - APE_AB_HALF).max() < 1e-14

    def test_keep_all_is_identity(self):
        rng = np.random.default_rng(5)
        rho = random_density(rng, 16)
        got = partial_trace(rho, ("A", "B", "EA", "EB"))
        assert np.abs(got - rho).max() < 1e-14

    def test_sequential_traces_commute_with_one_shot(self):
        rng = np.random.default_rng(7)
        for _ in range(5):
            rho = random_density(rng, 16)
            one_shot = partial_trace(rho, ("B", "EB"))
            step1 = partial_trace(rho, ("A", "B", "EB"), layout=("A", "B", "EA", "EB"))
            step2 = partial_trace(step1, ("B", "EB"), layout=("A", "B", "EB"))
            assert np.abs(one_shot - step2).max() < 1e-13

    def test_trace_preserved_and_output_valid(self):
        rng = np.random.default_rng(9)
        for _ in range(5):
            rho = random_density(rng, 16)
            for keep in (("A",), ("B", "EA"), ("EA", "EB"), ("A", "B", "EA")):
                red = partial_trace(rho, keep)
                assert abs(red.trace().real - 1.0) < 1e-12
                validate_density_matrix(red)

    def test_keep_order_sets_output_order(self):
        rng = np.random.default_rng(13)
        rho = random_density(rng, 16)
        ab = partial_trace(rho, ("B", "EA"))
        swap = np.zeros((4, 4))
        for x in range(2):
            for y in range(2):
                swap[2 * y + x, 2 * x + y] = 1.0
        assert np.abs(partial_trace(rho, ("EA", "B")) - swap @ ab @ swap).max() < 1e-14

    def test_unknown_label_rejected(self):
        rho = np.eye(16) / 16
        with pytest.raises(ConfigurationError):
            partial_trace(rho, ("A", "X"))

    def test_empty_keep_rejected(self):
        with pytest.raises(ConfigurationError):
            partial_trace(np.eye(16) / 16, ())


class TestHermitianEigenvalues:
    def test_maximally_mixed(self):
        np.testing.assert_allclose(hermitian_eigenvalues(np.eye(4) / 4), [0.25] * 4)

    def test_initial_family_spectrum(self):
        got = hermitian_eigenvalues(initial_state(0.4))
        np.testing.assert_allclose(got, [0.55, 0.15, 0.15, 0.15], atol=1e-14)

    def test_pure_state_spectrum(self):
        got = hermitian_eigenvalues(initial_state(1.0))
        np.testing.assert_allclose(got, [1.0, 0.0, 0.0, 0.0], atol=1e-14)

    def test_descending_and_sums_to_trace(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            h = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
            h = h + h.conj().T
            ev = hermitian_eigenvalues(h)
            assert np.all(np.diff(ev) <= 0)
            assert abs(ev.sum() - h.trace().real) < 1e-10

    def test_non_hermitian_rejected(self):
        m = np.array([[0, 1], [0, 0]], dtype=complex)
        with pytest.raises(NumericDomainError):
            hermitian_eigenvalues(m)


class TestVonNeumannEntropy:
    def test_pure_state(self):
        assert von_neumann_entropy(initial_state(1.0)) == 0.0

    def test_maximally_mixed_qubit(self):
        assert abs(von_neumann_entropy(np.eye(2) / 2) - 1.0) < 1e-14

    def test_initial_family_value(self):
        expected = -(0.55 * np.log2(0.55) + 3 * 0.15 * np.log2(0.15))
        assert abs(von_neumann_entropy(initial_state(0.4)) - expected) < 1e-13


class TestShannonEntropy:
    @pytest.mark.parametrize(
        "dist,expected",
        [((1.0, 0.0), 0.0), ((0.5, 0.5), 1.0), ((0.25, 0.25, 0.25, 0.25), 2.0)],
    )
    def test_known_values(self, dist, expected):
        assert abs(shannon_entropy(dist) - expected) < 1e-14

    def test_negative_dust_clamped(self):
        assert abs(shannon_entropy((1.0 + 1e-13, -1e-13)) - 0.0) < 1e-11

    def test_bad_sum_rejected(self):
        with pytest.raises(NumericDomainError):
            shannon_entropy((0.5, 0.4))

    def test_negative_entry_rejected(self):
        with pytest.raises(NumericDomainError):
            shannon_entropy((1.1, -0.1))

    def test_mutual_information_identities_agree(self):
        # H(A) + H(B) - H(A,B) versus H(A) - H(A|B), with the conditional
        # entropy computed from the conditional distributions directly.
        rng = np.random.default_rng(23)
        for _ in range(50):
            joint = rng.random((2, 2))
            joint /= joint.sum()
            pa = joint.sum(axis=1)
            pb = joint.sum(axis=0)
            lhs = shannon_entropy(pa) + shannon_entropy(pb) - shannon_entropy(joint)
            h_cond = 0.0
            for b in range(2):
                if pb[b] > 0:
                    cond = joint[:, b] / pb[b]
                    h_cond += pb[b] * shannon_entropy(cond)
            rhs = shannon_entropy(pa) - h_cond
            assert abs(lhs - rhs) < 1e-12


class TestDensityValidation:
    def test_accepts_valid(self):
        rng = np.random.default_rng(29)
        validate_density_matrix(random_density(rng, 4))

    def test_rejects_bad_trace(self):
        with pytest.raises(NumericDomainError):
            validate_density_matrix(np.eye(4))

    def test_rejects_non_hermitian(self):
        m = np.eye(4, dtype=complex) / 4
        m[0, 1] = 0.1
        with pytest.raises(NumericDomainError):
            validate_density_matrix(m)

    def test_rejects_negative_eigenvalue(self):
        m = np.diag([1.1, -0.1, 0.0, 0.0]).astype(complex)
        with pytest.raises(NumericDomainError):
            validate_density_matrix(m)

    def test_report_fields(self):
        report = density_matrix_report(np.diag([0.5, 0.25, 0.25, 0.0]).astype(complex))
        assert report.is_valid
        assert abs(report.trace - 1.0) < 1e-15
        assert report.hermiticity_dev == 0.0
