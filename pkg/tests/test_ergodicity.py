import numpy as np
import pytest

from kryloverg import (
    arnoldi_iterate,
    autocorrelator,
    certify_unitary,
    erg_measure,
    ergodic_target,
    level_uniformity,
    sequence_asymptotics,
)
from kryloverg.errors import EmptyInput, IndexOutOfRange, NonSquareInput

from conftest import haar_unitary, random_state


def cyclic_shift(dim):
    """U e_j = e_{j+1 mod dim}: already in maximally ergodic form."""
    u = np.zeros((dim, dim))
    u[(np.arange(dim) + 1) % dim, np.arange(dim)] = 1.0
    return certify_unitary(u)


class TestErgMeasure:
    def test_one_dimensional_case(self):
        for theta in (0.0, 0.4, -2.2):
            erg_inverse, erg = erg_measure(np.array([[np.exp(1j * theta)]]))
            assert erg_inverse == pytest.approx(1.0 / np.sqrt(2), abs=1e-15)
            assert erg == pytest.approx(np.sqrt(2), abs=1e-12)

    def test_cyclic_shift_differs_only_in_corner(self):
        for m in (3, 8, 17):
            u = cyclic_shift(m).matrix
            erg_inverse, _ = erg_measure(u)
            assert erg_inverse == pytest.approx(1.0 / np.sqrt(2 * m), abs=1e-15)

    def test_identity_by_direct_count(self):
        # direct Frobenius evaluation: M diagonal ones and M-1 subdiagonal
        # ones mismatch, so the squared distance is 2M - 1
        for m in (1, 4, 16):
            direct = np.linalg.norm(ergodic_target(m) - np.eye(m))
            assert direct**2 == pytest.approx(2 * m - 1, abs=1e-12)
            erg_inverse, _ = erg_measure(np.eye(m))
            assert erg_inverse == pytest.approx(direct / np.sqrt(2 * m), abs=1e-15)

    def test_in_unit_interval_for_unitaries(self, rng):
        for dim in (2, 9, 40):
            erg_inverse, _ = erg_measure(haar_unitary(dim, rng))
            assert 0.0 < erg_inverse <= 1.0

    def test_not_global_phase_invariant(self, rng):
        u = haar_unitary(10, rng)
        base, _ = erg_measure(u)
        shifted, _ = erg_measure(np.exp(1j * 0.7) * u)
        assert abs(base - shifted) > 1e-6

    def test_rejects_non_square(self):
        with pytest.raises(NonSquareInput):
            erg_measure(np.zeros((3, 4)))


class TestLevelUniformity:
    def test_centered_picket_fence(self):
        for d in (8, 101):
            phases = -np.pi + (np.arange(d) + 0.5) * 2 * np.pi / d
            assert level_uniformity(phases) == pytest.approx(1.0 / d, abs=1e-12)

    def test_all_phases_equal(self):
        assert level_uniformity(np.zeros(10)) == pytest.approx(1.0, abs=1e-12)

    def test_uniform_sample_is_small(self):
        rng = np.random.default_rng(7)
        d = 4096
        vals = [
            level_uniformity(rng.uniform(-np.pi, np.pi, d) * (1 - 1e-12))
            for _ in range(20)
        ]
        # KS scaling: exceeding 1.63/sqrt(D) has probability ~1e-2 per sample
        assert np.mean(np.array(vals) < 0.06) > 0.9

    def test_order_insensitive(self, rng):
        phases = rng.uniform(-np.pi, np.pi, 64)
        shuffled = phases.copy()
        rng.shuffle(shuffled)
        assert level_uniformity(phases) == level_uniformity(shuffled)

    def test_duplication_invariance(self, rng):
        phases = np.sort(rng.uniform(-np.pi, np.pi, 32))
        assert level_uniformity(np.repeat(phases, 3)) == pytest.approx(
            level_uniformity(phases), abs=1e-14
        )

    def test_empty_input(self):
        with pytest.raises(EmptyInput):
            level_uniformity(np.array([]))


class TestAutocorrelator:
    def test_t_zero_is_one(self, small_unitary, rng):
        k = arnoldi_iterate(small_unitary, random_state(12, rng))
        c = autocorrelator(small_unitary, k, n=3, t_max=0)
        assert abs(c[0] - 1.0) < 1e-12

    def test_identity_unitary(self):
        u = certify_unitary(np.eye(5))
        k = arnoldi_iterate(u, np.eye(5)[:, 0].astype(complex))
        c = autocorrelator(u, k, n=0, t_max=6)
        assert np.allclose(c, 1.0)

    def test_survival_amplitude_cross_check(self, small_unitary, rng):
        psi0 = random_state(12, rng)
        k = arnoldi_iterate(small_unitary, psi0)
        c = autocorrelator(small_unitary, k, n=0, t_max=5)
        for t in range(6):
            direct = np.vdot(psi0, np.linalg.matrix_power(small_unitary.matrix, t) @ psi0)
            assert abs(c[t] - direct) < 1e-10

    def test_index_out_of_range(self, small_unitary, rng):
        k = arnoldi_iterate(small_unitary, random_state(12, rng))
        with pytest.raises(IndexOutOfRange):
            autocorrelator(small_unitary, k, n=k.krylov_dim, t_max=2)


class TestSequenceAsymptotics:
    def test_cyclic_shift_sequences(self):
        d = 8
        u = cyclic_shift(d)
        psi0 = np.eye(d)[:, 0].astype(complex)
        k = arnoldi_iterate(u, psi0)
        assert k.krylov_dim == d
        assert np.max(np.abs(k.seq_a)) < 1e-14
        assert np.max(np.abs(k.seq_b - 1.0)) < 1e-14
        # c_n vanishes except the wrap-around element c_{D-1}
        assert np.max(np.abs(k.seq_c[:-1])) < 1e-14
        assert abs(k.seq_c[-1] - 1.0) < 1e-14
        # trailing half: a-tail 0, b-tail 1, c-tail (0,0,0,1) -> mean 1/4
        ta, tb, tc = sequence_asymptotics(k, tail_fraction=0.5)
        assert ta == pytest.approx(0.0, abs=1e-14)
        assert tb == pytest.approx(1.0, abs=1e-14)
        assert tc == pytest.approx(0.25, abs=1e-14)

    def test_rejects_tiny_decomposition(self):
        u = certify_unitary(np.eye(4))
        k = arnoldi_iterate(u, np.eye(4)[:, 0].astype(complex))
        with pytest.raises(ValueError):
            sequence_asymptotics(k)


def test_autocorrelator_cyclic_shift_single_step_decay():
    # maximally ergodic form: autocorrelations vanish for every 0 < t < D
    d = 8
    u = cyclic_shift(d)
    k = arnoldi_iterate(u, np.eye(d)[:, 0].astype(complex))
    for n in (0, 3):
        c = autocorrelator(u, k, n=n, t_max=d - 1)
        assert abs(c[0] - 1.0) < 1e-14
        assert np.max(np.abs(c[1:])) < 1e-14


def test_ergodicity_report_bundle(rng):
    from kryloverg import ergodicity_report

    u = certify_unitary(haar_unitary(16, rng))
    k = arnoldi_iterate(u, random_state(16, rng))
    phases = np.sort(rng.uniform(-np.pi, np.pi, 16) * (1 - 1e-12))
    rep = ergodicity_report(k, phases, tau_star=1.7)
    assert 0.0 < rep.erg_inverse <= 1.0
    assert rep.erg == pytest.approx(1.0 / rep.erg_inverse)
    assert rep.krylov_dim == k.krylov_dim
    assert 0.0 <= rep.delta_unif <= 2.0
    assert rep.tau_star == 1.7
