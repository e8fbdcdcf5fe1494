import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qpkc.errors import DimensionError, RedundancyError, SeparabilityError
from qpkc.qsim import (
    CipherEnsemble,
    DensityMatrix,
    PureState,
    RegisterLayout,
    apply_hadamard,
    apply_uncompute,
    apply_xor_oracle,
    ensemble_to_density,
    fidelity,
    hermitian_eig,
    measure_register,
    outcome_probabilities,
    overlap,
    trace_distance,
)


def dense(st_):
    v = np.zeros(1 << st_.width, dtype=complex)
    for k, a in st_.amplitudes.items():
        v[k] = a
    return v


def fields(label, widths):
    """Split a label into register values, first register most significant."""
    out, shift = [], sum(widths)
    for w in widths:
        shift -= w
        out.append((label >> shift) & ((1 << w) - 1))
    return out


def random_state(rng, layout, terms):
    keys = rng.choice(1 << layout.width, size=terms, replace=False)
    amps = rng.normal(size=terms) + 1j * rng.normal(size=terms)
    amps /= np.linalg.norm(amps)
    return PureState(layout, {int(k): complex(a) for k, a in zip(keys, amps)})


def random_pure(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def psd_sqrt(m):
    w, v = np.linalg.eigh(m)
    return v @ np.diag(np.sqrt(np.clip(w, 0, None))) @ v.conj().T


def numpy_fidelity(rho, sigma):
    """Nuclear norm of sqrt(rho) sqrt(sigma); SVD avoids square roots of round-off eigenvalues."""
    return float(np.sum(np.linalg.svd(psd_sqrt(rho) @ psd_sqrt(sigma), compute_uv=False)))


LAYOUT = RegisterLayout.of(("a", 3), ("b", 2), ("c", 3))


class TestPureState:
    def test_register_slots(self):
        assert LAYOUT.width == 8
        label = LAYOUT.compose({"a": 5, "b": 2, "c": 6})
        assert fields(label, [3, 2, 3]) == [5, 2, 6]
        assert LAYOUT.split(label) == {"a": 5, "b": 2, "c": 6}

    def test_norm_enforced(self):
        with pytest.raises(ValueError):
            PureState(LAYOUT, {0: 1.0, 1: 1.0})

    def test_extend_discard(self):
        s = PureState.from_register("m", 2, {1: 1, 2: 1}, normalize=True).extend("z", 3, 5)
        value, rest = s.discard("z")
        assert value == 5 and rest.layout == RegisterLayout.of(("m", 2))
        with pytest.raises(SeparabilityError):
            s.discard("m")
        with pytest.raises(SeparabilityError):
            s.drop_zero("z")

    def test_reorder_preserves_amplitudes(self):
        s = random_state(np.random.default_rng(0), LAYOUT, 6)
        r = s.reorder(["c", "a", "b"])
        for k, a in s.amplitudes.items():
            va, vb, vc = fields(k, [3, 2, 3])
            assert r.amplitudes[(vc << 5) | (va << 2) | vb] == a

    def test_json_round_trip(self):
        s = random_state(np.random.default_rng(1), LAYOUT, 5)
        back = PureState.from_json(s.to_json())
        assert back.layout == s.layout and overlap(back, s) == pytest.approx(1.0, abs=1e-12)

    def test_tensor_matches_kron(self):
        rng = np.random.default_rng(2)
        a = random_state(rng, RegisterLayout.of(("x", 2)), 3)
        b = random_state(rng, RegisterLayout.of(("y", 3)), 4)
        assert np.allclose(dense(a.tensor(b)), np.kron(dense(a), dense(b)))


class TestGates:
    @given(st.integers(0, 2**32 - 1), st.integers(1, 8))
    @settings(max_examples=40)
    def test_xor_oracle_matches_dense_permutation(self, seed, terms):
        rng = np.random.default_rng(seed)
        s = random_state(rng, LAYOUT, terms)
        table = rng.integers(0, 8, size=(8, 4))
        fn = lambda a, b: int(table[a, b])  # noqa: E731
        out = apply_xor_oracle(s, fn, ["a", "b"], "c")
        perm = np.zeros((256, 256))
        for x in range(256):
            a, b, c = fields(x, [3, 2, 3])
            perm[(a << 5) | (b << 3) | (c ^ fn(a, b)), x] = 1
        assert np.allclose(dense(out), perm @ dense(s))

    def test_oracle_output_must_fit(self):
        s = PureState.basis(LAYOUT, a=1)
        with pytest.raises(DimensionError):
            apply_xor_oracle(s, lambda a: 8, ["a"], "c")
        with pytest.raises(DimensionError):
            apply_xor_oracle(s, lambda a: 0, ["a"], "a")

    def test_uncompute_checks_redundancy(self):
        s = PureState.basis(LAYOUT, a=3, c=6)
        cleared = apply_uncompute(s, lambda a: 2 * a, ["a"], "c")
        assert cleared.values("c") == {0}
        with pytest.raises(RedundancyError):
            apply_uncompute(s, lambda a: a, ["a"], "c")

    def test_hadamard_matches_kron(self):
        rng = np.random.default_rng(3)
        s = random_state(rng, RegisterLayout.of(("x", 2), ("y", 3)), 5)
        h1 = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
        h3 = np.kron(np.kron(h1, h1), h1)
        op = np.kron(np.eye(4), h3)
        assert np.allclose(dense(apply_hadamard(s, "y")), op @ dense(s))

    def test_measurement_statistics(self):
        s = PureState.from_register("m", 2, {0: np.sqrt(0.2), 3: np.sqrt(0.8)})
        assert outcome_probabilities(s, "m") == pytest.approx({0: 0.2, 3: 0.8})
        rng = np.random.default_rng(4)
        hits = sum(measure_register(s, "m", rng)[0].value == 3 for _ in range(4000))
        assert abs(hits / 4000 - 0.8) < 0.03

    def test_measurement_collapses(self):
        s = PureState(RegisterLayout.of(("x", 1), ("y", 1)), {0b00: 2**-0.5, 0b11: 2**-0.5})
        outcome, after = measure_register(s, "x", np.random.default_rng(0))
        assert after.values("y") == {outcome.value}


class TestDensity:
    def test_ensemble_density(self):
        a = PureState.from_register("m", 2, {1: 1.0})
        b = PureState.from_register("m", 2, {1: 1, 2: 1}, normalize=True)
        e = CipherEnsemble(((0.25, None, a), (0.75, None, b)))
        rho = ensemble_to_density(e)
        expected = 0.25 * np.outer(dense(a), dense(a).conj()) + 0.75 * np.outer(dense(b), dense(b).conj())
        assert np.allclose(rho.embed(list(range(4))), expected)
        assert rho.dim == 2

    def test_ensemble_probabilities_must_sum_to_one(self):
        a = PureState.from_register("m", 1, {0: 1.0})
        with pytest.raises(ValueError):
            CipherEnsemble(((0.5, None, a),))

    @pytest.mark.parametrize("n", [1, 2, 8, 17, 32, 64])
    def test_jacobi_eigensolver(self, n):
        rng = np.random.default_rng(n)
        x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        h = (x + x.conj().T) / 2
        w, v = hermitian_eig(h)
        assert np.all(np.diff(w) >= 0)
        assert np.linalg.norm(v @ np.diag(w) @ v.conj().T - h) <= 1e-10
        assert np.allclose(w, np.linalg.eigvalsh(h), atol=1e-10)

    def test_pure_fidelity_is_overlap(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            a = random_state(rng, RegisterLayout.of(("m", 4)), int(rng.integers(1, 17)))
            b = random_state(rng, RegisterLayout.of(("m", 4)), int(rng.integers(1, 17)))
            assert fidelity(a, b) == pytest.approx(overlap(a, b), abs=1e-9)

    def test_mixed_fidelity_matches_numpy(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            dim = 6
            ens = []
            for _ in range(2):
                ps = rng.dirichlet(np.ones(3))
                vecs = [random_pure(rng, dim) for _ in range(3)]
                ens.append(sum(p * np.outer(v, v.conj()) for p, v in zip(ps, vecs)))
            rho = DensityMatrix(range(dim), ens[0])
            sigma = DensityMatrix(range(dim), ens[1])
            assert fidelity(rho, sigma) == pytest.approx(numpy_fidelity(*ens), abs=1e-9)
            expected_d = 0.5 * np.sum(np.abs(np.linalg.eigvalsh(ens[0] - ens[1])))
            assert trace_distance(rho, sigma) == pytest.approx(expected_d, abs=1e-9)

    def test_disjoint_supports(self):
        a = PureState.from_register("m", 3, {1: 1.0})
        b = PureState.from_register("m", 3, {6: 1.0})
        assert fidelity(a, b) == pytest.approx(0.0, abs=1e-12)
        assert trace_distance(a, b) == pytest.approx(1.0)

    def test_not_positive_rejected(self):
        with pytest.raises(ValueError):
            DensityMatrix(range(2), np.diag([1.5, -0.5])).eig
