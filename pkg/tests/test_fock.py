import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nqi_sim.fock import (
    CIRCULAR_MODES,
    LINEAR_MODES,
    PURGE_THRESHOLD,
    CapacityError,
    Direction,
    Path,
    PhotonState,
    apply_mode_pair_unitary,
    create_photon,
    embed_pair,
    from_creations,
    inner_product,
    mode,
    squared_norm,
    transform_modes,
)

import oracle

R, L = Direction.RIGHT, Direction.LEFT
UP, LO = Path.UPPER, Path.LOWER
VAC = PhotonState.vacuum()
S = 1 / math.sqrt(2)


def test_registry_is_canonical():
    assert len(CIRCULAR_MODES) == 8 and len(set(CIRCULAR_MODES)) == 8
    assert list(CIRCULAR_MODES) == sorted(CIRCULAR_MODES, key=lambda m: m.sort_key())
    assert str(CIRCULAR_MODES[0]) == "Ru+" and str(CIRCULAR_MODES[-1]) == "Ll-"
    assert [str(m) for m in LINEAR_MODES[:2]] == ["Rux", "Ruy"]


class TestCreatePhoton:
    def test_on_vacuum(self):
        s = create_photon(VAC, mode(R, LO, "+"))
        assert s.terms == {(0, 0, 1, 0, 0, 0, 0, 0): 1}

    def test_twice_same_mode_carries_sqrt2(self):
        m = mode(R, LO, "+")
        s = create_photon(create_photon(VAC, m), m)
        assert s.amplitude({m: 2}) == pytest.approx(math.sqrt(2), abs=1e-15)
        assert squared_norm(s) == pytest.approx(2.0)

    def test_product_probe(self):
        s = create_photon(create_photon(VAC, mode(R, LO, "+")), mode(L, LO, "-"))
        assert s.terms == {(0, 0, 1, 0, 0, 0, 0, 1): 1}

    def test_value_semantics(self):
        before = dict(VAC.terms)
        create_photon(VAC, mode(R, UP, "-"))
        assert VAC.terms == before

    def test_capacity(self):
        m = mode(L, UP, "+")
        s = VAC
        for _ in range(4):
            s = create_photon(s, m)
        with pytest.raises(CapacityError):
            create_photon(s, m)
        tight = PhotonState.vacuum(max_occupancy=1)
        with pytest.raises(CapacityError):
            create_photon(create_photon(tight, m), m)

    def test_foreign_mode_rejected(self):
        with pytest.raises(ValueError):
            create_photon(VAC, mode(R, LO, "x"))


class TestModePairUnitary:
    A = mode(R, LO, "+")
    B = mode(R, UP, "+")

    def test_identity(self, rng):
        s = oracle.random_state(rng)
        out = apply_mode_pair_unitary(s, self.A, self.B, np.eye(2))
        assert np.allclose(oracle.to_dense(out), oracle.to_dense(s), atol=1e-12)

    def test_swap(self):
        s = PhotonState.basis_state({self.A: 1})
        out = apply_mode_pair_unitary(s, self.A, self.B, [[0, 1], [1, 0]])
        assert out.terms == PhotonState.basis_state({self.B: 1}).terms

    def test_fifty_fifty_against_dense(self):
        u = np.array([[1, 1j], [1j, 1]]) * S
        s = PhotonState.basis_state({self.A: 1})
        out = apply_mode_pair_unitary(s, self.A, self.B, u)
        assert out.amplitude({self.A: 1}) == pytest.approx(S, abs=1e-12)
        assert out.amplitude({self.B: 1}) == pytest.approx(1j * S, abs=1e-12)
        ia, ib = CIRCULAR_MODES.index(self.A), CIRCULAR_MODES.index(self.B)
        dense = oracle.dense_operator(embed_pair(u, ia, ib)) @ oracle.to_dense(s)
        assert np.max(abs(oracle.to_dense(out) - dense)) < 1e-12

    def test_hong_ou_mandel(self):
        # two photons on a balanced splitter never leave in different modes
        u = np.array([[1, 1j], [1j, 1]]) * S
        s = PhotonState.basis_state({self.A: 1, self.B: 1})
        out = apply_mode_pair_unitary(s, self.A, self.B, u)
        assert abs(out.amplitude({self.A: 1, self.B: 1})) < 1e-12
        assert squared_norm(out) == pytest.approx(1.0)

    def test_rejects_non_unitary(self):
        with pytest.raises(ValueError, match="unitary"):
            apply_mode_pair_unitary(VAC, self.A, self.B, [[1, 1], [1, 1]])

    def test_rejects_same_mode(self):
        with pytest.raises(ValueError):
            apply_mode_pair_unitary(VAC, self.A, self.A, np.eye(2))


class TestInnerProduct:
    def test_vacuum(self):
        assert inner_product(VAC, VAC) == 1

    def test_orthogonal(self):
        a = PhotonState.basis_state({mode(R, UP, "+"): 1})
        b = PhotonState.basis_state({mode(R, UP, "-"): 1})
        assert inner_product(a, b) == 0

    def test_product_probe_normalized(self):
        s = from_creations([(1, [mode(R, LO, "+"), mode(L, LO, "-")])])
        assert inner_product(s, s) == pytest.approx(1)

    def test_conjugate_linear_in_first(self, rng):
        a, b = oracle.random_state(rng), oracle.random_state(rng)
        c = 0.3 - 0.7j
        assert inner_product(a.scaled(c), b) == pytest.approx(np.conj(c) * inner_product(a, b))
        assert inner_product(a, b.scaled(c)) == pytest.approx(c * inner_product(a, b))

    def test_registries_must_match(self):
        with pytest.raises(ValueError):
            inner_product(VAC, PhotonState.vacuum(LINEAR_MODES))


class TestSquaredNorm:
    def test_vacuum(self):
        assert squared_norm(VAC) == 1

    def test_epr_ket(self):
        s = from_creations(
            [(S, [mode(R, LO, "+"), mode(L, LO, "-")]), (S, [mode(R, LO, "-"), mode(L, LO, "+")])]
        )
        assert squared_norm(s) == pytest.approx(1.0, abs=1e-15)

    def test_two_terms_without_prefactor(self):
        x = [mode(R, UP, "x"), mode(L, UP, "x")]
        y = [mode(R, UP, "y"), mode(L, UP, "y")]
        s = from_creations([(1, x), (1, y)], LINEAR_MODES)
        assert squared_norm(s) == pytest.approx(2.0)


def test_purge_threshold():
    s = PhotonState({(0,) * 8: 1.0, (1,) + (0,) * 7: PURGE_THRESHOLD / 10})
    assert list(s.terms) == [(0,) * 8]


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        PhotonState({(0,) * 8: float("nan")})


seeds = st.integers(min_value=0, max_value=2**32 - 1)


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(0, 7), st.integers(0, 7))
def test_pair_unitary_preserves_norm_and_inverts(seed, ia, ib):
    if ia == ib:
        ib = (ib + 1) % 8
    rng = np.random.default_rng(seed)
    s = oracle.random_state(rng)
    u = oracle.random_unitary(rng)
    a, b = CIRCULAR_MODES[ia], CIRCULAR_MODES[ib]
    out = apply_mode_pair_unitary(s, a, b, u)
    assert abs(squared_norm(out) - 1) < 1e-10
    back = apply_mode_pair_unitary(out, a, b, u.conj().T)
    assert np.max(abs(oracle.to_dense(back) - oracle.to_dense(s))) < 1e-10


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_transform_matches_dense_oracle(seed):
    rng = np.random.default_rng(seed)
    s = oracle.random_state(rng)
    m = oracle.random_unitary(rng, 8)
    sparse = oracle.to_dense(transform_modes(s, m))
    dense = oracle.dense_operator(m) @ oracle.to_dense(s)
    assert np.max(abs(sparse - dense)) < 1e-10


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_no_amplitude_below_purge_threshold(seed):
    rng = np.random.default_rng(seed)
    s = oracle.random_state(rng)
    out = transform_modes(s, oracle.bs_single_photon_matrix())
    assert all(abs(a) >= PURGE_THRESHOLD for a in out.terms.values())
