import numpy as np
import pytest

from multiport.bsv import sector_state
from multiport.fock import QuadraticOperator, StateVector, basis_upto, expect_quadratic
from multiport.linop import (
    MAX_PHOTONS,
    joint_transform,
    transform_matrix,
    transform_state,
)
from multiport.mub import build_mub, conjugate_pair
from multiport.witness import rotated_number_ops


def test_vacuum_fixed():
    for u in build_mub(3):
        out = transform_state(StateVector.fock((0, 0, 0)), u)
        assert out.allclose(StateVector.fock((0, 0, 0)))


@pytest.mark.parametrize("m", range(4))
def test_single_photon_splits_evenly(m):
    u = build_mub(3)[m]
    out = transform_state(StateVector.fock((1, 0, 0)), u)
    probs = {occ: abs(a) ** 2 for (occ, _), a in out.amplitudes.items()}
    if u.is_identity_setting:
        assert probs == pytest.approx({(1, 0, 0): 1.0})
    else:
        assert sorted(probs) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
        assert all(v == pytest.approx(1 / 3) for v in probs.values())


def test_two_photons_on_balanced_splitter():
    # (a0 + a1)^2 / (2 sqrt 2) |0> = (sqrt2 |2,0> + 2 |1,1> + sqrt2 |0,2>) / (2 sqrt 2)
    out = transform_state(StateVector.fock((2, 0)), build_mub(2)[0])
    mags = {occ: abs(a) for (occ, _), a in out.amplitudes.items()}
    assert mags[(2, 0)] == pytest.approx(0.5)
    assert mags[(1, 1)] == pytest.approx(1 / np.sqrt(2))
    assert mags[(0, 2)] == pytest.approx(0.5)


@pytest.mark.parametrize("p", (2, 3, 5))
def test_conserves_norm_and_photons(p, rng):
    basis = basis_upto(p, 3)
    z = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
    state = StateVector.from_dense(p, basis, z / np.linalg.norm(z), 3)
    for u in build_mub(p):
        out = transform_state(state, u)
        assert out.norm() == pytest.approx(1.0, abs=1e-12)
        before = {n: sum(abs(a) ** 2 for (o, _), a in state.amplitudes.items() if sum(o) == n) for n in range(4)}
        after = {n: sum(abs(a) ** 2 for (o, _), a in out.amplitudes.items() if sum(o) == n) for n in range(4)}
        assert after == pytest.approx(before, abs=1e-12)


def test_matrix_is_unitary():
    for u in build_mub(3):
        w = transform_matrix(u, 3)
        assert np.allclose(w.conj().T @ w, np.eye(len(w)), atol=1e-12)


def test_expansion_guard():
    with pytest.raises(ValueError):
        transform_state(StateVector.fock((MAX_PHOTONS + 1, 0)), build_mub(2)[0])
    with pytest.raises(ValueError):
        transform_matrix(build_mub(2)[0], MAX_PHOTONS + 1)


def test_mismatched_p():
    with pytest.raises(ValueError):
        transform_state(StateVector.fock((1, 0, 0)), build_mub(2)[0])


@pytest.mark.parametrize("p, n", [(p, n) for p in (2, 3) for n in range(5)] + [(5, n) for n in range(4)])
def test_conjugate_pair_preserves_sector_states(p, n):
    psi = sector_state(p, n)
    for u in build_mub(p):
        assert joint_transform(psi, u, conjugate_pair(u)).allclose(psi, atol=1e-10)


def test_identity_pair_is_noop():
    psi = sector_state(3, 2)
    ident = build_mub(3)[-1]
    assert joint_transform(psi, ident, ident).allclose(psi)


@pytest.mark.parametrize("seed", range(4))
def test_heisenberg_matches_schrodinger(seed):
    rng = np.random.default_rng(seed)
    basis = basis_upto(3, 6)
    z = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
    state = StateVector.from_dense(3, basis, z / np.linalg.norm(z), 6)
    for u in build_mub(3):
        out = transform_state(state, u)
        for j, op in enumerate(rotated_number_ops(u)):
            heis = expect_quadratic(state, op)
            schr = expect_quadratic(out, QuadraticOperator.number(3, j))
            assert heis == pytest.approx(schr, abs=1e-10)
