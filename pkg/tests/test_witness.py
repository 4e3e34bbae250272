import itertools
from math import comb, tanh

import numpy as np
import pytest

from multiport.bsv import INVERSE_DEGENERACY, STATE_NORM, BsvSpec
from multiport.fock import (
    StateVector,
    basis_upto,
    enumerate_basis,
    quadratic_matrix,
)
from multiport.loss import OutcomeDistribution, ideal_joint_distribution
from multiport.mub import build_mub
from multiport.witness import (
    INTENSITY_D3,
    NUMBER_P,
    RATE_D3,
    RATE_P,
    NoBracketError,
    NotEvaluable,
    complementarity_intensities,
    complementarity_rates,
    criterion,
    critical_eta,
    epr_deficit_numbers,
    epr_deficit_rates,
    product_margins,
    rate_bound_value,
    rate_identity_deviation,
    rotated_number_ops,
    sample_complementarity,
    separable_rhs,
    separable_rhs_rates,
    setting_deficit,
)

W = np.exp(2j * np.pi / 3)


def loop_oracle(gamma, eta, cutoff=10, weighting=STATE_NORM):
    """Rate criterion for lossy renormalized squeezed vacuum by explicit summation.

    Loops over sectors, compositions and every detected pattern on each side.
    Within one composition the two sides are thinned independently, so
    ``<|R_A - R_B|^2> = 2 <|R|^2> - 2 |<R>|^2``.
    """
    t2 = tanh(gamma) ** 2
    raw = []
    for n in range(1, cutoff + 1):
        d = comb(n + 2, 2)
        raw.append(d * t2 ** (n - 1) if weighting == STATE_NORM else t2 ** (n - 1) / d)
    weights = np.array(raw) / sum(raw)
    lhs = inv = 0.0
    for n, weight in zip(range(1, cutoff + 1), weights):
        comps = [c for c in itertools.product(range(n + 1), repeat=3) if sum(c) == n]
        for c in comps:
            mean_r = mean_r2 = mean_inv = 0.0
            for m in itertools.product(*[range(k + 1) for k in c]):
                pr = np.prod([comb(k, j) * eta**j * (1 - eta) ** (k - j) for j, k in zip(m, c)])
                tot = sum(m)
                if tot:
                    r = (m[0] + W * m[1] + W * W * m[2]) / tot
                    mean_r += pr * r
                    mean_r2 += pr * abs(r) ** 2
                    mean_inv += pr / tot
            lhs += weight / len(comps) * (2 * mean_r2 - 2 * abs(mean_r) ** 2)
            inv += weight / len(comps) * mean_inv
    return 4 * lhs, 6 * inv


# --- rotated number operators ---------------------------------------------


def test_identity_setting_number_ops():
    ops = rotated_number_ops(build_mub(3)[-1])
    for j, op in enumerate(ops):
        expected = np.zeros((3, 3))
        expected[j, j] = 1
        assert np.allclose(op.coefficients, expected)


def test_number_ops_are_rank_one_projectors():
    for u in build_mub(5):
        for op in rotated_number_ops(u):
            c = op.coefficients
            assert np.allclose(c @ c, c)
            assert np.linalg.matrix_rank(c) == 1


def test_single_photon_splits_to_thirds():
    from multiport.fock import expect_quadratic

    state = StateVector.fock((1, 0, 0))
    for u in build_mub(3)[:-1]:
        for op in rotated_number_ops(u):
            assert expect_quadratic(state, op) == pytest.approx(1 / 3)


# --- deficits and bounds --------------------------------------------------


def test_mismatched_single_photons():
    dist = OutcomeDistribution.from_entries(3, {((1, 0, 0), (0, 1, 0)): 1.0})
    assert setting_deficit(dist, RATE_D3) == pytest.approx(abs(1 - W) ** 2)
    assert setting_deficit(dist, RATE_D3) == pytest.approx(3.0)


def test_lossless_deficit_is_zero():
    for g in (0.5, 1.0, 2.0):
        dist = ideal_joint_distribution(BsvSpec(3, g, 10, renormalized=True))
        assert epr_deficit_rates(dist) == 0
        assert epr_deficit_numbers(dist) == 0
        assert epr_deficit_rates(dist, phasor=False) == 0


def test_vacuum_deficit_is_zero():
    dist = OutcomeDistribution.from_entries(3, {((0, 0, 0), (0, 0, 0)): 1.0})
    assert epr_deficit_rates(dist) == 0
    with pytest.raises(NotEvaluable):
        separable_rhs(dist, RATE_D3)


def test_rhs_single_photons():
    dist = ideal_joint_distribution(BsvSpec(3, 1e-9, 10, renormalized=True))
    assert separable_rhs_rates(dist) == pytest.approx(6.0)
    assert epr_deficit_rates(dist) == 0


def test_rhs_two_photons():
    dist = OutcomeDistribution.from_entries(3, {((1, 1, 0), (1, 1, 0)): 0.5, ((0, 0, 2), (0, 0, 2)): 0.5})
    assert separable_rhs(dist, RATE_D3) == pytest.approx(3.0)
    assert separable_rhs(dist, INTENSITY_D3) == pytest.approx(12.0)
    assert separable_rhs(dist, NUMBER_P) == pytest.approx(8.0)
    assert separable_rhs(dist, RATE_P) == pytest.approx(2.0)


def test_phasor_kinds_need_three_modes():
    dist = ideal_joint_distribution(BsvSpec(5, 0.5, 3))
    with pytest.raises(ValueError):
        setting_deficit(dist, RATE_D3)


@pytest.mark.parametrize("weighting", [STATE_NORM, INVERSE_DEGENERACY])
def test_against_loop_oracle(weighting):
    spec = BsvSpec(3, 1.0, 10, renormalized=True)
    report = criterion(RATE_D3, spec, 0.2, weighting)
    lhs, rhs = loop_oracle(1.0, 0.2, 10, weighting)
    assert report.lhs == pytest.approx(lhs, rel=1e-10)
    assert report.rhs == pytest.approx(rhs, rel=1e-10)


# --- verdicts -------------------------------------------------------------


def test_verdict_examples():
    perfect = criterion(RATE_D3, BsvSpec(3, 1.0, 10, renormalized=True), 1.0)
    assert perfect.lhs == 0 and perfect.verdict == "entangled"
    weak = criterion(INTENSITY_D3, BsvSpec(3, 1.0, 10), 0.2)
    assert weak.witness >= 0 and weak.verdict == "inconclusive"
    bright = criterion(RATE_D3, BsvSpec(3, 3.0, 10, renormalized=True), 0.2)
    assert bright.verdict == "entangled"


def test_no_detection_is_not_a_verdict():
    report = criterion(RATE_D3, BsvSpec(3, 1.0, 10, renormalized=True), 0.0)
    assert report.verdict == "inconclusive"
    assert np.isnan(report.witness)
    assert "no photons" in report.reason
    report = criterion(RATE_P, BsvSpec(5, 0.5, 3, renormalized=True), 0.0)
    assert "no coincident" in report.reason


@pytest.mark.parametrize("kind, gamma", [(INTENSITY_D3, 1.0), (RATE_D3, 1.0), (NUMBER_P, 0.5)])
def test_single_sign_change(kind, gamma):
    spec = BsvSpec(3, gamma, 10, renormalized=kind == RATE_D3)
    values = [criterion(kind, spec, eta).witness for eta in np.linspace(0.02, 1, 50)]
    signs = np.sign(values)
    assert signs[0] > 0 and signs[-1] < 0
    assert np.count_nonzero(np.diff(signs)) == 1


def test_bisection_against_grid_scan():
    spec = BsvSpec(3, 1.0, 10, renormalized=True)
    grid = np.linspace(0.1, 0.3, 401)
    values = [criterion(RATE_D3, spec, eta).witness for eta in grid]
    first = grid[np.argmax(np.array(values) < 0)]
    eta, iterations = critical_eta(RATE_D3, spec, full_output=True)
    assert first - 5e-4 - 1e-4 <= eta <= first + 1e-4
    assert iterations > 5


def test_number_threshold_p3():
    assert critical_eta(NUMBER_P, BsvSpec(3, 1.0, 10)) == pytest.approx(0.5, abs=1e-3)


def test_rate_p_has_no_threshold():
    with pytest.raises(NoBracketError, match="always violated"):
        critical_eta(RATE_P, BsvSpec(3, 1.0, 10, renormalized=True))


def test_never_violated():
    # zero gain leaves only the vacuum, which no criterion can flag
    with pytest.raises(NoBracketError, match="never violated"):
        critical_eta(INTENSITY_D3, BsvSpec(3, 0.0, 10))


# --- identities, bounds, complementarity ----------------------------------


def _rate_sum_on_sector(n):
    """Dense ``sum_m R_m^dagger R_m`` on the ``n``-photon sector from number operators."""
    basis = enumerate_basis(3, n)
    total = np.zeros((len(basis), len(basis)), dtype=complex)
    for u in build_mub(3):
        r = sum(W**j * quadratic_matrix(op, basis) for j, op in enumerate(rotated_number_ops(u))) / n
        total += r.conj().T @ r
    return total


@pytest.mark.parametrize("n, value", [(1, 4.0), (2, 2.5), (3, 2.0)])
def test_rate_sum_eigenvalue(n, value):
    assert np.allclose(_rate_sum_on_sector(n), value * np.eye(len(enumerate_basis(3, n))))


@pytest.mark.parametrize("p, cutoff", [(2, 5), (3, 6), (5, 4), (7, 3)])
def test_rate_identity(p, cutoff):
    assert rate_identity_deviation(p, cutoff) < 1e-10


def test_rate_bound_examples():
    assert rate_bound_value(StateVector.fock((1, 0, 0))) == pytest.approx(1.0)
    assert rate_bound_value(StateVector.fock((0, 0, 0))) == pytest.approx(0.0)
    basis = basis_upto(3, 4)
    rng = np.random.default_rng(5)
    for _ in range(50):
        z = rng.standard_normal(len(basis)) + 1j * rng.standard_normal(len(basis))
        assert rate_bound_value(StateVector.from_dense(3, basis, z / np.linalg.norm(z), 4)) <= 1 + 1e-10


@pytest.mark.parametrize("p", (2, 3, 5))
def test_complementarity_saturation(p):
    for n in (1, 2, 3):
        occ = (0,) * (p - 1) + (n,)
        assert complementarity_rates(StateVector.fock(occ)) == pytest.approx(2.0, abs=1e-10)
        value, cap = complementarity_intensities(StateVector.fock(occ))
        assert value <= cap + 1e-10
    assert complementarity_rates(StateVector.fock((0,) * p)) == 0


def test_complementarity_sampling():
    stats = sample_complementarity(3, 200, 4, seed=3)
    assert stats["max_rate_sum"] <= 2 + 1e-10
    assert stats["max_intensity_excess"] <= 1e-10


# --- separable safety -----------------------------------------------------


def test_identical_single_photon_product():
    basis = basis_upto(3, 4)
    psi = np.zeros(len(basis), dtype=complex)
    psi[basis.index((1, 0, 0))] = 1
    margins = product_margins(3, 4, psi, psi)
    assert margins[RATE_D3] == pytest.approx(0, abs=1e-12)
    assert all(m >= -1e-9 for m in margins.values())


def test_vacuum_side_is_skipped():
    basis = basis_upto(3, 4)
    vac = np.zeros(len(basis), dtype=complex)
    vac[0] = 1
    photon = np.zeros(len(basis), dtype=complex)
    photon[basis.index((0, 1, 0))] = 1
    margins = product_margins(3, 4, photon, vac)
    assert margins[RATE_D3] is None and margins[RATE_P] is None
