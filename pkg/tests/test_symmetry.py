"""The count statistics of the squeezed vacuum are the same for every conjugate
setting pair; the criteria rely on this to evaluate a single setting.  These
tests transform the state explicitly and compare."""
import numpy as np
import pytest

from multiport.bsv import BsvSpec, build_bsv
from multiport.linop import joint_transform
from multiport.loss import apply_loss, distribution_from_state, ideal_joint_distribution
from multiport.mub import build_mub, conjugate_pair
from multiport.witness import (
    INTENSITY_D3,
    NUMBER_P,
    RATE_D3,
    RATE_P,
    epr_deficit_numbers,
    epr_deficit_rates,
    setting_deficit,
)


def explicit_distributions(spec):
    state = build_bsv(spec)
    return [distribution_from_state(joint_transform(state, u, conjugate_pair(u))) for u in build_mub(spec.p)]


@pytest.mark.parametrize("p, gamma, cutoff", [(2, 1.0, 5), (3, 0.8, 4), (5, 0.5, 2)])
def test_every_setting_matches_number_basis(p, gamma, cutoff):
    spec = BsvSpec(p, gamma, cutoff)
    reference = ideal_joint_distribution(spec).probs
    for dist in explicit_distributions(spec):
        assert np.abs(dist.probs - reference).max() < 1e-10


@pytest.mark.parametrize("eta", [0.3, 0.75])
def test_single_setting_shortcut_p3(eta):
    spec = BsvSpec(3, 0.9, 4, renormalized=True)
    lossy = [apply_loss(d, eta) for d in explicit_distributions(spec)]
    shortcut = apply_loss(ideal_joint_distribution(spec), eta)
    assert sum(setting_deficit(d, RATE_D3) for d in lossy) == pytest.approx(epr_deficit_rates(shortcut), rel=1e-10)
    assert sum(setting_deficit(d, INTENSITY_D3) for d in lossy) == pytest.approx(
        epr_deficit_numbers(shortcut), rel=1e-10
    )


def test_single_setting_shortcut_p5():
    spec = BsvSpec(5, 0.6, 2, renormalized=True)
    lossy = [apply_loss(d, 0.4) for d in explicit_distributions(spec)]
    shortcut = apply_loss(ideal_joint_distribution(spec), 0.4)
    assert sum(setting_deficit(d, NUMBER_P) for d in lossy) == pytest.approx(epr_deficit_numbers(shortcut), rel=1e-10)
    assert sum(setting_deficit(d, RATE_P) for d in lossy) == pytest.approx(epr_deficit_rates(shortcut), rel=1e-10)


def test_mismatched_settings_break_correlations():
    spec = BsvSpec(3, 0.9, 3)
    u = build_mub(3)[0]
    dist = distribution_from_state(joint_transform(build_bsv(spec), u, u))
    assert np.abs(dist.probs - ideal_joint_distribution(spec).probs).max() > 1e-3
