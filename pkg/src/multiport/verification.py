"""Self-checks run by ``multiport verify``: algebraic identities, bounds, oracles and thresholds."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bsv import WEIGHTINGS, BsvSpec, build_bsv, sector_state
from .fock import StateVector
from .linop import joint_transform
from .loss import distribution_from_state, ideal_joint_distribution
from .mub import build_mub, conjugate_pair, unbiasedness_deviation, unitarity_deviation
from .witness import (
    INTENSITY_D3,
    RATE_D3,
    NoBracketError,
    complementarity_intensities,
    complementarity_rates,
    critical_eta,
    epr_deficit_numbers,
    epr_deficit_rates,
    rate_bound_max,
    rate_bound_value,
    rate_identity_deviation,
    sample_complementarity,
    sample_separable,
)

HIGH_GAIN_WINDOW = (0.15, 0.16)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def mub_certificate(p: int) -> tuple[float, float]:
    """``(max overlap deviation, max unitarity deviation)`` of the ``p + 1`` settings."""
    settings = build_mub(p)
    return unbiasedness_deviation(settings), max(unitarity_deviation(u) for u in settings)


def epr_invariance_deviation(p: int, n_max: int = 4) -> tuple[float, float]:
    """Oracle check of conjugate-setting symmetry.

    Returns the largest amplitude change of each ``n``-photon sector state under
    ``U(m) x conj U(m)``, and the largest difference between the transformed
    squeezed-vacuum count distribution and the number-basis one.
    """
    state_dev = dist_dev = 0.0
    spec = BsvSpec(p, 1.0, n_max)
    bsv = build_bsv(spec)
    reference = ideal_joint_distribution(spec).probs
    for u in build_mub(p):
        v = conjugate_pair(u)
        for n in range(n_max + 1):
            psi = sector_state(p, n)
            out = joint_transform(psi, u, v)
            keys = set(psi.amplitudes) | set(out.amplitudes)
            diff = max(abs(out.amplitudes.get(k, 0) - psi.amplitudes.get(k, 0)) for k in keys)
            state_dev = max(state_dev, diff)
        rotated = distribution_from_state(joint_transform(bsv, u, v)).probs
        dist_dev = max(dist_dev, float(np.abs(rotated - reference).max()))
    return state_dev, dist_dev


def epr_zero(gammas=(0.5, 1.0, 2.0), cutoff: int = 10) -> float:
    """Largest rate or number deficit of the lossless squeezed vacuum."""
    worst = 0.0
    for g in gammas:
        for renorm in (False, True):
            dist = ideal_joint_distribution(BsvSpec(3, g, cutoff, renorm))
            worst = max(worst, abs(epr_deficit_rates(dist)), abs(epr_deficit_numbers(dist)))
            worst = max(worst, abs(epr_deficit_rates(dist, phasor=False)), abs(epr_deficit_numbers(dist, phasor=False)))
    return worst


def high_gain_thresholds(gamma: float = 3.0, cutoff: int = 10) -> dict[str, float]:
    spec = BsvSpec(3, gamma, cutoff, renormalized=True)
    return {w: critical_eta(RATE_D3, spec, weighting=w) for w in WEIGHTINGS}


def run_verification(seed: int = 0, samples: int = 1000, bound_samples: int = 10_000) -> list[CheckResult]:
    results = []

    def add(name, passed, detail):
        results.append(CheckResult(name, bool(passed), detail))

    devs = {p: mub_certificate(p) for p in (2, 3, 5, 7, 11)}
    worst = max(max(d) for d in devs.values())
    add("mub certification p in {2,3,5,7,11}", worst < 1e-12, f"max deviation {worst:.3g}")

    dev3 = rate_identity_deviation(3, 6)
    dev5 = rate_identity_deviation(5, 4)
    add("rate identity (p=3 cutoff 6, p=5 cutoff 4)", max(dev3, dev5) < 1e-10, f"max deviation {max(dev3, dev5):.3g}")

    bound = rate_bound_max(3, bound_samples, 4, seed)
    saturation = rate_bound_value(StateVector.fock((1, 0, 0)))
    add(
        f"rate bound over {bound_samples} random states",
        bound <= 1 + 1e-10 and abs(saturation - 1) < 1e-12,
        f"max {bound:.6f}, |1,0,0> gives {saturation:.12g}",
    )

    comp_ok, comp_detail = True, []
    for p in (2, 3, 5):
        stats = sample_complementarity(p, samples, 4, seed)
        occ = (2,) + (0,) * (p - 1)
        sat = complementarity_rates(StateVector.fock(occ))
        inten, cap = complementarity_intensities(StateVector.fock(occ))
        comp_ok &= stats["max_rate_sum"] <= 2 + 1e-10 and stats["max_intensity_excess"] <= 1e-10
        comp_ok &= abs(sat - 2) < 1e-10 and inten <= cap + 1e-10
        comp_detail.append(f"p={p}: max {stats['max_rate_sum']:.4f}, saturation {sat:.12g}")
    add("complementarity relations", comp_ok, "; ".join(comp_detail))

    zero = epr_zero()
    add("EPR zero at eta=1", zero < 1e-12, f"max deficit {zero:.3g}")

    sym = [epr_invariance_deviation(p) for p in (2, 3)]
    sym_dev = max(max(s) for s in sym)
    add("conjugate-setting symmetry vs oracle (n<=4)", sym_dev < 1e-10, f"max deviation {sym_dev:.3g}")

    sep = [sample_separable(p, samples, 4, seed) for p in (2, 3, 5)]
    margin = min(min(r.min_margin.values()) for r in sep)
    add("separable product states never violate", all(r.passed for r in sep), f"min margin {margin:.4g}")

    etas = {g: critical_eta(INTENSITY_D3, BsvSpec(3, g, 10)) for g in (0.3, 1.0, 2.0)}
    add(
        "intensity threshold 1/4",
        all(abs(e - 0.25) <= 0.005 for e in etas.values()),
        ", ".join(f"G={g}: {e:.4f}" for g, e in etas.items()),
    )

    low = critical_eta(RATE_D3, BsvSpec(3, 0.05, 10, renormalized=True))
    add("rate threshold, low gain", 0.24 <= low < 0.25, f"G=0.05: {low:.4f}")

    try:
        high = high_gain_thresholds()
    except NoBracketError as exc:
        add("rate threshold, high gain", False, str(exc))
    else:
        lo, hi = HIGH_GAIN_WINDOW
        matching = [w for w, e in high.items() if lo <= e <= hi]
        detail = ", ".join(f"{w}: {e:.4f}" for w, e in high.items())
        verdict = f"reproduced by {' and '.join(matching)}" if matching else "reproduced by neither weighting"
        add("rate threshold, high gain", bool(matching), f"G=3: {detail}; {verdict}")
    return results

