"""Joint photon-count distributions and binomial detector loss.

Loss acts on measured statistics only: every mode on every side is thinned
independently, with each photon detected with probability ``eta``.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from functools import cache
from math import comb

import numpy as np

from .bsv import STATE_NORM, BsvSpec, sector_weights
from .fock import Occupation, StateVector, basis_upto, enumerate_basis

PRUNE = 1e-16


def q(m: int, n: int, eta: float) -> float:
    """Probability that ``m`` of ``n`` incident photons are counted at efficiency ``eta``."""
    if not 0 <= eta <= 1:
        raise ValueError(f"efficiency must lie in [0, 1], got {eta}")
    if m < 0 or n < 0 or m > n:
        return 0.0
    if eta == 0:
        return float(m == 0)
    if eta == 1:
        return float(m == n)
    return comb(n, m) * eta**m * (1 - eta) ** (n - m)


@cache
def _occupation_array(p: int, cutoff: int) -> np.ndarray:
    return np.array(basis_upto(p, cutoff), dtype=int).reshape(-1, p)


def thinning_matrix(p: int, cutoff: int, eta: float) -> np.ndarray:
    """``T[d, n] = prod_j q(d_j, n_j, eta)`` over ``basis_upto(p, cutoff)``."""
    table = np.array([[q(m, n, eta) for n in range(cutoff + 1)] for m in range(cutoff + 1)])
    occ = _occupation_array(p, cutoff)
    out = np.ones((len(occ), len(occ)))
    for j in range(p):
        out *= table[occ[:, j][:, None], occ[:, j][None, :]]
    return out


@dataclass(frozen=True)
class OutcomeDistribution:
    """Probabilities of joint detected occupations ``(occ_A, occ_B)``.

    Stored densely as ``probs[i, k]`` over ``basis_upto(p, cutoff)`` on each side;
    :attr:`entries` gives the sparse view.
    """

    p: int
    cutoff: int
    probs: np.ndarray

    def __post_init__(self):
        k = len(self.basis)
        if self.probs.shape != (k, k):
            raise ValueError(f"probability table must be {k}x{k}, got {self.probs.shape}")

    @property
    def basis(self) -> tuple[Occupation, ...]:
        return basis_upto(self.p, self.cutoff)

    @property
    def occupations(self) -> np.ndarray:
        return _occupation_array(self.p, self.cutoff)

    @property
    def totals(self) -> np.ndarray:
        return self.occupations.sum(axis=1)

    @property
    def entries(self) -> dict[tuple[Occupation, Occupation], float]:
        basis = self.basis
        rows, cols = np.nonzero(self.probs > PRUNE)
        return {(basis[i], basis[k]): float(self.probs[i, k]) for i, k in zip(rows, cols)}

    @property
    def marginal_a(self) -> np.ndarray:
        return self.probs.sum(axis=1)

    @property
    def marginal_b(self) -> np.ndarray:
        return self.probs.sum(axis=0)

    def total(self) -> float:
        return float(self.probs.sum())

    @classmethod
    def from_entries(cls, p: int, entries: Mapping[tuple[Occupation, Occupation], float], cutoff: int | None = None):
        if cutoff is None:
            cutoff = max((max(sum(a), sum(b)) for a, b in entries), default=0)
        basis = basis_upto(p, cutoff)
        index = {occ: i for i, occ in enumerate(basis)}
        probs = np.zeros((len(basis), len(basis)))
        for (a, b), pr in entries.items():
            probs[index[tuple(a)], index[tuple(b)]] += pr
        return cls(p, cutoff, probs)

    @classmethod
    def product(cls, p: int, cutoff: int, marginal_a, marginal_b):
        return cls(p, cutoff, np.outer(marginal_a, marginal_b))


def ideal_joint_distribution(spec: BsvSpec, setting: int | None = None, weighting: str = STATE_NORM) -> OutcomeDistribution:
    """Perfectly correlated counts of the truncated squeezed vacuum.

    The distribution is the same for every conjugate pair of settings, so
    ``setting`` is accepted for clarity and ignored; the oracle tests in
    ``tests/test_symmetry.py`` check this against explicit transforms.
    """
    basis = basis_upto(spec.p, spec.cutoff)
    index = {occ: i for i, occ in enumerate(basis)}
    probs = np.zeros((len(basis), len(basis)))
    for n, weight in sector_weights(spec, weighting):
        sector = enumerate_basis(spec.p, n)
        for occ in sector:
            i = index[occ]
            probs[i, i] = weight / len(sector)
    return OutcomeDistribution(spec.p, spec.cutoff, probs)


def distribution_from_state(state: StateVector) -> OutcomeDistribution:
    """Number-basis outcome probabilities ``|amplitude|^2`` of a bipartite state."""
    entries: dict = {}
    for key, amp in state.amplitudes.items():
        pr = abs(amp) ** 2
        if pr > PRUNE:
            entries[key] = entries.get(key, 0.0) + pr
    return OutcomeDistribution.from_entries(state.p, entries, state.cutoff)


def apply_loss(dist: OutcomeDistribution, eta: float) -> OutcomeDistribution:
    """Binomially thin every mode on both sides."""
    t = thinning_matrix(dist.p, dist.cutoff, eta)
    diag = np.diag(dist.probs)
    if np.count_nonzero(dist.probs) == np.count_nonzero(diag):
        probs = (t * diag) @ t.T
    else:
        probs = t @ dist.probs @ t.T
    probs[probs < PRUNE] = 0.0
    return OutcomeDistribution(dist.p, dist.cutoff, probs)
