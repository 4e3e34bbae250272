"""Bright squeezed vacuum over ``p`` signal/idler mode pairs, truncated at a photon cutoff.

The state is the product of ``p`` two-mode squeezed vacua.  Its ``n``-photon
sector (per party) is the uniform superposition of ``|c>_A |c>_B`` over all
compositions ``c`` of ``n``, each with amplitude ``tanh(G)^n / cosh(G)^p``
before truncation.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, expm1, log1p, tanh

from .fock import DEFAULT_CUTOFF, StateVector, enumerate_basis, normalize
from .mub import require_prime

STATE_NORM = "state-norm"
INVERSE_DEGENERACY = "inverse-degeneracy"
WEIGHTINGS = (STATE_NORM, INVERSE_DEGENERACY)


@dataclass(frozen=True)
class BsvSpec:
    """Parameters of a truncated squeezed vacuum.

    ``renormalized`` drops the vacuum term before normalizing, which is the
    ``Pi_A x Pi_B`` projection used to sharpen rate criteria.
    """

    p: int
    gamma: float
    cutoff: int = DEFAULT_CUTOFF
    renormalized: bool = False

    def __post_init__(self):
        require_prime(self.p)
        if not self.gamma >= 0:
            raise ValueError(f"gain must be non-negative, got {self.gamma}")
        if self.cutoff < (1 if self.renormalized else 0):
            raise ValueError("a vacuum-projected state needs cutoff >= 1")

    @property
    def first_sector(self) -> int:
        return 1 if self.renormalized else 0


def _sector_factors(spec: BsvSpec, weighting: str) -> list[tuple[int, float]]:
    if weighting not in WEIGHTINGS:
        raise ValueError(f"unknown weighting {weighting!r}; choose from {WEIGHTINGS}")
    t2 = tanh(spec.gamma) ** 2
    n0 = spec.first_sector
    out = []
    for n in range(n0, spec.cutoff + 1):
        degeneracy = comb(n + spec.p - 1, spec.p - 1)
        # powers relative to the first sector keep the G -> 0 limit finite
        geometric = t2 ** (n - n0)
        weight = degeneracy * geometric if weighting == STATE_NORM else geometric / degeneracy
        out.append((n, weight))
    return out


def sector_weights(spec: BsvSpec, weighting: str = STATE_NORM) -> list[tuple[int, float]]:
    """Normalized probability of each photon-number sector ``n`` (per party).

    ``"state-norm"`` gives ``P_n ~ C(n+p-1, p-1) tanh^{2n} G``, the squared norm of
    the sector in the state.  ``"inverse-degeneracy"`` divides by the sector
    size instead; it is kept to compare against that alternative mixing rule.
    """
    factors = _sector_factors(spec, weighting)
    total = sum(w for _, w in factors)
    return [(n, w / total) for n, w in factors]


def build_bsv(spec: BsvSpec) -> StateVector:
    t = tanh(spec.gamma)
    n0 = spec.first_sector
    amps = {}
    for n in range(n0, spec.cutoff + 1):
        amp = t ** (n - n0)
        if amp == 0:
            break
        for occ in enumerate_basis(spec.p, n):
            amps[(occ, occ)] = amp
    return normalize(StateVector(spec.p, spec.cutoff, amps))


def truncated_mass(spec: BsvSpec) -> float:
    """Probability weight of the untruncated state lying above the cutoff.

    For a vacuum-projected spec the weight is taken relative to the non-vacuum part.
    """
    x = tanh(spec.gamma) ** 2
    if x == 0:
        return 0.0
    if x >= 1:
        return 1.0
    n0 = spec.first_sector
    # both series are taken relative to x^n0 so tiny gains stay finite
    kept = sum(comb(n + spec.p - 1, spec.p - 1) * x ** (n - n0) for n in range(n0, spec.cutoff + 1))
    full = expm1(-spec.p * log1p(-x))
    total = full / x if n0 else full + 1
    return max(0.0, 1 - kept / total)


def sector_state(p: int, n: int) -> StateVector:
    """Normalized ``n``-photon-per-party sector: uniform over matching composition pairs."""
    require_prime(p)
    basis = enumerate_basis(p, n)
    amp = 1 / len(basis) ** 0.5
    return StateVector(p, n, {(occ, occ): amp for occ in basis})
