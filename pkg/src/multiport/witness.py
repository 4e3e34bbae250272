"""Observables and separability criteria for conjugate multiport measurements.

Four criteria are implemented, all of the form ``lhs >= rhs`` for separable
states, so ``witness = lhs - rhs < 0`` certifies entanglement:

``rate-d3``
    ``sum_m <|R_A - R_B|^2> >= 3 (<1/N_A> + <1/N_B>)`` with the phasor rate
    ``R = sum_j omega^j n_j / N`` (zero on empty detections); ``p = 3`` only.
``intensity-d3``
    ``sum_m <|K_A - K_B|^2> >= 3 (<N_A> + <N_B>)`` with ``K = sum_j omega^j n_j``.
``number-p``
    ``sum_{m,j} <(n_j^A(m) - n_j^B(m))^2> >= (p - 1) (<N_A> + <N_B>)``.
``rate-p``
    ``sum_{m,j} <(r_j^A(m) - r_j^B(m))^2> >= (p - 1) (1/<N_A> + 1/<N_B>)``.

Sums run over the ``p + 1`` unbiased settings; output modes are indexed ``0..p-1``.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field
from functools import cache
from math import factorial

import numpy as np
from scipy import optimize

from .bsv import STATE_NORM, BsvSpec, truncated_mass
from .fock import (
    QuadraticOperator,
    StateVector,
    basis_upto,
    enumerate_basis,
    quadratic_matrix,
)
from .linop import transform_matrix
from .loss import OutcomeDistribution, apply_loss, ideal_joint_distribution
from .mub import (
    ModeUnitary,
    build_mub,
    conjugate_pair,
    omega_power,
    rate_observable_matrix,
    require_prime,
)

RATE_D3 = "rate-d3"
INTENSITY_D3 = "intensity-d3"
NUMBER_P = "number-p"
RATE_P = "rate-p"
KINDS = (RATE_D3, INTENSITY_D3, NUMBER_P, RATE_P)
RATE_KINDS = (RATE_D3, RATE_P)

EMPTY_SIDE = 1e-15
DEFICIT_BLOCK = 2_000_000


class NotEvaluable(ValueError):
    """The criterion's bound is undefined for this distribution (e.g. nothing detected)."""


class NoBracketError(ValueError):
    """The witness does not change sign on the efficiency interval."""


def _check_kind(kind: str, p: int) -> None:
    if kind not in KINDS:
        raise ValueError(f"unknown criterion {kind!r}; choose from {KINDS}")
    if kind in (RATE_D3, INTENSITY_D3) and p != 3:
        raise ValueError(f"criterion {kind} is defined for p=3 only, got p={p}")


# --- operators -------------------------------------------------------------


def rotated_number_ops(unitary: ModeUnitary) -> list[QuadraticOperator]:
    """Heisenberg number operators ``n_j(m)`` of the multiport outputs.

    ``n_j(m) = sum_{s,t} U[j,s] conj(U[j,t]) a_s^dagger a_t``, i.e. the projector
    onto the ``j``-th row of ``U``; the coefficient matrices sum to the identity.
    """
    rows = unitary.matrix
    return [QuadraticOperator(np.outer(rows[j], rows[j].conj())) for j in range(unitary.p)]


@cache
def _sector_ops(p: int, n: int) -> tuple[tuple[np.ndarray, ...], tuple[tuple[np.ndarray, ...], ...]]:
    """Dense blocks on the ``n``-photon sector: phasor rate per setting, ``n_j(m)`` per setting."""
    basis = enumerate_basis(p, n)
    settings = build_mub(p)
    phasors = tuple(quadratic_matrix(QuadraticOperator(rate_observable_matrix(u)), basis) / n for u in settings)
    numbers = tuple(tuple(quadratic_matrix(op, basis) for op in rotated_number_ops(u)) for u in settings)
    return phasors, numbers


def _split_sectors(p: int, cutoff: int, vectors: np.ndarray) -> list[tuple[int, np.ndarray]]:
    """Split dense vectors (last axis over ``basis_upto``) into non-vacuum sector blocks."""
    out, start = [], 1
    for n in range(1, cutoff + 1):
        size = len(enumerate_basis(p, n))
        out.append((n, vectors[..., start:start + size]))
        start += size
    return out


def _dense(state: StateVector) -> np.ndarray:
    return state.to_dense(basis_upto(state.p, state.cutoff))


# --- per-outcome statistics ------------------------------------------------


def outcome_rates(occupations: np.ndarray) -> np.ndarray:
    """``n_j / N`` per outcome row, zero where nothing was detected."""
    occupations = np.asarray(occupations, dtype=float)
    totals = occupations.sum(axis=-1, keepdims=True)
    return np.divide(occupations, totals, out=np.zeros_like(occupations), where=totals > 0)


def outcome_statistic(kind: str, occupations: np.ndarray) -> np.ndarray:
    """Per-outcome vector whose squared A/B difference the criterion averages."""
    occupations = np.asarray(occupations, dtype=float)
    p = occupations.shape[-1]
    if kind in (RATE_D3, RATE_P):
        values = outcome_rates(occupations)
    else:
        values = occupations
    if kind in (RATE_D3, INTENSITY_D3):
        return (values @ omega_power(p, np.arange(p)))[:, None]
    return values


def setting_deficit(dist: OutcomeDistribution, kind: str) -> float:
    """``<|S_A - S_B|^2>`` for one setting, with ``S`` the criterion's statistic."""
    _check_kind(kind, dist.p)
    s = outcome_statistic(kind, dist.occupations)
    k, width = s.shape
    # summed directly rather than expanded: perfect correlations must give exactly 0
    block = max(1, DEFICIT_BLOCK // (k * width))
    total = 0.0
    for start in range(0, k, block):
        rows = dist.probs[start:start + block]
        if not rows.any():
            continue
        diff = np.abs(s[start:start + block, None, :] - s[None, :, :]) ** 2
        total += float((rows * diff.sum(axis=2)).sum())
    return total


def epr_deficit_rates(dist: OutcomeDistribution, phasor: bool | None = None) -> float:
    """Rate deficit summed over all ``p + 1`` conjugate setting pairs.

    ``dist`` must come from a state whose conjugate-setting statistics coincide
    with the number-basis ones (the squeezed vacuum, with or without loss), so
    one setting is computed and multiplied by ``p + 1``.
    """
    if phasor is None:
        phasor = dist.p == 3
    return (dist.p + 1) * setting_deficit(dist, RATE_D3 if phasor else RATE_P)


def epr_deficit_numbers(dist: OutcomeDistribution, phasor: bool | None = None) -> float:
    if phasor is None:
        phasor = dist.p == 3
    return (dist.p + 1) * setting_deficit(dist, INTENSITY_D3 if phasor else NUMBER_P)


def _side_moments(marginal: np.ndarray, totals: np.ndarray, side: str) -> tuple[float, float]:
    if marginal[totals > 0].sum() <= EMPTY_SIDE:
        raise NotEvaluable(f"no photons detected on side {side}")
    inv = np.divide(1.0, totals, out=np.zeros(len(totals)), where=totals > 0)
    return float(marginal @ totals), float(marginal @ inv)


def separable_rhs(dist: OutcomeDistribution, kind: str) -> float:
    """Lower bound that every separable state obeys, from the marginals of ``dist``."""
    _check_kind(kind, dist.p)
    totals = dist.totals
    mean_a, inv_a = _side_moments(dist.marginal_a, totals, "A")
    mean_b, inv_b = _side_moments(dist.marginal_b, totals, "B")
    p = dist.p
    if kind == RATE_D3:
        return 3 * (inv_a + inv_b)
    if kind == INTENSITY_D3:
        return 3 * (mean_a + mean_b)
    if kind == NUMBER_P:
        return (p - 1) * (mean_a + mean_b)
    return (p - 1) * (1 / mean_a + 1 / mean_b)


def separable_rhs_rates(dist: OutcomeDistribution, phasor: bool | None = None) -> float:
    if phasor is None:
        phasor = dist.p == 3
    return separable_rhs(dist, RATE_D3 if phasor else RATE_P)


def separable_rhs_numbers(dist: OutcomeDistribution, phasor: bool | None = None) -> float:
    if phasor is None:
        phasor = dist.p == 3
    return separable_rhs(dist, INTENSITY_D3 if phasor else NUMBER_P)


# --- criteria on the lossy squeezed vacuum ---------------------------------


@dataclass
class WitnessReport:
    criterion: str
    p: int
    gamma: float
    eta: float
    cutoff: int
    weighting: str
    renormalized: bool
    lhs: float
    rhs: float
    witness: float
    verdict: str
    truncated_mass: float
    reason: str | None = field(default=None)

    @property
    def entangled(self) -> bool:
        return self.verdict == "entangled"

    def to_dict(self) -> dict:
        return asdict(self)


def lossy_distribution(spec: BsvSpec, eta: float, weighting: str = STATE_NORM) -> OutcomeDistribution:
    return apply_loss(ideal_joint_distribution(spec, weighting=weighting), eta)


def condition_on_detection(dist: OutcomeDistribution) -> OutcomeDistribution:
    """Discard runs where either side detected nothing and renormalize."""
    hit = dist.totals > 0
    probs = dist.probs * np.outer(hit, hit)
    total = probs.sum()
    if total <= EMPTY_SIDE:
        raise NotEvaluable("no coincident detections")
    return OutcomeDistribution(dist.p, dist.cutoff, probs / total)


def evaluate(dist: OutcomeDistribution, kind: str) -> tuple[float, float]:
    """``(lhs, rhs)`` for a distribution with conjugate-setting symmetry.

    ``rate-p`` is evaluated on coincident detections only: its bound
    ``(p-1)/<N>`` holds for vacuum-free states and fails as soon as empty
    detections are averaged into ``<N>``.
    """
    if kind == RATE_P:
        dist = condition_on_detection(dist)
    lhs = (dist.p + 1) * setting_deficit(dist, kind)
    return lhs, separable_rhs(dist, kind)


def criterion(kind: str, spec: BsvSpec, eta: float, weighting: str = STATE_NORM) -> WitnessReport:
    """Evaluate one criterion on the squeezed vacuum seen through detectors of efficiency ``eta``.

    A negative witness means entangled. A non-negative one is reported as
    ``"inconclusive"``: the criteria are one-sided.
    """
    _check_kind(kind, spec.p)
    dist = lossy_distribution(spec, eta, weighting)
    common = dict(
        criterion=kind, p=spec.p, gamma=spec.gamma, eta=eta, cutoff=spec.cutoff,
        weighting=weighting, renormalized=spec.renormalized, truncated_mass=truncated_mass(spec),
    )
    try:
        lhs, rhs = evaluate(dist, kind)
    except NotEvaluable as exc:
        nan = float("nan")
        return WitnessReport(lhs=nan, rhs=nan, witness=nan, verdict="inconclusive", reason=str(exc), **common)
    witness = lhs - rhs
    verdict = "entangled" if witness < 0 else "inconclusive"
    return WitnessReport(lhs=lhs, rhs=rhs, witness=witness, verdict=verdict, **common)


def critical_eta(
    kind: str,
    spec: BsvSpec,
    weighting: str = STATE_NORM,
    tol: float = 1e-4,
    eta_min: float = 1e-3,
    full_output: bool = False,
):
    """Detector efficiency above which the criterion flags entanglement, by bisection.

    Requires ``witness(1) < 0 <= witness(eta_min)``; raises :class:`NoBracketError` otherwise.
    With ``full_output`` returns ``(eta, iterations)``.
    """

    def f(eta):
        return criterion(kind, spec, eta, weighting).witness

    hi, lo = f(1.0), f(eta_min)
    if not hi < 0:
        raise NoBracketError("criterion never violated on (0, 1]")
    if not lo >= 0:
        raise NoBracketError("criterion always violated on (0, 1]")
    root, info = optimize.bisect(f, eta_min, 1.0, xtol=tol, full_output=True)
    return (root, info.iterations) if full_output else root


# --- operator identities and complementarity -------------------------------


def rate_identity_deviation(p: int, cutoff: int) -> float:
    """Max entry deviation of ``sum_m R_m^dagger R_m`` from its closed form on ``1..cutoff`` photons.

    For ``p = 3`` the closed form is ``1 + 3/N``.  For other primes it is the
    diagonal ``[sum_i n_i^2 + p sum_i n_i n_{i+1} + p N + sum_{i != j} omega^{i-j} n_i n_j] / N^2``.
    """
    require_prime(p)
    omega = omega_power(p, np.arange(p))
    dev = 0.0
    for n in range(1, cutoff + 1):
        phasors, _ = _sector_ops(p, n)
        lhs = sum(r.conj().T @ r for r in phasors)
        if p == 3:
            diag = np.full(len(phasors[0]), 1 + 3 / n)
        else:
            occ = np.array(enumerate_basis(p, n), dtype=float)
            shifted = np.roll(occ, -1, axis=1)
            cross = np.einsum("ki,i,kj,j->k", occ, omega, occ, omega.conj()).real - (occ**2).sum(axis=1)
            diag = ((occ**2).sum(axis=1) + p * (occ * shifted).sum(axis=1) + p * n + cross) / n**2
        dev = max(dev, float(np.abs(lhs - np.diag(diag)).max()))
    return dev


def rate_expectations(state: StateVector) -> np.ndarray:
    """``<R_m>`` for ``m = 0..p`` on a single-party state (vacuum contributes nothing)."""
    vec = _dense(state)
    out = np.zeros(state.p + 1, dtype=complex)
    for n, block in _split_sectors(state.p, state.cutoff, vec):
        phasors, _ = _sector_ops(state.p, n)
        out += [block.conj() @ r @ block for r in phasors]
    return out


def rate_bound_value(state: StateVector) -> float:
    """``sum_m |<R_m>|^2``, bounded by 1 for ``p = 3``."""
    return float((np.abs(rate_expectations(state)) ** 2).sum())


def random_states(p: int, cutoff: int, samples: int, rng: np.random.Generator, include_vacuum: bool = True) -> np.ndarray:
    """Haar-distributed pure states as rows over ``basis_upto(p, cutoff)``."""
    k = len(basis_upto(p, cutoff))
    z = rng.standard_normal((samples, k)) + 1j * rng.standard_normal((samples, k))
    if not include_vacuum:
        z[:, 0] = 0
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def rate_bound_max(p: int = 3, samples: int = 10_000, cutoff: int = 4, seed: int = 0) -> float:
    """Largest ``sum_m |<R_m>|^2`` over random pure states."""
    if p != 3:
        raise ValueError("the phasor-rate bound is established for p=3 only")
    states = random_states(p, cutoff, samples, np.random.default_rng(seed))
    total = np.zeros((samples, p + 1), dtype=complex)
    for n, block in _split_sectors(p, cutoff, states):
        phasors, _ = _sector_ops(p, n)
        for m, r in enumerate(phasors):
            total[:, m] += np.einsum("si,ij,sj->s", block.conj(), r, block)
    return float((np.abs(total) ** 2).sum(axis=1).max())


def _complementarity_sums(p: int, cutoff: int, states: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per state: ``sum <r_j(m)>^2``, ``sum <n_j(m)>^2`` and ``<N>``."""
    s = states.shape[0]
    rates = np.zeros((s, p + 1, p))
    numbers = np.zeros((s, p + 1, p))
    mean_n = np.zeros(s)
    for n, block in _split_sectors(p, cutoff, states):
        _, ops = _sector_ops(p, n)
        weight = (np.abs(block) ** 2).sum(axis=1)
        mean_n += n * weight
        for m, per_mode in enumerate(ops):
            for j, op in enumerate(per_mode):
                val = np.einsum("si,ij,sj->s", block.conj(), op, block).real
                numbers[:, m, j] += val
                rates[:, m, j] += val / n
    return (rates**2).sum(axis=(1, 2)), (numbers**2).sum(axis=(1, 2)), mean_n


def complementarity_rates(state: StateVector) -> float:
    """``sum_{m,j} <r_j(m)>^2``; at most 2 for any state."""
    rates, _, _ = _complementarity_sums(state.p, state.cutoff, _dense(state)[None, :])
    return float(rates[0])


def complementarity_intensities(state: StateVector) -> tuple[float, float]:
    """``(sum_{m,j} <n_j(m)>^2, 2 <N>^2)``; the first never exceeds the second."""
    _, numbers, mean_n = _complementarity_sums(state.p, state.cutoff, _dense(state)[None, :])
    return float(numbers[0]), float(2 * mean_n[0] ** 2)


def sample_complementarity(p: int, samples: int = 1000, cutoff: int = 4, seed: int = 0) -> dict[str, float]:
    """Worst cases of both complementarity relations over random states."""
    require_prime(p)
    states = random_states(p, cutoff, samples, np.random.default_rng(seed))
    rates, numbers, mean_n = _complementarity_sums(p, cutoff, states)
    return {
        "max_rate_sum": float(rates.max()),
        "max_intensity_excess": float((numbers - 2 * mean_n**2).max()),
    }


# --- separable-state safety ------------------------------------------------


@dataclass
class SeparableReport:
    p: int
    samples: int
    cutoff: int
    min_margin: dict[str, float]
    violations: dict[str, int]
    skipped: dict[str, int]
    tolerance: float = 1e-9

    @property
    def passed(self) -> bool:
        return not any(self.violations.values())


@cache
def _setting_transforms(p: int, cutoff: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Dense multiport matrices for Alice (``U(m)``) and Bob (``conj U(m)``), every setting."""
    return tuple(
        (transform_matrix(u, cutoff), transform_matrix(conjugate_pair(u), cutoff)) for u in build_mub(p)
    )


def _product_candidates(p: int, cutoff: int, rng: np.random.Generator) -> np.ndarray:
    """One random single-party state, cycling over Haar, coherent and rotated Fock families."""
    basis = basis_upto(p, cutoff)
    family = rng.integers(3)
    if family == 0:
        return random_states(p, cutoff, 1, rng)[0]
    if family == 1:
        alpha = rng.uniform(0, 1.5, p) * np.exp(2j * np.pi * rng.uniform(size=p))
        occ = np.array(basis)
        fact = np.array([np.prod([float(factorial(k)) for k in row]) for row in occ])
        vec = np.prod(alpha[None, :] ** occ, axis=1) / np.sqrt(fact)
        return vec / np.linalg.norm(vec)
    k = rng.integers(1, len(basis))
    m = rng.integers(p + 1)
    w, _ = _setting_transforms(p, cutoff)[m]
    return w.conj().T[:, k].copy()


def product_margins(p: int, cutoff: int, psi_a: np.ndarray, psi_b: np.ndarray, kinds=None) -> dict[str, float | None]:
    """``lhs - rhs`` of each criterion for the product state ``psi_a x psi_b``.

    Rate criteria are evaluated on the vacuum-projected state; ``None`` marks a
    criterion that is not evaluable (a side without photons).
    """
    if kinds is None:
        kinds = [k for k in KINDS if p == 3 or k not in (RATE_D3, INTENSITY_D3)]
    transforms = _setting_transforms(p, cutoff)
    out: dict[str, float | None] = {}
    for kind in kinds:
        a, b = psi_a.copy(), psi_b.copy()
        if kind in RATE_KINDS:
            a[0] = b[0] = 0
            if np.linalg.norm(a) == 0 or np.linalg.norm(b) == 0:
                out[kind] = None
                continue
            a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
        lhs, rhs = 0.0, None
        for wa, wb in transforms:
            dist = OutcomeDistribution.product(p, cutoff, np.abs(wa @ a) ** 2, np.abs(wb @ b) ** 2)
            lhs += setting_deficit(dist, kind)
            if rhs is None:
                try:
                    rhs = separable_rhs(dist, kind)
                except NotEvaluable:
                    break
        out[kind] = None if rhs is None else lhs - rhs
    return out


def sample_separable(p: int, samples: int = 1000, cutoff: int = 4, seed: int = 0, tolerance: float = 1e-9) -> SeparableReport:
    """Check that random product states never violate any applicable criterion."""
    require_prime(p)
    rng = np.random.default_rng(seed)
    kinds = [k for k in KINDS if p == 3 or k not in (RATE_D3, INTENSITY_D3)]
    min_margin = {k: float("inf") for k in kinds}
    violations = {k: 0 for k in kinds}
    skipped = {k: 0 for k in kinds}
    for _ in range(samples):
        psi_a = _product_candidates(p, cutoff, rng)
        psi_b = _product_candidates(p, cutoff, rng)
        for kind, margin in product_margins(p, cutoff, psi_a, psi_b, kinds).items():
            if margin is None:
                skipped[kind] += 1
                continue
            min_margin[kind] = min(min_margin[kind], margin)
            violations[kind] += margin < -tolerance
    return SeparableReport(p, samples, cutoff, min_margin, violations, skipped, tolerance)
