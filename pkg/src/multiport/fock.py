"""Truncated Fock bases, sparse state vectors and quadratic mode operators.

An occupation vector is a plain tuple of non-negative ints, one entry per mode.
States are sparse maps from ``(occ_a, occ_b)`` pairs to complex amplitudes;
single-party states use the empty tuple for the second party.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from functools import cache
from math import comb, sqrt

import numpy as np

DEFAULT_CUTOFF = 10

Occupation = tuple[int, ...]
Key = tuple[Occupation, Occupation]


def compositions(n: int, p: int) -> Iterator[Occupation]:
    """Yield the compositions of ``n`` into ``p`` ordered parts, lexicographically."""
    if p == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in compositions(n - first, p - 1):
            yield (first,) + rest


@cache
def enumerate_basis(p: int, n: int) -> tuple[Occupation, ...]:
    """All occupation vectors of ``p`` modes holding exactly ``n`` photons.

    The count is ``C(n + p - 1, p - 1)``.
    """
    if p < 1 or n < 0:
        raise ValueError(f"need p >= 1 and n >= 0, got p={p}, n={n}")
    return tuple(compositions(n, p))


@cache
def basis_upto(p: int, cutoff: int, include_vacuum: bool = True) -> tuple[Occupation, ...]:
    """Occupation vectors with total photon number up to ``cutoff``, sector by sector."""
    start = 0 if include_vacuum else 1
    return tuple(occ for n in range(start, cutoff + 1) for occ in enumerate_basis(p, n))


def sector_size(p: int, n: int) -> int:
    return comb(n + p - 1, p - 1)


@dataclass(frozen=True)
class StateVector:
    """Sparse bipartite (or single-party) state in the truncated Fock basis."""

    p: int
    cutoff: int
    amplitudes: Mapping[Key, complex] = field(default_factory=dict)

    def __post_init__(self):
        for (occ_a, occ_b), _ in self.amplitudes.items():
            if len(occ_a) != self.p or len(occ_b) not in (0, self.p):
                raise ValueError(f"occupation {occ_a, occ_b} does not match p={self.p}")
            if min(occ_a + occ_b, default=0) < 0:
                raise ValueError(f"negative occupation in {occ_a, occ_b}")
            if sum(occ_a) > self.cutoff or sum(occ_b) > self.cutoff:
                raise ValueError(f"occupation {occ_a, occ_b} exceeds cutoff {self.cutoff}")
        # canonical ordering keeps iteration deterministic
        ordered = dict(sorted(self.amplitudes.items(), key=lambda kv: _sort_key(kv[0])))
        object.__setattr__(self, "amplitudes", ordered)

    @classmethod
    def single(cls, p: int, amplitudes: Mapping[Occupation, complex], cutoff: int | None = None):
        """Build a one-party state from a map ``occupation -> amplitude``."""
        amps = {(tuple(occ), ()): complex(a) for occ, a in amplitudes.items()}
        if cutoff is None:
            cutoff = max((sum(occ) for occ, _ in amps), default=0)
        return cls(p, cutoff, amps)

    @classmethod
    def fock(cls, occupation: Iterable[int], cutoff: int | None = None):
        occ = tuple(occupation)
        return cls.single(len(occ), {occ: 1.0}, cutoff)

    @classmethod
    def from_dense(cls, p: int, basis: tuple[Occupation, ...], vector, cutoff: int | None = None):
        vector = np.asarray(vector, dtype=complex)
        amps = {occ: a for occ, a in zip(basis, vector) if a != 0}
        return cls.single(p, amps, cutoff if cutoff is not None else max(map(sum, basis), default=0))

    @property
    def is_single_party(self) -> bool:
        return all(len(b) == 0 for _, b in self.amplitudes)

    def norm(self) -> float:
        return sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def to_dense(self, basis: tuple[Occupation, ...]) -> np.ndarray:
        """Single-party amplitudes as a dense vector over ``basis``."""
        _require_single(self)
        index = {occ: i for i, occ in enumerate(basis)}
        out = np.zeros(len(basis), dtype=complex)
        for (occ, _), a in self.amplitudes.items():
            out[index[occ]] = a
        return out

    def sectors(self) -> dict[int, dict[Occupation, complex]]:
        """Single-party amplitudes grouped by total photon number."""
        _require_single(self)
        out: dict[int, dict[Occupation, complex]] = {}
        for (occ, _), a in self.amplitudes.items():
            out.setdefault(sum(occ), {})[occ] = a
        return out

    def allclose(self, other: StateVector, atol: float = 1e-10) -> bool:
        keys = set(self.amplitudes) | set(other.amplitudes)
        return all(abs(self.amplitudes.get(k, 0) - other.amplitudes.get(k, 0)) <= atol for k in keys)


def _sort_key(key: Key):
    a, b = key
    return (sum(a), a, sum(b), b)


def _require_single(state: StateVector):
    if not state.is_single_party:
        raise ValueError("operation requires a single-party state")


def normalize(state: StateVector) -> StateVector:
    norm = state.norm()
    if norm == 0:
        raise ValueError("cannot normalize a zero-norm state")
    return StateVector(state.p, state.cutoff, {k: a / norm for k, a in state.amplitudes.items()})


@dataclass(frozen=True)
class QuadraticOperator:
    """``sum_{s,t} C[s, t] a_s^dagger a_t`` acting on one party."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=complex)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError(f"coefficient matrix must be square, got shape {c.shape}")
        object.__setattr__(self, "coefficients", c)

    @property
    def p(self) -> int:
        return self.coefficients.shape[0]

    @property
    def dagger(self) -> QuadraticOperator:
        return QuadraticOperator(self.coefficients.conj().T)

    @classmethod
    def number(cls, p: int, mode: int | None = None) -> QuadraticOperator:
        """Number operator of one mode, or the total number when ``mode`` is None."""
        if mode is None:
            return cls(np.eye(p))
        c = np.zeros((p, p))
        c[mode, mode] = 1
        return cls(c)


def apply_quadratic(amplitudes: Mapping[Occupation, complex], op: QuadraticOperator) -> dict[Occupation, complex]:
    """Act with ``op`` on a single-party amplitude map; photon number is conserved."""
    c = op.coefficients
    p = op.p
    pairs = [(s, t, c[s, t]) for s in range(p) for t in range(p) if c[s, t] != 0]
    out: dict[Occupation, complex] = {}
    for occ, amp in amplitudes.items():
        if len(occ) != p:
            raise ValueError(f"operator acts on {p} modes, state has {len(occ)}")
        for s, t, coef in pairs:
            if occ[t] == 0:
                continue
            new = list(occ)
            factor = sqrt(new[t])
            new[t] -= 1
            new[s] += 1
            factor *= sqrt(new[s])
            key = tuple(new)
            out[key] = out.get(key, 0) + coef * factor * amp
    return out


def _party_a(state: StateVector, op: QuadraticOperator) -> dict[Occupation, complex]:
    _require_single(state)
    if op.p != state.p:
        raise ValueError(f"operator dimension {op.p} does not match state with p={state.p}")
    return {occ: a for (occ, _), a in state.amplitudes.items()}


def _overlap(bra: Mapping[Occupation, complex], ket: Mapping[Occupation, complex]) -> complex:
    return sum(np.conj(a) * ket[k] for k, a in bra.items() if k in ket)


def expect_quadratic(state: StateVector, op: QuadraticOperator) -> complex:
    """``<psi| sum C_st a_s^dagger a_t |psi>`` for a single-party state."""
    amps = _party_a(state, op)
    return complex(_overlap(amps, apply_quadratic(amps, op)))


def expect_quartic(state: StateVector, op1: QuadraticOperator, op2: QuadraticOperator) -> complex:
    """``<psi| op1 op2 |psi>`` evaluated as ``<op1^dagger psi | op2 psi>``."""
    amps = _party_a(state, op1)
    if op2.p != op1.p:
        raise ValueError("operator dimensions differ")
    right = apply_quadratic(amps, op2)
    left = apply_quadratic(amps, op1.dagger)
    totals = {sum(k) for k in right} | {sum(k) for k in left}
    assert totals <= {sum(k) for k in amps}, "quadratic operators must conserve photon number"
    return complex(_overlap(left, right))


def quadratic_matrix(op: QuadraticOperator, basis: tuple[Occupation, ...]) -> np.ndarray:
    """Dense matrix of ``op`` on the span of ``basis`` (which must be closed under it)."""
    index = {occ: i for i, occ in enumerate(basis)}
    out = np.zeros((len(basis), len(basis)), dtype=complex)
    for col, occ in enumerate(basis):
        for key, amp in apply_quadratic({occ: 1.0}, op).items():
            out[index[key], col] += amp
    return out
