"""Mutually unbiased multiport unitaries and generalized Pauli operators for prime ``p``."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime; unbiased multiports are built for prime mode counts only")


def omega_power(p: int, exponent) -> np.ndarray:
    """``exp(2 pi i k / p)`` with ``k`` reduced mod ``p`` first."""
    k = np.mod(exponent, p)
    return np.exp(2j * np.pi * k / p)


@dataclass(frozen=True)
class ModeUnitary:
    """One multiport setting: ``matrix[j, s] = omega^(j s + m s^2) / sqrt(p)``.

    Row ``j`` holds the components ``<s|phi_j(m)>`` of the ``j``-th basis vector.
    Setting ``m == p`` is the identity (number basis).  For ``p = 2`` the
    quadratic phase is ``i^(m s^2)``, since ``(-1)^(m s^2)`` only permutes rows.
    """

    p: int
    m: int
    matrix: np.ndarray

    @property
    def is_identity_setting(self) -> bool:
        return self.m == self.p

    def basis_vector(self, j: int) -> np.ndarray:
        return self.matrix[j]


def mub_matrix(p: int, m: int) -> np.ndarray:
    require_prime(p)
    if not 0 <= m <= p:
        raise ValueError(f"setting m must lie in 0..{p}, got {m}")
    if m == p:
        return np.eye(p, dtype=complex)
    j, s = np.meshgrid(np.arange(p), np.arange(p), indexing="ij")
    if p == 2:
        return omega_power(4, 2 * j * s + m * s * s) / np.sqrt(2)
    return omega_power(p, j * s + m * s * s) / np.sqrt(p)


def build_mub(p: int) -> list[ModeUnitary]:
    """The ``p + 1`` unbiased settings ``m = 0 .. p`` (the last is the identity)."""
    require_prime(p)
    return [ModeUnitary(p, m, mub_matrix(p, m)) for m in range(p + 1)]


def conjugate_pair(unitary: ModeUnitary) -> ModeUnitary:
    """Entrywise conjugate: the partner multiport on Bob's side."""
    return ModeUnitary(unitary.p, unitary.m, unitary.matrix.conj())


@dataclass(frozen=True)
class GeneralizedPauli:
    p: int
    Z: np.ndarray
    X: np.ndarray
    M: tuple[np.ndarray, ...]  # M[k] = omega^k X Z^(-2k) for k < p, M[p] = Z; p = 2 uses (X, iXZ, Z)


def build_pauli(p: int) -> GeneralizedPauli:
    require_prime(p)
    j = np.arange(p)
    Z = np.diag(omega_power(p, j))
    X = np.zeros((p, p), dtype=complex)
    X[j, (j + 1) % p] = 1
    if p == 2:
        return GeneralizedPauli(p, Z, X, (X, 1j * X @ Z, Z))
    ms = []
    for k in range(p):
        z_pow = np.diag(omega_power(p, -2 * k * j))
        ms.append(omega_power(p, k) * X @ z_pow)
    ms.append(Z)
    return GeneralizedPauli(p, Z, X, tuple(ms))


def rate_observable_matrix(unitary: ModeUnitary) -> np.ndarray:
    """``sum_j omega^j |phi_j(m)><phi_j(m)|``, the single-photon analogue of the phasor rate."""
    p = unitary.p
    phases = omega_power(p, np.arange(p))
    rows = unitary.matrix
    return (rows.T * phases) @ rows.conj()


def unitarity_deviation(unitary: ModeUnitary) -> float:
    u = unitary.matrix
    return float(np.abs(u.conj().T @ u - np.eye(unitary.p)).max())


def unbiasedness_deviation(unitaries: list[ModeUnitary]) -> float:
    """Max over distinct pairs of ``| |(U U'^dagger)_jk|^2 - 1/p |``."""
    dev = 0.0
    for a in range(len(unitaries)):
        for b in range(a + 1, len(unitaries)):
            u, v = unitaries[a], unitaries[b]
            overlaps = np.abs(u.matrix @ v.matrix.conj().T) ** 2
            dev = max(dev, float(np.abs(overlaps - 1 / u.p).max()))
    return dev
