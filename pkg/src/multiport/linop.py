"""Exact Schrodinger-picture action of a multiport on truncated Fock states.

This is deliberately a brute-force multinomial expansion; it serves as the
oracle for the symmetry shortcuts in :mod:`multiport.loss` and
:mod:`multiport.witness`.

Convention: a state component ``prod_s (a_s^dagger)^{n_s} / sqrt(n_s!) |0>`` is
rewritten with ``a_s^dagger -> sum_k conj(U[k, s]) a_k^dagger``.  With this
choice the occupation of output mode ``j`` after the transform has the same
statistics as the Heisenberg operator ``a_j^dagger(m) a_j(m)`` with
``a_j^dagger(m) = sum_s U[j, s] a_s^dagger``.
"""
from __future__ import annotations

from math import factorial, sqrt

import numpy as np

from .fock import Occupation, StateVector, basis_upto
from .mub import ModeUnitary

MAX_PHOTONS = 8


def _expand(occ: Occupation, substitution: np.ndarray) -> dict[Occupation, complex]:
    """Amplitudes of ``prod_s (sum_k W[k, s] a_k^dagger)^{n_s} / sqrt(n_s!) |0>``."""
    p = len(occ)
    poly: dict[Occupation, complex] = {(0,) * p: 1.0}
    for s, n_s in enumerate(occ):
        column = [(k, substitution[k, s]) for k in range(p) if substitution[k, s] != 0]
        for _ in range(n_s):
            nxt: dict[Occupation, complex] = {}
            for mono, coef in poly.items():
                for k, w in column:
                    key = mono[:k] + (mono[k] + 1,) + mono[k + 1:]
                    nxt[key] = nxt.get(key, 0) + coef * w
            poly = nxt
    norm_in = sqrt(np.prod([factorial(n) for n in occ]))
    return {
        mono: coef * sqrt(np.prod([factorial(k) for k in mono])) / norm_in
        for mono, coef in poly.items()
    }


def _check(state: StateVector, unitary: ModeUnitary, party_b: bool = False):
    if unitary.p != state.p:
        raise ValueError(f"unitary has p={unitary.p}, state has p={state.p}")
    for occ_a, occ_b in state.amplitudes:
        occ = occ_b if party_b else occ_a
        if sum(occ) > MAX_PHOTONS:
            raise ValueError(f"component with {sum(occ)} photons exceeds expansion guard {MAX_PHOTONS}")


def transform_state(state: StateVector, unitary: ModeUnitary) -> StateVector:
    """Apply a multiport to a single-party state."""
    if not state.is_single_party:
        raise ValueError("transform_state expects a single-party state; use joint_transform")
    _check(state, unitary)
    sub = unitary.matrix.conj()
    out: dict[Occupation, complex] = {}
    for (occ, _), amp in state.amplitudes.items():
        for key, c in _expand(occ, sub).items():
            out[key] = out.get(key, 0) + amp * c
    return StateVector.single(state.p, out, state.cutoff)


def joint_transform(state: StateVector, unitary_a: ModeUnitary, unitary_b: ModeUnitary) -> StateVector:
    """Apply local multiports to both parties of a bipartite state."""
    _check(state, unitary_a)
    _check(state, unitary_b, party_b=True)
    sub_a, sub_b = unitary_a.matrix.conj(), unitary_b.matrix.conj()
    cache_a: dict[Occupation, dict] = {}
    cache_b: dict[Occupation, dict] = {}
    out: dict = {}
    for (occ_a, occ_b), amp in state.amplitudes.items():
        if occ_a not in cache_a:
            cache_a[occ_a] = _expand(occ_a, sub_a)
        if occ_b not in cache_b:
            cache_b[occ_b] = _expand(occ_b, sub_b)
        ea, eb = cache_a[occ_a], cache_b[occ_b]
        for ka, ca in ea.items():
            for kb, cb in eb.items():
                key = (ka, kb)
                out[key] = out.get(key, 0) + amp * ca * cb
    return StateVector(state.p, state.cutoff, out)


def transform_matrix(unitary: ModeUnitary, cutoff: int) -> np.ndarray:
    """Dense matrix of the multiport on ``basis_upto(p, cutoff)``, built column by column."""
    if cutoff > MAX_PHOTONS:
        raise ValueError(f"cutoff {cutoff} exceeds expansion guard {MAX_PHOTONS}")
    basis = basis_upto(unitary.p, cutoff)
    index = {occ: i for i, occ in enumerate(basis)}
    sub = unitary.matrix.conj()
    out = np.zeros((len(basis), len(basis)), dtype=complex)
    for col, occ in enumerate(basis):
        for key, c in _expand(occ, sub).items():
            out[index[key], col] = c
    return out
