"""Shared helpers for the test suite."""

import numpy as np


def random_density(rng: np.random.Generator, n: int = 4) -> np.ndarray:
    """Random full-rank density matrix from a complex Ginibre draw."""
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = g @ g.conj().T
    return rho / rho.trace().real


def random_unitary2(rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random 2x2 unitary via QR with phase fixing."""
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    qmat, r = np.linalg.qr(g)
    return qmat * (np.diag(r) / np.abs(np.diag(r)))
