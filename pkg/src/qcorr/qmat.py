"""Dense complex matrix kernel: tensor products, labeled partial traces,
Hermitian spectra and entropy primitives.

All states are plain ``numpy`` arrays of complex128.  The four parties are
labeled ``A``, ``B``, ``EA``, ``EB`` and the global 16-dimensional basis is
ordered ``A (x) B (x) EA (x) EB`` with the left factor varying slowest and
``|0>`` before ``|1>`` inside each factor.  Entropies are in bits (base-2
logarithms) throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, NumericDomainError

#: Tensor-factor order of the full qubits-plus-environments system.
PARTY_LABELS = ("A", "B", "EA", "EB")

# Fixed numerical thresholds.  Closed-form channel algebra keeps round-off
# near machine epsilon, so these never need per-run tuning.
HERMITICITY_ATOL = 1e-12      # density matrices: max |M - M^dag| entry
TRACE_ATOL = 1e-12            # density matrices: |tr M - 1|
PSD_EIG_FLOOR = -1e-10        # density matrices: smallest tolerated eigenvalue
EIG_HERMITICITY_ATOL = 1e-10  # eigendecomposition input Hermiticity bound
ENTROPY_EIG_CUTOFF = 1e-14    # eigenvalues below this contribute 0 log 0 = 0
PROB_SUM_ATOL = 1e-9          # probability vectors: |sum - 1|
PROB_NEG_ATOL = 1e-12         # probability vectors: tolerated negative dust

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the left factor varying slowest."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


@dataclass(frozen=True)
class MatrixValidity:
    """Density-matrix validity report for a candidate matrix."""

    hermiticity_dev: float
    trace: float
    min_eigenvalue: float

    @property
    def is_valid(self) -> bool:
        return (
            self.hermiticity_dev <= HERMITICITY_ATOL
            and abs(self.trace - 1.0) <= TRACE_ATOL
            and self.min_eigenvalue >= PSD_EIG_FLOOR
        )


def density_matrix_report(m: np.ndarray) -> MatrixValidity:
    """Measure how far ``m`` is from being a valid density matrix."""
    m = np.asarray(m, dtype=complex)
    herm = float(np.abs(m - m.conj().T).max())
    tr = float(m.trace().real)
    # eigvalsh needs a Hermitian input; symmetrize for badly broken matrices
    # so the report stays meaningful instead of raising.
    ev = np.linalg.eigvalsh((m + m.conj().T) / 2.0)
    return MatrixValidity(hermiticity_dev=herm, trace=tr, min_eigenvalue=float(ev.min()))


def validate_density_matrix(rho: np.ndarray, name: str = "state") -> np.ndarray:
    """Check Hermiticity, unit trace, positivity and a power-of-two dimension.

    Returns the validated array (as complex128); raises
    :class:`NumericDomainError` on any violation.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise NumericDomainError(f"{name}: expected a square matrix, got shape {rho.shape}")
    dim = rho.shape[0]
    if dim & (dim - 1) != 0:
        raise NumericDomainError(f"{name}: dimension {dim} is not a power of 2")
    report = density_matrix_report(rho)
    if report.hermiticity_dev > HERMITICITY_ATOL:
        raise NumericDomainError(
            f"{name}: not Hermitian (max deviation {report.hermiticity_dev:.3e})"
        )
    if abs(report.trace - 1.0) > TRACE_ATOL:
        raise NumericDomainError(f"{name}: trace {report.trace!r} is not 1")
    if report.min_eigenvalue < PSD_EIG_FLOOR:
        raise NumericDomainError(
            f"{name}: negative eigenvalue {report.min_eigenvalue:.3e}"
        )
    return rho


def partial_trace(
    rho: np.ndarray,
    keep: Sequence[str] | str,
    layout: Sequence[str] = PARTY_LABELS,
) -> np.ndarray:
    """Trace out every factor not listed in ``keep``.

    ``layout`` names the tensor factors of ``rho`` in slow-to-fast order;
    each factor is a qubit.  The output basis is ordered by the ``keep``
    sequence itself (first kept label is the slow index), regardless of
    where those labels sit in the layout.
    """
    if isinstance(keep, str):
        keep = (keep,)
    layout = tuple(layout)
    pos = {label: i for i, label in enumerate(layout)}
    if not keep:
        raise ConfigurationError("keep must name at least one factor")
    if len(set(keep)) != len(keep):
        raise ConfigurationError(f"duplicate labels in keep: {keep}")
    for label in keep:
        if label not in pos:
            raise ConfigurationError(
                f"unknown label {label!r} (layout: {', '.join(layout)})"
            )
    n = len(layout)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2**n, 2**n):
        raise ConfigurationError(
            f"state has shape {rho.shape}, expected {(2**n, 2**n)} for layout {layout}"
        )
    keep_pos = [pos[label] for label in keep]
    t = rho.reshape((2,) * (2 * n))
    bra = list(range(n))
    ket = list(range(n, 2 * n))
    for i in range(n):
        if i not in keep_pos:
            ket[i] = bra[i]  # repeated index: trace over this factor
    out = [bra[i] for i in keep_pos] + [ket[i] for i in keep_pos]
    reduced = np.einsum(t, bra + ket, out)
    d = 2 ** len(keep_pos)
    return reduced.reshape(d, d)


def hermitian_eigenvalues(m: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted descending."""
    m = np.asarray(m, dtype=complex)
    dev = float(np.abs(m - m.conj().T).max())
    if dev > EIG_HERMITICITY_ATOL:
        raise NumericDomainError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    return np.linalg.eigvalsh(m)[::-1]


def density_eigenvalues(rho: np.ndarray) -> np.ndarray:
    """Eigenvalues of a validated density matrix, clamped to [0, 1], descending."""
    rho = validate_density_matrix(rho)
    return np.clip(hermitian_eigenvalues(rho).real, 0.0, 1.0)


def von_neumann_entropy(rho: np.ndarray) -> float:
    """-sum(lam log2 lam) over the spectrum, with 0 log 0 = 0."""
    ev = density_eigenvalues(rho)
    ev = ev[ev > ENTROPY_EIG_CUTOFF]
    s = float(-(ev * np.log2(ev)).sum())
    return 0.0 if s == 0.0 else s


def shannon_entropy(dist: Sequence[float] | np.ndarray) -> float:
    """Shannon entropy in bits of a probability vector.

    Negative dust down to -1e-12 is clamped to zero and the vector is
    renormalized; anything worse, or a total off by more than 1e-9, raises.
    """
    arr = np.asarray(dist, dtype=float).ravel()
    if arr.size == 0:
        raise NumericDomainError("empty probability vector")
    if arr.min() < -PROB_NEG_ATOL:
        raise NumericDomainError(f"negative probability {arr.min():.3e}")
    total = arr.sum()
    if abs(total - 1.0) > PROB_SUM_ATOL:
        raise NumericDomainError(f"probabilities sum to {total!r}, not 1")
    arr = np.clip(arr, 0.0, None)
    arr = arr / arr.sum()
    arr = arr[arr > ENTROPY_EIG_CUTOFF]
    s = float(-(arr * np.log2(arr)).sum())
    return 0.0 if s == 0.0 else s
