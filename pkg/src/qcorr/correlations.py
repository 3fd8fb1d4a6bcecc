"""Correlation measures for two-qubit states.

Implements, on 4x4 density matrices:

* quantum mutual information  I = S(rho_A) + S(rho_B) - S(rho_AB)
* one-sided quantum discord   D = I - max_basis [S(rho_other) - S_cond]
  and the matching one-sided classical correlation C = I - D, where the
  maximum runs over rank-1 projective measurements of one qubit
* two-sided classical correlation K: the maximum classical mutual
  information of the joint outcome distribution under independent projective
  measurements of both qubits, and the two-sided quantum correlation
  Q = I - K
* Wootters concurrence from the spin-flipped R-matrix spectrum

Measurement bases are parametrized by angles (theta in [0, pi],
phi in [0, 2 pi)) through the ket ``cos(theta)|0> + e^{i phi} sin(theta)|1>``
(a double cover of the Bloch sphere; harmless for optimization).  All angle
searches are an exhaustive coarse grid followed by Nelder-Mead refinement
from the best grid cell, with deterministic first-occurrence tie-breaking in
lexicographic (theta, phi) order, so identical inputs always return the
identical argmax.

For speed the optimizers evaluate the measures through the exact Bloch
decomposition of the state (closed form, not an approximation); the public
single-basis operations use explicit projectors so tests can cross-check the
two routes against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .errors import ConfigurationError, NumericDomainError
from .qmat import (
    ENTROPY_EIG_CUTOFF,
    PAULIS,
    SIGMA_Y,
    partial_trace,
    tensor,
    validate_density_matrix,
    von_neumann_entropy,
)

#: Measure outputs within this of zero (from below) are reported as exactly 0;
#: anything more negative signals an optimizer or state bug and raises.
CLAMP_NEGATIVE_TOL = 1e-8

#: Measurement outcomes with probability below this contribute zero
#: conditional entropy (removable singularity of q * S).
DEGENERATE_OUTCOME_CUTOFF = 1e-14

#: Negative dust tolerated on the R-matrix spectrum before square roots.
CONCURRENCE_EIG_DUST = 1e-12

_TWO_QUBIT_LAYOUT = ("A", "B")


class MeasurementBasis(NamedTuple):
    """Angles (theta, phi) of a rank-1 projective qubit measurement."""

    theta: float
    phi: float

    def ket(self) -> np.ndarray:
        """cos(theta)|0> + e^{i phi} sin(theta)|1>."""
        return np.array(
            [np.cos(self.theta), np.exp(1j * self.phi) * np.sin(self.theta)],
            dtype=complex,
        )

    def ket_orthogonal(self) -> np.ndarray:
        """e^{-i phi} sin(theta)|0> - cos(theta)|1>."""
        return np.array(
            [np.exp(-1j * self.phi) * np.sin(self.theta), -np.cos(self.theta)],
            dtype=complex,
        )

    def projectors(self) -> tuple[np.ndarray, np.ndarray]:
        k1 = self.ket()
        k2 = self.ket_orthogonal()
        return np.outer(k1, k1.conj()), np.outer(k2, k2.conj())

    def direction(self) -> np.ndarray:
        """Bloch vector of the first projector."""
        return _directions(np.array([self.theta]), np.array([self.phi]))[0]

    def wrapped(self) -> "MeasurementBasis":
        """Equivalent basis with theta folded into [0, pi) and phi into [0, 2 pi)."""
        return MeasurementBasis(self.theta % np.pi, self.phi % (2 * np.pi))


@dataclass(frozen=True)
class OptimizerSettings:
    """Grid-plus-refinement controls for the measurement-basis searches."""

    grid_points_per_angle: int = 24
    refine_iterations: int = 200
    refine_tolerance: float = 1e-9

    def __post_init__(self) -> None:
        if self.grid_points_per_angle < 4:
            raise ConfigurationError(
                f"grid_points_per_angle must be >= 4, got {self.grid_points_per_angle}"
            )
        if self.refine_iterations < 0:
            raise ConfigurationError("refine_iterations must be non-negative")
        if self.refine_tolerance <= 0:
            raise ConfigurationError("refine_tolerance must be positive")


@dataclass(frozen=True)
class CorrelationResult:
    """Every correlation measure of one state, computed in a single pass.

    ``total == classical + quantum`` holds exactly by construction.
    """

    total: float
    classical: float
    quantum: float
    discord_one_sided: float
    classical_one_sided: float
    concurrence: float
    basis_a: MeasurementBasis
    basis_b: MeasurementBasis
    discord_basis: MeasurementBasis


# ---------------------------------------------------------------------------
# entropy and Bloch helpers
# ---------------------------------------------------------------------------


def _xlog2x(x: np.ndarray) -> np.ndarray:
    # branch-free x log2 x with 0 log 0 = 0; inputs are probabilities in [0, 1]
    return x * np.log2(np.maximum(x, 1e-300))


def _binary_entropy(x: np.ndarray) -> np.ndarray:
    x = np.clip(x, 0.0, 1.0)
    return -(_xlog2x(x) + _xlog2x(1.0 - x))


def _bloch_decomposition(rho: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Local Bloch vectors and the 3x3 correlation matrix of a 4x4 state."""
    t = rho.reshape(2, 2, 2, 2)
    r_a = np.einsum("abcb,kca->k", t, PAULIS).real
    r_b = np.einsum("abad,kdb->k", t, PAULIS).real
    corr = np.einsum("abcd,kca,ldb->kl", t, PAULIS, PAULIS).real
    return r_a, r_b, corr


def _directions(thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """Bloch vectors of the (theta, phi) kets; shape (n, 3)."""
    return np.stack(
        [
            np.sin(2 * thetas) * np.cos(phis),
            np.sin(2 * thetas) * np.sin(phis),
            np.cos(2 * thetas),
        ],
        axis=-1,
    )


def _grid_angles(n: int) -> tuple[np.ndarray, np.ndarray]:
    # theta covers [0, pi] inclusive; phi exploits 2 pi periodicity
    thetas = np.linspace(0.0, np.pi, n)
    phis = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    tt, pp = np.meshgrid(thetas, phis, indexing="ij")
    return tt.ravel(), pp.ravel()


def _marginal(rho: np.ndarray, side: str) -> np.ndarray:
    return partial_trace(rho, (side,), layout=_TWO_QUBIT_LAYOUT)


def _normalize_side(side: str) -> str:
    s = str(side).strip().upper()
    if s not in ("A", "B"):
        raise ConfigurationError(f"measured side must be 'A' or 'B', got {side!r}")
    return s


def _clamp_measure(value: float, name: str) -> float:
    if value < -CLAMP_NEGATIVE_TOL:
        raise NumericDomainError(f"{name} = {value!r} is more negative than -1e-8")
    return max(0.0, float(value))


# ---------------------------------------------------------------------------
# closed-form objectives used by the optimizers
# ---------------------------------------------------------------------------


def _classical_mi_values(
    r_a: np.ndarray,
    r_b: np.ndarray,
    corr: np.ndarray,
    dirs_a: np.ndarray,
    dirs_b: np.ndarray,
) -> np.ndarray:
    """Classical mutual information of the outcome distribution, for every
    pair of measurement directions; shape (len(dirs_a), len(dirs_b))."""
    s_a = dirs_a @ r_a
    s_b = dirs_b @ r_b
    c = dirs_a @ corr @ dirs_b.T
    h_a = _binary_entropy((1.0 + s_a) / 2.0)
    h_b = _binary_entropy((1.0 + s_b) / 2.0)
    sa = s_a[:, None]
    sb = s_b[None, :]
    h_joint = np.zeros_like(c)
    for ea in (1.0, -1.0):
        for eb in (1.0, -1.0):
            pj = np.clip((1.0 + ea * sa + eb * sb + ea * eb * c) / 4.0, 0.0, 1.0)
            h_joint -= _xlog2x(pj)
    return h_a[:, None] + h_b[None, :] - h_joint


def _conditional_entropy_values(
    r_meas: np.ndarray,
    r_other: np.ndarray,
    corr_to_other: np.ndarray,
    dirs: np.ndarray,
) -> np.ndarray:
    """Post-measurement conditional entropy of the unmeasured qubit for each
    measurement direction; shape (len(dirs),)."""
    s = dirs @ r_meas
    w_plus = r_other[None, :] + dirs @ corr_to_other.T
    w_minus = r_other[None, :] - dirs @ corr_to_other.T
    out = np.zeros_like(s)
    for sign, w in ((1.0, w_plus), (-1.0, w_minus)):
        q = (1.0 + sign * s) / 2.0
        norm = np.linalg.norm(w, axis=1)
        live = q > DEGENERATE_OUTCOME_CUTOFF
        r = np.zeros_like(q)
        r[live] = np.clip(norm[live] / (2.0 * q[live]), 0.0, 1.0)
        out += np.where(live, q * _binary_entropy((1.0 + r) / 2.0), 0.0)
    return out


_SCAN_CHUNK = 512  # rows of the A-direction grid processed at once


def _scan_two_sided(
    r_a: np.ndarray, r_b: np.ndarray, corr: np.ndarray, n: int
) -> tuple[float, np.ndarray]:
    """Exhaustive n^4 grid scan; returns (best value, best 4-angle vector).

    Ties resolve to the lexicographically smallest (theta_a, phi_a,
    theta_b, phi_b) because chunks and flattened indices are visited in that
    order and only strict improvements replace the incumbent.
    """
    tt, pp = _grid_angles(n)
    dirs = _directions(tt, pp)
    best = -np.inf
    best_angles = np.zeros(4)
    for start in range(0, len(dirs), _SCAN_CHUNK):
        stop = min(start + _SCAN_CHUNK, len(dirs))
        vals = _classical_mi_values(r_a, r_b, corr, dirs[start:stop], dirs)
        idx = int(np.argmax(vals))
        ia, ib = divmod(idx, vals.shape[1])
        if vals[ia, ib] > best:
            best = float(vals[ia, ib])
            best_angles = np.array(
                [tt[start + ia], pp[start + ia], tt[ib], pp[ib]]
            )
    return best, best_angles


def _scan_one_sided(
    r_meas: np.ndarray, r_other: np.ndarray, corr_to_other: np.ndarray, n: int
) -> tuple[float, np.ndarray]:
    """Grid scan of the conditional entropy (minimization); first minimum wins."""
    tt, pp = _grid_angles(n)
    dirs = _directions(tt, pp)
    vals = _conditional_entropy_values(r_meas, r_other, corr_to_other, dirs)
    i = int(np.argmin(vals))
    return float(vals[i]), np.array([tt[i], pp[i]])


def _refine(objective, x0: np.ndarray, settings: OptimizerSettings) -> np.ndarray:
    """Nelder-Mead refinement of a minimization objective; returns the point."""
    if settings.refine_iterations == 0:
        return x0
    res = minimize(
        objective,
        x0,
        method="Nelder-Mead",
        options={
            "maxiter": settings.refine_iterations,
            "xatol": settings.refine_tolerance,
            "fatol": settings.refine_tolerance,
        },
    )
    return np.asarray(res.x, dtype=float)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------


def mutual_information(rho: np.ndarray) -> float:
    """Quantum mutual information S(rho_A) + S(rho_B) - S(rho_AB), in bits."""
    rho = validate_density_matrix(rho)
    total = (
        von_neumann_entropy(_marginal(rho, "A"))
        + von_neumann_entropy(_marginal(rho, "B"))
        - von_neumann_entropy(rho)
    )
    return _clamp_measure(total, "mutual information")


def measured_conditional_entropy(
    rho: np.ndarray, measured_side: str, basis: MeasurementBasis
) -> float:
    """Weighted post-measurement entropy of the unmeasured qubit.

    Projectively measures ``measured_side`` in ``basis``; outcomes with
    probability below 1e-14 contribute zero.
    """
    rho = validate_density_matrix(rho)
    side = _normalize_side(measured_side)
    t = rho.reshape(2, 2, 2, 2)
    out = 0.0
    for ket in (basis.ket(), basis.ket_orthogonal()):
        if side == "B":
            cond = np.einsum("abcd,b,d->ac", t, ket.conj(), ket)
        else:
            cond = np.einsum("abcd,a,c->bd", t, ket.conj(), ket)
        q = float(cond.trace().real)
        if q > DEGENERATE_OUTCOME_CUTOFF:
            ev = np.clip(np.linalg.eigvalsh(cond / q).real, 0.0, 1.0)
            ev = ev[ev > ENTROPY_EIG_CUTOFF]
            out += q * float(-(ev * np.log2(ev)).sum())
    return out


def _one_sided_search(
    rho: np.ndarray, side: str, settings: OptimizerSettings
) -> tuple[float, float, MeasurementBasis]:
    """Maximize J = S(rho_other) - S_cond over bases on ``side``.

    Returns (J_max, S_other, argmax basis).
    """
    r_a, r_b, corr = _bloch_decomposition(rho)
    if side == "B":
        r_meas, r_other, corr_eff = r_b, r_a, corr
        s_other = von_neumann_entropy(_marginal(rho, "A"))
    else:
        r_meas, r_other, corr_eff = r_a, r_b, corr.T
        s_other = von_neumann_entropy(_marginal(rho, "B"))

    grid_val, grid_angles = _scan_one_sided(
        r_meas, r_other, corr_eff, settings.grid_points_per_angle
    )

    def objective(x):
        d = _directions(np.array([x[0]]), np.array([x[1]]))
        return float(_conditional_entropy_values(r_meas, r_other, corr_eff, d)[0])

    refined = _refine(objective, grid_angles, settings)
    candidates = [(grid_val, grid_angles)]
    wrapped = MeasurementBasis(refined[0], refined[1]).wrapped()
    candidates.append((objective([wrapped.theta, wrapped.phi]), np.array(wrapped)))
    s_cond, angles = min(candidates, key=lambda c: c[0])
    basis = MeasurementBasis(float(angles[0]), float(angles[1]))
    return s_other - s_cond, s_other, basis


def discord_one_sided(
    rho: np.ndarray,
    measured_side: str = "B",
    settings: OptimizerSettings | None = None,
) -> tuple[float, MeasurementBasis]:
    """Quantum discord with the measurement on ``measured_side`` (default B).

    Returns the discord in bits and the basis achieving the maximum of
    ``S(rho_other) - S_cond``.
    """
    settings = settings or OptimizerSettings()
    rho = validate_density_matrix(rho)
    side = _normalize_side(measured_side)
    total = mutual_information(rho)
    j_max, _, basis = _one_sided_search(rho, side, settings)
    return _clamp_measure(total - j_max, "discord"), basis


def classical_one_sided(
    rho: np.ndarray,
    measured_side: str = "B",
    settings: OptimizerSettings | None = None,
) -> float:
    """One-sided classical correlation: the maximized S(rho_other) - S_cond."""
    settings = settings or OptimizerSettings()
    rho = validate_density_matrix(rho)
    side = _normalize_side(measured_side)
    j_max, _, _ = _one_sided_search(rho, side, settings)
    return _clamp_measure(j_max, "one-sided classical correlation")


def joint_outcome_distribution(
    rho: np.ndarray, basis_a: MeasurementBasis, basis_b: MeasurementBasis
) -> np.ndarray:
    """2x2 outcome probabilities of independent projective measurements."""
    rho = validate_density_matrix(rho)
    pa = basis_a.projectors()
    pb = basis_b.projectors()
    probs = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            probs[i, j] = float(np.trace(tensor(pa[i], pb[j]) @ rho).real)
    return np.clip(probs, 0.0, None)


def _two_sided_search(
    rho: np.ndarray, settings: OptimizerSettings
) -> tuple[float, MeasurementBasis, MeasurementBasis]:
    r_a, r_b, corr = _bloch_decomposition(rho)
    grid_val, grid_angles = _scan_two_sided(
        r_a, r_b, corr, settings.grid_points_per_angle
    )

    def objective(x):
        da = _directions(np.array([x[0]]), np.array([x[1]]))
        db = _directions(np.array([x[2]]), np.array([x[3]]))
        return -float(_classical_mi_values(r_a, r_b, corr, da, db)[0, 0])

    refined = _refine(objective, grid_angles, settings)
    wrapped = np.array(
        [
            refined[0] % np.pi,
            refined[1] % (2 * np.pi),
            refined[2] % np.pi,
            refined[3] % (2 * np.pi),
        ]
    )
    candidates = [(grid_val, grid_angles), (-objective(wrapped), wrapped)]
    value, angles = max(candidates, key=lambda c: c[0])
    return (
        value,
        MeasurementBasis(float(angles[0]), float(angles[1])),
        MeasurementBasis(float(angles[2]), float(angles[3])),
    )


def classical_two_sided(
    rho: np.ndarray, settings: OptimizerSettings | None = None
) -> tuple[float, MeasurementBasis, MeasurementBasis]:
    """Two-sided classical correlation K and the achieving basis pair.

    Maximizes the classical mutual information of
    :func:`joint_outcome_distribution` over independent bases on A and B:
    a coarse grid of ``grid_points_per_angle**4`` cells seeds a Nelder-Mead
    simplex refinement run from the best cell.
    """
    settings = settings or OptimizerSettings()
    rho = validate_density_matrix(rho)
    value, basis_a, basis_b = _two_sided_search(rho, settings)
    return _clamp_measure(value, "two-sided classical correlation"), basis_a, basis_b


def quantum_two_sided(
    rho: np.ndarray, settings: OptimizerSettings | None = None
) -> float:
    """Two-sided quantum correlation Q = mutual information - K."""
    settings = settings or OptimizerSettings()
    rho = validate_density_matrix(rho)
    total = mutual_information(rho)
    k, _, _ = _two_sided_search(rho, settings)
    return _clamp_measure(total - k, "two-sided quantum correlation")


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit state.

    Uses the spectrum of R = rho (sy (x) sy) rho* (sy (x) sy), with complex
    conjugation in the computational basis; eigenvalue dust down to -1e-12
    is clamped to zero before the square roots.
    """
    rho = validate_density_matrix(rho)
    if rho.shape != (4, 4):
        raise ConfigurationError(f"concurrence needs a 4x4 state, got {rho.shape}")
    yy = tensor(SIGMA_Y, SIGMA_Y)
    r_matrix = rho @ yy @ rho.conj() @ yy
    lam = np.linalg.eigvals(r_matrix).real
    if lam.min() < -CONCURRENCE_EIG_DUST:
        raise NumericDomainError(
            f"R-matrix eigenvalue {lam.min():.3e} below tolerated dust"
        )
    lam = np.sqrt(np.sort(np.clip(lam, 0.0, None))[::-1])
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def full_result(
    rho: np.ndarray,
    settings: OptimizerSettings | None = None,
    measured_side: str = "B",
) -> CorrelationResult:
    """Compute every correlation measure of a state in one pass.

    The marginal and joint entropies are evaluated once and shared; the
    two angle searches run independently.  ``total == classical + quantum``
    exactly: when the optimizer lands within clamping tolerance above the
    mutual information, the quantum part is reported as 0 and the classical
    part as the full mutual information.
    """
    settings = settings or OptimizerSettings()
    rho = validate_density_matrix(rho)
    side = _normalize_side(measured_side)

    total = mutual_information(rho)
    k, basis_a, basis_b = _two_sided_search(rho, settings)
    classical = _clamp_measure(k, "two-sided classical correlation")
    quantum = total - classical
    if quantum < 0.0:
        if quantum < -CLAMP_NEGATIVE_TOL:
            raise NumericDomainError(
                f"two-sided quantum correlation {quantum!r} is more negative than -1e-8"
            )
        quantum = 0.0
        classical = total
    j_max, _, discord_basis = _one_sided_search(rho, side, settings)
    discord = _clamp_measure(total - j_max, "discord")
    classical_1 = _clamp_measure(j_max, "one-sided classical correlation")
    return CorrelationResult(
        total=total,
        classical=classical,
        quantum=quantum,
        discord_one_sided=discord,
        classical_one_sided=classical_1,
        concurrence=concurrence(rho),
        basis_a=basis_a,
        basis_b=basis_b,
        discord_basis=discord_basis,
    )
