"""The four noise channels, written as vacuum-environment state maps.

Each channel acts on one qubit ``S`` whose environment ``E`` starts in
``|0>``.  The channel is a norm-preserving map ``V`` from the 2-dimensional
system space into the 4-dimensional ``S (x) E`` space (rows ordered
``|00>, |01>, |10>, |11>`` with the system index slow):

* amplitude damping:  ``|0> -> |00>``,
  ``|1> -> sqrt(q)|10> + sqrt(p)|01>``
* phase damping:      ``|0> -> |00>``,
  ``|1> -> sqrt(q)|10> + sqrt(p)|11>``
* bit flip (k=0) / bit-phase flip (k=1):
  ``|0> -> sqrt(p)|00> + i^k sqrt(q)|11>``,
  ``|1> -> sqrt(p)|10> + (-i)^k sqrt(q)|01>``
* phase flip:         ``|0> -> sqrt(p)|00> + sqrt(q)|01>``,
  ``|1> -> sqrt(p)|10> - sqrt(q)|11>``

``p`` in [0, 1] is the reduced time parameter and ``q = 1 - p``.  Tracing
the environment out of ``V rho V^dag`` reproduces the standard Kraus pairs
returned by :func:`kraus_for`; both routes are kept independent so tests can
cross-check one against the other.
"""

from __future__ import annotations

import enum
from typing import Sequence

import numpy as np

from .errors import ConfigurationError
from .qmat import I2, SIGMA_X, SIGMA_Y, SIGMA_Z, partial_trace, validate_density_matrix


class Channel(enum.Enum):
    """Catalog of supported single-qubit noise channels."""

    AMPLITUDE_DAMPING = "amplitude-damping"
    PHASE_DAMPING = "phase-damping"
    BIT_FLIP = "bit-flip"
    BIT_PHASE_FLIP = "bit-phase-flip"
    PHASE_FLIP = "phase-flip"

    @classmethod
    def from_name(cls, name: str) -> "Channel":
        key = name.strip().lower().replace("_", "-")
        for member in cls:
            if member.value == key:
                return member
        known = ", ".join(m.value for m in cls)
        raise ConfigurationError(f"unknown channel {name!r} (choose from: {known})")

    @property
    def flip_exponent(self) -> int:
        """k in the i^k phase of the flip-family state map (0 unless bit-phase flip)."""
        return 1 if self is Channel.BIT_PHASE_FLIP else 0

    @property
    def identity_p(self) -> float:
        """The p value at which this channel acts as the identity on the system."""
        if self in (Channel.AMPLITUDE_DAMPING, Channel.PHASE_DAMPING):
            return 0.0
        return 1.0


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ConfigurationError(f"p must lie in [0, 1], got {p!r}")
    return p


def isometry_for(kind: Channel, p: float) -> np.ndarray:
    """4x2 isometry of ``kind`` at parameter ``p``.

    Columns are the images of ``|0>_S |0>_E`` and ``|1>_S |0>_E``; rows are
    ordered ``|00>, |01>, |10>, |11>`` of ``S (x) E``.  Satisfies
    ``V^dag V = I`` exactly up to round-off.
    """
    p = _check_p(p)
    q = 1.0 - p
    sp, sq = np.sqrt(p), np.sqrt(q)
    v = np.zeros((4, 2), dtype=complex)
    if kind is Channel.AMPLITUDE_DAMPING:
        v[0, 0] = 1.0
        v[2, 1] = sq
        v[1, 1] = sp
    elif kind is Channel.PHASE_DAMPING:
        v[0, 0] = 1.0
        v[2, 1] = sq
        v[3, 1] = sp
    elif kind in (Channel.BIT_FLIP, Channel.BIT_PHASE_FLIP):
        k = kind.flip_exponent
        v[0, 0] = sp
        v[3, 0] = (1j) ** k * sq
        v[2, 1] = sp
        v[1, 1] = (-1j) ** k * sq
    elif kind is Channel.PHASE_FLIP:
        v[0, 0] = sp
        v[1, 0] = sq
        v[2, 1] = sp
        v[3, 1] = -sq
    else:  # pragma: no cover - enum is closed
        raise ConfigurationError(f"unknown channel {kind!r}")
    return v


def kraus_for(kind: Channel, p: float) -> tuple[np.ndarray, np.ndarray]:
    """Kraus pair (Gamma1, Gamma2) of ``kind`` at parameter ``p``.

    These are the standard 2x2 operator tables, transcribed directly rather
    than derived from :func:`isometry_for`; completeness
    ``Gamma1^dag Gamma1 + Gamma2^dag Gamma2 = I`` holds for every p.
    """
    p = _check_p(p)
    q = 1.0 - p
    sp, sq = np.sqrt(p), np.sqrt(q)
    if kind is Channel.AMPLITUDE_DAMPING:
        g1 = np.array([[1, 0], [0, sq]], dtype=complex)
        g2 = np.array([[0, sp], [0, 0]], dtype=complex)
    elif kind is Channel.PHASE_DAMPING:
        g1 = np.array([[1, 0], [0, sq]], dtype=complex)
        g2 = np.array([[0, 0], [0, sp]], dtype=complex)
    elif kind is Channel.BIT_FLIP:
        g1 = sp * I2
        g2 = sq * SIGMA_X
    elif kind is Channel.BIT_PHASE_FLIP:
        g1 = sp * I2
        g2 = sq * SIGMA_Y
    elif kind is Channel.PHASE_FLIP:
        g1 = sp * I2
        g2 = sq * SIGMA_Z
    else:  # pragma: no cover - enum is closed
        raise ConfigurationError(f"unknown channel {kind!r}")
    return g1, g2


def joint_isometry(kind_a: Channel, kind_b: Channel, p_a: float, p_b: float) -> np.ndarray:
    """16x4 isometry taking the two-qubit AB space into A (x) B (x) EA (x) EB."""
    va = isometry_for(kind_a, p_a).reshape(2, 2, 2)  # [a, ea, a0]
    vb = isometry_for(kind_b, p_b).reshape(2, 2, 2)  # [b, eb, b0]
    w = np.einsum("iax,jby->ijabxy", va, vb)  # [a, b, ea, eb, a0, b0]
    return w.reshape(16, 4)


def evolve(
    rho0: np.ndarray,
    kind_a: Channel,
    kind_b: Channel,
    p: float,
    *,
    p_b: float | None = None,
) -> np.ndarray:
    """Evolve a two-qubit state into the 16-dimensional four-party state.

    Both environments start in ``|0>``; qubit A passes through ``kind_a`` and
    qubit B through ``kind_b``.  Both channels share the sweep parameter
    ``p`` unless ``p_b`` is given.  The evolution is the isometry
    ``W rho0 W^dag``, so trace and purity are preserved exactly.
    """
    rho0 = np.asarray(rho0, dtype=complex)
    if rho0.shape != (4, 4):
        raise ConfigurationError(f"initial state must be 4x4, got shape {rho0.shape}")
    validate_density_matrix(rho0, name="initial state")
    p_a = _check_p(p)
    p_b = p_a if p_b is None else _check_p(p_b)
    w = joint_isometry(kind_a, kind_b, p_a, p_b)
    return w @ rho0 @ w.conj().T


def reduced(rho_total: np.ndarray, pair: Sequence[str]) -> np.ndarray:
    """4x4 reduced state of a labeled pair, first label slow."""
    pair = tuple(pair)
    if len(pair) != 2:
        raise ConfigurationError(f"a bipartition names exactly two parties, got {pair}")
    return partial_trace(rho_total, pair)
