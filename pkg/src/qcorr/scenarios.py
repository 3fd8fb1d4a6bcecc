"""Environment combinations, sweeps over the decoherence parameter, analytic
cross-checks and dynamical-event detection.

Three named scenarios couple qubit A and qubit B to non-identical
environments:

* ``APE``: amplitude damping on A, phase damping on B
* ``ABE``: amplitude damping on A, bit flip on B
* ``PPE``: phase damping on A, phase flip on B

plus a ``custom`` passthrough that names any two catalog channels.  A sweep
evolves the shared initial state over a p grid, reduces the 16-dimensional
state to each requested bipartition and evaluates every correlation measure.

For the named scenarios, closed-form reduced matrices transcribed from an
external derivation are available as cross-check oracles.  The transcription
is kept verbatim: a handful of the tabulated matrices are defective as
written (non-unit trace, one tabulated in swapped factor order, one with a
flipped sign), and the audit reports those defects instead of repairing
them.  The numerical isometric evolution is the canonical truth.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .channels import Channel, evolve, reduced
from .correlations import (
    CorrelationResult,
    OptimizerSettings,
    concurrence,
    full_result,
)
from .errors import ConfigurationError, NumericDomainError
from .qmat import (
    I2,
    MatrixValidity,
    PAULIS,
    density_matrix_report,
    tensor,
)

#: Numerical-vs-analytic agreement required to call a tabulated matrix a match.
ORACLE_MATCH_ATOL = 1e-12

#: Concurrence below this counts as exactly zero for death/revival detection.
ESD_THRESHOLD = 1e-6


class ScenarioKind(enum.Enum):
    """The three named environment combinations."""

    APE = "ape"
    ABE = "abe"
    PPE = "ppe"

    @classmethod
    def from_name(cls, name: str) -> "ScenarioKind":
        key = name.strip().lower()
        for member in cls:
            if member.value == key:
                return member
        raise ConfigurationError(
            f"unknown scenario {name!r} (choose from: ape, abe, ppe, custom)"
        )

    @property
    def channel_pair(self) -> tuple[Channel, Channel]:
        return {
            ScenarioKind.APE: (Channel.AMPLITUDE_DAMPING, Channel.PHASE_DAMPING),
            ScenarioKind.ABE: (Channel.AMPLITUDE_DAMPING, Channel.BIT_FLIP),
            ScenarioKind.PPE: (Channel.PHASE_DAMPING, Channel.PHASE_FLIP),
        }[self]


class Bipartition(enum.Enum):
    """The six two-party reductions of the four-party system."""

    AB = ("A", "B")
    AEA = ("A", "EA")
    BEB = ("B", "EB")
    AEB = ("A", "EB")
    BEA = ("B", "EA")
    EAEB = ("EA", "EB")

    @property
    def labels(self) -> tuple[str, str]:
        return self.value

    @classmethod
    def from_name(cls, name: str) -> "Bipartition":
        key = name.strip().upper()
        try:
            return cls[key]
        except KeyError:
            known = ", ".join(m.name for m in cls)
            raise ConfigurationError(
                f"unknown bipartition {name!r} (choose from: {known})"
            ) from None


@dataclass(frozen=True)
class InitialStateParams:
    """Parameters of the shared initial two-qubit family.

    The family has unit identity coefficient and equal negative coefficients
    ``-a`` on all three symmetric two-qubit correlators; ``a = 1`` is the
    maximally entangled singlet, small ``a`` approaches the maximally mixed
    state.
    """

    a: float

    def __post_init__(self) -> None:
        if not 0.0 < self.a <= 1.0:
            raise ConfigurationError(f"a must lie in (0, 1], got {self.a!r}")

    @property
    def c(self) -> tuple[float, float, float]:
        return (-self.a, -self.a, -self.a)

    # combinations the analytic reduced matrices are written in
    @property
    def a_plus(self) -> float:
        return 1.0 + self.c[2]

    @property
    def a_minus(self) -> float:
        return 1.0 - self.c[2]

    @property
    def b_plus(self) -> float:
        return self.c[0] + self.c[1]

    @property
    def b_minus(self) -> float:
        return self.c[0] - self.c[1]


def initial_state(a: float) -> np.ndarray:
    """The two-qubit initial state: (I + sum_i c_i sigma_i (x) sigma_i) / 4."""
    params = InitialStateParams(a)
    rho = tensor(I2, I2)
    for coeff, sigma in zip(params.c, PAULIS):
        rho = rho + coeff * tensor(sigma, sigma)
    return rho / 4.0


# ---------------------------------------------------------------------------
# analytic reduced matrices (verbatim transcriptions)
# ---------------------------------------------------------------------------


def analytic_reduced(
    scenario: ScenarioKind, pair: Bipartition, a: float, p: float
) -> np.ndarray:
    """Tabulated closed-form reduced matrix for a named scenario.

    Transcribed verbatim, defects included; the output is NOT guaranteed to
    be a valid density matrix.  Known defects, all reported by
    :func:`compare_with_analytic` rather than corrected here: APE/AEB has a
    constant error in its (0,0) entry (trace 3/4); ABE/AB and ABE/BEA are
    not trace-normalized; PPE/BEA is tabulated with its two factors swapped;
    PPE/EAEB has the sign of its (0,1)/(1,0) entries flipped.
    """
    params = InitialStateParams(a)
    if not 0.0 <= p <= 1.0:
        raise ConfigurationError(f"p must lie in [0, 1], got {p!r}")
    q = 1.0 - p
    s = math.sqrt(p * q)
    ap, am = params.a_plus, params.a_minus
    bp, bm = params.b_plus, params.b_minus
    c1 = params.c[0]
    c3 = params.c[2]

    if scenario is ScenarioKind.APE:
        if pair is Bipartition.AB:
            m = [
                [ap + p * am, 0, 0, q * bm],
                [0, am + p * ap, q * bp, 0],
                [0, q * bp, q * am, 0],
                [q * bm, 0, 0, q * ap],
            ]
            scale = 0.25
        elif pair is Bipartition.AEA:
            m = [[1, 0, 0, 0], [0, p, s, 0], [0, s, q, 0], [0, 0, 0, 0]]
            scale = 0.5
        elif pair is Bipartition.BEB:
            m = [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, q, s], [0, 0, s, p]]
            scale = 0.5
        elif pair is Bipartition.AEB:
            m = [
                [1 + p * q * ap, s * (p * ap + am), 0, 0],
                [s * (p * ap + am), p * (p * ap + am), 0, 0],
                [0, 0, q * (q * ap + am), q * s * ap],
                [0, 0, q * s * ap, p * q * ap],
            ]
            scale = 0.25
        elif pair is Bipartition.BEA:
            m = [
                [ap + q * am, 0, 0, s * bm],
                [0, p * am, s * bp, 0],
                [0, s * bp, am + q * ap, 0],
                [s * bm, 0, 0, p * ap],
            ]
            scale = 0.25
        else:  # EAEB
            m = [
                [(1 + q * q) * ap + 2 * q * am, s * (am + q * ap), 0, 0],
                [s * (am + q * ap), p * (am + q * ap), 0, 0],
                [0, 0, p * (am + q * ap), p * s * ap],
                [0, 0, p * s * ap, p * p * ap],
            ]
            scale = 0.25
    elif scenario is ScenarioKind.ABE:
        sq = math.sqrt(q)
        sp = math.sqrt(p)
        if pair is Bipartition.AB:
            m = [
                [2 * p * p + q * am, 0, 0, sq * (p * bm + q * bp)],
                [0, 2 * p * p + q * ap, sq * (p * bp + q * bm), 0],
                [0, sq * (p * bp + q * bm), q * (p * am + q * ap), 0],
                [sq * (p * bm + q * bp), 0, 0, q * (q * am + p * ap)],
            ]
            scale = 0.25
        elif pair is Bipartition.AEA:
            m = [[1, 0, 0, 0], [0, p, s, 0], [0, s, q, 0], [0, 0, 0, 0]]
            scale = 0.5
        elif pair is Bipartition.BEB:
            m = [[p, 0, 0, s], [0, q, s, 0], [0, s, p, 0], [s, 0, 0, q]]
            scale = 0.5
        elif pair is Bipartition.AEB:
            g = q * sp * c1
            m = [
                [p + p * p, 0, 0, g],
                [0, (1 + p) * q, g, 0],
                [0, g, p * q, 0],
                [g, 0, 0, q * q],
            ]
            scale = 0.5
        elif pair is Bipartition.BEA:
            big_a = q * bm + p * bp
            big_b = p * bm + q * bp
            big_c = p * am + q * ap
            big_d = p * ap + q * am
            m = [
                [(1 + p) * big_d, 0, 0, sp * big_b],
                [0, p * big_c, sp * big_a, 0],
                [0, sp * big_a, (1 + p) * big_c, 0],
                [sp * big_b, 0, 0, p * big_d],
            ]
            scale = 0.25
        else:  # EAEB
            g = p * sq * c1
            m = [
                [p * (1 + q), 0, 0, g],
                [0, q * (2 - p), g, 0],
                [0, g, p * p, 0],
                [g, 0, 0, p * q],
            ]
            scale = 0.5
    else:  # PPE
        if pair is Bipartition.AB:
            u = math.sqrt(q) * (p - q)
            m = [
                [ap, 0, 0, u * bm],
                [0, am, u * bp, 0],
                [0, u * bp, am, 0],
                [u * bm, 0, 0, ap],
            ]
            scale = 0.25
        elif pair is Bipartition.AEA:
            m = [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, q, s], [0, 0, s, p]]
            scale = 0.5
        elif pair is Bipartition.BEB:
            m = [[p, s, 0, 0], [s, q, 0, 0], [0, 0, p, -s], [0, 0, -s, q]]
            scale = 0.5
        elif pair is Bipartition.AEB:
            g = s * c3
            m = [[p, g, 0, 0], [g, q, 0, 0], [0, 0, p, -g], [0, 0, -g, q]]
            scale = 0.5
        elif pair is Bipartition.BEA:
            m = [
                [ap + q * am, 0, s * am, 0],
                [0, am + q * ap, 0, s * ap],
                [s * am, 0, p * am, 0],
                [0, s * ap, 0, p * ap],
            ]
            scale = 0.25
        else:  # EAEB
            m = [
                [p * (1 + q), -p * s * c3, p * s, -p * q * c3],
                [-p * s * c3, q * (1 + q), -p * q * c3, q * s],
                [p * s, -p * q * c3, p * p, -p * s * c3],
                [-p * q * c3, q * s, -p * s * c3, p * q],
            ]
            scale = 0.5
    return scale * np.array(m, dtype=complex)


@dataclass(frozen=True)
class OracleComparison:
    """One row of the analytic-matrix audit."""

    scenario: str
    pair: str
    a: float
    p: float
    max_abs_dev: float
    printed_trace: float
    validity: MatrixValidity

    @property
    def printed_is_valid(self) -> bool:
        return self.validity.is_valid

    @property
    def flagged(self) -> bool:
        """True when the tabulated matrix is defective: either it fails
        density-matrix validation or it disagrees with the numerics."""
        return (not self.printed_is_valid) or self.max_abs_dev > ORACLE_MATCH_ATOL


def compare_with_analytic(
    scenario: ScenarioKind,
    pair: Bipartition,
    a: float,
    p: float,
    numeric: np.ndarray | None = None,
) -> OracleComparison:
    """Compare the tabulated matrix against the numerical evolution."""
    if numeric is None:
        ca, cb = scenario.channel_pair
        numeric = reduced(evolve(initial_state(a), ca, cb, p), pair.labels)
    printed = analytic_reduced(scenario, pair, a, p)
    report = density_matrix_report(printed)
    return OracleComparison(
        scenario=scenario.value,
        pair=pair.name,
        a=float(a),
        p=float(p),
        max_abs_dev=float(np.abs(numeric - printed).max()),
        printed_trace=report.trace,
        validity=report,
    )


def audit_analytic(
    scenario: ScenarioKind,
    a: float,
    p_values: Sequence[float],
    pairs: Sequence[Bipartition] = tuple(Bipartition),
) -> list[OracleComparison]:
    """Full audit grid for one scenario: one comparison per (p, pair)."""
    rho0 = initial_state(a)
    ca, cb = scenario.channel_pair
    rows = []
    for p in p_values:
        rho16 = evolve(rho0, ca, cb, p)
        for pair in pairs:
            numeric = reduced(rho16, pair.labels)
            rows.append(compare_with_analytic(scenario, pair, a, p, numeric=numeric))
    return rows


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------


def uniform_grid(p_min: float = 0.0, p_max: float = 1.0, steps: int = 101) -> tuple[float, ...]:
    """Uniform, strictly increasing p grid with ``steps`` points inclusive."""
    if steps < 1:
        raise ConfigurationError(f"p-steps must be >= 1, got {steps}")
    if steps == 1:
        return (float(p_min),)
    return tuple(float(x) for x in np.linspace(p_min, p_max, steps))


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything one sweep needs, validated on construction."""

    scenario: ScenarioKind | None = ScenarioKind.APE
    a: float = 0.4
    p_grid: tuple[float, ...] = field(default_factory=uniform_grid)
    bipartitions: tuple[Bipartition, ...] = tuple(Bipartition)
    optimizer: OptimizerSettings = field(default_factory=OptimizerSettings)
    oracle_check: bool = False
    measured_side: str = "B"
    channel_a: Channel | None = None
    channel_b: Channel | None = None

    def __post_init__(self) -> None:
        InitialStateParams(self.a)
        if not self.p_grid:
            raise ConfigurationError("p_grid must not be empty")
        if any(not 0.0 <= p <= 1.0 for p in self.p_grid):
            raise ConfigurationError("every p in p_grid must lie in [0, 1]")
        if any(b >= c for b, c in zip(self.p_grid, self.p_grid[1:])):
            raise ConfigurationError("p_grid must be strictly increasing")
        if not self.bipartitions:
            raise ConfigurationError("at least one bipartition is required")
        if len(set(self.bipartitions)) != len(self.bipartitions):
            raise ConfigurationError("duplicate bipartitions requested")
        if self.scenario is None:
            if self.channel_a is None or self.channel_b is None:
                raise ConfigurationError(
                    "a custom scenario requires channel_a and channel_b"
                )
            if self.oracle_check:
                raise ConfigurationError(
                    "oracle_check is only available for the named scenarios"
                )
        elif self.channel_a is not None or self.channel_b is not None:
            raise ConfigurationError(
                "channel_a/channel_b are only accepted with a custom scenario"
            )
        if str(self.measured_side).strip().upper() not in ("A", "B"):
            raise ConfigurationError(
                f"measured_side must be 'A' or 'B', got {self.measured_side!r}"
            )

    @property
    def channels(self) -> tuple[Channel, Channel]:
        if self.scenario is not None:
            return self.scenario.channel_pair
        return self.channel_a, self.channel_b  # type: ignore[return-value]

    @property
    def scenario_name(self) -> str:
        return self.scenario.value if self.scenario is not None else "custom"


@dataclass(frozen=True)
class CorrelationRecord:
    """One sweep point for one bipartition; mirrors one CSV row."""

    scenario: str
    a: float
    p: float
    bipartition: str
    total: float
    classical_k: float
    quantum_q: float
    discord_d: float
    classical_c: float
    concurrence: float
    theta_a: float
    phi_a: float
    theta_b: float
    phi_b: float
    oracle_max_abs_dev: float | None = None


def _record_from_result(
    config: ScenarioConfig,
    p: float,
    pair: Bipartition,
    res: CorrelationResult,
    oracle_dev: float | None,
) -> CorrelationRecord:
    return CorrelationRecord(
        scenario=config.scenario_name,
        a=float(config.a),
        p=float(p),
        bipartition=pair.name,
        total=res.total,
        classical_k=res.classical,
        quantum_q=res.quantum,
        discord_d=res.discord_one_sided,
        classical_c=res.classical_one_sided,
        concurrence=res.concurrence,
        theta_a=res.basis_a.theta,
        phi_a=res.basis_a.phi,
        theta_b=res.basis_b.theta,
        phi_b=res.basis_b.phi,
        oracle_max_abs_dev=oracle_dev,
    )


def sweep(config: ScenarioConfig) -> list[CorrelationRecord]:
    """Evaluate every requested bipartition at every grid point.

    Records come back in deterministic order: p-major, bipartition-minor in
    the order listed in the config.  A numeric-domain failure aborts the
    sweep and names the offending (p, pair).
    """
    rho0 = initial_state(config.a)
    kind_a, kind_b = config.channels
    records: list[CorrelationRecord] = []
    for p in config.p_grid:
        rho16 = evolve(rho0, kind_a, kind_b, p)
        for pair in config.bipartitions:
            rho4 = reduced(rho16, pair.labels)
            try:
                res = full_result(rho4, config.optimizer, config.measured_side)
            except NumericDomainError as err:
                raise NumericDomainError(
                    f"sweep aborted at p={p!r}, pair={pair.name}: {err}"
                ) from err
            oracle_dev = None
            if config.oracle_check and config.scenario is not None:
                comp = compare_with_analytic(
                    config.scenario, pair, config.a, p, numeric=rho4
                )
                if comp.printed_is_valid:
                    oracle_dev = comp.max_abs_dev
            records.append(_record_from_result(config, p, pair, res, oracle_dev))
    return records


# ---------------------------------------------------------------------------
# dynamical events
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Event:
    """A located dynamical event, bracketed to a p interval."""

    kind: str  # "death" | "revival" | "sudden_change"
    measure: str
    p_lo: float
    p_hi: float


_MEASURE_FIELDS = {
    "total": "total",
    "classical_k": "classical_k",
    "quantum_q": "quantum_q",
    "discord_d": "discord_d",
    "classical_c": "classical_c",
    "concurrence": "concurrence",
}

#: Sudden-change spikes must also clear this absolute second-difference floor
#: so optimizer noise on a flat series cannot fire the detector.
SPIKE_ABS_FLOOR = 1e-6


def _normalize_measure(measure: str) -> str:
    key = str(measure).strip().lower()
    if key not in _MEASURE_FIELDS:
        known = ", ".join(sorted(_MEASURE_FIELDS))
        raise ConfigurationError(f"unknown measure {measure!r} (choose from: {known})")
    return _MEASURE_FIELDS[key]


def _series_evaluator(
    records: Sequence[CorrelationRecord],
    measure: str,
    config: ScenarioConfig | None,
) -> Callable[[float], float]:
    """Build the re-evaluation callable used by interval refinement."""
    first = records[0]
    if config is not None:
        kind_a, kind_b = config.channels
        optimizer = config.optimizer
        side = config.measured_side
    elif first.scenario != "custom":
        kind_a, kind_b = ScenarioKind.from_name(first.scenario).channel_pair
        optimizer = OptimizerSettings()
        side = "B"
    else:
        raise ConfigurationError(
            "custom-scenario records need the originating config to refine events"
        )
    pair = Bipartition.from_name(first.bipartition)
    rho0 = initial_state(first.a)

    def measure_at(p: float) -> float:
        rho4 = reduced(evolve(rho0, kind_a, kind_b, p), pair.labels)
        if measure == "concurrence":
            return concurrence(rho4)
        res = full_result(rho4, optimizer, side)
        return {
            "total": res.total,
            "classical_k": res.classical,
            "quantum_q": res.quantum,
            "discord_d": res.discord_one_sided,
            "classical_c": res.classical_one_sided,
        }[measure]

    return measure_at


def _refine_crossing(is_above, lo: float, hi: float, width: float) -> tuple[float, float]:
    above_lo = is_above(lo)
    while hi - lo > width:
        mid = (lo + hi) / 2.0
        if is_above(mid) == above_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def _refine_kink(value_at, lo: float, mid: float, hi: float, width: float) -> tuple[float, float]:
    cache: dict[float, float] = {}

    def f(x: float) -> float:
        if x not in cache:
            cache[x] = value_at(x)
        return cache[x]

    while hi - lo > width:
        pts = [lo, (lo + mid) / 2.0, mid, (mid + hi) / 2.0, hi]
        vals = [f(x) for x in pts]
        curv = [abs(vals[i + 1] - 2.0 * vals[i] + vals[i - 1]) for i in (1, 2, 3)]
        j = 1 + int(np.argmax(curv))
        lo, mid, hi = pts[j - 1], pts[j], pts[j + 1]
    return lo, hi


def detect_events(
    records: Sequence[CorrelationRecord],
    measure: str,
    *,
    config: ScenarioConfig | None = None,
    esd_threshold: float = ESD_THRESHOLD,
    spike_factor: float = 10.0,
    spike_floor: float = SPIKE_ABS_FLOOR,
    refine_width: float = 1e-4,
) -> list[Event]:
    """Locate deaths/revivals (concurrence) or sudden changes (other measures).

    ``records`` must be a single (scenario, a, bipartition) series on a
    uniform p grid with at least 5 points.  Concurrence events are threshold
    crossings at ``esd_threshold``; sudden changes are grid intervals whose
    discrete second difference exceeds ``spike_factor`` times the series
    median (and an absolute floor).  Every bracket is narrowed to
    ``refine_width`` by bisecting with fresh dynamics evaluations rather
    than interpolation.
    """
    measure = _normalize_measure(measure)
    records = list(records)
    if len(records) < 5:
        raise ConfigurationError(
            f"event detection needs at least 5 points, got {len(records)}"
        )
    keys = {(r.scenario, r.a, r.bipartition) for r in records}
    if len(keys) != 1:
        raise ConfigurationError(
            f"records mix several (scenario, a, bipartition) series: {sorted(keys)}"
        )
    ps = np.array([r.p for r in records])
    if np.any(np.diff(ps) <= 0):
        raise ConfigurationError("records must be sorted by strictly increasing p")
    steps = np.diff(ps)
    if np.abs(steps - steps.mean()).max() > 1e-9:
        raise ConfigurationError("event detection requires a uniform p grid")

    values = np.array([getattr(r, measure) for r in records], dtype=float)
    measure_at = _series_evaluator(records, measure, config)
    events: list[Event] = []

    if measure == "concurrence":
        above = values > esd_threshold
        for i in range(1, len(ps)):
            if above[i] != above[i - 1]:
                lo, hi = _refine_crossing(
                    lambda x: measure_at(x) > esd_threshold,
                    float(ps[i - 1]),
                    float(ps[i]),
                    refine_width,
                )
                kind = "death" if above[i - 1] else "revival"
                events.append(Event(kind, measure, lo, hi))
        return events

    d2 = values[2:] - 2.0 * values[1:-1] + values[:-2]
    mags = np.abs(d2)
    threshold = max(spike_factor * float(np.median(mags)), spike_floor)
    spike_idx = [i + 1 for i, m in enumerate(mags) if m > threshold]
    # group consecutive spiking interior points into one bracket each
    clusters: list[list[int]] = []
    for i in spike_idx:
        if clusters and i == clusters[-1][-1] + 1:
            clusters[-1].append(i)
        else:
            clusters.append([i])
    for cluster in clusters:
        peak = max(cluster, key=lambda i: mags[i - 1])
        lo = float(ps[cluster[0] - 1])
        hi = float(ps[cluster[-1] + 1])
        lo, hi = _refine_kink(measure_at, lo, float(ps[peak]), hi, refine_width)
        events.append(Event("sudden_change", measure, lo, hi))
    return events
