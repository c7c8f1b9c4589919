"""Protocol comparison sweeps over operation time, coupling-amplitude error,
and detuning error.

Perturbation model: an amplitude-scale point multiplies every Rabi coupling
fed to the Hamiltonian while the detuning schedule stays fixed (the schedule
was designed for the nominal gap); a detuning-offset point adds a constant to
delta(t), leaving the one-photon detuning untouched; a duration point rebuilds
the schedule at that total time.

Axis points are independent tasks.  Set QUAD_WORKERS > 1 to run them in a
process pool; results are assembled in axis order either way, so output is
identical for any worker count.
"""

from __future__ import annotations

import enum
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .analysis import transfer_metrics
from .core_model import (
    LambdaModel,
    LambdaParams,
    QuantumState,
    TwoLevelModel,
    TwoLevelParams,
    three_level_gap,
)
from .propagator import (
    DEFAULT_STEPS,
    EvolveRequest,
    EvolveResult,
    IntegrationError,
    Method,
    evolve,
)
from .schedules import SWEEP_KINDS, PulseSchedule, ScheduleKind

TARGET_INDEX = 1  # transfer target is bare state |2>


class Scenario(enum.Enum):
    TWO_LEVEL = "two_level"
    THREE_LEVEL = "three_level"


class Axis(enum.Enum):
    DURATION = "duration"
    AMPLITUDE_SCALE = "amplitude_scale"
    DETUNING_OFFSET = "detuning_offset"


class AmplitudeMode(enum.Enum):
    MULTIPLICATIVE = "multiplicative"
    ADDITIVE = "additive"


class SweepError(RuntimeError):
    """A sweep task failed; the message identifies the offending point."""


def make_model(scenario: Scenario, params):
    if scenario is Scenario.TWO_LEVEL:
        if not isinstance(params, TwoLevelParams):
            raise TypeError("two-level scenario requires TwoLevelParams")
        return TwoLevelModel(params)
    if not isinstance(params, LambdaParams):
        raise TypeError("three-level scenario requires LambdaParams")
    return LambdaModel(params)


def make_schedule(
    scenario: Scenario,
    params,
    protocol: ScheduleKind,
    duration: float,
    delta_m: float = 0.0,
    tau_sep: float | None = None,
    sigma: float | None = None,
) -> PulseSchedule:
    """Build a protocol's schedule for the given scenario.

    Sweep schedules reference the system's minimum gap: Omega_M directly for
    the two-level system, sqrt(Delta^2+Omega_0^2)-Delta for the Lambda system.
    """
    if scenario is Scenario.TWO_LEVEL:
        if protocol is ScheduleKind.STIRAP_GAUSSIAN:
            raise ValueError("STIRAP requires the three-level scenario")
        omega_ref = params.omega_m
        drive = params.omega_m
        drive_s = None
    else:
        omega_ref = three_level_gap(params)
        drive = params.omega_p0
        drive_s = params.omega_s0
    return PulseSchedule(
        kind=protocol,
        duration=duration,
        delta_m=delta_m if protocol in SWEEP_KINDS else 0.0,
        omega_ref=omega_ref if protocol in SWEEP_KINDS else 0.0,
        drive_amplitude=drive,
        drive_amplitude_s=drive_s,
        tau_sep=tau_sep,
        sigma=sigma,
    )


def run_protocol(
    scenario: Scenario,
    params,
    protocol: ScheduleKind,
    duration: float,
    delta_m: float = 0.0,
    steps: int | None = None,
    method: Method = Method.PIECEWISE_EXPM,
    amplitude_scale: float = 1.0,
    amplitude_offset: float = 0.0,
    detuning_offset: float = 0.0,
    store_trajectory: bool = False,
    tau_sep: float | None = None,
    sigma: float | None = None,
) -> EvolveResult:
    """Evolve |1> under one protocol and return the result."""
    model = make_model(scenario, params)
    schedule = make_schedule(scenario, params, protocol, duration, delta_m, tau_sep, sigma)
    req = EvolveRequest(
        model=model,
        schedule=schedule,
        initial=QuantumState.basis(model.dim, 0),
        steps=steps,
        method=method,
        store_trajectory=store_trajectory,
        amplitude_scale=amplitude_scale,
        amplitude_offset=amplitude_offset,
        detuning_offset=detuning_offset,
    )
    return evolve(req)


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: protocols x axis grid over a shared parameter set.

    durations maps each protocol to its fixed operation time (ignored for the
    DURATION axis, where the axis value is the operation time).  Detuning
    offsets and additive amplitude offsets are angular (rad/s).
    """

    scenario: Scenario
    protocols: tuple[ScheduleKind, ...]
    axis: Axis
    lo: float
    hi: float
    points: int
    params: TwoLevelParams | LambdaParams
    delta_m: float = 0.0
    durations: Mapping[ScheduleKind, float] = field(default_factory=dict)
    steps: int | None = None
    method: Method = Method.PIECEWISE_EXPM
    amplitude_mode: AmplitudeMode = AmplitudeMode.MULTIPLICATIVE
    tau_sep: float | None = None
    sigma: float | None = None

    def __post_init__(self) -> None:
        if not self.protocols:
            raise ValueError("at least one protocol required")
        if not self.lo < self.hi:
            raise ValueError("sweep range requires lo < hi")
        if self.points < 2:
            raise ValueError("points must be >= 2")
        if self.axis is Axis.AMPLITUDE_SCALE and self.amplitude_mode is AmplitudeMode.MULTIPLICATIVE:
            if self.lo <= 0 or self.hi > 2:
                raise ValueError("multiplicative amplitude range must lie in (0, 2]")
        if self.axis is not Axis.DURATION:
            for protocol in self.protocols:
                duration = self.durations.get(protocol)
                if duration is None or duration <= 0:
                    raise ValueError(f"protocol {protocol.value} requires a positive duration")

    def grid(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.points)


@dataclass(frozen=True)
class SweepRow:
    protocol: str
    scenario: str
    axis: str
    axis_value: float
    duration: float
    fidelity: float
    error: float
    final_norm_sq: float
    method: str
    steps: int


@dataclass(frozen=True)
class SweepResult:
    rows: list[SweepRow]
    metadata: dict

    def errors_for(self, protocol: ScheduleKind) -> np.ndarray:
        return np.array([r.error for r in self.rows if r.protocol == protocol.value])

    def fidelities_for(self, protocol: ScheduleKind) -> np.ndarray:
        return np.array([r.fidelity for r in self.rows if r.protocol == protocol.value])

    def axis_values(self) -> np.ndarray:
        first = self.rows[0].protocol
        return np.array([r.axis_value for r in self.rows if r.protocol == first])


def _resolved_steps(spec: SweepSpec) -> int:
    if spec.steps is not None:
        return int(spec.steps)
    return DEFAULT_STEPS[2 if spec.scenario is Scenario.TWO_LEVEL else 3]


def _sweep_task(args) -> SweepRow:
    spec, protocol, value = args
    steps = _resolved_steps(spec)
    if spec.axis is Axis.DURATION:
        duration = float(value)
        scale, aoff, doff = 1.0, 0.0, 0.0
    else:
        duration = float(spec.durations[protocol])
        scale = float(value) if (
            spec.axis is Axis.AMPLITUDE_SCALE
            and spec.amplitude_mode is AmplitudeMode.MULTIPLICATIVE
        ) else 1.0
        aoff = float(value) if (
            spec.axis is Axis.AMPLITUDE_SCALE
            and spec.amplitude_mode is AmplitudeMode.ADDITIVE
        ) else 0.0
        doff = float(value) if spec.axis is Axis.DETUNING_OFFSET else 0.0

    if duration <= 0.0:
        # zero-duration point on a DURATION scan: the exact limit is the
        # identity map, so the state stays |1> and no transfer occurs
        return SweepRow(
            protocol=protocol.value,
            scenario=spec.scenario.value,
            axis=spec.axis.value,
            axis_value=float(value),
            duration=0.0,
            fidelity=0.0,
            error=1.0,
            final_norm_sq=1.0,
            method=spec.method.value,
            steps=0,
        )

    try:
        result = run_protocol(
            spec.scenario,
            spec.params,
            protocol,
            duration,
            delta_m=spec.delta_m,
            steps=steps,
            method=spec.method,
            amplitude_scale=scale,
            amplitude_offset=aoff,
            detuning_offset=doff,
            tau_sep=spec.tau_sep,
            sigma=spec.sigma,
        )
    except (IntegrationError, ValueError, TypeError) as exc:
        raise SweepError(
            f"sweep failed at protocol={protocol.value} {spec.axis.value}={value}: {exc}"
        ) from exc
    metrics = transfer_metrics(result.final, TARGET_INDEX)
    return SweepRow(
        protocol=protocol.value,
        scenario=spec.scenario.value,
        axis=spec.axis.value,
        axis_value=float(value),
        duration=duration,
        fidelity=metrics.fidelity,
        error=metrics.error,
        final_norm_sq=metrics.final_norm_sq,
        method=spec.method.value,
        steps=steps,
    )


def _worker_count() -> int:
    raw = os.environ.get("QUAD_WORKERS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Run the full protocols x axis grid; rows are ordered protocol-major."""
    grid = spec.grid()
    tasks = [(spec, protocol, value) for protocol in spec.protocols for value in grid]
    started = time.monotonic()
    workers = _worker_count()
    if workers > 1:
        chunksize = max(1, len(tasks) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_task, tasks, chunksize=chunksize))
    else:
        rows = [_sweep_task(task) for task in tasks]
    metadata = spec_metadata(spec)
    metadata["wall_time_s"] = time.monotonic() - started
    return SweepResult(rows=rows, metadata=metadata)


def spec_metadata(spec: SweepSpec) -> dict:
    params = spec.params
    if isinstance(params, TwoLevelParams):
        param_echo = {"omega_m": params.omega_m}
    else:
        param_echo = {
            "omega_p0": params.omega_p0,
            "omega_s0": params.omega_s0,
            "omega_m": params.omega_m,
            "delta_one_photon": params.delta_one_photon,
            "gamma": params.gamma,
        }
    return {
        "scenario": spec.scenario.value,
        "protocols": [p.value for p in spec.protocols],
        "axis": spec.axis.value,
        "lo": spec.lo,
        "hi": spec.hi,
        "points": spec.points,
        "params": param_echo,
        "delta_m": spec.delta_m,
        "durations": {p.value: t for p, t in spec.durations.items()},
        "steps": _resolved_steps(spec),
        "method": spec.method.value,
        "amplitude_mode": spec.amplitude_mode.value,
    }


SWEEP_CSV_COLUMNS = (
    "protocol,scenario,axis,axis_value,T_s,fidelity,error,final_norm_sq,method,steps"
)


def write_sweep_csv(result: SweepResult, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(SWEEP_CSV_COLUMNS + "\n")
        for r in result.rows:
            fh.write(
                f"{r.protocol},{r.scenario},{r.axis},"
                f"{r.axis_value:.15e},{r.duration:.15e},{r.fidelity:.15e},"
                f"{r.error:.15e},{r.final_norm_sq:.15e},{r.method},{r.steps}\n"
            )


@dataclass(frozen=True)
class AxisWindow:
    axis: Axis
    lo: float
    hi: float
    points: int = 41


@dataclass(frozen=True)
class ProtocolSummary:
    axis: str
    protocol: str
    duration: float
    on_axis_fidelity: float
    on_axis_error: float
    worst_error: float


@dataclass(frozen=True)
class DominanceRow:
    """protocol_a dominates protocol_b on an axis when its error is no larger
    at >= 90% of the sampled points."""

    axis: str
    protocol_a: str
    protocol_b: str
    fraction_a_le_b: float
    dominates: bool


@dataclass(frozen=True)
class ComparisonResult:
    summaries: list[ProtocolSummary]
    dominance: list[DominanceRow]
    sweeps: dict[Axis, SweepResult]

    def to_text(self) -> str:
        lines = ["protocol worst-case error per axis window:"]
        lines.append(f"  {'axis':<18}{'protocol':<18}{'T_s':>14}{'on_axis_err':>14}{'worst_err':>14}")
        for s in self.summaries:
            lines.append(
                f"  {s.axis:<18}{s.protocol:<18}{s.duration:>14.6e}"
                f"{s.on_axis_error:>14.6e}{s.worst_error:>14.6e}"
            )
        if self.dominance:
            lines.append("pairwise dominance (error_a <= error_b at >= 90% of points):")
            lines.append(f"  {'axis':<18}{'a':<18}{'b':<18}{'frac':>8}  dominates")
            for d in self.dominance:
                lines.append(
                    f"  {d.axis:<18}{d.protocol_a:<18}{d.protocol_b:<18}"
                    f"{d.fraction_a_le_b:>8.3f}  {'yes' if d.dominates else 'no'}"
                )
        return "\n".join(lines)


DOMINANCE_THRESHOLD = 0.9


def compare_protocols(
    scenario: Scenario,
    params,
    protocol_durations: Mapping[ScheduleKind, float],
    error_axes: Sequence[AxisWindow],
    delta_m: float = 0.0,
    steps: int | None = None,
    method: Method = Method.PIECEWISE_EXPM,
    amplitude_mode: AmplitudeMode = AmplitudeMode.MULTIPLICATIVE,
    tau_sep: float | None = None,
    sigma: float | None = None,
) -> ComparisonResult:
    """Cross protocols with error axes; summarize worst-case errors and
    pairwise dominance."""
    protocols = tuple(protocol_durations.keys())
    summaries: list[ProtocolSummary] = []
    dominance: list[DominanceRow] = []
    sweeps: dict[Axis, SweepResult] = {}

    on_axis: dict[ScheduleKind, float] = {}
    for protocol in protocols:
        result = run_protocol(
            scenario,
            params,
            protocol,
            protocol_durations[protocol],
            delta_m=delta_m,
            steps=steps,
            method=method,
            tau_sep=tau_sep,
            sigma=sigma,
        )
        on_axis[protocol] = transfer_metrics(result.final, TARGET_INDEX).fidelity

    for window in error_axes:
        spec = SweepSpec(
            scenario=scenario,
            protocols=protocols,
            axis=window.axis,
            lo=window.lo,
            hi=window.hi,
            points=window.points,
            params=params,
            delta_m=delta_m,
            durations=dict(protocol_durations),
            steps=steps,
            method=method,
            amplitude_mode=amplitude_mode,
            tau_sep=tau_sep,
            sigma=sigma,
        )
        result = run_sweep(spec)
        sweeps[window.axis] = result
        errors = {p: result.errors_for(p) for p in protocols}
        for protocol in protocols:
            summaries.append(
                ProtocolSummary(
                    axis=window.axis.value,
                    protocol=protocol.value,
                    duration=protocol_durations[protocol],
                    on_axis_fidelity=on_axis[protocol],
                    on_axis_error=1.0 - on_axis[protocol],
                    worst_error=float(np.max(errors[protocol])),
                )
            )
        for pa in protocols:
            for pb in protocols:
                if pa is pb:
                    continue
                frac = float(np.mean(errors[pa] <= errors[pb]))
                dominance.append(
                    DominanceRow(
                        axis=window.axis.value,
                        protocol_a=pa.value,
                        protocol_b=pb.value,
                        fraction_a_le_b=frac,
                        dominates=frac >= DOMINANCE_THRESHOLD,
                    )
                )
    return ComparisonResult(summaries=summaries, dominance=dominance, sweeps=sweeps)


def write_comparison_worst_csv(result: ComparisonResult, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("axis,protocol,T_s,on_axis_fidelity,on_axis_error,worst_error\n")
        for s in result.summaries:
            fh.write(
                f"{s.axis},{s.protocol},{s.duration:.15e},"
                f"{s.on_axis_fidelity:.15e},{s.on_axis_error:.15e},{s.worst_error:.15e}\n"
            )


def write_comparison_dominance_csv(result: ComparisonResult, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("axis,protocol_a,protocol_b,fraction_a_le_b,dominates\n")
        for d in result.dominance:
            fh.write(
                f"{d.axis},{d.protocol_a},{d.protocol_b},"
                f"{d.fraction_a_le_b:.15e},{int(d.dominates)}\n"
            )
