"""Run configuration: flat ``key = value`` files with ``#`` comments and one
optional ``[sweep]`` section.

Frequencies are ordinary Hz and durations seconds; the single 2*pi conversion
to angular units happens here.  Parsing is strict: unknown keys, duplicate
keys, and missing required keys are errors that name the key.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .core_model import LambdaParams, TwoLevelParams, angular
from .propagator import Method
from .schedules import SWEEP_KINDS, ScheduleKind
from .sweeps import AmplitudeMode, Axis, Scenario, SweepSpec


class ConfigError(ValueError):
    pass


_PROTOCOL_ALIASES = {
    "pi": ScheduleKind.FLAT_PI,
    "flat_pi": ScheduleKind.FLAT_PI,
    "siquad": ScheduleKind.SIQUAD,
    "faquad": ScheduleKind.FAQUAD,
    "linear": ScheduleKind.LINEAR,
    "stirap": ScheduleKind.STIRAP_GAUSSIAN,
    "stirap_gaussian": ScheduleKind.STIRAP_GAUSSIAN,
}

_DURATION_KEYS = {f"T_{kind.value}_s": kind for kind in ScheduleKind}

_MAIN_KEYS = {
    "scenario",
    "protocol",
    "omega_m_hz",
    "omega0_hz",
    "delta_big_hz",
    "gamma_hz",
    "delta_m_hz",
    "T_s",
    "steps",
    "method",
    "tau_sep_s",
    "sigma_s",
    "amplitude_mode",
    "compare_points",
    "compare_amp_lo",
    "compare_amp_hi",
    "compare_det_hz",
    "out_dir",
} | set(_DURATION_KEYS)

_SWEEP_KEYS = {"axis", "lo", "hi", "points"}


def parse_config_text(text: str) -> tuple[dict, dict | None]:
    """Split config text into the main key/value map and the optional [sweep]
    section; rejects duplicate keys, unknown sections and malformed lines."""
    main: dict[str, str] = {}
    sweep: dict[str, str] | None = None
    current = main
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if section != "sweep":
                raise ConfigError(f"line {lineno}: unknown section [{section}]")
            if sweep is not None:
                raise ConfigError(f"line {lineno}: duplicate [sweep] section")
            sweep = {}
            current = sweep
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value")
        if key in current:
            raise ConfigError(f"line {lineno}: duplicate key: {key}")
        current[key] = value
    return main, sweep


def _as_float(section: dict, key: str) -> float:
    try:
        return float(section[key])
    except ValueError as exc:
        raise ConfigError(f"key {key}: not a number: {section[key]!r}") from exc


def _as_int(section: dict, key: str) -> int:
    value = section[key]
    try:
        return int(value)
    except ValueError:
        pass
    try:
        as_float = float(value)
    except ValueError as exc:
        raise ConfigError(f"key {key}: not an integer: {value!r}") from exc
    if as_float != int(as_float):
        raise ConfigError(f"key {key}: not an integer: {value!r}")
    return int(as_float)


@dataclass(frozen=True)
class RunConfig:
    """Validated, unit-converted run description (angular rad/s internally)."""

    scenario: Scenario
    protocols: tuple[ScheduleKind, ...]
    params: TwoLevelParams | LambdaParams
    delta_m: float
    durations: dict[ScheduleKind, float]
    steps: int | None
    method: Method
    amplitude_mode: AmplitudeMode
    tau_sep: float | None
    sigma: float | None
    sweep: SweepSpec | None
    out_dir: str | None
    compare_points: int
    compare_amp_lo: float
    compare_amp_hi: float
    compare_det: float | None
    raw: dict = field(repr=False, default_factory=dict)


def _require(section: dict, key: str) -> str:
    if key not in section:
        raise ConfigError(f"missing required key: {key}")
    return section[key]


def load_config_text(text: str) -> RunConfig:
    main, sweep_raw = parse_config_text(text)

    unknown = set(main) - _MAIN_KEYS
    if unknown:
        raise ConfigError(f"unknown key: {sorted(unknown)[0]}")
    if sweep_raw is not None:
        unknown = set(sweep_raw) - _SWEEP_KEYS
        if unknown:
            raise ConfigError(f"unknown key in [sweep]: {sorted(unknown)[0]}")

    scenario_raw = _require(main, "scenario")
    try:
        scenario = Scenario(scenario_raw)
    except ValueError as exc:
        raise ConfigError(f"key scenario: unknown value {scenario_raw!r}") from exc

    protocols: list[ScheduleKind] = []
    for name in _require(main, "protocol").split(","):
        name = name.strip()
        if name not in _PROTOCOL_ALIASES:
            raise ConfigError(f"key protocol: unknown protocol {name!r}")
        kind = _PROTOCOL_ALIASES[name]
        if kind in protocols:
            raise ConfigError(f"key protocol: protocol {name!r} listed twice")
        protocols.append(kind)
    if scenario is Scenario.TWO_LEVEL and ScheduleKind.STIRAP_GAUSSIAN in protocols:
        raise ConfigError("key protocol: stirap requires scenario = three_level")

    if scenario is Scenario.TWO_LEVEL:
        params: TwoLevelParams | LambdaParams = TwoLevelParams(
            omega_m=angular(_as_float(main, "omega_m_hz"))
            if "omega_m_hz" in main
            else _raise_missing("omega_m_hz")
        )
    else:
        omega0 = angular(_as_float(main, "omega0_hz")) if "omega0_hz" in main else _raise_missing("omega0_hz")
        delta_big = (
            angular(_as_float(main, "delta_big_hz"))
            if "delta_big_hz" in main
            else _raise_missing("delta_big_hz")
        )
        gamma = angular(_as_float(main, "gamma_hz")) if "gamma_hz" in main else 0.0
        params = LambdaParams(
            omega_p0=omega0, omega_s0=omega0, delta_one_photon=delta_big, gamma=gamma
        )

    needs_delta_m = any(p in SWEEP_KINDS for p in protocols)
    if needs_delta_m and "delta_m_hz" not in main:
        raise ConfigError("missing required key: delta_m_hz")
    delta_m = angular(_as_float(main, "delta_m_hz")) if "delta_m_hz" in main else 0.0

    axis = None
    sweep_spec = None
    if sweep_raw is not None:
        axis_raw = _require(sweep_raw, "axis")
        try:
            axis = Axis(axis_raw)
        except ValueError as exc:
            raise ConfigError(f"key axis: unknown value {axis_raw!r}") from exc

    per_protocol = {key: kind for key, kind in _DURATION_KEYS.items() if key in main}
    if "T_s" in main and per_protocol:
        raise ConfigError(
            f"conflicting duration keys: T_s and {sorted(per_protocol)[0]} both given"
        )
    durations: dict[ScheduleKind, float] = {}
    if "T_s" in main:
        t_global = _as_float(main, "T_s")
        durations = {p: t_global for p in protocols}
    else:
        for key, kind in per_protocol.items():
            if kind not in protocols:
                raise ConfigError(f"key {key}: protocol {kind.value} not listed in 'protocol'")
            durations[kind] = _as_float(main, key)
    if axis is not Axis.DURATION:
        for p in protocols:
            if p not in durations:
                raise ConfigError(f"missing required key: T_{p.value}_s (or global T_s)")
            if durations[p] <= 0:
                raise ConfigError(f"key T_{p.value}_s: duration must be > 0")

    steps = _as_int(main, "steps") if "steps" in main else None
    if "method" in main:
        try:
            method = Method(main["method"])
        except ValueError as exc:
            raise ConfigError(f"key method: unknown value {main['method']!r}") from exc
    else:
        method = Method.PIECEWISE_EXPM
    if "amplitude_mode" in main:
        try:
            amplitude_mode = AmplitudeMode(main["amplitude_mode"])
        except ValueError as exc:
            raise ConfigError(
                f"key amplitude_mode: unknown value {main['amplitude_mode']!r}"
            ) from exc
    else:
        amplitude_mode = AmplitudeMode.MULTIPLICATIVE

    tau_sep = _as_float(main, "tau_sep_s") if "tau_sep_s" in main else None
    sigma = _as_float(main, "sigma_s") if "sigma_s" in main else None

    if sweep_raw is not None:
        lo = _as_float(sweep_raw, "lo") if "lo" in sweep_raw else _raise_missing("lo")
        hi = _as_float(sweep_raw, "hi") if "hi" in sweep_raw else _raise_missing("hi")
        points = _as_int(sweep_raw, "points") if "points" in sweep_raw else _raise_missing("points")
        if axis is Axis.DETUNING_OFFSET:
            lo, hi = angular(lo), angular(hi)
        elif axis is Axis.AMPLITUDE_SCALE and amplitude_mode is AmplitudeMode.ADDITIVE:
            lo, hi = angular(lo), angular(hi)
        try:
            sweep_spec = SweepSpec(
                scenario=scenario,
                protocols=tuple(protocols),
                axis=axis,
                lo=lo,
                hi=hi,
                points=points,
                params=params,
                delta_m=delta_m,
                durations=durations,
                steps=steps,
                method=method,
                amplitude_mode=amplitude_mode,
                tau_sep=tau_sep,
                sigma=sigma,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    return RunConfig(
        scenario=scenario,
        protocols=tuple(protocols),
        params=params,
        delta_m=delta_m,
        durations=durations,
        steps=steps,
        method=method,
        amplitude_mode=amplitude_mode,
        tau_sep=tau_sep,
        sigma=sigma,
        sweep=sweep_spec,
        out_dir=main.get("out_dir"),
        compare_points=_as_int(main, "compare_points") if "compare_points" in main else 41,
        compare_amp_lo=_as_float(main, "compare_amp_lo") if "compare_amp_lo" in main else 0.8,
        compare_amp_hi=_as_float(main, "compare_amp_hi") if "compare_amp_hi" in main else 1.2,
        compare_det=angular(_as_float(main, "compare_det_hz")) if "compare_det_hz" in main else None,
        raw={"main": dict(main), "sweep": dict(sweep_raw) if sweep_raw else None},
    )


def _raise_missing(key: str):
    raise ConfigError(f"missing required key: {key}")


def preset_names() -> list[str]:
    root = resources.files("quadsim").joinpath("presets")
    return sorted(p.name[: -len(".cfg")] for p in root.iterdir() if p.name.endswith(".cfg"))


def load_config(path_or_preset: str | Path) -> RunConfig:
    """Load a config from a file path, or by bundled preset name."""
    path = Path(path_or_preset)
    if not path.exists() and path.name == str(path_or_preset):
        candidate = resources.files("quadsim").joinpath("presets", f"{path_or_preset}.cfg")
        if candidate.is_file():
            return load_config_text(candidate.read_text(encoding="utf-8"))
        raise ConfigError(
            f"config not found: {path_or_preset!r} (no such file or bundled preset; "
            f"presets: {', '.join(preset_names())})"
        )
    if not path.is_file():
        raise ConfigError(f"config not found: {path_or_preset!r}")
    return load_config_text(path.read_text(encoding="utf-8"))
