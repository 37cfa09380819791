"""Landing scenarios: seeded sensor synthesis, fault injection, run driver.

A scenario file is INI-style text::

    [scenario]
    duration = 460
    seed = 7
    loop = open              # open (profile-driven) | closed (FLS-driven)
    profile = linear         # constant | linear | recorded
    altitude = 1800          # start (linear) or level (constant), LSB
    rate = 4                 # descent LSB per tick (linear)
    series = 1800, 1796      # per-tick altitudes (recorded)
    noise_radar = 8          # zero-mean uniform noise sigma, LSB
    noise_lidar = 8
    tilt = 0, 0, 0, 0        # static per-corner offsets, LSB
    margin = 32
    divergence_threshold = 64
    variance_threshold = 1024
    fru_threshold = 16384
    rate_gain = 1
    initial_modes = Landing-Mode
    fir_mode = functional    # functional | timed
    rules = my.rules         # optional, relative to the scenario file

    [injection jam]          # any number of these
    kind = SpectrumJam       # StuckAt | Bias | Dropout | SpectrumJam
    channel = lidar          # radar | lidar
    corners = 0, 1, 2, 3
    start = 100
    duration = 200
    magnitude = 512          # Bias offset or SpectrumJam sigma, LSB

    [external]               # constant FRU input degrees, Q1.15
    UWB-Sensor is Very Noisy = 32768

Unknown sections or keys are rejected.  Noise and injections are expressed in
true-distance LSB; the lidar channel halves after they are applied.
"""
from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import hsdci
from .fru import DEFAULT_THRESHOLD, RuleTable, default_table, read_rules
from .numerics import LIDAR_WIDTH, RADAR_WIDTH, CrispSample, saturate
from .pmu import PmuThresholds
from .system import N_CORNERS, System
from .trace import SystemTrace, TickRecord

KINDS = ("StuckAt", "Bias", "Dropout", "SpectrumJam")
CHANNELS = ("radar", "lidar")
PROFILES = ("constant", "linear", "recorded")
LOOPS = ("open", "closed")


class ScenarioError(ValueError):
    pass


def half_width(sigma: float) -> int:
    """Half-width ``a`` of the integer uniform on [-a, a] whose std is ~sigma."""
    if sigma <= 0:
        return 0
    return round((math.sqrt(1 + 12 * sigma * sigma) - 1) / 2)


@dataclass(frozen=True)
class Injection:
    kind: str
    channel: str
    corners: tuple[int, ...] = (0, 1, 2, 3)
    start: int = 0
    duration: int = 0
    magnitude: int = 0
    name: str = ""

    def active(self, tick: int) -> bool:
        return self.start <= tick < self.start + self.duration


@dataclass(frozen=True)
class ScenarioConfig:
    duration: int = 460
    seed: int = 0
    loop: str = "open"
    profile: str = "linear"
    altitude: int = 1800
    rate: int = 4
    series: tuple[int, ...] = ()
    noise_radar: float = 8.0
    noise_lidar: float = 8.0
    tilt: tuple[int, ...] = (0, 0, 0, 0)
    margin: int = hsdci.DEFAULT_MARGIN
    divergence_threshold: int = 64
    variance_threshold: int = 1024
    fru_threshold: int = DEFAULT_THRESHOLD
    rate_gain: int = 1
    initial_modes: tuple[str, ...] = ("Landing-Mode",)
    fir_mode: str = "functional"
    rules: str | None = None
    injections: tuple[Injection, ...] = ()
    external: tuple[tuple[tuple[str, str], int], ...] = ()

    def __post_init__(self):
        self.validate()

    def validate(self):
        errs = []
        if self.duration < 0:
            errs.append("duration must be >= 0")
        if not 0 <= self.seed < 1 << 64:
            errs.append("seed must fit in 64 bits")
        if self.loop not in LOOPS:
            errs.append(f"loop must be one of {LOOPS}")
        if self.profile not in PROFILES:
            errs.append(f"profile must be one of {PROFILES}")
        if self.profile == "recorded" and len(self.series) < max(self.duration, 1):
            errs.append("recorded series shorter than duration")
        if self.altitude < 0 or self.rate < 0:
            errs.append("altitude and rate must be >= 0")
        if self.noise_radar < 0 or self.noise_lidar < 0:
            errs.append("noise sigma must be >= 0")
        if len(self.tilt) != N_CORNERS:
            errs.append(f"tilt needs {N_CORNERS} values")
        if self.margin < 0:
            errs.append("margin must be >= 0")
        if self.divergence_threshold <= 0 or self.variance_threshold <= 0:
            errs.append("PMU thresholds must be positive")
        if self.fir_mode not in ("functional", "timed"):
            errs.append("fir_mode must be functional or timed")
        for inj in self.injections:
            tag = f"injection {inj.name or inj.kind}"
            if inj.kind not in KINDS:
                errs.append(f"{tag}: kind must be one of {KINDS}")
            if inj.channel not in CHANNELS:
                errs.append(f"{tag}: channel must be radar or lidar")
            if not inj.corners or any(not 0 <= c < N_CORNERS for c in inj.corners):
                errs.append(f"{tag}: corners must lie in 0..3")
            if inj.start < 0 or inj.duration < 0:
                errs.append(f"{tag}: start and duration must be >= 0")
            if inj.start + inj.duration > self.duration:
                errs.append(f"{tag}: window runs past the end of the scenario")
            if inj.kind == "SpectrumJam" and inj.magnitude < 0:
                errs.append(f"{tag}: jam sigma must be >= 0")
        if errs:
            raise ScenarioError("; ".join(errs))

    @property
    def thresholds(self) -> PmuThresholds:
        return PmuThresholds(self.divergence_threshold, self.variance_threshold)

    def with_(self, **changes) -> "ScenarioConfig":
        return replace(self, **changes)

    def profile_altitude(self, tick: int) -> int:
        if self.profile == "constant":
            return self.altitude
        if self.profile == "linear":
            return max(0, self.altitude - self.rate * tick)
        return self.series[min(tick, len(self.series) - 1)]


# -- config files ---------------------------------------------------------

_INT_KEYS = {"duration", "seed", "altitude", "rate", "margin", "divergence_threshold",
             "variance_threshold", "fru_threshold", "rate_gain"}
_FLOAT_KEYS = {"noise_radar", "noise_lidar"}
_STR_KEYS = {"loop", "profile", "fir_mode", "rules"}
_LIST_KEYS = {"series", "tilt"}
_INJ_KEYS = {"kind", "channel", "corners", "start", "duration", "magnitude"}


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.replace(",", " ").split())


def parse_config(text: str, base_dir: Path | None = None) -> ScenarioConfig:
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"),
                                   delimiters=("=",))
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ScenarioError(f"malformed scenario file: {exc}") from exc
    kw: dict = {}
    injections, external = [], []
    for section in cp.sections():
        items = dict(cp.items(section))
        try:
            if section == "scenario":
                for key, val in items.items():
                    if key in _INT_KEYS:
                        kw[key] = int(val)
                    elif key in _FLOAT_KEYS:
                        kw[key] = float(val)
                    elif key in _STR_KEYS:
                        kw[key] = val.strip()
                    elif key in _LIST_KEYS:
                        kw[key] = _ints(val)
                    elif key == "initial_modes":
                        kw[key] = tuple(m for m in val.replace(",", " ").split())
                    else:
                        raise ScenarioError(f"[scenario]: unknown key {key!r}")
            elif section.startswith("injection"):
                unknown = set(items) - _INJ_KEYS
                if unknown:
                    raise ScenarioError(f"[{section}]: unknown key {sorted(unknown)[0]!r}")
                if "kind" not in items or "channel" not in items:
                    raise ScenarioError(f"[{section}]: kind and channel are required")
                injections.append(Injection(
                    kind=items["kind"].strip(), channel=items["channel"].strip().lower(),
                    corners=_ints(items.get("corners", "0 1 2 3")),
                    start=int(items.get("start", 0)),
                    duration=int(items.get("duration", 0)),
                    magnitude=int(items.get("magnitude", 0)),
                    name=section[len("injection"):].strip()))
            elif section == "external":
                for key, val in items.items():
                    signal, sep, qual = key.partition(" is ")
                    if not sep:
                        raise ScenarioError(
                            f"[external]: key {key!r} must read '<Signal> is <Qualifier>'")
                    external.append(((signal.strip(), qual.strip()), int(val)))
            else:
                raise ScenarioError(f"unknown section [{section}]")
        except ValueError as exc:
            if isinstance(exc, ScenarioError):
                raise
            raise ScenarioError(f"[{section}]: {exc}") from exc
    if "rules" in kw and base_dir is not None:
        kw["rules"] = str((base_dir / kw["rules"]).resolve())
    return ScenarioConfig(injections=tuple(injections), external=tuple(external), **kw)


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        text = path.read_text("utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    return parse_config(text, path.parent)


# -- sensor synthesis -----------------------------------------------------

@dataclass(frozen=True)
class SensorFrame:
    tick: int
    radar: tuple[int, ...]  # 11-bit, one per corner
    lidar: tuple[int, ...]  # 10-bit, one per corner

    def samples(self):
        return [(CrispSample(r, RADAR_WIDTH), CrispSample(l, LIDAR_WIDTH))
                for r, l in zip(self.radar, self.lidar)]


class SensorGenerator:
    """Per-tick raw readings for all corners.

    Every (corner, channel) noise source and every injection's jam source has
    its own seeded stream, so an injection never perturbs the noise seen
    anywhere else.  Frames must be requested in tick order (stuck-at faults
    remember the last healthy value).
    """

    def __init__(self, config: ScenarioConfig):
        self.config = config
        n = config.duration
        self._noise = {}
        for c in range(N_CORNERS):
            for ch_i, ch in enumerate(CHANNELS):
                a = half_width(config.noise_radar if ch == "radar" else config.noise_lidar)
                rng = np.random.default_rng([config.seed, 0, c, ch_i])
                self._noise[c, ch] = (rng.integers(-a, a + 1, size=n).tolist()
                                      if a else [0] * n)
        self._jam = {}
        for k, inj in enumerate(config.injections):
            if inj.kind != "SpectrumJam":
                continue
            a = half_width(inj.magnitude)
            for c in inj.corners:
                rng = np.random.default_rng([config.seed, 1, k, c, CHANNELS.index(inj.channel)])
                self._jam[k, c] = rng.integers(-a, a + 1, size=inj.duration).tolist()
        self._held: dict = {}
        self.next_tick = 0

    def _channel(self, tick: int, corner: int, ch: str, true: int) -> int:
        pre = true + self._noise[corner, ch][tick]
        v = pre
        stuck = False
        for k, inj in enumerate(self.config.injections):
            if inj.channel != ch or corner not in inj.corners or not inj.active(tick):
                continue
            if inj.kind == "StuckAt":
                stuck = True
                v = self._held.setdefault((corner, ch), pre)
            elif inj.kind == "Bias":
                v += inj.magnitude
            elif inj.kind == "Dropout":
                v = 0
            else:
                v += self._jam[k, corner][tick - inj.start]
        if not stuck:
            self._held[corner, ch] = pre
        return v

    def frame(self, tick: int, altitude: int) -> SensorFrame:
        if tick != self.next_tick:
            raise ScenarioError(f"frames must be generated in order (wanted {self.next_tick})")
        if altitude < 0:
            raise ScenarioError("altitude must be >= 0")
        radar, lidar = [], []
        for c in range(N_CORNERS):
            true = altitude + self.config.tilt[c]
            radar.append(saturate(self._channel(tick, c, "radar", true), RADAR_WIDTH))
            lidar.append(saturate(self._channel(tick, c, "lidar", true) // 2, LIDAR_WIDTH))
        self.next_tick += 1
        return SensorFrame(tick, tuple(radar), tuple(lidar))


def gen_frame(generator: SensorGenerator, tick: int, altitude: int) -> SensorFrame:
    return generator.frame(tick, altitude)


def integrate_altitude(altitude: int, commands, rate_gain: int = 1) -> int:
    """Scalar descent integrator: mean command (floored) times gain, clamped at 0."""
    step = (sum(commands) * rate_gain) // len(commands)
    return max(0, altitude + step)


# -- driver ---------------------------------------------------------------

def _table_for(config: ScenarioConfig, table: RuleTable | None) -> RuleTable:
    if table is not None:
        return table
    if config.rules:
        return read_rules(config.rules)
    return default_table()


def run_scenario(config: ScenarioConfig, *, table: RuleTable | None = None,
                 parallel: bool = False, tamper=None) -> SystemTrace:
    table = _table_for(config, table)
    gen = SensorGenerator(config)
    external = dict(config.external)
    records = []
    altitude = config.profile_altitude(0)
    with System(table, margin=config.margin, thresholds=config.thresholds,
                parallel=parallel, initial_modes=config.initial_modes,
                fir_mode=config.fir_mode, fru_threshold=config.fru_threshold,
                tamper=tamper) as system:
        for t in range(config.duration):
            if config.loop == "open":
                altitude = config.profile_altitude(t)
            frame = gen.frame(t, altitude)
            out = system.step(frame.samples(), external)
            records.append(TickRecord(t, altitude, frame, out))
            if config.loop == "closed":
                altitude = integrate_altitude(
                    altitude, [o.command for o in out.corners], config.rate_gain)
    return SystemTrace(config, records, final_altitude=altitude)
