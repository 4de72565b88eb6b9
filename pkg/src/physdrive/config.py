"""Run configuration: one serializable object wiring every pipeline.

A run is fully determined by (RunConfig, bundled data files). All seeds are
explicit integers; nothing falls back to wall-clock time. Paths set to
"builtin" resolve to the data files shipped inside the package.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import ConfigError

_DATA_DIR = Path(__file__).parent / "data"


@dataclass
class ArchConfig:
    """Network shape. The paper-style preset deepens the fusion stack."""

    d: int = 64          # embedding width shared by tokens, physics embedding, GRU
    d_hid: int = 128     # physics encoder hidden width
    d_ff: int = 256      # fusion feed-forward inner width
    layers: int = 2      # fusion blocks
    heads: int = 8
    d_scene: int = 16    # raw privileged feature width, before the frozen projection

    def validate(self) -> None:
        if self.d % self.heads != 0:
            raise ConfigError(f"d={self.d} not divisible by heads={self.heads}")
        for name in ("d", "d_hid", "d_ff", "layers", "heads", "d_scene"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"arch.{name} must be positive")


def arch_preset(name: str) -> ArchConfig:
    """'desk' keeps runtimes small; 'deep' matches the wider published shape."""
    if name == "desk":
        return ArchConfig()
    if name == "deep":
        return ArchConfig(d_ff=512, layers=4)
    raise ConfigError(f"unknown arch preset {name!r} (expected 'desk' or 'deep')")


VARIANTS = ("full", "concat_only", "no_phys_encoder", "naive")


@dataclass
class TrainConfig:
    lr: float = 1e-4
    batch_size: int = 64
    epochs: int = 30
    seed: int = 2002
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    clip_norm: float = 1.0
    lr_decay: str = "none"       # "none" or "linear" (to zero over the run)
    variant: str = "full"
    finetune_lr_scale: float = 0.3
    arch: ArchConfig = field(default_factory=ArchConfig)

    def validate(self) -> None:
        if self.lr < 0 or self.batch_size <= 0 or self.epochs < 0:
            raise ConfigError("train: lr >= 0, batch_size > 0, epochs >= 0 required")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1):
            raise ConfigError("train: moment coefficients must lie in [0, 1)")
        if self.variant not in VARIANTS:
            raise ConfigError(f"unknown variant {self.variant!r}")
        if self.lr_decay not in ("none", "linear"):
            raise ConfigError(f"unknown lr_decay {self.lr_decay!r}")
        self.arch.validate()


@dataclass
class PidGains:
    """Fixed low-level tracking gains. Never trained, identical for every vehicle."""

    kp_ang: float = 1.1
    kd_ang: float = 2.4
    kp_speed: float = 0.55
    ki_speed: float = 0.04
    brake_gain: float = 0.5
    brake_deadband: float = 0.25   # m/s of overspeed tolerated before braking
    stop_speed: float = 0.25       # target speeds below this mean "come to a halt"


@dataclass
class SimConfig:
    """World and vehicle-model constants shared by data generation and evaluation."""

    dt: float = 0.05               # simulation tick, seconds
    dt_wp: float = 0.25            # waypoint spacing in time; 8 waypoints = 2 s horizon
    idle_rpm: float = 800.0
    drivetrain_eff: float = 0.9
    brake_force_max: float = 13000.0   # N at brake=1, same actuator on every vehicle
    drag_coef: float = 0.9             # N per (m/s)^2
    rolling_force: float = 220.0       # N, constant (keeps force model mass-independent)
    turn_radius_factor: float = 1.25   # min turn radius = factor * vehicle length
    lat_accel_base: float = 3.6        # comfort lateral accel for a reference-mass vehicle
    lat_accel_ref_mass: float = 1400.0
    cruise_speed: float = 10.0

    # expert planning
    brake_safety: float = 0.6      # planned decel = safety * (brake_force_max / mass)
    accel_plan_frac: float = 0.5   # planned accel = frac * launch force / mass, clamped
    accel_plan_min: float = 0.5
    accel_plan_max: float = 2.2
    plan_ds: float = 0.5           # arc grid for speed profiles, meters
    plan_horizon: float = 90.0
    stop_offset: float = 1.5       # plan v=0 this far before stop lines / signals
    signal_commit_margin: float = 1.0   # s of spare green required to drive through
    follow_gap: float = 8.0
    min_gap: float = 4.5
    ped_caution_dist: float = 45.0
    ped_caution_margin: float = 8.0

    # actors
    ped_trigger_dist: float = 35.0
    ped_walk_speed: float = 1.15
    ped_lat_start: float = 4.0
    ped_radius: float = 0.35
    actor_vehicle_radius: float = 1.0

    # events
    stop_window: float = 5.0
    stop_speed: float = 0.1
    stuck_timeout: float = 30.0
    stuck_speed: float = 0.1
    block_signal_dist: float = 15.0
    block_ped_dist: float = 14.0
    block_lead_dist: float = 12.0
    block_stop_dist: float = 8.0

    # tokenizer / target point
    target_lookahead: float = 20.0
    lookahead_max: float = 35.0
    feat_dist_clip: float = 60.0
    feat_obs_clip: float = 40.0
    horizon_speed_floor: float = 1.0
    offroute_lane_widths: float = 5.0

    # episode budget
    time_budget_base: float = 60.0
    time_budget_per_m: float = 0.5

    pid: PidGains = field(default_factory=PidGains)

    @property
    def frame_stride(self) -> int:
        return max(1, round(self.dt_wp / self.dt))

    def validate(self) -> None:
        if not (0 < self.dt <= 0.1):
            raise ConfigError("sim.dt must lie in (0, 0.1]")
        if self.dt_wp < self.dt:
            raise ConfigError("sim.dt_wp must be >= sim.dt")
        for name in ("brake_force_max", "cruise_speed", "stuck_timeout", "plan_ds"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"sim.{name} must be positive")


@dataclass
class RunConfig:
    # paths; "builtin" resolves to packaged data files
    catalogue: str = "builtin"
    routes: str = "builtin"
    out_dir: str = "runs"

    # explicit seeds, one per pipeline stage
    data_seed: int = 1001
    train_seed: int = 2002
    backbone_seed: int = 7
    eval_seed: int = 3003
    sampling_seed: int = 4004

    # selections; empty list means "all from the bundled file"
    train_vehicles: list = field(default_factory=list)
    eval_vehicles: list = field(default_factory=list)
    train_routes: list = field(default_factory=list)
    eval_routes: list = field(default_factory=list)

    n_zero_shot: int = 5
    few_shot_fraction: float = 0.03
    few_shot_vehicle: str = "hauler_xl"
    val_fraction: float = 0.2
    jobs: int = 1
    arch_preset: str = "desk"

    train: TrainConfig = field(default_factory=TrainConfig)
    sim: SimConfig = field(default_factory=SimConfig)

    def catalogue_path(self) -> Path:
        return _resolve(self.catalogue, "catalogue.yaml")

    def routes_path(self) -> Path:
        return _resolve(self.routes, "routes.yaml")

    def validate(self) -> None:
        for p, what in ((self.catalogue_path(), "catalogue"), (self.routes_path(), "routes")):
            if not p.is_file():
                raise ConfigError(f"{what} file not found: {p}")
        if not (0 < self.val_fraction < 0.5):
            raise ConfigError("val_fraction must lie in (0, 0.5)")
        if not (0 < self.few_shot_fraction <= 1):
            raise ConfigError("few_shot_fraction must lie in (0, 1]")
        if self.n_zero_shot <= 0 or self.jobs <= 0:
            raise ConfigError("n_zero_shot and jobs must be positive")
        if self.arch_preset not in ("desk", "deep"):
            raise ConfigError(f"unknown arch_preset {self.arch_preset!r}")
        self.train.validate()
        self.sim.validate()


def _resolve(value: str, builtin_name: str) -> Path:
    if value == "builtin":
        return _DATA_DIR / builtin_name
    return Path(value)


def _from_dict(cls, data: dict):
    kwargs = {}
    fields = {f.name: f for f in dataclasses.fields(cls)}
    for key, value in data.items():
        if key not in fields:
            raise ConfigError(f"unknown config key {key!r} for {cls.__name__}")
        ftype = fields[key].type
        if isinstance(value, dict) and ftype in ("TrainConfig", "SimConfig", "ArchConfig", "PidGains"):
            value = _from_dict(globals()[ftype], value)
        kwargs[key] = value
    return cls(**kwargs)


def load_config(path: str | Path | None = None) -> RunConfig:
    """Load a RunConfig from YAML, or the defaults when path is None."""
    if path is None:
        return RunConfig()
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    raw = yaml.safe_load(p.read_text()) or {}
    if not isinstance(raw, dict):
        raise ConfigError(f"config root must be a mapping: {p}")
    return _from_dict(RunConfig, raw)


def save_config(cfg: RunConfig, path: str | Path) -> None:
    Path(path).write_text(yaml.safe_dump(dataclasses.asdict(cfg), sort_keys=True))


def iter_keys(cfg: RunConfig | None = None, prefix: str = "", obj=None):
    """Yield (dotted_key, default_value) pairs over every leaf config field."""
    obj = obj if obj is not None else (cfg or RunConfig())
    for f in dataclasses.fields(obj):
        value = getattr(obj, f.name)
        key = f"{prefix}{f.name}"
        if dataclasses.is_dataclass(value):
            yield from iter_keys(prefix=f"{key}.", obj=value)
        else:
            yield key, value


def apply_overrides(cfg: RunConfig, overrides: list[str]) -> RunConfig:
    """Apply 'dotted.key=value' overrides in place; values parsed as YAML."""
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        dotted, raw = item.split("=", 1)
        parts = dotted.strip().split(".")
        obj = cfg
        for part in parts[:-1]:
            if not hasattr(obj, part):
                raise ConfigError(f"unknown config key {dotted!r}")
            obj = getattr(obj, part)
            if not dataclasses.is_dataclass(obj):
                raise ConfigError(f"{dotted!r} does not address a config field")
        leaf = parts[-1]
        if not hasattr(obj, leaf):
            raise ConfigError(f"unknown config key {dotted!r}")
        current = getattr(obj, leaf)
        if dataclasses.is_dataclass(current):
            raise ConfigError(f"{dotted!r} is a section, not a value")
        value = yaml.safe_load(raw)
        if isinstance(current, float) and isinstance(value, int):
            value = float(value)
        if current is not None and value is not None and not isinstance(value, type(current)):
            raise ConfigError(
                f"override {dotted!r}: expected {type(current).__name__}, got {type(value).__name__}"
            )
        setattr(obj, leaf, value)
    return cfg
