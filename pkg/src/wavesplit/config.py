"""Experiment configuration: flat ``key = value`` files with dotted keys.

One config describes one study.  Unknown keys are rejected; parsing and
serialization round-trip exactly (floats via repr).  See docs/formats.md
for the schema and configs/ for the benchmark studies.
"""

import hashlib
from dataclasses import dataclass, field, replace

from wavesplit.errors import ConfigError
from wavesplit.families import TAGS

STUDIES = ("decouple", "residual", "solve")
SWEEP_RULES = ("eps_eq_delta_sq", "eps_eq_delta", "explicit")
V0_SHAPES = ("gaussian", "zero", "minus_u0")
IB_VELOCITY_MODES = ("derivative", "model")


@dataclass(frozen=True)
class ProfileSpec:
    shape: str = "gaussian"
    amplitude: float = 1.0
    width: float = 4.0
    center: float = 0.0


@dataclass(frozen=True)
class ExperimentConfig:
    label: str = "study"
    study: str = "decouple"
    half_length: float = 64.0
    n_points: int = 2048
    u0: ProfileSpec = field(default_factory=ProfileSpec)
    v0: ProfileSpec = field(default_factory=lambda: ProfileSpec(amplitude=0.5, width=6.0))
    families: tuple = ("CH",)
    sweep_rule: str = "eps_eq_delta_sq"
    deltas: tuple = (0.05, 0.1, 0.2, 0.4)
    epsilons: tuple = ()
    sobolev_indices: tuple = (2.0,)
    horizon: float = 10.0
    snapshots: int = 11
    dt: float | None = None
    ib_velocity: str = "derivative"
    solve_equation: str = "IB"
    export_snapshots: bool = False
    out_dir: str = "out"
    seed: int = 0
    checks: dict = field(default_factory=dict)

    def validate(self) -> "ExperimentConfig":
        if self.study not in STUDIES:
            raise ConfigError(f"study must be one of {STUDIES}")
        if self.sweep_rule not in SWEEP_RULES:
            raise ConfigError(f"sweep.rule must be one of {SWEEP_RULES}")
        if self.u0.shape not in ("gaussian", "zero"):
            raise ConfigError(f"profile.shape {self.u0.shape!r} not supported")
        if self.v0.shape not in V0_SHAPES:
            raise ConfigError(f"v0.shape {self.v0.shape!r} not supported")
        if self.ib_velocity not in IB_VELOCITY_MODES:
            raise ConfigError(f"ib.velocity must be one of {IB_VELOCITY_MODES}")
        for tag in self.families:
            if tag not in TAGS:
                raise ConfigError(f"unknown family {tag!r}")
        if self.snapshots < 2:
            raise ConfigError("time.snapshots must be >= 2")
        self.sweep_points()
        return self

    def sweep_points(self) -> list:
        """(epsilon, delta) pairs of the sweep, validated for the regime."""
        if self.sweep_rule == "explicit":
            if len(self.epsilons) != len(self.deltas):
                raise ConfigError("explicit sweep needs matching epsilon/delta lists")
            pairs = list(zip(self.epsilons, self.deltas))
        elif self.sweep_rule == "eps_eq_delta":
            pairs = [(d, d) for d in self.deltas]
        else:
            pairs = [(d * d, d) for d in self.deltas]
        for eps, delta in pairs:
            if not 0.0 < eps <= delta <= 1.0:
                raise ConfigError(
                    f"sweep point (eps={eps}, delta={delta}) outside 0 < eps <= delta <= 1"
                )
            if "KDV" in self.families and abs(eps - delta * delta) > 1e-9 * delta * delta:
                raise ConfigError(
                    "KDV sweeps require eps = delta^2 "
                    f"(got eps={eps}, delta={delta})"
                )
        return pairs


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _fmt_list(values) -> str:
    return ", ".join(_fmt(v) for v in values)


def serialize(cfg: ExperimentConfig) -> str:
    lines = [
        f"label = {cfg.label}",
        f"study = {cfg.study}",
        f"grid.half_length = {_fmt(cfg.half_length)}",
        f"grid.n_points = {cfg.n_points}",
        f"profile.shape = {cfg.u0.shape}",
        f"profile.amplitude = {_fmt(cfg.u0.amplitude)}",
        f"profile.width = {_fmt(cfg.u0.width)}",
        f"profile.center = {_fmt(cfg.u0.center)}",
        f"v0.shape = {cfg.v0.shape}",
        f"v0.amplitude = {_fmt(cfg.v0.amplitude)}",
        f"v0.width = {_fmt(cfg.v0.width)}",
        f"v0.center = {_fmt(cfg.v0.center)}",
        f"families = {_fmt_list(cfg.families)}",
        f"sweep.rule = {cfg.sweep_rule}",
        f"sweep.delta = {_fmt_list(cfg.deltas)}",
        f"sweep.epsilon = {_fmt_list(cfg.epsilons)}",
        f"sobolev.indices = {_fmt_list(cfg.sobolev_indices)}",
        f"time.horizon = {_fmt(cfg.horizon)}",
        f"time.snapshots = {cfg.snapshots}",
        f"time.dt = {'auto' if cfg.dt is None else _fmt(cfg.dt)}",
        f"ib.velocity = {cfg.ib_velocity}",
        f"solve.equation = {cfg.solve_equation}",
        f"output.snapshots = {_fmt(cfg.export_snapshots)}",
        f"output.dir = {cfg.out_dir}",
        f"seed = {cfg.seed}",
    ]
    for name in sorted(cfg.checks):
        for key in sorted(cfg.checks[name]):
            lines.append(f"check.{name}.{key} = {_fmt(cfg.checks[name][key])}")
    return "\n".join(lines) + "\n"


def _parse_floats(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    return tuple(float(tok) for tok in text.split(","))


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def parse(text: str) -> ExperimentConfig:
    cfg = ExperimentConfig()
    u0 = dict(shape="gaussian", amplitude=1.0, width=4.0, center=0.0)
    v0 = dict(shape="gaussian", amplitude=0.5, width=6.0, center=0.0)
    checks: dict = {}
    updates: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        try:
            if key == "label":
                updates["label"] = value
            elif key == "study":
                updates["study"] = value
            elif key == "grid.half_length":
                updates["half_length"] = float(value)
            elif key == "grid.n_points":
                updates["n_points"] = int(value)
            elif key == "profile.shape":
                u0["shape"] = value
            elif key == "profile.amplitude":
                u0["amplitude"] = float(value)
            elif key == "profile.width":
                u0["width"] = float(value)
            elif key == "profile.center":
                u0["center"] = float(value)
            elif key == "v0.shape":
                v0["shape"] = value
            elif key == "v0.amplitude":
                v0["amplitude"] = float(value)
            elif key == "v0.width":
                v0["width"] = float(value)
            elif key == "v0.center":
                v0["center"] = float(value)
            elif key == "families":
                updates["families"] = tuple(tok.strip() for tok in value.split(",") if tok.strip())
            elif key == "sweep.rule":
                updates["sweep_rule"] = value
            elif key == "sweep.delta":
                updates["deltas"] = _parse_floats(value)
            elif key == "sweep.epsilon":
                updates["epsilons"] = _parse_floats(value)
            elif key == "sobolev.indices":
                updates["sobolev_indices"] = _parse_floats(value)
            elif key == "time.horizon":
                updates["horizon"] = float(value)
            elif key == "time.snapshots":
                updates["snapshots"] = int(value)
            elif key == "time.dt":
                updates["dt"] = None if value == "auto" else float(value)
            elif key == "ib.velocity":
                updates["ib_velocity"] = value
            elif key == "solve.equation":
                updates["solve_equation"] = value
            elif key == "output.snapshots":
                updates["export_snapshots"] = _parse_bool(value)
            elif key == "output.dir":
                updates["out_dir"] = value
            elif key == "seed":
                updates["seed"] = int(value)
            elif key.startswith("check."):
                parts = key.split(".")
                if len(parts) != 3:
                    raise ConfigError(f"line {lineno}: check keys are check.<name>.<param>")
                checks.setdefault(parts[1], {})[parts[2]] = float(value)
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from exc
    updates["u0"] = ProfileSpec(**u0)
    updates["v0"] = ProfileSpec(**v0)
    updates["checks"] = checks
    return replace(cfg, **updates).validate()


def load(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse(fh.read())


def config_hash(cfg: ExperimentConfig) -> str:
    return hashlib.sha256(serialize(cfg).encode("utf-8")).hexdigest()
