"""Run configuration: nested sections, plain-text format, presets, hashing.

The on-disk format is one ``section.key = value`` per line (``#`` comments).
Unknown keys are rejected with the exact path. The config hash covers every
section key (sorted, canonical formatting) but not the seed or the output
directory, so (config hash, seed) identifies a run's numerics.
"""

import hashlib
from dataclasses import asdict, dataclass, field, fields

from ..errors import ConfigError

PRESETS = ("desk", "paper-shape")
STAGES = (
    "gen-data",
    "pretrain",
    "distill",
    "eval-dynamics",
    "analogies",
    "gen-skills",
    "report",
)


@dataclass
class SynthworldSection:
    demo_count: int = 200
    robot_count: int = 200
    frames: int = 40
    frame_dim: int = 16
    vocab: int = 32
    token_max: int = 24
    demo_motifs_min: int = 2
    demo_motifs_max: int = 4
    robot_motifs_min: int = 2
    robot_motifs_max: int = 3
    horizon: int = 60
    ctrl_noise: float = 0.05
    jitter: float = 0.08
    probe_count: int = 50
    eval_fraction: float = 0.2


@dataclass
class BackboneSection:
    event_count: int = 4
    event_dim: int = 32
    token_dim: int = 16
    width: int = 32
    depth: int = 2
    heads: int = 2
    epochs: int = 30
    batch_size: int = 16
    lr: float = 1e-3
    alpha: float = 1.0
    beta: float = 1.0
    gamma: float = 0.1
    var_floor: float = 1e-4


@dataclass
class HomomorphismSection:
    width: int = 32
    depth: int = 1
    heads: int = 2
    epochs: int = 30
    batch_size: int = 16
    lr: float = 1e-3
    gamma: float = 0.1
    align_weight: float = 1.0


@dataclass
class DynamicsSection:
    hidden: int = 64
    layers: int = 2
    lr: float = 1e-3
    batch_size: int = 256
    ensemble_size: int = 5
    seeds: int = 3
    epochs_list: list = field(default_factory=lambda: [1, 5, 10])
    horizons: list = field(default_factory=lambda: [2, 5, "full"])
    max_windows: int = 4


@dataclass
class EvalkitSection:
    n_skills: int = 12
    skill_gamma: float = 0.1
    retrieval_metric: str = "cosine"
    embed_method: str = "pca"
    save_plots: bool = False


@dataclass
class RunConfig:
    seed: int = 0
    out: str = "runs/desk"
    preset: str = "desk"
    synthworld: SynthworldSection = field(default_factory=SynthworldSection)
    backbone: BackboneSection = field(default_factory=BackboneSection)
    homomorphism: HomomorphismSection = field(default_factory=HomomorphismSection)
    dynamics: DynamicsSection = field(default_factory=DynamicsSection)
    evalkit: EvalkitSection = field(default_factory=EvalkitSection)

    SECTIONS = ("synthworld", "backbone", "homomorphism", "dynamics", "evalkit")

    def validate(self) -> "RunConfig":
        if self.preset not in PRESETS:
            raise ConfigError(f"unknown preset {self.preset!r}; expected {PRESETS}")
        if self.synthworld.demo_motifs_max > self.backbone.event_count:
            raise ConfigError(
                "synthworld.demo_motifs_max exceeds backbone.event_count"
            )
        if self.homomorphism.epochs < max(self.dynamics.epochs_list, default=0):
            raise ConfigError(
                "homomorphism.epochs must cover max(dynamics.epochs_list)"
            )
        for h in self.dynamics.horizons:
            if h != "full" and int(h) >= self.synthworld.horizon:
                raise ConfigError(
                    f"dynamics horizon {h} must be < synthworld.horizon"
                )
        if self.dynamics.seeds < 1:
            raise ConfigError("dynamics.seeds must be >= 1")
        return self


def paper_shape(config: RunConfig) -> RunConfig:
    """Full-scale reference shape; constructible, not sized for a laptop."""
    config.preset = "paper-shape"
    config.synthworld.frames = 200
    config.synthworld.horizon = 180
    config.backbone.event_count = 16
    config.backbone.event_dim = 768
    config.backbone.width = 768
    config.backbone.depth = 8
    config.backbone.heads = 8
    config.backbone.epochs = 100
    config.backbone.batch_size = 128
    config.backbone.lr = 1e-5
    config.homomorphism.width = 768
    config.homomorphism.depth = 4
    config.homomorphism.heads = 8
    config.homomorphism.batch_size = 32
    config.homomorphism.lr = 1e-5
    config.synthworld.demo_motifs_max = 4
    return config


def default_config(preset: str = "desk") -> RunConfig:
    cfg = RunConfig()
    if preset == "paper-shape":
        cfg = paper_shape(cfg)
    elif preset != "desk":
        raise ConfigError(f"unknown preset {preset!r}; expected {PRESETS}")
    return cfg


def _known_keys(cfg: RunConfig) -> set[str]:
    keys = {"seed", "out"}
    for section in RunConfig.SECTIONS:
        for f in fields(getattr(cfg, section)):
            keys.add(f"{section}.{f.name}")
    return keys


def _parse_value(text: str):
    text = text.strip()
    if "," in text:
        return [_parse_value(part) for part in text.split(",")]
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


def _assign(cfg: RunConfig, key: str, value) -> None:
    if key == "seed":
        cfg.seed = int(value)
        return
    if key == "out":
        cfg.out = str(value)
        return
    section_name, _, field_name = key.partition(".")
    section = getattr(cfg, section_name)
    current = getattr(section, field_name)
    if isinstance(current, bool):
        value = value if isinstance(value, bool) else str(value).lower() == "true"
    elif isinstance(current, int) and not isinstance(value, bool):
        value = int(value)
    elif isinstance(current, float):
        value = float(value)
    elif isinstance(current, list) and not isinstance(value, list):
        value = [value]
    setattr(section, field_name, value)


def apply_overrides(cfg: RunConfig, pairs: dict) -> RunConfig:
    known = _known_keys(cfg)
    for key, value in pairs.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
        _assign(cfg, key, value)
    return cfg


def parse_config_text(text: str, cfg: RunConfig) -> RunConfig:
    pairs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        pairs[key.strip()] = _parse_value(value)
    return apply_overrides(cfg, pairs)


def load_config(
    path: str | None = None, preset: str = "desk", seed=None, out=None
) -> RunConfig:
    cfg = default_config(preset)
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            parse_config_text(fh.read(), cfg)
    if seed is not None:
        cfg.seed = int(seed)
    if out is not None:
        cfg.out = str(out)
    return cfg.validate()


def _format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, list):
        return ",".join(_format_value(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def config_text(cfg: RunConfig, include_run_keys: bool = True) -> str:
    lines = []
    if include_run_keys:
        lines.append(f"seed = {cfg.seed}")
    for section in RunConfig.SECTIONS:
        data = asdict(getattr(cfg, section))
        for key in sorted(data):
            lines.append(f"{section}.{key} = {_format_value(data[key])}")
    return "\n".join(lines) + "\n"


def config_hash(cfg: RunConfig) -> str:
    canonical = config_text(cfg, include_run_keys=False)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]
