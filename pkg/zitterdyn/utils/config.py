"""
Run configuration.

A RunConfig holds one group per subcommand. It is loaded from a flat
``key = value`` file with one section per group, then overridden by
command-line flags; ``to_dict()`` is what the run manifests record.

Example file::

    [model]
    unit_mode = dimensionless

    [spectrum]
    betas = 0, 0.3, 0.6
    box = 0,12,-60,60
    grid_density = 200
"""

import configparser
import logging
from dataclasses import asdict, dataclass, field, fields, replace

from ..models.constants import UNIT_MODES
from .errors import ConfigError

logger = logging.getLogger("Zitterdyn.config")

SEED_FAMILIES = ("uniform", "pulse", "mode")


@dataclass(frozen=True)
class ModelConfig:
    d: float = 1.0
    unit_mode: str = "dimensionless"


@dataclass(frozen=True)
class SimulateConfig:
    """Times are in delay intervals gamma d / c of the seed velocity."""
    beta: float = 0.3
    seed_family: str = "uniform"
    amplitude: float = 1e-6
    width: float = 0.08
    seed_delays: float = 2.0
    delays: float = 50.0
    grid_step: float = None
    mode_index: int = 1
    seed_file: str = None


@dataclass(frozen=True)
class SpectrumConfig:
    betas: tuple = (0.0,)
    box: str = "0,12,-60,60"
    grid_density: int = 200


@dataclass(frozen=True)
class EnergyConfig:
    betas: tuple = (0.0, 0.3, 0.6, 0.9)
    bdots: tuple = (0.0, 0.05, 0.1, 0.2)
    n_terms: int = 40


@dataclass(frozen=True)
class RenderConfig:
    beta: float = 0.0
    box: str = "-15,15,-15,15"
    resolution: int = 800
    roots: str = None


@dataclass(frozen=True)
class OutputConfig:
    out: str = None
    threads: int = None


@dataclass(frozen=True)
class RunConfig:
    model: ModelConfig = field(default_factory=ModelConfig)
    simulate: SimulateConfig = field(default_factory=SimulateConfig)
    spectrum: SpectrumConfig = field(default_factory=SpectrumConfig)
    energy: EnergyConfig = field(default_factory=EnergyConfig)
    render: RenderConfig = field(default_factory=RenderConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    seed: int = 0

    def to_dict(self):
        data = asdict(self)
        for group in data.values():
            if isinstance(group, dict):
                for key, value in group.items():
                    if isinstance(value, tuple):
                        group[key] = list(value)
        return data

    def with_group(self, name, **changes):
        """Copy with some fields of one group replaced; None values are ignored."""
        changes = {k: v for k, v in changes.items() if v is not None}
        if not changes:
            return self
        return replace(self, **{name: replace(getattr(self, name), **changes)})

    def validate(self):
        if self.model.unit_mode not in UNIT_MODES:
            raise ConfigError(f"Unknown unit mode {self.model.unit_mode!r}", unit_mode=self.model.unit_mode)
        if self.simulate.seed_family not in SEED_FAMILIES:
            raise ConfigError(f"Unknown seed family {self.simulate.seed_family!r}",
                              seed_family=self.simulate.seed_family, choices=list(SEED_FAMILIES))
        if self.spectrum.grid_density < 2:
            raise ConfigError("grid_density must be at least 2", grid_density=self.spectrum.grid_density)
        if self.energy.n_terms < 1:
            raise ConfigError("n_terms must be at least 1", n_terms=self.energy.n_terms)
        if self.render.resolution < 1:
            raise ConfigError("resolution must be at least 1", resolution=self.render.resolution)
        return self


def parse_float_list(text):
    try:
        return tuple(float(part) for part in str(text).split(",") if part.strip())
    except ValueError:
        raise ConfigError(f"Expected a comma-separated list of numbers, got {text!r}", value=text) from None


def _coerce(group_cls, key, raw):
    types = {f.name: f.default for f in fields(group_cls)}
    if key not in types:
        raise ConfigError(f"Unknown key {key!r} in section [{_section_name(group_cls)}]", key=key)
    default = types[key]
    try:
        if isinstance(default, tuple):
            return parse_float_list(raw)
        if isinstance(default, bool):
            return raw.strip().lower() in ("1", "true", "yes", "on")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        if key in ("grid_step",):
            return float(raw)
        if key in ("threads",):
            return int(raw)
    except ValueError:
        raise ConfigError(f"Bad value {raw!r} for {key}", key=key, value=raw) from None
    return raw.strip()


_SECTIONS = {
    "model": ModelConfig,
    "simulate": SimulateConfig,
    "spectrum": SpectrumConfig,
    "energy": EnergyConfig,
    "render": RenderConfig,
    "output": OutputConfig,
}


def _section_name(group_cls):
    return next(name for name, cls in _SECTIONS.items() if cls is group_cls)


def load_config(path=None):
    """
    Load a RunConfig from a config file, or the defaults when path is None.

    Raises:
        ConfigError: unreadable file, unknown section or key, bad value
    """
    config = RunConfig()
    if path is None:
        return config

    parser = configparser.ConfigParser()
    try:
        with open(path) as handle:
            parser.read_file(handle)
    except (OSError, configparser.Error) as e:
        raise ConfigError(f"Cannot read config file {path}: {e}", path=str(path)) from e

    for section in parser.sections():
        if section == "run":
            for key, raw in parser.items(section):
                if key != "seed":
                    raise ConfigError(f"Unknown key {key!r} in section [run]", key=key)
                try:
                    config = replace(config, seed=int(raw))
                except ValueError:
                    raise ConfigError(f"Bad value {raw!r} for seed", key=key, value=raw) from None
            continue
        if section not in _SECTIONS:
            raise ConfigError(f"Unknown config section [{section}]", section=section)
        group_cls = _SECTIONS[section]
        values = {key: _coerce(group_cls, key, raw) for key, raw in parser.items(section)}
        config = replace(config, **{section: replace(getattr(config, section), **values)})

    logger.info(f"Loaded configuration from {path}")
    return config.validate()
