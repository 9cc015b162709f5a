import io
import logging
from dataclasses import fields, replace
from pathlib import Path

from dotenv.parser import parse_stream
from rest_framework import serializers

from common import error_codes
from common.exceptions import ConfigParseError

from .models import ChannelParams, SystemConfig, TaskClassParams
from .serializers import SystemConfigSerializer
from .validators import raise_for_report, validate

logger = logging.getLogger(__name__)

TASK_FIELDS = tuple(f.name for f in fields(TaskClassParams))
CHANNEL_FIELDS = tuple(f.name for f in fields(ChannelParams))
TOP_LEVEL_FIELDS = ("energy_rate", "sim_slots", "rng_seed")

# keys given in dB, converted to linear on load
DECIBEL_KEYS = {
    "channel.noise_power_db": "channel.noise_power",
    "channel.snr_threshold_db": "channel.snr_threshold",
}


def canonical_key(key):
    """Map accepted spellings onto ``section.field`` (or a top-level name)."""
    key = key.strip().lower()
    if key in ("capacity", "compute.capacity"):
        return "compute.capacity"
    for name in TASK_FIELDS:
        for index in (1, 2):
            if key == f"{name}_{index}":
                return f"task{index}.{name}"
    for name in ("noise_power_db", "snr_threshold_db"):
        if key == name:
            return f"channel.{name}"
    return key


def is_known(key):
    section, _, name = key.partition(".")
    if not name:
        return section in TOP_LEVEL_FIELDS
    if section in ("task1", "task2"):
        return name in TASK_FIELDS
    if section == "channel":
        return name in CHANNEL_FIELDS or key in DECIBEL_KEYS
    return key == "compute.capacity"


def field_for(key):
    root = SystemConfigSerializer()
    section, _, name = key.partition(".")
    if not name:
        return root.fields[section]
    if key in DECIBEL_KEYS:
        return serializers.FloatField()
    return root.fields[section].fields[name]


def convert(key, raw, line):
    if key == "energy_rate" and raw.strip().lower() in ("", "none", "null"):
        return None
    try:
        value = field_for(key).to_internal_value(raw.strip())
    except serializers.ValidationError as exc:
        detail = "; ".join(str(item) for item in exc.detail)
        raise ConfigParseError(
            error_codes.CONFIG_BAD_VALUE.format(line=line, key=key, detail=detail),
            line=line,
            key=key,
        ) from exc
    if key in DECIBEL_KEYS:
        return 10.0 ** (value / 10.0)
    return value


def parse_text(text):
    """Parse key=value text into ``{canonical_key: typed value}``."""
    values = {}
    for binding in parse_stream(io.StringIO(text)):
        line = binding.original.line
        if binding.error or (binding.key is not None and binding.value is None):
            raise ConfigParseError(
                error_codes.CONFIG_LINE_NOT_PARSED.format(
                    line=line, text=binding.original.string.strip()
                ),
                line=line,
            )
        if binding.key is None:
            continue
        key = canonical_key(binding.key)
        if not is_known(key):
            raise ConfigParseError(
                error_codes.CONFIG_UNKNOWN_KEY.format(line=line, key=binding.key),
                line=line,
                key=binding.key,
            )
        value = convert(key, binding.value, line)
        values[DECIBEL_KEYS.get(key, key)] = value
    return values


def build_config(values, base=None):
    config = base or SystemConfig()
    sections = {}
    top = {}
    for key, value in values.items():
        section, _, name = key.partition(".")
        if name:
            sections.setdefault(section, {})[name] = value
        else:
            top[key] = value
    changes = dict(top)
    for section, updates in sections.items():
        changes[section] = replace(getattr(config, section), **updates)
    return replace(config, **changes)


def loads(text, strict=True, base=None):
    config = build_config(parse_text(text), base=base)
    if strict:
        raise_for_report(validate(config))
    return config


def load(path, strict=True):
    """Read a config file; omitted keys keep the default values."""
    path = Path(path)
    if not path.exists():
        raise ConfigParseError(error_codes.CONFIG_FILE_NOT_FOUND.format(path=path))
    logger.debug("loading config from %s", path)
    return loads(path.read_text(encoding="utf-8"), strict=strict)


def dumps(config):
    """Canonical text for ``config``; ``loads(dumps(c)) == c``."""
    lines = []
    for section in ("task1", "task2"):
        task = getattr(config, section)
        for name in TASK_FIELDS:
            lines.append(f"{section}.{name} = {getattr(task, name)!r}")
    for name in CHANNEL_FIELDS:
        value = getattr(config.channel, name)
        if isinstance(value, bool):
            value = "true" if value else "false"
        else:
            value = repr(value)
        lines.append(f"channel.{name} = {value}")
    lines.append(f"capacity = {config.capacity!r}")
    energy = "none" if config.energy_rate is None else repr(config.energy_rate)
    lines.append(f"energy_rate = {energy}")
    lines.append(f"sim_slots = {config.sim_slots!r}")
    lines.append(f"rng_seed = {config.rng_seed!r}")
    return "\n".join(lines) + "\n"


def save(config, path):
    Path(path).write_text(dumps(config), encoding="utf-8")
