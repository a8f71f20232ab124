"""
Flat ``key = value`` configuration files.

One setting per line, ``#`` or ``;`` starts a comment. Nested fields use
dotted names. Every key is optional::

    scheme = all              # sts | walsh | gold | zc | all
    num_signals = 2
    snr_db_list = -10, -8, 0  # or snr_start / snr_stop / snr_step
    trials_per_point = 20000
    master_seed = 7
    codebook_size = 64
    sts.S = 71
    sts.K = 1
    sts.N = 14
    sts.offset = 1
    channel.profile = epa     # epa | flat
    channel.doppler_hz = 5.56
    channel.num_sinusoids = 16
    channel.power_offset_db = 0
    ofdm.fft_size = 128
    ofdm.subcarrier_spacing = 15000
    ofdm.cp_lengths = 10, 9, 9, 9, 9, 9, 9, 10, 9, 9, 9, 9, 9, 9
    workers = 1
    batch_size = 1000
"""

from __future__ import annotations

import configparser
from dataclasses import replace
from pathlib import Path

import numpy as np

from .grid import OfdmParams
from .sim import SCHEMES, ChannelParams, ConfigError, SimConfig, StsParams


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.replace(",", " ").split())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.replace(",", " ").split())


# key -> (parser, target): target is a SimConfig field or "group.field"
KEYS = {
    "scheme": str.strip,
    "num_signals": int,
    "snr_db_list": _floats,
    "snr_start": float,
    "snr_stop": float,
    "snr_step": float,
    "trials_per_point": int,
    "master_seed": int,
    "codebook_size": int,
    "workers": int,
    "batch_size": int,
    "sts.S": int,
    "sts.K": int,
    "sts.N": int,
    "sts.offset": int,
    "channel.profile": str.strip,
    "channel.doppler_hz": float,
    "channel.num_sinusoids": int,
    "channel.power_offset_db": float,
    "ofdm.fft_size": int,
    "ofdm.subcarrier_spacing": float,
    "ofdm.cp_lengths": _ints,
}

_GROUPS = {"sts": StsParams, "channel": ChannelParams, "ofdm": OfdmParams}


def parse_config_text(text: str, source: str = "<string>") -> dict:
    """Typed settings from config text; unknown keys and bad values raise :class:`ConfigError`."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"), interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string("[config]\n" + text, source=source)
    except configparser.Error as e:
        raise ConfigError(f"{source}: {e}") from None
    out = {}
    for key, raw in parser["config"].items():
        if key not in KEYS:
            raise ConfigError(f"{source}: unknown key {key!r}")
        try:
            out[key] = KEYS[key](raw)
        except ValueError:
            raise ConfigError(f"{source}: bad value for {key}: {raw!r}") from None
    return out


def load_config(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    return parse_config_text(text, str(path))


def snr_range(start: float, stop: float, step: float) -> tuple[float, ...]:
    """Inclusive SNR grid from ``start`` to ``stop``."""
    if step <= 0:
        raise ConfigError("snr_step must be positive")
    if stop < start:
        raise ConfigError("snr_stop must be >= snr_start")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return tuple(round(start + k * step, 10) for k in range(n))


def build_configs(settings: dict) -> list[SimConfig]:
    """
    One validated :class:`SimConfig` per scheme selected by ``settings``.

    ``scheme = all`` expands to every scheme; the SNR grid comes from
    ``snr_db_list`` or, failing that, from ``snr_start/stop/step``.
    """
    settings = dict(settings)
    scheme = settings.pop("scheme", "sts")
    if scheme == "all":
        schemes = list(SCHEMES)
    elif scheme in SCHEMES:
        schemes = [scheme]
    else:
        raise ConfigError(f"scheme must be one of {SCHEMES + ('all',)}, got {scheme!r}")

    rng_keys = [k for k in ("snr_start", "snr_stop", "snr_step") if k in settings]
    rng_vals = {k: settings.pop(k) for k in rng_keys}
    if "snr_db_list" not in settings and rng_keys:
        default = SimConfig().snr_db_list
        settings["snr_db_list"] = snr_range(rng_vals.get("snr_start", default[0]),
                                            rng_vals.get("snr_stop", default[-1]),
                                            rng_vals.get("snr_step", 2.0))

    top, groups = {}, {g: {} for g in _GROUPS}
    for key, value in settings.items():
        group, _, name = key.partition(".")
        if name:
            groups[group][name] = value
        else:
            top[key] = value

    try:
        for g, cls in _GROUPS.items():
            if groups[g]:
                top[g] = replace(cls(), **groups[g])
        return [SimConfig(scheme=s, **top) for s in schemes]
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(str(e)) from None
