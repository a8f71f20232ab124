"""Over-the-air signaling on an OFDM grid: single-tone signaling versus Walsh, Gold and Zadoff-Chu signatures."""

from .channel import ChannelRealization, EpaProfile, add_awgn, apply_channel, epa_profile, make_epa_channel
from .detect import DetectionReport, detect_sequences, detect_sts
from .gf import GfElement, GfField, gf_arith, gf_pow, make_field
from .grid import OfdmParams, ResourceGrid, from_time_domain, make_grid, normalize_symbol_energy, to_time_domain
from .output import emit_csv, emit_plot
from .sequences import gold, walsh, zadoff_chu
from .sim import ConfigError, PointResult, SimConfig, SweepResult, run_sweep, run_trial, trial_rng
from .sts import StsConfig, build_generator, make_sts_config, sts_decode, sts_encode

__version__ = "0.1.0"

__all__ = [
    "ChannelRealization", "EpaProfile", "add_awgn", "apply_channel", "epa_profile", "make_epa_channel",
    "DetectionReport", "detect_sequences", "detect_sts",
    "GfElement", "GfField", "gf_arith", "gf_pow", "make_field",
    "OfdmParams", "ResourceGrid", "from_time_domain", "make_grid", "normalize_symbol_energy", "to_time_domain",
    "emit_csv", "emit_plot",
    "gold", "walsh", "zadoff_chu",
    "ConfigError", "PointResult", "SimConfig", "SweepResult", "run_sweep", "run_trial", "trial_rng",
    "StsConfig", "build_generator", "make_sts_config", "sts_decode", "sts_encode",
]
