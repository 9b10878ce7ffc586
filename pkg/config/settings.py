import json
import logging
import os

from dotenv import load_dotenv

CONFIG_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config.json")
REQUIRED_SECTIONS = ("logging", "integrator", "equivalence", "verify", "output")
CONTROL_KEYS = ("safety", "min_factor", "max_factor", "alpha", "beta", "min_step_fraction")


def load_config(path=None):
    """Read the JSON configuration; CONTACT_REDUCTION_CONFIG (environment or .env) overrides the default path."""
    load_dotenv()
    path = path or os.getenv("CONTACT_REDUCTION_CONFIG") or CONFIG_PATH
    with open(path, "r", encoding="utf-8") as config_file:
        config = json.load(config_file)
    for section in REQUIRED_SECTIONS:
        if section not in config:
            raise ValueError(f"Missing '{section}' section in {path}")
    return config


def setup_logging(config):
    settings = config["logging"]
    os.makedirs(settings.get("log_directory", "logs"), exist_ok=True)
    log_file = settings.get("log_file", "logs/contact_reduction.log")
    level = os.getenv("CONTACT_REDUCTION_LOG_LEVEL") or settings.get("log_level", "INFO")

    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format='%(asctime)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(log_file, encoding='utf-8'),
            logging.StreamHandler()
        ]
    )
    return logging.getLogger("contact_reduction")


def integrator_settings(config, **overrides):
    """Integrator section as the keyword settings used by the verify runners; ``None`` overrides are ignored."""
    section = dict(config["integrator"])
    settings = {
        "method": section.get("method", "dopri5"),
        "rel_tol": float(section["rel_tol"]),
        "abs_tol": float(section["abs_tol"]),
        "dt": float(section["dt"]),
        "samples": int(section.get("samples", 200)),
        "radicand_floor": float(section.get("radicand_floor", 1e-12)),
        "control": {key: float(section[key]) for key in CONTROL_KEYS if key in section},
    }
    if section.get("t_end") is not None:
        settings["t_end"] = float(section["t_end"])
    settings.update({k: v for k, v in overrides.items() if v is not None})
    return settings


def equivalence_settings(config, seed=None):
    section = dict(config["equivalence"])
    settings = {
        "samples": int(section.get("samples", 16)),
        "low": float(section.get("low", 0.1)),
        "high": float(section.get("high", 2.0)),
        "rtol": float(section.get("rtol", 1e-9)),
        "seed": int(section.get("seed", 0)),
    }
    if section.get("max_attempts") is not None:
        settings["max_attempts"] = int(section["max_attempts"])
    if seed is not None:
        settings["seed"] = int(seed)
    return settings


def tolerance(config, name):
    tolerances = config["verify"].get("tolerances", {})
    if name not in tolerances:
        raise ValueError(f"No tolerance named '{name}' in the verify section")
    return float(tolerances[name])


def verify_options(config, seed=None, **overrides):
    """Keyword arguments for VerificationHarness built from the config."""
    section = config["verify"]
    return {
        "settings": integrator_settings(config, **overrides),
        "equivalence": equivalence_settings(config, seed),
        "tolerances": {name: tolerance(config, name) for name in section.get("tolerances", {})},
        "horizons": dict(section.get("horizons", {})),
        "finite_difference_step": float(section.get("finite_difference_step", 1e-6)),
        "workers": int(section.get("workers", 1)),
    }
