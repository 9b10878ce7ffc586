from config.settings import (
    CONFIG_PATH, equivalence_settings, integrator_settings, load_config, setup_logging, tolerance, verify_options,
)
