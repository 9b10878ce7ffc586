import os

from models.catalog import (
    CATALOG, build_model, catalog_names, damped_rotor, flrw_fr, flrw_general_lapse, kepler, kepler_coupled,
    kepler_with_energy, modified_kepler, pais_uhlenbeck, promoted_model,
)
from models.descriptor import ModelDescriptor, Reference
from models.errors import ModelError, ModelFileError
from models.model_file import load_model_file, parse_model, read_sections

MODEL_FILES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "files")


def load_model(name_or_path):
    """A catalogued model by name, otherwise a model file by path."""
    if name_or_path in CATALOG:
        return build_model(name_or_path)
    if os.path.exists(name_or_path):
        return load_model_file(name_or_path)
    raise ModelError(f"'{name_or_path}' is neither a catalogued model nor a model file")
