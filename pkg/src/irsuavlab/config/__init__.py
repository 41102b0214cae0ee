from irsuavlab.config.loader import ExperimentConfig, load_config, parse_flat, read_document, save_config
from irsuavlab.config.validate import validate_config_dict

__all__ = ["ExperimentConfig", "load_config", "parse_flat", "read_document", "save_config", "validate_config_dict"]
