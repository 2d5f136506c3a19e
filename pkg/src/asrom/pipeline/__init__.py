from .config import DEFAULTS, SCHEMA, StudyConfig, load_config
from .manifest import check_manifest_outputs, update_manifest
from .stages import cmd_evaluate, cmd_mesh, cmd_morph, cmd_train_as, cmd_train_rom
from .synthetic import REGISTRY as SYNTHETIC_REGISTRY
from .synthetic import synthetic_qoi

__all__ = [
    "DEFAULTS",
    "SCHEMA",
    "SYNTHETIC_REGISTRY",
    "StudyConfig",
    "check_manifest_outputs",
    "cmd_evaluate",
    "cmd_mesh",
    "cmd_morph",
    "cmd_train_as",
    "cmd_train_rom",
    "load_config",
    "synthetic_qoi",
    "update_manifest",
]
