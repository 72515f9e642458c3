from .config import AttackConfig, RunManifest, Settings
from .log import configure_logging
from .reports import read_json, write_csv, write_json

__all__ = [
    'AttackConfig',
    'RunManifest',
    'Settings',
    'configure_logging',
    'read_json',
    'write_csv',
    'write_json',
]
