"""Experiment configuration.

Defaults (2^18 sessions, N = 96) can be overridden through the
environment or a `.env` file:

    SASI_SEED, SASI_SESSION_BUDGET, SASI_MODULUS, SASI_VARIANT,
    SASI_LOG_LEVEL, SASI_WORKERS, SOURCE_DATE_EPOCH
"""

import os
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Optional, Union

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field

from protocol.nonce import MASK64
from protocol.word96 import RotationVariant

DEFAULT_SESSION_BUDGET = 2**18
DEFAULT_MODULUS = 96

ENV_VARS = {
    'seed': 'SASI_SEED',
    'session_budget': 'SASI_SESSION_BUDGET',
    'modulus': 'SASI_MODULUS',
    'variant': 'SASI_VARIANT',
    'log_level': 'SASI_LOG_LEVEL',
    'workers': 'SASI_WORKERS',
    'source_date_epoch': 'SOURCE_DATE_EPOCH',
}


class AttackConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    modulus: int = Field(DEFAULT_MODULUS, ge=2)
    session_budget: int = Field(DEFAULT_SESSION_BUDGET, ge=1)
    variant: RotationVariant = RotationVariant.MODULAR
    seed: int = Field(0, ge=0, le=MASK64)


class Settings(BaseModel):
    seed: int = Field(0, ge=0, le=MASK64)
    session_budget: int = Field(DEFAULT_SESSION_BUDGET, ge=1)
    modulus: int = Field(DEFAULT_MODULUS, ge=2)
    variant: RotationVariant = RotationVariant.MODULAR
    log_level: str = 'INFO'
    workers: int = Field(1, ge=1)
    source_date_epoch: Optional[int] = None

    @classmethod
    def from_env(cls, env_file: Optional[Union[str, Path]] = None) -> "Settings":
        """Settings from the process environment, after loading a .env file"""
        load_dotenv(env_file)
        values = {
            field: os.environ[var]
            for field, var in ENV_VARS.items()
            if os.environ.get(var)
        }
        return cls(**values)

    def attack_config(self, **overrides) -> AttackConfig:
        values = {
            'modulus': self.modulus,
            'session_budget': self.session_budget,
            'variant': self.variant,
            'seed': self.seed,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return AttackConfig(**values)


class RunManifest(BaseModel):
    """Everything needed to rerun the command that produced a report"""

    command: str
    seed: Optional[int] = None
    variant: Optional[RotationVariant] = None
    modulus: Optional[int] = None
    budget: Optional[int] = None
    outputs: dict[str, str] = Field(default_factory=dict)
    parameters: dict[str, Any] = Field(default_factory=dict)
    timestamp: str

    @classmethod
    def create(cls, command: str, settings: Settings, **fields) -> "RunManifest":
        return cls(command=command, timestamp=run_timestamp(settings), **fields)


def run_timestamp(settings: Settings) -> str:
    # without SOURCE_DATE_EPOCH reports differ between reruns by timestamp
    if settings.source_date_epoch is not None:
        moment = datetime.fromtimestamp(settings.source_date_epoch, tz=timezone.utc)
    else:
        moment = datetime.now(timezone.utc)
    return moment.isoformat(timespec='seconds')
