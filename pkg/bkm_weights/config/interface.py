import os
from typing import Literal, Optional

from attrs import asdict, define, field, validators

from .settings import (
    BKM_CACHE_DIR,
    BUDGET_MB,
    CACHE_BACKEND,
    DEFAULT_CUTOFF_LARGE,
    DEFAULT_CUTOFF_RANK2,
    DEFAULT_CUTOFF_RANK5,
    HEISENBERG_CAP,
    KK_SEARCH_BUDGET,
    LOG_FILE,
    LOG_LEVEL,
    OUTPUT_FORMAT,
    THREADS,
)


class Base:
    def to_dict(self, drop_none=True):
        if drop_none:

            def custom_filter(attribute, value):
                return value is not None

            return asdict(self, filter=custom_filter)
        return asdict(self)

@define(slots=True)
class LogConfig(Base):
    level: str = 'WARNING'
    save_file: bool = False

    def convert_to_env(self, set_env=False):
        env_dict = {'LOG_LEVEL': self.level, 'LOG_FILE': str(self.save_file)}
        if set_env:
            os.environ.update(env_dict)
        return env_dict


@define(slots=True)
class CacheConfig(Base):
    # `backend`: MEMORY or DISK
    backend: str = 'MEMORY'
    root_path: str = './.bkm_cache'

    def convert_to_env(self, set_env=False):
        env_dict = {'CACHE_BACKEND': self.backend, 'BKM_CACHE_DIR': self.root_path}
        if set_env:
            os.environ.update(env_dict)
        return env_dict


@define(slots=True)
class EngineConfig(Base):
    budget_mb: int = 2048
    cutoff_rank2: int = 12
    cutoff_rank5: int = 8
    cutoff_large: int = 6
    # 0 means "same as the cutoff"
    heisenberg_cap: int = 0
    kk_search_budget: int = 200000
    threads: int = 1

    def convert_to_env(self, set_env=False):
        env_dict = {
            'BUDGET_MB': str(self.budget_mb),
            'DEFAULT_CUTOFF_RANK2': str(self.cutoff_rank2),
            'DEFAULT_CUTOFF_RANK5': str(self.cutoff_rank5),
            'DEFAULT_CUTOFF_LARGE': str(self.cutoff_large),
            'HEISENBERG_CAP': str(self.heisenberg_cap),
            'KK_SEARCH_BUDGET': str(self.kk_search_budget),
            'THREADS': str(self.threads),
        }
        if set_env:
            os.environ.update(env_dict)
        return env_dict


@define(slots=True)
class Config(Base):
    log: LogConfig = field(factory=LogConfig)
    cache: CacheConfig = field(factory=CacheConfig)
    engine: EngineConfig = field(factory=EngineConfig)
    output_format: str = 'json'

    def convert_to_env(self, set_env=False):
        env_dict = {}
        env_dict.update(self.log.convert_to_env())
        env_dict.update(self.cache.convert_to_env())
        env_dict.update(self.engine.convert_to_env())
        env_dict['OUTPUT_FORMAT'] = self.output_format

        if set_env:
            os.environ.update(env_dict)
        return env_dict

    def to_yaml_dict(self):
        """The layout read back by config/settings.py."""
        return {
            'log': self.log.to_dict(),
            'cache': self.cache.to_dict(),
            'engine': {
                'budget_mb': self.engine.budget_mb,
                'default_cutoff': {
                    'rank2': self.engine.cutoff_rank2,
                    'rank5': self.engine.cutoff_rank5,
                    'large': self.engine.cutoff_large,
                },
                'heisenberg_cap': self.engine.heisenberg_cap,
                'kk_search_budget': self.engine.kk_search_budget,
                'threads': self.engine.threads,
            },
            'output_format': self.output_format,
        }

    def come_from_env(self):
        self.log.level = LOG_LEVEL
        self.log.save_file = LOG_FILE
        self.cache.backend = CACHE_BACKEND
        self.cache.root_path = BKM_CACHE_DIR
        self.engine.budget_mb = BUDGET_MB
        self.engine.cutoff_rank2 = DEFAULT_CUTOFF_RANK2
        self.engine.cutoff_rank5 = DEFAULT_CUTOFF_RANK5
        self.engine.cutoff_large = DEFAULT_CUTOFF_LARGE
        self.engine.heisenberg_cap = HEISENBERG_CAP
        self.engine.kk_search_budget = KK_SEARCH_BUDGET
        self.engine.threads = THREADS
        self.output_format = OUTPUT_FORMAT
        return self


def _positive(instance, attribute, value):
    if value is not None and value < 1:
        raise ValueError(f"{attribute.name} must be >= 1, got {value}")


@define(slots=True, kw_only=True)
class RunConfig(Base):
    """Options shared by every CLI subcommand."""

    matrix: Optional[object] = None
    weight: Optional[object] = None
    cutoff: Optional[int] = field(default=None, validator=_positive)
    cap: Optional[int] = field(default=None, validator=_positive)
    format: Literal['json', 'table'] = field(
        default=OUTPUT_FORMAT, validator=validators.in_(('json', 'table'))
    )
    threads: int = field(default=THREADS, validator=_positive)
    budget_mb: int = field(default=BUDGET_MB, validator=_positive)
    oracle_fallback: bool = False
