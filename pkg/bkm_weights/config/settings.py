import os
from pathlib import Path

import yaml

from ..helper import env2bool, env2int

config_file_path = Path(
    os.environ.get("BKM_CONFIG_FILE", "").strip() or "./bkm-weights-config.yaml"
)
if config_file_path.exists():
    with open(config_file_path) as file:
        config = yaml.safe_load(file)
else:
    config = {}

if not config:
    LOG_LEVEL = os.environ.get("LOG_LEVEL", "WARNING").strip().upper() or "WARNING"
    LOG_FILE = env2bool("LOG_FILE", False)

    CACHE_BACKEND = os.environ.get("CACHE_BACKEND", "MEMORY").strip() or "MEMORY"
    BKM_CACHE_DIR = os.environ.get("BKM_CACHE_DIR", "").strip() or "./.bkm_cache"

    BUDGET_MB = env2int("BUDGET_MB", 2048)
    DEFAULT_CUTOFF_RANK2 = env2int("DEFAULT_CUTOFF_RANK2", 12)
    DEFAULT_CUTOFF_RANK5 = env2int("DEFAULT_CUTOFF_RANK5", 8)
    DEFAULT_CUTOFF_LARGE = env2int("DEFAULT_CUTOFF_LARGE", 6)
    HEISENBERG_CAP = env2int("HEISENBERG_CAP", 0)
    KK_SEARCH_BUDGET = env2int("KK_SEARCH_BUDGET", 200000)
    THREADS = env2int("THREADS", 1)
    OUTPUT_FORMAT = os.environ.get("OUTPUT_FORMAT", "json").strip().lower() or "json"
else:
    _log = config.get("log", {})
    LOG_LEVEL = str(_log.get("level", "WARNING")).upper()
    LOG_FILE = _log.get("save_file", False)

    _cache = config.get("cache", {})
    CACHE_BACKEND = _cache.get("backend", "MEMORY")
    BKM_CACHE_DIR = os.environ.get("BKM_CACHE_DIR", "").strip() or _cache.get(
        "root_path", "./.bkm_cache"
    )

    _engine = config.get("engine", {})
    BUDGET_MB = int(_engine.get("budget_mb", 2048))
    _cutoff = _engine.get("default_cutoff", {})
    DEFAULT_CUTOFF_RANK2 = int(_cutoff.get("rank2", 12))
    DEFAULT_CUTOFF_RANK5 = int(_cutoff.get("rank5", 8))
    DEFAULT_CUTOFF_LARGE = int(_cutoff.get("large", 6))
    HEISENBERG_CAP = int(_engine.get("heisenberg_cap", 0))
    KK_SEARCH_BUDGET = int(_engine.get("kk_search_budget", 200000))
    THREADS = int(_engine.get("threads", 1))
    OUTPUT_FORMAT = str(config.get("output_format", "json")).lower()


def default_cutoff(rank: int) -> int:
    if rank <= 2:
        return DEFAULT_CUTOFF_RANK2
    if rank <= 5:
        return DEFAULT_CUTOFF_RANK5
    return DEFAULT_CUTOFF_LARGE
