import atexit
import pickle
from pathlib import Path

from loguru import logger

from ..config.settings import BKM_CACHE_DIR, CACHE_BACKEND


class DiskTables:
    """
    Pickled graded tables under a root directory, one file per key.

    Loaded and stored values are kept in memory, so engines filled after
    `build_nilpotent` returns are written out by `flush`, which also runs at
    interpreter exit.
    """

    def __init__(self, root_path: str):
        self.root = Path(root_path)
        self.root.mkdir(parents=True, exist_ok=True)
        self._live = {}
        atexit.register(self.flush)

    def _path(self, key):
        matrix_hash, cutoff = key
        return self.root / f"{matrix_hash[:32]}-N{cutoff}.pkl"

    def __contains__(self, key):
        return key in self._live or self._path(key).exists()

    def __getitem__(self, key):
        if key in self._live:
            return self._live[key]
        path = self._path(key)
        if not path.exists():
            raise KeyError(key)
        with open(path, "rb") as f:
            value = pickle.load(f)
        self._live[key] = value
        return value

    def __setitem__(self, key, value):
        self._live[key] = value
        self._write(key, value)

    def _write(self, key, value):
        with open(self._path(key), "wb") as f:
            pickle.dump(value, f, protocol=pickle.HIGHEST_PROTOCOL)

    def get(self, key, default=None):
        try:
            return self[key]
        except KeyError:
            return default

    def flush(self):
        if not self.root.exists():
            return
        for key, value in self._live.items():
            self._write(key, value)
        if self._live:
            logger.debug(f"wrote {len(self._live)} graded tables to {self.root}")


def open_tables(backend: str = CACHE_BACKEND, root_path: str = BKM_CACHE_DIR):
    if backend.upper() == "MEMORY":
        return {}
    elif backend.upper() == "DISK":
        logger.debug(f"graded-table cache at {root_path}")
        return DiskTables(root_path)
    else:
        raise ValueError(
            f"Unknown cache backend: {backend}. The valid backends are: 'memory', 'disk'"
        )


db_dict = open_tables()
