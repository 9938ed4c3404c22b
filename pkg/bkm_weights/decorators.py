import sys
import time
from functools import wraps

from loguru import logger

from .errors import BkmError, InvalidInput


def log_elapsed(label=None, level="DEBUG"):
    """
    A decorator that logs the wall time of the wrapped call.

    Args:
        label (str, optional): The name shown in the log line. Defaults to the function name.
        level (str): The loguru level used for the line.
    """

    def decorator(func):
        name = label or func.__name__

        @wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                logger.log(level, f"{name} took {time.perf_counter() - start:.3f}s")

        return wrapper

    return decorator


def report_errors(func):
    """
    A decorator for CLI subcommands: a raised BkmError is printed as a JSON error
    object on stdout and turned into SystemExit with the error's exit code.

    Attribute validation errors raised while building the run configuration are
    reported as InvalidInput.
    """

    @wraps(func)
    def wrapper(*args, **kwargs):
        from .helper import json_dumps

        try:
            return func(*args, **kwargs)
        except BkmError as e:
            err = e
        except (ValueError, TypeError) as e:
            err = InvalidInput(str(e))
        logger.warning(f"{func.__name__} failed: {type(err).__name__}: {err.message}")
        sys.stdout.write(json_dumps(err.to_dict()).decode() + "\n")
        sys.stdout.flush()
        raise SystemExit(err.exit_code)

    return wrapper
